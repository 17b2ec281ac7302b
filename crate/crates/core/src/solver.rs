//! Finite-difference eigensolver for the V = 0 deformed well.
//!
//! The default path works in the logarithmic coordinate s = ln(1 + γx)/γ,
//! where the modified derivative has constant coefficients: the similarity
//! transform χ = √(1 + γx)·φ turns the stationary problem into a plain
//! Dirichlet Laplacian on [0, s_max], i.e. a symmetric tridiagonal
//! eigenproblem with textbook O(h²) convergence. A second, independent path
//! discretizes the same kinetic operator directly on the x-grid in
//! conservative (divergence) form; the two must agree within their combined
//! discretization error.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::grid::{Coordinate, Grid};
use crate::operators::OperatorMatrix;
use crate::params::PhysicalParams;
use crate::tridiag::eigen_symmetric_tridiagonal;
use crate::wavefunction::WaveFunction;

/// Eigenpairs of the discretized well with convergence metadata.
#[derive(Debug, Clone)]
pub struct EigenSolution {
    /// Strictly increasing energies, lowest first.
    pub energies: Vec<f64>,
    /// Quadrature-normalized states (unit ∫|φ|²dx), sign-fixed.
    pub states: Vec<WaveFunction>,
    pub grid: Grid,
    /// Richardson-extrapolated energies, when a refinement was attached.
    pub richardson_estimate: Option<Vec<f64>>,
    /// Median empirical convergence order, when a refinement was attached.
    pub convergence_order: Option<f64>,
}

fn validate_solve_args(n_points: usize, k: usize) -> Result<()> {
    if n_points < 64 {
        return Err(Error::InvalidParams(format!(
            "solver grids need at least 64 points, got {n_points}"
        )));
    }
    if k < 1 || k > n_points / 4 {
        return Err(Error::InvalidParams(format!(
            "eigenpair count {k} must lie in [1, n_points/4 = {}]",
            n_points / 4
        )));
    }
    Ok(())
}

/// Lowest `k` eigenpairs via the logarithmic-coordinate path.
pub fn solve_well(params: &PhysicalParams, n_points: usize, k: usize) -> Result<EigenSolution> {
    validate_solve_args(n_points, k)?;
    let grid = Grid::deformed(params, n_points)?;
    let h = grid.spacing();
    let m = grid.n_interior();
    let kin = params.hbar * params.hbar / (2.0 * params.mass * h * h);
    let diag = vec![2.0 * kin; m];
    let offdiag = vec![-kin; m - 1];
    let (energies, vectors) = eigen_symmetric_tridiagonal(&diag, &offdiag, k)?;

    // map χ back to φ = e^{-γs/2} χ and normalize in the x measure
    let gamma = params.gamma;
    let mut states = Vec::with_capacity(k);
    for v in vectors {
        let mut samples = vec![Complex64::new(0.0, 0.0); n_points];
        for (j, &val) in v.iter().enumerate() {
            let s = grid.points()[j + 1];
            samples[j + 1] = Complex64::new(val * (-0.5 * gamma * s).exp(), 0.0);
        }
        let weights: Vec<f64> = grid.points().iter().map(|&s| (gamma * s).exp()).collect();
        let wf = WaveFunction::with_weights(samples, grid.clone(), weights)?.normalized()?;
        states.push(wf);
    }

    Ok(EigenSolution { energies, states, grid, richardson_estimate: None, convergence_order: None })
}

/// Coefficients of the conservative x-grid discretization of the kinetic
/// operator `-ħ²/2m·√f·d/dx(f·d/dx(√f·))` with half-node sampled `f`:
/// symmetric, tridiagonal, free of the even/odd decoupling a
/// centered-difference product would introduce.
fn divergence_form_coefficients(params: &PhysicalParams, grid: &Grid) -> (Vec<f64>, Vec<f64>) {
    let h = grid.spacing();
    let m = grid.n_interior();
    let xs = grid.interior();
    let kin = params.hbar * params.hbar / (2.0 * params.mass * h * h);
    let f = |x: f64| params.stretch(x);
    let mut diag = Vec::with_capacity(m);
    let mut offdiag = Vec::with_capacity(m - 1);
    for (i, &x) in xs.iter().enumerate() {
        diag.push(kin * f(x) * (f(x + 0.5 * h) + f(x - 0.5 * h)));
        if i + 1 < m {
            offdiag.push(-kin * (f(x) * f(xs[i + 1])).sqrt() * f(x + 0.5 * h));
        }
    }
    (diag, offdiag)
}

/// The conservative tridiagonal well Hamiltonian as an operator matrix;
/// same continuum limit as the P†P product form, but with adjacent-node
/// coupling (single-frequency beats, tridiagonal propagation solves).
pub fn well_hamiltonian_tridiagonal(
    params: &PhysicalParams,
    grid: &Grid,
) -> Result<OperatorMatrix> {
    if grid.coordinate() != Coordinate::PhysicalX {
        return Err(Error::Grid("the divergence-form Hamiltonian expects an x-grid".into()));
    }
    let (diag, offdiag) = divergence_form_coefficients(params, grid);
    let mut op = OperatorMatrix::zeros(grid.clone(), 1)?;
    for (i, &d) in diag.iter().enumerate() {
        op.set(i, i, Complex64::new(d, 0.0));
        if i + 1 < diag.len() {
            op.set(i, i + 1, Complex64::new(offdiag[i], 0.0));
            op.set(i + 1, i, Complex64::new(offdiag[i], 0.0));
        }
    }
    Ok(op)
}

/// Lowest `k` eigenpairs via the direct x-grid path.
pub fn solve_well_xgrid(
    params: &PhysicalParams,
    n_points: usize,
    k: usize,
) -> Result<EigenSolution> {
    validate_solve_args(n_points, k)?;
    let grid = Grid::physical(params, n_points)?;
    let (diag, offdiag) = divergence_form_coefficients(params, &grid);
    let (energies, vectors) = eigen_symmetric_tridiagonal(&diag, &offdiag, k)?;

    let mut states = Vec::with_capacity(k);
    for v in vectors {
        let mut samples = vec![Complex64::new(0.0, 0.0); n_points];
        for (j, &val) in v.iter().enumerate() {
            samples[j + 1] = Complex64::new(val, 0.0);
        }
        let wf = WaveFunction::new(samples, grid.clone())?.normalized()?;
        states.push(wf);
    }

    Ok(EigenSolution { energies, states, grid, richardson_estimate: None, convergence_order: None })
}

/// Richardson extrapolation of two solutions with halved spacing.
#[derive(Debug, Clone)]
pub struct Refined {
    /// Per-level `(4·E_fine − E_coarse)/3`.
    pub energies: Vec<f64>,
    /// Per-level `log₂((E_coarse − exact)/(E_fine − exact))` when reference
    /// values were supplied.
    pub empirical_orders: Option<Vec<f64>>,
}

/// Combine a coarse and a fine solution (spacing ratio exactly 2) assuming
/// O(h²) errors; optionally measure the observed order against reference
/// energies.
pub fn richardson_refine(
    coarse: &EigenSolution,
    fine: &EigenSolution,
    exact: Option<&[f64]>,
) -> Result<Refined> {
    if coarse.grid.coordinate() != fine.grid.coordinate() {
        return Err(Error::Grid("refinement grids use different coordinates".into()));
    }
    if fine.grid.n_points() != 2 * coarse.grid.n_points() - 1 {
        return Err(Error::Grid(format!(
            "fine grid must halve the spacing: got {} and {} points",
            coarse.grid.n_points(),
            fine.grid.n_points()
        )));
    }
    let k = coarse.energies.len().min(fine.energies.len());
    let energies: Vec<f64> =
        (0..k).map(|i| (4.0 * fine.energies[i] - coarse.energies[i]) / 3.0).collect();
    let empirical_orders = exact.map(|ex| {
        (0..k.min(ex.len()))
            .map(|i| {
                let ec = (coarse.energies[i] - ex[i]).abs();
                let ef = (fine.energies[i] - ex[i]).abs();
                (ec / ef).log2()
            })
            .collect()
    });
    Ok(Refined { energies, empirical_orders })
}

/// Solve at `n_points` and at the doubled-spacing companion grid, attach the
/// Richardson estimate and a self-contained order measurement (using the
/// extrapolated values as reference) to the fine solution.
pub fn solve_well_refined(
    params: &PhysicalParams,
    n_points: usize,
    k: usize,
) -> Result<EigenSolution> {
    if n_points.is_multiple_of(2) {
        return Err(Error::InvalidParams(
            "refined solves need an odd point count so the coarse grid nests".into(),
        ));
    }
    let coarse = solve_well(params, (n_points - 1) / 2 + 1, k)?;
    let mut fine = solve_well(params, n_points, k)?;
    let refined = richardson_refine(&coarse, &fine, None)?;
    let orders: Vec<f64> = (0..k)
        .map(|i| {
            let ec = (coarse.energies[i] - refined.energies[i]).abs();
            let ef = (fine.energies[i] - refined.energies[i]).abs();
            (ec / ef).log2()
        })
        .collect();
    fine.convergence_order = Some(median(&orders));
    fine.richardson_estimate = Some(refined.energies);
    Ok(fine)
}

fn median(values: &[f64]) -> f64 {
    let mut v = values.to_vec();
    v.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let n = v.len();
    if n % 2 == 1 {
        v[n / 2]
    } else {
        0.5 * (v[n / 2 - 1] + v[n / 2])
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::observables::integrate;
    use crate::well::reference_energy_ref3;
    use approx::assert_relative_eq;
    use std::f64::consts::PI;

    fn natural(gt: f64) -> PhysicalParams {
        PhysicalParams::natural(gt).unwrap()
    }

    #[test]
    fn classical_box_energies() {
        let p = natural(0.0);
        let sol = solve_well_refined(&p, 2001, 3).unwrap();
        let refined = sol.richardson_estimate.as_ref().unwrap();
        for (i, e) in refined.iter().enumerate() {
            let n = (i + 1) as f64;
            assert_relative_eq!(*e, n * n * PI * PI / 2.0, max_relative = 1e-9);
        }
    }

    #[test]
    fn deformed_well_spectrum_matches_the_continuum_limit() {
        // The s-path operator is the similarity-transformed well Hamiltonian;
        // its spectrum converges to γ²n²π²ħ²/(2m ln²(1+γL)) — the closed-form
        // spectrum with the constant offset removed.
        let p = natural(1.0);
        let sol = solve_well_refined(&p, 4001, 3).unwrap();
        let refined = sol.richardson_estimate.as_ref().unwrap();
        let frozen = [10.27114422761191, 41.08457691044764, 92.44029804850719];
        for (e, want) in refined.iter().zip(frozen) {
            assert_relative_eq!(*e, want, max_relative = 1e-8);
        }
        for (n, e) in refined.iter().enumerate() {
            let reference = reference_energy_ref3(n as u32 + 1, &p).unwrap();
            assert_relative_eq!(*e, reference, max_relative = 1e-8);
        }
        assert!(sol.convergence_order.unwrap() > 1.8);
        assert!(sol.convergence_order.unwrap() < 2.2);
    }

    #[test]
    fn the_two_paths_agree() {
        for &gt in &[-0.5, 1.0, 5.0] {
            let p = natural(gt);
            let a = solve_well(&p, 4001, 3).unwrap();
            let b = solve_well_xgrid(&p, 4001, 3).unwrap();
            for (ea, eb) in a.energies.iter().zip(&b.energies) {
                assert_relative_eq!(ea, eb, max_relative = 1e-5);
            }
        }
    }

    #[test]
    fn states_are_orthonormal_under_quadrature() {
        let p = natural(1.0);
        let sol = solve_well(&p, 8001, 4).unwrap();
        let h = sol.grid.spacing();
        for i in 0..4 {
            assert_relative_eq!(sol.states[i].norm_sq(), 1.0, max_relative = 1e-10);
            for j in 0..i {
                let overlap: Vec<f64> = sol.states[i]
                    .samples()
                    .iter()
                    .zip(sol.states[j].samples())
                    .zip(sol.states[i].weights())
                    .map(|((a, b), &w)| (a.conj() * b).re * w)
                    .collect();
                let v = integrate(&overlap, h).unwrap();
                assert!(v.abs() <= 1e-8, "overlap ({i},{j}) = {v}");
            }
        }
        // energies strictly increasing
        for w in sol.energies.windows(2) {
            assert!(w[0] < w[1]);
        }
    }

    #[test]
    fn ground_state_matches_the_transformed_sine_profile() {
        // φ₁(x) ∝ (1+γx)^{-1/2}·sin(π·ln(1+γx)/ln(1+γL)), the continuum
        // ground state of the discretized operator.
        let p = natural(1.0);
        let sol = solve_well(&p, 4001, 1).unwrap();
        let state = &sol.states[0];
        let log_u = 2.0f64.ln();
        let amp = (2.0 * p.gamma / log_u).sqrt();
        let mut worst: f64 = 0.0;
        for (j, &s) in sol.grid.points().iter().enumerate() {
            let u = (p.gamma * s).exp();
            let x = (u - 1.0) / p.gamma;
            let expect = amp / u.sqrt() * (PI * (p.gamma * x).ln_1p() / log_u).sin();
            worst = worst.max((state.samples()[j].re - expect).abs());
        }
        assert!(worst <= 1e-5, "profile deviation {worst}");
    }

    #[test]
    fn xgrid_states_match_the_same_profile() {
        let p = natural(1.0);
        let sol = solve_well_xgrid(&p, 4001, 1).unwrap();
        let state = &sol.states[0];
        let log_u = 2.0f64.ln();
        let amp = (2.0 * p.gamma / log_u).sqrt();
        let mut worst: f64 = 0.0;
        for (j, &x) in sol.grid.points().iter().enumerate() {
            let u = p.stretch(x);
            let expect = amp / u.sqrt() * (PI * (p.gamma * x).ln_1p() / log_u).sin();
            worst = worst.max((state.samples()[j].re - expect).abs());
        }
        assert!(worst <= 1e-4, "profile deviation {worst}");
    }

    #[test]
    fn refinement_reference_cases() {
        // synthetic exact-h² error: extrapolation removes it entirely
        let p = natural(0.5);
        let coarse = solve_well(&p, 501, 2).unwrap();
        let fine = solve_well(&p, 1001, 2).unwrap();
        let mut synthetic_coarse = coarse.clone();
        let mut synthetic_fine = fine.clone();
        synthetic_coarse.energies = vec![1.0 + 0.04, 4.0 + 0.04];
        synthetic_fine.energies = vec![1.0 + 0.01, 4.0 + 0.01];
        let r = richardson_refine(&synthetic_coarse, &synthetic_fine, None).unwrap();
        assert_relative_eq!(r.energies[0], 1.0, max_relative = 1e-14);
        assert_relative_eq!(r.energies[1], 4.0, max_relative = 1e-14);

        // real refinement at γ̃ = 1: error vs the continuum limit below 1e-8,
        // empirical order ≈ 2
        let p1 = natural(1.0);
        let c = solve_well(&p1, 2001, 5).unwrap();
        let f = solve_well(&p1, 4001, 5).unwrap();
        let exact: Vec<f64> = (1..=5).map(|n| reference_energy_ref3(n, &p1).unwrap()).collect();
        let r = richardson_refine(&c, &f, Some(&exact)).unwrap();
        for (e, x) in r.energies.iter().zip(&exact) {
            assert!(((e - x) / x).abs() < 1e-8, "refined {e} vs exact {x}");
        }
        for o in r.empirical_orders.unwrap() {
            assert!((1.9..=2.1).contains(&o), "order {o}");
        }

        // grid-ratio mismatch is rejected
        let bad = solve_well(&p1, 1501, 2).unwrap();
        assert!(richardson_refine(&c, &bad, None).is_err());
    }

    #[test]
    fn argument_validation() {
        let p = natural(1.0);
        assert!(solve_well(&p, 32, 1).is_err());
        assert!(solve_well(&p, 101, 0).is_err());
        assert!(solve_well(&p, 101, 26).is_err());
        assert!(solve_well_refined(&p, 2000, 1).is_err());
    }
}
