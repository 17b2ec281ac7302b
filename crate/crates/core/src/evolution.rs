//! Crank–Nicolson time propagation.
//!
//! The step map `(I + i·dt·H/2ħ)⁻¹(I − i·dt·H/2ħ)` is exactly unitary when
//! H is Hermitian, so any norm drift beyond roundoff indicts the operator,
//! not the integrator. Norms and energies are tracked in the uniform-weight
//! discrete inner product, the one the Cayley map preserves exactly.

use num_complex::Complex64;

use crate::banded::BandedLu;
use crate::error::{Error, Result};
use crate::operators::OperatorMatrix;
use crate::params::PhysicalParams;
use crate::wavefunction::WaveFunction;

/// Per-step diagnostics of one propagation run.
#[derive(Debug, Clone)]
pub struct PropagationRun {
    pub dt: f64,
    pub steps: usize,
    /// h·Σ|ψ|² after 0, 1, …, `steps` steps; starts at 1.
    pub norm_history: Vec<f64>,
    /// ⟨ψ|H|ψ⟩ (real part) alongside the norms.
    pub energy_history: Vec<f64>,
    /// ⟨ψ|x|ψ⟩/⟨ψ|ψ⟩ alongside the norms.
    pub position_history: Vec<f64>,
}

impl PropagationRun {
    pub fn max_norm_drift(&self) -> f64 {
        self.norm_history.iter().map(|n| (n - 1.0).abs()).fold(0.0, f64::max)
    }

    pub fn max_energy_drift(&self) -> f64 {
        let e0 = self.energy_history[0];
        self.energy_history.iter().map(|e| ((e - e0) / e0).abs()).fold(0.0, f64::max)
    }
}

/// Propagate `psi0` under `h_op` for `steps` Crank–Nicolson steps of size
/// `dt`. The input is normalized first, so `norm_history[0] = 1`; a norm
/// above 10 aborts (non-Hermitian runaway guard).
pub fn propagate(
    psi0: &WaveFunction,
    h_op: &OperatorMatrix,
    params: &PhysicalParams,
    dt: f64,
    steps: usize,
) -> Result<PropagationRun> {
    if dt <= 0.0 || !dt.is_finite() {
        return Err(Error::InvalidParams(format!("time step must be positive, got {dt}")));
    }
    let grid = psi0.grid();
    let n = grid.n_interior();
    if h_op.n() != n {
        return Err(Error::Grid("Hamiltonian and state grids do not match".into()));
    }
    let h = grid.spacing();
    let xs = grid.interior();

    let mut psi: Vec<Complex64> = psi0.interior().to_vec();
    let norm0 = (h * psi.iter().map(|c| c.norm_sqr()).sum::<f64>()).sqrt();
    if norm0 == 0.0 {
        return Err(Error::Domain("cannot propagate a null state".into()));
    }
    for c in psi.iter_mut() {
        *c /= norm0;
    }

    let alpha = Complex64::new(0.0, dt / (2.0 * params.hbar));
    let bw = h_op.half_bandwidth();
    let lu = BandedLu::factor(n, bw, bw, |i, j| {
        let delta = if i == j { Complex64::new(1.0, 0.0) } else { Complex64::new(0.0, 0.0) };
        delta + alpha * h_op.get(i, j)
    })?;

    let record = |psi: &[Complex64]| -> (f64, f64, f64) {
        let norm = h * psi.iter().map(|c| c.norm_sqr()).sum::<f64>();
        let applied = h_op.matvec(psi);
        let energy: f64 = h * psi.iter().zip(&applied).map(|(c, a)| (c.conj() * a).re).sum::<f64>();
        let pos: f64 = h * psi.iter().zip(xs).map(|(c, &x)| c.norm_sqr() * x).sum::<f64>();
        (norm, energy, pos / norm)
    };

    let mut norm_history = Vec::with_capacity(steps + 1);
    let mut energy_history = Vec::with_capacity(steps + 1);
    let mut position_history = Vec::with_capacity(steps + 1);
    let (n0, e0, x0) = record(&psi);
    norm_history.push(n0);
    energy_history.push(e0);
    position_history.push(x0);

    for _ in 0..steps {
        // rhs = (I - alpha H) psi
        let applied = h_op.matvec(&psi);
        let mut rhs: Vec<Complex64> =
            psi.iter().zip(&applied).map(|(c, a)| c - alpha * a).collect();
        lu.solve_in_place(&mut rhs);
        psi = rhs;
        let (nk, ek, xk) = record(&psi);
        if !nk.is_finite() || nk > 10.0 {
            return Err(Error::Diverged(nk));
        }
        norm_history.push(nk);
        energy_history.push(ek);
        position_history.push(xk);
    }

    Ok(PropagationRun { dt, steps, norm_history, energy_history, position_history })
}

/// dt with `‖H‖·dt/ħ = budget`, the scale used by the unitarity checks.
pub fn stable_dt(h_op: &OperatorMatrix, params: &PhysicalParams, budget: f64) -> f64 {
    budget * params.hbar / h_op.inf_norm()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::Grid;
    use crate::operators::{build_hamiltonian, build_hamiltonian_nonhermitian};
    use crate::solver::{solve_well_xgrid, well_hamiltonian_tridiagonal};
    use crate::well::reference_energy_ref3;
    use approx::assert_relative_eq;

    fn natural(gt: f64) -> PhysicalParams {
        PhysicalParams::natural(gt).unwrap()
    }

    fn well_hamiltonian(p: &PhysicalParams, n: usize) -> (Grid, OperatorMatrix) {
        let grid = Grid::physical(p, n).unwrap();
        let h = build_hamiltonian(&grid, p, &vec![0.0; grid.n_interior()]).unwrap();
        (grid, h)
    }

    #[test]
    fn eigenstate_keeps_norm_and_energy() {
        let p = natural(1.0);
        let n = 257;
        let sol = solve_well_xgrid(&p, n, 1).unwrap();
        let (_, h_op) = well_hamiltonian(&p, n);
        let dt = stable_dt(&h_op, &p, 0.1);
        let run = propagate(&sol.states[0], &h_op, &p, dt, 1000).unwrap();
        assert!((run.norm_history[0] - 1.0).abs() <= 1e-12);
        assert!(run.max_norm_drift() <= 1e-11, "norm drift {}", run.max_norm_drift());
        assert!(run.max_energy_drift() <= 1e-10, "energy drift {}", run.max_energy_drift());
    }

    #[test]
    fn superposition_beats_at_the_level_splitting() {
        let p = natural(1.0);
        let n = 257;
        let sol = solve_well_xgrid(&p, n, 2).unwrap();
        let grid = sol.grid.clone();
        let mixed: Vec<Complex64> = sol.states[0]
            .samples()
            .iter()
            .zip(sol.states[1].samples())
            .map(|(a, b)| (a + b) / 2.0f64.sqrt())
            .collect();
        let psi0 = WaveFunction::new(mixed, grid.clone()).unwrap();
        let h_op = well_hamiltonian_tridiagonal(&p, &grid).unwrap();

        // period from the closed-form splitting (offset-free: the constant
        // cancels in E2 - E1)
        let gap = reference_energy_ref3(2, &p).unwrap() - reference_energy_ref3(1, &p).unwrap();
        let period = 2.0 * std::f64::consts::PI * p.hbar / gap;
        let steps = 4000usize;
        let dt = 2.2 * period / steps as f64;
        let run = propagate(&psi0, &h_op, &p, dt, steps).unwrap();

        // measure the period between upward mean-crossings of <x>(t)
        let xs = &run.position_history;
        let mean = xs.iter().sum::<f64>() / xs.len() as f64;
        let mut crossings = Vec::new();
        for i in 1..xs.len() {
            if xs[i - 1] < mean && xs[i] >= mean {
                let frac = (mean - xs[i - 1]) / (xs[i] - xs[i - 1]);
                crossings.push((i as f64 - 1.0 + frac) * dt);
            }
        }
        assert!(crossings.len() >= 2, "not enough oscillations captured");
        let measured = crossings[1] - crossings[0];
        assert_relative_eq!(measured, period, max_relative = 0.01);
    }

    #[test]
    fn nonhermitian_hamiltonian_leaks_norm() {
        let p = natural(1.0);
        let n = 257;
        let grid = Grid::physical(&p, n).unwrap();
        let h_nh =
            build_hamiltonian_nonhermitian(&grid, &p, &vec![0.0; grid.n_interior()]).unwrap();
        let h_h = build_hamiltonian(&grid, &p, &vec![0.0; grid.n_interior()]).unwrap();
        let samples: Vec<f64> = grid
            .points()
            .iter()
            .map(|&x| {
                (std::f64::consts::PI * x).sin() + 0.5 * (2.0 * std::f64::consts::PI * x).sin()
            })
            .collect();
        let psi0 = WaveFunction::from_real(&samples, grid).unwrap();
        let dt = stable_dt(&h_h, &p, 0.1);
        let run = propagate(&psi0, &h_nh, &p, dt, 1000).unwrap();
        assert!(run.max_norm_drift() > 1e-6, "drift only {}", run.max_norm_drift());
    }

    #[test]
    fn divergence_guard_trips_on_runaway_growth() {
        use crate::operators::OperatorMatrix;
        let p = natural(0.0);
        let grid = Grid::physical(&p, 101).unwrap();
        // anti-Hermitian diagonal i·kappa: Cayley step amplifies by
        // (1 + alpha kappa)/(1 - alpha kappa) per step
        let mut h_op = OperatorMatrix::zeros(grid.clone(), 0).unwrap();
        for i in 0..h_op.n() {
            h_op.set(i, i, Complex64::new(0.0, 1.0));
        }
        let samples: Vec<f64> = grid.points().iter().map(|&x| x * (1.0 - x)).collect();
        let psi0 = WaveFunction::from_real(&samples, grid).unwrap();
        let r = propagate(&psi0, &h_op, &p, 1.8, 400);
        assert!(matches!(r, Err(Error::Diverged(_))), "got {r:?}");
    }

    #[test]
    fn rejects_bad_inputs() {
        let p = natural(1.0);
        let (grid, h_op) = well_hamiltonian(&p, 101);
        let psi = WaveFunction::from_real(&vec![0.0; grid.n_points()], grid.clone()).unwrap();
        assert!(propagate(&psi, &h_op, &p, 1e-3, 5).is_err()); // null state
        let ok: Vec<f64> = grid.points().iter().map(|&x| x * (1.0 - x)).collect();
        let psi = WaveFunction::from_real(&ok, grid).unwrap();
        assert!(propagate(&psi, &h_op, &p, -1.0, 5).is_err());
        let (other_grid, _) = well_hamiltonian(&p, 129);
        let mismatched = WaveFunction::from_real(
            &other_grid.points().iter().map(|&x| x * (1.0 - x)).collect::<Vec<_>>(),
            other_grid,
        )
        .unwrap();
        assert!(propagate(&mismatched, &h_op, &p, 1e-3, 5).is_err());
    }
}
