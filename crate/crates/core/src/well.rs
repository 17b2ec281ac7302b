//! Closed-form solutions of the V = 0 infinite well in the deformed
//! formalism: reduced ODE coefficients, general solution, quantized
//! eigenfunctions, normalization, wavenumbers, spectrum and the
//! square-integrability bound.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::params::PhysicalParams;

use std::f64::consts::PI;

/// One quantized level: normalization, wavenumber and energies.
#[derive(Debug, Clone)]
pub struct WellSolution {
    pub n: u32,
    pub params: PhysicalParams,
    /// |A_n|², dimension 1/length.
    pub a_n_sq: f64,
    /// k_n², dimension 1/length².
    pub k_n_sq: f64,
    /// Level energy E_n.
    pub energy: f64,
    /// Shifted energy Ẽ_n = E_n + ħ²γ²/(8m).
    pub energy_shifted: f64,
}

impl WellSolution {
    pub fn new(n: u32, params: &PhysicalParams) -> Result<Self> {
        check_n(n)?;
        let shift = params.hbar * params.hbar * params.gamma * params.gamma / (8.0 * params.mass);
        Ok(Self {
            n,
            params: *params,
            a_n_sq: normalization_sq(n, params)?,
            k_n_sq: wavenumber_sq(n, params)?,
            energy: energy(n, params)?,
            energy_shifted: energy(n, params)? + shift,
        })
    }
}

fn check_n(n: u32) -> Result<()> {
    if n < 1 {
        return Err(Error::InvalidParams("quantum number n must be >= 1".into()));
    }
    Ok(())
}

/// Coefficients (a, b) of the reduced Euler equation
/// `u²φ'' + a·u·φ' + b·φ = 0` in u = 1 + γx, for a state of energy E:
/// a = 3 and b = 2m(E + ħ²γ²/8m)/(ħ²γ²).
///
/// Undefined at γ = 0, where callers use the classical-box limit instead.
pub fn ode_coefficients(params: &PhysicalParams, energy: f64) -> Result<(f64, f64)> {
    if params.gamma == 0.0 {
        return Err(Error::Domain("reduced ODE coefficients are undefined at gamma = 0".into()));
    }
    let h2 = params.hbar * params.hbar;
    let g2 = params.gamma * params.gamma;
    let shifted = energy + h2 * g2 / (8.0 * params.mass);
    Ok((3.0, 2.0 * params.mass * shifted / (h2 * g2)))
}

/// General solution `(1/u)·exp(±i·√(k²/γ² − 1)·ln u)` of the reduced Euler
/// equation with a = 3; `sign` selects the phase branch.
pub fn general_solution(u: f64, k_sq_over_gamma_sq: f64, sign: i8) -> Result<Complex64> {
    if u <= 0.0 {
        return Err(Error::Domain(format!("general solution requires u > 0, got {u}")));
    }
    if k_sq_over_gamma_sq <= 1.0 {
        return Err(Error::Domain(format!(
            "square-integrable oscillatory branch requires k²/γ² > 1, got {k_sq_over_gamma_sq}"
        )));
    }
    let kappa = (k_sq_over_gamma_sq - 1.0).sqrt();
    let phase = (if sign >= 0 { 1.0 } else { -1.0 }) * kappa * u.ln();
    Ok(Complex64::new(0.0, phase).exp() / u)
}

/// Level eigenfunction
/// `φ_n(x) = A_n/(1 + γx) · sin(nπ · ln(1 + γx)/ln(1 + γL))` on (0, L),
/// zero outside; A_n is the positive root of [`normalization_sq`].
///
/// Reduces to `√(2/L)·sin(nπx/L)` through the classical branch.
pub fn eigenfunction(n: u32, x: f64, params: &PhysicalParams) -> Result<f64> {
    check_n(n)?;
    if x <= 0.0 || x >= params.length {
        // walls and beyond; endpoint zeros are exact
        return Ok(0.0);
    }
    let amp = normalization_sq(n, params)?.sqrt();
    if params.is_classical() {
        return Ok(amp * (n as f64 * PI * x / params.length).sin());
    }
    let u = params.stretch(x);
    if u <= 0.0 {
        return Err(Error::Domain(format!("1 + gamma*x = {u} <= 0 inside the well")));
    }
    let ratio = (params.gamma * x).ln_1p() / params.log_stretch_at_l();
    Ok(amp / u * (n as f64 * PI * ratio).sin())
}

/// Squared normalization constant
/// `|A_n|² = 2/L + 2γ + (1 + γL)·ln²(1 + γL)/(2n²π²L)`,
/// reducing to 2/L at γ = 0.
pub fn normalization_sq(n: u32, params: &PhysicalParams) -> Result<f64> {
    check_n(n)?;
    let l = params.length;
    if params.is_classical() {
        return Ok(2.0 / l);
    }
    let log_u = params.log_stretch_at_l();
    let nf = n as f64;
    Ok(2.0 / l
        + 2.0 * params.gamma
        + (1.0 + params.gamma_tilde()) * log_u * log_u / (2.0 * nf * nf * PI * PI * l))
}

/// Squared wavenumber `k_n² = γ²(1 + n²π²/ln²(1 + γL))`, with the classical
/// branch `n²π²/L²` at γ = 0.
pub fn wavenumber_sq(n: u32, params: &PhysicalParams) -> Result<f64> {
    check_n(n)?;
    let nf = n as f64;
    if params.is_classical() {
        let k = nf * PI / params.length;
        return Ok(k * k);
    }
    let log_u = params.log_stretch_at_l();
    let g2 = params.gamma * params.gamma;
    Ok(g2 * (1.0 + nf * nf * PI * PI / (log_u * log_u)))
}

/// Level energy
/// `E_n = n²π²ħ²γ²/(2m·ln²(1 + γL)) + 3ħ²γ²/(8m)`,
/// with the classical branch `n²π²ħ²/(2mL²)` at γ = 0.
pub fn energy(n: u32, params: &PhysicalParams) -> Result<f64> {
    check_n(n)?;
    let nf = n as f64;
    if params.is_classical() {
        return Ok(nf * nf * params.classical_ground_energy());
    }
    let h2 = params.hbar * params.hbar;
    let g2 = params.gamma * params.gamma;
    let log_u = params.log_stretch_at_l();
    Ok(nf * nf * PI * PI * h2 * g2 / (2.0 * params.mass * log_u * log_u) + energy_bound(params))
}

/// Square-integrability bound `3ħ²γ²/(8m)`; every level exceeds it strictly.
pub fn energy_bound(params: &PhysicalParams) -> f64 {
    3.0 * params.hbar * params.hbar * params.gamma * params.gamma / (8.0 * params.mass)
}

/// Comparison spectrum with the constant bound removed:
/// `energy(n) − 3ħ²γ²/(8m)`.
pub fn reference_energy_ref3(n: u32, params: &PhysicalParams) -> Result<f64> {
    Ok(energy(n, params)? - energy_bound(params))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    fn natural(gt: f64) -> PhysicalParams {
        PhysicalParams::natural(gt).unwrap()
    }

    // frozen reference values, gamma_tilde = 1, hbar = m = L = 1
    const E1_GT1: f64 = 10.64614422761191; // pi^2/(2 ln^2 2) + 3/8
    const E1_REF3_GT1: f64 = 10.27114422761191; // pi^2/(2 ln^2 2)
    const K1_SQ_GT1: f64 = 21.54228845522382; // 1 + pi^2/ln^2 2
    const A1_SQ_GT1: f64 = 4.048680068054721; // 4 + ln^2 2 / pi^2

    #[test]
    fn ode_coefficients_values() {
        let p = natural(1.0);
        let (a, b) = ode_coefficients(&p, 0.375).unwrap();
        assert_eq!(a, 3.0);
        assert_relative_eq!(b, 1.0, max_relative = 1e-14);
        // shifted energy zero -> b = 0
        let (_, b0) = ode_coefficients(&p, -1.0 / 8.0).unwrap();
        assert!(b0.abs() <= 1e-15);
        assert!(ode_coefficients(&natural(0.0), 1.0).is_err());
    }

    #[test]
    fn general_solution_unimodular_profile() {
        let v = general_solution(1.0, 5.0, 1).unwrap();
        assert_relative_eq!(v.re, 1.0, max_relative = 1e-15);
        assert!(v.im.abs() < 1e-15);
        for &u in &[0.3, 0.9, 1.7, 4.2] {
            for sign in [1i8, -1] {
                let v = general_solution(u, 3.7, sign).unwrap();
                assert_relative_eq!(v.norm(), 1.0 / u, max_relative = 1e-13);
            }
        }
        assert!(general_solution(0.0, 2.0, 1).is_err());
        assert!(general_solution(1.0, 0.5, 1).is_err());
    }

    #[test]
    fn general_solution_satisfies_the_reduced_ode() {
        // finite differences in u: u^2 f'' + 3 u f' + b f -> 0 at O(h^2)
        let b = 4.3;
        let residual = |h: f64| -> f64 {
            let mut worst: f64 = 0.0;
            let mut u = 0.5;
            while u < 2.0 {
                let f = |uu: f64| -> Complex64 { general_solution(uu, b, 1).unwrap() };
                let d1 = (f(u + h) - f(u - h)) / (2.0 * h);
                let d2 = (f(u + h) - 2.0 * f(u) + f(u - h)) / (h * h);
                let res = u * u * d2 + 3.0 * u * d1 + b * f(u);
                worst = worst.max(res.norm());
                u += 0.1;
            }
            worst
        };
        let r1 = residual(1e-3);
        let r2 = residual(5e-4);
        assert!(r1 < 1e-4, "residual too large: {r1}");
        let order = (r1 / r2).log2();
        assert!((1.7..2.3).contains(&order), "order {order} not ~2");
    }

    #[test]
    fn eigenfunction_boundaries_and_classical_limit() {
        let p = natural(1.0);
        assert_eq!(eigenfunction(1, 0.0, &p).unwrap(), 0.0);
        assert_eq!(eigenfunction(1, 1.0, &p).unwrap(), 0.0);
        assert_eq!(eigenfunction(3, -0.2, &p).unwrap(), 0.0);
        assert_eq!(eigenfunction(3, 1.2, &p).unwrap(), 0.0);
        assert!(eigenfunction(0, 0.5, &p).is_err());

        let tiny = natural(1e-12);
        for &x in &[0.1, 0.25, 0.5, 0.9] {
            let classical = (2.0f64).sqrt() * (2.0 * PI * x).sin();
            assert_relative_eq!(
                eigenfunction(2, x, &tiny).unwrap(),
                classical,
                max_relative = 1e-9,
                epsilon = 1e-12
            );
        }
    }

    #[test]
    fn eigenfunction_nodes_sit_at_the_geometric_points() {
        // zeros of the log-sine at x_j = (1+γL)^{j/n} - 1)/γ
        let p = natural(1.0);
        let n = 3;
        let nodes = [0.2599210498948732, 0.5874010519681995]; // 2^{1/3}-1, 2^{2/3}-1
        for &xj in &nodes {
            let eps = 1e-7;
            let left = eigenfunction(n, xj - eps, &p).unwrap();
            let right = eigenfunction(n, xj + eps, &p).unwrap();
            assert!(left * right < 0.0, "no sign change across node {xj}");
        }
        // count interior sign changes: exactly n - 1
        let mut changes = 0;
        let mut prev = eigenfunction(n, 1e-4, &p).unwrap();
        let m = 5000;
        for i in 2..m {
            let x = i as f64 * (1.0 / m as f64);
            if x >= 1.0 {
                break;
            }
            let v = eigenfunction(n, x, &p).unwrap();
            if prev * v < 0.0 {
                changes += 1;
            }
            prev = v;
        }
        assert_eq!(changes, (n - 1) as usize);
    }

    #[test]
    fn normalization_values() {
        assert_relative_eq!(
            normalization_sq(5, &natural(1e-12)).unwrap(),
            2.0,
            max_relative = 1e-12
        );
        assert_relative_eq!(
            normalization_sq(1, &natural(1.0)).unwrap(),
            A1_SQ_GT1,
            max_relative = 1e-15
        );
        // gamma_tilde = 5, n = 2: 2 + 10 + 6 ln^2 6/(8 pi^2)
        assert_relative_eq!(
            normalization_sq(2, &natural(5.0)).unwrap(),
            12.243961297619036,
            max_relative = 1e-14
        );
    }

    #[test]
    fn wavenumber_values_and_bound() {
        assert_relative_eq!(
            wavenumber_sq(1, &natural(1.0)).unwrap(),
            K1_SQ_GT1,
            max_relative = 1e-15
        );
        // gamma_tilde = 0.5: 0.25 (1 + pi^2/ln^2 1.5)
        assert_relative_eq!(
            wavenumber_sq(1, &natural(0.5)).unwrap(),
            15.258344133645453,
            max_relative = 1e-14
        );
        let tiny = natural(1e-10);
        assert_relative_eq!(wavenumber_sq(3, &tiny).unwrap(), 9.0 * PI * PI, max_relative = 1e-9);
    }

    #[test]
    fn energy_values_and_scaling() {
        let p = natural(1.0);
        assert_relative_eq!(energy(1, &p).unwrap(), E1_GT1, max_relative = 1e-15);
        assert_relative_eq!(
            reference_energy_ref3(1, &p).unwrap(),
            E1_REF3_GT1,
            max_relative = 1e-15
        );
        // E_n - bound scales exactly as n^2
        let b = energy_bound(&p);
        let base = energy(1, &p).unwrap() - b;
        for n in 2..=12u32 {
            let e = energy(n, &p).unwrap() - b;
            assert_relative_eq!(e, (n * n) as f64 * base, max_relative = 1e-13);
        }
        // classical branch
        let tiny = natural(1e-12);
        assert_relative_eq!(energy(2, &tiny).unwrap(), 2.0 * PI * PI, max_relative = 1e-12);
    }

    #[test]
    fn energy_bound_values() {
        assert_eq!(energy_bound(&natural(0.0)), 0.0);
        let p = PhysicalParams::new(1.0, 1.0, 1.0, 2.0).unwrap();
        assert_relative_eq!(energy_bound(&p), 1.5, max_relative = 1e-15);
        // E_1 - bound equals the pure log-term
        let q = natural(1.0);
        let ln2 = 2.0f64.ln();
        assert_relative_eq!(
            energy(1, &q).unwrap() - energy_bound(&q),
            PI * PI / (2.0 * ln2 * ln2),
            max_relative = 1e-14
        );
    }

    #[test]
    fn consistency_chain_energy_vs_wavenumber() {
        // E_n = hbar^2 k_n^2 / 2m - hbar^2 gamma^2 / 8m
        for &gt in &[-0.5, 0.5, 1.0, 5.0] {
            let p = natural(gt);
            for n in 1..=6u32 {
                let e = energy(n, &p).unwrap();
                let via_k = wavenumber_sq(n, &p).unwrap() / 2.0 - p.gamma * p.gamma / 8.0;
                assert_relative_eq!(e, via_k, max_relative = 1e-14);
            }
        }
    }

    #[test]
    fn well_solution_invariants() {
        for &gt in &[-0.5, 0.5, 1.0, 5.0] {
            let p = natural(gt);
            for n in [1u32, 2, 7] {
                let w = WellSolution::new(n, &p).unwrap();
                assert!(w.a_n_sq > 0.0);
                assert!(w.k_n_sq > p.gamma * p.gamma);
                let shift = p.gamma * p.gamma / 8.0;
                assert_relative_eq!(w.energy_shifted, w.energy + shift, max_relative = 1e-15);
            }
        }
    }

    proptest! {
        #[test]
        fn wavenumber_exceeds_gamma_sq(n in 1u32..40, gt in -0.9f64..6.0) {
            prop_assume!(gt.abs() > 1e-6);
            let p = natural(gt);
            let ksq = wavenumber_sq(n, &p).unwrap();
            prop_assert!(ksq / (p.gamma * p.gamma) - 1.0 > 0.0);
        }
    }
}
