//! Quadrature, expectation values and probability densities.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::grid::Grid;
use crate::operators::{build_momentum_hermitian, build_momentum_nonhermitian, OperatorMatrix};
use crate::params::PhysicalParams;
use crate::wavefunction::WaveFunction;
use crate::well::eigenfunction;

use std::f64::consts::PI;

/// Composite-Simpson quadrature of uniformly sampled values.
///
/// Requires at least 3 samples and an odd sample count; O(h⁴) for smooth
/// integrands.
pub fn integrate(values: &[f64], spacing: f64) -> Result<f64> {
    let n = values.len();
    if n < 3 {
        return Err(Error::Grid(format!("Simpson quadrature needs >= 3 samples, got {n}")));
    }
    if n.is_multiple_of(2) {
        return Err(Error::Grid(format!("Simpson quadrature needs an odd sample count, got {n}")));
    }
    let mut acc = values[0] + values[n - 1];
    let mut four = 0.0;
    let mut two = 0.0;
    for (i, &v) in values.iter().enumerate().take(n - 1).skip(1) {
        if i % 2 == 1 {
            four += v;
        } else {
            two += v;
        }
    }
    acc += 4.0 * four + 2.0 * two;
    Ok(acc * spacing / 3.0)
}

/// Simpson when the sample count is odd, trapezoid otherwise. Internal
/// fallback for norm caching on arbitrary grids.
pub(crate) fn integrate_any(values: &[f64], spacing: f64) -> f64 {
    if values.len() >= 3 && values.len() % 2 == 1 {
        integrate(values, spacing).expect("odd-count Simpson cannot fail")
    } else {
        let inner: f64 = values[1..values.len() - 1].iter().sum();
        (inner + 0.5 * (values[0] + values[values.len() - 1])) * spacing
    }
}

/// Level eigenfunction sampled on a physical grid.
pub fn sample_eigenfunction(n: u32, params: &PhysicalParams, grid: &Grid) -> Result<WaveFunction> {
    let samples: Vec<f64> =
        grid.points().iter().map(|&x| eigenfunction(n, x, params)).collect::<Result<_>>()?;
    WaveFunction::from_real(&samples, grid.clone())
}

/// Closed-form position expectation
/// `⟨x⟩ = (1+γL)ln(1+γL)/(Lγ²)·(1 + ln²(1+γL)/(4π²n²)) − 1/γ`,
/// evaluated through a cancellation-free series branch for small |γL|
/// (limit L/2 at γ → 0).
pub fn expectation_x(n: u32, params: &PhysicalParams) -> Result<f64> {
    if n < 1 {
        return Err(Error::InvalidParams("quantum number n must be >= 1".into()));
    }
    let l = params.length;
    let gt = params.gamma_tilde();
    let nf = n as f64;
    if gt.abs() < 1e-6 {
        // <x>/L = 1/2 - gt/6 + gt/(4 pi^2 n^2) + O(gt^2)
        return Ok(l * (0.5 + gt * (1.0 / (4.0 * PI * PI * nf * nf) - 1.0 / 6.0)));
    }
    let log_u = gt.ln_1p();
    let lead = (1.0 + gt) * log_u / (l * params.gamma * params.gamma);
    Ok(lead * (1.0 + log_u * log_u / (4.0 * PI * PI * nf * nf)) - 1.0 / params.gamma)
}

/// Large-n limit of [`expectation_x`] (the n-dependent term dropped).
pub fn expectation_x_limit(params: &PhysicalParams) -> f64 {
    let gt = params.gamma_tilde();
    if gt.abs() < 1e-6 {
        return params.length * (0.5 - gt / 6.0);
    }
    (1.0 + gt) * gt.ln_1p() / (params.length * params.gamma * params.gamma) - 1.0 / params.gamma
}

/// ⟨x⟩ computed independently by Simpson quadrature of `x·|φ_n(x)|²`.
pub fn expectation_x_quadrature(n: u32, params: &PhysicalParams, n_points: usize) -> Result<f64> {
    let grid = Grid::physical(params, n_points)?;
    let wf = sample_eigenfunction(n, params, &grid)?;
    let integrand: Vec<f64> =
        grid.points().iter().zip(wf.samples()).map(|(&x, c)| x * c.norm_sqr()).collect();
    integrate(&integrand, grid.spacing())
}

/// ⟨φ_n|p̂_γ|φ_n⟩ through the Hermitian momentum matrix and the
/// uniform-weight discrete inner product (the product in which the matrix
/// is exactly Hermitian). Real and zero to machine precision for the real
/// eigenfunctions.
pub fn expectation_p_gamma(n: u32, params: &PhysicalParams, n_points: usize) -> Result<Complex64> {
    momentum_expectation(n, params, n_points, false)
}

/// Same bracket evaluated with the non-Hermitian momentum; picks up an
/// imaginary part ≈ ħγ/2, the boundary residue the counterterm removes.
pub fn expectation_p_gamma_nonhermitian(
    n: u32,
    params: &PhysicalParams,
    n_points: usize,
) -> Result<Complex64> {
    momentum_expectation(n, params, n_points, true)
}

fn momentum_expectation(
    n: u32,
    params: &PhysicalParams,
    n_points: usize,
    nonhermitian: bool,
) -> Result<Complex64> {
    if n_points.is_multiple_of(2) {
        return Err(Error::Grid("expectation grids use odd point counts".into()));
    }
    let grid = Grid::physical(params, n_points)?;
    let wf = sample_eigenfunction(n, params, &grid)?.normalized()?;
    let op = if nonhermitian {
        build_momentum_nonhermitian(&grid, params)?
    } else {
        build_momentum_hermitian(&grid, params)?
    };
    let applied = op.matvec(wf.interior());
    let h = grid.spacing();
    let mut acc = Complex64::new(0.0, 0.0);
    for (c, a) in wf.interior().iter().zip(&applied) {
        acc += c.conj() * a;
    }
    Ok(acc * h)
}

/// Expectation of a Hermitian operator in a sampled state, with the same
/// uniform-weight product used by [`expectation_p_gamma`].
pub fn operator_expectation(psi: &WaveFunction, op: &OperatorMatrix) -> Result<Complex64> {
    if op.n() != psi.grid().n_interior() {
        return Err(Error::Grid("operator and state grids do not match".into()));
    }
    let applied = op.matvec(psi.interior());
    let mut acc = Complex64::new(0.0, 0.0);
    for (c, a) in psi.interior().iter().zip(&applied) {
        acc += c.conj() * a;
    }
    Ok(acc * psi.grid().spacing())
}

/// Separable two-dimensional probability density |φ_{n1}(x)·φ_{n2}(y)|² on
/// the square [0, L]².
#[derive(Debug, Clone)]
pub struct Density2D {
    pub n1: u32,
    pub n2: u32,
    axis: Grid,
    /// values[i][j] = density at (x_i, y_j)
    values: Vec<Vec<f64>>,
}

impl Density2D {
    pub fn axis(&self) -> &Grid {
        &self.axis
    }

    pub fn values(&self) -> &[Vec<f64>] {
        &self.values
    }

    /// Double Simpson quadrature of the density.
    pub fn total_probability(&self) -> Result<f64> {
        let h = self.axis.spacing();
        let partial: Vec<f64> =
            self.values.iter().map(|row| integrate(row, h)).collect::<Result<_>>()?;
        integrate(&partial, h)
    }

    /// Grid position (x, y) of the density maximum.
    pub fn argmax(&self) -> (f64, f64) {
        let mut best = (0usize, 0usize);
        let mut best_v = f64::NEG_INFINITY;
        for (i, row) in self.values.iter().enumerate() {
            for (j, &v) in row.iter().enumerate() {
                if v > best_v {
                    best_v = v;
                    best = (i, j);
                }
            }
        }
        (self.axis.points()[best.0], self.axis.points()[best.1])
    }
}

/// Product-state density for quantum numbers (n1, n2) at the given
/// per-axis resolution (odd).
pub fn density_2d(
    n1: u32,
    n2: u32,
    params: &PhysicalParams,
    resolution: usize,
) -> Result<Density2D> {
    if resolution.is_multiple_of(2) {
        return Err(Error::Grid("density resolution must be odd".into()));
    }
    let axis = Grid::physical(params, resolution)?;
    let rho1: Vec<f64> = axis
        .points()
        .iter()
        .map(|&x| eigenfunction(n1, x, params).map(|v| v * v))
        .collect::<Result<_>>()?;
    let rho2: Vec<f64> = axis
        .points()
        .iter()
        .map(|&y| eigenfunction(n2, y, params).map(|v| v * v))
        .collect::<Result<_>>()?;
    let values: Vec<Vec<f64>> =
        rho1.iter().map(|&a| rho2.iter().map(|&b| a * b).collect()).collect();
    Ok(Density2D { n1, n2, axis, values })
}
