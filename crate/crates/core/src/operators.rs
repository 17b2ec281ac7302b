//! Grid discretizations of the deformed momentum, the Hamiltonian and the
//! ordered position-dependent-mass kinetic operator, plus Hermiticity
//! diagnostics.
//!
//! The Hermitian momentum is discretized through the symmetrized
//! factorization `p̂ = -iħ·√f·(d/dx)·√f` with `f = 1 + γx`, which makes the
//! matrix Hermitian exactly (not just to truncation order) and reproduces
//! the `γ/2` counterterm in the continuum limit.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::grid::{Coordinate, Grid};
use crate::params::PhysicalParams;
use crate::wavefunction::WaveFunction;

/// Banded complex matrix acting on the interior nodes of a grid
/// (Dirichlet rows and columns eliminated).
#[derive(Debug, Clone)]
pub struct OperatorMatrix {
    grid: Grid,
    n: usize,
    half_bandwidth: usize,
    /// bands[k][i] holds entry (i, i + k - half_bandwidth)
    bands: Vec<Vec<Complex64>>,
}

impl OperatorMatrix {
    pub(crate) fn zeros(grid: Grid, half_bandwidth: usize) -> Result<Self> {
        let n = grid.n_interior();
        if n == 0 {
            return Err(Error::Grid("grid has no interior nodes".into()));
        }
        let bands = vec![vec![Complex64::new(0.0, 0.0); n]; 2 * half_bandwidth + 1];
        Ok(Self { grid, n, half_bandwidth, bands })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn half_bandwidth(&self) -> usize {
        self.half_bandwidth
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    /// Entry (i, j); zero outside the band.
    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        let b = self.half_bandwidth as isize;
        let d = j as isize - i as isize;
        if i >= self.n || j >= self.n || d < -b || d > b {
            return Complex64::new(0.0, 0.0);
        }
        self.bands[(d + b) as usize][i]
    }

    pub(crate) fn set(&mut self, i: usize, j: usize, v: Complex64) {
        let b = self.half_bandwidth as isize;
        let d = j as isize - i as isize;
        debug_assert!(i < self.n && j < self.n && d >= -b && d <= b);
        self.bands[(d + b) as usize][i] = v;
    }

    pub fn matvec(&self, x: &[Complex64]) -> Vec<Complex64> {
        debug_assert_eq!(x.len(), self.n);
        let b = self.half_bandwidth as isize;
        let mut y = vec![Complex64::new(0.0, 0.0); self.n];
        for (i, out) in y.iter_mut().enumerate() {
            let mut acc = Complex64::new(0.0, 0.0);
            for d in -b..=b {
                let j = i as isize + d;
                if j >= 0 && (j as usize) < self.n {
                    acc += self.bands[(d + b) as usize][i] * x[j as usize];
                }
            }
            *out = acc;
        }
        y
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Self {
        let mut out = Self::zeros(self.grid.clone(), self.half_bandwidth).unwrap();
        let b = self.half_bandwidth as isize;
        for i in 0..self.n {
            for d in -b..=b {
                let j = i as isize + d;
                if j >= 0 && (j as usize) < self.n {
                    out.set(j as usize, i, self.get(i, j as usize).conj());
                }
            }
        }
        out
    }

    /// Banded product `self · rhs`; the half bandwidths add.
    pub fn mul(&self, rhs: &Self) -> Result<Self> {
        if self.n != rhs.n {
            return Err(Error::Grid("operator dimensions do not match".into()));
        }
        let hb = self.half_bandwidth + rhs.half_bandwidth;
        let mut out = Self::zeros(self.grid.clone(), hb)?;
        let b1 = self.half_bandwidth as isize;
        let hbi = hb as isize;
        for i in 0..self.n {
            for d in -hbi..=hbi {
                let j = i as isize + d;
                if j < 0 || j as usize >= self.n {
                    continue;
                }
                let mut acc = Complex64::new(0.0, 0.0);
                for e in -b1..=b1 {
                    let k = i as isize + e;
                    if k < 0 || k as usize >= self.n {
                        continue;
                    }
                    acc += self.get(i, k as usize) * rhs.get(k as usize, j as usize);
                }
                out.set(i, j as usize, acc);
            }
        }
        Ok(out)
    }

    /// `self† · self`. Summation order is symmetric in (i, j) so the result
    /// is Hermitian to the last bit.
    pub fn gram(&self) -> Self {
        let hb = 2 * self.half_bandwidth;
        let mut out = Self::zeros(self.grid.clone(), hb).unwrap();
        let b = self.half_bandwidth as isize;
        let hbi = hb as isize;
        for i in 0..self.n {
            for d in -hbi..=hbi {
                let j = i as isize + d;
                if j < 0 || j as usize >= self.n {
                    continue;
                }
                let mut acc = Complex64::new(0.0, 0.0);
                for e in -b..=b {
                    let k = i as isize + e;
                    if k < 0 || k as usize >= self.n {
                        continue;
                    }
                    acc += self.get(k as usize, i).conj() * self.get(k as usize, j as usize);
                }
                out.set(i, j as usize, acc);
            }
        }
        out
    }

    pub fn add(&self, rhs: &Self) -> Result<Self> {
        if self.n != rhs.n {
            return Err(Error::Grid("operator dimensions do not match".into()));
        }
        let hb = self.half_bandwidth.max(rhs.half_bandwidth);
        let mut out = Self::zeros(self.grid.clone(), hb)?;
        let hbi = hb as isize;
        for i in 0..self.n {
            for d in -hbi..=hbi {
                let j = i as isize + d;
                if j >= 0 && (j as usize) < self.n {
                    out.set(i, j as usize, self.get(i, j as usize) + rhs.get(i, j as usize));
                }
            }
        }
        Ok(out)
    }

    pub fn sub(&self, rhs: &Self) -> Result<Self> {
        self.add(&rhs.scaled(Complex64::new(-1.0, 0.0)))
    }

    pub fn scaled(&self, c: Complex64) -> Self {
        let mut out = self.clone();
        for band in &mut out.bands {
            for v in band.iter_mut() {
                *v *= c;
            }
        }
        out
    }

    pub fn add_real_diagonal(&mut self, values: &[f64]) -> Result<()> {
        if values.len() != self.n {
            return Err(Error::Grid(format!(
                "diagonal length {} does not match operator size {}",
                values.len(),
                self.n
            )));
        }
        let b = self.half_bandwidth;
        for (i, &v) in values.iter().enumerate() {
            self.bands[b][i] += Complex64::new(v, 0.0);
        }
        Ok(())
    }

    /// Scale row i by `d[i]`.
    pub fn scale_rows(&self, d: &[f64]) -> Self {
        let mut out = self.clone();
        for band in &mut out.bands {
            for (v, &scale) in band.iter_mut().zip(d) {
                *v *= scale;
            }
        }
        out
    }

    /// Scale column j by `d[j]`.
    pub fn scale_cols(&self, d: &[f64]) -> Self {
        let mut out = self.clone();
        let b = out.half_bandwidth as isize;
        for i in 0..out.n {
            for k in 0..out.bands.len() {
                let j = i as isize + k as isize - b;
                if j >= 0 && (j as usize) < out.n {
                    out.bands[k][i] *= d[j as usize];
                }
            }
        }
        out
    }

    /// Induced infinity norm (max absolute row sum).
    pub fn inf_norm(&self) -> f64 {
        let b = self.half_bandwidth as isize;
        let mut worst: f64 = 0.0;
        for i in 0..self.n {
            let mut acc = 0.0;
            for d in -b..=b {
                let j = i as isize + d;
                if j >= 0 && (j as usize) < self.n {
                    acc += self.get(i, j as usize).norm();
                }
            }
            worst = worst.max(acc);
        }
        worst
    }
}

/// `‖M − M†‖_∞`: max over rows of the summed asymmetry magnitudes.
/// Zero for Hermitian matrices.
pub fn hermiticity_defect(m: &OperatorMatrix) -> f64 {
    let b = m.half_bandwidth() as isize;
    let n = m.n();
    let mut worst: f64 = 0.0;
    for i in 0..n {
        let mut acc = 0.0;
        for d in -b..=b {
            let j = i as isize + d;
            if j >= 0 && (j as usize) < n {
                acc += (m.get(i, j as usize) - m.get(j as usize, i).conj()).norm();
            }
        }
        worst = worst.max(acc);
    }
    worst
}

fn require_physical_grid(grid: &Grid, params: &PhysicalParams) -> Result<()> {
    if grid.coordinate() != Coordinate::PhysicalX {
        return Err(Error::Grid("operator builders expect a physical-x grid".into()));
    }
    for &x in grid.points() {
        if params.stretch(x) <= 0.0 {
            return Err(Error::Domain(format!(
                "1 + gamma*x = {} <= 0 at x = {x}",
                params.stretch(x)
            )));
        }
    }
    Ok(())
}

/// Hermitian deformed momentum `p̂ = -iħ((1 + γx)d/dx + γ/2)`, discretized
/// as `-iħ·√f·D·√f` with centered differences. The matrix is Hermitian by
/// construction for every grid size.
pub fn build_momentum_hermitian(grid: &Grid, params: &PhysicalParams) -> Result<OperatorMatrix> {
    require_physical_grid(grid, params)?;
    let mut p = OperatorMatrix::zeros(grid.clone(), 1)?;
    let xs = grid.interior();
    let h = grid.spacing();
    let hbar = params.hbar;
    for i in 0..p.n - 1 {
        let f_i = params.stretch(xs[i]);
        let f_j = params.stretch(xs[i + 1]);
        // one shared coefficient keeps the pair exactly conjugate
        let g = (f_i * f_j).sqrt() / (2.0 * h);
        p.set(i, i + 1, Complex64::new(0.0, -hbar * g));
        p.set(i + 1, i, Complex64::new(0.0, hbar * g));
    }
    Ok(p)
}

/// Non-Hermitian momentum `-iħ(1 + γx)d/dx` with centered differences.
/// Differs from the Hermitian operator by the constant `-iħγ/2`; the matrix
/// asymmetry grows linearly with ħ|γ|.
pub fn build_momentum_nonhermitian(grid: &Grid, params: &PhysicalParams) -> Result<OperatorMatrix> {
    require_physical_grid(grid, params)?;
    let mut p = OperatorMatrix::zeros(grid.clone(), 1)?;
    let xs = grid.interior();
    let h = grid.spacing();
    let hbar = params.hbar;
    for (i, &x) in xs.iter().enumerate() {
        let f_i = params.stretch(x);
        if i + 1 < p.n {
            p.set(i, i + 1, Complex64::new(0.0, -hbar * f_i / (2.0 * h)));
        }
        if i > 0 {
            p.set(i, i - 1, Complex64::new(0.0, hbar * f_i / (2.0 * h)));
        }
    }
    Ok(p)
}

/// Hamiltonian `Ĥ = (1/2m)·P†P + diag(V)` with P the Hermitian momentum.
/// Hermitian by construction; with V = 0 this is the deformed well operator.
pub fn build_hamiltonian(
    grid: &Grid,
    params: &PhysicalParams,
    potential: &[f64],
) -> Result<OperatorMatrix> {
    let p = build_momentum_hermitian(grid, params)?;
    let mut h = p.gram().scaled(Complex64::new(1.0 / (2.0 * params.mass), 0.0));
    h.add_real_diagonal(potential)?;
    Ok(h)
}

/// Non-Hermitian comparison Hamiltonian `(1/2m)·P_nh² + diag(V)` built from
/// the plain `-iħ(1+γx)d/dx` momentum; used by the unitarity discriminator.
pub fn build_hamiltonian_nonhermitian(
    grid: &Grid,
    params: &PhysicalParams,
    potential: &[f64],
) -> Result<OperatorMatrix> {
    let p = build_momentum_nonhermitian(grid, params)?;
    let mut h = p.mul(&p)?.scaled(Complex64::new(1.0 / (2.0 * params.mass), 0.0));
    h.add_real_diagonal(potential)?;
    Ok(h)
}

/// Position-dependent effective mass `m_e(x) = m/(1 + γx)²`.
pub fn effective_mass(x: f64, params: &PhysicalParams) -> Result<f64> {
    let f = params.stretch(x);
    if f <= 0.0 {
        return Err(Error::Domain(format!("1 + gamma*x = {f} <= 0 at x = {x}")));
    }
    Ok(params.mass / (f * f))
}

/// Ordered kinetic operator
/// `T = ¼(m_e^α p̂ m_e^β p̂ m_e^c + m_e^c p̂ m_e^β p̂ m_e^α)` with
/// `p̂ = -iħ d/dx` (centered differences) and diagonal mass-power factors;
/// the ordering exponents must satisfy α + β + c = -1.
pub fn build_vonroos_kinetic(
    grid: &Grid,
    params: &PhysicalParams,
    alpha: f64,
    beta: f64,
    gamma_order: f64,
) -> Result<OperatorMatrix> {
    let sum = alpha + beta + gamma_order;
    if (sum + 1.0).abs() > 1e-12 {
        return Err(Error::Ordering(sum));
    }
    require_physical_grid(grid, params)?;

    let xs = grid.interior();
    let me: Vec<f64> = xs.iter().map(|&x| effective_mass(x, params)).collect::<Result<_>>()?;
    let pow_a: Vec<f64> = me.iter().map(|&v| v.powf(alpha)).collect();
    let pow_b: Vec<f64> = me.iter().map(|&v| v.powf(beta)).collect();
    let pow_c: Vec<f64> = me.iter().map(|&v| v.powf(gamma_order)).collect();

    // plain momentum (constant coefficient)
    let mut pc = OperatorMatrix::zeros(grid.clone(), 1)?;
    let h = grid.spacing();
    let coeff = params.hbar / (2.0 * h);
    for i in 0..pc.n - 1 {
        pc.set(i, i + 1, Complex64::new(0.0, -coeff));
        pc.set(i + 1, i, Complex64::new(0.0, coeff));
    }

    let term_1 = pc.scale_rows(&pow_a).scale_cols(&pow_b).mul(&pc)?.scale_cols(&pow_c);
    let term_2 = pc.scale_rows(&pow_c).scale_cols(&pow_b).mul(&pc)?.scale_cols(&pow_a);
    Ok(term_1.add(&term_2)?.scaled(Complex64::new(0.25, 0.0)))
}

/// Modified derivative `D_γψ = (1 + γx)ψ' + (γ/2)ψ` applied on the full
/// grid: the symmetrized `√f(√fψ)'` stencil inside, second-order one-sided
/// differences at the two boundary nodes. Consistent with
/// `build_momentum_hermitian / (-iħ)` on Dirichlet data.
pub fn apply_d_gamma(psi: &WaveFunction, params: &PhysicalParams) -> Result<WaveFunction> {
    let grid = psi.grid();
    if grid.coordinate() != Coordinate::PhysicalX {
        return Err(Error::Grid("apply_d_gamma expects a physical-x grid".into()));
    }
    let xs = grid.points();
    let h = grid.spacing();
    let n = xs.len();
    let sf: Vec<f64> = xs
        .iter()
        .map(|&x| {
            let f = params.stretch(x);
            if f <= 0.0 {
                return Err(Error::Domain(format!("1 + gamma*x = {f} <= 0 at x = {x}")));
            }
            Ok(f.sqrt())
        })
        .collect::<Result<_>>()?;
    let g: Vec<Complex64> = psi.samples().iter().zip(&sf).map(|(&v, &s)| v * s).collect();

    let mut out = vec![Complex64::new(0.0, 0.0); n];
    for i in 1..n - 1 {
        out[i] = sf[i] * (g[i + 1] - g[i - 1]) / (2.0 * h);
    }
    // one-sided 3-point derivative of g at the walls
    out[0] = sf[0] * (-3.0 * g[0] + 4.0 * g[1] - g[2]) / (2.0 * h);
    out[n - 1] = sf[n - 1] * (3.0 * g[n - 1] - 4.0 * g[n - 2] + g[n - 3]) / (2.0 * h);

    WaveFunction::with_weights(out, grid.clone(), psi.weights().to_vec())
}
