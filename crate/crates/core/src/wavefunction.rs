//! Sampled wave functions with a cached quadrature norm.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::grid::{Coordinate, Grid};
use crate::observables::integrate_any;

/// A wave function sampled on a full grid (boundary nodes included).
///
/// `weights` carries the measure factor relating the grid coordinate to the
/// physical dx: unity on x-grids, `e^{γs} = 1 + γx` on s-grids, so that
/// `norm_sq = ∫ |ψ|² dx` in either coordinate.
#[derive(Debug, Clone)]
pub struct WaveFunction {
    samples: Vec<Complex64>,
    grid: Grid,
    weights: Vec<f64>,
    norm_sq: f64,
}

impl WaveFunction {
    /// Wave function on a physical-x grid (unit measure weights).
    pub fn new(samples: Vec<Complex64>, grid: Grid) -> Result<Self> {
        let weights = vec![1.0; grid.n_points()];
        Self::with_weights(samples, grid, weights)
    }

    /// Wave function on a real-valued sample vector.
    pub fn from_real(samples: &[f64], grid: Grid) -> Result<Self> {
        Self::new(samples.iter().map(|&v| Complex64::new(v, 0.0)).collect(), grid)
    }

    /// Wave function with an explicit measure weight per node.
    pub fn with_weights(samples: Vec<Complex64>, grid: Grid, weights: Vec<f64>) -> Result<Self> {
        if samples.len() != grid.n_points() {
            return Err(Error::Grid(format!(
                "sample count {} does not match grid size {}",
                samples.len(),
                grid.n_points()
            )));
        }
        if weights.len() != grid.n_points() {
            return Err(Error::Grid("weight count does not match grid size".into()));
        }
        if samples.iter().any(|c| !c.re.is_finite() || !c.im.is_finite()) {
            return Err(Error::Domain("wave function samples must be finite".into()));
        }
        let norm_sq = quadrature_norm_sq(&samples, &weights, grid.spacing());
        Ok(Self { samples, grid, weights, norm_sq })
    }

    pub fn samples(&self) -> &[Complex64] {
        &self.samples
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// Cached `∫ |ψ|² dx`.
    pub fn norm_sq(&self) -> f64 {
        self.norm_sq
    }

    /// Interior samples (Dirichlet endpoints stripped), as fed to operators.
    pub fn interior(&self) -> &[Complex64] {
        &self.samples[1..self.samples.len() - 1]
    }

    /// Rescaled copy with unit quadrature norm.
    pub fn normalized(&self) -> Result<Self> {
        if self.norm_sq <= 0.0 {
            return Err(Error::Domain("cannot normalize a null wave function".into()));
        }
        let scale = 1.0 / self.norm_sq.sqrt();
        let samples: Vec<Complex64> = self.samples.iter().map(|&c| c * scale).collect();
        Self::with_weights(samples, self.grid.clone(), self.weights.clone())
    }

    /// Physical x positions of the grid nodes (identity on x-grids, the
    /// exponential map on s-grids).
    pub fn positions_x(&self, gamma: f64) -> Vec<f64> {
        match self.grid.coordinate() {
            Coordinate::PhysicalX => self.grid.points().to_vec(),
            Coordinate::DeformedS => self
                .grid
                .points()
                .iter()
                .map(|&s| if gamma == 0.0 { s } else { (gamma * s).exp_m1() / gamma })
                .collect(),
        }
    }
}

/// Quadrature of |ψ|²·w: composite Simpson on odd-count grids, trapezoid
/// otherwise.
fn quadrature_norm_sq(samples: &[Complex64], weights: &[f64], spacing: f64) -> f64 {
    let density: Vec<f64> = samples.iter().zip(weights).map(|(c, &w)| c.norm_sqr() * w).collect();
    integrate_any(&density, spacing)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::params::PhysicalParams;
    use approx::assert_relative_eq;

    #[test]
    fn norm_of_box_ground_state() {
        let p = PhysicalParams::natural(0.0).unwrap();
        let grid = Grid::physical(&p, 2001).unwrap();
        let pi = std::f64::consts::PI;
        let samples: Vec<f64> =
            grid.points().iter().map(|&x| (2.0f64).sqrt() * (pi * x).sin()).collect();
        let wf = WaveFunction::from_real(&samples, grid).unwrap();
        assert_relative_eq!(wf.norm_sq(), 1.0, max_relative = 1e-10);
        let unit = wf.normalized().unwrap();
        assert_relative_eq!(unit.norm_sq(), 1.0, max_relative = 1e-12);
    }

    #[test]
    fn rejects_length_mismatch_and_non_finite() {
        let p = PhysicalParams::natural(0.0).unwrap();
        let grid = Grid::physical(&p, 11).unwrap();
        assert!(WaveFunction::from_real(&[0.0; 5], grid.clone()).is_err());
        let mut bad = vec![0.0; 11];
        bad[3] = f64::NAN;
        assert!(WaveFunction::from_real(&bad, grid).is_err());
    }
}
