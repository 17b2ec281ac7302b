//! Uniform 1-D grids in the physical or logarithmic coordinate.

use crate::error::{Error, Result};
use crate::params::PhysicalParams;

/// Which coordinate the grid samples uniformly.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Coordinate {
    /// Physical position x on [0, L].
    PhysicalX,
    /// Logarithmic coordinate s = ln(1 + γx)/γ on [0, s_max].
    DeformedS,
}

/// Uniform grid including both endpoints; operators act on the interior
/// nodes (Dirichlet boundaries eliminated).
#[derive(Debug, Clone, PartialEq)]
pub struct Grid {
    coordinate: Coordinate,
    points: Vec<f64>,
    spacing: f64,
}

impl Grid {
    pub fn uniform(coordinate: Coordinate, start: f64, end: f64, n_points: usize) -> Result<Self> {
        if n_points < 3 {
            return Err(Error::Grid(format!("grid needs at least 3 points, got {n_points}")));
        }
        if !(start.is_finite() && end.is_finite()) || end <= start {
            return Err(Error::Grid(format!(
                "grid endpoints must be finite with end > start, got [{start}, {end}]"
            )));
        }
        let spacing = (end - start) / (n_points - 1) as f64;
        let mut points: Vec<f64> = (0..n_points).map(|i| start + i as f64 * spacing).collect();
        // pin the upper boundary exactly
        *points.last_mut().unwrap() = end;
        Ok(Self { coordinate, points, spacing })
    }

    /// Grid over the physical domain [0, L].
    pub fn physical(params: &PhysicalParams, n_points: usize) -> Result<Self> {
        Self::uniform(Coordinate::PhysicalX, 0.0, params.length, n_points)
    }

    /// Grid over the logarithmic domain [0, s_max].
    pub fn deformed(params: &PhysicalParams, n_points: usize) -> Result<Self> {
        Self::uniform(Coordinate::DeformedS, 0.0, params.s_max(), n_points)
    }

    pub fn coordinate(&self) -> Coordinate {
        self.coordinate
    }

    pub fn points(&self) -> &[f64] {
        &self.points
    }

    pub fn spacing(&self) -> f64 {
        self.spacing
    }

    pub fn n_points(&self) -> usize {
        self.points.len()
    }

    /// Number of interior nodes (total minus the two Dirichlet endpoints).
    pub fn n_interior(&self) -> usize {
        self.points.len() - 2
    }

    pub fn interior(&self) -> &[f64] {
        &self.points[1..self.points.len() - 1]
    }

    pub fn has_odd_count(&self) -> bool {
        self.points.len() % 2 == 1
    }
}
