//! Physical parameters of the deformed well.

use crate::error::{Error, Result};

/// Below this |γL| the closed forms switch to their series/classical branch.
pub const CLASSICAL_BRANCH_THRESHOLD: f64 = 1e-8;

/// Hard lower cutoff for γL; keeps `ln(1 + γL)` away from the singularity.
pub const GAMMA_L_MIN: f64 = -1.0 + 1e-9;

/// Problem constants: ħ, m, the well width L and the deformation constant γ.
///
/// Natural units ħ = m = L = 1 are the default convention; γ is usually
/// specified through the dimensionless combination γ̃ = γL.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhysicalParams {
    pub hbar: f64,
    pub mass: f64,
    pub length: f64,
    pub gamma: f64,
}

impl PhysicalParams {
    pub fn new(hbar: f64, mass: f64, length: f64, gamma: f64) -> Result<Self> {
        for (name, v) in [("hbar", hbar), ("mass", mass), ("length", length), ("gamma", gamma)] {
            if !v.is_finite() {
                return Err(Error::InvalidParams(format!("{name} must be finite, got {v}")));
            }
        }
        if hbar <= 0.0 || mass <= 0.0 || length <= 0.0 {
            return Err(Error::InvalidParams(format!(
                "hbar, mass and length must be positive (got {hbar}, {mass}, {length})"
            )));
        }
        if gamma * length <= GAMMA_L_MIN {
            return Err(Error::InvalidParams(format!(
                "gamma*L = {} must exceed {GAMMA_L_MIN} so that 1 + gamma*x > 0 on [0, L]",
                gamma * length
            )));
        }
        Ok(Self { hbar, mass, length, gamma })
    }

    /// Natural units ħ = m = L = 1 with γ = γ̃.
    pub fn natural(gamma_tilde: f64) -> Result<Self> {
        Self::new(1.0, 1.0, 1.0, gamma_tilde)
    }

    /// Dimensionless deformation γ̃ = γL.
    pub fn gamma_tilde(&self) -> f64 {
        self.gamma * self.length
    }

    /// Position-dependent stretch factor `1 + γx`.
    pub fn stretch(&self, x: f64) -> f64 {
        1.0 + self.gamma * x
    }

    /// `ln(1 + γL)`, evaluated stably.
    pub fn log_stretch_at_l(&self) -> f64 {
        self.gamma_tilde().ln_1p()
    }

    /// Upper end of the logarithmic coordinate: `s(L) = ln(1 + γL)/γ`
    /// (reduces to L at γ = 0).
    pub fn s_max(&self) -> f64 {
        if self.gamma == 0.0 {
            self.length
        } else {
            self.log_stretch_at_l() / self.gamma
        }
    }

    /// Ground-state energy of the undeformed box, `π²ħ²/(2mL²)`.
    pub fn classical_ground_energy(&self) -> f64 {
        let pi = std::f64::consts::PI;
        pi * pi * self.hbar * self.hbar / (2.0 * self.mass * self.length * self.length)
    }

    /// True when |γL| is small enough that the deformed closed forms are
    /// evaluated through their classical/series branch.
    pub fn is_classical(&self) -> bool {
        self.gamma_tilde().abs() < CLASSICAL_BRANCH_THRESHOLD
    }
}
