//! Scalar algebra of the deformed translation group.
//!
//! The group law mixes ordinary addition with a bilinear term controlled by a
//! deformation constant of dimension 1/length: `a ⊕ b = a + b + γ·a·b`.
//! The q-exponential realises the same composition law, and the logarithmic
//! coordinate map `s = ln(1 + γx)/γ` straightens the group action.

use crate::error::{Error, Result};

/// Deformation constant, dimension 1/length.
///
/// Any finite value is admitted here; physical restrictions such as
/// `γL > -1` live in [`crate::params::PhysicalParams`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Deformation {
    gamma: f64,
}

impl Deformation {
    pub fn new(gamma: f64) -> Result<Self> {
        if !gamma.is_finite() {
            return Err(Error::InvalidParams(format!(
                "deformation constant must be finite, got {gamma}"
            )));
        }
        Ok(Self { gamma })
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }
}

/// Deformed addition `a ⊕ b = a + b + γ·a·b`.
///
/// Commutative and associative, reduces to `a + b` at γ = 0.
pub fn deformed_add(a: f64, b: f64, d: Deformation) -> f64 {
    a + b + d.gamma * a * b
}

/// Inverse element of the deformed addition: `a ⊕ deformed_negate(a) = 0`.
pub fn deformed_negate(a: f64, d: Deformation) -> f64 {
    -a / (1.0 + d.gamma * a)
}

/// q-exponential `[1 + (1-q)x]^{1/(1-q)}`, with the ordinary exponential as
/// the q → 1 limit.
///
/// Fails when `1 + (1-q)x ≤ 0`, where the real power is undefined.
pub fn q_exp(x: f64, q: f64) -> Result<f64> {
    let eps = 1.0 - q;
    if eps == 0.0 {
        return Ok(x.exp());
    }
    let base = 1.0 + eps * x;
    if base <= 0.0 {
        return Err(Error::Domain(format!(
            "q_exp undefined: 1 + (1-q)x = {base} <= 0 for x = {x}, q = {q}"
        )));
    }
    // exp(ln(1 + eps*x)/eps) stays smooth through eps -> 0.
    Ok(((eps * x).ln_1p() / eps).exp())
}

/// Displaced point `x + dx·(1 + γx)`: one application of the deformed
/// translation to the position `x`.
pub fn point_translate(x: f64, dx: f64, d: Deformation) -> f64 {
    x + dx * (1.0 + d.gamma * x)
}

/// Logarithmic coordinate `s = ln(1 + γx)/γ`, with `s = x` at γ = 0.
///
/// Strictly increasing on its domain `1 + γx > 0`.
pub fn deformed_coordinate(x: f64, d: Deformation) -> Result<f64> {
    let g = d.gamma;
    if g == 0.0 {
        return Ok(x);
    }
    if 1.0 + g * x <= 0.0 {
        return Err(Error::Domain(format!(
            "deformed coordinate undefined: 1 + gamma*x = {} <= 0",
            1.0 + g * x
        )));
    }
    Ok((g * x).ln_1p() / g)
}

/// Inverse of [`deformed_coordinate`]: `x = (e^{γs} - 1)/γ`.
pub fn inverse_deformed_coordinate(s: f64, d: Deformation) -> f64 {
    let g = d.gamma;
    if g == 0.0 {
        return s;
    }
    (g * s).exp_m1() / g
}
