//! Class `C_ρ` membership, unitary ρ-dilations, cb-norm estimation and the 2×2
//! similarity construction.

mod cb;
mod pair;
mod similarity;

pub use cb::{cb_norm_estimate, matrix_sup, CbEstimate, CbWitness, MatrixPoly, MAX_CB_LEVEL};
pub use pair::{
    dilation_residuals, schaffer_dilation, truncated_dilation, verify_rho_dilation, DilationCheck,
    DilationMeta, DilationPair,
};
pub use similarity::{equiv_checks, similarity_cb_check, singleton_similarity, Singleton};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{numerical_radius, spectral_norm, CMat};

/// Directions in the numerical-radius sweep.
pub const RADIUS_SWEEP: usize = 256;
const MEMBERSHIP_SLACK: f64 = 1e-10;

/// Verdict of a class-membership test, with `margin = 1 − value`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Membership {
    pub member: bool,
    /// `‖T‖` for `ρ = 1`, `w(T)` for `ρ = 2`.
    pub value: f64,
    pub margin: f64,
}

/// Parses `ρ ∈ {1, 2}`.
pub fn check_rho(rho: f64) -> Result<()> {
    if rho == 1.0 || rho == 2.0 {
        Ok(())
    } else {
        Err(Error::Unsupported(format!(
            "class membership is only characterized for rho in {{1, 2}}, got {rho}"
        )))
    }
}

/// `T ∈ C_1` iff `‖T‖ ≤ 1`; `T ∈ C_2` iff `w(T) ≤ 1`.
pub fn class_membership(t: &CMat<f64>, rho: f64) -> Result<Membership> {
    check_rho(rho)?;
    let value = if rho == 1.0 {
        spectral_norm(t)
    } else {
        numerical_radius(t, RADIUS_SWEEP)
    };
    Ok(Membership {
        member: value <= 1.0 + MEMBERSHIP_SLACK,
        value,
        margin: 1.0 - value,
    })
}

#[cfg(test)]
mod tests;
