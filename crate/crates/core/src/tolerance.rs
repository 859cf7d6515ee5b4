use serde::{Deserialize, Serialize};

/// Tolerance defaults shared by every check in the crate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    /// Residual of eigen/singular relations and triangularity.
    pub residual: f64,
    /// Unitarity defect `‖U*U - I‖`.
    pub unitarity: f64,
    /// Distance below which a point counts as lying on a domain boundary.
    pub on_boundary: f64,
    /// Pairwise commutator norm accepted as "commuting".
    pub commute: f64,
    /// Minimal distance between a quadrature node and the spectrum.
    pub node_spectrum_gap: f64,
    /// Slack for norm estimates compared against theorem bounds.
    pub estimate: f64,
}

impl Tolerances {
    pub const DEFAULT: Tolerances = Tolerances {
        residual: 1e-8,
        unitarity: 1e-10,
        on_boundary: 1e-10,
        commute: 1e-8,
        node_spectrum_gap: 1e-8,
        estimate: 1e-4,
    };
}

impl Default for Tolerances {
    fn default() -> Self {
        Self::DEFAULT
    }
}
