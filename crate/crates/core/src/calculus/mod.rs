//! Functional calculus on convex domains: resolvent integrals, the Cauchy transform,
//! the homomorphism `θ`, the maps `θ_α`, and norm estimation.

mod alpha;
mod cauchy;
mod estimate;
pub mod function;
mod instance;
mod measure;

pub use alpha::{AlphaKind, AlphaRep, ScalarFunctional};
pub use cauchy::{cauchy_transform, cauchy_transform_points, cauchy_transform_samples, CauchyValue};
pub use estimate::{
    estimate_shift_norm, estimate_theta_norm, witness_sup, ShiftEstimate, ThetaEstimate, Witness,
    MAX_POLY_DEGREE,
};
pub use function::{AnalyticFn, DomainTag, FnRepr};
pub use instance::{
    fun_calc, resolvent_density_real_part, theta, theta_alpha, theta_of_alpha, HomInstance,
};
pub use measure::ResolventMeasure;

#[cfg(test)]
mod tests;
