pub mod calculus;
pub mod conformal;
pub mod dilation;
pub mod error;
pub mod geom;
pub mod generate;
pub mod inequalities;
pub mod linalg;
pub mod numeric;
pub mod report;
pub mod scalar;
pub mod tolerance;
pub mod trig;

pub use error::{Error, Result};

/// Complex scalar at double precision.
pub type C64 = num_complex::Complex64;
pub type Matrix = linalg::CMat<f64>;
pub type Domain = geom::ConvexDomain<f64>;
pub type Grid = geom::QuadratureGrid<f64>;
pub type Map = conformal::ConformalMap<f64>;
pub type Function = calculus::AnalyticFn<f64>;
pub type Instance = calculus::HomInstance<f64>;
pub type Alpha = calculus::AlphaRep<f64>;
pub type Functional = calculus::ScalarFunctional<f64>;
pub type Measure = calculus::ResolventMeasure<f64>;
