use num_complex::Complex;

use super::AnalyticFn;
use crate::error::{Error, Result};
use crate::geom::QuadratureGrid;
use crate::scalar::Real;

/// A value of `C_Ω h̄` with a flag for points within two node spacings of `∂Ω`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CauchyValue<T: Real> {
    pub value: Complex<T>,
    pub low_accuracy: bool,
}

fn conj_values<T: Real>(h: &AnalyticFn<T>, grid: &QuadratureGrid<T>) -> Vec<Complex<T>> {
    grid.nodes.iter().map(|z| h.eval(*z).conj()).collect()
}

/// `(1/2πi) ∮ conj(h(ζ))/(ζ − z) dζ` at an interior point `z`.
///
/// Evaluated in barycentric form, which is exact for constants and stays accurate
/// close to the boundary.
pub fn cauchy_transform<T: Real>(h: &AnalyticFn<T>, grid: &QuadratureGrid<T>, z: Complex<T>) -> CauchyValue<T> {
    cauchy_transform_points(h, grid, &[z])[0]
}

pub fn cauchy_transform_points<T: Real>(
    h: &AnalyticFn<T>,
    grid: &QuadratureGrid<T>,
    points: &[Complex<T>],
) -> Vec<CauchyValue<T>> {
    let vals = conj_values(h, grid);
    points
        .iter()
        .map(|z| CauchyValue {
            value: super::function::barycentric_cauchy(&grid.nodes, &grid.weights, &vals, *z),
            low_accuracy: grid.near_boundary(*z),
        })
        .collect()
}

/// `C_Ω h̄` sampled on the homothetic inner curve `c + r(ζ_k − c)`, packaged as a
/// boundary-sample function on that curve.  The flag reports whether any sample
/// point was low-accuracy.
pub fn cauchy_transform_samples<T: Real>(
    h: &AnalyticFn<T>,
    grid: &QuadratureGrid<T>,
    center: Complex<T>,
    shrink: T,
) -> Result<(AnalyticFn<T>, bool)> {
    if !(shrink > T::zero() && shrink < T::one()) {
        return Err(Error::Parameter("shrink factor must lie in (0, 1)".into()));
    }
    let inner = QuadratureGrid {
        n: grid.n,
        params: grid.params.clone(),
        nodes: grid.nodes.iter().map(|z| center + (*z - center).scale(shrink)).collect(),
        weights: grid.weights.iter().map(|w| w.scale(shrink)).collect(),
    };
    let vals = cauchy_transform_points(h, grid, &inner.nodes);
    let low = vals.iter().any(|v| v.low_accuracy);
    let f = AnalyticFn::from_samples(&inner, vals.into_iter().map(|v| v.value).collect())?;
    Ok((f, low))
}
