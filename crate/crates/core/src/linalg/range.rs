use num_complex::Complex;

use super::{decomp::top_hermitian_eigpair, inner, CMat, Mat};
use crate::error::{Error, Result};
use crate::numeric::golden_max;
use crate::scalar::{cis, modulus, Real};

/// Sampled boundary of the numerical range `W(T)` from the support-function sweep.
#[derive(Clone, Debug)]
pub struct RangeBoundary<T: Real> {
    /// Sweep angles `φ_k = 2πk/K`.
    pub angles: Vec<T>,
    /// `⟨T x_k, x_k⟩` for `x_k` a top eigenvector of `Re(e^{-iφ_k} T)`.
    pub support_points: Vec<Complex<T>>,
    /// Support function values `h(φ_k) = λ_max(Re(e^{-iφ_k} T))`.
    pub support_values: Vec<T>,
    /// Largest modulus among the support points.
    pub radius: T,
}

impl<T: Real> RangeBoundary<T> {
    /// Euclidean distance from `z` to the convex hull of the support points.
    pub fn distance_outside(&self, z: Complex<T>) -> T {
        super::hull::ConvexHull::new(&self.support_points).distance(z)
    }
}

fn rotated_hermitian<T: Real>(t: &Mat<T>, phi: T) -> Mat<T> {
    let rot = cis(-phi);
    let r = t.map(|z| z * rot);
    (&r + r.adjoint()).unscale(T::lit(2.0))
}

/// `h_W(φ) = max Re(e^{-iφ} w)` over `w ∈ W(T)`.
pub fn support_value<T: Real>(t: &CMat<T>, phi: T) -> T {
    top_hermitian_eigpair(&rotated_hermitian(t.as_mat(), phi)).0
}

/// Support point of `W(T)` in direction `e^{iφ}` together with the support value.
pub(crate) fn support_point<T: Real>(t: &Mat<T>, phi: T) -> (Complex<T>, T) {
    let (lambda, x) = top_hermitian_eigpair(&rotated_hermitian(t, phi));
    let tx = t * &x;
    (inner(&tx, &x), lambda)
}

/// Angle sweep of the numerical range with `k` directions (`k ≥ 8`).
pub fn numerical_range<T: Real>(t: &CMat<T>, k: usize) -> Result<RangeBoundary<T>> {
    if k < 8 {
        return Err(Error::Parameter(format!(
            "numerical range needs at least 8 directions, got {k}"
        )));
    }
    let mut angles = Vec::with_capacity(k);
    let mut points = Vec::with_capacity(k);
    let mut values = Vec::with_capacity(k);
    for j in 0..k {
        let phi = T::two_pi() * T::from_usize_lossy(j) / T::from_usize_lossy(k);
        let (p, h) = support_point(t.as_mat(), phi);
        angles.push(phi);
        points.push(p);
        values.push(h);
    }
    let radius = points.iter().fold(T::zero(), |m, p| m.max(modulus(*p)));
    Ok(RangeBoundary {
        angles,
        support_points: points,
        support_values: values,
        radius,
    })
}

/// Numerical radius `w(T) = max_φ λ_max(Re(e^{-iφ}T))`: a `sweep`-angle scan
/// refined by golden-section search around the best few angles.
pub fn numerical_radius<T: Real>(t: &CMat<T>, sweep: usize) -> T {
    let sweep = sweep.max(8);
    let step = T::two_pi() / T::from_usize_lossy(sweep);
    let mut samples: Vec<(T, T)> = (0..sweep)
        .map(|j| {
            let phi = step * T::from_usize_lossy(j);
            (support_value(t, phi), phi)
        })
        .collect();
    samples.sort_by(|a, b| b.0.partial_cmp(&a.0).unwrap_or(std::cmp::Ordering::Equal));
    let mut best = samples[0].0;
    for &(_, phi) in samples.iter().take(3) {
        let (_, v) = golden_max(|p| support_value(t, p), phi - step, phi + step, T::lit(1e-12));
        best = best.max(v);
    }
    best
}
