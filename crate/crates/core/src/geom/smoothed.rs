use num_complex::Complex;
use serde::{Deserialize, Serialize};

use super::{make_disk, BoundaryJet, ConvexDomain};
use crate::error::{Error, Result};
use crate::linalg::{op_norm, support_point, CMat, Mat};
use crate::scalar::{cis, Real};
use crate::trig::TrigSeries;

/// Weight of the curvature term in the boundary parameter (0 = normal angle, 1 = arc length).
const BLEND: f64 = 0.5;
/// Modes are kept while the Gaussian multiplier exceeds `e^{-40}`.
const MODE_CUTOFF: f64 = 40.0;
/// Each retry shrinks the smoothing width by this factor.
const WIDTH_STEP: f64 = 0.75;

/// Boundary `γ(φ) = (h + i h')e^{iφ}` of the convex set with support function `h`,
/// relative to the domain center and reparametrized by a blend of normal angle and arc length.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(bound(serialize = "T: Serialize", deserialize = "T: Deserialize<'de>"))]
pub struct SmoothedRange<T: Real> {
    /// Support function of `Ω − center` in the normal angle.
    support: TrigSeries<T>,
    /// `t(φ) − φ`.
    shift: TrigSeries<T>,
    /// Gaussian smoothing width in the normal angle.
    pub width: T,
    pub margin: T,
    /// Constant added to the smoothed support function of `W(T) − c`.
    pub offset: T,
    /// Angles at which `W(T)` was sampled.
    pub samples: usize,
}

impl<T: Real> SmoothedRange<T> {
    fn new(support: TrigSeries<T>, blend: T, width: T, margin: T, offset: T, samples: usize) -> Self {
        let a0 = support.mean();
        let mut shift = vec![Complex::new(T::zero(), T::zero()); support.coeffs().len()];
        let mut sum_re = T::zero();
        for (k, c) in support.coeffs().iter().enumerate().skip(1) {
            let kf = T::from_usize_lossy(k);
            // λ c_k (1 − k²) / (i k a0), so that dt/dφ = 1 − λ + λ ρ(φ)/a0
            let g = (*c * Complex::new(T::zero(), -T::one()))
                .scale(blend * (T::one() - kf * kf) / (kf * a0));
            sum_re += g.re;
            shift[k] = g;
        }
        shift[0] = Complex::new(-(sum_re + sum_re), T::zero());
        SmoothedRange {
            support,
            shift: TrigSeries::from_coeffs(shift),
            width,
            margin,
            offset,
            samples,
        }
    }

    pub fn support_series(&self) -> &TrigSeries<T> {
        &self.support
    }

    /// Support function of `Ω − center` at normal angle `φ`.
    pub fn support_value(&self, phi: T) -> T {
        self.support.eval(phi)
    }

    /// Normal angle `φ` of the boundary point with parameter `t`.
    pub fn normal_angle(&self, t: T) -> T {
        self.shift.solve_shifted(t)
    }

    pub(crate) fn jet(&self, t: T) -> BoundaryJet<T> {
        let phi = self.normal_angle(t);
        let [h, h1, h2, h3] = self.support.derivatives::<4>(phi);
        let [_, s1, s2] = self.shift.derivatives::<3>(phi);
        let e = cis(phi);
        let ie = Complex::new(-e.im, e.re);
        let rho = h + h2;
        let drho = h1 + h3;
        let tau = T::one() + s1;
        let z = Complex::new(h, h1) * e;
        let dphi = ie.scale(rho);
        let d2phi = ie.scale(drho) - e.scale(rho);
        let d1 = dphi.unscale(tau);
        let d2 = (d2phi.unscale(tau) - dphi.scale(s2 / (tau * tau))).unscale(tau);
        BoundaryJet { z, d1, d2 }
    }
}

/// Smooth convex neighbourhood of `W(T)`.
///
/// The support function of `W(T) − c` (`c = tr T / n`) is sampled on at least `k` angles,
/// Gaussian-smoothed and raised by a constant chosen so that
/// `margin/2 ≤ h_Ω − h_W ≤ margin` on a refined check sweep; the smoothing width
/// shrinks until that band is met.
pub fn domain_from_range<T: Real>(t: &CMat<T>, margin: T, k: usize) -> Result<ConvexDomain<T>> {
    if !(margin > T::zero() && margin.is_finite()) {
        return Err(Error::Parameter(format!(
            "margin must be positive, got {}",
            margin.as_f64()
        )));
    }
    if k < 8 {
        return Err(Error::Parameter(format!("need at least 8 support angles, got {k}")));
    }
    let n = t.dim();
    let c = t.trace().unscale(T::from_usize_lossy(n));
    let shifted = t.as_mat() - Mat::<T>::identity(n, n) * c;
    let radius = op_norm(&shifted);
    if radius <= T::lit(1e-12) * (T::one() + c.norm_sqr().sqrt()) {
        return make_disk(c, margin);
    }

    let blend = T::lit(BLEND);
    let lower = margin * T::lit(0.5);
    let slack = margin * T::lit(1.0 / 16.0);
    let mut width = (T::lit(0.75) * margin / radius).sqrt().min(T::lit(0.5));
    let floor = margin / (T::lit(64.0) * radius);
    let mut trace = Vec::new();
    loop {
        let needed = (T::lit(16.0) * T::pi() / width).ceil().as_f64() as usize;
        let samples = needed.max(k).next_power_of_two();
        let values: Vec<T> = (0..samples)
            .map(|j| support_point(&shifted, angle::<T>(j, samples)).1)
            .collect();
        let raw = TrigSeries::from_samples(&values);
        let modes = ((T::lit(2.0 * MODE_CUTOFF)).sqrt() / width).ceil().as_f64() as usize;
        let half_w2 = width * width / T::lit(2.0);
        let smooth = raw
            .truncated(modes.min(raw.degree()))
            .filtered(|m| (-half_w2 * T::from_usize_lossy(m * m)).exp());

        // deviation at the sample angles and at the midpoints
        let mut dev_lo = T::max_value().unwrap_or_else(|| T::lit(1e300));
        let mut dev_hi = -dev_lo;
        for j in 0..2 * samples {
            let phi = angle::<T>(j, 2 * samples);
            let hw = if j % 2 == 0 {
                values[j / 2]
            } else {
                support_point(&shifted, phi).1
            };
            let dev = smooth.eval(phi) - hw;
            dev_lo = dev_lo.min(dev);
            dev_hi = dev_hi.max(dev);
        }
        let offset = margin - slack - dev_hi;
        trace.extend([width.as_f64(), dev_lo.as_f64(), dev_hi.as_f64()]);
        if offset + dev_lo >= lower + slack {
            let mut coeffs = smooth.coeffs().to_vec();
            coeffs[0].re += offset;
            let support = TrigSeries::from_coeffs(coeffs);
            let dom = ConvexDomain::new(
                c,
                super::DomainKind::SmoothedRange(SmoothedRange::new(
                    support, blend, width, margin, offset, samples,
                )),
            );
            dom.check_invariants()?;
            return Ok(dom);
        }
        width *= T::lit(WIDTH_STEP);
        if width < floor {
            return Err(Error::Numerical {
                message: "support-function smoothing did not reach the margin band".into(),
                trace,
            });
        }
    }
}

fn angle<T: Real>(j: usize, m: usize) -> T {
    T::two_pi() * T::from_usize_lossy(j) / T::from_usize_lossy(m)
}
