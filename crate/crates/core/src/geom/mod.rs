//! Smooth bounded convex domains, their boundary quadrature and containment.

mod quadrature;
mod smoothed;
mod spec;

use std::sync::OnceLock;

use num_complex::Complex;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numeric::golden_max;
use crate::scalar::{arg, cis, is_finite_c, modulus, Real};

pub use quadrature::{quadrature, QuadratureGrid};
pub use smoothed::{domain_from_range, SmoothedRange};
pub use spec::DomainSpec;

/// Points of the convexity / smoothness check.
pub const CHECK_GRID: usize = 1024;

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(bound(serialize = "T: Serialize", deserialize = "T: Deserialize<'de>"))]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum DomainKind<T: Real> {
    Disk { radius: T },
    Ellipse { a: T, b: T, rot: T },
    SmoothedRange(SmoothedRange<T>),
}

/// Convex domain with a smooth, positively oriented boundary `γ: [0, 2π) → ℂ`.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(bound(serialize = "T: Serialize", deserialize = "T: Deserialize<'de>"))]
pub struct ConvexDomain<T: Real> {
    pub center: Complex<T>,
    pub kind: DomainKind<T>,
    #[serde(skip)]
    outline: OnceLock<Outline<T>>,
}

/// Boundary samples on the check grid, computed on first use.
#[derive(Clone, Debug)]
struct Outline<T: Real> {
    points: Vec<Complex<T>>,
    radius: T,
    chord: T,
}

/// Result of a containment query.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Containment {
    Inside,
    OnBoundary,
    Outside,
}

/// `γ`, `γ'` and `γ''` at one parameter value.
#[derive(Clone, Copy, Debug)]
pub struct BoundaryJet<T: Real> {
    pub z: Complex<T>,
    pub d1: Complex<T>,
    pub d2: Complex<T>,
}

pub fn make_disk<T: Real>(center: Complex<T>, radius: T) -> Result<ConvexDomain<T>> {
    if !(radius > T::zero() && radius.is_finite()) || !is_finite_c(center) {
        return Err(Error::Parameter(format!(
            "disk radius must be positive and finite, got {}",
            radius.as_f64()
        )));
    }
    Ok(ConvexDomain::new(center, DomainKind::Disk { radius }))
}

/// Ellipse `c + e^{i·rot}(a cos t + i b sin t)` with `a ≥ b > 0`.
pub fn make_ellipse<T: Real>(center: Complex<T>, a: T, b: T, rot: T) -> Result<ConvexDomain<T>> {
    if !(b > T::zero() && a >= b && a.is_finite() && rot.is_finite()) || !is_finite_c(center) {
        return Err(Error::Parameter(format!(
            "ellipse needs a ≥ b > 0, got a = {}, b = {}",
            a.as_f64(),
            b.as_f64()
        )));
    }
    Ok(ConvexDomain::new(center, DomainKind::Ellipse { a, b, rot }))
}

impl<T: Real> ConvexDomain<T> {
    pub(crate) fn new(center: Complex<T>, kind: DomainKind<T>) -> Self {
        ConvexDomain {
            center,
            kind,
            outline: OnceLock::new(),
        }
    }

    fn outline(&self) -> &Outline<T> {
        self.outline.get_or_init(|| {
            let points = self.polyline(CHECK_GRID);
            let radius = points
                .iter()
                .fold(T::zero(), |m, z| m.max(modulus(*z - self.center)));
            let chord = points
                .iter()
                .zip(points.iter().cycle().skip(1))
                .fold(T::zero(), |c, (a, b)| c.max(modulus(*b - *a)));
            Outline {
                points,
                radius,
                chord,
            }
        })
    }

    pub fn kind_name(&self) -> &'static str {
        match self.kind {
            DomainKind::Disk { .. } => "disk",
            DomainKind::Ellipse { .. } => "ellipse",
            DomainKind::SmoothedRange(_) => "range",
        }
    }

    pub fn jet(&self, t: T) -> BoundaryJet<T> {
        match &self.kind {
            DomainKind::Disk { radius } => {
                let e = cis(t).scale(*radius);
                BoundaryJet {
                    z: self.center + e,
                    d1: e * Complex::i(),
                    d2: -e,
                }
            }
            DomainKind::Ellipse { a, b, rot } => {
                let r = cis(*rot);
                let (s, c) = t.sin_cos();
                let p = Complex::new(*a * c, *b * s);
                BoundaryJet {
                    z: self.center + r * p,
                    d1: r * Complex::new(-*a * s, *b * c),
                    d2: -(r * p),
                }
            }
            DomainKind::SmoothedRange(s) => {
                let mut j = s.jet(t);
                j.z += self.center;
                j
            }
        }
    }

    pub fn gamma(&self, t: T) -> Complex<T> {
        self.jet(t).z
    }

    pub fn dgamma(&self, t: T) -> Complex<T> {
        self.jet(t).d1
    }

    pub fn d2gamma(&self, t: T) -> Complex<T> {
        self.jet(t).d2
    }

    /// Boundary points at `m` uniform parameters.
    pub fn polyline(&self, m: usize) -> Vec<Complex<T>> {
        uniform_params::<T>(m).map(|t| self.gamma(t)).collect()
    }

    /// Largest `|γ(t) − center|` on the check grid.
    pub fn outer_radius(&self) -> T {
        self.outline().radius
    }

    /// Verifies `γ' ≠ 0` and constant positive turning `Im(conj(γ')γ'') > 0` on the check grid.
    pub fn check_invariants(&self) -> Result<()> {
        let scale = self.outer_radius().max(T::default_epsilon());
        let floor = T::default_epsilon() * T::lit(64.0) * scale;
        for (k, t) in uniform_params::<T>(CHECK_GRID).enumerate() {
            let j = self.jet(t);
            if !is_finite_c(j.z) || !is_finite_c(j.d1) || !is_finite_c(j.d2) {
                return Err(Error::Invariant(format!("non-finite boundary at node {k}")));
            }
            if modulus(j.d1) <= floor {
                return Err(Error::Invariant(format!("boundary derivative vanishes at node {k}")));
            }
            let turn = (j.d1.conj() * j.d2).im;
            if turn <= T::zero() {
                return Err(Error::Invariant(format!(
                    "boundary not strictly convex at node {k} (turning {:e})",
                    turn.as_f64()
                )));
            }
        }
        Ok(())
    }

    /// Distance from `z` to the boundary and the nearest boundary parameter.
    pub fn boundary_distance(&self, z: Complex<T>) -> (T, T) {
        if let DomainKind::Disk { radius } = self.kind {
            let w = z - self.center;
            let t = if modulus(w) > T::zero() { arg(w) } else { T::zero() };
            return ((modulus(w) - radius).abs(), t.rem_euclid_2pi());
        }
        let outline = self.outline();
        let step = T::two_pi() / T::from_usize_lossy(CHECK_GRID);
        let mut best = (modulus(outline.points[0] - z), T::zero());
        for (k, p) in outline.points.iter().enumerate() {
            let d = modulus(*p - z);
            if d < best.0 {
                best = (d, step * T::from_usize_lossy(k));
            }
        }
        let (t, neg) = golden_max(
            |s: T| -modulus(self.gamma(s) - z),
            best.1 - step,
            best.1 + step,
            T::default_epsilon().sqrt() * T::lit(1e-2),
        );
        let d = -neg;
        if d < best.0 {
            (d, t.rem_euclid_2pi())
        } else {
            best
        }
    }

    /// Winding-number containment with a distinct on-boundary outcome.
    pub fn locate(&self, z: Complex<T>) -> Containment {
        if !is_finite_c(z) {
            return Containment::Outside;
        }
        let scale = self.outer_radius() + modulus(self.center);
        let tol = T::lit(crate::tolerance::Tolerances::DEFAULT.on_boundary)
            .max(T::default_epsilon() * T::lit(64.0) * scale);
        let (dist, t) = self.boundary_distance(z);
        if dist <= tol {
            return Containment::OnBoundary;
        }
        let outline = self.outline();
        if dist < outline.chord {
            // near the boundary the polygon may misclassify: use the outward normal
            let j = self.jet(t);
            let outward = j.d1 * Complex::new(T::zero(), -T::one());
            let side = (outward.conj() * (z - j.z)).re;
            return if side < T::zero() {
                Containment::Inside
            } else {
                Containment::Outside
            };
        }
        if winding_number(&outline.points, z) == 1 {
            Containment::Inside
        } else {
            Containment::Outside
        }
    }

    /// `true` iff `z` is strictly inside.
    pub fn contains(&self, z: Complex<T>) -> bool {
        self.locate(z) == Containment::Inside
    }

    /// Shoelace area of the `m`-point boundary polygon.
    pub fn polygon_area(&self, m: usize) -> T {
        polygon_area(&self.polyline(m))
    }
}

/// Discrete argument sum `Σ arg((γ_{k+1} − z)/(γ_k − z)) / 2π`, rounded.
pub fn winding_number<T: Real>(pts: &[Complex<T>], z: Complex<T>) -> i64 {
    let n = pts.len();
    let mut total = T::zero();
    for k in 0..n {
        let a = pts[k] - z;
        let b = pts[(k + 1) % n] - z;
        total += arg(b * a.conj());
    }
    (total / T::two_pi()).as_f64().round() as i64
}

/// Signed area of a closed polygon (positive for counter-clockwise order).
pub fn polygon_area<T: Real>(pts: &[Complex<T>]) -> T {
    let n = pts.len();
    let mut s = T::zero();
    for k in 0..n {
        let a = pts[k];
        let b = pts[(k + 1) % n];
        s += a.re * b.im - a.im * b.re;
    }
    s / T::lit(2.0)
}

pub(crate) fn uniform_params<T: Real>(m: usize) -> impl Iterator<Item = T> {
    let step = T::two_pi() / T::from_usize_lossy(m.max(1));
    (0..m).map(move |k| step * T::from_usize_lossy(k))
}

trait Periodic {
    fn rem_euclid_2pi(self) -> Self;
}

impl<T: Real> Periodic for T {
    fn rem_euclid_2pi(self) -> T {
        let p = T::two_pi();
        let r = self - (self / p).floor() * p;
        if r >= p {
            r - p
        } else {
            r
        }
    }
}

#[cfg(test)]
mod tests;
