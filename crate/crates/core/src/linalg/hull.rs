//! Planar convex hulls of complex point sets.

use num_complex::Complex;

use crate::scalar::{modulus, Real};

fn cross<T: Real>(o: Complex<T>, a: Complex<T>, b: Complex<T>) -> T {
    (a.re - o.re) * (b.im - o.im) - (a.im - o.im) * (b.re - o.re)
}

/// Counter-clockwise convex hull (Andrew's monotone chain).
#[derive(Clone, Debug)]
pub struct ConvexHull<T: Real> {
    vertices: Vec<Complex<T>>,
}

impl<T: Real> ConvexHull<T> {
    pub fn new(points: &[Complex<T>]) -> Self {
        let mut pts: Vec<Complex<T>> = points.to_vec();
        pts.sort_by(|a, b| {
            a.re.partial_cmp(&b.re)
                .unwrap_or(std::cmp::Ordering::Equal)
                .then(a.im.partial_cmp(&b.im).unwrap_or(std::cmp::Ordering::Equal))
        });
        pts.dedup();
        if pts.len() < 3 {
            return ConvexHull { vertices: pts };
        }
        let mut lower: Vec<Complex<T>> = Vec::new();
        for &p in &pts {
            while lower.len() >= 2 && cross(lower[lower.len() - 2], lower[lower.len() - 1], p) <= T::zero() {
                lower.pop();
            }
            lower.push(p);
        }
        let mut upper: Vec<Complex<T>> = Vec::new();
        for &p in pts.iter().rev() {
            while upper.len() >= 2 && cross(upper[upper.len() - 2], upper[upper.len() - 1], p) <= T::zero() {
                upper.pop();
            }
            upper.push(p);
        }
        lower.pop();
        upper.pop();
        lower.extend(upper);
        ConvexHull { vertices: lower }
    }

    pub fn vertices(&self) -> &[Complex<T>] {
        &self.vertices
    }

    /// Distance from `z` to the hull; zero for points inside.
    pub fn distance(&self, z: Complex<T>) -> T {
        let v = &self.vertices;
        match v.len() {
            0 => T::max_value().unwrap_or_else(T::one),
            1 => modulus(z - v[0]),
            2 => segment_distance(z, v[0], v[1]),
            n => {
                let inside = (0..n).all(|i| cross(v[i], v[(i + 1) % n], z) >= T::zero());
                if inside {
                    return T::zero();
                }
                (0..n)
                    .map(|i| segment_distance(z, v[i], v[(i + 1) % n]))
                    .fold(T::max_value().unwrap_or_else(T::one), |m, d| m.min(d))
            }
        }
    }
}

fn segment_distance<T: Real>(z: Complex<T>, a: Complex<T>, b: Complex<T>) -> T {
    let ab = b - a;
    let len2 = ab.norm_sqr();
    if len2 == T::zero() {
        return modulus(z - a);
    }
    let t = ((z - a) * ab.conj()).re / len2;
    let t = t.max(T::zero()).min(T::one());
    modulus(z - (a + ab.scale(t)))
}
