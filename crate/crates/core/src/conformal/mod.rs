//! Numerical Riemann maps of convex domains onto the unit disk, and disk automorphisms.

mod mobius;
mod szego;
mod theodorsen;

use num_complex::Complex;
use serde::{Deserialize, Serialize};

use crate::calculus::function::barycentric_cauchy;
use crate::error::{Error, Result};
use crate::geom::{quadrature, ConvexDomain, QuadratureGrid};
use crate::scalar::{arg, cexp, cis, modulus, Real};
use crate::trig::TrigSeries;

pub use mobius::{matrix_mobius, mobius};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MapMethod {
    /// Conjugate-function iteration on the polar representation.
    Theodorsen,
    /// Szegő-kernel integral equation.
    Szego,
    /// Theodorsen, falling back to the Szegő kernel when the iteration fails.
    Auto,
}

/// Riemann map `φ: Ω → 𝔻` with `φ(z0) = 0`, `φ'(z0) > 0`.
///
/// Interior values use `φ(z) = (z − z0) exp(q(z))` with `q` the Cauchy integral of
/// `log(φ(ζ)/(ζ − z0))` over the boundary grid, and likewise `φ^{-1}(w) = z0 + w exp(p(w))`.
#[derive(Clone, Debug)]
pub struct ConformalMap<T: Real> {
    pub domain: ConvexDomain<T>,
    pub z0: Complex<T>,
    pub n: usize,
    /// Method that produced the boundary correspondence.
    pub method: MapMethod,
    /// Per-iteration update sizes of the Theodorsen iteration (empty for the Szegő kernel).
    pub trace: Vec<f64>,
    grid: QuadratureGrid<T>,
    /// Boundary angles `s_k` at the uniform parameters `t_k` (increasing, unwrapped).
    angles: Vec<T>,
    /// `s(t) − t`.
    corr: TrigSeries<T>,
    log_forward: Vec<Complex<T>>,
    /// `φ^{-1}(e^{iσ_j})` at uniform disk angles.
    inverse_points: Vec<Complex<T>>,
    log_inverse: Vec<Complex<T>>,
    circle: Vec<Complex<T>>,
    circle_weights: Vec<Complex<T>>,
}

fn check_size(n: usize) -> Result<()> {
    if n < 128 || !n.is_power_of_two() {
        return Err(Error::Parameter(format!(
            "map grid size must be a power of two ≥ 128, got {n}"
        )));
    }
    Ok(())
}

/// Mean of the boundary nodes of an `n`-point quadrature grid.
pub fn default_center<T: Real>(domain: &ConvexDomain<T>, n: usize) -> Result<Complex<T>> {
    let g = quadrature(domain, n)?;
    let sum = g
        .nodes
        .iter()
        .fold(Complex::new(T::zero(), T::zero()), |a, z| a + z);
    Ok(sum.unscale(T::from_usize_lossy(n)))
}

/// Riemann map normalized at `z0` (default: centroid of the boundary nodes) with the
/// automatic method choice.
pub fn riemann_map<T: Real>(
    domain: &ConvexDomain<T>,
    z0: Option<Complex<T>>,
    n: usize,
) -> Result<ConformalMap<T>> {
    riemann_map_with(domain, z0, n, MapMethod::Auto)
}

pub fn riemann_map_with<T: Real>(
    domain: &ConvexDomain<T>,
    z0: Option<Complex<T>>,
    n: usize,
    method: MapMethod,
) -> Result<ConformalMap<T>> {
    check_size(n)?;
    let z0 = match z0 {
        Some(z) => z,
        None => default_center(domain, n)?,
    };
    if !domain.contains(z0) {
        return Err(Error::Precondition(
            "normalization point is not inside the domain".into(),
        ));
    }
    let grid = quadrature(domain, n)?;
    let (angles, used, trace) = match method {
        MapMethod::Theodorsen => {
            let s = theodorsen::solve(domain, z0, n)?;
            (s.angles, MapMethod::Theodorsen, s.trace)
        }
        MapMethod::Szego => (szego::solve(&grid, z0)?, MapMethod::Szego, Vec::new()),
        MapMethod::Auto => match theodorsen::solve(domain, z0, n) {
            Ok(s) => (s.angles, MapMethod::Theodorsen, s.trace),
            Err(Error::Numerical { .. }) | Err(Error::Domain(_)) => {
                (szego::solve(&grid, z0)?, MapMethod::Szego, Vec::new())
            }
            Err(e) => return Err(e),
        },
    };
    ConformalMap::assemble(domain.clone(), z0, grid, used, angles, trace)
}

/// Continuous branch of the angles `values` (each defined modulo 2π).
fn unwrap<T: Real>(values: &mut [T]) {
    for j in 1..values.len() {
        let k = ((values[j] - values[j - 1]) / T::two_pi()).round();
        values[j] -= k * T::two_pi();
    }
}

fn log_boundary<T: Real>(grid: &QuadratureGrid<T>, z0: Complex<T>, angles: &[T]) -> Vec<Complex<T>> {
    let mut polar: Vec<T> = grid.nodes.iter().map(|z| arg(*z - z0)).collect();
    unwrap(&mut polar);
    let offset = ((angles[0] - polar[0]) / T::two_pi()).round() * T::two_pi();
    (0..grid.n)
        .map(|k| {
            Complex::new(
                -modulus(grid.nodes[k] - z0).ln(),
                angles[k] - polar[k] - offset,
            )
        })
        .collect()
}

fn check_increasing<T: Real>(angles: &[T], trace: &[f64]) -> Result<()> {
    let n = angles.len();
    for k in 0..n {
        let next = if k + 1 < n { angles[k + 1] } else { angles[0] + T::two_pi() };
        if !(next > angles[k]) {
            return Err(Error::Numerical {
                message: format!("boundary correspondence is not increasing at node {k}"),
                trace: trace.to_vec(),
            });
        }
    }
    Ok(())
}

impl<T: Real> ConformalMap<T> {
    /// Unwraps raw boundary angles and rotates them so that `φ'(z0) > 0`.
    fn assemble(
        domain: ConvexDomain<T>,
        z0: Complex<T>,
        grid: QuadratureGrid<T>,
        method: MapMethod,
        raw_angles: Vec<T>,
        trace: Vec<f64>,
    ) -> Result<Self> {
        let n = grid.n;
        let mut dev: Vec<T> = raw_angles
            .iter()
            .zip(&grid.params)
            .map(|(s, t)| *s - *t)
            .collect();
        unwrap(&mut dev);
        let drift = (dev[0] - dev[n - 1]) / T::two_pi();
        if drift.abs() > T::lit(0.25) {
            return Err(Error::Numerical {
                message: "boundary correspondence does not wind once".into(),
                trace,
            });
        }
        let mut angles: Vec<T> = dev.iter().zip(&grid.params).map(|(d, t)| *d + *t).collect();
        check_increasing(&angles, &trace)?;
        let q0 = barycentric_cauchy(&grid.nodes, &grid.weights, &log_boundary(&grid, z0, &angles), z0);
        let first = angles[0] - q0.im;
        let branch = (first / T::two_pi()).round() * T::two_pi();
        for s in angles.iter_mut() {
            *s -= q0.im + branch;
        }
        Ok(Self::build(domain, z0, grid, method, angles, trace))
    }

    fn build(
        domain: ConvexDomain<T>,
        z0: Complex<T>,
        grid: QuadratureGrid<T>,
        method: MapMethod,
        angles: Vec<T>,
        trace: Vec<f64>,
    ) -> Self {
        let n = grid.n;
        let log_forward = log_boundary(&grid, z0, &angles);
        let dev: Vec<T> = angles.iter().zip(&grid.params).map(|(s, t)| *s - *t).collect();
        let corr = TrigSeries::from_samples(&dev);

        let h = T::two_pi() / T::from_usize_lossy(n);
        let circle: Vec<Complex<T>> = (0..n).map(|j| cis(h * T::from_usize_lossy(j))).collect();
        let circle_weights: Vec<Complex<T>> = circle
            .iter()
            .map(|u| u * Complex::new(T::zero(), h))
            .collect();
        let inverse_points: Vec<Complex<T>> = (0..n)
            .map(|j| domain.gamma(corr.solve_shifted(h * T::from_usize_lossy(j))))
            .collect();
        let mut inv_arg: Vec<T> = inverse_points.iter().map(|z| arg(*z - z0)).collect();
        unwrap(&mut inv_arg);
        let base = (inv_arg[0] / T::two_pi()).round() * T::two_pi();
        let log_inverse = (0..n)
            .map(|j| {
                Complex::new(
                    modulus(inverse_points[j] - z0).ln(),
                    inv_arg[j] - base - h * T::from_usize_lossy(j),
                )
            })
            .collect();

        ConformalMap {
            domain,
            z0,
            n,
            method,
            trace,
            grid,
            angles,
            corr,
            log_forward,
            inverse_points,
            log_inverse,
            circle,
            circle_weights,
        }
    }

    /// Boundary angle `s(t)` with `φ(γ(t)) = e^{is(t)}`.
    pub fn boundary_angle(&self, t: T) -> T {
        t + self.corr.eval(t)
    }

    /// `φ(γ(t))`.
    pub fn boundary_value(&self, t: T) -> Complex<T> {
        cis(self.boundary_angle(t))
    }

    /// Boundary angles at the grid parameters `t_k = 2πk/n`.
    pub fn boundary_angles(&self) -> &[T] {
        &self.angles
    }

    /// `φ^{-1}(e^{iσ_j})` at `σ_j = 2πj/n`.
    pub fn inverse_boundary(&self) -> &[Complex<T>] {
        &self.inverse_points
    }

    pub fn grid(&self) -> &QuadratureGrid<T> {
        &self.grid
    }

    pub fn forward(&self, z: Complex<T>) -> Complex<T> {
        let d = z - self.z0;
        if d.norm_sqr() == T::zero() {
            return Complex::new(T::zero(), T::zero());
        }
        d * cexp(barycentric_cauchy(&self.grid.nodes, &self.grid.weights, &self.log_forward, z))
    }

    pub fn inverse(&self, w: Complex<T>) -> Complex<T> {
        if w.norm_sqr() == T::zero() {
            return self.z0;
        }
        self.z0 + w * cexp(barycentric_cauchy(&self.circle, &self.circle_weights, &self.log_inverse, w))
    }

    /// `φ'(z0) = exp(q(z0))`; real and positive up to rounding.
    pub fn derivative_at_center(&self) -> Complex<T> {
        cexp(barycentric_cauchy(&self.grid.nodes, &self.grid.weights, &self.log_forward, self.z0))
    }

    /// Within two node spacings of the boundary, where interior values lose accuracy.
    pub fn near_boundary(&self, z: Complex<T>) -> bool {
        self.grid.near_boundary(z)
    }
}

/// Serialized map: domain, normalization and boundary correspondence.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct MapDump {
    pub domain: ConvexDomain<f64>,
    pub z0: [f64; 2],
    pub n: usize,
    pub method: MapMethod,
    /// Boundary angles at `t_k = 2πk/n`.
    pub boundary_corr: Vec<f64>,
}

impl ConformalMap<f64> {
    pub fn dump(&self) -> MapDump {
        MapDump {
            domain: self.domain.clone(),
            z0: [self.z0.re, self.z0.im],
            n: self.n,
            method: self.method,
            boundary_corr: self.angles.clone(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.dump()).expect("map dump serializes")
    }

    /// Rebuilds a map from its dump; evaluation is bit-identical to the dumped map.
    pub fn from_dump(d: MapDump) -> Result<Self> {
        check_size(d.n)?;
        if d.boundary_corr.len() != d.n {
            return Err(Error::Input("boundary correspondence length differs from n".into()));
        }
        let grid = quadrature(&d.domain, d.n)?;
        let z0 = Complex::new(d.z0[0], d.z0[1]);
        check_increasing(&d.boundary_corr, &[])?;
        Ok(ConformalMap::build(d.domain, z0, grid, d.method, d.boundary_corr, Vec::new()))
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let d: MapDump = serde_json::from_str(text).map_err(|e| Error::Input(format!("map dump: {e}")))?;
        Self::from_dump(d)
    }
}

#[cfg(test)]
mod tests;
