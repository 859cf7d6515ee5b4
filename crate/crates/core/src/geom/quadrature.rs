use num_complex::Complex;

use super::ConvexDomain;
use crate::error::{Error, Result};
use crate::scalar::{modulus, Real};

/// Trapezoidal rule on a uniform parameter grid of `∂Ω`.
#[derive(Clone, Debug)]
pub struct QuadratureGrid<T: Real> {
    pub n: usize,
    /// Parameters `t_k = 2πk/N`.
    pub params: Vec<T>,
    /// Nodes `ζ_k = γ(t_k)`.
    pub nodes: Vec<Complex<T>>,
    /// Weights `γ'(t_k)·2π/N`, so that `∮ f dζ ≈ Σ f(ζ_k) w_k`.
    pub weights: Vec<Complex<T>>,
}

/// Quadrature grid with `n` nodes (`n ≥ 32`, even).
pub fn quadrature<T: Real>(domain: &ConvexDomain<T>, n: usize) -> Result<QuadratureGrid<T>> {
    if n < 32 || n % 2 != 0 {
        return Err(Error::Parameter(format!(
            "quadrature needs an even node count ≥ 32, got {n}"
        )));
    }
    let h = T::two_pi() / T::from_usize_lossy(n);
    let mut params = Vec::with_capacity(n);
    let mut nodes = Vec::with_capacity(n);
    let mut weights = Vec::with_capacity(n);
    for k in 0..n {
        let t = h * T::from_usize_lossy(k);
        let j = domain.jet(t);
        params.push(t);
        nodes.push(j.z);
        weights.push(j.d1.scale(h));
    }
    Ok(QuadratureGrid {
        n,
        params,
        nodes,
        weights,
    })
}

impl<T: Real> QuadratureGrid<T> {
    /// `∮ f(ζ) dζ`.
    pub fn integrate(&self, mut f: impl FnMut(Complex<T>) -> Complex<T>) -> Complex<T> {
        self.nodes
            .iter()
            .zip(&self.weights)
            .fold(Complex::new(T::zero(), T::zero()), |acc, (z, w)| acc + f(*z) * w)
    }

    /// `(1/2πi) Σ w_k / (ζ_k − z)`: 1 inside, 0 outside.
    pub fn cauchy_index(&self, z: Complex<T>) -> Complex<T> {
        let two_pi_i = Complex::new(T::zero(), T::two_pi());
        self.integrate(|zeta| (zeta - z).inv()) / two_pi_i
    }

    /// `|cauchy_index(z) − 1|`.
    pub fn cauchy_identity_error(&self, z: Complex<T>) -> T {
        modulus(self.cauchy_index(z) - Complex::new(T::one(), T::zero()))
    }

    /// Enclosed area `(1/2) ∮ Im(conj(ζ) dζ)`, spectrally accurate on smooth boundaries.
    pub fn enclosed_area(&self) -> T {
        self.nodes
            .iter()
            .zip(&self.weights)
            .fold(T::zero(), |acc, (z, w)| acc + (z.conj() * w).im)
            / T::lit(2.0)
    }

    /// Distance between consecutive nodes around node `k`.
    pub fn spacing(&self, k: usize) -> T {
        let n = self.n;
        let prev = self.nodes[(k + n - 1) % n];
        let next = self.nodes[(k + 1) % n];
        (modulus(self.nodes[k] - prev)).max(modulus(next - self.nodes[k]))
    }

    /// Nearest node index and its distance to `z`.
    pub fn nearest_node(&self, z: Complex<T>) -> (usize, T) {
        let mut best = (0, modulus(self.nodes[0] - z));
        for (k, zeta) in self.nodes.iter().enumerate().skip(1) {
            let d = modulus(*zeta - z);
            if d < best.1 {
                best = (k, d);
            }
        }
        best
    }

    /// Within two local node spacings of the boundary, where the discrete Cauchy integral loses accuracy.
    pub fn near_boundary(&self, z: Complex<T>) -> bool {
        let (k, d) = self.nearest_node(z);
        d < T::lit(2.0) * self.spacing(k)
    }

    /// Smallest distance from `z` to the nodes.
    pub fn node_distance(&self, z: Complex<T>) -> T {
        self.nearest_node(z).1
    }
}
