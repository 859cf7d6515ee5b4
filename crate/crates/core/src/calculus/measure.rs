use num_complex::Complex;

use crate::error::{Error, Result};
use crate::geom::QuadratureGrid;
use crate::linalg::{hermitian_part, inverse, min_hermitian_eig, spectrum, CMat, Mat};
use crate::scalar::{modulus, Real};

/// Discretized resolvent measure `μ_k = (1/2πi)(ζ_k I − T)^{-1} w_k` on a boundary grid,
/// so that `h(T) ≈ Σ h(ζ_k) μ_k`.
#[derive(Clone, Debug)]
pub struct ResolventMeasure<T: Real> {
    pub dim: usize,
    pub atoms: Vec<Mat<T>>,
    /// `|w_k|`, the arc-length weight of node `k`.
    pub arc: Vec<T>,
}

impl<T: Real> ResolventMeasure<T> {
    /// Fails when a node comes within `1e-8` of the spectrum.
    pub fn new(t: &CMat<T>, grid: &QuadratureGrid<T>) -> Result<Self> {
        let n = t.dim();
        let eigs = spectrum(t)?;
        let gap = T::lit(crate::tolerance::Tolerances::DEFAULT.node_spectrum_gap);
        for (k, z) in grid.nodes.iter().enumerate() {
            if let Some(l) = eigs.iter().find(|l| modulus(*z - **l) < gap) {
                return Err(Error::Numerical {
                    message: format!(
                        "quadrature node {k} lies within 1e-8 of the eigenvalue ({}, {})",
                        l.re.as_f64(),
                        l.im.as_f64()
                    ),
                    trace: Vec::new(),
                });
            }
        }
        let id = Mat::<T>::identity(n, n);
        let scale = Complex::new(T::zero(), -T::one() / T::two_pi());
        let mut atoms = Vec::with_capacity(grid.n);
        for (z, w) in grid.nodes.iter().zip(&grid.weights) {
            let r = inverse(&(&id * *z - t.as_mat())).map_err(|_| Error::Numerical {
                message: "resolvent is numerically singular on the boundary".into(),
                trace: Vec::new(),
            })?;
            atoms.push(r * (scale * w));
        }
        let arc = grid.weights.iter().map(|w| modulus(*w)).collect();
        Ok(ResolventMeasure { dim: n, atoms, arc })
    }

    /// `Σ v_k μ_k`.
    pub fn apply(&self, values: &[Complex<T>]) -> Mat<T> {
        let mut acc = Mat::<T>::zeros(self.dim, self.dim);
        for (m, v) in self.atoms.iter().zip(values) {
            acc += m * *v;
        }
        acc
    }

    /// `Σ conj(v_k) μ_k`.
    pub fn apply_conj(&self, values: &[Complex<T>]) -> Mat<T> {
        let conj: Vec<Complex<T>> = values.iter().map(|v| v.conj()).collect();
        self.apply(&conj)
    }

    /// `Σ v_k Re μ_k` with `Re μ = (μ + μ*)/2`.
    pub fn apply_real_part(&self, values: &[Complex<T>]) -> Mat<T> {
        let mut acc = Mat::<T>::zeros(self.dim, self.dim);
        for (m, v) in self.atoms.iter().zip(values) {
            acc += hermitian_part(m) * *v;
        }
        acc
    }

    /// `‖Σ μ_k − I‖`, the discrete Cauchy-identity residual.
    pub fn identity_residual(&self) -> T {
        let ones = vec![Complex::new(T::one(), T::zero()); self.atoms.len()];
        let s = self.apply(&ones) - Mat::<T>::identity(self.dim, self.dim);
        crate::linalg::op_norm(&s)
    }

    /// Per node, the smallest eigenvalue of `Re μ_k / |w_k|` (density with respect to arc length).
    pub fn density_real_part(&self) -> Vec<T> {
        self.atoms
            .iter()
            .zip(&self.arc)
            .map(|(m, a)| min_hermitian_eig(&hermitian_part(m).unscale(*a)))
            .collect()
    }
}
