use num_complex::Complex;

use crate::error::{Error, Result};
use crate::geom::QuadratureGrid;
use crate::linalg::{Mat, Vector};
use crate::scalar::{arg, modulus, Real};

/// Boundary angles of the Riemann map from the Szegő kernel: Nyström solve of the
/// Kerzman–Stein equation `S(w, z0) − ∫ A(w, z) S(z, z0) ds_z = conj(H(z0, w))` with
/// `A(w, z) = H(w, z) − conj(H(z, w))`, then
/// `φ(ζ) = S(ζ, z0)² T(ζ) / (i |S(ζ, z0)|²)` on the boundary.
pub(super) fn solve<T: Real>(grid: &QuadratureGrid<T>, z0: Complex<T>) -> Result<Vec<T>> {
    let n = grid.n;
    let tangent: Vec<Complex<T>> = grid.weights.iter().map(|w| w.unscale(modulus(*w))).collect();
    let arclen: Vec<T> = grid.weights.iter().map(|w| modulus(*w)).collect();
    let inv_2pi_i = Complex::new(T::zero(), -T::one() / T::two_pi());
    // Cauchy kernel with respect to arc length
    let h = |z: Complex<T>, k: usize| inv_2pi_i * tangent[k] / (grid.nodes[k] - z);
    let mut a = Mat::<T>::identity(n, n);
    for k in 0..n {
        for j in 0..n {
            if j != k {
                let kern = h(grid.nodes[k], j) - h(grid.nodes[j], k).conj();
                a[(k, j)] -= kern.scale(arclen[j]);
            }
        }
    }
    let rhs = Vector::<T>::from_iterator(n, (0..n).map(|k| h(z0, k).conj()));
    let s = a
        .lu()
        .solve(&rhs)
        .ok_or_else(|| Error::numerical("Szegő system is singular"))?;
    let minus_i = Complex::new(T::zero(), -T::one());
    Ok((0..n).map(|k| arg(s[k] * s[k] * tangent[k] * minus_i)).collect())
}
