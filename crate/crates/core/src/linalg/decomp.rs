use nalgebra::{DVector, Schur, SymmetricEigen};
use num_complex::Complex;

use super::{fix_phase, CMat, Mat, UnitVec, Vector};
use crate::error::{Error, Result};
use crate::scalar::{modulus, Real};

/// Largest singular value of an arbitrary (possibly rectangular) matrix.
pub fn op_norm<T: Real>(a: &Mat<T>) -> T {
    if a.is_empty() {
        return T::zero();
    }
    a.clone()
        .svd(false, false)
        .singular_values
        .iter()
        .fold(T::zero(), |m, s| m.max(*s))
}

/// Spectral norm `‖A‖ = σ_max(A)`.
pub fn spectral_norm<T: Real>(a: &CMat<T>) -> T {
    op_norm(a.as_mat())
}

/// Eigenvalues with multiplicity, from a complex Schur decomposition.
pub fn spectrum<T: Real>(a: &CMat<T>) -> Result<Vec<Complex<T>>> {
    let n = a.dim();
    if n == 1 {
        return Ok(vec![a[(0, 0)]]);
    }
    let scale = op_norm(a.as_mat());
    let schur = Schur::try_new(a.as_mat().clone(), T::default_epsilon(), 1000 * n).ok_or_else(
        || Error::Numerical {
            message: format!("Schur iteration did not converge (dim {n})"),
            trace: vec![n as f64, scale.as_f64()],
        },
    )?;
    let (_, t) = schur.unpack();
    let sub = (1..n).fold(T::zero(), |m, i| m.max(modulus(t[(i, i - 1)])));
    if sub > T::lit(1e-8) * (T::one() + scale) {
        return Err(Error::Numerical {
            message: format!("Schur form not triangular, subdiagonal {}", sub.as_f64()),
            trace: vec![n as f64, scale.as_f64(), sub.as_f64()],
        });
    }
    Ok((0..n).map(|i| t[(i, i)]).collect())
}

/// Largest eigenvalue modulus.
pub fn spectral_radius<T: Real>(a: &CMat<T>) -> Result<T> {
    Ok(spectrum(a)?
        .into_iter()
        .fold(T::zero(), |m, z| m.max(modulus(z))))
}

/// Unit vector `x` with `‖Ax‖ = ‖A‖` (top right singular vector), phase-normalized.
pub fn norm_attaining_vector<T: Real>(a: &CMat<T>) -> Result<UnitVec<T>> {
    let svd = a.as_mat().clone().svd(false, true);
    let v_t = svd.v_t.expect("right singular vectors were requested");
    let (idx, top) = svd
        .singular_values
        .iter()
        .enumerate()
        .fold((0, T::zero()), |(bi, bs), (i, s)| if *s > bs { (i, *s) } else { (bi, bs) });
    if !(top > T::zero()) {
        return Err(Error::Domain("zero matrix attains its norm everywhere".into()));
    }
    let x: Vector<T> = v_t.row(idx).adjoint();
    Ok(UnitVec::normalize(x)?.canonical_phase())
}

/// `(A + A*)/2`.
pub fn hermitian_part<T: Real>(a: &Mat<T>) -> Mat<T> {
    (a + a.adjoint()).unscale(T::lit(2.0))
}

/// Eigen-decomposition of a Hermitian matrix, eigenvalues ascending.
pub fn hermitian_eig<T: Real>(h: &Mat<T>) -> (Vec<T>, Mat<T>) {
    let sym = hermitian_part(h);
    let eig = SymmetricEigen::new(sym);
    let mut order: Vec<usize> = (0..eig.eigenvalues.len()).collect();
    order.sort_by(|&i, &j| {
        eig.eigenvalues[i]
            .partial_cmp(&eig.eigenvalues[j])
            .unwrap_or(std::cmp::Ordering::Equal)
    });
    let vals = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let n = h.nrows();
    let vecs = Mat::from_fn(n, n, |r, c| eig.eigenvectors[(r, order[c])]);
    (vals, vecs)
}

/// Largest eigenvalue and a phase-normalized unit eigenvector of a Hermitian matrix.
pub fn top_hermitian_eigpair<T: Real>(h: &Mat<T>) -> (T, Vector<T>) {
    let (vals, vecs) = hermitian_eig(h);
    let n = vals.len();
    let mut v: Vector<T> = vecs.column(n - 1).into_owned();
    fix_phase(&mut v);
    (vals[n - 1], v)
}

pub fn min_hermitian_eig<T: Real>(h: &Mat<T>) -> T {
    hermitian_eig(h).0[0]
}

/// Square root of a positive semidefinite Hermitian matrix; negative rounding noise is clamped.
pub fn psd_sqrt<T: Real>(h: &Mat<T>) -> Mat<T> {
    let (vals, vecs) = hermitian_eig(h);
    let roots = DVector::from_iterator(
        vals.len(),
        vals.iter().map(|l| Complex::new(l.max(T::zero()).sqrt(), T::zero())),
    );
    &vecs * Mat::from_diagonal(&roots) * vecs.adjoint()
}

/// Inverse of a square matrix, failing when the smallest singular value is negligible.
pub fn inverse<T: Real>(a: &Mat<T>) -> Result<Mat<T>> {
    let svals = a.clone().svd(false, false).singular_values;
    let smax = svals.iter().fold(T::zero(), |m, s| m.max(*s));
    let smin = svals.iter().fold(T::max_value().unwrap(), |m, s| m.min(*s));
    if !(smin > T::default_epsilon() * T::lit(16.0) * smax.max(T::one())) {
        return Err(Error::Domain(format!(
            "matrix is numerically singular (smallest singular value {:e})",
            smin.as_f64()
        )));
    }
    a.clone()
        .try_inverse()
        .ok_or_else(|| Error::Domain("matrix is singular".into()))
}

/// `A^m` by repeated squaring.
pub fn matrix_power<T: Real>(a: &Mat<T>, m: u32) -> Mat<T> {
    let n = a.nrows();
    let mut result = Mat::identity(n, n);
    let mut base = a.clone();
    let mut e = m;
    while e > 0 {
        if e & 1 == 1 {
            result = &result * &base;
        }
        e >>= 1;
        if e > 0 {
            base = &base * &base;
        }
    }
    result
}

