//! Dense complex matrix primitives: norms, spectra, numerical ranges,
//! norm-attaining vectors and simultaneous triangularization.

mod decomp;
mod file;
pub mod hull;
mod range;
mod triangular;

use std::ops::Deref;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex;

use crate::error::{Error, Result};
use crate::scalar::{is_finite_c, Real};

pub use decomp::{
    hermitian_eig, hermitian_part, inverse, matrix_power, min_hermitian_eig, op_norm, psd_sqrt,
    spectral_norm, spectral_radius, spectrum, top_hermitian_eigpair, norm_attaining_vector,
};
pub use file::MatrixFile;
pub(crate) use range::support_point;
pub use range::{numerical_radius, numerical_range, support_value, RangeBoundary};
pub use triangular::{simultaneous_triangularize, Triangularization};

/// Dense complex matrix of arbitrary shape.
pub type Mat<T> = DMatrix<Complex<T>>;
/// Dense complex column vector.
pub type Vector<T> = DVector<Complex<T>>;

/// Square complex matrix with finite entries and dimension at least one.
#[derive(Clone, Debug, PartialEq)]
pub struct CMat<T: Real>(Mat<T>);

impl<T: Real> CMat<T> {
    pub fn new(m: Mat<T>) -> Result<Self> {
        if m.nrows() == 0 {
            return Err(Error::Input("matrix dimension must be at least 1".into()));
        }
        if m.nrows() != m.ncols() {
            return Err(Error::Input(format!(
                "matrix must be square, got {}x{}",
                m.nrows(),
                m.ncols()
            )));
        }
        if let Some(pos) = m.iter().position(|z| !is_finite_c(*z)) {
            return Err(Error::Input(format!(
                "non-finite entry at flat index {pos}"
            )));
        }
        Ok(CMat(m))
    }

    /// Wraps a matrix produced by trusted arithmetic on valid inputs.
    pub(crate) fn wrap(m: Mat<T>) -> Self {
        debug_assert!(m.nrows() == m.ncols() && m.nrows() > 0);
        CMat(m)
    }

    pub fn from_rows(rows: &[Vec<Complex<T>>]) -> Result<Self> {
        let n = rows.len();
        if rows.iter().any(|r| r.len() != n) {
            return Err(Error::Input("ragged or non-square row data".into()));
        }
        Self::new(Mat::from_fn(n, n, |i, j| rows[i][j]))
    }

    /// Builds a matrix from real row-major data.
    pub fn from_real(n: usize, data: &[f64]) -> Result<Self> {
        if data.len() != n * n {
            return Err(Error::Input(format!(
                "expected {} entries, got {}",
                n * n,
                data.len()
            )));
        }
        Self::new(Mat::from_fn(n, n, |i, j| {
            Complex::new(T::lit(data[i * n + j]), T::zero())
        }))
    }

    pub fn identity(n: usize) -> Self {
        CMat(Mat::identity(n, n))
    }

    pub fn zeros(n: usize) -> Self {
        CMat(Mat::zeros(n, n))
    }

    pub fn diag(entries: &[Complex<T>]) -> Result<Self> {
        Self::new(Mat::from_diagonal(&DVector::from_column_slice(entries)))
    }

    pub fn dim(&self) -> usize {
        self.0.nrows()
    }

    pub fn as_mat(&self) -> &Mat<T> {
        &self.0
    }

    pub fn into_inner(self) -> Mat<T> {
        self.0
    }

    pub fn adjoint(&self) -> Self {
        CMat(self.0.adjoint())
    }

    pub fn scaled(&self, s: Complex<T>) -> Self {
        CMat(self.0.map(|z| z * s))
    }

    /// `‖self - other‖` in the spectral norm.
    pub fn distance(&self, other: &Self) -> T {
        op_norm(&(&self.0 - &other.0))
    }
}

impl<T: Real> Deref for CMat<T> {
    type Target = Mat<T>;
    fn deref(&self) -> &Mat<T> {
        &self.0
    }
}

/// Unit vector in `C^n`.
#[derive(Clone, Debug, PartialEq)]
pub struct UnitVec<T: Real>(Vector<T>);

impl<T: Real> UnitVec<T> {
    /// Normalizes `v`; fails for the zero vector.
    pub fn normalize(v: Vector<T>) -> Result<Self> {
        let norm = v.norm();
        if !(norm > T::zero()) || !norm.is_finite() {
            return Err(Error::Domain("cannot normalize a zero or non-finite vector".into()));
        }
        Ok(UnitVec(v.unscale(norm)))
    }

    pub fn as_vector(&self) -> &Vector<T> {
        &self.0
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    /// Multiplies by a unimodular phase so the largest-modulus entry is real positive.
    pub fn canonical_phase(mut self) -> Self {
        fix_phase(&mut self.0);
        self
    }
}

impl<T: Real> Deref for UnitVec<T> {
    type Target = Vector<T>;
    fn deref(&self) -> &Vector<T> {
        &self.0
    }
}

pub(crate) fn fix_phase<T: Real>(v: &mut Vector<T>) {
    let mut best = 0;
    let mut best_mod = T::zero();
    for (i, z) in v.iter().enumerate() {
        let m = z.norm_sqr();
        // strict inequality with a relative guard keeps the choice stable under rounding
        if m > best_mod * T::lit(1.0 + 1e-9) {
            best = i;
            best_mod = m;
        }
    }
    if best_mod > T::zero() {
        let z = v[best];
        let phase = z.unscale(z.norm_sqr().sqrt()).conj();
        v.iter_mut().for_each(|e| *e *= phase);
    }
}

/// `⟨x, y⟩ = Σ x_i ȳ_i`, linear in the first slot.
pub fn inner<T: Real>(x: &Vector<T>, y: &Vector<T>) -> Complex<T> {
    x.iter()
        .zip(y.iter())
        .fold(Complex::new(T::zero(), T::zero()), |acc, (a, b)| acc + a * b.conj())
}

/// Norm of `AB - BA`.
pub fn commutator_norm<T: Real>(a: &Mat<T>, b: &Mat<T>) -> T {
    op_norm(&(a * b - b * a))
}

/// `‖U*U - I‖`.
pub fn unitarity_defect<T: Real>(u: &Mat<T>) -> T {
    let n = u.ncols();
    op_norm(&(u.adjoint() * u - Mat::<T>::identity(n, n)))
}

/// Largest modulus among strictly lower-triangular entries.
pub fn lower_defect<T: Real>(a: &Mat<T>) -> T {
    let mut worst = T::zero();
    for j in 0..a.ncols() {
        for i in (j + 1)..a.nrows() {
            worst = worst.max(a[(i, j)].norm_sqr().sqrt());
        }
    }
    worst
}
