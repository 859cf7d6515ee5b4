use num_complex::Complex;

use crate::calculus::AnalyticFn;
use crate::error::{Error, Result};
use crate::linalg::{inverse, CMat, Mat};
use crate::scalar::{modulus, Real};

fn check_inside<T: Real>(w: Complex<T>) -> Result<()> {
    if modulus(w) < T::one() {
        Ok(())
    } else {
        Err(Error::Parameter(format!(
            "Möbius parameter must lie in the open unit disk, |w| = {}",
            modulus(w).as_f64()
        )))
    }
}

/// Disk automorphism `z ↦ (z − w)/(1 − conj(w) z)`.
pub fn mobius<T: Real>(w: Complex<T>) -> Result<AnalyticFn<T>> {
    check_inside(w)?;
    AnalyticFn::blaschke(Complex::new(T::one(), T::zero()), vec![w])
}

/// `(T − wI)(I − conj(w) T)^{-1}`.
pub fn matrix_mobius<T: Real>(w: Complex<T>, t: &CMat<T>) -> Result<CMat<T>> {
    check_inside(w)?;
    let n = t.dim();
    let id = Mat::<T>::identity(n, n);
    let num = t.as_mat() - &id * w;
    let den = &id - t.as_mat() * w.conj();
    let inv = inverse(&den)
        .map_err(|_| Error::Domain("I − conj(w)T is singular".into()))?;
    Ok(CMat::wrap(num * inv))
}
