use nalgebra::RealField;
use num_complex::Complex;
use num_traits::{FromPrimitive, ToPrimitive};
use rustfft::FftNum;

/// Real scalar used throughout the numerical core (`f32` or `f64`).
pub trait Real: RealField + Copy + FromPrimitive + ToPrimitive + FftNum {
    /// Converts an `f64` constant into the scalar type.
    fn lit(x: f64) -> Self {
        <Self as FromPrimitive>::from_f64(x).expect("constant representable in scalar type")
    }

    fn as_f64(self) -> f64 {
        <Self as ToPrimitive>::to_f64(&self).unwrap_or(f64::NAN)
    }

    fn from_usize_lossy(n: usize) -> Self {
        <Self as FromPrimitive>::from_usize(n).expect("integer representable in scalar type")
    }
}

impl<T> Real for T where T: RealField + Copy + FromPrimitive + ToPrimitive + FftNum {}

pub fn cplx<T: Real>(re: f64, im: f64) -> Complex<T> {
    Complex::new(T::lit(re), T::lit(im))
}

pub fn cis<T: Real>(angle: T) -> Complex<T> {
    Complex::new(angle.cos(), angle.sin())
}

pub fn modulus<T: Real>(z: Complex<T>) -> T {
    z.re.hypot(z.im)
}

pub fn arg<T: Real>(z: Complex<T>) -> T {
    z.im.atan2(z.re)
}

pub fn is_finite_c<T: Real>(z: Complex<T>) -> bool {
    z.re.is_finite() && z.im.is_finite()
}

pub fn two_pi<T: Real>() -> T {
    T::two_pi()
}

pub fn cexp<T: Real>(z: Complex<T>) -> Complex<T> {
    cis(z.im).scale(z.re.exp())
}
