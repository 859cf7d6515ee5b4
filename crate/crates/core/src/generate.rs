//! Seeded random streams and the matrix families used by the experiments.

use nalgebra::DVector;
use num_complex::Complex;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::linalg::{CMat, Mat};
use crate::scalar::Real;

/// Deterministic RNG for `(seed, stream)`; streams separate independent trials.
pub fn rng_for(seed: u64, stream: u64) -> ChaCha8Rng {
    // splitmix64 finalizer on the combined key
    let mut z = seed
        .wrapping_mul(0x9E37_79B9_7F4A_7C15)
        .wrapping_add(stream.wrapping_mul(0xD1B5_4A32_D192_ED03))
        .wrapping_add(0x632B_E59B_D9B4_E019);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^= z >> 31;
    ChaCha8Rng::seed_from_u64(z)
}

/// Standard complex Gaussian (`E|z|² = 1`).
pub fn complex_gaussian<T: Real, R: Rng + ?Sized>(rng: &mut R) -> Complex<T> {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    let s = std::f64::consts::FRAC_1_SQRT_2;
    Complex::new(T::lit(re * s), T::lit(im * s))
}

/// Uniform point of the open disk of radius `r`.
pub fn point_in_disk<T: Real, R: Rng + ?Sized>(rng: &mut R, r: f64) -> Complex<T> {
    let rad = r * rng.random::<f64>().sqrt();
    let ang = std::f64::consts::TAU * rng.random::<f64>();
    Complex::new(T::lit(rad * ang.cos()), T::lit(rad * ang.sin()))
}

/// Ginibre matrix: i.i.d. complex Gaussian entries scaled by `1/√n`.
pub fn ginibre<T: Real, R: Rng + ?Sized>(n: usize, rng: &mut R) -> Result<CMat<T>> {
    if n == 0 {
        return Err(Error::Parameter("ginibre dimension must be positive".into()));
    }
    let scale = T::lit(1.0 / (n as f64).sqrt());
    CMat::new(Mat::from_fn(n, n, |_, _| complex_gaussian::<T, R>(rng) * scale))
}

/// Jordan block `λI + N` of size `n`.
pub fn jordan<T: Real>(n: usize, lambda: Complex<T>) -> Result<CMat<T>> {
    if n == 0 {
        return Err(Error::Parameter("jordan dimension must be positive".into()));
    }
    let one = Complex::new(T::one(), T::zero());
    CMat::new(Mat::from_fn(n, n, |i, j| {
        if i == j {
            lambda
        } else if j == i + 1 {
            one
        } else {
            Complex::new(T::zero(), T::zero())
        }
    }))
}

/// `[[0, a], [0, 0]]`.
pub fn nilpotent2<T: Real>(a: Complex<T>) -> CMat<T> {
    let z = Complex::new(T::zero(), T::zero());
    CMat::wrap(Mat::from_row_slice(2, 2, &[z, a, z, z]))
}

/// Normal matrix `Q diag(spectrum) Q*` with `Q` Haar-random unitary (or `Q = I` without rng).
pub fn normal<T: Real, R: Rng + ?Sized>(spectrum: &[Complex<T>], rng: Option<&mut R>) -> Result<CMat<T>> {
    if spectrum.is_empty() {
        return Err(Error::Parameter("normal generator needs a non-empty spectrum".into()));
    }
    let d = Mat::from_diagonal(&DVector::from_column_slice(spectrum));
    match rng {
        None => CMat::new(d),
        Some(rng) => {
            let q = haar_unitary(spectrum.len(), rng);
            CMat::new(&q * d * q.adjoint())
        }
    }
}

/// Haar-distributed unitary via QR of a Ginibre matrix with phase correction.
pub fn haar_unitary<T: Real, R: Rng + ?Sized>(n: usize, rng: &mut R) -> Mat<T> {
    let g: Mat<T> = Mat::from_fn(n, n, |_, _| complex_gaussian::<T, R>(rng));
    let qr = g.qr();
    let mut q = qr.q();
    let r = qr.r();
    for j in 0..n {
        let d = r[(j, j)];
        let m = d.norm_sqr().sqrt();
        if m > T::zero() {
            let phase = d.unscale(m);
            for i in 0..n {
                q[(i, j)] *= phase;
            }
        }
    }
    q
}

/// Random polynomial coefficients of the given degree (complex Gaussian).
pub fn random_coeffs<T: Real, R: Rng + ?Sized>(degree: usize, rng: &mut R) -> Vec<Complex<T>> {
    (0..=degree).map(|_| complex_gaussian(rng)).collect()
}
