//! Real 2π-periodic functions stored as truncated Fourier series.

use num_complex::Complex;
use rustfft::FftPlanner;
use serde::{Deserialize, Serialize};

use crate::scalar::{cis, Real};

/// `f(x) = c_0 + 2 Re Σ_{k=1}^{M} c_k e^{ikx}` for a real periodic `f`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(bound(serialize = "T: Serialize", deserialize = "T: Deserialize<'de>"))]
#[serde(transparent)]
pub struct TrigSeries<T: Real> {
    coeffs: Vec<Complex<T>>,
}

/// Forward DFT normalized by `1/N`: `c_k = (1/N) Σ_j f_j e^{-2πijk/N}`.
pub fn dft<T: Real>(samples: &[Complex<T>]) -> Vec<Complex<T>> {
    let n = samples.len();
    let mut buf = samples.to_vec();
    if n == 0 {
        return buf;
    }
    FftPlanner::<T>::new().plan_fft_forward(n).process(&mut buf);
    let inv = T::one() / T::from_usize_lossy(n);
    buf.iter_mut().for_each(|z| *z = z.scale(inv));
    buf
}

/// Inverse of [`dft`].
pub fn idft<T: Real>(coeffs: &[Complex<T>]) -> Vec<Complex<T>> {
    let n = coeffs.len();
    let mut buf = coeffs.to_vec();
    if n == 0 {
        return buf;
    }
    FftPlanner::<T>::new().plan_fft_inverse(n).process(&mut buf);
    buf
}

impl<T: Real> TrigSeries<T> {
    pub fn from_coeffs(coeffs: Vec<Complex<T>>) -> Self {
        TrigSeries { coeffs }
    }

    /// Interpolates `N` uniform samples `f(2πj/N)`; the Nyquist mode is dropped.
    pub fn from_samples(samples: &[T]) -> Self {
        let n = samples.len();
        let data: Vec<Complex<T>> = samples.iter().map(|&x| Complex::new(x, T::zero())).collect();
        let c = dft(&data);
        let m = if n == 0 { 0 } else { (n - 1) / 2 };
        let mut coeffs: Vec<Complex<T>> = c.into_iter().take(m + 1).collect();
        if let Some(c0) = coeffs.first_mut() {
            c0.im = T::zero();
        }
        TrigSeries { coeffs }
    }

    pub fn coeffs(&self) -> &[Complex<T>] {
        &self.coeffs
    }

    /// Highest retained mode.
    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn mean(&self) -> T {
        self.coeffs.first().map_or(T::zero(), |c| c.re)
    }

    /// Multiplies mode `k` by `weight(k)` (a Fourier multiplier, e.g. a smoothing filter).
    pub fn filtered(&self, weight: impl Fn(usize) -> T) -> Self {
        TrigSeries {
            coeffs: self
                .coeffs
                .iter()
                .enumerate()
                .map(|(k, c)| c.scale(weight(k)))
                .collect(),
        }
    }

    /// Drops modes above `m`.
    pub fn truncated(&self, m: usize) -> Self {
        TrigSeries {
            coeffs: self.coeffs.iter().take(m + 1).cloned().collect(),
        }
    }

    /// Harmonic conjugate with zero mean (`e^{ikx} ↦ -i sgn(k) e^{ikx}`).
    pub fn conjugate(&self) -> Self {
        let mut coeffs: Vec<Complex<T>> = self
            .coeffs
            .iter()
            .map(|c| Complex::new(c.im, -c.re))
            .collect();
        if let Some(c0) = coeffs.first_mut() {
            *c0 = Complex::new(T::zero(), T::zero());
        }
        TrigSeries { coeffs }
    }

    pub fn eval(&self, x: T) -> T {
        self.derivatives::<1>(x)[0]
    }

    /// `[f(x), f'(x), ..., f^{(D-1)}(x)]`.
    pub fn derivatives<const D: usize>(&self, x: T) -> [T; D] {
        let mut out = [T::zero(); D];
        if self.coeffs.is_empty() {
            return out;
        }
        out[0] = self.coeffs[0].re;
        let step = cis(x);
        let mut e = step;
        let two = T::lit(2.0);
        for (k, c) in self.coeffs.iter().enumerate().skip(1) {
            let kf = T::from_usize_lossy(k);
            // term_d = 2 Re( c (ik)^d e^{ikx} )
            let mut term = *c * e;
            for slot in out.iter_mut() {
                *slot += two * term.re;
                term *= Complex::new(T::zero(), kf);
            }
            e *= step;
            if k % 64 == 0 {
                // resynchronize the phase recurrence
                e = cis(x * T::from_usize_lossy(k + 1));
            }
        }
        out
    }

    /// Values at `n` uniform points `2πj/n` (`n` larger than twice the degree).
    pub fn sample(&self, n: usize) -> Vec<T> {
        let mut spec = vec![Complex::new(T::zero(), T::zero()); n];
        for (k, c) in self.coeffs.iter().enumerate() {
            if k == 0 {
                spec[0] += *c;
            } else if k < n - k {
                spec[k] += *c;
                spec[n - k] += c.conj();
            }
        }
        idft(&spec).into_iter().map(|z| z.re).collect()
    }
}

impl<T: Real> TrigSeries<T> {
    /// Upper bound for `|f|` from the coefficients.
    pub fn sup_bound(&self) -> T {
        self.coeffs.iter().skip(1).fold(self.mean().abs(), |s, c| {
            s + c.norm_sqr().sqrt() * T::lit(2.0)
        })
    }

    /// Solves `x + f(x) = y` for `x`, assuming `1 + f' > 0` (safeguarded Newton).
    pub fn solve_shifted(&self, y: T) -> T {
        let bound = self.sup_bound() + T::lit(1e-9);
        let (mut lo, mut hi) = (y - bound, y + bound);
        let mut x = y - self.eval(y);
        let tol = T::default_epsilon() * T::lit(8.0) * (T::one() + y.abs());
        let mut last = T::max_value().unwrap_or_else(|| T::lit(1e300));
        for _ in 0..200 {
            let [v, dv] = self.derivatives::<2>(x);
            let f = x + v - y;
            if f > T::zero() {
                hi = hi.min(x);
            } else {
                lo = lo.max(x);
            }
            let mut next = x - f / (T::one() + dv);
            let stalled = f.abs() > last * T::lit(0.5);
            last = f.abs();
            if stalled || !(next > lo && next < hi) {
                next = (lo + hi) / T::lit(2.0);
            }
            let step = (next - x).abs();
            x = next;
            if step <= tol || hi - lo <= tol {
                break;
            }
        }
        x
    }
}
