use num_complex::Complex;
use serde::{Deserialize, Serialize};

use super::AnalyticFn;
use crate::error::{Error, Result};
use crate::scalar::{cis, modulus, Real};

/// Bounded linear functional on `A(𝔻)`.
#[derive(Clone, Debug, PartialEq)]
pub enum ScalarFunctional<T: Real> {
    /// `ℓ(f) = scale · f(point)`.
    Point { point: Complex<T>, scale: Complex<T> },
    /// `ℓ(f) = Σ w_j f(e^{iσ_j})`.
    Weights { angles: Vec<T>, weights: Vec<Complex<T>> },
}

impl<T: Real> ScalarFunctional<T> {
    /// Point evaluation `f ↦ f(a)`, `|a| ≤ 1`.
    pub fn evaluation(point: Complex<T>) -> Result<Self> {
        Self::scaled_point(point, Complex::new(T::one(), T::zero()))
    }

    pub fn scaled_point(point: Complex<T>, scale: Complex<T>) -> Result<Self> {
        if modulus(point) > T::one() {
            return Err(Error::Parameter("evaluation point must lie in the closed unit disk".into()));
        }
        Ok(ScalarFunctional::Point { point, scale })
    }

    /// Weighted evaluation at boundary points.
    pub fn boundary_weights(angles: Vec<T>, weights: Vec<Complex<T>>) -> Result<Self> {
        if angles.len() != weights.len() || angles.is_empty() {
            return Err(Error::Inconsistent("angles and weights must have equal, non-zero length".into()));
        }
        Ok(ScalarFunctional::Weights { angles, weights })
    }

    pub fn apply(&self, f: &AnalyticFn<T>) -> Complex<T> {
        match self {
            ScalarFunctional::Point { point, scale } => scale * f.eval(*point),
            ScalarFunctional::Weights { angles, weights } => angles
                .iter()
                .zip(weights)
                .fold(Complex::new(T::zero(), T::zero()), |acc, (s, w)| acc + w * f.eval(cis(*s))),
        }
    }

    /// The recorded constant `c` with `|ℓ(f)| ≤ c · sup|f|`.
    pub fn bound(&self) -> T {
        match self {
            ScalarFunctional::Point { scale, .. } => modulus(*scale),
            ScalarFunctional::Weights { weights, .. } => {
                weights.iter().fold(T::zero(), |a, w| a + modulus(*w))
            }
        }
    }
}

/// Which unital contraction `α: A(𝔻) → A(𝔻)` enters `θ_α`.
#[derive(Clone, Debug, PartialEq)]
pub enum AlphaRep<T: Real> {
    /// `α(f) = C_Ω(conj(f∘φ))∘φ^{-1}`.
    Cauchy,
    /// `α(f) = conj(ℓ(f))·1`.
    Scalar(ScalarFunctional<T>),
    /// Entrywise conjugation on a finite point algebra.
    ConjFinite,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AlphaKind {
    Cauchy,
    Scalar,
    ConjFinite,
}

impl<T: Real> AlphaRep<T> {
    pub fn kind(&self) -> AlphaKind {
        match self {
            AlphaRep::Cauchy => AlphaKind::Cauchy,
            AlphaRep::Scalar(_) => AlphaKind::Scalar,
            AlphaRep::ConjFinite => AlphaKind::ConjFinite,
        }
    }

    /// `α(f) = conj(f(0))`.
    pub fn evaluation_at_origin() -> Self {
        AlphaRep::Scalar(ScalarFunctional::Point {
            point: Complex::new(T::zero(), T::zero()),
            scale: Complex::new(T::one(), T::zero()),
        })
    }

    /// `|ℓ(1) − 1|` for scalar α; the Cauchy and finite variants are exactly unital.
    pub fn unital_defect(&self) -> T {
        match self {
            AlphaRep::Scalar(l) => {
                modulus(l.apply(&AnalyticFn::constant(Complex::new(T::one(), T::zero()))) - Complex::new(T::one(), T::zero()))
            }
            _ => T::zero(),
        }
    }
}
