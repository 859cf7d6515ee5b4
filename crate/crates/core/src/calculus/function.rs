use num_complex::Complex;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geom::QuadratureGrid;
use crate::linalg::{CMat, Mat};
use crate::numeric::golden_max;
use crate::scalar::{cis, is_finite_c, modulus, Real};

/// Where an [`AnalyticFn`] lives: the unit disk or a convex domain `Ω`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DomainTag {
    Disk,
    Domain,
}

#[derive(Clone, Debug)]
pub enum FnRepr<T: Real> {
    /// `Σ c_k ((z − center)/scale)^k`.
    Poly {
        coeffs: Vec<Complex<T>>,
        center: Complex<T>,
        scale: T,
    },
    /// `phase · Π (z − a_j)/(1 − conj(a_j) z)`.
    Blaschke {
        phase: Complex<T>,
        zeros: Vec<Complex<T>>,
    },
    /// Boundary values on a quadrature grid, extended inside by the Cauchy integral.
    Samples {
        nodes: Vec<Complex<T>>,
        weights: Vec<Complex<T>>,
        values: Vec<Complex<T>>,
    },
}

/// Function holomorphic on a domain and continuous up to its boundary.
#[derive(Clone, Debug)]
pub struct AnalyticFn<T: Real> {
    pub repr: FnRepr<T>,
    pub tag: DomainTag,
}

impl<T: Real> AnalyticFn<T> {
    pub fn poly(coeffs: Vec<Complex<T>>) -> Self {
        AnalyticFn {
            repr: FnRepr::Poly {
                coeffs,
                center: Complex::new(T::zero(), T::zero()),
                scale: T::one(),
            },
            tag: DomainTag::Disk,
        }
    }

    /// Polynomial in `(z − center)/scale`, tagged as living on a domain.
    pub fn poly_on_domain(coeffs: Vec<Complex<T>>, center: Complex<T>, scale: T) -> Result<Self> {
        if !(scale > T::zero()) {
            return Err(Error::Parameter("polynomial scale must be positive".into()));
        }
        Ok(AnalyticFn {
            repr: FnRepr::Poly {
                coeffs,
                center,
                scale,
            },
            tag: DomainTag::Domain,
        })
    }

    pub fn constant(c: Complex<T>) -> Self {
        Self::poly(vec![c])
    }

    pub fn identity() -> Self {
        Self::poly(vec![Complex::new(T::zero(), T::zero()), Complex::new(T::one(), T::zero())])
    }

    /// `z^m`.
    pub fn monomial(m: usize) -> Self {
        let mut c = vec![Complex::new(T::zero(), T::zero()); m + 1];
        c[m] = Complex::new(T::one(), T::zero());
        Self::poly(c)
    }

    /// Finite Blaschke product; zeros must lie strictly inside the unit disk.
    pub fn blaschke(phase: Complex<T>, zeros: Vec<Complex<T>>) -> Result<Self> {
        if !is_finite_c(phase) || (modulus(phase) - T::one()).abs() > T::lit(1e-10).max(T::default_epsilon() * T::lit(16.0)) {
            return Err(Error::Parameter("Blaschke phase must be unimodular".into()));
        }
        if let Some(a) = zeros.iter().find(|a| !(modulus(**a) < T::one())) {
            return Err(Error::Parameter(format!(
                "Blaschke zero {:?} is not inside the unit disk",
                (a.re.as_f64(), a.im.as_f64())
            )));
        }
        Ok(AnalyticFn {
            repr: FnRepr::Blaschke { phase, zeros },
            tag: DomainTag::Disk,
        })
    }

    /// Boundary samples on `grid`, tagged as living on the grid's domain.
    pub fn from_samples(grid: &QuadratureGrid<T>, values: Vec<Complex<T>>) -> Result<Self> {
        if values.len() != grid.n {
            return Err(Error::Inconsistent(format!(
                "{} samples for a {}-node grid",
                values.len(),
                grid.n
            )));
        }
        Ok(AnalyticFn {
            repr: FnRepr::Samples {
                nodes: grid.nodes.clone(),
                weights: grid.weights.clone(),
                values,
            },
            tag: DomainTag::Domain,
        })
    }

    pub fn eval(&self, z: Complex<T>) -> Complex<T> {
        match &self.repr {
            FnRepr::Poly {
                coeffs,
                center,
                scale,
            } => {
                let x = (z - center).unscale(*scale);
                coeffs
                    .iter()
                    .rev()
                    .fold(Complex::new(T::zero(), T::zero()), |acc, c| acc * x + c)
            }
            FnRepr::Blaschke { phase, zeros } => zeros.iter().fold(*phase, |acc, a| {
                acc * (z - a) / (Complex::new(T::one(), T::zero()) - a.conj() * z)
            }),
            FnRepr::Samples {
                nodes,
                weights,
                values,
            } => barycentric_cauchy(nodes, weights, values, z),
        }
    }

    /// Values at `e^{iσ}` for the given angles.
    pub fn on_circle(&self, angles: &[T]) -> Vec<Complex<T>> {
        angles.iter().map(|s| self.eval(cis(*s))).collect()
    }

    /// Largest `|f|` over `m` uniform points of the unit circle.
    pub fn circle_sup(&self, m: usize) -> T {
        let step = T::two_pi() / T::from_usize_lossy(m.max(1));
        (0..m).fold(T::zero(), |s, k| {
            s.max(modulus(self.eval(cis(step * T::from_usize_lossy(k)))))
        })
    }

    /// `max |f|` on the unit circle: a 1024-point sweep refined by golden-section search
    /// around the four largest local maxima.
    pub fn circle_sup_refined(&self) -> T {
        let m = 1024;
        let step = T::two_pi() / T::from_usize_lossy(m);
        let vals: Vec<T> = (0..m)
            .map(|k| modulus(self.eval(cis(step * T::from_usize_lossy(k)))))
            .collect();
        let mut peaks: Vec<usize> = (0..m)
            .filter(|&k| vals[k] >= vals[(k + m - 1) % m] && vals[k] >= vals[(k + 1) % m])
            .collect();
        peaks.sort_by(|a, b| vals[*b].partial_cmp(&vals[*a]).unwrap_or(std::cmp::Ordering::Equal));
        let mut best = vals.iter().fold(T::zero(), |a, b| a.max(*b));
        for &k in peaks.iter().take(4) {
            let c = step * T::from_usize_lossy(k);
            let (_, v) = golden_max(
                |s| modulus(self.eval(cis(s))),
                c - step,
                c + step,
                T::default_epsilon().sqrt() * T::lit(1e-2),
            );
            best = best.max(v);
        }
        best
    }

    pub fn degree(&self) -> Option<usize> {
        match &self.repr {
            FnRepr::Poly { coeffs, .. } => Some(coeffs.len().saturating_sub(1)),
            FnRepr::Blaschke { zeros, .. } => Some(zeros.len()),
            FnRepr::Samples { .. } => None,
        }
    }

    /// `f(A)` by Horner (polynomials) or products of Möbius factors (Blaschke products).
    pub fn eval_matrix(&self, a: &CMat<T>) -> Result<CMat<T>> {
        let n = a.dim();
        let id = Mat::<T>::identity(n, n);
        match &self.repr {
            FnRepr::Poly {
                coeffs,
                center,
                scale,
            } => {
                let x = (a.as_mat() - &id * *center).unscale(*scale);
                let mut acc = Mat::<T>::zeros(n, n);
                for c in coeffs.iter().rev() {
                    acc = &acc * &x + &id * *c;
                }
                Ok(CMat::wrap(acc))
            }
            FnRepr::Blaschke { phase, zeros } => {
                let mut acc = &id * *phase;
                for w in zeros {
                    acc *= crate::conformal::matrix_mobius(*w, a)?.as_mat();
                }
                Ok(CMat::wrap(acc))
            }
            FnRepr::Samples { .. } => Err(Error::Unsupported(
                "matrix evaluation of sampled functions needs a quadrature instance".into(),
            )),
        }
    }

    /// Product of two polynomials in the same variable.
    pub fn poly_mul(&self, other: &Self) -> Result<Self> {
        match (&self.repr, &other.repr) {
            (
                FnRepr::Poly {
                    coeffs: a,
                    center: ca,
                    scale: sa,
                },
                FnRepr::Poly {
                    coeffs: b,
                    center: cb,
                    scale: sb,
                },
            ) if ca == cb && sa == sb => {
                let mut c = vec![Complex::new(T::zero(), T::zero()); a.len() + b.len() - 1];
                for (i, x) in a.iter().enumerate() {
                    for (j, y) in b.iter().enumerate() {
                        c[i + j] += x * y;
                    }
                }
                Ok(AnalyticFn {
                    repr: FnRepr::Poly {
                        coeffs: c,
                        center: *ca,
                        scale: *sa,
                    },
                    tag: self.tag,
                })
            }
            _ => Err(Error::Unsupported("product needs two polynomials in the same variable".into())),
        }
    }
}

/// `Σ v_k w_k/(ζ_k − z) / Σ w_k/(ζ_k − z)`; returns the node value when `z` hits a node.
pub(crate) fn barycentric_cauchy<T: Real>(
    nodes: &[Complex<T>],
    weights: &[Complex<T>],
    values: &[Complex<T>],
    z: Complex<T>,
) -> Complex<T> {
    let zero = Complex::new(T::zero(), T::zero());
    let (mut num, mut den) = (zero, zero);
    for ((zeta, w), v) in nodes.iter().zip(weights).zip(values) {
        let d = *zeta - z;
        if d.norm_sqr() == T::zero() {
            return *v;
        }
        let c = w / d;
        num += c * v;
        den += c;
    }
    num / den
}
