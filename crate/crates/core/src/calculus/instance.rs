use num_complex::Complex;

use super::{AlphaRep, AnalyticFn, ResolventMeasure};
use crate::conformal::{riemann_map, ConformalMap};
use crate::error::{Error, Result};
use crate::geom::{ConvexDomain, QuadratureGrid};
use crate::linalg::{numerical_range, spectrum, CMat, Mat};
use crate::scalar::{cis, Real};

/// Directions used to check `W(T) ⊂ Ω`.
const RANGE_SWEEP: usize = 256;

/// A matrix `T` with `W(T) ⊂ Ω`, the Riemann map of `Ω`, and the resolvent measure on `∂Ω`.
/// Houses the homomorphism `θ(f) = (f∘φ)(T)`.
#[derive(Clone, Debug)]
pub struct HomInstance<T: Real> {
    pub t: CMat<T>,
    pub map: ConformalMap<T>,
    pub measure: ResolventMeasure<T>,
    /// `φ(ζ_k) = e^{is_k}`.
    circle_points: Vec<Complex<T>>,
    /// `‖Σ μ_k − I‖`.
    pub cauchy_residual: T,
}

impl<T: Real> HomInstance<T> {
    /// Builds the Riemann map of `domain` on `n` nodes and checks `W(T) ⊂ Ω`, `σ(T) ⊂ Ω`.
    pub fn new(t: CMat<T>, domain: &ConvexDomain<T>, n: usize) -> Result<Self> {
        check_inside(&t, domain)?;
        let map = riemann_map(domain, None, n)?;
        Self::assemble(t, map)
    }

    pub fn with_map(t: CMat<T>, map: ConformalMap<T>) -> Result<Self> {
        check_inside(&t, &map.domain)?;
        Self::assemble(t, map)
    }

    fn assemble(t: CMat<T>, map: ConformalMap<T>) -> Result<Self> {
        let measure = ResolventMeasure::new(&t, map.grid())?;
        let circle_points = map.boundary_angles().iter().map(|s| cis(*s)).collect();
        let cauchy_residual = measure.identity_residual();
        Ok(HomInstance {
            t,
            map,
            measure,
            circle_points,
            cauchy_residual,
        })
    }

    pub fn domain(&self) -> &ConvexDomain<T> {
        &self.map.domain
    }

    pub fn grid(&self) -> &QuadratureGrid<T> {
        self.map.grid()
    }

    pub fn dim(&self) -> usize {
        self.t.dim()
    }

    /// `10 × ‖Σ μ_k − I‖`, floored at `1e-12`; the scale of quadrature-level agreement.
    pub fn tolerance(&self) -> T {
        (self.cauchy_residual * T::lit(10.0)).max(T::lit(1e-12))
    }

    /// `f∘φ` at the grid nodes, i.e. `f(e^{is_k})`.
    pub fn pullback_values(&self, f: &AnalyticFn<T>) -> Vec<Complex<T>> {
        self.circle_points.iter().map(|w| f.eval(*w)).collect()
    }

    pub fn circle_points(&self) -> &[Complex<T>] {
        &self.circle_points
    }
}

fn check_inside<T: Real>(t: &CMat<T>, domain: &ConvexDomain<T>) -> Result<()> {
    for l in spectrum(t)? {
        if !domain.contains(l) {
            return Err(Error::Precondition(format!(
                "eigenvalue ({:.6}, {:.6}) is not inside the domain",
                l.re.as_f64(),
                l.im.as_f64()
            )));
        }
    }
    let range = numerical_range(t, RANGE_SWEEP)?;
    if let Some(p) = range.support_points.iter().find(|p| !domain.contains(**p)) {
        return Err(Error::Precondition(format!(
            "numerical range point ({:.6}, {:.6}) is not inside the domain",
            p.re.as_f64(),
            p.im.as_f64()
        )));
    }
    Ok(())
}

/// `h(T) = (1/2πi) Σ h(ζ_k)(ζ_k I − T)^{-1} w_k`.
pub fn fun_calc<T: Real>(h: &AnalyticFn<T>, inst: &HomInstance<T>) -> CMat<T> {
    let vals: Vec<Complex<T>> = inst.grid().nodes.iter().map(|z| h.eval(*z)).collect();
    CMat::wrap(inst.measure.apply(&vals))
}

/// `θ(f) = (f∘φ)(T)`.
pub fn theta<T: Real>(f: &AnalyticFn<T>, inst: &HomInstance<T>) -> CMat<T> {
    CMat::wrap(inst.measure.apply(&inst.pullback_values(f)))
}

/// `θ(α(f))`.
pub fn theta_of_alpha<T: Real>(f: &AnalyticFn<T>, inst: &HomInstance<T>, alpha: &AlphaRep<T>) -> Result<CMat<T>> {
    let n = inst.dim();
    match alpha {
        AlphaRep::Cauchy => Ok(CMat::wrap(inst.measure.apply_conj(&inst.pullback_values(f)))),
        AlphaRep::Scalar(l) => Ok(CMat::wrap(Mat::<T>::identity(n, n) * l.apply(f).conj())),
        AlphaRep::ConjFinite => Err(Error::Unsupported(
            "entrywise conjugation is only defined on a finite point algebra".into(),
        )),
    }
}

/// `θ_α(f) = ½(θ(f) + θ(α(f))*)`.
pub fn theta_alpha<T: Real>(f: &AnalyticFn<T>, inst: &HomInstance<T>, alpha: &AlphaRep<T>) -> Result<CMat<T>> {
    let vals = inst.pullback_values(f);
    let half = T::lit(0.5);
    let m = match alpha {
        AlphaRep::Cauchy => inst.measure.apply_real_part(&vals),
        _ => {
            let a = theta_of_alpha(f, inst, alpha)?;
            (inst.measure.apply(&vals) + a.as_mat().adjoint()).scale(half)
        }
    };
    Ok(CMat::wrap(m))
}

/// Smallest eigenvalue of the Hermitian part of the resolvent density at each node.
pub fn resolvent_density_real_part<T: Real>(inst: &HomInstance<T>) -> Vec<T> {
    inst.measure.density_real_part()
}
