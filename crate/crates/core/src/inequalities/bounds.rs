use num_complex::Complex64 as C;
use rand::Rng;
use serde_json::json;

use crate::calculus::{
    estimate_shift_norm, estimate_theta_norm, theta, theta_alpha, theta_of_alpha, AlphaKind, AlphaRep, AnalyticFn,
    HomInstance, ResolventMeasure, ScalarFunctional,
};
use crate::error::Result;
use crate::generate::random_coeffs;
use crate::geom::{quadrature, ConvexDomain};
use crate::linalg::{numerical_range, op_norm, spectral_norm, CMat};
use crate::numeric::golden_max;
use crate::report::{domain_value, matrix_value, ExperimentReport, Outcome};

pub const ONE_PLUS_SQRT2: f64 = 1.0 + std::f64::consts::SQRT_2;
const CP_TOL: f64 = 1e-6;
const DENSITY_TOL: f64 = 1e-8;
const BASIC_TOL: f64 = 1e-3;
const SHIFT_TOL: f64 = 1e-4;
const SUP_SAMPLES: usize = 4096;

/// Random polynomials in `(z − c)/R` with `c` the domain center and `R` its outer radius.
pub fn random_domain_polys<R: Rng>(
    domain: &ConvexDomain<f64>,
    count: usize,
    max_degree: usize,
    rng: &mut R,
) -> Vec<AnalyticFn<f64>> {
    let r = domain.outer_radius();
    (0..count)
        .map(|_| {
            let d = rng.random_range(0..=max_degree);
            AnalyticFn::poly_on_domain(random_coeffs(d, rng), domain.center, r).expect("outer radius is positive")
        })
        .collect()
}

/// Boundary points of `Ω` at 4096 uniform parameters, reused across functions.
pub struct BoundarySampler<'a> {
    domain: &'a ConvexDomain<f64>,
    points: Vec<C>,
}

impl<'a> BoundarySampler<'a> {
    pub fn new(domain: &'a ConvexDomain<f64>) -> Self {
        let step = std::f64::consts::TAU / SUP_SAMPLES as f64;
        let points = (0..SUP_SAMPLES).map(|k| domain.gamma(step * k as f64)).collect();
        BoundarySampler { domain, points }
    }

    /// `max |h|` on `∂Ω`: the samples, refined around the four largest peaks.
    pub fn sup(&self, h: &AnalyticFn<f64>) -> f64 {
        let step = std::f64::consts::TAU / SUP_SAMPLES as f64;
        let vals: Vec<f64> = self.points.iter().map(|z| h.eval(*z).norm()).collect();
        let m = SUP_SAMPLES;
        let mut peaks: Vec<usize> = (0..m)
            .filter(|&k| vals[k] >= vals[(k + m - 1) % m] && vals[k] >= vals[(k + 1) % m])
            .collect();
        peaks.sort_by(|a, b| vals[*b].total_cmp(&vals[*a]));
        let mut best = vals.iter().fold(0.0f64, |a, b| a.max(*b));
        let f = |t: f64| h.eval(self.domain.gamma(t)).norm();
        for &k in peaks.iter().take(4) {
            let c = step * k as f64;
            best = best.max(golden_max(f, c - step, c + step, 1e-12).1);
        }
        best
    }
}

/// `max |h|` on `∂Ω`; see [`BoundarySampler`] when several functions share a domain.
pub fn boundary_sup(domain: &ConvexDomain<f64>, h: &AnalyticFn<f64>) -> f64 {
    BoundarySampler::new(domain).sup(h)
}

/// `‖h(T) + ((C_Ω h̄)(T))*‖ ≤ 2 sup_{∂Ω}|h|` over the given polynomials.
///
/// `lhs` is the largest ratio `‖h(T) + ((C_Ω h̄)(T))*‖ / sup|h|`, `rhs = 2`.  The details
/// also record the smallest eigenvalue of the real part of the resolvent density.  When
/// `W(T) ⊄ Ω` the report is vacuous and the measured values stay in the details.
pub fn cp_check(
    t: &CMat<f64>,
    domain: &ConvexDomain<f64>,
    nodes: usize,
    polys: &[AnalyticFn<f64>],
    seed: u64,
) -> Result<ExperimentReport> {
    let grid = quadrature(domain, nodes)?;
    let measure = ResolventMeasure::new(t, &grid)?;
    let range = numerical_range(t, 256)?;
    let inside = range.support_points.iter().all(|p| domain.contains(*p));
    let sampler = BoundarySampler::new(domain);
    let mut worst = (0.0f64, 0usize);
    for (i, h) in polys.iter().enumerate() {
        let vals: Vec<C> = grid.nodes.iter().map(|z| h.eval(*z)).collect();
        let sup = sampler.sup(h);
        if !(sup > 0.0) {
            continue;
        }
        let ratio = op_norm(&measure.apply_real_part(&vals).scale(2.0)) / sup;
        if ratio > worst.0 {
            worst = (ratio, i);
        }
    }
    let min_density = measure.density_real_part().into_iter().fold(f64::INFINITY, f64::min);
    let inputs = json!({
        "T": matrix_value(t),
        "domain": domain_value(domain),
        "nodes": nodes,
        "polynomials": polys.len(),
    });
    let bound = "‖h(T) + (C h̄)(T)*‖ ≤ 2 sup|h|";
    let report = if inside {
        ExperimentReport::checked("cp-check", seed, inputs, bound, worst.0, 2.0, CP_TOL)
    } else {
        ExperimentReport::vacuous("cp-check", seed, inputs, bound, Outcome::Vacuous)
            .with_detail("reason", "numerical range is not inside the domain")
    };
    Ok(report
        .with_tolerance("cp", CP_TOL)
        .with_tolerance("density", DENSITY_TOL)
        .with_detail("max_ratio", worst.0)
        .with_detail("worst_polynomial", worst.1)
        .with_detail("min_density", min_density)
        .with_detail("density_nonnegative", min_density >= -DENSITY_TOL)
        .with_detail("range_inside", inside)
        .with_detail("cauchy_residual", measure.identity_residual()))
}

fn alpha_name(alpha: &AlphaRep<f64>) -> &'static str {
    match alpha.kind() {
        AlphaKind::Cauchy => "cauchy",
        AlphaKind::Scalar => "scalar",
        AlphaKind::ConjFinite => "conj",
    }
}

fn instance_inputs(inst: &HomInstance<f64>, alpha: &AlphaRep<f64>, budget: usize) -> serde_json::Value {
    json!({
        "T": matrix_value(&inst.t),
        "domain": domain_value(inst.domain()),
        "nodes": inst.grid().n,
        "alpha": alpha_name(alpha),
        "budget": budget,
    })
}

/// `‖θ_α‖ ≤ 1 ⇒ ‖θ‖ ≤ 1 + √2` at the estimated norms.
///
/// For the best `θ` witness `f` (with `‖f‖ = 1`) the details log the three terms of the
/// chain `‖θ(f)‖⁴ ≤ 2‖θ_α(f)‖‖θ(f)‖³ + ‖θ(f α(f) f)‖‖θ(f)‖`, and whether the run is a
/// candidate counterexample to the bound 2.
pub fn check_basic_bound(
    inst: &HomInstance<f64>,
    alpha: &AlphaRep<f64>,
    budget: usize,
    seed: u64,
) -> Result<ExperimentReport> {
    let est = estimate_theta_norm(inst, alpha, budget, seed)?;
    let f = est.theta_witness.to_fn::<f64>()?;
    let tf = theta(&f, inst);
    let a = spectral_norm(&tf);
    let ta = spectral_norm(&theta_alpha(&f, inst, alpha)?);
    let faf = tf.as_mat() * theta_of_alpha(&f, inst, alpha)?.as_mat() * tf.as_mat();
    let quartic = a.powi(4);
    let first = 2.0 * ta * a.powi(3);
    let second = op_norm(&faf) * a;
    let chain_holds = quartic <= (first + second) * (1.0 + 1e-9) + 1e-12;
    let tol = BASIC_TOL + inst.tolerance();
    let inputs = instance_inputs(inst, alpha, budget);
    let bound = "‖θ_α‖ ≤ 1 implies ‖θ‖ ≤ 1 + √2";
    let report = if est.theta_alpha_norm <= 1.0 + tol {
        ExperimentReport::checked("basic-bound", seed, inputs, bound, est.theta_norm, ONE_PLUS_SQRT2, tol)
    } else {
        ExperimentReport::vacuous("basic-bound", seed, inputs, bound, Outcome::Vacuous)
            .with_detail("reason", "theta_alpha estimate exceeds 1")
    };
    Ok(report
        .with_tolerance("estimate", tol)
        .with_detail("theta_estimate", est.theta_norm)
        .with_detail("theta_alpha_estimate", est.theta_alpha_norm)
        .with_detail("theta_witness", &est.theta_witness)
        .with_detail("theta_alpha_witness", &est.theta_alpha_witness)
        .with_detail(
            "chain",
            json!({
                "theta_f_pow4": quartic,
                "two_theta_alpha_theta_cubed": first,
                "theta_f_alpha_f_f_times_theta": second,
                "holds": chain_holds,
            }),
        )
        .with_detail(
            "exceeds_two",
            est.theta_alpha_norm <= 1.0 + tol && est.theta_norm > 2.0 + tol,
        ))
}

/// `‖θ‖ > 1 ⇒ ‖θ + βI‖ ≥ ‖θ‖` at the estimated norms, with tolerance `1e-4` plus the
/// instance's quadrature tolerance.
pub fn shift_norm_check(
    inst: &HomInstance<f64>,
    beta: &ScalarFunctional<f64>,
    budget: usize,
    seed: u64,
) -> Result<ExperimentReport> {
    let est = estimate_shift_norm(inst, beta, budget, seed)?;
    let tol = SHIFT_TOL + inst.tolerance();
    let beta_value = match beta {
        ScalarFunctional::Point { point, scale } => json!({"point": [point.re, point.im], "scale": [scale.re, scale.im]}),
        ScalarFunctional::Weights { angles, weights } => json!({
            "angles": angles,
            "weights": weights.iter().map(|w| [w.re, w.im]).collect::<Vec<_>>(),
        }),
    };
    let inputs = json!({
        "T": matrix_value(&inst.t),
        "domain": domain_value(inst.domain()),
        "nodes": inst.grid().n,
        "beta": beta_value,
        "budget": budget,
    });
    let bound = "‖θ‖ > 1 implies ‖θ + βI‖ ≥ ‖θ‖";
    let report = if est.theta_norm <= 1.0 + tol {
        ExperimentReport::vacuous("shift-norm", seed, inputs, bound, Outcome::Vacuous)
            .with_detail("reason", "norm-not-exceeding-1")
    } else {
        ExperimentReport::checked("shift-norm", seed, inputs, bound, est.theta_norm, est.shifted_norm, tol)
    };
    Ok(report
        .with_tolerance("estimate", tol)
        .with_detail("theta_estimate", est.theta_norm)
        .with_detail("shifted_estimate", est.shifted_norm)
        .with_detail("theta_witness", &est.theta_witness)
        .with_detail("shifted_witness", &est.shifted_witness))
}
