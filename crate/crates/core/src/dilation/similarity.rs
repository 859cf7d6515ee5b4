use num_complex::Complex64 as C;
use serde::{Deserialize, Serialize};
use serde_json::json;

use super::{cb_norm_estimate, class_membership, verify_rho_dilation, DilationPair, MAX_CB_LEVEL};
use crate::calculus::{theta, AlphaRep, HomInstance};
use crate::conformal::{matrix_mobius, mobius};
use crate::error::{Error, Result};
use crate::generate::rng_for;
use crate::inequalities::{okubo_ando_check, random_disk_polys};
use crate::linalg::{commutator_norm, inverse, op_norm, CMat, Mat, Vector};
use crate::report::{matrix_value, ExperimentReport, Outcome};

const GAP_TOL: f64 = 1e-8;
const COMMUTE_TOL: f64 = 1e-8;
const DELTA_SLACK: f64 = 1e-8;
const CB_SLACK: f64 = 1e-3;

/// Output of [`singleton_similarity`].
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Singleton {
    /// The single eigenvalue of `θ(z)`.
    pub lambda: [f64; 2],
    /// Superdiagonal entry of `θ(ψ)` in the triangularizing basis.
    pub delta: [f64; 2],
    /// Diagonal of `S` in the triangularizing basis: `(1/2, 1)`.
    pub s_diagonal: [f64; 2],
    /// `‖Sθ(ψ)S^{-1}‖`.
    pub contraction_norm: f64,
    /// `‖S‖‖S^{-1}‖` of the diagonal `S`.
    pub condition: f64,
    /// `‖θ_α(ψ)‖` with `θ(α(ψ))` given by the supplied matrix.
    pub theta_alpha_norm: f64,
    #[serde(skip)]
    pub basis: Option<CMat<f64>>,
    /// `S` in the original coordinates, `Q diag(1/2, 1) Q*`.
    #[serde(skip)]
    pub s: Option<CMat<f64>>,
    #[serde(skip)]
    pub theta_psi: Option<CMat<f64>>,
}

/// Unit vector spanning the kernel of a nonzero nilpotent 2×2 matrix, or an eigenvector
/// of `fallback` when the matrix vanishes.
fn lead_vector(n: &Mat<f64>, fallback: &Mat<f64>) -> Vector<f64> {
    let tol = 1e-12 * (1.0 + op_norm(n));
    let pick = |m: &Mat<f64>| -> Vector<f64> {
        // kernel of [[a, b], [c, d]] from whichever row is larger
        let r0 = m[(0, 0)].norm() + m[(0, 1)].norm();
        let r1 = m[(1, 0)].norm() + m[(1, 1)].norm();
        let (a, b) = if r0 >= r1 { (m[(0, 0)], m[(0, 1)]) } else { (m[(1, 0)], m[(1, 1)]) };
        let v = Vector::from_vec(vec![b, -a]);
        let s = v.norm();
        if s > 0.0 {
            v.unscale(s)
        } else {
            Vector::from_vec(vec![C::new(1.0, 0.0), C::new(0.0, 0.0)])
        }
    };
    let mut v = if op_norm(n) > tol {
        pick(n)
    } else {
        // eigenvector of the second matrix: kernel of (A − μI)
        let tr = fallback[(0, 0)] + fallback[(1, 1)];
        let det = fallback[(0, 0)] * fallback[(1, 1)] - fallback[(0, 1)] * fallback[(1, 0)];
        let mu = tr / 2.0 + (tr * tr / 4.0 - det).sqrt();
        pick(&(fallback - Mat::<f64>::identity(2, 2) * mu))
    };
    let (i, _) = v.iter().enumerate().fold((0, -1.0), |acc, (i, z)| if z.norm() > acc.1 { (i, z.norm()) } else { acc });
    let phase = v[i].conj() / v[i].norm();
    v *= phase;
    v
}

/// The similarity of the singleton-spectrum construction for a 2×2 `θ(z)` and a
/// matrix `θ(α(ψ))` commuting with it.
///
/// `ψ` is the disk automorphism vanishing at the eigenvalue `λ`; `θ(ψ) = ψ(T2)` is
/// nilpotent, and in a basis triangularizing both matrices it reads `[[0, δ], [0, 0]]`.
/// `S = diag(1/2, 1)` in that basis makes `Sθ(ψ)S^{-1}` a contraction.
pub fn singleton_similarity(t2: &CMat<f64>, alpha_t: &CMat<f64>) -> Result<Singleton> {
    if t2.dim() != 2 || alpha_t.dim() != 2 {
        return Err(Error::Size("the singleton construction is for 2×2 matrices".into()));
    }
    let t = t2.as_mat();
    let disc = (t[(0, 0)] - t[(1, 1)]) * (t[(0, 0)] - t[(1, 1)]) + t[(0, 1)] * t[(1, 0)] * 4.0;
    let gap = disc.norm().sqrt();
    if gap >= GAP_TOL {
        return Err(Error::Precondition(format!(
            "spectrum is not a single point (eigenvalue gap {gap:.3e})"
        )));
    }
    let lambda = (t[(0, 0)] + t[(1, 1)]) / 2.0;
    if !(lambda.norm() < 1.0) {
        return Err(Error::Precondition("the eigenvalue must lie in the open unit disk".into()));
    }
    let comm = commutator_norm(t, alpha_t.as_mat());
    if comm >= COMMUTE_TOL {
        return Err(Error::Precondition(format!(
            "θ(α(ψ)) does not commute with θ(z) (‖[A, B]‖ = {comm:.3e})"
        )));
    }
    let theta_psi = matrix_mobius(lambda, t2)?;
    let ta = (theta_psi.as_mat() + alpha_t.as_mat().adjoint()).scale(0.5);
    let ta_norm = op_norm(&ta);
    if ta_norm > 1.0 + DELTA_SLACK {
        return Err(Error::Precondition(format!("‖θ_α(ψ)‖ = {ta_norm:.12} exceeds 1")));
    }
    let e = lead_vector(theta_psi.as_mat(), alpha_t.as_mat());
    let q = Mat::from_columns(&[e.clone(), Vector::from_vec(vec![-e[1].conj(), e[0].conj()])]);
    let tri = q.adjoint() * theta_psi.as_mat() * &q;
    let delta = tri[(0, 1)];
    if delta.norm() > 2.0 + DELTA_SLACK {
        return Err(Error::Inconsistent(format!(
            "|δ| = {:.12} exceeds 2, so ‖θ_α‖ > 1",
            delta.norm()
        )));
    }
    let s_tri = Mat::from_diagonal(&Vector::from_vec(vec![C::new(0.5, 0.0), C::new(1.0, 0.0)]));
    let s_inv_tri = Mat::from_diagonal(&Vector::from_vec(vec![C::new(2.0, 0.0), C::new(1.0, 0.0)]));
    let contraction_norm = op_norm(&(&s_tri * &tri * &s_inv_tri));
    let s = &q * &s_tri * q.adjoint();
    Ok(Singleton {
        lambda: [lambda.re, lambda.im],
        delta: [delta.re, delta.im],
        s_diagonal: [0.5, 1.0],
        contraction_norm,
        condition: 1.0 * 2.0,
        theta_alpha_norm: ta_norm,
        basis: Some(CMat::wrap(q)),
        s: Some(CMat::wrap(s)),
        theta_psi: Some(theta_psi),
    })
}

/// Similarity criterion for `‖θ‖_cb ≤ 2`, cross-checked against the cb estimator.
///
/// When `‖Sθ(ψ_λ)S^{-1}‖ ≤ 1` and `‖S‖‖S^{-1}‖ ≤ 2`, every amplification level must stay
/// below `2 + 1e-3`; otherwise the report is vacuous with reason
/// `similarity-bound-exceeded`.
pub fn similarity_cb_check(
    inst: &HomInstance<f64>,
    s: &CMat<f64>,
    lambda: C,
    budget: usize,
    seed: u64,
) -> Result<ExperimentReport> {
    let s_inv = inverse(s.as_mat()).map_err(|_| Error::Parameter("similarity S is singular".into()))?;
    let cond = op_norm(s.as_mat()) * op_norm(&s_inv);
    if !cond.is_finite() || cond > 1e12 {
        return Err(Error::Parameter(format!("similarity S is numerically singular (cond {cond:.3e})")));
    }
    let psi = mobius(lambda)?;
    let tp = theta(&psi, inst);
    let contraction = op_norm(&(s.as_mat() * tp.as_mat() * &s_inv));
    let inputs = json!({
        "T": matrix_value(&inst.t),
        "domain": crate::report::domain_value(inst.domain()),
        "S": matrix_value(s),
        "lambda": [lambda.re, lambda.im],
        "nodes": inst.grid().n,
        "budget": budget,
    });
    let bound = "similarity implies cb norm at most 2";
    if contraction > 1.0 + 1e-8 || cond > 2.0 + 1e-10 {
        return Ok(ExperimentReport::vacuous("similarity", seed, inputs, bound, Outcome::Vacuous)
            .with_detail("reason", "similarity-bound-exceeded")
            .with_detail("contraction_norm", contraction)
            .with_detail("condition", cond));
    }
    let cb = cb_norm_estimate(inst, &AlphaRep::Cauchy, MAX_CB_LEVEL, budget, seed)?;
    Ok(ExperimentReport::checked("similarity", seed, inputs, bound, cb.max_level(), 2.0, CB_SLACK)
        .with_tolerance("cb", CB_SLACK)
        .with_detail("contraction_norm", contraction)
        .with_detail("condition", cond)
        .with_detail("levels", &cb.levels)
        .with_detail("alpha_levels", &cb.alpha_levels))
}

/// Checks the computable links between dilation, numerical range and the cb bound for
/// `T = θ(z)`.
///
/// * `unit_range`: `w(T) ≤ 1`;
/// * `dilation`: a supplied `ρ = 2` pair with passing residuals up to order `M` must come with `w(T) ≤ 1`;
/// * `okubo_ando`: when `w(T) ≤ 1`, the Okubo–Ando suite with `ρ = 2` must pass;
/// * `kernel_identity`: with a pair and `z^m ∈ ker(θ∘α)` for `m ≥ 1`, the defect of
///   `θ(z^m) + θ(α(z^m))* = 2P U^m|_H` for `m = 0..M`.
///
/// `lhs` counts failed assertions; items that cannot be checked are reported as `not-checked`.
pub fn equiv_checks(
    t: &CMat<f64>,
    pair: Option<&DilationPair>,
    alpha_ker: bool,
    seed: u64,
) -> Result<ExperimentReport> {
    let mut failures = 0usize;
    let iv = class_membership(t, 2.0)?;
    let mut inputs = json!({"T": matrix_value(t), "alpha_kernel": alpha_ker});
    let mut iii = json!("not-checked");
    let mut ii = json!("not-checked");
    if let Some(p) = pair {
        inputs["dilation"] = json!({"U": matrix_value(&p.u), "rho": p.rho, "M": p.max_power});
        if p.rho == 2.0 {
            let check = verify_rho_dilation(p)?;
            let consistent = !check.residuals_pass || iv.member;
            if !consistent {
                failures += 1;
            }
            iii = json!({
                "order": p.max_power,
                "max_residual": check.max_residual,
                "residuals_pass": check.residuals_pass,
                "implies_unit_range": consistent,
            });
            if alpha_ker {
                // m = 0 contributes I + I − 2I = 0
                let defect = p.residuals.iter().fold(0.0f64, |a, r| a.max(*r));
                ii = json!({"order": p.max_power, "max_defect": defect});
            }
        }
    }
    let v = if iv.member {
        let mut rng = rng_for(seed, 0xe9);
        let polys = random_disk_polys(20, 8, &mut rng);
        let r = okubo_ando_check(t, 2.0, &polys, seed)?;
        if !r.pass {
            failures += 1;
        }
        json!({"pass": r.pass, "margin": r.margin})
    } else {
        json!("not-checked")
    };
    Ok(ExperimentReport::checked(
        "equiv",
        seed,
        inputs,
        "dilation, numerical range and cb statements agree",
        failures as f64,
        0.0,
        0.0,
    )
    .with_detail("unit_range", json!({"holds": iv.member, "numerical_radius": iv.value, "margin": iv.margin}))
    .with_detail("dilation", iii)
    .with_detail("okubo_ando", v)
    .with_detail("kernel_identity", ii)
    .with_detail("note", if iv.member { "" } else { "numerical range leaves the unit disk; no unitary 2-dilation expected" }))
}

