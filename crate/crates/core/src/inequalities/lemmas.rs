use num_complex::Complex64 as C;
use rand::Rng;
use serde_json::json;

use crate::calculus::AnalyticFn;
use crate::conformal::matrix_mobius;
use crate::dilation::class_membership;
use crate::error::{Error, Result};
use crate::generate::{complex_gaussian, random_coeffs};
use crate::linalg::{inner, norm_attaining_vector, op_norm, spectral_norm, spectral_radius, CMat, Mat};
use crate::report::{matrix_value, ExperimentReport, Outcome};

const SPECTRUM_SLACK: f64 = 1e-8;
const HYPOTHESIS_SLACK: f64 = 1e-8;
const XTX_TOL: f64 = 1e-6;
const OKUBO_TOL: f64 = 1e-8;
const COUNTEREXAMPLE_SLACK: f64 = 1e-3;
const COMMUTE_TOL: f64 = 1e-10;
const BLOCK_SLACK: f64 = 1e-10;
const GRID_RADIUS: f64 = 0.95;

/// Random polynomials on the disk with degrees uniform in `0..=max_degree`.
pub fn random_disk_polys<R: Rng>(count: usize, max_degree: usize, rng: &mut R) -> Vec<AnalyticFn<f64>> {
    (0..count)
        .map(|_| {
            let d = rng.random_range(0..=max_degree);
            AnalyticFn::poly(random_coeffs(d, rng))
        })
        .collect()
}

/// `count` automorphism parameters: a sunflower spiral filling `|w| ≤ 0.95`, plus the two
/// small points `0.01` and `0.05i` probing the first-order behaviour at `w = 0`.
pub fn xtx_w_grid(count: usize) -> Vec<C> {
    let spiral = count.saturating_sub(2).max(1);
    let golden = std::f64::consts::PI * (3.0 - 5f64.sqrt());
    let mut pts: Vec<C> = (0..spiral)
        .map(|j| {
            let r = GRID_RADIUS * ((j as f64 + 0.5) / spiral as f64).sqrt();
            C::from_polar(r, golden * j as f64)
        })
        .collect();
    pts.push(C::new(0.01, 0.0));
    pts.push(C::new(0.0, 0.05));
    pts.truncate(count.max(1));
    pts
}

/// Norm attainment at a vector orthogonal to its image, under `σ(T) ⊂ 𝔻̄`, `‖T‖ > 1`
/// and `‖φ_w(T)‖ ≤ ‖T‖` on the given automorphism grid.
///
/// Outcomes: `pass`/`fail` on `|⟨x, Tx⟩| < 1e-6`, `vacuous` when `‖T‖ ≤ 1`, and
/// `hypothesis-violated` (with the worst `w`) when some automorphism increases the norm.
pub fn lemma_xtx_check(t: &CMat<f64>, w_grid: &[C], seed: u64) -> Result<ExperimentReport> {
    let radius = spectral_radius(t)?;
    if radius > 1.0 + SPECTRUM_SLACK {
        return Err(Error::Precondition(format!(
            "spectrum leaves the closed unit disk (spectral radius {radius:.12})"
        )));
    }
    let norm = spectral_norm(t);
    let grid_radius = w_grid.iter().fold(0.0f64, |a, w| a.max(w.norm()));
    let inputs = json!({
        "T": matrix_value(t),
        "grid_points": w_grid.len(),
        "grid_radius": grid_radius,
    });
    let bound = "|⟨x, Tx⟩| = 0 at a norm-attaining x";
    if norm <= 1.0 {
        return Ok(ExperimentReport::vacuous("xtx", seed, inputs, bound, Outcome::Vacuous)
            .with_detail("reason", "norm-not-exceeding-1")
            .with_detail("norm", norm));
    }
    let mut worst = (f64::NEG_INFINITY, C::new(0.0, 0.0));
    for w in w_grid {
        let excess = spectral_norm(&matrix_mobius(*w, t)?) - norm;
        if excess > worst.0 {
            worst = (excess, *w);
        }
    }
    if worst.0 > HYPOTHESIS_SLACK {
        return Ok(ExperimentReport::vacuous("xtx", seed, inputs, bound, Outcome::HypothesisViolated)
            .with_detail("reason", "hypothesis-violated")
            .with_detail("worst_w", [worst.1.re, worst.1.im])
            .with_detail("norm_excess", worst.0)
            .with_detail("norm", norm));
    }
    let x = norm_attaining_vector(t)?;
    let tx = t.as_mat() * x.as_vector();
    let value = inner(x.as_vector(), &tx).norm();
    Ok(ExperimentReport::checked("xtx", seed, inputs, bound, value, 0.0, XTX_TOL)
        .with_tolerance("xtx", XTX_TOL)
        .with_tolerance("hypothesis", HYPOTHESIS_SLACK)
        .with_detail("norm", norm)
        .with_detail("max_automorphism_excess", worst.0))
}

/// `‖p(T) + (ρ−1)p(0)I‖ ≤ ρ sup|p|` and `‖p(T)‖ ≤ ρ sup|p|` for `T ∈ C_ρ`.
///
/// `lhs` is the largest of both ratios over the polynomials.  For `ρ = 2` a ratio
/// `‖p(T)‖/sup|p| > 2 + 1e-3` is recorded as a counterexample candidate.
pub fn okubo_ando_check(t: &CMat<f64>, rho: f64, polys: &[AnalyticFn<f64>], seed: u64) -> Result<ExperimentReport> {
    let member = class_membership(t, rho)?;
    if !member.member {
        let what = if rho == 1.0 { "operator norm" } else { "numerical radius" };
        return Err(Error::Precondition(format!(
            "T is not in the class for rho = {rho}: {what} {:.12} exceeds 1",
            member.value
        )));
    }
    let n = t.dim();
    let mut worst = (0.0f64, 0usize);
    let mut worst_plain = (0.0f64, 0usize);
    for (i, p) in polys.iter().enumerate() {
        let sup = p.circle_sup_refined();
        if !(sup > 0.0) {
            continue;
        }
        let pt = p.eval_matrix(t)?;
        let shifted = pt.as_mat() + Mat::<f64>::identity(n, n) * (p.eval(C::new(0.0, 0.0)) * (rho - 1.0));
        let a = op_norm(&shifted) / sup;
        let b = spectral_norm(&pt) / sup;
        if a.max(b) > worst.0 {
            worst = (a.max(b), i);
        }
        if b > worst_plain.0 {
            worst_plain = (b, i);
        }
    }
    let inputs = json!({"T": matrix_value(t), "rho": rho, "polynomials": polys.len()});
    let mut report = ExperimentReport::checked(
        "okubo-ando",
        seed,
        inputs,
        "‖p(T) + (ρ−1)p(0)I‖ ≤ ρ sup|p|",
        worst.0,
        rho,
        OKUBO_TOL,
    )
    .with_tolerance("okubo_ando", OKUBO_TOL)
    .with_detail("membership_value", member.value)
    .with_detail("max_plain_ratio", worst_plain.0)
    .with_detail("worst_polynomial", worst.1);
    if rho == 2.0 && worst_plain.0 > 2.0 + COUNTEREXAMPLE_SLACK {
        let coeffs = match &polys[worst_plain.1].repr {
            crate::calculus::FnRepr::Poly { coeffs, .. } => coeffs.iter().map(|c| [c.re, c.im]).collect::<Vec<_>>(),
            _ => Vec::new(),
        };
        report = report.with_detail("counterexample", json!({"coeffs": coeffs, "ratio": worst_plain.0}));
    }
    Ok(report)
}

/// Diagonal `D` (`m` entries), diagonal `E` (`k` entries) and an `m × k` block `X`.
#[derive(Clone, Debug)]
pub struct BlockTriple {
    pub d: Vec<f64>,
    pub e: Vec<f64>,
    pub x: Mat<f64>,
}

/// Random admissible triple: entries of `D`, `E` in `[−3, 1]`, a random nonempty set of
/// pairs with `d_j = e_k = 1` (so `d_j + e_k = 2`), and `X ≠ 0` supported on those pairs.
pub fn admissible_block_triple<R: Rng>(rng: &mut R) -> BlockTriple {
    let m = rng.random_range(1..=4);
    let k = rng.random_range(1..=4);
    let mut d: Vec<f64> = (0..m).map(|_| rng.random_range(-3.0..1.0)).collect();
    let mut e: Vec<f64> = (0..k).map(|_| rng.random_range(-3.0..1.0)).collect();
    let rows: Vec<usize> = (0..m).filter(|_| rng.random_bool(0.5)).collect();
    let cols: Vec<usize> = (0..k).filter(|_| rng.random_bool(0.5)).collect();
    let rows = if rows.is_empty() { vec![rng.random_range(0..m)] } else { rows };
    let cols = if cols.is_empty() { vec![rng.random_range(0..k)] } else { cols };
    for &j in &rows {
        d[j] = 1.0;
    }
    for &l in &cols {
        e[l] = 1.0;
    }
    let mut x = Mat::<f64>::zeros(m, k);
    for &j in &rows {
        for &l in &cols {
            x[(j, l)] = complex_gaussian(rng);
        }
    }
    BlockTriple { d, e, x }
}

/// If `2X − DX − XE = 0` and `X ≠ 0`, the block matrix
/// `[[(I+D)/2, X/2], [X*/2, −(I+E)/2]]` has norm above `1 + 1e-10`.
///
/// A zero `X` or a failed commutation relation gives a vacuous report.
pub fn block_lemma_check(d: &[f64], e: &[f64], x: &Mat<f64>, seed: u64) -> Result<ExperimentReport> {
    let admissible = |v: &[f64]| v.iter().all(|a| a.is_finite() && (1.0 + a).abs() <= 2.0);
    if d.is_empty() || e.is_empty() || !admissible(d) || !admissible(e) {
        return Err(Error::Parameter("diagonal entries must satisfy |1 + d| ≤ 2".into()));
    }
    if x.nrows() != d.len() || x.ncols() != e.len() {
        return Err(Error::Parameter(format!(
            "X is {}×{} but D, E have sizes {} and {}",
            x.nrows(),
            x.ncols(),
            d.len(),
            e.len()
        )));
    }
    let (m, k) = (d.len(), e.len());
    let mut comm = x.scale(2.0);
    for j in 0..m {
        for l in 0..k {
            comm[(j, l)] -= x[(j, l)] * (d[j] + e[l]);
        }
    }
    let comm_norm = op_norm(&comm);
    let x_norm = op_norm(x);
    let inputs = json!({
        "d": d,
        "e": e,
        "x_re": (0..m).map(|j| (0..k).map(|l| x[(j, l)].re).collect::<Vec<_>>()).collect::<Vec<_>>(),
        "x_im": (0..m).map(|j| (0..k).map(|l| x[(j, l)].im).collect::<Vec<_>>()).collect::<Vec<_>>(),
    });
    let bound = "nonzero X with 2X = DX + XE forces the block norm above 1";
    if x_norm == 0.0 {
        return Ok(ExperimentReport::vacuous("block-lemma", seed, inputs, bound, Outcome::Vacuous)
            .with_detail("reason", "zero-block"));
    }
    if comm_norm >= COMMUTE_TOL {
        return Ok(ExperimentReport::vacuous("block-lemma", seed, inputs, bound, Outcome::Vacuous)
            .with_detail("reason", "commutation-not-satisfied")
            .with_detail("commutator_norm", comm_norm));
    }
    let mut b = Mat::<f64>::zeros(m + k, m + k);
    for j in 0..m {
        b[(j, j)] = C::new((1.0 + d[j]) / 2.0, 0.0);
    }
    for l in 0..k {
        b[(m + l, m + l)] = C::new(-(1.0 + e[l]) / 2.0, 0.0);
    }
    b.view_mut((0, m), (m, k)).copy_from(&x.scale(0.5));
    b.view_mut((m, 0), (k, m)).copy_from(&x.adjoint().scale(0.5));
    let block_norm = op_norm(&b);
    Ok(
        ExperimentReport::checked("block-lemma", seed, inputs, bound, 1.0 + BLOCK_SLACK, block_norm, 0.0)
            .with_tolerance("commute", COMMUTE_TOL)
            .with_tolerance("norm", BLOCK_SLACK)
            .with_detail("block_norm", block_norm)
            .with_detail("commutator_norm", comm_norm),
    )
}
