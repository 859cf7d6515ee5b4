use num_complex::Complex64 as C;
use rand::Rng;
use serde_json::json;

use crate::calculus::{AlphaKind, AlphaRep};
use crate::error::{Error, Result};
use crate::generate::{haar_unitary, rng_for};
use crate::linalg::{op_norm, CMat, Mat};
use crate::report::{matrix_value, ExperimentReport, Outcome};

/// Largest point count accepted by [`projection_image_check`].
pub const MAX_POINTS: usize = 6;
const PHASES: usize = 32;
const GRID_POINTS_MAX: usize = 3;
const PRODUCT_TOL: f64 = 1e-8;
const SUM_TOL: f64 = 1e-10;
const PROJ_TOL: f64 = 1e-6;

/// Functions on `k` points with the homomorphism `θ(f) = Σ f_j E_j` for commuting
/// idempotents `E_j` resolving the identity.
#[derive(Clone, Debug)]
pub struct FinitePointAlgebra {
    pub idempotents: Vec<CMat<f64>>,
}

impl FinitePointAlgebra {
    /// Checks `E_j E_l = δ_{jl} E_j` (within 1e-8) and `Σ E_j = I` (within 1e-10).
    pub fn new(idempotents: Vec<CMat<f64>>) -> Result<Self> {
        let Some(first) = idempotents.first() else {
            return Err(Error::Parameter("a point algebra needs at least one point".into()));
        };
        let n = first.dim();
        if idempotents.iter().any(|e| e.dim() != n) {
            return Err(Error::Inconsistent("idempotents have different sizes".into()));
        }
        let mut sum = Mat::<f64>::zeros(n, n);
        for (j, ej) in idempotents.iter().enumerate() {
            sum += ej.as_mat();
            for (l, el) in idempotents.iter().enumerate() {
                let target = if j == l { ej.as_mat().clone() } else { Mat::zeros(n, n) };
                let defect = op_norm(&(ej.as_mat() * el.as_mat() - target));
                if defect >= PRODUCT_TOL {
                    return Err(Error::Invariant(format!(
                        "E_{j} E_{l} deviates from δ E_{j} by {defect:.3e}"
                    )));
                }
            }
        }
        let defect = op_norm(&(sum - Mat::<f64>::identity(n, n)));
        if defect >= SUM_TOL {
            return Err(Error::Invariant(format!("idempotents sum to I only within {defect:.3e}")));
        }
        Ok(FinitePointAlgebra { idempotents })
    }

    pub fn points(&self) -> usize {
        self.idempotents.len()
    }

    pub fn dim(&self) -> usize {
        self.idempotents[0].dim()
    }

    /// `θ(f) = Σ f_j E_j`.
    pub fn theta(&self, f: &[C]) -> Mat<f64> {
        let n = self.dim();
        self.idempotents
            .iter()
            .zip(f)
            .fold(Mat::zeros(n, n), |acc, (e, v)| acc + e.as_mat() * *v)
    }

    /// `θ_α(f)` for entrywise conjugation: `½ Σ f_j (E_j + E_j*)`.
    pub fn theta_alpha(&self, f: &[C]) -> Mat<f64> {
        let n = self.dim();
        self.idempotents.iter().zip(f).fold(Mat::zeros(n, n), |acc, (e, v)| {
            acc + (e.as_mat() + e.as_mat().adjoint()) * (*v * 0.5)
        })
    }

    /// Largest `‖E_j − E_j*‖`.
    pub fn max_skewness(&self) -> f64 {
        self.idempotents
            .iter()
            .map(|e| op_norm(&(e.as_mat() - e.as_mat().adjoint())))
            .fold(0.0, f64::max)
    }
}

/// `E_j = Q_j Q_j*` for a Haar unitary split into `k` nonempty column groups (`n ≥ k`).
pub fn random_orthogonal_resolution<R: Rng>(n: usize, k: usize, rng: &mut R) -> Result<FinitePointAlgebra> {
    if k == 0 || k > n {
        return Err(Error::Parameter(format!("cannot split {n} dimensions into {k} parts")));
    }
    let q = haar_unitary::<f64, _>(n, rng);
    let mut cuts: Vec<usize> = (1..n).collect();
    for i in 0..cuts.len() {
        let j = rng.random_range(i..cuts.len());
        cuts.swap(i, j);
    }
    let mut cuts: Vec<usize> = cuts.into_iter().take(k - 1).collect();
    cuts.sort_unstable();
    let mut bounds = vec![0];
    bounds.extend(cuts);
    bounds.push(n);
    let parts = bounds
        .windows(2)
        .map(|w| {
            let cols = q.columns(w[0], w[1] - w[0]);
            CMat::wrap(&cols * cols.adjoint())
        })
        .collect();
    FinitePointAlgebra::new(parts)
}

/// `E_1 = [[1, 1], [0, 0]]`, `E_2 = I − E_1`: a non-orthogonal resolution of the identity.
pub fn skew_idempotent_pair() -> FinitePointAlgebra {
    let o = C::new(0.0, 0.0);
    let l = C::new(1.0, 0.0);
    let e1 = CMat::from_rows(&[vec![l, l], vec![o, o]]).expect("2×2");
    let e2 = CMat::from_rows(&[vec![o, -l], vec![o, l]]).expect("2×2");
    FinitePointAlgebra::new(vec![e1, e2]).expect("valid resolution")
}

/// Candidate points of the torus `|f_j| = 1` with `f_0 = 1` (the norm is phase invariant):
/// the full 32-phase grid for `k ≤ 3`, otherwise `budget` seeded random points.
fn torus_candidates(k: usize, budget: usize, seed: u64) -> Vec<Vec<C>> {
    if k <= GRID_POINTS_MAX {
        let total = PHASES.pow(k as u32 - 1);
        (0..total)
            .map(|mut idx| {
                let mut f = vec![C::new(1.0, 0.0)];
                for _ in 1..k {
                    f.push(C::from_polar(1.0, std::f64::consts::TAU * (idx % PHASES) as f64 / PHASES as f64));
                    idx /= PHASES;
                }
                f
            })
            .collect()
    } else {
        let mut rng = rng_for(seed, 0x7e);
        let mut out = vec![vec![C::new(1.0, 0.0); k]];
        for _ in 0..budget {
            let mut f = vec![C::new(1.0, 0.0)];
            f.extend((1..k).map(|_| C::from_polar(1.0, rng.random_range(0.0..std::f64::consts::TAU))));
            out.push(f);
        }
        out
    }
}

/// Projection rigidity on a finite point algebra with `α` the entrywise conjugation.
///
/// `‖θ_α‖` is estimated over the torus.  If it is at most `1 + 1e-6`, every `θ(p)` with
/// `p ∈ {0,1}^k` must be a self-adjoint projection (`lhs` = largest defect).  Otherwise,
/// if some `E_j` is not self-adjoint, the estimate must exceed `1 + 1e-6`
/// (contrapositive outcome).
pub fn projection_image_check(
    alg: &FinitePointAlgebra,
    alpha: &AlphaRep<f64>,
    budget: usize,
    seed: u64,
) -> Result<ExperimentReport> {
    if alpha.kind() != AlphaKind::ConjFinite {
        return Err(Error::Unsupported(
            "point algebras support only entrywise conjugation as alpha".into(),
        ));
    }
    let k = alg.points();
    if k > MAX_POINTS {
        return Err(Error::Size(format!("point algebra with {k} > {MAX_POINTS} points")));
    }
    let mut best = (0.0f64, vec![C::new(1.0, 0.0); k]);
    for f in torus_candidates(k, budget, seed) {
        let v = op_norm(&alg.theta_alpha(&f));
        if v > best.0 {
            best = (v, f);
        }
    }
    let skew = alg.max_skewness();
    let inputs = json!({
        "idempotents": alg.idempotents.iter().map(matrix_value).collect::<Vec<_>>(),
        "alpha": "conj",
        "budget": budget,
    });
    let witness: Vec<[f64; 2]> = best.1.iter().map(|z| [z.re, z.im]).collect();
    let bound = "‖θ_α‖ ≤ 1 makes θ(p) a self-adjoint projection";
    let report = if best.0 <= 1.0 + PROJ_TOL {
        let mut defect = 0.0f64;
        for mask in 0..(1usize << k) {
            let p: Vec<C> = (0..k).map(|j| C::new(((mask >> j) & 1) as f64, 0.0)).collect();
            let tp = alg.theta(&p);
            defect = defect.max(op_norm(&(&tp - tp.adjoint())));
            defect = defect.max(op_norm(&(&tp * &tp - &tp)));
        }
        ExperimentReport::checked("projection", seed, inputs, bound, defect, 0.0, PROJ_TOL)
            .with_detail("projection_defect", defect)
    } else if skew > PROJ_TOL {
        ExperimentReport::checked("projection", seed, inputs, bound, 1.0 + PROJ_TOL, best.0, 0.0)
            .with_outcome(Outcome::Contrapositive)
    } else {
        ExperimentReport::checked("projection", seed, inputs, bound, best.0, 1.0, PROJ_TOL)
    };
    Ok(report
        .with_tolerance("projection", PROJ_TOL)
        .with_detail("theta_alpha_estimate", best.0)
        .with_detail("witness", witness)
        .with_detail("max_skewness", skew))
}
