use num_complex::Complex64 as C;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::calculus::{estimate_theta_norm, theta, theta_alpha, AlphaRep, AnalyticFn, HomInstance, Witness};
use crate::error::{Error, Result};
use crate::generate::{random_coeffs, rng_for};
use crate::linalg::{op_norm, CMat, Mat};
use crate::numeric::golden_max;
use crate::scalar::cis;

/// Largest amplification level handled by [`cb_norm_estimate`].
pub const MAX_CB_LEVEL: usize = 4;
const SUP_GRID: usize = 512;
const MAX_ENTRY_DEGREE: usize = 8;

/// An `s × s` matrix of polynomials on the disk, row-major.
#[derive(Clone, Debug, PartialEq)]
pub struct MatrixPoly {
    pub size: usize,
    pub entries: Vec<Vec<C>>,
}

impl MatrixPoly {
    pub fn eval(&self, z: C) -> Mat<f64> {
        Mat::from_fn(self.size, self.size, |i, j| {
            self.entries[i * self.size + j]
                .iter()
                .rev()
                .fold(C::new(0.0, 0.0), |acc, c| acc * z + c)
        })
    }

    fn entry_fn(&self, i: usize, j: usize) -> AnalyticFn<f64> {
        AnalyticFn::poly(self.entries[i * self.size + j].clone())
    }

    /// `[Φ(p_ij)]` for a linear map `Φ` on scalar functions.
    pub fn amplify(&self, map: impl Fn(&AnalyticFn<f64>) -> Result<CMat<f64>>) -> Result<Mat<f64>> {
        let mut out: Option<Mat<f64>> = None;
        for i in 0..self.size {
            for j in 0..self.size {
                let b = map(&self.entry_fn(i, j))?;
                let d = b.dim();
                let o = out.get_or_insert_with(|| Mat::zeros(self.size * d, self.size * d));
                o.view_mut((i * d, j * d), (d, d)).copy_from(b.as_mat());
            }
        }
        Ok(out.expect("matrix polynomial has at least one entry"))
    }
}

/// `max_σ ‖P(e^{iσ})‖` from a 512-point circle grid refined around its four largest peaks.
pub fn matrix_sup(p: &MatrixPoly) -> f64 {
    let step = std::f64::consts::TAU / SUP_GRID as f64;
    let f = |s: f64| op_norm(&p.eval(cis(s)));
    let vals: Vec<f64> = (0..SUP_GRID).map(|k| f(step * k as f64)).collect();
    let mut peaks: Vec<usize> = (0..SUP_GRID)
        .filter(|&k| vals[k] >= vals[(k + SUP_GRID - 1) % SUP_GRID] && vals[k] >= vals[(k + 1) % SUP_GRID])
        .collect();
    peaks.sort_by(|a, b| vals[*b].total_cmp(&vals[*a]));
    let mut best = vals.iter().fold(0.0f64, |a, b| a.max(*b));
    for &k in peaks.iter().take(4) {
        let c = step * k as f64;
        best = best.max(golden_max(f, c - step, c + step, 1e-10).1);
    }
    best
}

/// Serializable witness of one amplification level.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum CbWitness {
    /// A scalar witness from the level-1 search, embedded as `f ⊕ 0`.
    Scalar { witness: Witness },
    Matrix { size: usize, entries: Vec<Vec<[f64; 2]>>, sup_norm: f64 },
}

/// Lower estimates of `‖θ^{(s)}‖` (and `‖θ_α^{(s)}‖`) for `s = 1..n_max`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CbEstimate {
    pub levels: Vec<f64>,
    pub alpha_levels: Vec<f64>,
    pub witnesses: Vec<CbWitness>,
}

impl CbEstimate {
    pub fn max_level(&self) -> f64 {
        self.levels.iter().fold(0.0, |a: f64, b| a.max(*b))
    }
}

fn random_matrix_poly<R: Rng>(size: usize, rng: &mut R) -> MatrixPoly {
    let degree = rng.random_range(1..=MAX_ENTRY_DEGREE);
    MatrixPoly {
        size,
        entries: (0..size * size).map(|_| random_coeffs(degree, rng)).collect(),
    }
}

/// Level 1 is [`estimate_theta_norm`]; level `s ≥ 2` is the best of level `s − 1`
/// (embedding `P ↦ P ⊕ 0`) and `budget` random `s × s` matrix polynomials of entry
/// degree at most 8, each normalized by [`matrix_sup`].
pub fn cb_norm_estimate(
    inst: &HomInstance<f64>,
    alpha: &AlphaRep<f64>,
    n_max: usize,
    budget: usize,
    seed: u64,
) -> Result<CbEstimate> {
    if n_max == 0 || n_max > MAX_CB_LEVEL {
        return Err(Error::Size(format!(
            "amplification level must be in 1..={MAX_CB_LEVEL}, got {n_max}"
        )));
    }
    let first = estimate_theta_norm(inst, alpha, budget, seed)?;
    let mut levels = vec![first.theta_norm];
    let mut alpha_levels = vec![first.theta_alpha_norm];
    let mut witnesses = vec![CbWitness::Scalar {
        witness: first.theta_witness,
    }];
    for size in 2..=n_max {
        let (mut best, mut best_alpha) = (levels[size - 2], alpha_levels[size - 2]);
        let mut witness = witnesses[size - 2].clone();
        for trial in 0..budget {
            let mut rng = rng_for(seed ^ 0xcb00 ^ size as u64, trial as u64);
            let p = random_matrix_poly(size, &mut rng);
            let sup = matrix_sup(&p);
            if !(sup > 0.0) {
                continue;
            }
            let v = op_norm(&p.amplify(|f| Ok(theta(f, inst)))?) / sup;
            let va = op_norm(&p.amplify(|f| theta_alpha(f, inst, alpha))?) / sup;
            best_alpha = best_alpha.max(va);
            if v > best {
                best = v;
                witness = CbWitness::Matrix {
                    size,
                    entries: p.entries.iter().map(|e| e.iter().map(|c| [c.re, c.im]).collect()).collect(),
                    sup_norm: sup,
                };
            }
        }
        levels.push(best);
        alpha_levels.push(best_alpha);
        witnesses.push(witness);
    }
    Ok(CbEstimate {
        levels,
        alpha_levels,
        witnesses,
    })
}
