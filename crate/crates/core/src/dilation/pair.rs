use std::path::Path;

use num_complex::Complex64 as C;
use serde::{Deserialize, Serialize};

use super::class_membership;
use crate::error::{Error, Result};
use crate::generate::{random_coeffs, rng_for};
use crate::linalg::{op_norm, unitarity_defect, CMat, Mat, MatrixFile};

const UNITARY_TOL: f64 = 1e-10;
const RESIDUAL_TOL: f64 = 1e-10;

/// A matrix `T` on `H = ℂ^n` and a unitary `U` on `K = ℂ^N ⊇ H` (first `n` coordinates)
/// with `T^m ≈ ρ P_H U^m|_H` for `m = 1..M`.
#[derive(Clone, Debug)]
pub struct DilationPair {
    pub t: CMat<f64>,
    pub u: CMat<f64>,
    pub rho: f64,
    pub max_power: usize,
    /// `r_m = ‖T^m − ρ P_H U^m|_H‖` for `m = 1..M`.
    pub residuals: Vec<f64>,
}

/// Scalar part of the on-disk form; `T` and `U` are stored as matrix files.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DilationMeta {
    pub rho: f64,
    #[serde(rename = "M")]
    pub max_power: usize,
    pub residuals: Vec<f64>,
}

/// `‖T^m − ρ P_H U^m|_H‖` for `m = 1..M`.
pub fn dilation_residuals(t: &CMat<f64>, u: &CMat<f64>, rho: f64, m: usize) -> Vec<f64> {
    let n = t.dim();
    let mut tp = Mat::<f64>::identity(n, n);
    let mut up = Mat::<f64>::identity(u.dim(), u.dim());
    (1..=m)
        .map(|_| {
            tp = &tp * t.as_mat();
            up = &up * u.as_mat();
            let corner = up.view((0, 0), (n, n)).scale(rho);
            op_norm(&(&tp - corner))
        })
        .collect()
}

impl DilationPair {
    pub fn new(t: CMat<f64>, u: CMat<f64>, rho: f64, max_power: usize) -> Result<Self> {
        if u.dim() < t.dim() {
            return Err(Error::Parameter(format!(
                "dilation space (dim {}) is smaller than the base space (dim {})",
                u.dim(),
                t.dim()
            )));
        }
        if !(rho >= 1.0) || max_power == 0 {
            return Err(Error::Parameter("dilation needs rho ≥ 1 and M ≥ 1".into()));
        }
        let residuals = dilation_residuals(&t, &u, rho, max_power);
        Ok(DilationPair {
            t,
            u,
            rho,
            max_power,
            residuals,
        })
    }

    pub fn meta(&self) -> DilationMeta {
        DilationMeta {
            rho: self.rho,
            max_power: self.max_power,
            residuals: self.residuals.clone(),
        }
    }

    /// Writes `<stem>.T.json`, `<stem>.U.json` and `<stem>.json` into `dir`.
    pub fn write(&self, dir: &Path, stem: &str) -> Result<()> {
        std::fs::write(dir.join(format!("{stem}.T.json")), self.t.to_json())?;
        std::fs::write(dir.join(format!("{stem}.U.json")), self.u.to_json())?;
        std::fs::write(dir.join(format!("{stem}.json")), serde_json::to_string_pretty(&self.meta())?)?;
        Ok(())
    }

    pub fn read(dir: &Path, stem: &str) -> Result<Self> {
        let t = MatrixFile::parse(&std::fs::read_to_string(dir.join(format!("{stem}.T.json")))?)?.to_matrix()?;
        let u = MatrixFile::parse(&std::fs::read_to_string(dir.join(format!("{stem}.U.json")))?)?.to_matrix()?;
        let meta: DilationMeta = serde_json::from_str(&std::fs::read_to_string(dir.join(format!("{stem}.json")))?)
            .map_err(|e| Error::Input(format!("malformed dilation metadata: {e}")))?;
        Self::new(t, u, meta.rho, meta.max_power)
    }

    pub fn max_residual(&self) -> f64 {
        self.residuals.iter().fold(0.0, |a: f64, b| a.max(*b))
    }
}

/// Unitary dilation of a contraction valid for powers `1..=M`.
///
/// `U` acts on `n(2M+1)` dimensions:
/// first block row `[T, 0, …, 0, D_{T*}]`, second `[D_T, 0, …, 0, −T*]`, then identity
/// blocks on the subdiagonal, with defect operators `D_T = (I − T*T)^{1/2}`.
pub fn schaffer_dilation(t: &CMat<f64>, m: usize) -> Result<DilationPair> {
    let member = class_membership(t, 1.0)?;
    if !member.member {
        return Err(Error::Precondition(format!(
            "not a contraction: ‖T‖ = {:.12}, margin {:.3e}",
            member.value, member.margin
        )));
    }
    if m == 0 {
        return Err(Error::Parameter("dilation order M must be at least 1".into()));
    }
    let n = t.dim();
    let id = Mat::<f64>::identity(n, n);
    let tm = t.as_mat();
    let (d_t, d_ts) = defect_operators(tm);
    let blocks = 2 * m + 1;
    let mut u = Mat::<f64>::zeros(n * blocks, n * blocks);
    let last = (blocks - 1) * n;
    u.view_mut((0, 0), (n, n)).copy_from(tm);
    u.view_mut((0, last), (n, n)).copy_from(&d_ts);
    u.view_mut((n, 0), (n, n)).copy_from(&d_t);
    u.view_mut((n, last), (n, n)).copy_from(&(-tm.adjoint()));
    for j in 2..blocks {
        u.view_mut((j * n, (j - 1) * n), (n, n)).copy_from(&id);
    }
    DilationPair::new(t.clone(), CMat::wrap(u), 1.0, m)
}

/// `(D_T, D_{T*})` from one SVD `T = W Σ V*`, so that `T D_T = D_{T*} T` holds to
/// rounding even when `‖T‖ = 1`.
fn defect_operators(t: &Mat<f64>) -> (Mat<f64>, Mat<f64>) {
    let svd = t.clone().svd(true, true);
    let (w, vt) = (svd.u.expect("requested"), svd.v_t.expect("requested"));
    let d = svd
        .singular_values
        .map(|s| C::new(((1.0 - s) * (1.0 + s)).max(0.0).sqrt(), 0.0));
    let side = |q: &Mat<f64>| q * Mat::<f64>::from_diagonal(&d) * q.adjoint();
    (side(&vt.adjoint()), side(&w))
}

/// `T := ρ P_H U|_H`, a pair whose first residual vanishes by construction.
pub fn truncated_dilation(u: &CMat<f64>, n: usize, rho: f64, m: usize) -> Result<DilationPair> {
    if n == 0 || n > u.dim() {
        return Err(Error::Parameter(format!("cannot compress a {}-dim unitary to {n} dims", u.dim())));
    }
    let t = CMat::wrap(u.as_mat().view((0, 0), (n, n)).scale(rho));
    DilationPair::new(t, u.clone(), rho, m)
}

/// Verdict of [`verify_rho_dilation`].
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DilationCheck {
    pub max_residual: f64,
    pub unitarity_defect: f64,
    pub residuals_pass: bool,
    /// Largest `‖p(T) + (ρ−1)p(0)I − ρ P p(U)|_H‖` over 20 random polynomials of degree
    /// at most `M`, when the residuals pass.
    pub polynomial_gap: Option<f64>,
    /// Largest `|‖p(T) + (ρ−1)p(0)I‖ − ρ‖P p(U)|_H‖|` over the same polynomials.
    pub norm_gap: Option<f64>,
}

/// Checks `U*U = I`, the power residuals, and the polynomial identity behind the
/// Okubo–Ando bound.
pub fn verify_rho_dilation(pair: &DilationPair) -> Result<DilationCheck> {
    let defect = unitarity_defect(pair.u.as_mat());
    let max_residual = pair.max_residual();
    if !(defect < UNITARY_TOL) {
        return Err(Error::Invariant(format!(
            "dilation is not unitary: ‖U*U − I‖ = {defect:.3e} (max power residual {max_residual:.3e})"
        )));
    }
    let residuals_pass = max_residual < RESIDUAL_TOL;
    let (mut poly_gap, mut norm_gap) = (None, None);
    if residuals_pass {
        let n = pair.t.dim();
        let mut rng = rng_for(0x0da7, pair.max_power as u64);
        let (mut pg, mut ng) = (0.0f64, 0.0f64);
        for _ in 0..20 {
            let c: Vec<C> = random_coeffs(pair.max_power, &mut rng);
            let pt = horner(&c, pair.t.as_mat()) + Mat::<f64>::identity(n, n) * (c[0] * (pair.rho - 1.0));
            let pu = horner(&c, pair.u.as_mat()).view((0, 0), (n, n)).scale(pair.rho);
            pg = pg.max(op_norm(&(&pt - &pu)));
            ng = ng.max((op_norm(&pt) - op_norm(&pu)).abs());
        }
        poly_gap = Some(pg);
        norm_gap = Some(ng);
    }
    Ok(DilationCheck {
        max_residual,
        unitarity_defect: defect,
        residuals_pass,
        polynomial_gap: poly_gap,
        norm_gap,
    })
}

pub(crate) fn horner(c: &[C], a: &Mat<f64>) -> Mat<f64> {
    let n = a.nrows();
    let id = Mat::<f64>::identity(n, n);
    c.iter().rev().fold(Mat::<f64>::zeros(n, n), |acc, k| acc * a + &id * *k)
}
