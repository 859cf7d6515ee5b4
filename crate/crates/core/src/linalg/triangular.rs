use nalgebra::Schur;
use num_complex::Complex;

use super::{commutator_norm, fix_phase, lower_defect, op_norm, unitarity_defect, CMat, Mat, Vector};
use crate::error::{Error, Result};
use crate::scalar::Real;
use crate::tolerance::Tolerances;

/// Common Schur basis of a commuting family.
#[derive(Clone, Debug)]
pub struct Triangularization<T: Real> {
    /// Unitary `U` with `U* A_i U` upper triangular.
    pub unitary: CMat<T>,
    /// The triangular forms `U* A_i U`, in input order.
    pub triangular: Vec<CMat<T>>,
}

/// Simultaneously triangularizes pairwise-commuting matrices by recursive
/// deflation along a common eigenvector.
pub fn simultaneous_triangularize<T: Real>(mats: &[CMat<T>]) -> Result<Triangularization<T>> {
    let tol = Tolerances::DEFAULT;
    let Some(first) = mats.first() else {
        return Err(Error::Parameter("empty matrix family".into()));
    };
    let n = first.dim();
    if mats.iter().any(|m| m.dim() != n) {
        return Err(Error::Input("matrices in the family differ in dimension".into()));
    }
    let mut worst = T::zero();
    for i in 0..mats.len() {
        for j in (i + 1)..mats.len() {
            worst = worst.max(commutator_norm(mats[i].as_mat(), mats[j].as_mat()));
        }
    }
    if worst >= T::lit(tol.commute) {
        return Err(Error::Precondition(format!(
            "family does not commute: worst commutator norm {:e}",
            worst.as_f64()
        )));
    }

    let raw: Vec<Mat<T>> = mats.iter().map(|m| m.as_mat().clone()).collect();
    let mut u = deflate(&raw);
    for j in 0..n {
        let mut col: Vector<T> = u.column(j).into_owned();
        fix_phase(&mut col);
        u.set_column(j, &col);
    }

    let triangular: Vec<CMat<T>> = raw
        .iter()
        .map(|a| CMat::wrap(u.adjoint() * a * &u))
        .collect();
    let defect = unitarity_defect(&u);
    if defect > T::lit(tol.unitarity) {
        return Err(Error::numerical(format!(
            "triangularizing basis lost unitarity ({:e})",
            defect.as_f64()
        )));
    }
    for (i, t) in triangular.iter().enumerate() {
        let scale = T::one() + op_norm(t.as_mat());
        let low = lower_defect(t.as_mat());
        if low > T::lit(tol.residual) * scale {
            return Err(Error::Numerical {
                message: format!("matrix {i} not triangularized (lower defect {:e})", low.as_f64()),
                trace: vec![low.as_f64()],
            });
        }
    }
    Ok(Triangularization {
        unitary: CMat::wrap(u),
        triangular,
    })
}

fn deflate<T: Real>(mats: &[Mat<T>]) -> Mat<T> {
    let n = mats[0].nrows();
    if n == 1 {
        return Mat::identity(1, 1);
    }
    let v = common_eigenvector(mats);
    let q1 = complete_to_unitary(&v);
    let trailing: Vec<Mat<T>> = mats
        .iter()
        .map(|a| {
            let b = q1.adjoint() * a * &q1;
            b.view((1, 1), (n - 1, n - 1)).into_owned()
        })
        .collect();
    let q2 = deflate(&trailing);
    let mut block = Mat::identity(n, n);
    block.view_mut((1, 1), (n - 1, n - 1)).copy_from(&q2);
    q1 * block
}

/// A unit vector that is an eigenvector of every matrix of a commuting family.
fn common_eigenvector<T: Real>(mats: &[Mat<T>]) -> Vector<T> {
    let n = mats[0].nrows();
    let mut basis: Mat<T> = Mat::identity(n, n);
    for a in mats {
        let d = basis.ncols();
        if d == 1 {
            break;
        }
        let c = basis.adjoint() * a * &basis;
        let scale = T::one() + op_norm(&c);
        let schur = Schur::new(c.clone());
        let (_, t) = schur.unpack();
        // a defective eigenvalue is only resolved to ~sqrt(eps) by each Schur
        // diagonal entry; the cluster mean is accurate to rounding
        let lead = t[(0, 0)];
        let cluster: Vec<Complex<T>> = (0..d)
            .map(|i| t[(i, i)])
            .filter(|z| (z - lead).norm_sqr().sqrt() <= T::lit(1e-5) * scale)
            .collect();
        let mu = cluster
            .iter()
            .fold(Complex::new(T::zero(), T::zero()), |acc, z| acc + z)
            .unscale(T::from_usize_lossy(cluster.len()));
        let shifted = &c - Mat::from_diagonal_element(d, d, mu);
        let svd = shifted.svd(false, true);
        let v_t = svd.v_t.expect("right singular vectors were requested");
        let thresh = T::lit(1e-7) * scale;
        let mut keep: Vec<usize> = (0..d)
            .filter(|&i| svd.singular_values[i] <= thresh)
            .collect();
        if keep.is_empty() {
            let (imin, _) = svd
                .singular_values
                .iter()
                .enumerate()
                .fold((0, T::max_value().unwrap()), |(bi, bs), (i, s)| if *s < bs { (i, *s) } else { (bi, bs) });
            keep.push(imin);
        }
        let null = Mat::from_fn(d, keep.len(), |r, k| v_t[(keep[k], r)].conj());
        basis = &basis * null;
    }
    basis.column(0).into_owned()
}

/// Unitary matrix whose first column is the unit vector `v`.
fn complete_to_unitary<T: Real>(v: &Vector<T>) -> Mat<T> {
    let n = v.len();
    let pivot = (0..n)
        .max_by(|&i, &j| v[i].norm_sqr().partial_cmp(&v[j].norm_sqr()).unwrap_or(std::cmp::Ordering::Equal))
        .unwrap_or(0);
    let mut m = Mat::zeros(n, n);
    m.set_column(0, v);
    let mut col = 1;
    for e in 0..n {
        if e == pivot {
            continue;
        }
        m[(e, col)] = Complex::new(T::one(), T::zero());
        col += 1;
    }
    let qr = m.qr();
    let mut q = qr.q();
    let r00 = qr.r()[(0, 0)];
    let phase = r00.unscale(r00.norm_sqr().sqrt());
    let first: Vector<T> = q.column(0).map(|z| z * phase);
    q.set_column(0, &first);
    q
}
