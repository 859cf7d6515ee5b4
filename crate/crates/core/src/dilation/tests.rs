use num_complex::Complex64 as C;

use super::*;
use crate::calculus::{AlphaRep, HomInstance};
use crate::error::Error;
use crate::generate::{ginibre, haar_unitary, nilpotent2, normal, rng_for};
use crate::geom::make_disk;
use crate::linalg::{op_norm, spectral_norm, unitarity_defect, CMat, Mat};
use crate::report::Outcome;

fn c(re: f64, im: f64) -> C {
    C::new(re, im)
}

fn contraction(n: usize, seed: u64, scale: f64) -> CMat<f64> {
    let g = ginibre::<f64, _>(n, &mut rng_for(seed, 0)).unwrap();
    g.scaled(c(scale / spectral_norm(&g), 0.0))
}

fn cyclic_pair() -> DilationPair {
    // e1 -> e0, e0 -> e2, e2 -> e3, e3 -> e1
    let mut u = Mat::<f64>::zeros(4, 4);
    for (from, to) in [(1, 0), (0, 2), (2, 3), (3, 1)] {
        u[(to, from)] = c(1.0, 0.0);
    }
    truncated_dilation(&CMat::new(u).unwrap(), 2, 2.0, 2).unwrap()
}

#[test]
fn membership_examples() {
    let z = CMat::<f64>::zeros(2);
    assert!(class_membership(&z, 1.0).unwrap().member);
    assert!(class_membership(&z, 2.0).unwrap().member);
    let n = nilpotent2(c(2.0, 0.0));
    assert!(!class_membership(&n, 1.0).unwrap().member);
    let m = class_membership(&n, 2.0).unwrap();
    assert!(m.member && (m.value - 1.0).abs() < 1e-9);
    let u = CMat::new(haar_unitary::<f64, _>(3, &mut rng_for(1, 0)) * c(1.01, 0.0)).unwrap();
    let m = class_membership(&u, 1.0).unwrap();
    assert!(!m.member && (m.margin + 0.01).abs() < 1e-9);
    assert!(matches!(class_membership(&z, 1.5), Err(Error::Unsupported(_))));
}

#[test]
fn schaffer_scalar_core() {
    let p = schaffer_dilation(&CMat::zeros(1), 1).unwrap();
    assert_eq!(p.u.dim(), 3);
    assert!(p.u.as_mat()[(0, 0)].norm() < 1e-15);
    let t = c(0.3, 0.4);
    let p = schaffer_dilation(&CMat::diag(&[t]).unwrap(), 1).unwrap();
    let d = (1.0 - t.norm_sqr()).sqrt();
    let u = p.u.as_mat();
    assert!((u[(0, 0)] - t).norm() < 1e-14);
    assert!((u[(1, 0)].re - d).abs() < 1e-14 && (u[(0, 2)].re - d).abs() < 1e-14);
    assert!((u[(1, 2)] + t.conj()).norm() < 1e-14);
    assert!(unitarity_defect(u) < 1e-12 && p.max_residual() < 1e-14);
}

#[test]
fn schaffer_random_contractions() {
    for seed in 0..10u64 {
        let n = 1 + (seed as usize % 5);
        let t = contraction(n, seed, 0.98);
        for m in [1, 4, 8] {
            let p = schaffer_dilation(&t, m).unwrap();
            assert_eq!(p.u.dim(), n * (2 * m + 1));
            let chk = verify_rho_dilation(&p).unwrap();
            assert!(chk.residuals_pass && chk.max_residual < 1e-10, "seed {seed} M {m}");
            assert!(chk.polynomial_gap.unwrap() < 1e-9 && chk.norm_gap.unwrap() < 1e-9);
        }
    }
    let t = contraction(3, 99, 1.2);
    assert!(matches!(schaffer_dilation(&t, 2), Err(Error::Precondition(_))));
}

#[test]
fn perturbed_dilation_flagged() {
    let t = contraction(3, 4, 0.9);
    let mut p = schaffer_dilation(&t, 3).unwrap();
    let mut u = p.u.clone().into_inner();
    u[(0, 0)] += c(1e-3, 0.0);
    p = DilationPair::new(p.t.clone(), CMat::new(u).unwrap(), 1.0, 3).unwrap();
    assert!(p.max_residual() > 1e-4);
    assert!(matches!(verify_rho_dilation(&p), Err(Error::Invariant(_))));
}

#[test]
fn truncation_first_residual_vanishes() {
    let u = CMat::new(haar_unitary::<f64, _>(5, &mut rng_for(2, 0))).unwrap();
    let p = truncated_dilation(&u, 2, 2.0, 3).unwrap();
    assert!(p.residuals[0] < 1e-15);
    assert!(p.residuals[1].is_finite());
}

#[test]
fn pair_file_round_trip() {
    let dir = std::env::temp_dir().join(format!("pair-rt-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let p = schaffer_dilation(&contraction(2, 3, 0.7), 2).unwrap();
    p.write(&dir, "d").unwrap();
    let q = DilationPair::read(&dir, "d").unwrap();
    assert_eq!(p.meta(), q.meta());
    assert!(p.u.distance(&q.u) == 0.0 && p.t.distance(&q.t) == 0.0);
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn cb_levels() {
    let disk = make_disk(c(0.0, 0.0), 1.0 + 1e-3).unwrap();
    let spec = [c(0.5, 0.0), c(-0.2, 0.6)];
    let t = normal::<f64, _>(&spec, Some(&mut rng_for(5, 0))).unwrap();
    let est = cb_norm_estimate(&HomInstance::new(t, &disk, 512).unwrap(), &AlphaRep::Cauchy, 3, 4, 0).unwrap();
    assert!(est.levels.iter().all(|l| *l <= 1.0 + 1e-4));
    assert!(est.levels.windows(2).all(|w| w[0] <= w[1]));

    let s = CMat::diag(&[c(0.3, 0.1), c(0.3, 0.1)]).unwrap();
    let est = cb_norm_estimate(&HomInstance::new(s, &disk, 256).unwrap(), &AlphaRep::Cauchy, 2, 3, 0).unwrap();
    assert!(est.levels.iter().all(|l| (l - 1.0).abs() < 1e-8), "{:?}", est.levels);

    let inst = HomInstance::new(nilpotent2(c(2.0, 0.0)), &disk, 512).unwrap();
    let est = cb_norm_estimate(&inst, &AlphaRep::Cauchy, 3, 4, 0).unwrap();
    assert!((est.levels[0] - 2.0).abs() < 1e-2);
    assert!(est.max_level() <= 2.0 + 1e-3);
    assert!(cb_norm_estimate(&inst, &AlphaRep::Cauchy, 5, 1, 0).is_err());
}

#[test]
fn singleton_examples() {
    let n = nilpotent2(c(2.0, 0.0));
    let s = singleton_similarity(&n, &CMat::zeros(2)).unwrap();
    assert!((s.delta[0].hypot(s.delta[1]) - 2.0).abs() < 1e-10);
    assert!(s.contraction_norm <= 1.0 + 1e-10);
    assert_eq!(s.condition, 2.0);
    let sm = s.s.as_ref().unwrap().as_mat();
    assert!((sm - CMat::diag(&[c(0.5, 0.0), c(1.0, 0.0)]).unwrap().as_mat()).norm() < 1e-10);

    let l = CMat::diag(&[c(0.2, -0.3), c(0.2, -0.3)]).unwrap();
    let s = singleton_similarity(&l, &CMat::zeros(2)).unwrap();
    assert!(s.delta[0].hypot(s.delta[1]) < 1e-12 && s.contraction_norm < 1e-12);

    let t = CMat::from_rows(&[vec![c(0.3, 0.0), c(1.4, 0.0)], vec![c(0.0, 0.0), c(0.3, 0.0)]]).unwrap();
    let s = singleton_similarity(&t, &CMat::diag(&[c(-0.3, 0.0), c(-0.3, 0.0)]).unwrap()).unwrap();
    assert!(s.delta[0].hypot(s.delta[1]) <= 2.0 + 1e-8);
    assert!(s.contraction_norm <= 1.0 + 1e-10);

    assert!(matches!(
        singleton_similarity(&CMat::diag(&[c(0.1, 0.0), c(0.5, 0.0)]).unwrap(), &CMat::zeros(2)),
        Err(Error::Precondition(_))
    ));
    assert!(matches!(singleton_similarity(&CMat::zeros(3), &CMat::zeros(3)), Err(Error::Size(_))));
}

#[test]
fn similarity_cb_examples() {
    let disk = make_disk(c(0.0, 0.0), 1.001).unwrap();
    let n = nilpotent2(c(2.0, 0.0));
    let inst = HomInstance::new(n.clone(), &disk, 512).unwrap();
    let bad = CMat::diag(&[c(1.0 / 3.0, 0.0), c(1.0, 0.0)]).unwrap();
    let r = similarity_cb_check(&inst, &bad, c(0.0, 0.0), 2, 0).unwrap();
    assert_eq!(r.outcome, Outcome::Vacuous);
    assert_eq!(r.details["reason"], "similarity-bound-exceeded");

    let s = singleton_similarity(&n, &CMat::zeros(2)).unwrap();
    let r = similarity_cb_check(&inst, s.s.as_ref().unwrap(), c(0.0, 0.0), 3, 0).unwrap();
    assert!(r.pass && r.outcome == Outcome::Pass);
    assert!(r.lhs <= 2.0 + 1e-3);

    let t = contraction(2, 6, 0.8);
    let inst = HomInstance::new(t, &disk, 256).unwrap();
    assert!(similarity_cb_check(&inst, &CMat::identity(2), c(0.0, 0.0), 2, 0).unwrap().pass);
    assert!(matches!(
        similarity_cb_check(&inst, &CMat::zeros(2), c(0.0, 0.0), 2, 0),
        Err(Error::Parameter(_))
    ));
}

#[test]
fn equiv_examples() {
    let t = contraction(3, 8, 0.9);
    let r = equiv_checks(&t, None, false, 0).unwrap();
    assert!(r.pass && r.details["unit_range"]["holds"].as_bool().unwrap());
    assert_eq!(r.details["dilation"], "not-checked");

    let pair = cyclic_pair();
    assert!((pair.t.as_mat() - nilpotent2(c(2.0, 0.0)).as_mat()).norm() < 1e-15);
    assert!(pair.max_residual() < 1e-10);
    let r = equiv_checks(&pair.t, Some(&pair), true, 0).unwrap();
    assert!(r.pass, "{}", r.to_json());
    assert!(r.details["dilation"]["residuals_pass"].as_bool().unwrap());
    assert!(r.details["kernel_identity"]["max_defect"].as_f64().unwrap() < 1e-10);

    let longer = DilationPair::new(pair.t.clone(), pair.u.clone(), 2.0, 3).unwrap();
    assert!(longer.residuals[2] > 1.0);

    let r = equiv_checks(&CMat::diag(&[c(1.5, 0.0)]).unwrap(), None, false, 0).unwrap();
    assert!(!r.details["unit_range"]["holds"].as_bool().unwrap());
    assert_eq!(r.details["okubo_ando"], "not-checked");
    assert!(r.details["note"].as_str().unwrap().contains("no unitary 2-dilation"));
}

#[test]
fn matrix_sup_of_constant_block() {
    let p = MatrixPoly {
        size: 2,
        entries: vec![vec![c(1.0, 0.0)], vec![], vec![], vec![c(0.0, 2.0)]],
    };
    assert!((matrix_sup(&p) - 2.0).abs() < 1e-12);
    assert!((op_norm(&p.eval(c(0.3, 0.2))) - 2.0).abs() < 1e-12);
}

#[test]
fn schaffer_at_unit_norm() {
    for seed in 0..10u64 {
        let t = contraction(1 + seed as usize % 5, 40 + seed, 1.0);
        let p = schaffer_dilation(&t, 8).unwrap();
        let chk = verify_rho_dilation(&p).unwrap();
        assert!(chk.unitarity_defect < 1e-12 && chk.max_residual < 1e-12, "seed {seed}");
    }
}
