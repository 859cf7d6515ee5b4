use num_complex::Complex64 as C;
use rand::Rng;

use super::*;
use crate::generate::{ginibre, nilpotent2, normal, random_coeffs, rng_for};
use crate::geom::{domain_from_range, make_disk, make_ellipse, quadrature};
use crate::linalg::{numerical_range, op_norm, spectral_norm, CMat};

fn c(re: f64, im: f64) -> C {
    C::new(re, im)
}

fn origin() -> C {
    c(0.0, 0.0)
}

fn diff(a: &CMat<f64>, b: &CMat<f64>) -> f64 {
    op_norm(&(a.as_mat() - b.as_mat()))
}

fn disk_instance(t: CMat<f64>, r: f64) -> HomInstance<f64> {
    HomInstance::new(t, &make_disk(origin(), r).unwrap(), 512).unwrap()
}

fn scaled_ginibre(n: usize, target: f64, seed: u64) -> CMat<f64> {
    let g = ginibre::<f64, _>(n, &mut rng_for(seed, 0)).unwrap();
    let w = crate::linalg::numerical_radius(&g, 256);
    g.scaled(c(target / w, 0.0))
}

#[test]
fn fun_calc_of_one_is_identity() {
    let inst = disk_instance(scaled_ginibre(3, 0.6, 1), 1.0);
    let one = AnalyticFn::constant(c(1.0, 0.0));
    assert!(diff(&fun_calc(&one, &inst), &CMat::identity(3)) < 1e-10);
}

#[test]
fn fun_calc_of_identity_on_diagonal() {
    let t = CMat::diag(&[c(0.1, 0.0), c(0.2, 0.0)]).unwrap();
    let inst = disk_instance(t.clone(), 1.0);
    assert!(diff(&fun_calc(&AnalyticFn::identity(), &inst), &t) < 1e-12);
}

#[test]
fn fun_calc_matches_horner() {
    for seed in 0..3 {
        let t = scaled_ginibre(4, 1.0, seed);
        let domain = domain_from_range(&t, 0.5, 256).unwrap();
        let inst = HomInstance::new(t.clone(), &domain, 512).unwrap();
        let sq = AnalyticFn::monomial(2);
        let horner = sq.eval_matrix(&t).unwrap();
        assert!(diff(&fun_calc(&sq, &inst), &horner) < 1e-8, "seed {seed}");
        let p = AnalyticFn::poly(random_coeffs(5, &mut rng_for(seed, 9)));
        assert!(diff(&fun_calc(&p, &inst), &p.eval_matrix(&t).unwrap()) < 1e-8);
    }
}

#[test]
fn near_singular_resolvent_is_reported() {
    let grid = quadrature(&make_disk(origin(), 1.0).unwrap(), 64).unwrap();
    let t = CMat::diag(&[grid.nodes[3], c(0.0, 0.0)]).unwrap();
    assert!(matches!(
        ResolventMeasure::new(&t, &grid),
        Err(crate::error::Error::Numerical { .. })
    ));
}

#[test]
fn cauchy_transform_examples() {
    let grid = quadrature(&make_disk(origin(), 1.3).unwrap(), 512).unwrap();
    let k = c(0.4, -1.1);
    let z_in = [c(0.0, 0.0), c(0.5, 0.2), c(-0.9, 0.6), c(1.1, 0.0)];
    for v in cauchy_transform_points(&AnalyticFn::constant(k), &grid, &z_in) {
        assert!((v.value - k.conj()).norm() < 1e-12);
    }
    for v in cauchy_transform_points(&AnalyticFn::identity(), &grid, &z_in) {
        assert!(v.value.norm() < 1e-12);
    }
    assert!(cauchy_transform(&AnalyticFn::identity(), &grid, c(1.299, 0.0)).low_accuracy);
    assert!(!cauchy_transform(&AnalyticFn::identity(), &grid, c(0.5, 0.0)).low_accuracy);
}

#[test]
fn cauchy_transform_contracts() {
    let mut rng = rng_for(11, 0);
    for domain in [
        make_disk(origin(), 1.0).unwrap(),
        make_ellipse(c(0.1, 0.0), 1.4, 0.8, 0.3).unwrap(),
    ] {
        let grid = quadrature(&domain, 512).unwrap();
        let fine = quadrature(&domain, 4096).unwrap();
        for _ in 0..50 {
            let d = rng.random_range(0..=6);
            let h = AnalyticFn::poly(random_coeffs(d, &mut rng));
            let sup = fine.nodes.iter().fold(0.0f64, |m, z| m.max(h.eval(*z).norm()));
            let (g, _) = cauchy_transform_samples(&h, &grid, domain.center, 0.9).unwrap();
            let inner = match &g.repr {
                FnRepr::Samples { values, .. } => values.iter().fold(0.0f64, |m, v| m.max(v.norm())),
                _ => unreachable!(),
            };
            assert!(inner <= sup + 1e-6, "{inner} > {sup}");
        }
    }
}

#[test]
fn density_of_scalar_resolvent() {
    let inst = disk_instance(CMat::zeros(1), 1.0);
    for v in resolvent_density_real_part(&inst) {
        assert!((v - 1.0 / std::f64::consts::TAU).abs() < 1e-12);
    }
    let inst = disk_instance(CMat::diag(&[c(0.5, 0.0), c(-0.5, 0.0)]).unwrap(), 1.0);
    let min = resolvent_density_real_part(&inst).into_iter().fold(f64::INFINITY, f64::min);
    assert!(min >= -1e-8);
}

#[test]
fn density_turns_negative_outside_hypothesis() {
    let t = nilpotent2(c(3.0, 0.0));
    let grid = quadrature(&make_disk(origin(), 1.1).unwrap(), 512).unwrap();
    let m = ResolventMeasure::new(&t, &grid).unwrap();
    let min = m.density_real_part().into_iter().fold(f64::INFINITY, f64::min);
    assert!(min < -1e-3, "{min}");
    assert!(HomInstance::new(t, &make_disk(origin(), 1.1).unwrap(), 512).is_err());
}

#[test]
fn theta_identity_map_case() {
    let r = 1.0 + 1e-3;
    let t = nilpotent2(c(2.0, 0.0));
    let inst = disk_instance(t.clone(), r);
    assert!(diff(&theta(&AnalyticFn::constant(c(1.0, 0.0)), &inst), &CMat::identity(2)) < 1e-10);
    let tz = theta(&AnalyticFn::identity(), &inst);
    assert!(diff(&tz, &t.scaled(c(1.0 / r, 0.0))) < 1e-10);
    assert!(diff(&tz, &t) < 3e-3);
}

#[test]
fn theta_is_multiplicative() {
    let e = make_ellipse(origin(), 1.5, 1.0, 0.4).unwrap();
    let t = scaled_ginibre(3, 0.8, 4);
    let inst = HomInstance::new(t, &e, 512).unwrap();
    let z = theta(&AnalyticFn::identity(), &inst);
    let z2 = theta(&AnalyticFn::monomial(2), &inst);
    assert!(op_norm(&(z2.as_mat() - z.as_mat() * z.as_mat())) < 1e-6);
    let mut rng = rng_for(4, 1);
    for _ in 0..10 {
        let f = AnalyticFn::poly(random_coeffs(rng.random_range(1..6), &mut rng));
        let g = AnalyticFn::poly(random_coeffs(rng.random_range(1..6), &mut rng));
        let fg = theta(&f.poly_mul(&g).unwrap(), &inst);
        let prod = theta(&f, &inst).as_mat() * theta(&g, &inst).as_mat();
        assert!(op_norm(&(fg.as_mat() - prod)) < 1e-6);
    }
}

#[test]
fn theta_alpha_examples() {
    let one = AnalyticFn::constant(c(1.0, 0.0));
    let t = nilpotent2(c(2.0, 0.0));
    let inst = disk_instance(t.clone(), 1.0 + 1e-3);
    for alpha in [AlphaRep::Cauchy, AlphaRep::evaluation_at_origin()] {
        assert!(diff(&theta_alpha(&one, &inst, &alpha).unwrap(), &CMat::identity(2)) < 1e-10);
        assert!(alpha.unital_defect() < 1e-12);
    }
    let half = theta_alpha(&AnalyticFn::identity(), &inst, &AlphaRep::evaluation_at_origin()).unwrap();
    assert!((spectral_norm(&half) - 1.0).abs() < 2e-3);
    assert!(diff(&half, &theta(&AnalyticFn::identity(), &inst).scaled(c(0.5, 0.0))) < 1e-12);

    let inst = disk_instance(scaled_ginibre(3, 0.7, 2), 1.0);
    let z = AnalyticFn::identity();
    let ta = theta_alpha(&z, &inst, &AlphaRep::Cauchy).unwrap();
    assert!(diff(&ta, &theta(&z, &inst).scaled(c(0.5, 0.0))) < 1e-10);
    assert!(theta_alpha(&z, &inst, &AlphaRep::ConjFinite).is_err());
}

#[test]
fn theta_alpha_is_real_linear() {
    let e = make_ellipse(c(0.2, 0.1), 1.3, 0.9, -0.5).unwrap();
    let inst = HomInstance::new(scaled_ginibre(3, 0.6, 8), &e, 512).unwrap();
    let mut rng = rng_for(8, 2);
    let f = AnalyticFn::poly(random_coeffs(4, &mut rng));
    let g = AnalyticFn::poly(random_coeffs(4, &mut rng));
    let (a, b) = (1.7, -0.4);
    let sum = match (&f.repr, &g.repr) {
        (FnRepr::Poly { coeffs: x, .. }, FnRepr::Poly { coeffs: y, .. }) => {
            AnalyticFn::poly(x.iter().zip(y).map(|(p, q)| p * a + q * b).collect())
        }
        _ => unreachable!(),
    };
    let l = ScalarFunctional::evaluation(c(0.3, -0.2)).unwrap();
    for alpha in [AlphaRep::Cauchy, AlphaRep::Scalar(l)] {
        let lhs = theta_alpha(&sum, &inst, &alpha).unwrap();
        let rhs = theta_alpha(&f, &inst, &alpha).unwrap().as_mat().scale(a)
            + theta_alpha(&g, &inst, &alpha).unwrap().as_mat().scale(b);
        assert!(op_norm(&(lhs.as_mat() - rhs)) < 1e-10);
    }
}

#[test]
fn cauchy_alpha_respects_the_two_bound() {
    let mut rng = rng_for(21, 0);
    for seed in 0..4 {
        let t = scaled_ginibre(4, 1.0, 30 + seed);
        let inst = HomInstance::new(t, &domain_from_range(&scaled_ginibre(4, 1.0, 30 + seed), 0.3, 256).unwrap(), 512).unwrap();
        for _ in 0..5 {
            let f = AnalyticFn::poly(random_coeffs(rng.random_range(1..8), &mut rng));
            let sup = f.circle_sup_refined();
            let s = theta(&f, &inst).as_mat() + theta_of_alpha(&f, &inst, &AlphaRep::Cauchy).unwrap().as_mat().adjoint();
            assert!(op_norm(&s) <= 2.0 * sup + 1e-6);
        }
    }
}

#[test]
fn estimate_for_normal_matrix_is_contractive() {
    let spec = [c(0.3, 0.1), c(-0.5, 0.2), c(0.1, -0.6)];
    let t = normal::<f64, _>(&spec, Some(&mut rng_for(3, 0))).unwrap();
    let inst = disk_instance(t, 1.0);
    let est = estimate_theta_norm(&inst, &AlphaRep::Cauchy, 6, 5).unwrap();
    assert!(est.theta_norm <= 1.0 + 1e-4, "{}", est.theta_norm);
    assert!(est.theta_alpha_norm <= 1.0 + 1e-4);
    assert!(est.theta_norm > 0.5);
}

#[test]
fn estimate_finds_nilpotent_norm() {
    let inst = disk_instance(nilpotent2(c(2.0, 0.0)), 1.0 + 1e-3);
    let est = estimate_theta_norm(&inst, &AlphaRep::Cauchy, 3, 0).unwrap();
    assert!(est.theta_norm >= 2.0 - 1e-2, "{}", est.theta_norm);
    let w = est.theta_witness.to_fn::<f64>().unwrap();
    let probe = [c(0.5, 0.0), c(0.0, -0.3), c(-0.2, 0.2)];
    let phase = w.eval(probe[0]) / probe[0];
    for z in probe {
        assert!((w.eval(z) - phase * z).norm() < 0.05);
    }
}

#[test]
fn estimate_for_scalar_is_one() {
    let inst = disk_instance(CMat::diag(&[c(0.5, 0.0)]).unwrap(), 1.0);
    let est = estimate_theta_norm(&inst, &AlphaRep::Cauchy, 9, 2).unwrap();
    assert!((est.theta_norm - 1.0).abs() < 1e-9);
}

#[test]
fn estimate_is_monotone_in_budget() {
    let inst = disk_instance(scaled_ginibre(3, 0.8, 6), 1.0);
    let mut prev = (0.0, 0.0);
    for budget in 1..=6 {
        let e = estimate_theta_norm(&inst, &AlphaRep::evaluation_at_origin(), budget, 17).unwrap();
        assert!(e.theta_norm >= prev.0 && e.theta_alpha_norm >= prev.1);
        prev = (e.theta_norm, e.theta_alpha_norm);
    }
    assert!(estimate_theta_norm(&inst, &AlphaRep::Cauchy, 0, 1).is_err());
}

#[test]
fn witness_round_trip() {
    let inst = disk_instance(scaled_ginibre(3, 0.8, 7), 1.0);
    let e = estimate_theta_norm(&inst, &AlphaRep::Cauchy, 3, 3).unwrap();
    let text = serde_json::to_string(&e).unwrap();
    let back: ThetaEstimate = serde_json::from_str(&text).unwrap();
    assert_eq!(back.theta_witness, e.theta_witness);
    let f = back.theta_witness.to_fn::<f64>().unwrap();
    let norm = spectral_norm(&theta(&f, &inst)) / witness_sup(&f);
    assert!((norm - e.theta_norm).abs() < 1e-9);
}

#[test]
fn numerical_range_of_theta_alpha_stays_in_hull() {
    let mut rng = rng_for(40, 0);
    for seed in 0..6 {
        let t = scaled_ginibre(3, 0.7, 50 + seed);
        let inst = disk_instance(t, 1.0);
        let f = AnalyticFn::<f64>::poly(random_coeffs(rng.random_range(1..5), &mut rng));
        let sup = f.circle_sup_refined();
        let f = AnalyticFn::poly(match &f.repr {
            FnRepr::Poly { coeffs, .. } => coeffs.iter().map(|x| x / sup).collect(),
            _ => unreachable!(),
        });
        let ta = theta_alpha(&f, &inst, &AlphaRep::evaluation_at_origin()).unwrap();
        let samples: Vec<C> = (0..2048)
            .map(|k| f.eval(crate::scalar::cis(std::f64::consts::TAU * k as f64 / 2048.0)))
            .collect();
        let hull = crate::linalg::hull::ConvexHull::new(&samples);
        for p in numerical_range(&ta, 64).unwrap().support_points {
            assert!(hull.distance(p) < 1e-6, "seed {seed}");
        }
    }
}

#[test]
fn instance_rejects_range_outside_domain() {
    let t = nilpotent2(c(2.0, 0.0));
    assert!(matches!(
        HomInstance::new(t, &make_disk(origin(), 0.9).unwrap(), 512),
        Err(crate::error::Error::Precondition(_))
    ));
}
