use crouzeix_core::calculus::{estimate_theta_norm, theta, theta_alpha, AlphaRep, AnalyticFn, HomInstance};
use crouzeix_core::dilation::{cb_norm_estimate, schaffer_dilation, verify_rho_dilation};
use crouzeix_core::generate::{ginibre, jordan, nilpotent2, point_in_disk, random_coeffs, rng_for};
use crouzeix_core::geom::{domain_from_range, make_disk};
use crouzeix_core::inequalities::{cp_check, random_disk_polys, random_domain_polys};
use crouzeix_core::linalg::{numerical_range, op_norm, spectral_norm, support_value};
use crouzeix_core::report::{digest, ExperimentReport};
use crouzeix_core::{Matrix, C64};
use proptest::prelude::*;

fn operator(kind: u8, n: usize, seed: u64) -> Matrix {
    let mut rng = rng_for(seed, 7);
    match kind % 3 {
        0 => ginibre(n, &mut rng).unwrap(),
        1 => jordan(n, point_in_disk(&mut rng, 0.7)).unwrap(),
        _ => nilpotent2(point_in_disk(&mut rng, 2.5)),
    }
}

fn range_instance(kind: u8, n: usize, seed: u64, nodes: usize) -> HomInstance<f64> {
    let t = operator(kind, n, seed);
    let d = domain_from_range(&t, 0.1, 256).unwrap();
    HomInstance::new(t, &d, nodes).unwrap()
}

fn disk_poly(seed: u64, degree: usize) -> AnalyticFn<f64> {
    let c: Vec<C64> = random_coeffs(degree, &mut rng_for(seed, 11));
    let sup = AnalyticFn::poly(c.clone()).circle_sup_refined();
    AnalyticFn::poly(c.into_iter().map(|c| c / sup).collect())
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 16, ..ProptestConfig::default() })]

    #[test]
    fn cauchy_transform_bound(kind in 0u8..3, n in 2usize..5, seed in any::<u64>()) {
        let t = operator(kind, n, seed);
        let d = domain_from_range(&t, 0.1, 256).unwrap();
        let polys = random_domain_polys(&d, 5, 8, &mut rng_for(seed, 3));
        let r = cp_check(&t, &d, 512, &polys, seed).unwrap();
        prop_assert!(r.pass, "margin {}", r.margin);
        prop_assert!(r.details["min_density"].as_f64().unwrap() >= -1e-8);
    }

    #[test]
    fn theta_alpha_range_in_hull(kind in 0u8..3, n in 2usize..5, seed in any::<u64>(), degree in 0usize..8) {
        let inst = range_instance(kind, n, seed, 256);
        let f = disk_poly(seed, degree);
        let ta = theta_alpha(&f, &inst, &AlphaRep::Cauchy).unwrap();
        // only meaningful where the map is contractive
        prop_assume!(op_norm(ta.as_mat()) <= 1.0 + 1e-9);
        let vals = inst.pullback_values(&f);
        for k in 0..16 {
            let phi = std::f64::consts::TAU * k as f64 / 16.0;
            let rot = C64::from_polar(1.0, -phi);
            let hull = vals.iter().map(|v| (rot * v).re).fold(f64::NEG_INFINITY, f64::max);
            prop_assert!(support_value(&ta, phi) <= hull + 1e-8 + inst.tolerance());
        }
    }

    #[test]
    fn theta_is_multiplicative(kind in 0u8..3, n in 2usize..5, seed in any::<u64>(), a in 0usize..6, b in 0usize..6) {
        let inst = range_instance(kind, n, seed, 512);
        let f = disk_poly(seed, a);
        let g = disk_poly(seed ^ 0x55, b);
        let lhs = theta(&f.poly_mul(&g).unwrap(), &inst);
        let rhs = theta(&f, &inst).as_mat() * theta(&g, &inst).as_mat();
        let scale = 1.0 + op_norm(&rhs);
        prop_assert!(op_norm(&(lhs.as_mat() - rhs)) <= 1e-7 * scale);
    }

    #[test]
    fn estimator_monotone_in_budget(kind in 0u8..3, seed in any::<u64>(), small in 1usize..4, extra in 1usize..4) {
        let inst = range_instance(kind, 2, seed, 256);
        let a = estimate_theta_norm(&inst, &AlphaRep::Cauchy, small, seed).unwrap();
        let b = estimate_theta_norm(&inst, &AlphaRep::Cauchy, small + extra, seed).unwrap();
        prop_assert!(b.theta_norm >= a.theta_norm);
        prop_assert!(b.theta_alpha_norm >= a.theta_alpha_norm);
    }

    #[test]
    fn schaffer_invariants(n in 1usize..5, m in 1usize..9, seed in any::<u64>(), s in 0.05f64..1.0) {
        let g = ginibre(n, &mut rng_for(seed, 0)).unwrap();
        let t = g.scaled(C64::new(s / spectral_norm(&g), 0.0));
        let pair = schaffer_dilation(&t, m).unwrap();
        prop_assert_eq!(pair.u.dim(), n * (2 * m + 1));
        let chk = verify_rho_dilation(&pair).unwrap();
        prop_assert!(chk.unitarity_defect < 1e-10 && chk.max_residual < 1e-10);
        // von Neumann consequence for polynomials of degree ≤ M
        for p in random_disk_polys(5, m, &mut rng_for(seed, 1)) {
            let pt = p.eval_matrix(&t).unwrap();
            let sup = p.circle_sup_refined();
            prop_assert!(spectral_norm(&pt) <= sup + 1e-6, "{} > {}", spectral_norm(&pt), sup);
        }
    }

    #[test]
    fn cb_levels_nondecreasing(seed in any::<u64>()) {
        let t = operator(2, 2, seed);
        let r = 1.001 * numerical_range(&t, 64).unwrap().radius.max(1.0);
        let inst = HomInstance::new(t, &make_disk(C64::new(0.0, 0.0), r).unwrap(), 256).unwrap();
        let est = cb_norm_estimate(&inst, &AlphaRep::Cauchy, 3, 2, seed).unwrap();
        prop_assert!(est.levels.windows(2).all(|w| w[0] <= w[1]));
        prop_assert!(est.alpha_levels.windows(2).all(|w| w[0] <= w[1]));
    }

    #[test]
    fn report_round_trip(seed in any::<u64>(), lhs in -10.0f64..10.0, rhs in -10.0f64..10.0, tol in 0.0f64..1.0) {
        let inputs = serde_json::json!({"seed": seed, "x": lhs});
        let r = ExperimentReport::checked("prop", seed, inputs.clone(), "lhs ≤ rhs", lhs, rhs, tol);
        prop_assert_eq!(&r.inputs_digest, &digest(&inputs));
        prop_assert_eq!(r.pass, rhs - lhs >= -tol);
        let text = r.to_json();
        let back = ExperimentReport::from_json(&text).unwrap();
        prop_assert_eq!(back.to_json(), text);
    }
}
