use std::f64::consts::PI;

use num_complex::Complex64 as C;
use rand::Rng;

use super::*;
use crate::generate::{ginibre, rng_for};
use crate::linalg::{numerical_range, CMat};

fn c(re: f64, im: f64) -> C {
    C::new(re, im)
}

/// Distance from `z` to the real segment `[-1, 1]`.
fn segment_distance(z: C) -> f64 {
    let x = z.re.clamp(-1.0, 1.0);
    (z - c(x, 0.0)).norm()
}

/// Interior sample points: shrunken boundary points toward the center.
fn interior_points(dom: &ConvexDomain<f64>, count: usize, seed: u64) -> Vec<C> {
    let mut rng = rng_for(seed, 0);
    (0..count)
        .map(|_| {
            let t = rng.random_range(0.0..2.0 * PI);
            let s: f64 = rng.random_range(0.0..0.6);
            dom.center + (dom.gamma(t) - dom.center) * s
        })
        .collect()
}

#[test]
fn disk_basics() {
    let d = make_disk(c(0.0, 0.0), 1.0).unwrap();
    assert!((d.gamma(0.0) - c(1.0, 0.0)).norm() < 1e-15);
    assert!(d.contains(c(0.0, 0.0)));
    assert!(!d.contains(c(2.0, 0.0)));
    let d2 = make_disk(c(2.0, 0.0), 0.5).unwrap();
    assert!(d2.contains(c(2.0, 0.0)));
    assert!(!d2.contains(c(0.0, 0.0)));
    assert!(make_disk(c(0.0, 0.0), 0.0).is_err());
    assert!(make_disk(c(0.0, 0.0), -1.0).is_err());
}

#[test]
fn disk_quadrature_identities() {
    let d = make_disk(c(0.3, -0.2), 0.7).unwrap();
    let g = quadrature(&d, 256).unwrap();
    assert!(g.cauchy_identity_error(d.center) < 1e-12);
    let unit = make_disk(c(0.0, 0.0), 1.0).unwrap();
    let g = quadrature(&unit, 64).unwrap();
    assert!(g.integrate(|z| z).norm() < 1e-13);
    assert!(g.cauchy_identity_error(c(0.0, 0.0)) < 1e-13);
    assert!(quadrature(&unit, 30).is_err());
    assert!(quadrature(&unit, 33).is_err());
}

#[test]
fn ellipse_geometry() {
    let e = make_ellipse(c(0.0, 0.0), 2.0, 1.0, 0.0).unwrap();
    for x in [1.9, -1.9] {
        assert!(e.contains(c(x, 0.0)));
    }
    for x in [2.1, -2.1] {
        assert!(!e.contains(c(x, 0.0)));
    }
    // implicit equation x²/4 + y² ≤ 1
    assert!(e.contains(c(1.0, 0.49)));
    assert!(!e.contains(c(1.0, 0.9)));
    assert!((quadrature(&e, 4096).unwrap().enclosed_area() - 2.0 * PI).abs() < 1e-6);
    assert!((e.polygon_area(4096) - 2.0 * PI).abs() < 1e-5);
    let g = quadrature(&e, 512).unwrap();
    assert!(g.cauchy_identity_error(c(0.5, 0.0)) < 1e-10);
    let circle = make_ellipse(c(0.0, 0.0), 1.0, 1.0, 0.0).unwrap();
    for t in [0.0, 1.0, 2.5] {
        assert!((circle.gamma(t) - C::from_polar(1.0, t)).norm() < 1e-15);
    }
    assert!(make_ellipse(c(0.0, 0.0), 1.0, 2.0, 0.0).is_err());
    assert!(make_ellipse(c(0.0, 0.0), 1.0, 0.0, 0.0).is_err());
}

#[test]
fn ellipse_implicit_oracle_on_grid() {
    let e = make_ellipse(c(0.0, 0.0), 2.0, 1.0, 0.0).unwrap();
    for i in -25..=25 {
        for j in -13..=13 {
            let z = c(i as f64 * 0.09, j as f64 * 0.09);
            let q = z.re * z.re / 4.0 + z.im * z.im;
            if (q - 1.0).abs() > 1e-3 {
                assert_eq!(e.contains(z), q < 1.0, "{z}");
            }
        }
    }
}

#[test]
fn boundary_points_are_reported() {
    let e = make_ellipse(c(0.5, 0.5), 1.5, 1.0, 0.4).unwrap();
    for t in [0.0, 0.7, 3.3] {
        assert_eq!(e.locate(e.gamma(t)), Containment::OnBoundary);
    }
    let d = make_disk(c(0.0, 0.0), 1.0).unwrap();
    assert_eq!(d.locate(c(1.0, 0.0)), Containment::OnBoundary);
    assert_eq!(d.locate(c(1.0 + 1e-6, 0.0)), Containment::Outside);
    assert_eq!(d.locate(c(1.0 - 1e-6, 0.0)), Containment::Inside);
}

#[test]
fn degenerate_range_gives_disk() {
    let t = CMat::<f64>::zeros(1);
    let d = domain_from_range(&t, 0.3, 64).unwrap();
    match d.kind {
        DomainKind::Disk { radius } => assert_eq!(radius, 0.3),
        _ => panic!("expected a disk"),
    }
    assert_eq!(d.center, c(0.0, 0.0));
    assert!(domain_from_range(&t, 0.0, 64).is_err());
}

#[test]
fn stadium_around_segment() {
    let t = CMat::<f64>::from_real(2, &[1.0, 0.0, 0.0, -1.0]).unwrap();
    let d = domain_from_range(&t, 0.1, 256).unwrap();
    assert_eq!(d.kind_name(), "range");
    assert!(d.contains(c(0.0, 0.0)));
    assert!(d.contains(c(1.04, 0.0)));
    assert!(!d.contains(c(1.2, 0.0)));
    d.check_invariants().unwrap();
    // Minkowski geometry: within margin/2 of the segment is inside, beyond the margin is outside
    for z in d.polyline(2048) {
        let dist = segment_distance(z);
        assert!(dist >= 0.05 && dist <= 0.1, "boundary distance {dist}");
    }
    let mut rng = rng_for(7, 1);
    for _ in 0..400 {
        let z = c(rng.random_range(-1.3..1.3), rng.random_range(-0.3..0.3));
        let dist = segment_distance(z);
        if dist < 0.05 {
            assert!(d.contains(z));
        } else if dist > 0.1 {
            assert!(!d.contains(z));
        }
    }
}

#[test]
fn nilpotent_range_domain_is_a_thin_annulus_over_the_unit_disk() {
    let t = CMat::<f64>::from_real(2, &[0.0, 2.0, 0.0, 0.0]).unwrap();
    for eps in [0.2, 0.05] {
        let d = domain_from_range(&t, eps, 128).unwrap();
        for k in 0..200 {
            let z = C::from_polar(1.0, 2.0 * PI * k as f64 / 200.0);
            assert!(d.contains(z));
        }
        for z in d.polyline(1000) {
            assert!(z.norm() <= 1.0 + eps + 1e-9);
        }
    }
}

#[test]
fn range_domain_contains_support_points() {
    for seed in 0..3 {
        let t = ginibre::<f64, _>(5, &mut rng_for(seed, 0)).unwrap();
        let d = domain_from_range(&t, 0.1, 128).unwrap();
        let w = numerical_range(&t, 256).unwrap();
        for p in &w.support_points {
            assert!(d.contains(*p));
        }
        for z in d.polyline(512) {
            assert!(w.distance_outside(z) >= 0.05 - 1e-9);
        }
    }
}

#[test]
fn cauchy_identity_at_interior_points() {
    let stadium = CMat::<f64>::from_real(2, &[1.0, 0.0, 0.0, -1.0]).unwrap();
    let gin = ginibre::<f64, _>(4, &mut rng_for(3, 0)).unwrap();
    // corners of W force curvature on the scale of the margin, so the stadium needs more nodes
    let domains = vec![
        (make_disk(c(0.1, 0.2), 1.3).unwrap(), 512),
        (make_ellipse(c(0.0, 0.0), 2.0, 1.0, 0.3).unwrap(), 512),
        (domain_from_range(&gin, 0.1, 256).unwrap(), 512),
        (domain_from_range(&stadium, 0.1, 256).unwrap(), 1024),
    ];
    for (d, n) in &domains {
        let g = quadrature(d, *n).unwrap();
        let worst = interior_points(d, 20, 11)
            .into_iter()
            .map(|z| g.cauchy_identity_error(z))
            .fold(0.0, f64::max);
        assert!(worst < 1e-8, "{} worst {worst:e}", d.kind_name());
    }
}

#[test]
fn trapezoid_error_decays_spectrally() {
    let e = make_ellipse(c(0.0, 0.0), 1.5, 1.0, 0.0).unwrap();
    let z = c(0.6, 0.3);
    let mut prev = quadrature(&e, 32).unwrap().cauchy_identity_error(z);
    for n in [64, 128, 256] {
        let err = quadrature(&e, n).unwrap().cauchy_identity_error(z);
        assert!(err <= prev * prev + 1e-13, "n={n}: {err:e} vs {prev:e}");
        prev = err;
    }
}

#[test]
fn domain_spec_round_trip() {
    let s = DomainSpec::parse(r#"{"kind":"ellipse","params":{"center":[0,0],"a":2,"b":1}}"#).unwrap();
    assert_eq!(
        s,
        DomainSpec::Ellipse {
            center: [0.0, 0.0],
            a: 2.0,
            b: 1.0,
            rot: 0.0
        }
    );
    let back = DomainSpec::parse(&serde_json::to_string(&s).unwrap()).unwrap();
    assert_eq!(back, s);
    let d: ConvexDomain<f64> = s.build(None).unwrap();
    assert!(d.contains(c(1.9, 0.0)));
    let r = DomainSpec::parse(r#"{"kind":"range","params":{"margin":0.1}}"#).unwrap();
    assert!(r.build::<f64>(None).is_err());
    assert!(DomainSpec::parse(r#"{"kind":"square","params":{}}"#).is_err());
}

#[test]
fn single_precision_disk() {
    let d = make_disk(num_complex::Complex32::new(0.0, 0.0), 1.0f32).unwrap();
    let g = quadrature(&d, 64).unwrap();
    assert!(g.cauchy_identity_error(num_complex::Complex32::new(0.2, 0.1)) < 1e-5);
}
