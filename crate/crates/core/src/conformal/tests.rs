use num_complex::Complex64 as C;
use rand::Rng;

use super::*;
use crate::generate::{ginibre, rng_for};
use crate::geom::{domain_from_range, make_disk, make_ellipse};
use crate::linalg::{inverse, op_norm, CMat};

fn c(re: f64, im: f64) -> C {
    C::new(re, im)
}

fn interior_sample(map: &ConformalMap<f64>, count: usize, shrink: f64, seed: u64) -> Vec<C> {
    let mut rng = rng_for(seed, 5);
    (0..count)
        .map(|_| {
            let t = rng.random_range(0.0..std::f64::consts::TAU);
            let s: f64 = rng.random_range(0.0..shrink);
            map.z0 + (map.domain.gamma(t) - map.z0) * s
        })
        .collect()
}

#[test]
fn disk_map_is_affine() {
    let d = make_disk(c(0.3, -0.2), 0.7).unwrap();
    for method in [MapMethod::Theodorsen, MapMethod::Szego, MapMethod::Auto] {
        let map = riemann_map_with(&d, Some(d.center), 256, method).unwrap();
        for z in interior_sample(&map, 50, 0.95, 1) {
            let expected = (z - d.center) / 0.7;
            assert!((map.forward(z) - expected).norm() < 1e-8, "{method:?}");
            assert!((map.inverse(expected) - z).norm() < 1e-8);
        }
    }
}

#[test]
fn near_circular_ellipse_round_trip() {
    let e = make_ellipse(c(0.0, 0.0), 1.2, 1.0, 0.0).unwrap();
    let map = riemann_map(&e, Some(c(0.0, 0.0)), 256).unwrap();
    let s = map.boundary_angles();
    for k in 0..s.len() {
        let next = if k + 1 < s.len() { s[k + 1] } else { s[0] + std::f64::consts::TAU };
        assert!(next > s[k]);
    }
    for z in interior_sample(&map, 100, 0.9, 2) {
        let w = map.forward(z);
        assert!(w.norm() < 1.0);
        assert!((map.inverse(w) - z).norm() < 1e-6);
    }
}

#[test]
fn theodorsen_and_szego_agree() {
    let e = make_ellipse(c(0.1, 0.0), 1.5, 1.0, 0.3).unwrap();
    let a = riemann_map_with(&e, Some(c(0.1, 0.1)), 256, MapMethod::Theodorsen).unwrap();
    let b = riemann_map_with(&e, Some(c(0.1, 0.1)), 256, MapMethod::Szego).unwrap();
    assert_eq!(a.method, MapMethod::Theodorsen);
    assert_eq!(b.method, MapMethod::Szego);
    for (x, y) in a.boundary_angles().iter().zip(b.boundary_angles()) {
        assert!((x - y).abs() < 1e-9, "{x} {y} {:e}", x - y);
    }
}

#[test]
fn normalization() {
    let e = make_ellipse(c(0.0, 0.5), 2.0, 1.0, 0.7).unwrap();
    let map = riemann_map(&e, None, 256).unwrap();
    assert_eq!(map.forward(map.z0), c(0.0, 0.0));
    let h = 1e-5;
    let d = (map.forward(map.z0 + h) - map.forward(map.z0 - h)) / (2.0 * h);
    assert!(d.re > 0.0 && d.im.abs() < 1e-8 * d.re);
    let d0 = map.derivative_at_center();
    assert!((d0 - d).norm() < 1e-6);
}

#[test]
fn boundary_modulus_and_mobius_twist() {
    let t = ginibre::<f64, _>(4, &mut rng_for(9, 0)).unwrap();
    let d = domain_from_range(&t, 0.2, 128).unwrap();
    let map = riemann_map(&d, None, 256).unwrap();
    let twist = mobius(c(0.3, -0.2)).unwrap();
    for k in 0..64 {
        let t = std::f64::consts::TAU * (k as f64 + 0.5) / 64.0;
        let b = map.boundary_value(t);
        assert!((b.norm() - 1.0).abs() < 1e-12);
        assert!((twist.eval(b).norm() - 1.0).abs() < 1e-6);
        // interior values approach the boundary value
        let z = map.z0 + (d.gamma(t) - map.z0) * 0.999;
        assert!(map.forward(z).norm() < 1.0);
    }
    for z in interior_sample(&map, 100, 0.9, 3) {
        assert!((map.inverse(map.forward(z)) - z).norm() < 1e-6);
    }
}

#[test]
fn map_parameter_errors() {
    let d = make_disk(c(0.0, 0.0), 1.0).unwrap();
    assert!(riemann_map(&d, None, 100).is_err());
    assert!(riemann_map(&d, None, 64).is_err());
    assert!(matches!(
        riemann_map(&d, Some(c(2.0, 0.0)), 128),
        Err(Error::Precondition(_))
    ));
}

#[test]
fn dump_round_trip_is_bit_identical() {
    let e = make_ellipse(c(0.0, 0.0), 1.3, 1.0, 0.2).unwrap();
    let map = riemann_map(&e, None, 128).unwrap();
    let back = ConformalMap::from_json(&map.to_json()).unwrap();
    for z in [c(0.1, 0.2), c(-0.5, 0.3), c(0.9, -0.1)] {
        assert_eq!(map.forward(z), back.forward(z));
    }
    assert_eq!(map.inverse(c(0.3, 0.4)), back.inverse(c(0.3, 0.4)));
    assert!(ConformalMap::from_json("{\"n\": 3}").is_err());
}

#[test]
fn mobius_examples() {
    let id = mobius(c(0.0, 0.0)).unwrap();
    assert_eq!(id.eval(c(0.3, 0.1)), c(0.3, 0.1));
    let w = c(0.2, -0.4);
    let f = mobius(w).unwrap();
    assert!(f.eval(w).norm() < 1e-15);
    assert!((f.eval(c(0.0, 0.0)) + w).norm() < 1e-15);
    let g = mobius(c(0.3, 0.0)).unwrap();
    for k in 0..64 {
        let u = C::from_polar(1.0, std::f64::consts::TAU * k as f64 / 64.0);
        assert!((g.eval(u).norm() - 1.0).abs() < 1e-12);
    }
    assert!(mobius(c(1.0, 0.0)).is_err());
}

#[test]
fn matrix_mobius_examples() {
    let t = CMat::<f64>::from_real(2, &[0.0, 2.0, 0.0, 0.0]).unwrap();
    assert!((matrix_mobius(c(0.0, 0.0), &t).unwrap().as_mat() - t.as_mat()).norm() < 1e-15);
    let z = CMat::<f64>::zeros(3);
    let w = c(0.2, 0.1);
    let m = matrix_mobius(w, &z).unwrap();
    assert!((m.as_mat() - CMat::<f64>::identity(3).as_mat() * (-w)).norm() < 1e-15);

    // explicit 2×2 inverse of I − 0.1 T = [[1, −0.2], [0, 1]]
    let m = matrix_mobius(c(0.1, 0.0), &t).unwrap();
    let num = CMat::<f64>::from_real(2, &[-0.1, 2.0, 0.0, -0.1]).unwrap();
    let inv = CMat::<f64>::from_real(2, &[1.0, 0.2, 0.0, 1.0]).unwrap();
    let expected = num.as_mat() * inv.as_mat();
    assert!((m.as_mat() - expected).norm() < 1e-14);

    // first-order expansion T − wI + conj(w) T²
    let t3 = ginibre::<f64, _>(3, &mut rng_for(4, 0)).unwrap();
    let mut prev = f64::INFINITY;
    for r in [1e-2, 1e-3] {
        let w = c(r, 0.5 * r);
        let exact = matrix_mobius(w, &t3).unwrap();
        let id = CMat::<f64>::identity(3);
        let approx = t3.as_mat() - id.as_mat() * w + t3.as_mat() * t3.as_mat() * w.conj();
        let err = (exact.as_mat() - approx).norm();
        assert!(err < 20.0 * w.norm_sqr() * (1.0 + op_norm(t3.as_mat())).powi(3));
        assert!(err < prev);
        prev = err;
    }
    // singular I − conj(w) T
    let s = CMat::<f64>::from_real(1, &[2.0]).unwrap();
    assert!(matches!(matrix_mobius(c(0.5, 0.0), &s), Err(Error::Domain(_))));
}

#[test]
fn matrix_mobius_inverts() {
    let mut rng = rng_for(17, 0);
    for _ in 0..10 {
        let g = ginibre::<f64, _>(4, &mut rng).unwrap();
        let t = CMat::new(g.as_mat().unscale(op_norm(g.as_mat()) * 1.05)).unwrap();
        let w = c(rng.random_range(-0.5..0.5), rng.random_range(-0.5..0.5));
        let back = matrix_mobius(w, &matrix_mobius(-w, &t).unwrap()).unwrap();
        assert!((back.as_mat() - t.as_mat()).norm() < 1e-8);
    }
    let _ = inverse::<f64>;
}
