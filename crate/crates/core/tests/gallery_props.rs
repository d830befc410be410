mod common;

use dwindex::gallery::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[test]
fn formula_norms_match_facet_norms() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for gamma in [0.1, 0.3, 0.5, 0.75, 0.9] {
        let space = hexagon_gamma_space(gamma).unwrap();
        for _ in 0..1000 {
            let x = [rng.random_range(-3.0..3.0), rng.random_range(-3.0..3.0)];
            let a = space.norm(&x).unwrap();
            let b = hexagon_gamma_norm(gamma, &x);
            assert!((a - b).abs() <= 1e-9, "gamma {gamma} at {x:?}: {a} vs {b}");
        }
    }
    for xi in [0.1, 0.25, 0.4, 0.5, 0.8] {
        let space = octagon_xi_space(xi).unwrap();
        for _ in 0..1000 {
            let x = [rng.random_range(-3.0..3.0), rng.random_range(-3.0..3.0)];
            let a = space.norm(&x).unwrap();
            let b = octagon_xi_norm(xi, &x);
            assert!((a - b).abs() <= 1e-9, "xi {xi} at {x:?}: {a} vs {b}");
        }
    }
}

#[test]
fn octagon_formula_examples() {
    assert!((octagon_xi_norm(0.5, &[1.0, 0.5]) - 1.0).abs() < 1e-12);
    assert!((octagon_xi_norm(0.5, &[1.0, 1.0]) - 4.0 / 3.0).abs() < 1e-12);
    assert!((octagon_xi_norm(0.25, &[1.0, 0.0]) - 1.0).abs() < 1e-12);
}

#[test]
fn every_gallery_space_builds() {
    assert_eq!(common::gallery().len(), standard_gallery().len());
    for n in 2..=8 {
        regular_polygon_space(n).unwrap();
        prism_space(&regular_polygon_space(n).unwrap(), 1.5).unwrap();
    }
    for n in 3..=6 {
        drum_space(n).unwrap();
    }
    for gamma in [0.3, 0.5, 0.75] {
        GallerySpec::HexagonGamma { gamma }.prism(1.0).build().unwrap();
    }
    for xi in [0.25, 0.5] {
        GallerySpec::OctagonXi { xi }.prism(1.0).build().unwrap();
    }
}

#[test]
fn polygons_are_rotation_invariant() {
    for n in 2..=8 {
        let space = regular_polygon_space(n).unwrap();
        let (s, c) = (std::f64::consts::PI / n as f64).sin_cos();
        for v in space.vertices() {
            let (x, y) = (v.0[0], v.0[1]);
            let r = [c * x - s * y, s * x + c * y];
            let hit = space
                .vertices()
                .iter()
                .any(|u| (u.0[0] - r[0]).abs() < 1e-9 && (u.0[1] - r[1]).abs() < 1e-9);
            assert!(hit, "n = {n}: rotated vertex {r:?} missing");
        }
    }
}

#[test]
fn gallery_spec_rejects_bad_parameters() {
    assert!(regular_polygon_space(1).is_err());
    assert!(drum_space(2).is_err());
    assert!(hexagon_gamma_space(1.0).is_err());
    assert!(octagon_xi_space(0.0).is_err());
    assert!(prism_space(&regular_polygon_space(2).unwrap(), 0.0).is_err());
}
