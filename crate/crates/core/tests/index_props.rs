use dwindex::gallery::regular_polygon_space;
use dwindex::index::{estimate_index, index_bracket};
use dwindex::metrics::{operator_norm, radius};
use dwindex::RadiusKind;

const SQRT2: f64 = std::f64::consts::SQRT_2;

#[test]
fn square_and_hexagon() {
    let square = regular_polygon_space(2).unwrap();
    let n = estimate_index(&square, RadiusKind::W, 64, 42, 1e-7).unwrap().value;
    let dw = estimate_index(&square, RadiusKind::Dw, 64, 42, 1e-7).unwrap().value;
    assert!((n - 1.0).abs() < 1e-3, "{n}");
    assert!((dw - SQRT2).abs() < 1e-3, "{dw}");

    let hex = regular_polygon_space(3).unwrap();
    let n = estimate_index(&hex, RadiusKind::W, 64, 42, 1e-7).unwrap().value;
    let dw = estimate_index(&hex, RadiusKind::Dw, 64, 42, 1e-7).unwrap().value;
    assert!(n < 1.0 - 1e-2, "{n}");
    assert!(dw < SQRT2 - 1e-2, "{dw}");
}

#[test]
fn estimates_are_evaluated_on_their_witness() {
    let space = regular_polygon_space(4).unwrap();
    for kind in RadiusKind::ALL {
        let est = estimate_index(&space, kind, 16, 5, 1e-7).unwrap();
        assert!((operator_norm(&space, &est.witness).unwrap().value - 1.0).abs() < 1e-7);
        assert!((radius(&space, &est.witness, kind).unwrap().value - est.value).abs() < 1e-7);
        assert_eq!(est.restarts_used, 16);
        assert_eq!(est.seed, 5);
    }
}

#[test]
fn bit_identical_reruns() {
    let space = regular_polygon_space(5).unwrap();
    let a = estimate_index(&space, RadiusKind::DwStar, 8, 99, 1e-6).unwrap();
    let b = estimate_index(&space, RadiusKind::DwStar, 8, 99, 1e-6).unwrap();
    assert_eq!(a.value.to_bits(), b.value.to_bits());
    assert_eq!(a.witness, b.witness);
}

#[test]
fn thread_count_does_not_change_the_result() {
    let space = regular_polygon_space(3).unwrap();
    let run = |threads| {
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .unwrap()
            .install(|| estimate_index(&space, RadiusKind::Dw, 12, 7, 1e-7).unwrap())
    };
    assert_eq!(run(1), run(4));
}

#[test]
fn more_restarts_never_hurt() {
    let space = regular_polygon_space(3).unwrap();
    let mut last = f64::INFINITY;
    for restarts in [1, 2, 4, 8, 16] {
        let v = estimate_index(&space, RadiusKind::Dw, restarts, 3, 1e-7).unwrap().value;
        assert!(v <= last, "{restarts}: {v} > {last}");
        last = v;
    }
}

#[test]
fn bracket_is_ordered() {
    let space = regular_polygon_space(3).unwrap();
    let b = index_bracket(&space, RadiusKind::Dw, 16, 42, 1e-7).unwrap();
    assert!(b.lower <= b.upper + 1e-6, "{b:?}");
}
