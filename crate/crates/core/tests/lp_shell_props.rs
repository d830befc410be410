use dwindex::lp_shell::*;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

fn random_unit(rng: &mut ChaCha8Rng, n: usize, p: f64) -> Vec<Complex64> {
    let x: Vec<Complex64> = (0..n)
        .map(|_| Complex64::new(StandardNormal.sample(rng), StandardNormal.sample(rng)))
        .collect();
    let norm = lp_norm(&x, p);
    x.into_iter().map(|z| z / norm).collect()
}

fn random_operator(rng: &mut ChaCha8Rng, n: usize) -> ComplexOperator {
    let entries = (0..n * n)
        .map(|_| Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
        .collect();
    ComplexOperator::from_entries(n, entries).unwrap()
}

#[test]
fn support_functional_norms_the_point() {
    let mut rng = ChaCha8Rng::seed_from_u64(31);
    for _ in 0..1000 {
        let p = rng.random_range(1.1..8.0);
        let n = rng.random_range(1..=5);
        let x = random_unit(&mut rng, n, p);
        let g = lp_support_functional(&x, p).unwrap();
        let gx = pairing(&g, &x);
        assert!((gx.re - 1.0).abs() < 1e-9 && gx.im.abs() < 1e-9, "p = {p}: {gx}");
        let q = p / (p - 1.0);
        assert!((lp_norm(&g, q) - 1.0).abs() < 1e-9, "p = {p}");
    }
}

#[test]
fn hilbert_support_is_the_conjugate() {
    let mut rng = ChaCha8Rng::seed_from_u64(32);
    for _ in 0..100 {
        let x = random_unit(&mut rng, 3, 2.0);
        let g = lp_support_functional(&x, 2.0).unwrap();
        for (a, b) in g.iter().zip(&x) {
            assert!((a - b.conj()).norm() < 1e-12);
        }
    }
}

#[test]
fn shell_points_respect_the_norm_bound() {
    let mut rng = ChaCha8Rng::seed_from_u64(33);
    for p in [1.5, 2.0, 3.0, 4.0] {
        let t = random_operator(&mut rng, 3);
        let sample = sample_shell(&t, p, 20_000, 1).unwrap();
        assert_eq!(sample.count, 20_000);
        for q in &sample.points {
            assert!(q.w_re * q.w_re + q.w_im * q.w_im <= q.s + 1e-9, "p = {p}: {q:?}");
        }
    }
}

#[test]
fn sampling_is_deterministic_and_thread_independent() {
    let t = nonconvex_block_operator(3).unwrap();
    let a = sample_shell(&t, 3.0, 10_000, 5).unwrap();
    let b = sample_shell(&t, 3.0, 10_000, 5).unwrap();
    assert_eq!(a, b);
    let single = rayon::ThreadPoolBuilder::new()
        .num_threads(1)
        .build()
        .unwrap()
        .install(|| sample_shell(&t, 3.0, 10_000, 5).unwrap());
    assert_eq!(a, single);
    assert_ne!(a, sample_shell(&t, 3.0, 10_000, 6).unwrap());
}

#[test]
fn dw_estimate_grows_with_sample_count() {
    let t = nonconvex_block_operator(2).unwrap();
    let mut last = 0.0;
    for n in [10, 100, 1000, 5000, 10_000, 50_000] {
        let est = shell_dw_estimate(&sample_shell(&t, 4.0, n, 8).unwrap());
        assert!(est >= last, "{n}: {est} < {last}");
        last = est;
    }
}

#[test]
fn block_operator_meets_the_conditions() {
    let t = nonconvex_block_operator(2).unwrap();
    assert!(satisfies_nonconvex_conditions(t.entry(0, 0), t.entry(0, 1), t.entry(1, 0), t.entry(1, 1)));
    let one = Complex64::new(1.0, 0.0);
    assert!(!satisfies_nonconvex_conditions(one, one, one, one));
}

#[test]
fn identity_shell_has_no_witness() {
    let sample = sample_shell(&ComplexOperator::identity(2), 3.0, 2000, 1).unwrap();
    for q in &sample.points {
        assert!((q.w_re - 1.0).abs() < 1e-9 && q.w_im.abs() < 1e-9 && (q.s - 1.0).abs() < 1e-9);
    }
    assert!(convexity_witness(&sample, 1e-6).is_none());
}

#[test]
fn witness_midpoint_is_empty_at_higher_density() {
    let t = nonconvex_block_operator(2).unwrap();
    let sample = sample_shell(&t, 4.0, 20_000, 2).unwrap();
    let tol = default_witness_tol(&sample);
    let w = convexity_witness(&sample, tol).expect("non-convex shell yields a witness");
    assert!(w.gap > tol);
    let dense = sample_shell(&t, 4.0, 200_000, 3).unwrap();
    let mid = [
        0.5 * (w.first.w_re + w.second.w_re),
        0.5 * (w.first.w_im + w.second.w_im),
        0.5 * (w.first.s + w.second.s),
    ];
    assert!(brute_force_distance(&dense.points, &mid) > tol);
}
