#![allow(dead_code)]

use dwindex::gallery::standard_gallery;
use dwindex::metrics::operator_norm;
use dwindex::{Operator, PolyhedralSpace};
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

pub fn gallery() -> Vec<(String, PolyhedralSpace)> {
    standard_gallery()
        .into_iter()
        .map(|g| (g.label(), g.build().expect("gallery space builds")))
        .collect()
}

/// Entries uniform in `[-1, 1]`, scaled to operator norm 1.
pub fn random_operator(rng: &mut ChaCha8Rng, space: &PolyhedralSpace) -> Operator {
    let d = space.dim();
    loop {
        let entries: Vec<f64> = (0..d * d).map(|_| rng.random_range(-1.0..=1.0)).collect();
        let t = Operator::from_entries(d, entries).unwrap();
        let n = operator_norm(space, &t).unwrap().value;
        if n > 1e-6 {
            return t.scaled(1.0 / n);
        }
    }
}

pub fn random_vector(rng: &mut ChaCha8Rng, d: usize) -> Vec<f64> {
    (0..d).map(|_| StandardNormal.sample(rng)).collect()
}

pub fn random_unit_point(rng: &mut ChaCha8Rng, space: &PolyhedralSpace) -> Vec<f64> {
    loop {
        let x = random_vector(rng, space.dim());
        if x.iter().any(|&c| c != 0.0) {
            return space.normalize(&x).unwrap().0;
        }
    }
}
