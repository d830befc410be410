//! Davis-Wielandt shells of operators on complex `ℓ_p^n`, `1 < p < ∞`.
//!
//! These spaces are smooth: the only supporting functional at a unit vector
//! `x` is `g_j = |x_j|^{p-2} conj(x_j)`. The shell is sampled as the cloud
//! `(g(Tx), ‖Tx‖_p²) ⊂ ℂ × ℝ ≅ ℝ³` and probed for holes between pairs of
//! points, which is numerical evidence of non-convexity.

use std::f64::consts::FRAC_PI_4;
use std::io::{self, Write};
use std::num::NonZero;

use kiddo::{ImmutableKdTree, SquaredEuclidean};
use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Samples drawn from one generator substream; fixes the output independently of thread count.
const CHUNK: usize = 4096;

/// Upper limit on the points whose pairwise midpoints are probed.
pub const MAX_WITNESS_CANDIDATES: usize = 1500;

#[derive(Debug, Clone, PartialEq)]
pub struct ComplexOperator {
    dim: usize,
    entries: Vec<Complex64>,
}

impl ComplexOperator {
    pub fn from_entries(dim: usize, entries: Vec<Complex64>) -> Result<Self> {
        if entries.len() != dim * dim || dim == 0 {
            return Err(Error::DimensionMismatch { expected: dim * dim, found: entries.len() });
        }
        if entries.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::InvalidInput("non-finite matrix entry".into()));
        }
        Ok(ComplexOperator { dim, entries })
    }

    pub fn identity(dim: usize) -> Self {
        let mut entries = vec![Complex64::new(0.0, 0.0); dim * dim];
        for i in 0..dim {
            entries[i * dim + i] = Complex64::new(1.0, 0.0);
        }
        ComplexOperator { dim, entries }
    }

    pub fn diagonal(diag: &[Complex64]) -> Self {
        let dim = diag.len();
        let mut entries = vec![Complex64::new(0.0, 0.0); dim * dim];
        for (i, z) in diag.iter().enumerate() {
            entries[i * dim + i] = *z;
        }
        ComplexOperator { dim, entries }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn entry(&self, row: usize, col: usize) -> Complex64 {
        self.entries[row * self.dim + col]
    }

    pub fn apply(&self, x: &[Complex64]) -> Vec<Complex64> {
        self.entries
            .chunks_exact(self.dim)
            .map(|row| row.iter().zip(x).map(|(a, b)| a * b).sum())
            .collect()
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ComplexOperatorJson {
    pub matrix_re: Vec<Vec<f64>>,
    pub matrix_im: Vec<Vec<f64>>,
}

impl ComplexOperatorJson {
    pub fn into_operator(self) -> Result<ComplexOperator> {
        let dim = self.matrix_re.len();
        if self.matrix_im.len() != dim {
            return Err(Error::DimensionMismatch { expected: dim, found: self.matrix_im.len() });
        }
        let mut entries = Vec::with_capacity(dim * dim);
        for (re, im) in self.matrix_re.iter().zip(&self.matrix_im) {
            if re.len() != dim || im.len() != dim {
                return Err(Error::DimensionMismatch { expected: dim, found: re.len().min(im.len()) });
            }
            entries.extend(re.iter().zip(im).map(|(&a, &b)| Complex64::new(a, b)));
        }
        ComplexOperator::from_entries(dim, entries)
    }

    pub fn from_operator(op: &ComplexOperator) -> Self {
        let rows = |f: fn(&Complex64) -> f64| {
            op.entries.chunks_exact(op.dim).map(|r| r.iter().map(f).collect()).collect()
        };
        ComplexOperatorJson { matrix_re: rows(|z| z.re), matrix_im: rows(|z| z.im) }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ShellPoint {
    pub w_re: f64,
    pub w_im: f64,
    pub s: f64,
}

impl ShellPoint {
    fn coords(&self) -> [f64; 3] {
        [self.w_re, self.w_im, self.s]
    }

    fn midpoint(&self, other: &ShellPoint) -> [f64; 3] {
        [
            0.5 * (self.w_re + other.w_re),
            0.5 * (self.w_im + other.w_im),
            0.5 * (self.s + other.s),
        ]
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ShellSample {
    pub points: Vec<ShellPoint>,
    pub p: f64,
    pub seed: u64,
    pub count: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ConvexityWitness {
    pub first: ShellPoint,
    pub second: ShellPoint,
    /// Distance from the midpoint to the nearest sample point.
    pub gap: f64,
}

fn check_p(p: f64) -> Result<()> {
    if !(p > 1.0 && p.is_finite()) {
        return Err(Error::BadParameter(format!("p must lie in (1, ∞), got {p}")));
    }
    Ok(())
}

pub fn lp_norm(x: &[Complex64], p: f64) -> f64 {
    x.iter().map(|z| z.norm().powf(p)).sum::<f64>().powf(1.0 / p)
}

pub fn pairing(g: &[Complex64], y: &[Complex64]) -> Complex64 {
    g.iter().zip(y).map(|(a, b)| a * b).sum()
}

fn support_unchecked(x: &[Complex64], p: f64) -> Vec<Complex64> {
    x.iter()
        .map(|z| {
            let r = z.norm();
            if r == 0.0 {
                Complex64::new(0.0, 0.0)
            } else {
                z.conj() * r.powf(p - 2.0)
            }
        })
        .collect()
}

/// The unique norming functional of a unit vector of `ℓ_p^n`.
pub fn lp_support_functional(x: &[Complex64], p: f64) -> Result<Vec<Complex64>> {
    check_p(p)?;
    let n = lp_norm(x, p);
    if (n - 1.0).abs() > 1e-12 {
        return Err(Error::NotUnitNorm(n));
    }
    Ok(support_unchecked(x, p))
}

fn shell_point(t: &ComplexOperator, x: &mut [Complex64], p: f64) -> ShellPoint {
    let n = lp_norm(x, p);
    x.iter_mut().for_each(|z| *z /= n);
    let g = support_unchecked(x, p);
    let tx = t.apply(x);
    let w = pairing(&g, &tx);
    let ntx = lp_norm(&tx, p);
    ShellPoint { w_re: w.re, w_im: w.im, s: ntx * ntx }
}

/// Samples `(g(Tx), ‖Tx‖_p²)` at `ℓ_p`-normalized complex Gaussian vectors.
pub fn sample_shell(t: &ComplexOperator, p: f64, samples: usize, seed: u64) -> Result<ShellSample> {
    check_p(p)?;
    if samples == 0 {
        return Err(Error::BadParameter("samples must be at least 1".into()));
    }
    let d = t.dim();
    let chunks = samples.div_ceil(CHUNK);
    let points: Vec<ShellPoint> = (0..chunks)
        .into_par_iter()
        .flat_map_iter(|c| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(c as u64);
            let len = CHUNK.min(samples - c * CHUNK);
            let mut x = vec![Complex64::new(0.0, 0.0); d];
            (0..len)
                .map(|_| {
                    for z in x.iter_mut() {
                        *z = Complex64::new(StandardNormal.sample(&mut rng), StandardNormal.sample(&mut rng));
                    }
                    shell_point(t, &mut x, p)
                })
                .collect::<Vec<_>>()
        })
        .collect();
    Ok(ShellSample { count: points.len(), points, p, seed })
}

/// Checks the three sufficient conditions for a non-convex shell on the
/// block `[[a, b], [c, d]]`: `a + d = 0`, `|b| = |c|`, `Re b Im c + Re c Im b = 0`,
/// with `a, d` real nonzero and `b, c` nonzero.
pub fn satisfies_nonconvex_conditions(a: Complex64, b: Complex64, c: Complex64, d: Complex64) -> bool {
    const EPS: f64 = 1e-12;
    let real_nonzero = |z: Complex64| z.im.abs() <= EPS && z.re.abs() > EPS;
    real_nonzero(a)
        && real_nonzero(d)
        && b.norm() > EPS
        && c.norm() > EPS
        && (a.re + d.re).abs() <= EPS
        && (b.norm() - c.norm()).abs() <= EPS
        && (b.re * c.im + c.re * b.im).abs() <= EPS
}

/// `[[1, e^{iπ/4}], [e^{-iπ/4}, -1]] ⊕ 0_{n-2}`.
pub fn nonconvex_block_operator(n: usize) -> Result<ComplexOperator> {
    if n < 2 {
        return Err(Error::BadParameter(format!("need n >= 2, got {n}")));
    }
    let a = Complex64::new(1.0, 0.0);
    let d = Complex64::new(-1.0, 0.0);
    let b = Complex64::from_polar(1.0, FRAC_PI_4);
    let c = Complex64::from_polar(1.0, -FRAC_PI_4);
    assert!(satisfies_nonconvex_conditions(a, b, c, d));
    let mut entries = vec![Complex64::new(0.0, 0.0); n * n];
    entries[0] = a;
    entries[1] = b;
    entries[n] = c;
    entries[n + 1] = d;
    ComplexOperator::from_entries(n, entries)
}

fn build_tree(sample: &ShellSample) -> Option<ImmutableKdTree<f64, 3>> {
    let coords: Vec<[f64; 3]> = sample.points.iter().map(ShellPoint::coords).collect();
    ImmutableKdTree::new_from_slice(&coords).ok()
}

fn nearest_distance(tree: &ImmutableKdTree<f64, 3>, q: &[f64; 3]) -> f64 {
    tree.query(q).nearest_one::<SquaredEuclidean<f64>>().execute().distance.sqrt()
}

/// Median distance from a sample point to its nearest other sample point.
pub fn median_nn_spacing(sample: &ShellSample) -> f64 {
    if sample.points.len() < 2 {
        return 0.0;
    }
    let Some(tree) = build_tree(sample) else {
        return 0.0;
    };
    let two = NonZero::new(2).unwrap();
    let mut d: Vec<f64> = sample
        .points
        .par_iter()
        .map(|pt| {
            let hits = tree.query(&pt.coords()).nearest_n::<SquaredEuclidean<f64>>(two).execute();
            hits.last().map_or(0.0, |h| h.distance.sqrt())
        })
        .collect();
    d.sort_by(f64::total_cmp);
    let m = d.len();
    if m % 2 == 1 {
        d[m / 2]
    } else {
        0.5 * (d[m / 2 - 1] + d[m / 2])
    }
}

/// Multiple of the median spacing used as the default witness threshold.
///
/// On a shell that degenerates to a curve, random sampling leaves gaps of
/// roughly `ln(N) / ln 2` median spacings (about 17 at `N = 10^5`, at most 21
/// over 20 seeds), so smaller multiples report sampling sparsity as holes.
pub const WITNESS_SPACING_MULTIPLE: f64 = 40.0;

/// Witness threshold: `WITNESS_SPACING_MULTIPLE` times the median nearest-neighbour spacing.
pub fn default_witness_tol(sample: &ShellSample) -> f64 {
    WITNESS_SPACING_MULTIPLE * median_nn_spacing(sample)
}

/// Distance from `q` to the nearest point of `cloud` by exhaustive scan.
pub fn brute_force_distance(cloud: &[ShellPoint], q: &[f64; 3]) -> f64 {
    cloud
        .par_iter()
        .map(|p| {
            let c = p.coords();
            (c[0] - q[0]).powi(2) + (c[1] - q[1]).powi(2) + (c[2] - q[2]).powi(2)
        })
        .reduce(|| f64::INFINITY, f64::min)
        .sqrt()
}

/// Searches pairs of sample points whose midpoint is farther than `tol` from
/// every sample point and returns the pair with the largest such gap.
///
/// Pairs are drawn from an evenly strided subset of at most
/// [`MAX_WITNESS_CANDIDATES`] points; nearest neighbours are always taken
/// over the full cloud.
pub fn convexity_witness(sample: &ShellSample, tol: f64) -> Option<ConvexityWitness> {
    let pts = &sample.points;
    if pts.len() < 2 {
        return None;
    }
    let tree = build_tree(sample)?;
    let stride = pts.len().div_ceil(MAX_WITNESS_CANDIDATES).max(1);
    let cand: Vec<usize> = (0..pts.len()).step_by(stride).collect();
    let best = (0..cand.len())
        .into_par_iter()
        .filter_map(|a| {
            let mut local: Option<(f64, usize, usize)> = None;
            for b in a + 1..cand.len() {
                let (i, j) = (cand[a], cand[b]);
                let gap = nearest_distance(&tree, &pts[i].midpoint(&pts[j]));
                if gap > tol && local.is_none_or(|(g, _, _)| gap > g) {
                    local = Some((gap, i, j));
                }
            }
            local
        })
        .reduce_with(|x, y| {
            // Larger gap wins; ties go to the lexicographically smaller pair.
            if y.0 > x.0 || (y.0 == x.0 && (y.1, y.2) < (x.1, x.2)) {
                y
            } else {
                x
            }
        });
    best.map(|(gap, i, j)| ConvexityWitness { first: pts[i], second: pts[j], gap })
}

/// `√ max(|w|² + s²)` over the cloud.
pub fn shell_dw_estimate(sample: &ShellSample) -> f64 {
    sample
        .points
        .iter()
        .map(|q| q.w_re * q.w_re + q.w_im * q.w_im + q.s * q.s)
        .fold(0.0, f64::max)
        .sqrt()
}

pub fn write_csv<W: Write>(sample: &ShellSample, mut out: W) -> io::Result<()> {
    writeln!(out, "w_re,w_im,s")?;
    for q in &sample.points {
        writeln!(out, "{},{},{}", q.w_re, q.w_im, q.s)?;
    }
    out.flush()
}
