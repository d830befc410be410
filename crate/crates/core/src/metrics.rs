//! Operator norm, numerical radius and Davis-Wielandt radii on a polyhedral space.
//!
//! All suprema over the pair set `Π = {(x, f) : ‖x‖ = 1, f ∈ J(x)}` are
//! evaluated as exact maxima over the finite set of extreme pairs
//! `(vertex, incident facet functional)`. For a fixed facet `F` with
//! functional `f`, the map `x ↦ f(Tx)² + ‖Tx‖^{2k}` is convex, so its
//! maximum over `F` sits at a vertex of `F`, where `f` is still admissible.
//! At lower-dimensional faces every admissible functional is a convex
//! combination of incident facet functionals, and `|g(Tx)|` is maximized at
//! one of them. [`sampled_dw`] provides an independent Monte-Carlo check.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg;
use crate::polytope::PolyhedralSpace;

/// A pair is reported as a witness when within this distance of the maximum.
pub const WITNESS_TOL: f64 = 1e-7;

/// A real `d × d` matrix, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct Operator {
    dim: usize,
    entries: Vec<f64>,
}

impl Operator {
    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let dim = rows.len();
        if dim == 0 {
            return Err(Error::InvalidInput("empty matrix".into()));
        }
        let mut entries = Vec::with_capacity(dim * dim);
        for row in rows {
            if row.len() != dim {
                return Err(Error::DimensionMismatch { expected: dim, found: row.len() });
            }
            entries.extend_from_slice(row);
        }
        Self::from_entries(dim, entries)
    }

    pub fn from_entries(dim: usize, entries: Vec<f64>) -> Result<Self> {
        if entries.len() != dim * dim {
            return Err(Error::DimensionMismatch { expected: dim * dim, found: entries.len() });
        }
        if entries.iter().any(|e| !e.is_finite()) {
            return Err(Error::InvalidInput("non-finite matrix entry".into()));
        }
        Ok(Operator { dim, entries })
    }

    pub fn identity(dim: usize) -> Self {
        let mut entries = vec![0.0; dim * dim];
        for i in 0..dim {
            entries[i * dim + i] = 1.0;
        }
        Operator { dim, entries }
    }

    pub fn zeros(dim: usize) -> Self {
        Operator { dim, entries: vec![0.0; dim * dim] }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn entries(&self) -> &[f64] {
        &self.entries
    }

    pub fn rows(&self) -> Vec<Vec<f64>> {
        self.entries.chunks_exact(self.dim).map(<[f64]>::to_vec).collect()
    }

    pub fn apply(&self, x: &[f64]) -> Vec<f64> {
        self.entries.chunks_exact(self.dim).map(|row| linalg::dot(row, x)).collect()
    }

    pub fn scaled(&self, c: f64) -> Operator {
        Operator { dim: self.dim, entries: self.entries.iter().map(|e| e * c).collect() }
    }

    pub fn plus(&self, other: &Operator) -> Result<Operator> {
        if other.dim != self.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, found: other.dim });
        }
        let entries = self.entries.iter().zip(&other.entries).map(|(a, b)| a + b).collect();
        Ok(Operator { dim: self.dim, entries })
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct OperatorJson {
    pub matrix: Vec<Vec<f64>>,
}

impl OperatorJson {
    pub fn into_operator(self) -> Result<Operator> {
        Operator::from_rows(&self.matrix)
    }

    pub fn from_operator(op: &Operator) -> Self {
        OperatorJson { matrix: op.rows() }
    }
}

impl Serialize for Operator {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        OperatorJson::from_operator(self).serialize(s)
    }
}

impl<'de> Deserialize<'de> for Operator {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        OperatorJson::deserialize(d)?.into_operator().map_err(serde::de::Error::custom)
    }
}

/// Which supremum over `Π` to take.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RadiusKind {
    /// `|f(Tx)|`
    W,
    /// `√(f(Tx)² + ‖Tx‖⁴)`
    Dw,
    /// `√(f(Tx)² + ‖Tx‖²)`
    #[serde(rename = "dwstar")]
    DwStar,
}

impl RadiusKind {
    pub const ALL: [RadiusKind; 3] = [RadiusKind::W, RadiusKind::Dw, RadiusKind::DwStar];

    /// The kind's expression at a pair with `f(Tx) = fx` and `‖Tx‖ = norm_tx`.
    #[inline]
    pub fn expression(self, fx: f64, norm_tx: f64) -> f64 {
        match self {
            RadiusKind::W => fx.abs(),
            RadiusKind::Dw => {
                let s = norm_tx * norm_tx;
                (fx * fx + s * s).sqrt()
            }
            RadiusKind::DwStar => (fx * fx + norm_tx * norm_tx).sqrt(),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            RadiusKind::W => "w",
            RadiusKind::Dw => "dw",
            RadiusKind::DwStar => "dwstar",
        }
    }
}

impl std::str::FromStr for RadiusKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "w" => Ok(RadiusKind::W),
            "dw" => Ok(RadiusKind::Dw),
            "dwstar" | "dw*" => Ok(RadiusKind::DwStar),
            other => Err(Error::BadParameter(format!("unknown radius kind '{other}'"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RadiusReport {
    pub value: f64,
    /// `(vertex_id, facet_id)` pairs attaining `value` within [`WITNESS_TOL`].
    pub witnesses: Vec<(usize, usize)>,
}

/// The set `DW(T_x)` of a real space: a horizontal segment at height `‖Tx‖²`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Segment {
    pub lo: f64,
    pub hi: f64,
    pub level: f64,
}

impl Segment {
    pub fn contains(&self, value: f64, level: f64, tol: f64) -> bool {
        value >= self.lo - tol && value <= self.hi + tol && (level - self.level).abs() <= tol
    }
}

/// `f_j(T v_i)` for every vertex `i` and facet `j`, plus `‖T v_i‖`.
pub(crate) struct ImageTable {
    facets: usize,
    values: Vec<f64>,
    norms: Vec<f64>,
}

impl ImageTable {
    pub(crate) fn new(space: &PolyhedralSpace, entries: &[f64]) -> Self {
        let d = space.dim();
        let facet_rows = space.facet_rows();
        let facets = facet_rows.len() / d;
        let verts = space.vertex_rows().len() / d;
        let mut values = Vec::with_capacity(verts * facets);
        let mut norms = Vec::with_capacity(verts);
        let mut tv = [0.0; 8];
        let mut tv_heap;
        let tv: &mut [f64] = if d <= 8 {
            &mut tv[..d]
        } else {
            tv_heap = vec![0.0; d];
            &mut tv_heap
        };
        for v in space.vertex_rows().chunks_exact(d) {
            for (out, row) in tv.iter_mut().zip(entries.chunks_exact(d)) {
                *out = linalg::dot(row, v);
            }
            let mut n = 0.0_f64;
            for f in facet_rows.chunks_exact(d) {
                let val = linalg::dot(f, tv);
                n = n.max(val);
                values.push(val);
            }
            norms.push(n);
        }
        ImageTable { facets, values, norms }
    }

    #[inline]
    pub(crate) fn pair_value(&self, vertex: usize, facet: usize) -> f64 {
        self.values[vertex * self.facets + facet]
    }

    #[inline]
    pub(crate) fn norm_at(&self, vertex: usize) -> f64 {
        self.norms[vertex]
    }

    pub(crate) fn operator_norm(&self) -> f64 {
        self.norms.iter().copied().fold(0.0, f64::max)
    }
}

fn check_op(space: &PolyhedralSpace, t: &Operator) -> Result<()> {
    if t.dim() != space.dim() {
        return Err(Error::DimensionMismatch { expected: space.dim(), found: t.dim() });
    }
    Ok(())
}

fn report<I>(values: I) -> RadiusReport
where
    I: Iterator<Item = ((usize, usize), f64)> + Clone,
{
    let value = values.clone().map(|(_, v)| v).fold(0.0_f64, f64::max);
    let witnesses = values.filter(|(_, v)| value - v <= WITNESS_TOL).map(|(p, _)| p).collect();
    RadiusReport { value, witnesses }
}

pub fn operator_norm(space: &PolyhedralSpace, t: &Operator) -> Result<RadiusReport> {
    check_op(space, t)?;
    let table = ImageTable::new(space, t.entries());
    let nf = space.facets().len();
    let nv = space.vertices().len();
    Ok(report(
        (0..nv).flat_map(|i| (0..nf).map(move |j| (i, j))).map(|(i, j)| ((i, j), table.pair_value(i, j))),
    ))
}

/// Supremum of the kind's expression over `Π`, reduced to the extreme pairs.
pub fn radius(space: &PolyhedralSpace, t: &Operator, kind: RadiusKind) -> Result<RadiusReport> {
    check_op(space, t)?;
    let table = ImageTable::new(space, t.entries());
    Ok(report(space.pair_slice().iter().map(|&(i, j)| {
        ((i, j), kind.expression(table.pair_value(i, j), table.norm_at(i)))
    })))
}

pub fn numerical_radius(space: &PolyhedralSpace, t: &Operator) -> Result<RadiusReport> {
    radius(space, t, RadiusKind::W)
}

pub fn dw_radius(space: &PolyhedralSpace, t: &Operator) -> Result<RadiusReport> {
    radius(space, t, RadiusKind::Dw)
}

pub fn dw_star_radius(space: &PolyhedralSpace, t: &Operator) -> Result<RadiusReport> {
    radius(space, t, RadiusKind::DwStar)
}

/// Kind radius of `m / ‖m‖`, or `None` when `m` is the zero operator.
pub(crate) fn normalized_radius(space: &PolyhedralSpace, entries: &[f64], kind: RadiusKind) -> Option<f64> {
    let table = ImageTable::new(space, entries);
    let norm = table.operator_norm();
    if !(norm > 0.0) || !norm.is_finite() {
        return None;
    }
    let inv = 1.0 / norm;
    let best = space
        .pair_slice()
        .iter()
        .map(|&(i, j)| kind.expression(table.pair_value(i, j) * inv, table.norm_at(i) * inv))
        .fold(0.0_f64, f64::max);
    Some(best)
}

/// `DW(T_x)` for a real space: the segment spanned by `f(Tx)` over `J(x)` at height `‖Tx‖²`.
pub fn dw_set_at(space: &PolyhedralSpace, t: &Operator, x: &[f64]) -> Result<Segment> {
    check_op(space, t)?;
    let support = space.support_set(x)?;
    let tx = t.apply(x);
    let (lo, hi) = support
        .functionals
        .iter()
        .map(|f| f.pairing(&tx))
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| (lo.min(v), hi.max(v)));
    let n = space.norm_unchecked(&tx);
    Ok(Segment { lo, hi, level: n * n })
}

/// Upper bound `max_G √(f(Tv)² + ‖T‖⁴)` over the extreme pairs.
pub fn dw_upper_bound_g(space: &PolyhedralSpace, t: &Operator) -> Result<f64> {
    check_op(space, t)?;
    let table = ImageTable::new(space, t.entries());
    let n2 = table.operator_norm().powi(2);
    Ok(space
        .pair_slice()
        .iter()
        .map(|&(i, j)| {
            let fx = table.pair_value(i, j);
            (fx * fx + n2 * n2).sqrt()
        })
        .fold(0.0, f64::max))
}

/// Running maxima of every kind over one stream of random unit vectors.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SampledRadii {
    pub w: f64,
    pub dw: f64,
    pub dw_star: f64,
}

impl SampledRadii {
    pub fn get(&self, kind: RadiusKind) -> f64 {
        match kind {
            RadiusKind::W => self.w,
            RadiusKind::Dw => self.dw,
            RadiusKind::DwStar => self.dw_star,
        }
    }
}

/// Monte-Carlo estimate of all three suprema over `Π`.
///
/// Directions are standard Gaussian vectors scaled onto the unit sphere of the
/// space; at each sample every functional of `J(x)` is tried.
pub fn sampled_radii(space: &PolyhedralSpace, t: &Operator, samples: usize, seed: u64) -> Result<SampledRadii> {
    check_op(space, t)?;
    if samples == 0 {
        return Err(Error::BadParameter("samples must be at least 1".into()));
    }
    let d = space.dim();
    let facet_rows = space.facet_rows();
    let tol = space.tol();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut x = vec![0.0; d];
    let mut fx = Vec::with_capacity(facet_rows.len() / d);
    let mut out = SampledRadii { w: 0.0, dw: 0.0, dw_star: 0.0 };
    for _ in 0..samples {
        for c in x.iter_mut() {
            *c = StandardNormal.sample(&mut rng);
        }
        let n = space.norm_unchecked(&x);
        if !(n > 0.0) {
            continue;
        }
        x.iter_mut().for_each(|c| *c /= n);
        fx.clear();
        fx.extend(facet_rows.chunks_exact(d).map(|f| linalg::dot(f, &x)));
        let tx = t.apply(&x);
        let norm_tx = space.norm_unchecked(&tx);
        for (f, &val) in facet_rows.chunks_exact(d).zip(&fx) {
            if (val - 1.0).abs() > tol {
                continue;
            }
            let ftx = linalg::dot(f, &tx);
            out.w = out.w.max(RadiusKind::W.expression(ftx, norm_tx));
            out.dw = out.dw.max(RadiusKind::Dw.expression(ftx, norm_tx));
            out.dw_star = out.dw_star.max(RadiusKind::DwStar.expression(ftx, norm_tx));
        }
    }
    Ok(out)
}

pub fn sampled_dw(
    space: &PolyhedralSpace,
    t: &Operator,
    kind: RadiusKind,
    samples: usize,
    seed: u64,
) -> Result<f64> {
    Ok(sampled_radii(space, t, samples, seed)?.get(kind))
}
