//! The acceptance table as a deterministic JSON report.
//!
//! Every row is computed from explicit seeds, so two runs with the same
//! inputs produce byte-identical output. Failed checks become report entries.

use std::collections::{BTreeMap, HashMap};
use std::f64::consts::SQRT_2;

use dwindex::certifier::index_lower_bound;
use dwindex::gallery::*;
use dwindex::index::{default_restarts, estimate_index};
use dwindex::lp_shell::*;
use dwindex::metrics::*;
use dwindex::{Operator, PolyhedralSpace, RadiusKind};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

pub const LABELS: [&str; 13] = [
    "regular-polygons",
    "pyramid-prism",
    "drum",
    "hexagonal-prism",
    "vertex-lower-bound",
    "hexagon-gamma-prism",
    "octagon-xi-prism",
    "segment-convexity",
    "dwstar-norm",
    "extreme-pair-bound",
    "index-chain",
    "lp-shell-nonconvexity",
    "modified-index",
];

const SEARCH_TOL: f64 = 1e-7;
const SQRT5_HALF: f64 = 1.118_033_988_749_895;

/// The spaces a report is computed on.
pub struct Inputs {
    pub seed: u64,
    pub pyramid: PolyhedralSpace,
    pub gallery: Vec<(String, PolyhedralSpace)>,
}

impl Inputs {
    pub fn standard(seed: u64) -> dwindex::Result<Self> {
        let gallery = standard_gallery()
            .into_iter()
            .map(|g| Ok((g.label(), g.build()?)))
            .collect::<dwindex::Result<Vec<_>>>()?;
        Ok(Inputs { seed, pyramid: pyramid_prism_space()?, gallery })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Row {
    pub label: &'static str,
    pub status: &'static str,
    pub values: BTreeMap<String, f64>,
    pub failures: Vec<String>,
}

impl Row {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Report {
    pub seed: u64,
    pub passed: usize,
    pub total: usize,
    pub rows: Vec<Row>,
}

struct Ctx<'a> {
    inputs: &'a Inputs,
    estimates: HashMap<(String, RadiusKind, usize), f64>,
}

impl Ctx<'_> {
    fn estimate(&mut self, key: &str, space: &PolyhedralSpace, kind: RadiusKind, restarts: usize) -> f64 {
        let seed = self.inputs.seed;
        *self
            .estimates
            .entry((key.to_string(), kind, restarts))
            .or_insert_with(|| match estimate_index(space, kind, restarts, seed, SEARCH_TOL) {
                Ok(e) => e.value,
                Err(_) => f64::NAN,
            })
    }

    fn spec_estimate(&mut self, spec: &GallerySpec, kind: RadiusKind, restarts: usize) -> f64 {
        match spec.build() {
            Ok(space) => self.estimate(&spec.label(), &space, kind, restarts),
            Err(_) => f64::NAN,
        }
    }

    fn rng(&self, row: usize) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.inputs.seed);
        rng.set_stream(row as u64);
        rng
    }
}

struct RowBuilder {
    values: BTreeMap<String, f64>,
    failures: Vec<String>,
}

impl RowBuilder {
    fn new() -> Self {
        RowBuilder { values: BTreeMap::new(), failures: Vec::new() }
    }

    fn value(&mut self, key: impl Into<String>, v: f64) {
        self.values.insert(key.into(), v);
    }

    fn close(&mut self, key: impl Into<String>, v: f64, target: f64, tol: f64) {
        let key = key.into();
        // NaN compares false, so a failed computation is reported too.
        if !((v - target).abs() <= tol) {
            self.failures.push(format!("{key}: {v:.6} vs {target:.6} (tol {tol:e})"));
        }
        self.values.insert(key, v);
    }

    fn require(&mut self, ok: bool, msg: impl FnOnce() -> String) {
        if !ok {
            self.failures.push(msg());
        }
    }

    fn finish(self, label: &'static str) -> Row {
        let status = if self.failures.is_empty() { "PASS" } else { "FAIL" };
        Row { label, status, values: self.values, failures: self.failures }
    }
}

/// Random point of the unit sphere of `space`, from a direction uniform in the cube.
fn unit_point(rng: &mut ChaCha8Rng, space: &PolyhedralSpace) -> Vec<f64> {
    loop {
        let x: Vec<f64> = (0..space.dim()).map(|_| rng.random_range(-1.0..=1.0)).collect();
        if let Ok(p) = space.normalize(&x) {
            return p.0;
        }
    }
}

fn random_operator(rng: &mut ChaCha8Rng, space: &PolyhedralSpace) -> Operator {
    let d = space.dim();
    loop {
        let entries: Vec<f64> = (0..d * d).map(|_| rng.random_range(-1.0..=1.0)).collect();
        let t = Operator::from_entries(d, entries).expect("square matrix");
        let n = operator_norm(space, &t).map(|r| r.value).unwrap_or(0.0);
        if n > 1e-6 {
            return t.scaled(1.0 / n);
        }
    }
}

#[allow(clippy::approx_constant)]
fn polygon_targets() -> [(usize, f64); 4] {
    [(2, 1.414214), (3, 1.118034), (4, 1.082392), (5, polygon_index_closed_form(5))]
}

fn three_d_targets() -> [GallerySpec; 3] {
    [
        GallerySpec::Drum { n: 3 },
        GallerySpec::RegularPolygon { n: 3 }.prism(1.0),
        GallerySpec::RegularPolygon { n: 3 }.prism(2.0),
    ]
}

fn regular_polygons(ctx: &mut Ctx, kind: RadiusKind, tol: f64, b: &mut RowBuilder) {
    for (n, target) in polygon_targets() {
        let v = ctx.spec_estimate(&GallerySpec::RegularPolygon { n }, kind, 64);
        b.close(format!("n={n}"), v, target, tol);
    }
}

fn pyramid(ctx: &mut Ctx, kind: RadiusKind, b: &mut RowBuilder) {
    let space = &ctx.inputs.pyramid;
    let v = ctx.estimate("pyramid", space, kind, 256);
    b.close("estimate", v, SQRT5_HALF, 5e-3);
    if kind == RadiusKind::Dw {
        let lb = index_lower_bound(space).unwrap_or(f64::NAN);
        b.value("lower_bound", lb);
        b.require(lb <= v + 1e-6, || format!("lower bound {lb:.6} exceeds estimate {v:.6}"));
    }
}

fn three_d(ctx: &mut Ctx, specs: &[GallerySpec], kind: RadiusKind, b: &mut RowBuilder) {
    for spec in specs {
        let v = ctx.spec_estimate(spec, kind, 256);
        b.close(spec.label(), v, SQRT5_HALF, 5e-3);
    }
}

fn vertex_lower_bound(ctx: &mut Ctx, b: &mut RowBuilder) {
    let gallery = &ctx.inputs.gallery;
    for (label, space) in gallery {
        let lb = index_lower_bound(space).unwrap_or(f64::NAN);
        let v = ctx.estimate(label, space, RadiusKind::Dw, default_restarts(space.dim()));
        b.value(format!("{label} lower"), lb);
        b.value(format!("{label} upper"), v);
        b.require(lb <= v + 1e-6, || format!("{label}: lower bound {lb:.6} exceeds estimate {v:.6}"));
    }
}

fn hexagon_gamma(ctx: &mut Ctx, b: &mut RowBuilder) {
    for gamma in [0.3, 0.5, 0.75] {
        let target = hexagon_gamma_prism_bound(gamma);
        let spec = GallerySpec::HexagonGamma { gamma }.prism(1.0);
        let lb = spec.build().and_then(|s| index_lower_bound(&s)).unwrap_or(f64::NAN);
        let v = ctx.spec_estimate(&spec, RadiusKind::Dw, 256);
        b.value(format!("γ={gamma} lower"), lb);
        b.value(format!("γ={gamma} upper"), v);
        b.require(lb >= target - 1e-4, || format!("γ={gamma}: lower bound {lb:.6} below {target:.6}"));
        b.require(lb <= v + 1e-6, || format!("γ={gamma}: lower bound {lb:.6} exceeds estimate {v:.6}"));
    }
}

fn octagon_xi(b: &mut RowBuilder) {
    for xi in [0.25, 0.5] {
        let target = octagon_xi_prism_bound(xi);
        let lb = GallerySpec::OctagonXi { xi }
            .prism(1.0)
            .build()
            .and_then(|s| index_lower_bound(&s))
            .unwrap_or(f64::NAN);
        b.value(format!("ξ={xi} lower"), lb);
        b.require(lb >= target - 1e-4, || format!("ξ={xi}: lower bound {lb:.6} below {target:.6}"));
    }
}

fn segment_convexity(ctx: &mut Ctx, b: &mut RowBuilder) {
    let mut rng = ctx.rng(8);
    for (label, space) in &ctx.inputs.gallery {
        let op = random_operator(&mut rng, space);
        let batch: Vec<Operator> = (0..10).map(|_| random_operator(&mut rng, space)).collect();
        let mut points: Vec<Vec<f64>> = space.vertices().iter().take(10).map(|v| v.0.clone()).collect();
        while points.len() < 20 {
            points.push(unit_point(&mut rng, space));
        }
        let (mut outside, mut mismatched) = (0usize, 0usize);
        for x in &points {
            let (Ok(seg), Ok(support), Ok(smooth)) =
                (dw_set_at(space, &op, x), space.support_set(x), space.is_smooth_point(x))
            else {
                mismatched += 1;
                continue;
            };
            let tx = op.apply(x);
            let level = space.norm(&tx).map(|n| n * n).unwrap_or(f64::NAN);
            for _ in 0..100 {
                let raw: Vec<f64> = (0..support.len()).map(|_| rng.random_range(0.0..1.0)).collect();
                let total: f64 = raw.iter().sum();
                let value: f64 = raw.iter().zip(&support.functionals).map(|(l, f)| l / total * f.pairing(&tx)).sum();
                outside += usize::from(!seg.contains(value, level, 1e-9));
            }
            let singleton = batch
                .iter()
                .all(|t| dw_set_at(space, t, x).map(|s| s.hi - s.lo <= 1e-9).unwrap_or(false));
            mismatched += usize::from(singleton != smooth);
        }
        b.require(outside == 0, || format!("{label}: {outside} combinations outside the segment"));
        b.require(mismatched == 0, || format!("{label}: {mismatched} points where singleton ≠ smooth"));
    }
    b.value("spaces", ctx.inputs.gallery.len() as f64);
}

fn dwstar_norm(ctx: &mut Ctx, b: &mut RowBuilder) {
    let mut rng = ctx.rng(9);
    for (label, space) in &ctx.inputs.gallery {
        let mut bad = 0usize;
        for _ in 0..200 {
            let a = random_operator(&mut rng, space).scaled(rng.random_range(0.1..3.0));
            let c = random_operator(&mut rng, space).scaled(rng.random_range(0.1..3.0));
            let s: f64 = rng.random_range(-4.0..4.0);
            let val = |t: &Operator| dw_star_radius(space, t).map(|r| r.value).unwrap_or(f64::NAN);
            let n = operator_norm(space, &a).map(|r| r.value).unwrap_or(f64::NAN);
            let (da, dc) = (val(&a), val(&c));
            let dsa = val(&a.scaled(s));
            let dsum = a.plus(&c).map(|t| val(&t)).unwrap_or(f64::NAN);
            let ok = n <= da + 1e-9
                && da <= SQRT_2 * n + 1e-9
                && (dsa - s.abs() * da).abs() <= 1e-9
                && dsum <= da + dc + 1e-9;
            bad += usize::from(!ok);
        }
        b.require(bad == 0, || format!("{label}: {bad} of 200 operators violate a norm property"));
        let id = dw_star_radius(space, &Operator::identity(space.dim())).map(|r| r.value).unwrap_or(f64::NAN);
        b.require((id - SQRT_2).abs() <= 1e-12, || format!("{label}: dw*(I) = {id}"));
    }
}

fn extreme_pair_bound(ctx: &mut Ctx, b: &mut RowBuilder) {
    let mut rng = ctx.rng(10);
    let mut worst_overall: f64 = 0.0;
    for (label, space) in &ctx.inputs.gallery {
        let (mut worst_gap, mut worst_excess, mut bound_bad) = (0.0_f64, f64::NEG_INFINITY, 0usize);
        for k in 0..100u64 {
            let op = random_operator(&mut rng, space);
            let dw = dw_radius(space, &op).map(|r| r.value).unwrap_or(f64::NAN);
            let g = dw_upper_bound_g(space, &op).unwrap_or(f64::NAN);
            bound_bad += usize::from(!(g >= dw - 1e-9));
            let Ok(sampled) = sampled_radii(space, &op, 100_000, ctx.inputs.seed.wrapping_add(k)) else {
                worst_gap = f64::INFINITY;
                continue;
            };
            for kind in RadiusKind::ALL {
                let exact = radius(space, &op, kind).map(|r| r.value).unwrap_or(f64::NAN);
                worst_gap = worst_gap.max(exact - sampled.get(kind));
                worst_excess = worst_excess.max(sampled.get(kind) - exact);
            }
        }
        worst_overall = worst_overall.max(worst_gap);
        b.value(format!("{label} shortfall"), worst_gap);
        b.require(bound_bad == 0, || format!("{label}: upper bound below dw for {bound_bad} operators"));
        b.require(worst_excess <= 1e-9, || format!("{label}: sampled value exceeds the finite maximum by {worst_excess:e}"));
        b.require(worst_gap <= 5e-3, || format!("{label}: sampled value falls {worst_gap:.2e} short (tol 5e-3)"));
    }
    b.value("worst shortfall", worst_overall);
}

fn index_chain(ctx: &mut Ctx, b: &mut RowBuilder) {
    let gallery = &ctx.inputs.gallery;
    for (label, space) in gallery {
        let r = default_restarts(space.dim());
        let n = ctx.estimate(label, space, RadiusKind::W, r);
        let dw = ctx.estimate(label, space, RadiusKind::Dw, r);
        let chain = [0.0, n, 1.0, dw, (n * n + 1.0).sqrt()];
        let ordered = chain.windows(2).all(|w| w[0] <= w[1] + SEARCH_TOL);
        b.require(ordered && chain[4] <= SQRT_2 + 5e-3, || {
            format!("{label}: n = {n:.8}, dw = {dw:.8}, √(n²+1) = {:.8}", chain[4])
        });
    }
    let square = GallerySpec::RegularPolygon { n: 2 };
    let n = ctx.spec_estimate(&square, RadiusKind::W, 64);
    let dw = ctx.spec_estimate(&square, RadiusKind::Dw, 64);
    b.close("square n", n, 1.0, 1e-3);
    b.close("square dw", dw, SQRT_2, 1e-3);
}

fn lp_shell_nonconvexity(ctx: &mut Ctx, b: &mut RowBuilder) {
    let seed = ctx.inputs.seed;
    let block = nonconvex_block_operator(2).expect("n = 2 is valid");
    let Ok(shell) = sample_shell(&block, 4.0, 100_000, seed) else {
        b.require(false, || "p = 4 sampling failed".into());
        return;
    };
    let spacing = median_nn_spacing(&shell);
    let tol = default_witness_tol(&shell);
    b.value("median spacing", spacing);
    b.value("threshold", tol);
    match convexity_witness(&shell, tol) {
        Some(w) => {
            b.value("gap", w.gap);
            b.require(w.gap > 10.0 * spacing, || format!("gap {:.3e} not above 10x spacing", w.gap));
            let mid = [
                0.5 * (w.first.w_re + w.second.w_re),
                0.5 * (w.first.w_im + w.second.w_im),
                0.5 * (w.first.s + w.second.s),
            ];
            if let Ok(dense) = sample_shell(&block, 4.0, 1_000_000, seed.wrapping_add(1)) {
                let d = brute_force_distance(&dense.points, &mid);
                b.value("dense distance", d);
                b.require(d > tol, || format!("midpoint region populated at 10^6 samples ({d:.3e})"));
            }
        }
        None => b.require(false, || "no witness for p = 4".into()),
    }
    let normal = ComplexOperator::diagonal(&[Complex64::new(1.0, 0.0), Complex64::new(0.0, 1.0)]);
    if let Ok(control) = sample_shell(&normal, 2.0, 100_000, seed) {
        let ctol = default_witness_tol(&control);
        if let Some(w) = convexity_witness(&control, ctol) {
            b.require(false, || format!("p = 2 control reports a witness with gap {:.3e}", w.gap));
        }
    }
}

fn modified_index(ctx: &mut Ctx, b: &mut RowBuilder) {
    regular_polygons(ctx, RadiusKind::DwStar, 5e-3, b);
    pyramid(ctx, RadiusKind::DwStar, b);
    three_d(ctx, &three_d_targets(), RadiusKind::DwStar, b);
}

/// Computes the rows named in `only`, or all rows when it is empty.
pub fn run(inputs: &Inputs, only: &[String]) -> Report {
    let mut ctx = Ctx { inputs, estimates: HashMap::new() };
    let mut rows = Vec::new();
    for label in LABELS {
        if !only.is_empty() && !only.iter().any(|o| o == label) {
            continue;
        }
        let mut b = RowBuilder::new();
        match label {
            "regular-polygons" => regular_polygons(&mut ctx, RadiusKind::Dw, 1e-3, &mut b),
            "pyramid-prism" => pyramid(&mut ctx, RadiusKind::Dw, &mut b),
            "drum" => three_d(&mut ctx, &three_d_targets()[..1], RadiusKind::Dw, &mut b),
            "hexagonal-prism" => three_d(&mut ctx, &three_d_targets()[1..], RadiusKind::Dw, &mut b),
            "vertex-lower-bound" => vertex_lower_bound(&mut ctx, &mut b),
            "hexagon-gamma-prism" => hexagon_gamma(&mut ctx, &mut b),
            "octagon-xi-prism" => octagon_xi(&mut b),
            "segment-convexity" => segment_convexity(&mut ctx, &mut b),
            "dwstar-norm" => dwstar_norm(&mut ctx, &mut b),
            "extreme-pair-bound" => extreme_pair_bound(&mut ctx, &mut b),
            "index-chain" => index_chain(&mut ctx, &mut b),
            "lp-shell-nonconvexity" => lp_shell_nonconvexity(&mut ctx, &mut b),
            "modified-index" => modified_index(&mut ctx, &mut b),
            _ => unreachable!("label list and dispatch agree"),
        }
        rows.push(b.finish(label));
    }
    let passed = rows.iter().filter(|r| r.passed()).count();
    Report { seed: inputs.seed, passed, total: rows.len(), rows }
}
