//! Finite-dimensional real polyhedral spaces.
//!
//! A [`PolyhedralSpace`] is described by the vertices of its (centrally
//! symmetric) unit ball. The facets are enumerated once at construction; each
//! facet carries its supporting functional, i.e. the unique functional `f`
//! with `f = 1` on the facet and `f ≤ 1` on the ball. These functionals are
//! precisely the extreme points of the dual unit ball, so the norm is
//! `max_f f(x)` and the dual norm is `max_v f(v)`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg;

/// Default comparison tolerance for facet membership and unit-norm checks.
pub const DEFAULT_TOL: f64 = 1e-9;

/// Two facet functionals closer than this (max-coordinate) are merged.
const DEDUP_TOL: f64 = 1e-7;

/// Pivot threshold when solving for a hyperplane through `d` vertices.
const PIVOT_EPS: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Point(pub Vec<f64>);

impl Point {
    pub fn new(coords: Vec<f64>) -> Self {
        Point(coords)
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn coords(&self) -> &[f64] {
        &self.0
    }

    pub fn scaled(&self, c: f64) -> Point {
        Point(self.0.iter().map(|v| v * c).collect())
    }
}

impl From<Vec<f64>> for Point {
    fn from(v: Vec<f64>) -> Self {
        Point(v)
    }
}

/// A linear functional on ℝ^d, stored by its coefficients.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Functional(pub Vec<f64>);

impl Functional {
    pub fn new(coeffs: Vec<f64>) -> Self {
        Functional(coeffs)
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.0
    }

    pub fn pairing(&self, x: &[f64]) -> f64 {
        linalg::dot(&self.0, x)
    }

    pub fn negated(&self) -> Functional {
        Functional(self.0.iter().map(|c| -c).collect())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Facet {
    pub functional: Functional,
    pub vertex_ids: Vec<usize>,
}

/// `J(x)`: the extreme supporting functionals at a unit vector.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SupportSet {
    pub base_point: Point,
    pub functionals: Vec<Functional>,
    pub facet_ids: Vec<usize>,
}

impl SupportSet {
    pub fn len(&self) -> usize {
        self.functionals.len()
    }

    pub fn is_empty(&self) -> bool {
        self.functionals.is_empty()
    }
}

/// Pairs `(vertex_id, facet_id)` with the facet functional equal to 1 at the vertex.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ExtremePairSet {
    pub pairs: Vec<(usize, usize)>,
}

impl ExtremePairSet {
    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }
}

#[derive(Debug, Clone)]
pub struct PolyhedralSpace {
    dim: usize,
    vertices: Vec<Point>,
    facets: Vec<Facet>,
    tol: f64,
    // Row-major copies for the hot loops.
    vertex_rows: Vec<f64>,
    facet_rows: Vec<f64>,
    pairs: Vec<(usize, usize)>,
    facets_at_vertex: Vec<Vec<usize>>,
}

impl PolyhedralSpace {
    /// Validates the vertex set and enumerates the facets of its convex hull.
    ///
    /// Every `d`-subset of vertices spanning a hyperplane `f(·) = 1` with all
    /// vertices on the side `f ≤ 1 + tol` contributes a candidate facet;
    /// candidates are merged when their functionals agree within `1e-7`.
    pub fn build(vertices: Vec<Point>, tol: f64) -> Result<Self> {
        if !(tol > 0.0 && tol.is_finite()) {
            return Err(Error::BadParameter(format!("tolerance must be positive, got {tol}")));
        }
        let Some(first) = vertices.first() else {
            return Err(Error::Degenerate("empty vertex list".into()));
        };
        let dim = first.dim();
        if dim < 2 {
            return Err(Error::Degenerate(format!("dimension must be at least 2, got {dim}")));
        }
        for v in &vertices {
            if v.dim() != dim {
                return Err(Error::DimensionMismatch { expected: dim, found: v.dim() });
            }
            if v.0.iter().any(|c| !c.is_finite()) {
                return Err(Error::InvalidInput("non-finite vertex coordinate".into()));
            }
        }

        for (i, v) in vertices.iter().enumerate() {
            if v.0.iter().all(|c| c.abs() <= tol) {
                return Err(Error::NotExtreme(i));
            }
            let scale = v.0.iter().fold(1.0_f64, |a, c| a.max(c.abs()));
            let has_negation = vertices
                .iter()
                .any(|u| u.0.iter().zip(&v.0).all(|(a, b)| (a + b).abs() <= tol * scale));
            if !has_negation {
                return Err(Error::NonSymmetric(i));
            }
            let duplicate = vertices[..i]
                .iter()
                .any(|u| u.0.iter().zip(&v.0).all(|(a, b)| (a - b).abs() <= tol * scale));
            if duplicate {
                return Err(Error::NotExtreme(i));
            }
        }

        if vertices.len() < 2 * dim || linalg::rank(&vertices.iter().map(|v| v.0.clone()).collect::<Vec<_>>(), 1e-10) < dim {
            return Err(Error::Degenerate(format!(
                "{} vertices do not span a {dim}-dimensional ball",
                vertices.len()
            )));
        }

        let functionals = enumerate_facet_functionals(&vertices, dim, tol);
        if functionals.is_empty() {
            return Err(Error::Degenerate("no supporting hyperplanes found".into()));
        }

        let facets: Vec<Facet> = functionals
            .into_iter()
            .map(|f| {
                let vertex_ids = vertices
                    .iter()
                    .enumerate()
                    .filter(|(_, v)| (f.pairing(&v.0) - 1.0).abs() <= tol)
                    .map(|(i, _)| i)
                    .collect();
                Facet { functional: f, vertex_ids }
            })
            .collect();

        // A vertex is extreme iff it is on the boundary and the functionals of
        // its incident facets span the whole dual space.
        let mut facets_at_vertex = vec![Vec::new(); vertices.len()];
        for (j, facet) in facets.iter().enumerate() {
            for &i in &facet.vertex_ids {
                facets_at_vertex[i].push(j);
            }
        }
        for (i, incident) in facets_at_vertex.iter().enumerate() {
            let normals: Vec<Vec<f64>> =
                incident.iter().map(|&j| facets[j].functional.0.clone()).collect();
            if incident.len() < dim || linalg::rank(&normals, 1e-9) < dim {
                return Err(Error::NotExtreme(i));
            }
        }

        let vertex_rows = vertices.iter().flat_map(|v| v.0.iter().copied()).collect();
        let facet_rows = facets.iter().flat_map(|f| f.functional.0.iter().copied()).collect();
        let pairs = facets_at_vertex
            .iter()
            .enumerate()
            .flat_map(|(i, fs)| fs.iter().map(move |&j| (i, j)))
            .collect();

        Ok(PolyhedralSpace {
            dim,
            vertices,
            facets,
            tol,
            vertex_rows,
            facet_rows,
            pairs,
            facets_at_vertex,
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn tol(&self) -> f64 {
        self.tol
    }

    pub fn vertices(&self) -> &[Point] {
        &self.vertices
    }

    pub fn facets(&self) -> &[Facet] {
        &self.facets
    }

    /// Facet ids incident to a vertex, in facet order.
    pub fn facets_at(&self, vertex_id: usize) -> &[usize] {
        &self.facets_at_vertex[vertex_id]
    }

    /// Index of the vertex `-v` for vertex `v`.
    pub fn antipode(&self, vertex_id: usize) -> usize {
        let v = &self.vertices[vertex_id].0;
        let scale = v.iter().fold(1.0_f64, |a, c| a.max(c.abs()));
        self.vertices
            .iter()
            .position(|u| u.0.iter().zip(v).all(|(a, b)| (a + b).abs() <= self.tol * scale))
            .expect("vertex set is symmetric")
    }

    pub(crate) fn vertex_rows(&self) -> &[f64] {
        &self.vertex_rows
    }

    pub(crate) fn facet_rows(&self) -> &[f64] {
        &self.facet_rows
    }

    pub(crate) fn pair_slice(&self) -> &[(usize, usize)] {
        &self.pairs
    }

    fn check_dim(&self, found: usize) -> Result<()> {
        if found != self.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, found });
        }
        Ok(())
    }

    /// Minkowski functional of the unit ball.
    pub fn norm(&self, x: &[f64]) -> Result<f64> {
        self.check_dim(x.len())?;
        Ok(self.norm_unchecked(x))
    }

    pub(crate) fn norm_unchecked(&self, x: &[f64]) -> f64 {
        self.facet_rows
            .chunks_exact(self.dim)
            .map(|f| linalg::dot(f, x))
            .fold(0.0_f64, f64::max)
    }

    pub fn dual_norm(&self, f: &Functional) -> Result<f64> {
        self.check_dim(f.dim())?;
        Ok(self
            .vertex_rows
            .chunks_exact(self.dim)
            .map(|v| f.pairing(v))
            .fold(0.0_f64, f64::max))
    }

    fn check_unit(&self, x: &[f64]) -> Result<()> {
        self.check_dim(x.len())?;
        let n = self.norm_unchecked(x);
        if (n - 1.0).abs() > self.tol {
            return Err(Error::NotUnitNorm(n));
        }
        Ok(())
    }

    /// Facet ids whose functional equals 1 at the unit vector `x`.
    pub(crate) fn support_ids(&self, x: &[f64]) -> Vec<usize> {
        self.facet_rows
            .chunks_exact(self.dim)
            .enumerate()
            .filter(|(_, f)| (linalg::dot(f, x) - 1.0).abs() <= self.tol)
            .map(|(j, _)| j)
            .collect()
    }

    pub fn support_set(&self, x: &[f64]) -> Result<SupportSet> {
        self.check_unit(x)?;
        let facet_ids = self.support_ids(x);
        debug_assert!(!facet_ids.is_empty());
        Ok(SupportSet {
            base_point: Point(x.to_vec()),
            functionals: facet_ids.iter().map(|&j| self.facets[j].functional.clone()).collect(),
            facet_ids,
        })
    }

    pub fn is_smooth_point(&self, x: &[f64]) -> Result<bool> {
        Ok(self.support_set(x)?.len() == 1)
    }

    pub fn extreme_pairs(&self) -> ExtremePairSet {
        ExtremePairSet { pairs: self.pairs.clone() }
    }

    /// Scales a nonzero vector onto the unit sphere.
    pub fn normalize(&self, x: &[f64]) -> Result<Point> {
        let n = self.norm(x)?;
        if n <= 0.0 {
            return Err(Error::InvalidInput("cannot normalize the zero vector".into()));
        }
        Ok(Point(x.iter().map(|c| c / n).collect()))
    }
}

fn enumerate_facet_functionals(vertices: &[Point], dim: usize, tol: f64) -> Vec<Functional> {
    let mut found: Vec<Functional> = Vec::new();
    let ones = vec![1.0; dim];
    for subset in Combinations::new(vertices.len(), dim) {
        let rows: Vec<Vec<f64>> = subset.iter().map(|&i| vertices[i].0.clone()).collect();
        let Some(coeffs) = linalg::solve(&rows, &ones, PIVOT_EPS) else {
            continue;
        };
        if coeffs.iter().any(|c| !c.is_finite()) {
            continue;
        }
        let f = Functional(coeffs);
        if vertices.iter().any(|v| f.pairing(&v.0) > 1.0 + tol) {
            continue;
        }
        let seen = found
            .iter()
            .any(|g| g.0.iter().zip(&f.0).all(|(a, b)| (a - b).abs() < DEDUP_TOL));
        if !seen {
            found.push(f);
        }
    }
    found
}

/// Lexicographic k-subsets of `0..n`.
struct Combinations {
    n: usize,
    idx: Vec<usize>,
    done: bool,
}

impl Combinations {
    fn new(n: usize, k: usize) -> Self {
        Combinations { n, idx: (0..k).collect(), done: k > n }
    }
}

impl Iterator for Combinations {
    type Item = Vec<usize>;

    fn next(&mut self) -> Option<Vec<usize>> {
        if self.done {
            return None;
        }
        let out = self.idx.clone();
        let k = self.idx.len();
        let mut i = k;
        loop {
            if i == 0 {
                self.done = true;
                break;
            }
            i -= 1;
            if self.idx[i] < self.n - k + i {
                self.idx[i] += 1;
                for j in i + 1..k {
                    self.idx[j] = self.idx[j - 1] + 1;
                }
                break;
            }
        }
        Some(out)
    }
}

/// On-disk description of a space.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SpaceJson {
    pub dim: usize,
    pub vertices: Vec<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tol: Option<f64>,
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub symmetrize: bool,
}

impl SpaceJson {
    pub fn from_space(space: &PolyhedralSpace) -> Self {
        SpaceJson {
            dim: space.dim,
            vertices: space.vertices.iter().map(|v| v.0.clone()).collect(),
            tol: Some(space.tol),
            symmetrize: false,
        }
    }

    pub fn into_space(self) -> Result<PolyhedralSpace> {
        let mut vertices: Vec<Point> = Vec::with_capacity(self.vertices.len() * 2);
        for v in self.vertices {
            if v.len() != self.dim {
                return Err(Error::DimensionMismatch { expected: self.dim, found: v.len() });
            }
            vertices.push(Point(v));
        }
        if self.symmetrize {
            let negated: Vec<Point> = vertices.iter().map(|v| v.scaled(-1.0)).collect();
            vertices.extend(negated);
        }
        PolyhedralSpace::build(vertices, self.tol.unwrap_or(DEFAULT_TOL))
    }
}

pub fn space_from_json(text: &str) -> Result<PolyhedralSpace> {
    serde_json::from_str::<SpaceJson>(text)?.into_space()
}

pub fn space_to_json(space: &PolyhedralSpace) -> String {
    serde_json::to_string_pretty(&SpaceJson::from_space(space)).expect("space serializes")
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn pts(v: &[&[f64]]) -> Vec<Point> {
        v.iter().map(|c| Point(c.to_vec())).collect()
    }

    fn hexagon() -> PolyhedralSpace {
        let v = (0..6)
            .map(|j| Point(vec![(j as f64 * PI / 3.0).cos(), (j as f64 * PI / 3.0).sin()]))
            .collect();
        PolyhedralSpace::build(v, DEFAULT_TOL).unwrap()
    }

    fn square() -> PolyhedralSpace {
        PolyhedralSpace::build(
            pts(&[&[1.0, 0.0], &[0.0, 1.0], &[-1.0, 0.0], &[0.0, -1.0]]),
            DEFAULT_TOL,
        )
        .unwrap()
    }

    #[test]
    fn combinations_count() {
        assert_eq!(Combinations::new(6, 3).count(), 20);
        assert_eq!(Combinations::new(3, 4).count(), 0);
    }

    #[test]
    fn hexagon_has_six_edges() {
        let s = hexagon();
        assert_eq!(s.facets().len(), 6);
        assert!(s.facets().iter().all(|f| f.vertex_ids.len() == 2));
    }

    #[test]
    fn hexagon_norms() {
        let s = hexagon();
        assert!((s.norm(&[1.0, 0.0]).unwrap() - 1.0).abs() < 1e-12);
        assert!((s.norm(&[0.0, 1.0]).unwrap() - 2.0 / 3f64.sqrt()).abs() < 1e-12);
        assert_eq!(s.norm(&[0.0, 0.0]).unwrap(), 0.0);
        assert!((s.dual_norm(&Functional(vec![1.0, 0.0])).unwrap() - 1.0).abs() < 1e-12);
        assert_eq!(s.dual_norm(&Functional(vec![0.0, 0.0])).unwrap(), 0.0);
    }

    #[test]
    fn square_dual_norm() {
        let s = square();
        assert!((s.dual_norm(&Functional(vec![1.0, 1.0])).unwrap() - 1.0).abs() < 1e-12);
        assert_eq!(s.extreme_pairs().len(), 8);
    }

    #[test]
    fn support_sets_on_hexagon() {
        let s = hexagon();
        assert_eq!(s.support_set(&[1.0, 0.0]).unwrap().len(), 2);
        assert!(!s.is_smooth_point(&[1.0, 0.0]).unwrap());
        let mid = s.normalize(&[0.75, 3f64.sqrt() / 4.0]).unwrap();
        assert_eq!(s.support_set(&mid.0).unwrap().len(), 1);
        assert!(s.is_smooth_point(&mid.0).unwrap());
        assert_eq!(s.extreme_pairs().len(), 12);
    }

    #[test]
    fn support_set_requires_unit_norm() {
        let s = hexagon();
        assert!(matches!(s.support_set(&[2.0, 0.0]), Err(Error::NotUnitNorm(_))));
    }

    #[test]
    fn dimension_mismatch() {
        let s = hexagon();
        assert!(matches!(s.norm(&[1.0, 0.0, 0.0]), Err(Error::DimensionMismatch { .. })));
        assert!(matches!(
            s.dual_norm(&Functional(vec![1.0])),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn rejects_non_symmetric() {
        let r = PolyhedralSpace::build(
            pts(&[&[1.0, 0.0], &[0.0, 1.0], &[-1.0, 0.0], &[0.0, -1.0], &[0.5, 0.9]]),
            DEFAULT_TOL,
        );
        assert!(matches!(r, Err(Error::NonSymmetric(4))));
    }

    #[test]
    fn rejects_degenerate() {
        let r = PolyhedralSpace::build(
            pts(&[&[1.0, 1.0], &[-1.0, -1.0], &[2.0, 2.0], &[-2.0, -2.0]]),
            DEFAULT_TOL,
        );
        assert!(matches!(r, Err(Error::Degenerate(_))));
    }

    #[test]
    fn rejects_interior_vertex() {
        let r = PolyhedralSpace::build(
            pts(&[
                &[1.0, 0.0],
                &[0.0, 1.0],
                &[-1.0, 0.0],
                &[0.0, -1.0],
                &[0.1, 0.1],
                &[-0.1, -0.1],
            ]),
            DEFAULT_TOL,
        );
        assert!(matches!(r, Err(Error::NotExtreme(4))));
    }

    #[test]
    fn rejects_vertex_on_edge() {
        let r = PolyhedralSpace::build(
            pts(&[
                &[1.0, 0.0],
                &[0.0, 1.0],
                &[-1.0, 0.0],
                &[0.0, -1.0],
                &[0.5, 0.5],
                &[-0.5, -0.5],
            ]),
            DEFAULT_TOL,
        );
        assert!(matches!(r, Err(Error::NotExtreme(4))));
    }

    #[test]
    fn json_round_trip_with_symmetrize() {
        let text = r#"{"dim": 2, "vertices": [[1,0],[0,1]], "symmetrize": true}"#;
        let s = space_from_json(text).unwrap();
        assert_eq!(s.vertices().len(), 4);
        let again = space_from_json(&space_to_json(&s)).unwrap();
        assert_eq!(again.vertices(), s.vertices());
        assert_eq!(again.facets(), s.facets());
    }
}
