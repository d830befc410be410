//! Lower bounds on the Davis-Wielandt index from the facet structure at each vertex.
//!
//! Every unit-norm operator attains its norm at some vertex `v`, and then
//! `dw(T) ≥ √(f(Tv)² + 1)` for every facet functional `f` incident to `v`.
//! Minimizing `max_f |f(x)|` over the unit sphere therefore bounds the index
//! from below. The sphere is the union of the facets, and on a facet
//! `conv{u_k}` the inner problem is the linear program
//!
//! ```text
//! min t  s.t.  -t ≤ f_r(Σ λ_k u_k) ≤ t,  λ ≥ 0,  Σ λ_k = 1.
//! ```

use serde::Serialize;

use crate::error::{Error, Result};
use crate::polytope::{Point, PolyhedralSpace};
use crate::simplex::{self, Constraint, LpOutcome, Relation};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VertexCertificate {
    pub vertex_id: usize,
    pub xi: f64,
    /// `min_{‖x‖=1} max_r |f_r(x)|`.
    pub t_star: f64,
    pub functionals_used: Vec<usize>,
    pub minimizer: Point,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FacetMinimax {
    pub facet_id: usize,
    pub t: f64,
}

/// Solves the minimax program over one facet for the given functionals.
pub fn facet_minimax(space: &PolyhedralSpace, facet_id: usize, functionals: &[usize]) -> Result<(f64, Point)> {
    let facet = &space.facets()[facet_id];
    let verts: Vec<&[f64]> = facet.vertex_ids.iter().map(|&i| space.vertices()[i].coords()).collect();
    let k = verts.len();
    // Variables: λ_1..λ_k, t.
    let mut cost = vec![0.0; k + 1];
    cost[k] = 1.0;
    let mut constraints = Vec::with_capacity(2 * functionals.len() + 1);
    let mut sum_row = vec![1.0; k + 1];
    sum_row[k] = 0.0;
    constraints.push(Constraint { coeffs: sum_row, relation: Relation::Eq, rhs: 1.0 });
    for &j in functionals {
        let f = &space.facets()[j].functional;
        let vals: Vec<f64> = verts.iter().map(|u| f.pairing(u)).collect();
        for sign in [1.0, -1.0] {
            let mut row: Vec<f64> = vals.iter().map(|v| sign * v).collect();
            row.push(-1.0);
            constraints.push(Constraint { coeffs: row, relation: Relation::Le, rhs: 0.0 });
        }
    }
    match simplex::solve(&cost, &constraints)? {
        LpOutcome::Optimal { x, objective } => {
            let d = space.dim();
            let mut point = vec![0.0; d];
            for (lambda, u) in x[..k].iter().zip(&verts) {
                for (p, c) in point.iter_mut().zip(u.iter()) {
                    *p += lambda * c;
                }
            }
            Ok((objective.max(0.0), Point(point)))
        }
        other => Err(Error::LpFailure(format!("facet {facet_id}: {other:?}"))),
    }
}

/// Facet ids with one representative per `±F` pair.
fn half_facets(space: &PolyhedralSpace) -> Vec<usize> {
    let facets = space.facets();
    let mut keep = Vec::with_capacity(facets.len() / 2 + 1);
    for (j, f) in facets.iter().enumerate() {
        let neg = f.functional.negated();
        let twin_before = facets[..j]
            .iter()
            .any(|g| g.functional.0.iter().zip(&neg.0).all(|(a, b)| (a - b).abs() < 1e-7));
        if !twin_before {
            keep.push(j);
        }
    }
    keep
}

pub fn vertex_certificate(space: &PolyhedralSpace, vertex_id: usize) -> Result<VertexCertificate> {
    if vertex_id >= space.vertices().len() {
        return Err(Error::BadParameter(format!(
            "vertex id {vertex_id} out of range (space has {} vertices)",
            space.vertices().len()
        )));
    }
    let used = space.facets_at(vertex_id).to_vec();
    let mut best: Option<(f64, Point)> = None;
    for j in half_facets(space) {
        let (t, x) = facet_minimax(space, j, &used)?;
        if best.as_ref().is_none_or(|(bt, _)| t < *bt) {
            best = Some((t, x));
        }
    }
    let (t_star, minimizer) = best.expect("space has facets");
    Ok(VertexCertificate {
        vertex_id,
        xi: (t_star * t_star + 1.0).sqrt(),
        t_star,
        functionals_used: used,
        minimizer,
    })
}

/// Certificates for one vertex of every `±v` pair.
pub fn all_certificates(space: &PolyhedralSpace) -> Result<Vec<VertexCertificate>> {
    (0..space.vertices().len())
        .filter(|&i| space.antipode(i) > i)
        .map(|i| vertex_certificate(space, i))
        .collect()
}

/// `min_i ξ_i`, a lower bound on both the plain and the modified index.
pub fn index_lower_bound(space: &PolyhedralSpace) -> Result<f64> {
    Ok(all_certificates(space)?.iter().map(|c| c.xi).fold(f64::INFINITY, f64::min))
}
