//! Constructors for the named polyhedral spaces with known index values or bounds.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::polytope::{PolyhedralSpace, Point, DEFAULT_TOL};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum GallerySpec {
    RegularPolygon { n: usize },
    Prism { base: Box<GallerySpec>, half_height: f64 },
    PyramidPrism,
    Drum { n: usize },
    HexagonGamma { gamma: f64 },
    OctagonXi { xi: f64 },
}

impl GallerySpec {
    pub fn build(&self) -> Result<PolyhedralSpace> {
        match self {
            GallerySpec::RegularPolygon { n } => regular_polygon_space(*n),
            GallerySpec::Prism { base, half_height } => prism_space(&base.build()?, *half_height),
            GallerySpec::PyramidPrism => pyramid_prism_space(),
            GallerySpec::Drum { n } => drum_space(*n),
            GallerySpec::HexagonGamma { gamma } => hexagon_gamma_space(*gamma),
            GallerySpec::OctagonXi { xi } => octagon_xi_space(*xi),
        }
    }

    pub fn prism(self, half_height: f64) -> GallerySpec {
        GallerySpec::Prism { base: Box::new(self), half_height }
    }

    pub fn label(&self) -> String {
        match self {
            GallerySpec::RegularPolygon { n } => format!("regular_{}-gon", 2 * n),
            GallerySpec::Prism { base, half_height } => {
                format!("prism({}, h={half_height})", base.label())
            }
            GallerySpec::PyramidPrism => "pyramid_prism".into(),
            GallerySpec::Drum { n } => format!("drum(n={n})"),
            GallerySpec::HexagonGamma { gamma } => format!("hexagon_gamma({gamma})"),
            GallerySpec::OctagonXi { xi } => format!("octagon_xi({xi})"),
        }
    }
}

fn build(vertices: Vec<Vec<f64>>) -> Result<PolyhedralSpace> {
    PolyhedralSpace::build(vertices.into_iter().map(Point).collect(), DEFAULT_TOL)
}

fn polygon_vertices(n: usize) -> Vec<Vec<f64>> {
    (0..2 * n)
        .map(|j| {
            let t = j as f64 * PI / n as f64;
            vec![t.cos(), t.sin()]
        })
        .collect()
}

/// Regular 2n-gon with vertices at angles `jπ/n`, `j = 0..2n`.
pub fn regular_polygon_space(n: usize) -> Result<PolyhedralSpace> {
    if n < 2 {
        return Err(Error::BadParameter(format!("regular polygon needs n >= 2, got {n}")));
    }
    build(polygon_vertices(n))
}

/// Right prism over a planar ball, with the base placed at heights `±h`.
pub fn prism_space(base: &PolyhedralSpace, h: f64) -> Result<PolyhedralSpace> {
    if base.dim() != 2 {
        return Err(Error::BadParameter(format!("prism base must be 2-d, got {}", base.dim())));
    }
    if !(h > 0.0 && h.is_finite()) {
        return Err(Error::BadParameter(format!("prism half-height must be positive, got {h}")));
    }
    let mut vertices = Vec::with_capacity(2 * base.vertices().len());
    for z in [h, -h] {
        for v in base.vertices() {
            vertices.push(vec![v.0[0], v.0[1], z]);
        }
    }
    build(vertices)
}

/// Square prism `±(±1,±1,1)` capped by apexes `±(0,0,2)`.
pub fn pyramid_prism_space() -> Result<PolyhedralSpace> {
    let mut vertices = Vec::new();
    for s in [1.0, -1.0] {
        for (x, y) in [(1.0, 1.0), (-1.0, 1.0), (-1.0, -1.0), (1.0, -1.0)] {
            vertices.push(vec![s * x, s * y, s]);
        }
    }
    vertices.push(vec![0.0, 0.0, 2.0]);
    vertices.push(vec![0.0, 0.0, -2.0]);
    build(vertices)
}

/// Prism over the regular 2n-gon at heights `±1` capped by apexes `(0,0,±2)`.
pub fn drum_space(n: usize) -> Result<PolyhedralSpace> {
    if n < 3 {
        return Err(Error::BadParameter(format!("drum space needs n >= 3, got {n}")));
    }
    let mut vertices = Vec::new();
    for z in [1.0, -1.0] {
        for v in polygon_vertices(n) {
            vertices.push(vec![v[0], v[1], z]);
        }
    }
    vertices.push(vec![0.0, 0.0, 2.0]);
    vertices.push(vec![0.0, 0.0, -2.0]);
    build(vertices)
}

fn check_open_unit(name: &str, value: f64) -> Result<()> {
    if !(value > 0.0 && value < 1.0) {
        return Err(Error::BadParameter(format!("{name} must lie in (0, 1), got {value}")));
    }
    Ok(())
}

/// Hexagon with norm `max{|y|, |x| + (1-γ)|y|}`.
pub fn hexagon_gamma_space(gamma: f64) -> Result<PolyhedralSpace> {
    check_open_unit("gamma", gamma)?;
    build(vec![
        vec![1.0, 0.0],
        vec![gamma, 1.0],
        vec![-gamma, 1.0],
        vec![-1.0, 0.0],
        vec![-gamma, -1.0],
        vec![gamma, -1.0],
    ])
}

/// Octagon with norm `max{|x|, |y|, (|x|+|y|)/(1+ξ)}`.
pub fn octagon_xi_space(xi: f64) -> Result<PolyhedralSpace> {
    check_open_unit("xi", xi)?;
    build(vec![
        vec![1.0, xi],
        vec![xi, 1.0],
        vec![-xi, 1.0],
        vec![-1.0, xi],
        vec![-1.0, -xi],
        vec![-xi, -1.0],
        vec![xi, -1.0],
        vec![1.0, -xi],
    ])
}

pub fn hexagon_gamma_norm(gamma: f64, x: &[f64]) -> f64 {
    x[1].abs().max(x[0].abs() + (1.0 - gamma) * x[1].abs())
}

pub fn octagon_xi_norm(xi: f64, x: &[f64]) -> f64 {
    x[0].abs().max(x[1].abs()).max((x[0].abs() + x[1].abs()) / (1.0 + xi))
}

/// Closed form of the index of the regular 2n-gon and of the prisms and drums over it.
pub fn polygon_index_closed_form(n: usize) -> f64 {
    let t = PI / (2 * n) as f64;
    let a = if n % 2 == 1 { t.sin() } else { t.tan() };
    (a * a + 1.0).sqrt()
}

/// Published lower bound for the prism over the γ-hexagon.
pub fn hexagon_gamma_prism_bound(gamma: f64) -> f64 {
    if gamma <= 0.5 {
        (1.0 / (3.0 - 2.0 * gamma).powi(2) + 1.0).sqrt()
    } else {
        ((1.0 - gamma).powi(2) + 1.0).sqrt()
    }
}

/// Published lower bound for the prism over the ξ-octagon.
pub fn octagon_xi_prism_bound(xi: f64) -> f64 {
    if xi > (1.0 - xi) / (1.0 + xi) {
        (1.0 / (2.0 + xi).powi(2) + 1.0).sqrt()
    } else {
        (((1.0 + xi) / (3.0 + xi)).powi(2) + 1.0).sqrt()
    }
}

/// The spaces exercised by the property suites.
pub fn standard_gallery() -> Vec<GallerySpec> {
    use GallerySpec::*;
    vec![
        RegularPolygon { n: 2 },
        RegularPolygon { n: 3 },
        RegularPolygon { n: 4 },
        RegularPolygon { n: 5 },
        HexagonGamma { gamma: 0.5 },
        OctagonXi { xi: 0.25 },
        RegularPolygon { n: 3 }.prism(1.0),
        PyramidPrism,
        Drum { n: 3 },
        HexagonGamma { gamma: 0.3 }.prism(1.0),
        OctagonXi { xi: 0.5 }.prism(1.0),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn polygon_shapes() {
        let hex = regular_polygon_space(3).unwrap();
        assert_eq!(hex.vertices().len(), 6);
        let v1 = &hex.vertices()[1].0;
        assert!((v1[0] - 0.5).abs() < 1e-15 && (v1[1] - 3f64.sqrt() / 2.0).abs() < 1e-15);
        let sq = regular_polygon_space(2).unwrap();
        assert_eq!(sq.facets().len(), 4);
        assert!((sq.norm(&[1.0, 1.0]).unwrap() - 2.0).abs() < 1e-12);
        assert_eq!(regular_polygon_space(4).unwrap().facets().len(), 8);
        assert!(matches!(regular_polygon_space(1), Err(Error::BadParameter(_))));
    }

    #[test]
    fn prism_shapes() {
        let hex = regular_polygon_space(3).unwrap();
        let p = prism_space(&hex, 1.0).unwrap();
        assert_eq!((p.vertices().len(), p.facets().len()), (12, 8));
        let g = prism_space(&hexagon_gamma_space(0.5).unwrap(), 1.0).unwrap();
        assert_eq!((g.vertices().len(), g.facets().len()), (12, 8));
        let sq = prism_space(&regular_polygon_space(2).unwrap(), 2.0).unwrap();
        assert_eq!((sq.vertices().len(), sq.facets().len()), (8, 6));
        assert!(prism_space(&hex, 0.0).is_err());
        assert!(prism_space(&p, 1.0).is_err());
    }

    #[test]
    fn pyramid_prism_shape() {
        let s = pyramid_prism_space().unwrap();
        assert_eq!(s.vertices().len(), 10);
        assert_eq!(s.facets().len(), 12);
        assert!((s.norm(&[0.0, 0.0, 2.0]).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn drum_shape() {
        let s = drum_space(3).unwrap();
        assert_eq!(s.vertices().len(), 14);
        assert_eq!(s.facets().len(), 18);
        assert!((s.norm(&[0.0, 0.0, 2.0]).unwrap() - 1.0).abs() < 1e-12);
        assert!(!s.is_smooth_point(&[0.0, 0.0, 2.0]).unwrap());
        assert_eq!(s.support_set(&[0.0, 0.0, 2.0]).unwrap().len(), 6);
        assert!(drum_space(2).is_err());
    }

    #[test]
    fn gamma_and_xi_norms() {
        let h = hexagon_gamma_space(0.5).unwrap();
        assert!((h.norm(&[1.0, 0.0]).unwrap() - 1.0).abs() < 1e-12);
        assert!((h.norm(&[0.5, 1.0]).unwrap() - 1.0).abs() < 1e-12);
        assert!((h.norm(&[1.0, 1.0]).unwrap() - 1.5).abs() < 1e-12);
        let o = octagon_xi_space(0.5).unwrap();
        assert!((o.norm(&[1.0, 0.5]).unwrap() - 1.0).abs() < 1e-12);
        assert!((o.norm(&[1.0, 1.0]).unwrap() - 2.0 / 1.5).abs() < 1e-12);
        let o = octagon_xi_space(0.25).unwrap();
        assert!((o.norm(&[1.0, 0.0]).unwrap() - 1.0).abs() < 1e-12);
        assert!(hexagon_gamma_space(1.0).is_err());
        assert!(octagon_xi_space(0.0).is_err());
    }

    #[test]
    fn closed_forms() {
        assert!((polygon_index_closed_form(2) - 2f64.sqrt()).abs() < 1e-12);
        assert!((polygon_index_closed_form(3) - 1.118034).abs() < 1e-6);
        assert!((polygon_index_closed_form(4) - 1.082392).abs() < 1e-6);
        assert!((polygon_index_closed_form(5) - 1.046657).abs() < 1e-6);
        assert!((hexagon_gamma_prism_bound(0.5) - 1.25f64.sqrt()).abs() < 1e-12);
        assert!((hexagon_gamma_prism_bound(0.75) - 1.0625f64.sqrt()).abs() < 1e-12);
        assert!((octagon_xi_prism_bound(0.5) - 1.16f64.sqrt()).abs() < 1e-12);
        assert!((octagon_xi_prism_bound(0.25) - 1.071415).abs() < 1e-6);
    }

    #[test]
    fn spec_json_shape() {
        let spec = GallerySpec::RegularPolygon { n: 3 }.prism(2.0);
        let text = serde_json::to_string(&spec).unwrap();
        let back: GallerySpec = serde_json::from_str(&text).unwrap();
        assert_eq!(back, spec);
    }
}
