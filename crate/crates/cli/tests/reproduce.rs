use dwindex::{Point, PolyhedralSpace};
use dwindex_cli::reproduce::{run, Inputs, LABELS};

fn pyramid_with_apex(height: f64) -> PolyhedralSpace {
    let mut vertices = Vec::new();
    for s in [1.0, -1.0] {
        for (x, y) in [(1.0, 1.0), (-1.0, 1.0), (-1.0, -1.0), (1.0, -1.0)] {
            vertices.push(Point::new(vec![s * x, s * y, s]));
        }
    }
    vertices.push(Point::new(vec![0.0, 0.0, height]));
    vertices.push(Point::new(vec![0.0, 0.0, -height]));
    PolyhedralSpace::build(vertices, 1e-9).unwrap()
}

#[test]
fn pyramid_row_passes_on_the_standard_gallery() {
    let inputs = Inputs::standard(42).unwrap();
    let report = run(&inputs, &["pyramid-prism".to_string()]);
    assert_eq!(report.rows.len(), 1);
    assert_eq!(report.rows[0].status, "PASS", "{:?}", report.rows[0]);
}

#[test]
fn wrong_apex_height_fails_the_pyramid_row() {
    let mut inputs = Inputs::standard(42).unwrap();
    inputs.pyramid = pyramid_with_apex(3.0);
    let report = run(&inputs, &["pyramid-prism".to_string()]);
    assert_eq!(report.rows[0].status, "FAIL", "{:?}", report.rows[0]);
    assert_eq!(report.passed, 0);
}

#[test]
fn labels_are_unique() {
    let mut l = LABELS.to_vec();
    l.sort_unstable();
    l.dedup();
    assert_eq!(l.len(), LABELS.len());
}
