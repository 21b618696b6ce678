//! Deterministic SVG drawings of triangulations and subdivisions.

use std::fmt::Write as _;

use toric_core::{lattice_points, LatticePoint, LatticePolygon, Subdivision, Triangulation};

/// Pixels per lattice unit.
pub const UNIT: i64 = 40;
const MARGIN: i64 = 20;

/// A face to draw, with an optional label at its vertex centroid.
#[derive(Clone, Debug)]
pub struct Face {
    pub vertices: Vec<LatticePoint>,
    pub class: &'static str,
    pub label: Option<String>,
}

/// Everything that goes into one drawing.
#[derive(Clone, Debug)]
pub struct Figure {
    pub polygon: LatticePolygon,
    pub faces: Vec<Face>,
    /// Marked points, drawn as filled dots.
    pub dots: Vec<LatticePoint>,
}

impl Figure {
    pub fn from_triangulation(d: &Triangulation, dots: Vec<LatticePoint>) -> Self {
        let faces = d
            .triangles()
            .iter()
            .map(|t| Face { vertices: d.triangle_points(t).to_vec(), class: "triangle", label: None })
            .collect();
        Self { polygon: d.polygon().clone(), faces, dots }
    }

    pub fn from_subdivision(s: &Subdivision, dots: Vec<LatticePoint>) -> Self {
        let faces = s
            .cells()
            .iter()
            .map(|c| Face { vertices: c.polygon.vertices().to_vec(), class: "cell", label: c.label.clone() })
            .collect();
        Self { polygon: s.polygon().clone(), faces, dots }
    }
}

/// Renders a figure with `y` pointing up.
pub fn render(fig: &Figure) -> String {
    let (lo, hi) = fig.polygon.bounding_box();
    let width = (hi.x - lo.x) * UNIT + 2 * MARGIN;
    let height = (hi.y - lo.y) * UNIT + 2 * MARGIN;
    let px = |p: LatticePoint| ((p.x - lo.x) * UNIT + MARGIN, (hi.y - p.y) * UNIT + MARGIN);
    let points =
        |vs: &[LatticePoint]| vs.iter().map(|&v| px(v)).map(|(x, y)| format!("{x},{y}")).collect::<Vec<_>>().join(" ");

    let mut s = String::new();
    writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" viewBox="0 0 {width} {height}">"#
    )
    .unwrap();
    writeln!(s, r#"  <rect width="{width}" height="{height}" fill="white"/>"#).unwrap();
    for p in lattice_points(&fig.polygon) {
        let (x, y) = px(p);
        writeln!(s, r#"  <circle class="lattice" cx="{x}" cy="{y}" r="2" fill="gray"/>"#).unwrap();
    }
    for f in &fig.faces {
        writeln!(
            s,
            r#"  <polygon class="{}" points="{}" fill="none" stroke="black" stroke-width="1"/>"#,
            f.class,
            points(&f.vertices)
        )
        .unwrap();
    }
    writeln!(
        s,
        r#"  <polygon class="boundary" points="{}" fill="none" stroke="black" stroke-width="2"/>"#,
        points(fig.polygon.vertices())
    )
    .unwrap();
    for &p in &fig.dots {
        let (x, y) = px(p);
        writeln!(s, r#"  <circle class="singular" cx="{x}" cy="{y}" r="5" fill="black"/>"#).unwrap();
    }
    for f in &fig.faces {
        let Some(label) = &f.label else { continue };
        let n = f.vertices.len() as i64;
        let (sx, sy) = f.vertices.iter().map(|&v| px(v)).fold((0, 0), |(a, b), (x, y)| (a + x, b + y));
        writeln!(
            s,
            r#"  <text class="label" data-label="{}" x="{}" y="{}" font-size="14" text-anchor="middle">{}</text>"#,
            escape(label),
            sx / n,
            sy / n,
            label_markup(label)
        )
        .unwrap();
    }
    s.push_str("</svg>\n");
    s
}

/// `S_1,1` becomes `S` with subscript `1,1`.
fn label_markup(label: &str) -> String {
    match label.split_once('_') {
        Some((base, sub)) => {
            format!(r#"{}<tspan baseline-shift="sub" font-size="10">{}</tspan>"#, escape(base), escape(sub))
        }
        None => escape(label),
    }
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;").replace('"', "&quot;")
}
