//! Text formats for polygons, triangulations, subdivisions and lifting functions.
//!
//! Polygon: one vertex `x y` per line, counter-clockwise. Triangulation: a
//! polygon block, a `triangles:` line, then one triangle per line as three
//! indices into the sorted lattice points. Subdivision: a polygon block, a
//! `cells:` line, then one cell per line as its vertex coordinates
//! `x1 y1 x2 y2 ...`, optionally prefixed by `label=NAME`. Lifting function:
//! one `x y num/den` line per lattice point. Lines starting with `#` and blank
//! lines are ignored everywhere.

use std::fmt::Write as _;

use num::{BigInt, BigRational};

use crate::error::{Error, Result};
use crate::lattice::{LatticePoint, LatticePolygon};
use crate::regularity::{rational_string, LiftingFunction};
use crate::subdivision::{Cell, Subdivision};
use crate::triangulation::Triangulation;

/// A parsed triangulation or subdivision file.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ComplexFile {
    Triangulation(Triangulation),
    Subdivision(Subdivision),
}

fn parse_err(line: usize, message: impl Into<String>) -> Error {
    Error::Parse { line, message: message.into() }
}

/// Non-blank, non-comment lines with their 1-based line numbers.
fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines().enumerate().map(|(i, l)| (i + 1, l.trim())).filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
}

fn parse_ints(line: usize, s: &str) -> Result<Vec<i64>> {
    s.split_whitespace()
        .map(|w| w.parse::<i64>().map_err(|_| parse_err(line, format!("expected an integer, found {w:?}"))))
        .collect()
}

fn parse_vertex(line: usize, s: &str) -> Result<LatticePoint> {
    match parse_ints(line, s)?.as_slice() {
        [x, y] => Ok(LatticePoint::new(*x, *y)),
        _ => Err(parse_err(line, format!("expected \"x y\", found {s:?}"))),
    }
}

fn polygon_from(vertices: Vec<LatticePoint>, first_line: usize) -> Result<LatticePolygon> {
    LatticePolygon::new(vertices).map_err(|e| parse_err(first_line, e.to_string()))
}

/// Parses a polygon file.
pub fn parse_polygon(text: &str) -> Result<LatticePolygon> {
    let mut vertices = Vec::new();
    let mut first = 1;
    for (i, (n, l)) in content_lines(text).enumerate() {
        if i == 0 {
            first = n;
        }
        vertices.push(parse_vertex(n, l)?);
    }
    polygon_from(vertices, first)
}

/// Numbered content lines.
type Lines<'a> = Vec<(usize, &'a str)>;

/// Splits off the polygon block preceding `marker`; returns the polygon, the
/// marker's line number and the remaining lines.
fn split_block<'a>(text: &'a str, marker: &str) -> Result<(LatticePolygon, usize, Lines<'a>)> {
    let mut vertices = Vec::new();
    let mut first = None;
    let mut lines = content_lines(text);
    for (n, l) in lines.by_ref() {
        if l == marker {
            let polygon = polygon_from(vertices, first.unwrap_or(n))?;
            return Ok((polygon, n, lines.collect()));
        }
        first.get_or_insert(n);
        vertices.push(parse_vertex(n, l)?);
    }
    Err(parse_err(text.lines().count().max(1), format!("missing \"{marker}\" line")))
}

/// Parses a triangulation file. Index ranges are checked; the triangulation
/// invariants are not (see [`crate::triangulation::validate`]).
pub fn parse_triangulation(text: &str) -> Result<Triangulation> {
    let (polygon, _, rest) = split_block(text, "triangles:")?;
    let mut tris = Vec::new();
    let npts = crate::lattice::lattice_points(&polygon).len();
    for (n, l) in rest {
        let v = parse_ints(n, l)?;
        let [a, b, c] = v.as_slice() else {
            return Err(parse_err(n, format!("expected three indices, found {l:?}")));
        };
        let mut t = [0usize; 3];
        for (slot, &x) in t.iter_mut().zip([a, b, c]) {
            if x < 0 || x as usize >= npts {
                return Err(parse_err(n, format!("index {x} out of range (polygon has {npts} lattice points)")));
            }
            *slot = x as usize;
        }
        tris.push(t);
    }
    Triangulation::new(polygon, tris)
}

/// Parses a subdivision file.
pub fn parse_subdivision(text: &str) -> Result<Subdivision> {
    let (polygon, _, rest) = split_block(text, "cells:")?;
    let mut cells = Vec::new();
    for (n, l) in rest {
        let (label, coords) = match l.strip_prefix("label=") {
            Some(r) => {
                let (name, tail) = r.split_once(char::is_whitespace).unwrap_or((r, ""));
                (Some(name.to_string()), tail)
            }
            None => (None, l),
        };
        let v = parse_ints(n, coords)?;
        if v.len() % 2 != 0 || v.len() < 6 {
            return Err(parse_err(n, "a cell needs at least three \"x y\" pairs"));
        }
        let verts = v.chunks(2).map(|c| LatticePoint::new(c[0], c[1])).collect();
        let poly = LatticePolygon::new(verts).map_err(|e| parse_err(n, e.to_string()))?;
        cells.push(Cell { polygon: poly, member_triangles: None, label });
    }
    Subdivision::new(polygon, cells)
}

/// Parses either kind of complex, dispatching on the section marker.
pub fn parse_complex(text: &str) -> Result<ComplexFile> {
    if content_lines(text).any(|(_, l)| l == "cells:") {
        parse_subdivision(text).map(ComplexFile::Subdivision)
    } else {
        parse_triangulation(text).map(ComplexFile::Triangulation)
    }
}

/// Parses a lifting function file.
pub fn parse_lifting(text: &str) -> Result<LiftingFunction> {
    let mut heights = std::collections::BTreeMap::new();
    for (n, l) in content_lines(text) {
        let w: Vec<&str> = l.split_whitespace().collect();
        let [x, y, h] = w.as_slice() else {
            return Err(parse_err(n, format!("expected \"x y num/den\", found {l:?}")));
        };
        let p = parse_vertex(n, &format!("{x} {y}"))?;
        let (num, den) = h.split_once('/').unwrap_or((h, "1"));
        let num: BigInt = num.parse().map_err(|_| parse_err(n, format!("bad numerator {num:?}")))?;
        let den: BigInt = den.parse().map_err(|_| parse_err(n, format!("bad denominator {den:?}")))?;
        if den == BigInt::from(0) {
            return Err(parse_err(n, "zero denominator"));
        }
        heights.insert(p, BigRational::new(num, den));
    }
    Ok(LiftingFunction { heights })
}

pub fn write_polygon(p: &LatticePolygon) -> String {
    let mut s = String::new();
    for v in p.vertices() {
        writeln!(s, "{} {}", v.x, v.y).unwrap();
    }
    s
}

pub fn write_triangulation(d: &Triangulation) -> String {
    let mut s = write_polygon(d.polygon());
    s.push_str("triangles:\n");
    for t in d.triangles() {
        writeln!(s, "{} {} {}", t[0], t[1], t[2]).unwrap();
    }
    s
}

pub fn write_subdivision(d: &Subdivision) -> String {
    let mut s = write_polygon(d.polygon());
    s.push_str("cells:\n");
    for c in d.cells() {
        let mut parts: Vec<String> = Vec::new();
        if let Some(l) = &c.label {
            parts.push(format!("label={l}"));
        }
        parts.extend(c.polygon.vertices().iter().map(|v| format!("{} {}", v.x, v.y)));
        writeln!(s, "{}", parts.join(" ")).unwrap();
    }
    s
}

pub fn write_lifting(f: &LiftingFunction) -> String {
    let mut s = String::new();
    for (p, h) in &f.heights {
        writeln!(s, "{} {} {}", p.x, p.y, rational_string(h)).unwrap();
    }
    s
}
