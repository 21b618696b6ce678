//! The subcommands, each producing one report per input file.

use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use serde_json::{json, Value};
use toric_core::io::{parse_complex, parse_polygon, parse_triangulation, ComplexFile};
use toric_core::lattice::are_equivalent_up_to_reflection;
use toric_core::regularity::rational_string;
use toric_core::*;

use crate::report::RunReport;
use crate::svg::{self, Figure};

/// Files named on the command line, with directories replaced by their files
/// in filename order.
pub fn expand_inputs(inputs: &[PathBuf]) -> Result<Vec<PathBuf>> {
    let mut files = Vec::new();
    for p in inputs {
        if p.is_dir() {
            let mut entries: Vec<PathBuf> = std::fs::read_dir(p)
                .with_context(|| format!("reading directory {}", p.display()))?
                .map(|e| e.map(|e| e.path()))
                .collect::<std::io::Result<_>>()?;
            entries.retain(|e| e.is_file() && !e.file_name().is_some_and(|n| n.to_string_lossy().starts_with('.')));
            entries.sort();
            files.extend(entries);
        } else {
            files.push(p.clone());
        }
    }
    Ok(files)
}

pub fn for_each_input(inputs: &[PathBuf], f: impl Fn(&Path) -> RunReport) -> Result<Vec<RunReport>> {
    Ok(expand_inputs(inputs)?.iter().map(|p| f(p)).collect())
}

/// Runs `body` on a fresh report, recording its error instead of returning it.
fn run(command: &str, inputs: Vec<String>, body: impl FnOnce(&mut RunReport) -> Result<()>) -> RunReport {
    let mut r = RunReport::new(command, inputs);
    if let Err(e) = body(&mut r) {
        r.error = Some(format!("{e:#}"));
    }
    r
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn within_cap(p: &LatticePolygon, max_area: i64) -> Result<()> {
    let d = p.normalized_area();
    if d > max_area {
        bail!("normalized area {d} exceeds the enumeration cap {max_area} (set TORIC_MAX_AREA to raise it)");
    }
    Ok(())
}

fn polygon_json(p: &LatticePolygon) -> Value {
    let inv = invariants(p);
    json!({
        "vertices": p.to_string(),
        "g": inv.g,
        "l": inv.l,
        "d": inv.d,
        "m": inv.m,
        "b": inv.b,
    })
}

pub fn census(g: u32, d_max: u32, max_area: i64) -> RunReport {
    run("census", vec![], |r| {
        if i64::from(d_max) > max_area {
            bail!("d-max {d_max} exceeds the enumeration cap {max_area} (set TORIC_MAX_AREA to raise it)");
        }
        let polys = enumerate_polygons(g, d_max);
        let mut reps: Vec<&LatticePolygon> = Vec::new();
        for p in &polys {
            if !reps.iter().any(|q| are_equivalent_up_to_reflection(q, p)) {
                reps.push(p);
            }
        }
        r.push("g", g);
        r.push("d_max", d_max);
        r.push("classes", polys.len());
        r.push("classes_up_to_reflection", reps.len());
        r.push("polygons", polys.iter().map(polygon_json).collect::<Vec<_>>());
        Ok(())
    })
}

pub fn triangulate(path: &Path, regular_only: bool, max_area: i64) -> RunReport {
    run("triangulate", vec![path.display().to_string()], |r| {
        let p = parse_polygon(&read(path)?)?;
        within_cap(&p, max_area)?;
        let all = enumerate_triangulations(&p)?;
        let flags: Vec<bool> = all.iter().map(|d| is_regular(d).is_regular()).collect();
        let regular = flags.iter().filter(|&&f| f).count();
        r.push("polygon", polygon_json(&p));
        r.push("triangulations", all.len());
        r.push("regular", regular);
        r.push("non_regular", all.len() - regular);
        let listed: Vec<Value> = all
            .iter()
            .zip(&flags)
            .filter(|(_, &f)| f || !regular_only)
            .map(|(d, &f)| json!({ "regular": f, "triangles": triangles_string(d) }))
            .collect();
        r.push("listed", listed);
        Ok(())
    })
}

fn triangles_string(d: &Triangulation) -> String {
    d.triangles()
        .iter()
        .map(|t| {
            let [a, b, c] = d.triangle_points(t);
            format!("[{a} {b} {c}]")
        })
        .collect::<Vec<_>>()
        .join(" ")
}

fn load_triangulation(path: &Path) -> Result<Triangulation> {
    let text = read(path)?;
    match parse_complex(&text)? {
        ComplexFile::Triangulation(_) => Ok(parse_triangulation(&text)?),
        ComplexFile::Subdivision(_) => bail!("expected a triangulation, found a subdivision"),
    }
}

fn singularity_json(s: &SingularityRecord) -> Value {
    json!({
        "point": s.point.to_string(),
        "kind": s.kind.to_string(),
        "row": s.table_row.to_string(),
        "degree": s.degree,
        "star": s.star.to_string(),
        "family": s.family_tag,
        "nu2": s.nu2,
        "nu3": s.nu3,
        "d1": s.d1_exists,
    })
}

pub fn check(path: &Path, k: u32) -> RunReport {
    run("check", vec![path.display().to_string()], |r| {
        let d = load_triangulation(path)?;
        validate(&d)?;
        let reg = is_regular(&d);
        r.push("polygon", polygon_json(d.polygon()));
        r.push("triangles", d.len());
        r.push("regular", reg.is_regular());
        r.push("slack", rational_string(&reg.slack));
        if !reg.is_regular() {
            r.warnings.push("not regular: the bound assumes a regular triangulation".into());
        }
        r.push("k", k);
        r.push("skew", count_skew_k_sets(&d, k as usize));
        let sing = classify_singularities(&d);
        r.push("singularities", sing.iter().map(singularity_json).collect::<Vec<_>>());
        let bound = lower_bound_nu_k(&d, k)?;
        r.push("bound", bound.to_string());
        r.push("bound_total", bound.total);
        r.warnings.extend(bound.warnings);
        match is_k_delightful(&d, k) {
            Ok(b) => r.push("delightful", b),
            Err(Error::NotDecidable(why)) => {
                r.push("delightful", Value::Null);
                r.warnings.push(format!("delightfulness not decidable: {why}"));
            }
            Err(e) => return Err(e.into()),
        }
        Ok(())
    })
}

pub fn classify_delightful(path: &Path, kmax: u32, max_area: i64) -> RunReport {
    run("classify-delightful", vec![path.display().to_string()], |r| {
        let p = parse_polygon(&read(path)?)?;
        within_cap(&p, max_area)?;
        r.push("polygon", polygon_json(&p));
        r.push("kmax", kmax);
        match find_delightful(&p, kmax) {
            Ok(found) => {
                r.push("decidable", true);
                r.push("classes", found.len());
                r.push("delightful", found.iter().map(triangles_string).collect::<Vec<_>>());
            }
            Err(Error::NotDecidable(why)) => {
                r.push("decidable", false);
                r.warnings.push(format!("not decidable: {why}"));
            }
            Err(e) => return Err(e.into()),
        }
        Ok(())
    })
}

pub fn render(path: &Path, out: &Path, subdivide_at: Option<LatticePoint>) -> RunReport {
    run("render", vec![path.display().to_string()], |r| {
        let figure = match (parse_complex(&read(path)?)?, subdivide_at) {
            (ComplexFile::Triangulation(d), at) => {
                let dots: Vec<LatticePoint> = classify_singularities(&d).iter().map(|s| s.point).collect();
                match at {
                    Some(p) => Figure::from_subdivision(&intermediate_subdivision(&d, p)?, dots),
                    None => Figure::from_triangulation(&d, dots),
                }
            }
            (ComplexFile::Subdivision(s), None) => Figure::from_subdivision(&s, vec![]),
            (ComplexFile::Subdivision(_), Some(_)) => bail!("--subdivide-at needs a triangulation file"),
        };
        std::fs::write(out, svg::render(&figure)).with_context(|| format!("writing {}", out.display()))?;
        r.push("out", out.display().to_string());
        r.push("faces", figure.faces.len());
        r.push("dots", figure.dots.iter().map(|p| p.to_string()).collect::<Vec<_>>());
        Ok(())
    })
}
