use std::io::Write;

use super::graph::{ComponentSummary, GraphPatch};
use super::model::{dot, SurfaceModel};
use crate::error::Result;

fn comments<W: Write>(out: &mut W, header: &[String]) -> Result<()> {
    for h in header {
        writeln!(out, "# {h}")?;
    }
    Ok(())
}

/// One row per component: seed, size, tree flag, end estimate, direction and residual.
pub fn write_components_csv<W: Write>(mut out: W, header: &[String], comps: &[ComponentSummary]) -> Result<()> {
    comments(&mut out, header)?;
    let mut w = csv::Writer::from_writer(out);
    w.write_record([
        "level", "n1", "n2", "n3", "size", "is_tree", "end_estimate", "dx", "dy", "dz", "residual",
    ])?;
    for c in comps {
        w.write_record(&[
            format!("{:.17e}", c.level),
            c.seed[0].to_string(),
            c.seed[1].to_string(),
            c.seed[2].to_string(),
            c.size.to_string(),
            c.is_tree.to_string(),
            c.end_estimate.to_string(),
            format!("{:.12e}", c.direction[0]),
            format!("{:.12e}", c.direction[1]),
            format!("{:.12e}", c.direction[2]),
            format!("{:.6e}", c.residual),
        ])?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_polyline_csv<W: Write>(mut out: W, header: &[String], points: &[[f64; 3]]) -> Result<()> {
    comments(&mut out, header)?;
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["step", "x", "y", "z"])?;
    for (i, p) in points.iter().enumerate() {
        w.write_record(&[i.to_string(), format!("{:.17e}", p[0]), format!("{:.17e}", p[1]), format!("{:.17e}", p[2])])?;
    }
    w.flush()?;
    Ok(())
}

/// Orthographic picture of a graph patch in the plane of the section.
pub fn write_patch_svg<W: Write>(mut out: W, header: &[String], model: &SurfaceModel, patch: &GraphPatch, a: f64) -> Result<()> {
    let basis = model.plane_basis();
    let mut keys: Vec<_> = patch.dist.keys().copied().collect();
    keys.sort();
    let project = |n: &[i64; 3]| {
        let p = model.embed(n, a);
        (dot(&p, &basis[0]), -dot(&p, &basis[1]))
    };
    let pts: Vec<(f64, f64)> = keys.iter().map(project).collect();
    let (mut x0, mut y0, mut x1, mut y1) = (f64::INFINITY, f64::INFINITY, f64::NEG_INFINITY, f64::NEG_INFINITY);
    for &(x, y) in &pts {
        x0 = x0.min(x);
        y0 = y0.min(y);
        x1 = x1.max(x);
        y1 = y1.max(y);
    }
    if pts.is_empty() {
        (x0, y0, x1, y1) = (0.0, 0.0, 1.0, 1.0);
    }
    let pad = 0.05 * (x1 - x0).max(y1 - y0).max(1.0);
    let (w, h) = (x1 - x0 + 2.0 * pad, y1 - y0 + 2.0 * pad);
    let r = 0.004 * w.max(h);
    writeln!(out, r#"<?xml version="1.0" encoding="UTF-8"?>"#)?;
    for line in header {
        writeln!(out, "<!-- {} -->", line.replace("--", "- -"))?;
    }
    writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" viewBox="{:.6} {:.6} {:.6} {:.6}" width="800" height="{:.0}">"#,
        x0 - pad,
        y0 - pad,
        w,
        h,
        800.0 * h / w
    )?;
    writeln!(out, r##"<g stroke="#335" stroke-width="{:.6}" fill="none">"##, r / 2.0)?;
    let mut edges = patch.edges.clone();
    edges.sort();
    for (n, m) in &edges {
        let (p, q) = (project(n), project(m));
        writeln!(out, r#"<line x1="{:.6}" y1="{:.6}" x2="{:.6}" y2="{:.6}"/>"#, p.0, p.1, q.0, q.1)?;
    }
    writeln!(out, "</g>")?;
    writeln!(out, r##"<g fill="#c33">"##)?;
    for (x, y) in &pts {
        writeln!(out, r#"<circle cx="{x:.6}" cy="{y:.6}" r="{r:.6}"/>"#)?;
    }
    writeln!(out, "</g>\n</svg>")?;
    Ok(())
}
