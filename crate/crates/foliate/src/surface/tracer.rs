use std::cmp::Ordering;

use super::faces::{face_membership, faces_of_edge, FaceId};
use super::graph::principal_direction;
use super::model::{cross, dot, norm, strict_cmp, Lattice, SurfaceModel};
use crate::error::{Error, Result};
use crate::numerics::Scalar;

/// Piecewise-linear section curve: one point per crossed surface edge.
#[derive(Clone, Debug)]
pub struct Polyline {
    pub level: f64,
    pub points: Vec<[f64; 3]>,
    /// Face traversed after each point (same length as `points`).
    pub faces: Vec<FaceId>,
    /// Number of steps after which the curve came back to its first face.
    pub closed_after: Option<usize>,
}

const MARGIN: f64 = 1e-12;

/// Where the plane `<H, x> = a` crosses the open edge `q + (0, 1) e_m`, if it does.
fn crossing(model: &SurfaceModel, q: &Lattice, m: usize, a: f64) -> Result<Option<[f64; 3]>> {
    let h = model.h_f64();
    let qf = q.map(|x| x as f64);
    let num = a - dot(&h, &qf);
    let s = num / h[m];
    let scale = (a.abs() + (0..3).map(|i| (h[i] * qf[i]).abs()).sum::<f64>()) / h[m].abs();
    let tol = MARGIN * scale.max(1.0);
    let inside = if s.abs() > tol && (s - 1.0).abs() > tol {
        s > 0.0 && s < 1.0
    } else {
        let hs = model.h();
        let dotq = Scalar::sum(&[
            &hs[0] * &Scalar::from_int(q[0]),
            &hs[1] * &Scalar::from_int(q[1]),
            &hs[2] * &Scalar::from_int(q[2]),
        ]);
        let ss = (Scalar::from_f64(a) - dotq).checked_div(&hs[m])?;
        match (strict_cmp(&ss, &Scalar::zero()), strict_cmp(&ss, &Scalar::one())) {
            (Some(Ordering::Less), _) | (_, Some(Ordering::Greater)) => false,
            (Some(Ordering::Greater), Some(Ordering::Less)) => true,
            _ => {
                return Err(Error::CriticalTrajectory(format!(
                    "level {a} passes through a lattice vertex on edge {q:?} + e{}",
                    m + 1
                )))
            }
        }
    };
    if !inside {
        return Ok(None);
    }
    let mut p = qf;
    p[m] += s;
    Ok(Some(p))
}

fn crossed_edges(model: &SurfaceModel, f: &FaceId, a: f64) -> Result<Vec<((Lattice, usize), [f64; 3])>> {
    let mut out = Vec::with_capacity(2);
    for (q, m) in f.edges() {
        if let Some(p) = crossing(model, &q, m, a)? {
            out.push(((q, m), p));
        }
    }
    Ok(out)
}

/// Midpoint of the segment cut from face `f` by the plane at level `a`.
pub fn start_point(model: &SurfaceModel, f: &FaceId, a: f64) -> Result<[f64; 3]> {
    if !face_membership(f) {
        return Err(Error::Precondition(format!("{f} is not a face of the surface")));
    }
    let ends = crossed_edges(model, f, a)?;
    if ends.len() != 2 {
        return Err(Error::Precondition(format!("level {a} does not cut {f} in a segment")));
    }
    let (p, q) = (ends[0].1, ends[1].1);
    Ok([(p[0] + q[0]) / 2.0, (p[1] + q[1]) / 2.0, (p[2] + q[2]) / 2.0])
}

/// First member face (in a deterministic scan around `near`) cut by the plane at level `a`.
pub fn find_face(model: &SurfaceModel, near: &[f64; 3], a: f64, reach: i64) -> Result<Option<FaceId>> {
    let c = near.map(|x| x.floor() as i64);
    for r in 0..=reach {
        for axis in 0..3 {
            for dc in -r..=r {
                for dj in -r..=r {
                    for dk in -r..=r {
                        if dc.abs().max(dj.abs()).max(dk.abs()) != r {
                            continue;
                        }
                        let probe = FaceId::new(axis, 0, 0, 0);
                        let (u, v) = probe.span_axes();
                        let f = FaceId::new(axis, c[axis] + dc, c[u] + dj, c[v] + dk);
                        if face_membership(&f) && crossed_edges(model, &f, a)?.len() == 2 {
                            return Ok(Some(f));
                        }
                    }
                }
            }
        }
    }
    Ok(None)
}

/// Follow the section of the surface by the plane through `p0` (which must lie
/// on face `f0`) for `steps` edge crossings, oriented by `n_out x H`.
pub fn trace_section_curve(model: &SurfaceModel, f0: &FaceId, p0: &[f64; 3], steps: usize) -> Result<Polyline> {
    if !face_membership(f0) {
        return Err(Error::Precondition(format!("{f0} is not a face of the surface")));
    }
    let a = model.h_dot(p0);
    let c = f0.corner();
    let (u, v) = f0.span_axes();
    let tol = 1e-9;
    let off_face = (p0[f0.axis] - c[f0.axis] as f64).abs() > tol
        || [u, v].iter().any(|&ax| p0[ax] < c[ax] as f64 - tol || p0[ax] > c[ax] as f64 + 1.0 + tol);
    if off_face {
        return Err(Error::Precondition(format!("start point is not on {f0}")));
    }
    let ends = crossed_edges(model, f0, a)?;
    if ends.len() != 2 {
        return Err(Error::CriticalTrajectory(format!("level {a} does not cut {f0} in a segment")));
    }
    let d = cross(&f0.outward_normal(), &model.h_f64());
    let ahead = |p: &[f64; 3]| dot(&[p[0] - p0[0], p[1] - p0[1], p[2] - p0[2]], &d);
    let (mut edge, first) = if ahead(&ends[0].1) >= ahead(&ends[1].1) { ends[0] } else { ends[1] };

    let mut points = Vec::with_capacity(steps + 2);
    let mut faces = Vec::with_capacity(steps + 2);
    points.push(*p0);
    faces.push(*f0);
    points.push(first);
    let mut face = *f0;
    let mut closed_after = None;
    for step in 1..=steps {
        let (q, m) = edge;
        let adj = faces_of_edge(&q, m);
        if adj.len() != 2 || !adj.contains(&face) {
            return Err(Error::Invariant(format!("edge {q:?} + e{} does not have two faces", m + 1)));
        }
        face = if adj[0] == face { adj[1] } else { adj[0] };
        faces.push(face);
        if face == *f0 {
            closed_after = Some(step);
            break;
        }
        if step == steps {
            break;
        }
        let mut next = None;
        for (e, p) in crossed_edges(model, &face, a)? {
            if e != edge {
                if next.is_some() {
                    return Err(Error::CriticalTrajectory(format!("plane meets {face} in more than a segment")));
                }
                next = Some((e, p));
            }
        }
        let (e, p) = next.ok_or_else(|| Error::CriticalTrajectory(format!("curve stops inside {face}")))?;
        edge = e;
        points.push(p);
    }
    faces.truncate(points.len());
    Ok(Polyline { level: a, points, faces, closed_after })
}

#[derive(Clone, Debug)]
pub struct DirectionFit {
    /// Unit vector from the first to the last point.
    pub direction: [f64; 3],
    pub displacement: f64,
    /// Largest distance of a point from the line through the first point along `direction`.
    pub residual: f64,
    /// Share of the point cloud's variance along its principal axis.
    pub score: f64,
}

/// Endpoint-displacement direction of a polyline.
pub fn fit_direction(points: &[[f64; 3]]) -> Result<DirectionFit> {
    if points.len() < 10 {
        return Err(Error::Precondition("direction fit needs at least 10 points".into()));
    }
    let (p, q) = (points[0], points[points.len() - 1]);
    let disp = [q[0] - p[0], q[1] - p[1], q[2] - p[2]];
    let len = norm(&disp);
    let scale = points.iter().map(|x| norm(x)).fold(1.0, f64::max);
    if len <= 1e-12 * scale {
        return Err(Error::UndefinedDirection);
    }
    let dir = disp.map(|x| x / len);
    let mut residual: f64 = 0.0;
    for x in points {
        let r = [x[0] - p[0], x[1] - p[1], x[2] - p[2]];
        let along = dot(&r, &dir);
        let perp = [r[0] - along * dir[0], r[1] - along * dir[1], r[2] - along * dir[2]];
        residual = residual.max(norm(&perp));
    }
    let (_, rms) = principal_direction(points);
    let n = points.len() as f64;
    let mean = points.iter().fold([0.0; 3], |acc, x| [acc[0] + x[0] / n, acc[1] + x[1] / n, acc[2] + x[2] / n]);
    let total: f64 = points.iter().map(|x| (0..3).map(|i| (x[i] - mean[i]).powi(2)).sum::<f64>()).sum::<f64>() / n;
    let score = if total > 0.0 { 1.0 - rms * rms / total } else { 1.0 };
    Ok(DirectionFit { direction: dir, displacement: len, residual, score })
}
