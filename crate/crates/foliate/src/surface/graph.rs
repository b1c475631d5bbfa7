use std::collections::{HashMap, VecDeque};

use nalgebra::{DMatrix, Vector3};

use super::model::{Lattice, SurfaceModel};
use crate::error::{Error, Result};

/// Result of exploring the component of a section-graph vertex.
#[derive(Clone, Debug)]
pub struct ComponentSummary {
    pub seed: Lattice,
    pub level: f64,
    pub radius: usize,
    pub size: usize,
    /// Largest graph distance reached; below `radius` for a finite component.
    pub reach: usize,
    pub is_tree: bool,
    pub end_estimate: usize,
    /// Principal direction of the embedded vertices, sign fixed so the first
    /// nonzero coordinate is positive.
    pub direction: [f64; 3],
    /// RMS distance of the embedded vertices from the principal line.
    pub residual: f64,
    /// Range of `|p(v) - p(seed)| / d(v)` over vertices with `d(v) >= radius / 2`.
    pub qi_ratio: (f64, f64),
}

/// BFS ball of radius `radius` around `seed` in the section graph.
#[derive(Clone, Debug)]
pub struct GraphPatch {
    pub dist: HashMap<Lattice, usize>,
    pub edges: Vec<(Lattice, Lattice)>,
    pub cyclic: bool,
    pub exhausted: bool,
}

pub fn explore_patch(model: &SurfaceModel, seed: &Lattice, a: f64, radius: usize) -> Result<GraphPatch> {
    if radius == 0 {
        return Err(Error::Domain("radius must be at least 1".into()));
    }
    if !model.vertex_active(seed, a)? {
        return Err(Error::Precondition(format!("{seed:?} is not a vertex at level {a}")));
    }
    let mut dist = HashMap::from([(*seed, 0usize)]);
    let mut parent: HashMap<Lattice, Lattice> = HashMap::new();
    let mut queue = VecDeque::from([*seed]);
    let mut edges = Vec::new();
    let mut cyclic = false;
    let mut exhausted = true;
    while let Some(n) = queue.pop_front() {
        let d = dist[&n];
        let nbrs = model.neighbours(&n, a)?;
        if d == radius {
            if nbrs.iter().any(|m| !dist.contains_key(m)) {
                exhausted = false;
            }
            continue;
        }
        for m in nbrs {
            if dist.contains_key(&m) {
                cyclic |= parent.get(&n) != Some(&m);
                continue;
            }
            dist.insert(m, d + 1);
            parent.insert(m, n);
            edges.push((n, m));
            queue.push_back(m);
        }
    }
    Ok(GraphPatch { dist, edges, cyclic, exhausted })
}

pub fn explore_component(model: &SurfaceModel, seed: &Lattice, a: f64, radius: usize) -> Result<ComponentSummary> {
    let patch = explore_patch(model, seed, a, radius)?;
    summarize_patch(model, seed, a, radius, &patch)
}

/// Summary of a patch already explored from `seed` to `radius`.
pub fn summarize_patch(
    model: &SurfaceModel,
    seed: &Lattice,
    a: f64,
    radius: usize,
    patch: &GraphPatch,
) -> Result<ComponentSummary> {
    let reach = patch.dist.values().copied().max().unwrap_or(0);
    let end_estimate = if patch.exhausted && reach < radius { 0 } else { shell_ends(model, patch, a, radius)? };

    let mut keys: Vec<&Lattice> = patch.dist.keys().collect();
    keys.sort();
    let pts: Vec<[f64; 3]> = keys.iter().map(|n| model.embed(n, a)).collect();
    let (direction, residual) = principal_direction(&pts);

    let p0 = model.embed(seed, a);
    let mut lo = f64::INFINITY;
    let mut hi: f64 = 0.0;
    for (n, &d) in &patch.dist {
        if d == 0 || 2 * d < radius.min(reach.max(1)) {
            continue;
        }
        let p = model.embed(n, a);
        let r = ((p[0] - p0[0]).powi(2) + (p[1] - p0[1]).powi(2) + (p[2] - p0[2]).powi(2)).sqrt() / d as f64;
        lo = lo.min(r);
        hi = hi.max(r);
    }
    if !lo.is_finite() {
        lo = 0.0;
    }
    Ok(ComponentSummary {
        seed: *seed,
        level: a,
        radius,
        size: patch.dist.len(),
        reach,
        is_tree: !patch.cyclic,
        end_estimate,
        direction,
        residual,
        qi_ratio: (lo, hi),
    })
}

/// Components of the shell `radius/2 < d <= radius` that reach distance `radius`.
fn shell_ends(model: &SurfaceModel, patch: &GraphPatch, a: f64, radius: usize) -> Result<usize> {
    let in_shell = |n: &Lattice| patch.dist.get(n).is_some_and(|&d| 2 * d > radius);
    let mut seen: HashMap<Lattice, ()> = HashMap::new();
    let mut shell: Vec<&Lattice> = patch.dist.keys().filter(|n| in_shell(n)).collect();
    shell.sort();
    let mut count = 0;
    for s in shell {
        if seen.contains_key(s) {
            continue;
        }
        seen.insert(*s, ());
        let mut stack = vec![*s];
        let mut touches = false;
        while let Some(n) = stack.pop() {
            touches |= patch.dist[&n] == radius;
            for m in model.neighbours(&n, a)? {
                if in_shell(&m) && !seen.contains_key(&m) {
                    seen.insert(m, ());
                    stack.push(m);
                }
            }
        }
        if touches {
            count += 1;
        }
    }
    Ok(count)
}

/// Leading right singular vector of the centred point cloud and the RMS of the
/// remaining components.
pub(crate) fn principal_direction(pts: &[[f64; 3]]) -> ([f64; 3], f64) {
    if pts.len() < 2 {
        return ([0.0; 3], 0.0);
    }
    let n = pts.len() as f64;
    let mean = pts.iter().fold([0.0; 3], |acc, p| [acc[0] + p[0] / n, acc[1] + p[1] / n, acc[2] + p[2] / n]);
    let m = DMatrix::from_fn(pts.len(), 3, |r, c| pts[r][c] - mean[c]);
    let svd = m.svd(false, true);
    let vt = svd.v_t.expect("requested");
    let mut best = 0;
    for i in 1..svd.singular_values.len() {
        if svd.singular_values[i] > svd.singular_values[best] {
            best = i;
        }
    }
    let mut d = Vector3::new(vt[(best, 0)], vt[(best, 1)], vt[(best, 2)]);
    if let Some(first) = d.iter().find(|x| x.abs() > 1e-12) {
        if *first < 0.0 {
            d = -d;
        }
    }
    let rest: f64 = svd
        .singular_values
        .iter()
        .enumerate()
        .filter(|(i, _)| *i != best)
        .map(|(_, s)| s * s)
        .sum();
    ([d[0], d[1], d[2]], (rest / n).sqrt())
}
