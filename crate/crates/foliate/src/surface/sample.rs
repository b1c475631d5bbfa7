use std::collections::HashSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::faces::FaceId;
use super::graph::{explore_patch, summarize_patch, ComponentSummary};
use super::model::{dot, norm, Lattice, SurfaceModel};
use super::tracer::{find_face, fit_direction, start_point, trace_section_curve, DirectionFit};
use crate::cone::{h_from_w, solve_widths, KSequence};
use crate::error::{Error, Result};
use crate::numerics::Scalar;

#[derive(Clone, Debug)]
pub struct SampleConfig {
    pub levels: usize,
    pub per_level: usize,
    pub radius: usize,
    pub steps: usize,
    pub seed: u64,
    /// Redraw a level that turns out to be critical instead of failing.
    pub jitter: bool,
    /// Seeds are drawn with `|n_1|, |n_2| <= box_half`.
    pub box_half: i64,
    /// Fixed levels to use instead of random ones; overrides `levels` when non-empty.
    pub explicit: Vec<f64>,
}

impl Default for SampleConfig {
    fn default() -> Self {
        SampleConfig { levels: 20, per_level: 3, radius: 200, steps: 100_000, seed: 1, jitter: false, box_half: 400, explicit: Vec::new() }
    }
}

#[derive(Clone, Debug)]
pub struct TracedCurve {
    pub start_face: FaceId,
    pub level: f64,
    pub points: usize,
    pub closed_after: Option<usize>,
    /// `None` when the curve closed up with zero displacement.
    pub fit: Option<DirectionFit>,
    /// Angle of the fitted direction in the plane `<H, x> = 0`, degrees in `[0, 360)`.
    pub angle_deg: Option<f64>,
    /// Largest distance from the start point.
    pub spread: f64,
    pub faces: HashSet<FaceId>,
}

#[derive(Clone, Debug)]
pub struct LevelSample {
    pub index: usize,
    pub level: f64,
    /// Number of critical levels discarded before this one.
    pub redraws: usize,
    pub components: Vec<ComponentSummary>,
    pub curves: Vec<TracedCurve>,
    /// First pair of curves with disjoint face sets and the angle between
    /// their directions up to sign.
    pub disjoint_pair: Option<(usize, usize, f64)>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Cluster {
    pub mean_deg: f64,
    pub spread_deg: f64,
    pub size: usize,
}

#[derive(Clone, Debug, Default)]
pub struct ClusterReport {
    pub levels: Vec<LevelSample>,
    pub clusters: Vec<Cluster>,
    /// Exactly two clusters whose means differ by 180 degrees within 5.
    pub antipodal: bool,
    pub antipodal_error_deg: f64,
    /// Largest `|<H, d>| / |H|` over fitted directions.
    pub max_h_component: f64,
}

impl ClusterReport {
    pub fn components(&self) -> impl Iterator<Item = &ComponentSummary> {
        self.levels.iter().flat_map(|l| l.components.iter())
    }

    pub fn curves(&self) -> impl Iterator<Item = &TracedCurve> {
        self.levels.iter().flat_map(|l| l.curves.iter())
    }

    pub fn max_spread_deg(&self) -> f64 {
        self.clusters.iter().map(|c| c.spread_deg).fold(0.0, f64::max)
    }
}

/// Surface model whose widths solve the nested-cone problem for `ks`.
pub fn model_for(ks: &KSequence, depth: usize, prec: u32) -> Result<SurfaceModel> {
    let sol = solve_widths(ks, depth, &Scalar::from_ratio(1, 1_000_000_000_000i64, prec), prec)?;
    let w = sol.w0().clone();
    debug_assert!(h_from_w(&w).iter().all(Scalar::is_positive));
    SurfaceModel::new(w)
}

pub fn sample_components(ks: &KSequence, depth: usize, cfg: &SampleConfig) -> Result<ClusterReport> {
    let model = model_for(ks, depth, 128)?;
    sample_model(&model, cfg)
}

/// Sample `cfg.levels` planes, explore and trace a few components on each and
/// cluster the fitted directions.
pub fn sample_model(model: &SurfaceModel, cfg: &SampleConfig) -> Result<ClusterReport> {
    let count = if cfg.explicit.is_empty() { cfg.levels } else { cfg.explicit.len() };
    if count == 0 {
        return Ok(ClusterReport::default());
    }
    if cfg.per_level == 0 || cfg.radius == 0 || cfg.box_half <= 0 {
        return Err(Error::Configuration("per-level count, radius and box must be positive".into()));
    }
    let levels: Vec<LevelSample> =
        (0..count).into_par_iter().map(|i| sample_level(model, cfg, i)).collect::<Result<_>>()?;

    let h = model.h_f64();
    let hn = norm(&h);
    let mut angles = Vec::new();
    let mut max_h_component: f64 = 0.0;
    for c in levels.iter().flat_map(|l| l.curves.iter()) {
        if let (Some(fit), Some(ang)) = (&c.fit, c.angle_deg) {
            max_h_component = max_h_component.max(dot(&fit.direction, &h).abs() / hn);
            angles.push(ang);
        }
    }
    let clusters = cluster_angles(&angles, 30.0);
    let antipodal_error_deg = if clusters.len() == 2 {
        (angle_between(clusters[0].mean_deg, clusters[1].mean_deg) - 180.0).abs()
    } else {
        f64::INFINITY
    };
    Ok(ClusterReport { levels, antipodal: antipodal_error_deg < 5.0, antipodal_error_deg, clusters, max_h_component })
}

fn sample_level(model: &SurfaceModel, cfg: &SampleConfig, index: usize) -> Result<LevelSample> {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    rng.set_stream(index as u64);
    let sigma = model.sigma_f64();
    let mut redraws = 0;
    loop {
        let a = match cfg.explicit.get(index) {
            // a jittered fixed level moves by at most 1e-9 sigma
            Some(&a) if redraws > 0 => a + rng.gen_range(-1e-9..1e-9) * sigma,
            Some(&a) => a,
            None => rng.gen_range(0.05..0.95) * sigma,
        };
        match sample_at(model, cfg, index, a, &mut rng) {
            Ok(mut s) => {
                s.redraws = redraws;
                return Ok(s);
            }
            Err(Error::CriticalLevel(_) | Error::CriticalTrajectory(_)) if cfg.jitter && redraws < 16 => redraws += 1,
            Err(e) => return Err(e),
        }
    }
}

fn random_vertex(model: &SurfaceModel, a: f64, half: i64, rng: &mut ChaCha8Rng, taken: &HashSet<Lattice>) -> Result<Lattice> {
    let h = model.h_f64();
    let sigma = model.sigma_f64();
    for _ in 0..10_000 {
        let n1 = rng.gen_range(-half..=half);
        let n2 = rng.gen_range(-half..=half);
        // 0 < a - 2<H, n> < sigma pins n3 to an interval of length sigma / (2 H_3).
        let rest = a - 2.0 * (h[0] * n1 as f64 + h[1] * n2 as f64);
        let lo = ((rest - sigma) / (2.0 * h[2])).floor() as i64;
        let hi = (rest / (2.0 * h[2])).ceil() as i64;
        for n3 in lo..=hi {
            let n = [n1, n2, n3];
            if !taken.contains(&n) && model.vertex_active(&n, a)? {
                return Ok(n);
            }
        }
    }
    Err(Error::Precondition(format!("no free vertex found at level {a}")))
}

fn sample_at(model: &SurfaceModel, cfg: &SampleConfig, index: usize, a: f64, rng: &mut ChaCha8Rng) -> Result<LevelSample> {
    let basis = model.plane_basis();
    let mut taken: HashSet<Lattice> = HashSet::new();
    let mut components = Vec::with_capacity(cfg.per_level);
    let mut curves: Vec<TracedCurve> = Vec::with_capacity(cfg.per_level);
    for _ in 0..cfg.per_level {
        let seed = random_vertex(model, a, cfg.box_half, rng, &taken)?;
        let patch = explore_patch(model, &seed, a, cfg.radius)?;
        components.push(summarize_patch(model, &seed, a, cfg.radius, &patch)?);
        taken.extend(patch.dist.keys().copied());

        if cfg.steps == 0 {
            continue;
        }
        let near = model.embed(&seed, a);
        let Some(face) = find_face(model, &near, a, 3)? else { continue };
        if curves.iter().any(|c| c.faces.contains(&face)) {
            continue;
        }
        let p0 = start_point(model, &face, a)?;
        let line = trace_section_curve(model, &face, &p0, cfg.steps)?;
        let fit = match fit_direction(&line.points) {
            Ok(f) => Some(f),
            Err(Error::UndefinedDirection | Error::Precondition(_)) => None,
            Err(e) => return Err(e),
        };
        let angle_deg = fit.as_ref().map(|f| {
            let (x, y) = (dot(&f.direction, &basis[0]), dot(&f.direction, &basis[1]));
            y.atan2(x).to_degrees().rem_euclid(360.0)
        });
        let spread = line
            .points
            .iter()
            .map(|p| norm(&[p[0] - p0[0], p[1] - p0[1], p[2] - p0[2]]))
            .fold(0.0, f64::max);
        curves.push(TracedCurve {
            start_face: face,
            level: a,
            points: line.points.len(),
            closed_after: line.closed_after,
            fit,
            angle_deg,
            spread,
            faces: line.faces.into_iter().collect(),
        });
    }
    let mut disjoint_pair = None;
    'outer: for i in 0..curves.len() {
        for j in i + 1..curves.len() {
            let (Some(x), Some(y)) = (curves[i].angle_deg, curves[j].angle_deg) else { continue };
            if curves[i].faces.is_disjoint(&curves[j].faces) {
                let d = angle_between(x, y);
                disjoint_pair = Some((i, j, d.min(180.0 - d)));
                break 'outer;
            }
        }
    }
    Ok(LevelSample { index, level: a, redraws: 0, components, curves, disjoint_pair })
}

/// Unsigned angle between two directions given in degrees, in `[0, 180]`.
pub fn angle_between(x: f64, y: f64) -> f64 {
    let d = (x - y).rem_euclid(360.0);
    d.min(360.0 - d)
}

/// Split angles on the circle at gaps wider than `gap_deg`.
pub fn cluster_angles(angles: &[f64], gap_deg: f64) -> Vec<Cluster> {
    if angles.is_empty() {
        return Vec::new();
    }
    let mut sorted: Vec<f64> = angles.iter().map(|a| a.rem_euclid(360.0)).collect();
    sorted.sort_by(f64::total_cmp);
    let n = sorted.len();
    let gap_after = |i: usize| (sorted[(i + 1) % n] - sorted[i]).rem_euclid(360.0);
    let cuts: Vec<usize> = (0..n).filter(|&i| n > 1 && gap_after(i) > gap_deg).collect();
    let groups: Vec<Vec<f64>> = if cuts.is_empty() {
        vec![sorted.clone()]
    } else {
        (0..cuts.len())
            .map(|c| {
                let start = (cuts[c] + 1) % n;
                let end = cuts[(c + 1) % cuts.len()];
                let len = (end + n - start) % n + 1;
                (0..len).map(|t| sorted[(start + t) % n]).collect()
            })
            .collect()
    };
    let mut out: Vec<Cluster> = groups
        .into_iter()
        .map(|g| {
            let (sx, sy) = g.iter().fold((0.0, 0.0), |(x, y), a| (x + a.to_radians().cos(), y + a.to_radians().sin()));
            let mean_deg = sy.atan2(sx).to_degrees().rem_euclid(360.0);
            let spread_deg = g.iter().map(|&a| angle_between(a, mean_deg)).fold(0.0, f64::max);
            Cluster { mean_deg, spread_deg, size: g.len() }
        })
        .collect();
    out.sort_by(|a, b| a.mean_deg.total_cmp(&b.mean_deg));
    out
}
