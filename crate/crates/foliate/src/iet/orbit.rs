use std::io::Write;

use super::exchange::{Iet, Point};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq)]
pub struct OrbitStep {
    pub step: usize,
    pub transversal: usize,
    pub offset: f64,
    pub label: usize,
}

/// `n` points of the forward orbit of `start`, each with the label it sits on.
pub fn orbit(iet: &Iet, start: Point, n: usize) -> Result<Vec<OrbitStep>> {
    let mut out = Vec::with_capacity(n);
    let mut p = start;
    for step in 0..n {
        let label = iet.label_at(p)?;
        out.push(OrbitStep { step, transversal: p.transversal, offset: p.offset, label });
        p = iet.map(p)?;
    }
    Ok(out)
}

/// CSV with columns `step, transversal, offset, label`; transversals are 1-based.
/// `header` lines are written first as `#` comments.
pub fn write_orbit_csv<W: Write>(out: W, header: &[String], steps: &[OrbitStep]) -> Result<()> {
    let mut out = out;
    for h in header {
        writeln!(out, "# {h}")?;
    }
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["step", "transversal", "offset", "label"])?;
    for s in steps {
        w.write_record(&[s.step.to_string(), (s.transversal + 1).to_string(), format!("{:.17e}", s.offset), s.label.to_string()])?;
    }
    w.flush()?;
    Ok(())
}

#[derive(Clone, Debug)]
pub struct EquidistributionReport {
    pub steps: usize,
    pub eps: f64,
    /// Every bin of width `eps` on every transversal was visited.
    pub dense: bool,
    pub bins_total: usize,
    pub bins_hit: usize,
    /// Visit frequencies of the top-row labels.
    pub frequencies: Vec<f64>,
    /// Restarts forced by landing on a discontinuity.
    pub restarts: usize,
    /// Period if the orbit came back exactly to its start.
    pub period: Option<usize>,
}

/// Iterate the exchange `n` times from `start`, bin the visits, and detect an
/// exact return to the start.
pub fn equidistribution_test(iet: &Iet, start: Point, n: usize, eps: f64) -> Result<EquidistributionReport> {
    if n == 0 || !(eps > 0.0) {
        return Err(Error::Domain("need at least one step and a positive bin width".into()));
    }
    let blocks = iet.permutation().blocks();
    let bins: Vec<usize> = (0..blocks).map(|j| (iet.block_length_f64(j) / eps * (1.0 - 1e-12)).ceil().max(1.0) as usize).collect();
    let mut hit: Vec<Vec<bool>> = bins.iter().map(|&b| vec![false; b]).collect();
    let mut counts = vec![0usize; iet.permutation().labels()];
    let mut restarts = 0;
    let mut period = None;
    let mut p = start;
    let mut origin = start;
    for step in 0..n {
        let label = match iet.label_at(p) {
            Ok(l) => l,
            Err(Error::Discontinuity(_)) => {
                restarts += 1;
                p = nudge(iet, p, eps, restarts);
                origin = p;
                continue;
            }
            Err(e) => return Err(e),
        };
        counts[label - 1] += 1;
        let b = ((p.offset / eps) as usize).min(bins[p.transversal] - 1);
        hit[p.transversal][b] = true;
        p = iet.map(p)?;
        if p == origin {
            period = Some(step + 1);
            break;
        }
    }
    let visits: usize = counts.iter().sum();
    let bins_hit = hit.iter().flatten().filter(|h| **h).count();
    let bins_total: usize = bins.iter().sum();
    Ok(EquidistributionReport {
        steps: visits,
        eps,
        dense: period.is_none() && bins_hit == bins_total,
        bins_total,
        bins_hit,
        frequencies: counts.iter().map(|&c| c as f64 / visits.max(1) as f64).collect(),
        restarts,
        period,
    })
}

/// Deterministic small shift off a discontinuity.
fn nudge(iet: &Iet, p: Point, eps: f64, attempt: usize) -> Point {
    let len = iet.block_length_f64(p.transversal);
    let shift = eps * 1e-3 * (attempt as f64 * 0.618_033_988_749_895).fract().max(1e-3);
    let mut offset = p.offset + shift;
    if offset >= len {
        offset -= len;
    }
    Point::new(p.transversal, offset)
}
