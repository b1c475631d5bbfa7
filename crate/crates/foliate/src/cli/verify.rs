use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::config::{Fault, RunConfig};
use crate::band::{q, Q};
use crate::cone::{mat_b, mat_bpp, mat_bprime, WidthSolution};
use crate::error::{Error, Result};
use crate::iet::{ergodic_cone, in_v_exact, mat_r, rauzy_matches, u_inf, v_basis, v_inf, x_from_w, x_from_w_exact};
use crate::numerics::{IMatrix, Scalar};
use crate::surface::{genus_check, SurfaceModel};

/// Largest `k` kept in the `R(k)` table.
pub const TABLE_MAX: u64 = 10;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CheckResult {
    pub name: &'static str,
    pub pass: bool,
    pub detail: String,
}

impl CheckResult {
    fn new(name: &'static str, pass: bool, detail: impl Into<String>) -> Self {
        CheckResult { name, pass, detail: detail.into() }
    }
}

/// `R(1), ..., R(TABLE_MAX)`, with an optional corrupted entry.
pub fn r_table(fault: Option<&Fault>) -> Result<Vec<IMatrix>> {
    let mut table: Vec<IMatrix> = (1..=TABLE_MAX).map(mat_r).collect::<Result<_>>()?;
    if let Some(f) = fault {
        if f.k == 0 || f.k > TABLE_MAX || f.row > 8 || f.col > 8 {
            return Err(Error::Configuration(format!("fault outside the R table: {f:?}")));
        }
        let m = &mut table[f.k as usize - 1];
        let v = m.get(f.row, f.col) + BigInt::from(f.delta);
        m.set(f.row, f.col, v);
    }
    Ok(table)
}

/// `(R', R'')` read off the first two table entries.
fn split(table: &[IMatrix]) -> (IMatrix, IMatrix) {
    let rp = table[1].sub(&table[0]);
    let rpp = table[0].sub(&rp);
    (rp, rpp)
}

fn table_r(table: &[IMatrix], k: &BigInt) -> IMatrix {
    let (rp, rpp) = split(table);
    rp.scale(k).add(&rpp)
}

fn check_b_triples() -> Result<CheckResult> {
    let bpp = mat_bpp();
    let mut bad = Vec::new();
    for k in 1..=10 {
        for l in 1..=10 {
            for m in 1..=10 {
                let lhs = mat_b(k)?.matmul(&mat_b(l)?).matmul(&mat_b(m)?);
                if lhs != mat_bprime(k, l, m)?.matmul(&bpp) {
                    bad.push((k, l, m));
                }
            }
        }
    }
    Ok(CheckResult::new("b_triple_factorization", bad.is_empty(), format!("1000 triples, failures {bad:?}")))
}

fn check_table(table: &[IMatrix]) -> Vec<CheckResult> {
    let (rp, _) = split(table);
    let bad: Vec<usize> =
        (1..=table.len()).filter(|&k| table_r(table, &BigInt::from(k)) != table[k - 1]).collect();
    let mut out = vec![CheckResult::new("r_affine_in_k", bad.is_empty(), format!("non-affine k: {bad:?}"))];

    let p2 = rp.pow(2);
    out.push(CheckResult::new("r_prime_power", rp.pow(4) == p2, "R'^4 = R'^2"));
    let swaps = rp.apply(&u_inf()) == v_inf() && rp.apply(&v_inf()) == u_inf();
    out.push(CheckResult::new("r_prime_swaps_u_v", swaps, "R' u = v, R' v = u"));

    let basis = v_basis();
    let leaks: Vec<usize> =
        (1..=table.len()).filter(|&k| basis.iter().any(|b| !in_v_exact(&table[k - 1].apply(b)))).collect();
    out.push(CheckResult::new("r_preserves_v", leaks.is_empty(), format!("k leaving V: {leaks:?}")));
    out
}

fn check_rauzy(table: &[IMatrix]) -> Result<CheckResult> {
    let samples: [[Q; 3]; 2] = [[q(7, 2), q(2, 1), q(1, 1)], [q(29, 7), q(5, 3), q(3, 5)]];
    let mut bad = Vec::new();
    for k in 1..=4u64 {
        for w in &samples {
            if !rauzy_matches(k, w, &table[k as usize - 1])? {
                bad.push(k);
            }
        }
    }
    bad.dedup();
    Ok(CheckResult::new("rauzy_composite", bad.is_empty(), format!("mismatching k: {bad:?}")))
}

fn check_blocks() -> Result<CheckResult> {
    let w = [q(37, 3), q(11, 4), q(6, 5)];
    let x = x_from_w_exact(&w)?;
    let blocks: [&[usize]; 6] = [&[0, 1, 2, 3], &[4, 5], &[6, 7, 8], &[2, 6, 5], &[3, 7, 0], &[8, 1, 4]];
    let ok = blocks.iter().all(|b| b.iter().map(|&i| &x[i]).sum::<Q>() == w[0]);
    Ok(CheckResult::new("block_sums", ok, "six block sums equal w1 exactly"))
}

fn check_chain(cfg: &RunConfig, table: &[IMatrix]) -> Result<CheckResult> {
    let n = cfg.depth.min(20);
    let depth = (n + 20).max(2 * n);
    let sol = match WidthSolution::compute(&cfg.ks, depth, cfg.precision) {
        Ok(s) => s,
        Err(Error::Configuration(m)) => return Ok(CheckResult::new("renormalization_chain", true, format!("skipped: {m}"))),
        Err(e) => return Err(e),
    };
    let xs: Vec<[Scalar; 9]> = (0..=n).map(|i| x_from_w(&sol.stages[i])).collect::<Result<_>>()?;
    let mut bad = Vec::new();
    for i in 0..n {
        let r = table_r(table, &sol.ks[i]).map(|x| Scalar::from(x));
        if !r.apply(&xs[i + 1]).iter().zip(&xs[i]).all(|(a, b)| a.overlaps(b)) {
            bad.push(i);
        }
    }
    let stages = sol.checks.iter().all(|c| c.holds());
    Ok(CheckResult::new(
        "renormalization_chain",
        bad.is_empty() && stages,
        format!("{n} stages, failing {bad:?}, stage inequalities {stages}"),
    ))
}

fn check_genus() -> CheckResult {
    let g = genus_check();
    let ok = (g.vertices, g.edges, g.faces, g.genus) == (8, 24, 12, 3)
        && g.manifold_edges
        && g.faces_per_vertex.iter().all(|&n| n == 6);
    CheckResult::new("surface_genus", ok, format!("V={} E={} F={} genus={}", g.vertices, g.edges, g.faces, g.genus))
}

fn check_predicates(cfg: &RunConfig) -> Result<CheckResult> {
    let sol = WidthSolution::compute(&cfg.ks, cfg.depth.max(6), cfg.precision)?;
    let model = SurfaceModel::new(sol.w0().clone())?;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let (mut tested, mut critical, mut bad) = (0, 0, 0);
    for _ in 0..2000 {
        let n: [i64; 3] = std::array::from_fn(|_| rng.gen_range(-100..=100));
        let a = 2.0 * model.h_dot(&n.map(|x| x as f64)) + rng.gen::<f64>() * model.sigma_f64();
        let Ok(nbrs) = model.neighbours(&n, a) else {
            critical += 1;
            continue;
        };
        tested += 1;
        let ok = nbrs.len() <= 6
            && nbrs.iter().all(|m| {
                model.vertex_active(m, a).unwrap_or(false)
                    && model.neighbours(m, a).map(|b| b.contains(&n)).unwrap_or(false)
            });
        if !ok {
            bad += 1;
        }
    }
    Ok(CheckResult::new(
        "section_graph",
        bad == 0,
        format!("{tested} vertices, {bad} failures, {critical} critical skipped"),
    ))
}

fn check_ergodic(cfg: &RunConfig) -> Result<CheckResult> {
    if !cfg.ks.is_summable() || cfg.depth < 12 || cfg.depth % 2 == 1 {
        return Ok(CheckResult::new("ergodic_cone", true, "skipped: needs summable ks and even depth >= 12"));
    }
    let c = ergodic_cone(&cfg.ks, cfg.depth, cfg.precision)?;
    let (lo, hi) = c.ratio.bounds_f64();
    let ok = c.separated() && lo >= 1.0 - 1e-6 && hi <= 1.0 + 1e-6 && c.defect_exceeds(10.0);
    Ok(CheckResult::new(
        "ergodic_cone",
        ok,
        format!("alpha/beta in [{lo}, {hi}], sin angle {:.6}", c.sin_angle.mid_f64()),
    ))
}

/// Every invariant check, in a fixed order.
pub fn run_checks(cfg: &RunConfig) -> Result<Vec<CheckResult>> {
    let table = r_table(cfg.fault.as_ref())?;
    let mut out = vec![check_b_triples()?];
    out.extend(check_table(&table));
    out.push(check_rauzy(&table)?);
    out.push(check_blocks()?);
    out.push(check_chain(cfg, &table)?);
    out.push(check_genus());
    out.push(check_predicates(cfg)?);
    out.push(check_ergodic(cfg)?);
    Ok(out)
}
