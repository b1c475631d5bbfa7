use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use num_bigint::BigInt;
use serde_json::{json, Value};

use super::config::{Command, Levels, RunConfig};
use super::verify::run_checks;
use crate::band::{format_decimal, is_isomorphic, make_z4, rips_step, Q};
use crate::cone::{area_sequence, h_from_w, solve_widths, WidthSolution};
use crate::error::{Error, Result};
use crate::iet::{equidistribution_test, ergodic_cone, orbit, write_orbit_csv, IetStage, Point};
use crate::numerics::Scalar;
use crate::surface::{
    explore_patch, model_for, sample_model, start_point, trace_section_curve, write_components_csv, write_patch_svg,
    write_polyline_csv, ComponentSummary, SampleConfig,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    Pass,
    Accuracy,
    Invariant,
}

#[derive(Clone, Debug)]
pub struct Report {
    pub command: Command,
    pub status: Status,
    /// Human-readable summary, one item per line.
    pub lines: Vec<String>,
    /// Files written, relative to the output directory.
    pub files: Vec<String>,
    pub summary: Value,
}

impl Report {
    pub fn exit_code(&self) -> i32 {
        match self.status {
            Status::Pass => 0,
            Status::Accuracy => 2,
            Status::Invariant => 4,
        }
    }
}

/// Exit code for a failed run.
pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Accuracy { .. } => 2,
        Error::CriticalLevel(_) | Error::CriticalTrajectory(_) | Error::Discontinuity(_) => 3,
        Error::Invariant(_) | Error::Structural(_) => 4,
        _ => 1,
    }
}

struct Context {
    cfg: RunConfig,
    out: PathBuf,
    hash: String,
    files: Vec<String>,
}

impl Context {
    fn new(command: Command, mut cfg: RunConfig, out: &Path) -> Result<Self> {
        cfg.command = Some(command);
        cfg.validate()?;
        std::fs::create_dir_all(out)?;
        let hash = cfg.hash();
        Ok(Context { cfg, out: out.to_path_buf(), hash, files: Vec::new() })
    }

    fn command(&self) -> Command {
        self.cfg.command.expect("set in new")
    }

    fn header(&self) -> Vec<String> {
        vec![
            format!("command={}", self.command().name()),
            format!("config_sha256={}", self.hash),
            format!("seed={}", self.cfg.seed),
        ]
    }

    fn create(&mut self, name: &str) -> Result<BufWriter<File>> {
        self.files.push(name.to_string());
        Ok(BufWriter::new(File::create(self.out.join(name))?))
    }

    fn finish(mut self, status: Status, lines: Vec<String>, mut summary: Value) -> Result<Report> {
        let command = self.command();
        summary["command"] = json!(command.name());
        summary["config_sha256"] = json!(self.hash);
        summary["seed"] = json!(self.cfg.seed);
        summary["status"] = json!(format!("{status:?}").to_lowercase());
        let name = format!("{}_summary.json", command.name());
        let mut f = self.create(&name)?;
        serde_json::to_writer_pretty(&mut f, &summary)?;
        writeln!(f)?;
        f.flush()?;
        Ok(Report { command, status, lines, files: self.files, summary })
    }
}

fn comment_header<W: Write>(w: &mut W, header: &[String]) -> Result<()> {
    for h in header {
        writeln!(w, "# {h}")?;
    }
    Ok(())
}

fn bounds(x: &Scalar) -> [f64; 2] {
    let (lo, hi) = x.bounds_f64();
    [lo, hi]
}

fn show(x: &Scalar) -> String {
    let d = x.verified_digits().clamp(1, 30);
    let (lo, hi) = x.decimal_bounds(d + 2);
    format!("[{lo}, {hi}] ({d} digits)")
}

/// Run one command with an already validated configuration.
pub fn run(command: Command, cfg: RunConfig, out: &Path) -> Result<Report> {
    let ctx = Context::new(command, cfg, out)?;
    match command {
        Command::Widths => cmd_widths(ctx),
        Command::Rips => cmd_rips(ctx),
        Command::Iet => cmd_iet(ctx),
        Command::Section => cmd_section(ctx),
        Command::Verify => cmd_verify(ctx),
    }
}

fn cmd_widths(mut ctx: Context) -> Result<Report> {
    let cfg = ctx.cfg.clone();
    let tol = Scalar::from_f64(cfg.tolerance);
    let sol = match solve_widths(&cfg.ks, cfg.depth, &tol, cfg.precision) {
        Ok(s) => s,
        Err(Error::Accuracy { what, achieved }) => {
            let line = format!("tolerance {:e} not met: {what}; achieved diameter {achieved:e}", cfg.tolerance);
            let summary = json!({ "tolerance": cfg.tolerance, "achieved_diameter": achieved, "depth": cfg.depth });
            return ctx.finish(Status::Accuracy, vec![line], summary);
        }
        Err(e) => return Err(e),
    };
    let header = ctx.header();
    let mut f = ctx.create("widths.csv")?;
    comment_header(&mut f, &header)?;
    let mut w = csv::Writer::from_writer(f);
    w.write_record(["stage", "k", "w1_lo", "w1_hi", "w2_lo", "w2_hi", "w3_lo", "w3_hi", "w1_gt_w2_plus_w3", "w2_gt_w3"])?;
    for (i, (st, chk)) in sol.stages.iter().zip(&sol.checks).enumerate() {
        let mut rec = vec![i.to_string(), sol.ks[i].to_string()];
        for x in st {
            rec.extend(bounds(x).iter().map(|v| format!("{v:.17e}")));
        }
        rec.push(chk.w1_exceeds_w2_plus_w3().to_string());
        rec.push(chk.w2_exceeds_w3().to_string());
        w.write_record(&rec)?;
    }
    w.flush()?;
    drop(w);

    let mut f = ctx.create("diameters.csv")?;
    comment_header(&mut f, &header)?;
    let mut w = csv::Writer::from_writer(f);
    w.write_record(["depth", "diameter_hi"])?;
    for (d, x) in sol.diameters.iter().enumerate() {
        let v = x.as_ref().map_or("inf".to_string(), |x| format!("{:.6e}", x.bounds_f64().1));
        w.write_record(&[d.to_string(), v])?;
    }
    w.flush()?;
    drop(w);

    let w0 = sol.w0();
    let h = h_from_w(w0);
    let diam = sol.diameter().map(|d| d.bounds_f64().1).unwrap_or(f64::INFINITY);
    let first = sol.checks.iter().all(|c| c.w1_exceeds_w2_plus_w3());
    let second = sol.checks.iter().all(|c| c.w2_exceeds_w3());
    let mut lines: Vec<String> = w0.iter().enumerate().map(|(i, x)| format!("w0[{}] = {}", i + 1, show(x))).collect();
    lines.push(format!("Hilbert diameter <= {diam:.3e}"));
    lines.extend(h.iter().enumerate().map(|(i, x)| format!("H[{}] = {}", i + 1, show(x))));
    lines.push(format!("w1 > w2 + w3 at every stage: {first}"));
    lines.push(format!("w2 > w3 at every stage: {second}"));
    let summary = json!({
        "depth": cfg.depth,
        "w0": w0.iter().map(bounds).collect::<Vec<_>>(),
        "h": h.iter().map(bounds).collect::<Vec<_>>(),
        "verified_digits": w0.iter().map(Scalar::verified_digits).collect::<Vec<_>>(),
        "diameter_hi": diam,
        "w1_gt_w2_plus_w3": first,
        "w2_gt_w3": second,
    });
    ctx.finish(Status::Pass, lines, summary)
}

fn cmd_rips(mut ctx: Context) -> Result<Report> {
    let cfg = ctx.cfg.clone();
    let steps = cfg.rips_steps;
    let machine = cfg.machine_steps.min(steps);
    let certify = cfg.ks.doubles_through(steps + 1);
    let l0: [BigInt; 4] = cfg.lengths.map(BigInt::from);
    let areas = area_sequence(&cfg.ks, steps, &l0, certify, cfg.precision)?;
    let sol = WidthSolution::compute(&cfg.ks, steps.max(machine + 1).max(6), cfg.precision)?;

    let header = ctx.header();
    let mut l: [Q; 4] = std::array::from_fn(|j| Q::from_integer(l0[j].clone()));
    let start = make_z4(&sol.rational_stage(0), &l)?;
    let mut f = ctx.create("complex_0.txt")?;
    comment_header(&mut f, &header)?;
    write!(f, "{start}")?;
    f.flush()?;

    let mut machine_rows = Vec::with_capacity(machine);
    for i in 0..machine {
        let k = u64::try_from(&sol.ks[i]).map_err(|_| Error::Configuration(format!("k_{i} too large for the machine")))?;
        let step = rips_step(&make_z4(&sol.rational_stage(i), &l)?, k)?;
        let target = make_z4(&sol.rational_stage(i + 1), &step.l_next)?;
        machine_rows.push((step.collapses.len(), is_isomorphic(&step.complex, &target)));
        l = step.l_next;
    }

    let mut f = ctx.create("rips.csv")?;
    comment_header(&mut f, &header)?;
    let mut w = csv::Writer::from_writer(f);
    w.write_record([
        "step", "k", "w1", "w2", "w3", "l1", "l2", "l3", "l4", "area_lo", "area_hi", "certificate_exact",
        "certificate_numeric", "margin_lo", "collapses", "isomorphic",
    ])?;
    for i in 0..=steps {
        let st = &sol.stages[i];
        let cert = areas.certificates.get(i);
        let mach = machine_rows.get(i);
        let mut rec = vec![i.to_string(), sol.ks[i].to_string()];
        rec.extend(st.iter().map(|x| format!("{:.17e}", x.mid_f64())));
        rec.extend(areas.lengths[i].iter().map(BigInt::to_string));
        rec.extend(bounds(&areas.areas[i]).iter().map(|v| format!("{v:.17e}")));
        rec.push(cert.map_or(String::new(), |c| c.exact.to_string()));
        rec.push(cert.map_or(String::new(), |c| c.numeric.to_string()));
        rec.push(cert.map_or(String::new(), |c| format!("{:.6e}", c.margin.bounds_f64().0)));
        rec.push(mach.map_or(String::new(), |m| m.0.to_string()));
        rec.push(mach.map_or(String::new(), |m| m.1.to_string()));
        w.write_record(&rec)?;
    }
    w.flush()?;
    drop(w);

    let certs_ok = areas.certificates.iter().all(|c| c.numeric);
    let exact_ok = areas.certificates.iter().all(|c| c.exact);
    let iso_ok = machine_rows.iter().all(|m| m.1);
    let last = areas.areas.last().expect("at least one area");
    let mut lines = vec![
        format!("initial complex: {} bands, area {}", start.bands().len(), format_decimal(&start.area_exact()?, 6)),
        format!("S_{steps} = {}", show(last)),
    ];
    if certify {
        lines.push(format!("{} area certificates, all hold: {certs_ok} (exact: {exact_ok})", areas.certificates.len()));
    } else {
        lines.push("area certificates skipped: ks does not double".into());
    }
    lines.push(format!("machine steps run: {machine}, all isomorphic to the predicted complex: {iso_ok}"));
    let status = if certs_ok && iso_ok && last.is_positive() { Status::Pass } else { Status::Invariant };
    let summary = json!({
        "steps": steps,
        "machine_steps": machine,
        "certified": certify,
        "certificates_hold": certs_ok,
        "certificates_exact": exact_ok,
        "isomorphic": iso_ok,
        "final_area": bounds(last),
        "collapses": machine_rows.iter().map(|m| m.0).collect::<Vec<_>>(),
    });
    ctx.finish(status, lines, summary)
}

fn cmd_iet(mut ctx: Context) -> Result<Report> {
    let cfg = ctx.cfg.clone();
    let cone = ergodic_cone(&cfg.ks, cfg.depth, cfg.precision)?;
    let sol = WidthSolution::compute(&cfg.ks, cfg.depth, cfg.precision)?;
    let stage = IetStage::new(0, sol.w0().clone())?;
    let iet = stage.iet();
    let w1 = iet.block_length_f64(0);
    let start = Point::new(0, cfg.orbit_start * w1);
    let header = ctx.header();

    let steps = orbit(iet, start, cfg.orbit_steps)?;
    let mut f = ctx.create("orbit.csv")?;
    write_orbit_csv(&mut f, &header, &steps)?;
    f.flush()?;

    let eq = equidistribution_test(iet, start, cfg.orbit_steps, w1 / cfg.bins_per_w1)?;
    let share = |v: &[Scalar]| -> Vec<f64> {
        let s: f64 = v.iter().map(Scalar::mid_f64).sum();
        v.iter().map(|x| x.mid_f64() / s).collect()
    };
    let (us, vs) = (share(&cone.u), share(&cone.v));
    let mut f = ctx.create("frequencies.csv")?;
    comment_header(&mut f, &header)?;
    let mut w = csv::Writer::from_writer(f);
    w.write_record(["label", "frequency", "u_share", "v_share"])?;
    for (i, fr) in eq.frequencies.iter().enumerate() {
        w.write_record(&[(i + 1).to_string(), format!("{fr:.8e}"), format!("{:.8e}", us[i]), format!("{:.8e}", vs[i])])?;
    }
    w.flush()?;
    drop(w);

    let (rlo, rhi) = cone.ratio.bounds_f64();
    let ratio_ok = rlo >= 1.0 - 1e-6 && rhi <= 1.0 + 1e-6;
    let mut lines = vec![
        format!("alpha/beta = {}", show(&cone.ratio)),
        format!("u, v separated: {} (sin angle {:.6})", cone.separated(), cone.sin_angle.mid_f64()),
        format!("fit residual {:.3e}", cone.residual),
        format!("u3 + u6 - u8 - u9 = {}", show(&cone.cycle_defect)),
        format!("orbit: {} steps, {} of {} bins hit, dense: {}", eq.steps, eq.bins_hit, eq.bins_total, eq.dense),
    ];
    if let Some(wn) = &cone.warning {
        lines.push(format!("warning: {wn}"));
    }
    let status = if ratio_ok && cone.separated() { Status::Pass } else { Status::Accuracy };
    let summary = json!({
        "depth": cfg.depth,
        "alpha": bounds(&cone.alpha),
        "beta": bounds(&cone.beta),
        "ratio": [rlo, rhi],
        "ratio_within_1e-6": ratio_ok,
        "separated": cone.separated(),
        "sin_angle": cone.sin_angle.mid_f64(),
        "residual": cone.residual,
        "cycle_defect": bounds(&cone.cycle_defect),
        "defect_exceeds_10_widths": cone.defect_exceeds(10.0),
        "orbit_steps": eq.steps,
        "bins_hit": eq.bins_hit,
        "bins_total": eq.bins_total,
        "dense": eq.dense,
        "restarts": eq.restarts,
        "period": eq.period,
        "frequencies": eq.frequencies,
        "warning": cone.warning,
    });
    ctx.finish(status, lines, summary)
}

fn cmd_section(mut ctx: Context) -> Result<Report> {
    let cfg = ctx.cfg.clone();
    let model = model_for(&cfg.ks, cfg.depth, cfg.precision)?;
    let (levels, explicit) = match &cfg.levels {
        Levels::Count { count } => (*count, Vec::new()),
        Levels::List { list } => (list.len(), list.clone()),
    };
    let scfg = SampleConfig {
        levels,
        per_level: cfg.per_level,
        radius: cfg.radius,
        steps: cfg.steps,
        seed: cfg.seed,
        jitter: cfg.jitter,
        box_half: cfg.box_half,
        explicit,
    };
    let rep = sample_model(&model, &scfg)?;
    let header = ctx.header();

    let comps: Vec<ComponentSummary> = rep.components().cloned().collect();
    let mut f = ctx.create("components.csv")?;
    write_components_csv(&mut f, &header, &comps)?;
    f.flush()?;

    let mut f = ctx.create("directions.csv")?;
    comment_header(&mut f, &header)?;
    let mut w = csv::Writer::from_writer(f);
    w.write_record([
        "level_index", "level", "curve", "face", "points", "closed_after", "dx", "dy", "dz", "angle_deg", "residual",
        "spread",
    ])?;
    for l in &rep.levels {
        for (ci, c) in l.curves.iter().enumerate() {
            let (d, res) = c.fit.as_ref().map_or(([f64::NAN; 3], f64::NAN), |f| (f.direction, f.residual));
            w.write_record(&[
                l.index.to_string(),
                format!("{:.17e}", l.level),
                ci.to_string(),
                c.start_face.to_string(),
                c.points.to_string(),
                c.closed_after.map_or(String::new(), |n| n.to_string()),
                format!("{:.12e}", d[0]),
                format!("{:.12e}", d[1]),
                format!("{:.12e}", d[2]),
                c.angle_deg.map_or(String::new(), |a| format!("{a:.6}")),
                format!("{res:.6e}"),
                format!("{:.6e}", c.spread),
            ])?;
        }
    }
    w.flush()?;
    drop(w);

    if let Some(first) = rep.levels.first() {
        if cfg.svg {
            if let Some(c) = first.components.first() {
                let patch = explore_patch(&model, &c.seed, first.level, cfg.radius.min(60))?;
                let mut f = ctx.create("patch.svg")?;
                write_patch_svg(&mut f, &header, &model, &patch, first.level)?;
                f.flush()?;
            }
        }
        if cfg.polyline {
            if let Some(c) = first.curves.first() {
                let p0 = start_point(&model, &c.start_face, first.level)?;
                let line = trace_section_curve(&model, &c.start_face, &p0, cfg.steps)?;
                let mut f = ctx.create("polyline.csv")?;
                write_polyline_csv(&mut f, &header, &line.points)?;
                f.flush()?;
            }
        }
    }

    let trees = comps.iter().filter(|c| c.is_tree).count();
    let two = comps.iter().filter(|c| c.end_estimate == 2).count();
    let pair_max = rep.levels.iter().filter_map(|l| l.disjoint_pair.map(|p| p.2)).fold(0.0, f64::max);
    let pairs = rep.levels.iter().filter(|l| l.disjoint_pair.is_some()).count();
    let lines = vec![
        format!("levels: {}, components: {}", rep.levels.len(), comps.len()),
        format!("trees: {trees}, two-ended: {two}"),
        format!(
            "direction clusters: {} at {:?} deg, antipodal: {} (error {:.4} deg), max spread {:.4} deg",
            rep.clusters.len(),
            rep.clusters.iter().map(|c| (c.mean_deg * 1e3).round() / 1e3).collect::<Vec<_>>(),
            rep.antipodal,
            rep.antipodal_error_deg,
            rep.max_spread_deg()
        ),
        format!("largest |<H, d>| / |H|: {:.3e}", rep.max_h_component),
        format!("levels with a disjoint pair: {pairs}, largest angle up to sign {pair_max:.4} deg"),
    ];
    let summary = json!({
        "levels": rep.levels.iter().map(|l| l.level).collect::<Vec<_>>(),
        "redraws": rep.levels.iter().map(|l| l.redraws).sum::<usize>(),
        "components": comps.len(),
        "trees": trees,
        "two_ended": two,
        "clusters": rep.clusters.iter().map(|c| json!({"mean_deg": c.mean_deg, "spread_deg": c.spread_deg, "size": c.size})).collect::<Vec<_>>(),
        "antipodal": rep.antipodal,
        "antipodal_error_deg": if rep.antipodal_error_deg.is_finite() { json!(rep.antipodal_error_deg) } else { Value::Null },
        "max_h_component": rep.max_h_component,
        "disjoint_pairs": pairs,
        "disjoint_pair_max_angle_deg": pair_max,
    });
    ctx.finish(Status::Pass, lines, summary)
}

fn cmd_verify(mut ctx: Context) -> Result<Report> {
    let checks = run_checks(&ctx.cfg)?;
    let header = ctx.header();
    let mut f = ctx.create("verify.csv")?;
    comment_header(&mut f, &header)?;
    let mut w = csv::Writer::from_writer(f);
    w.write_record(["check", "pass", "detail"])?;
    for c in &checks {
        w.write_record([c.name, if c.pass { "true" } else { "false" }, &c.detail])?;
    }
    w.flush()?;
    drop(w);
    let lines: Vec<String> =
        checks.iter().map(|c| format!("{} {}: {}", if c.pass { "PASS" } else { "FAIL" }, c.name, c.detail)).collect();
    let failed: Vec<&str> = checks.iter().filter(|c| !c.pass).map(|c| c.name).collect();
    let status = if failed.is_empty() { Status::Pass } else { Status::Invariant };
    ctx.finish(status, lines, json!({ "checks": checks.len(), "failed": failed }))
}
