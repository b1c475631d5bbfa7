//! Acceptance suite: one line per criterion. Run with `cargo test --test acceptance`.
//!
//! Criterion 1 contains a positivity claim that is false for `k = 1`; it is
//! evaluated literally and reported as FAIL. The binary exits nonzero when the
//! set of failing criteria differs from `KNOWN_FAILING`.

use std::io::Write;
use std::time::{Duration, Instant};

use foliate::band::{is_isomorphic, make_z4, rips_step, Q};
use foliate::cone::{area_sequence, solve_widths, KSequence, WidthSolution};
use foliate::iet::{check_v, ergodic_cone, mat_r, rauzy_composite, x_from_w, x_from_w_exact, BlockPermutation};
use foliate::numerics::{IMatrix, Scalar};
use foliate::surface::{face_membership, faces_of_edge, genus_check, sample_model, FaceId, SampleConfig, SurfaceModel};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{FromPrimitive, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const KNOWN_FAILING: &[u32] = &[1];

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome { pass, detail: detail.into() }
}

type M = Vec<Vec<i128>>;

fn mm(a: &M, b: &M) -> M {
    let (n, k, m) = (a.len(), b.len(), b[0].len());
    (0..n).map(|i| (0..m).map(|j| (0..k).map(|t| a[i][t] * b[t][j]).sum()).collect()).collect()
}

fn mv(a: &M, v: &[i128]) -> Vec<i128> {
    a.iter().map(|r| r.iter().zip(v).map(|(x, y)| x * y).sum()).collect()
}

fn to_m(x: &IMatrix) -> M {
    (0..x.rows()).map(|i| (0..x.cols()).map(|j| x.get(i, j).to_i128().unwrap()).collect()).collect()
}

fn b(k: i128) -> M {
    vec![vec![k, k, 1], vec![1, 0, 0], vec![0, 1, 0]]
}

fn a(k: i128) -> M {
    vec![vec![0, 0, 1, k], vec![1, 0, 0, 0], vec![0, 1, 0, 0], vec![0, 1, 1, k - 1]]
}

fn bprime(k: i128, l: i128, m: i128) -> M {
    vec![vec![k * (l - 1) + 1, k * (l * (m - 1) + m), 2 * k - 1], vec![l - 1, l * (m - 1) + 1, 1], vec![0, m - 1, 1]]
}

fn in_v(y: &[i128]) -> bool {
    let p = y[0] + y[3] - y[5];
    p == y[4] - y[7] && p == y[6] - y[1]
}

fn criterion_1() -> Outcome {
    let bpp: M = vec![vec![2, 1, 1], vec![1, 1, 0], vec![1, 1, 1]];
    let mut triples_ok = true;
    for k in 1..=10 {
        for l in 1..=10 {
            for m in 1..=10 {
                triples_ok &= mm(&mm(&b(k), &b(l)), &b(m)) == mm(&bprime(k, l, m), &bpp);
            }
        }
    }
    let r: Vec<M> = (1..=10).map(|k| to_m(&mat_r(k).unwrap())).collect();
    let rp: M = (0..9).map(|i| (0..9).map(|j| r[1][i][j] - r[0][i][j]).collect()).collect();
    let rp2 = mm(&rp, &rp);
    let idem = mm(&rp2, &rp2) == rp2;
    let mut u = vec![0i128; 9];
    u[0] = 1;
    u[5] = 1;
    let mut v = vec![0i128; 9];
    v[8] = 1;
    let swaps = mv(&rp, &u) == v && mv(&rp, &v) == u;

    // basis of V: free coordinates y2..y6, y8, y9; y1 and y7 solved from the two equations
    let basis: Vec<Vec<i128>> = [1usize, 2, 3, 4, 5, 7, 8]
        .iter()
        .map(|&f| {
            let mut y = vec![0i128; 9];
            y[f] = 1;
            let c = y[4] - y[7];
            y[6] = c + y[1];
            y[0] = c - y[3] + y[5];
            y
        })
        .collect();
    let v_ok = basis.iter().all(|y| in_v(y)) && r.iter().all(|rk| basis.iter().all(|y| in_v(&mv(rk, y))));

    // positivity of six-fold products depends only on the zero patterns of the factors
    let pattern = |m: &M| -> Vec<Vec<bool>> { m.iter().map(|r| r.iter().map(|&x| x != 0).collect()).collect() };
    let patterns: Vec<Vec<Vec<bool>>> = {
        let mut p: Vec<_> = r.iter().map(pattern).collect();
        p.dedup();
        p
    };
    let bool_mm = |x: &Vec<Vec<bool>>, y: &Vec<Vec<bool>>| -> Vec<Vec<bool>> {
        (0..9).map(|i| (0..9).map(|j| (0..9).any(|t| x[i][t] && y[t][j])).collect()).collect()
    };
    let np = patterns.len();
    let mut bad = 0;
    let mut total = 0;
    for code in 0..np.pow(6) {
        let mut c = code;
        let mut acc = patterns[c % np].clone();
        for _ in 1..6 {
            c /= np;
            acc = bool_mm(&acc, &patterns[c % np]);
        }
        total += 1;
        if acc.iter().flatten().any(|x| !x) {
            bad += 1;
        }
    }
    let r1_6 = (0..5).fold(r[0].clone(), |acc, _| mm(&acc, &r[0]));
    let zeros = r1_6.iter().flatten().filter(|&&x| x == 0).count();
    let six_ok = bad == 0;
    outcome(
        triples_ok && idem && swaps && v_ok && six_ok,
        format!(
            "B triples {triples_ok}, R'^4=R'^2 {idem}, R' swaps u/v {swaps}, R(k)V in V {v_ok}, \
             six-fold positivity {six_ok} ({np} zero patterns, {bad}/{total} pattern products with zeros; R(1)^6 has {zeros} zero entries)"
        ),
    )
}

fn criterion_2() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let rq = |rng: &mut ChaCha8Rng| Q::new(BigInt::from(rng.gen_range(1..60)), BigInt::from(rng.gen_range(1..12)));
    let mut ok = 0;
    let mut fails = Vec::new();
    let mut tried = 0;
    while tried < 50 {
        let k = rng.gen_range(1..=5i128);
        let mut wp = [rq(&mut rng), rq(&mut rng), rq(&mut rng)];
        if wp[0] <= wp[1] {
            wp.swap(0, 1);
        }
        if wp[0] == wp[1] {
            continue;
        }
        tried += 1;
        let l: [Q; 4] = std::array::from_fn(|_| rq(&mut rng));
        let bk = b(k);
        let w: [Q; 3] = std::array::from_fn(|i| (0..3).map(|j| Q::from_integer(BigInt::from(bk[i][j])) * &wp[j]).sum());
        let ak = a(k);
        let l_next: [Q; 4] =
            std::array::from_fn(|j| (0..4).map(|i| &l[i] * Q::from_integer(BigInt::from(ak[i][j]))).sum());
        let res = make_z4(&w, &l)
            .and_then(|z| rips_step(&z, k as u64))
            .and_then(|s| make_z4(&wp, &l_next).map(|t| is_isomorphic(&s.complex, &t)));
        match res {
            Ok(true) => ok += 1,
            other => fails.push(format!("k={k} w'={:?}: {other:?}", wp.iter().map(|x| x.to_string()).collect::<Vec<_>>())),
        }
    }
    outcome(fails.is_empty(), format!("{ok}/50 instances isomorphic{}", fails.first().map_or(String::new(), |f| format!("; first failure {f}"))))
}

fn criterion_3() -> Outcome {
    // power iteration for the Perron ray of B(1)
    let mut p = [1.0f64, 1.0, 1.0];
    for _ in 0..2000 {
        let n = [p[0] + p[1] + p[2], p[0], p[1]];
        p = [n[0] / n[2], n[1] / n[2], 1.0];
    }
    let lambda = p[1];
    let tol = Scalar::from_f64(1e-14);
    let sol = solve_widths(&KSequence::Constant { c: 1, n: None }, 64, &tol, 160);
    let (proj_err, lam_ok) = match &sol {
        Ok(s) => {
            let w: Vec<f64> = s.w0().iter().map(Scalar::mid_f64).collect();
            let err = (0..3).map(|i| (w[i] / w[2] - p[i]).abs() / p[i]).fold(0.0, f64::max);
            (err, (w[1] - 1.839286755).abs() < 1e-9)
        }
        Err(_) => (f64::INFINITY, false),
    };
    let trib_ok = proj_err < 1e-12 && lam_ok && (lambda - 1.839286755214161).abs() < 1e-13;

    // enough bits that the last diameters are still separated from zero
    let dbl = WidthSolution::compute(&KSequence::Doubling { k0: 2 }, 24, 1024).unwrap();
    let stages_ok = dbl.checks.iter().all(|c| c.w1_exceeds_w2_plus_w3() && c.w2_exceeds_w3())
        && dbl.stages.iter().all(|w| w[0].certainly_gt(&(&w[1] + &w[2])) && w[1].certainly_gt(&w[2]));
    // undefined diameters (infinite) only occur before the first defined one
    let defined: Vec<&Scalar> = dbl.diameters.iter().skip_while(|d| d.is_none()).map(|d| d.as_ref()).collect::<Option<_>>().unwrap_or_default();
    let monotone = defined.len() > 2 && defined.windows(2).all(|w| w[1].certainly_lt(w[0]) && w[1].is_positive());
    let finite: Vec<f64> = defined.iter().map(|d| d.bounds_f64().1).collect();
    outcome(
        trib_ok && stages_ok && monotone,
        format!(
            "tribonacci projective error {proj_err:.2e} (lambda {lambda:.12}), doubling stage inequalities {stages_ok} on 25 stages, \
             diameter monotone {monotone} (final {:.2e})",
            finite.last().copied().unwrap_or(f64::INFINITY)
        ),
    )
}

fn criterion_4() -> Outcome {
    let ks = KSequence::Doubling { k0: 2 };
    let l0 = [1, 1, 1, 1].map(BigInt::from);
    let seq = match area_sequence(&ks, 16, &l0, true, 192) {
        Ok(s) => s,
        Err(e) => return outcome(false, format!("area sequence failed: {e}")),
    };
    let numeric = seq.certificates.iter().take(16).all(|c| c.margin.is_positive());
    // exact certificate recomputed here: (k A(k) C - (k-2) C B(k)) B(k_{i+1}) >= 0 entrywise
    let c: M = vec![vec![1, 0, 0], vec![0, 1, 0], vec![0, 0, 1], vec![1, 0, 0]];
    let exact = (0..16).all(|i| {
        let k = 2i128 << i;
        let left = mm(&a(k), &c);
        let right = mm(&c, &b(k));
        let d: M = (0..4).map(|r| (0..3).map(|s| k * left[r][s] - (k - 2) * right[r][s]).collect()).collect();
        let m = mm(&d, &b(2 * k));
        m.iter().flatten().all(|&x| x >= 0) && m.iter().flatten().any(|&x| x > 0)
    });
    let s15 = &seq.areas[15];
    let (lo, hi) = s15.bounds_f64();
    let away = lo > 0.0 && lo > 1e6 * (hi - lo);
    outcome(
        numeric && exact && away,
        format!("16 steps: interval margins positive {numeric}, integer certificates {exact}, S_15 in [{lo:.12}, {hi:.12}]"),
    )
}

fn criterion_5() -> Outcome {
    let ks = KSequence::Doubling { k0: 2 };
    let sol = WidthSolution::compute(&ks, 44, 192).unwrap();
    let xs: Vec<[Scalar; 9]> = (0..=21).map(|i| x_from_w(&sol.stages[i]).unwrap()).collect();
    let mut chain_ok = true;
    for i in 0..=20 {
        let r = mat_r(sol.ks[i].to_u64().unwrap()).unwrap();
        chain_ok &= (0..9).all(|row| {
            let coeffs: Vec<Scalar> = r.row(row).iter().map(|x| Scalar::from_int(x.clone())).collect();
            Scalar::dot(&coeffs, &xs[i + 1]).overlaps(&xs[i][row])
        });
    }
    let perm = BlockPermutation::standard();
    let mut blocks_ok = true;
    let mut v_ok = true;
    for i in 0..=21 {
        let w = sol.rational_stage(i);
        let x = x_from_w_exact(&w).unwrap();
        for row in [perm.top(), perm.bottom()] {
            for blk in row {
                blocks_ok &= blk.iter().map(|&j| &x[j - 1]).sum::<Q>() == w[0];
            }
        }
        let e = [&x[0] + &x[3] - &x[5], &x[4] - &x[7], &x[6] - &x[1]];
        v_ok &= e.iter().all(Zero::is_zero);
        let vc = check_v(&xs[i]).unwrap();
        v_ok &= vc.holds && vc.common.contains_zero();
    }
    outcome(chain_ok && blocks_ok && v_ok, format!("chain i<=20 {chain_ok}, block sums exact {blocks_ok}, V-expressions zero {v_ok}"))
}

fn criterion_6() -> Outcome {
    let samples = [
        [Q::from_integer(7.into()) / Q::from_integer(2.into()), Q::from_integer(2.into()), Q::from_integer(1.into())],
        [
            BigRational::new(29.into(), 7.into()),
            BigRational::new(5.into(), 3.into()),
            BigRational::new(3.into(), 5.into()),
        ],
    ];
    let mut ok = true;
    for k in 1..=4u64 {
        for w in &samples {
            match rauzy_composite(k, w) {
                Ok(run) => {
                    ok &= run.matrix == mat_r(k).unwrap()
                        && run.final_permutation == BlockPermutation::standard()
                        && run.final_lengths == x_from_w_exact(w).unwrap()
                }
                Err(_) => ok = false,
            }
        }
    }
    outcome(ok, "composite of the induction schedule equals R(k) for k = 1..4")
}

fn criterion_7() -> Outcome {
    let ks = KSequence::Doubling { k0: 2 };
    let c = match ergodic_cone(&ks, 24, 256) {
        Ok(c) => c,
        Err(e) => return outcome(false, format!("ergodic cone failed: {e}")),
    };
    let (rlo, rhi) = c.ratio.bounds_f64();
    let ratio_ok = rlo >= 1.0 - 1e-6 && rhi <= 1.0 + 1e-6;
    let sin_lo = c.sin_angle.bounds_f64().0;
    // independent floating-point cocycle for the direction of u
    let mut u = vec![0.0f64; 9];
    u[0] = 1.0;
    u[5] = 1.0;
    for j in (0..24).rev() {
        let k = 2u64 << j;
        let r = to_m(&mat_r(k).unwrap());
        u = (0..9).map(|i| (0..9).map(|t| r[i][t] as f64 * u[t]).sum::<f64>() / k as f64).collect();
    }
    let um: Vec<f64> = c.u.iter().map(Scalar::mid_f64).collect();
    let cos = u.iter().zip(&um).map(|(x, y)| x * y).sum::<f64>()
        / (u.iter().map(|x| x * x).sum::<f64>().sqrt() * um.iter().map(|x| x * x).sum::<f64>().sqrt());
    let defect_ok = c.defect_exceeds(10.0);
    outcome(
        c.separated() && sin_lo > 0.0 && ratio_ok && defect_ok && cos > 1.0 - 1e-9,
        format!(
            "sin angle >= {sin_lo:.6}, alpha/beta in [{rlo}, {rhi}], cycle defect {:.6} vs width {:.1e}, u direction check cos {cos:.12}",
            c.cycle_defect.mid_f64(),
            c.cycle_defect.width_f64()
        ),
    )
}

fn dot_q(h: &[Q; 3], x: &[Q; 3]) -> Q {
    &h[0] * &x[0] + &h[1] * &x[1] + &h[2] * &x[2]
}

fn criterion_8() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut agree = 0;
    let mut disagree = 0;
    let mut critical = 0;
    for _ in 0..10_000 {
        let w: [Q; 3] = std::array::from_fn(|_| Q::new(BigInt::from(rng.gen_range(1..5000)), BigInt::from(rng.gen_range(1..500))));
        let model = SurfaceModel::new(w.each_ref().map(|x| Scalar::from_rational(x, 160))).unwrap();
        let n: [i64; 3] = std::array::from_fn(|_| rng.gen_range(-100..=100));
        let i = rng.gen_range(0..3usize);
        let a = 2.0 * model.h_dot(&n.map(|x| x as f64)) + (rng.gen::<f64>() * 1.4 - 0.2) * model.sigma_f64();
        let aq = Q::from_f64(a).unwrap();
        // exact plane/diagonal and plane/parallelogram intersection
        let sigma: Q = w.iter().sum();
        let h: [Q; 3] = std::array::from_fn(|j| (&sigma - &w[j]) / Q::from_integer(2.into()));
        let base: [Q; 3] = n.map(|x| Q::from_integer((2 * x).into()));
        let plus = |p: &[Q; 3], s: &Q| -> [Q; 3] { std::array::from_fn(|j| &p[j] + s) };
        let mut base_i = base.clone();
        base_i[i] += Q::from_integer(2.into());
        let one = Q::from_integer(1.into());
        let v_exact = dot_q(&h, &base) < aq && aq < dot_q(&h, &plus(&base, &one));
        let corners = [plus(&base, &(&one - &w[i] / &sigma)), plus(&base, &one), plus(&base_i, &(&w[i] / &sigma)), base_i];
        let vals: Vec<Q> = corners.iter().map(|c| dot_q(&h, c)).collect();
        let e_exact = vals.iter().min().unwrap() < &aq && &aq < vals.iter().max().unwrap();
        match (model.vertex_active(&n, a), model.edge_active(&n, i, a)) {
            (Ok(v), Ok(e)) if v == v_exact && e == e_exact => agree += 1,
            (Ok(_), Ok(_)) => disagree += 1,
            _ => critical += 1,
        }
    }
    let g = genus_check();
    let genus_ok = (g.vertices, g.edges, g.faces, g.genus) == (8, 24, 12, 3);
    let mut two_faces = g.manifold_edges;
    for axis in 0..3 {
        for c in 0..2 {
            for j in 0..2 {
                for k in 0..2 {
                    let f = FaceId::new(axis, c, j, k);
                    if face_membership(&f) {
                        two_faces &= f.edges().iter().all(|(q, m)| faces_of_edge(q, *m).len() == 2);
                    }
                }
            }
        }
    }
    outcome(
        disagree == 0 && critical == 0 && genus_ok && two_faces,
        format!(
            "oracle agreement {agree}/10000 ({critical} critical), genus (V,E,F,g) = ({}, {}, {}, {}), two faces per edge {two_faces}",
            g.vertices, g.edges, g.faces, g.genus
        ),
    )
}

fn sample() -> (foliate::Result<foliate::surface::ClusterReport>, Duration) {
    let t = Instant::now();
    let model = foliate::surface::model_for(&KSequence::Doubling { k0: 2 }, 24, 128).unwrap();
    let cfg = SampleConfig { levels: 20, per_level: 3, radius: 200, steps: 100_000, seed: 1, jitter: false, box_half: 400, explicit: Vec::new() };
    (sample_model(&model, &cfg), t.elapsed())
}

fn criterion_9(rep: &foliate::surface::ClusterReport) -> Outcome {
    let comps: Vec<_> = rep.components().collect();
    let trees = comps.iter().filter(|c| c.is_tree).count();
    let two = comps.iter().filter(|c| c.end_estimate == 2).count();
    let share = two as f64 / comps.len().max(1) as f64;
    outcome(
        rep.levels.len() == 20 && comps.len() >= 50 && trees == comps.len() && share >= 0.9,
        format!("{} planes, {} components, {trees} trees, end estimate 2 for {two} ({:.1}%)", rep.levels.len(), comps.len(), 100.0 * share),
    )
}

fn criterion_10(rep: &foliate::surface::ClusterReport) -> Outcome {
    let fitted = rep.curves().filter(|c| c.fit.is_some()).count();
    let all_long = rep.curves().all(|c| c.points == 100_001);
    let pair = rep.levels.iter().filter_map(|l| l.disjoint_pair).map(|p| p.2).fold(None, |m: Option<f64>, d| Some(m.map_or(d, |m| m.max(d))));
    let pair_ok = pair.is_some_and(|d| d < 5.0);
    let ok = rep.clusters.len() == 2
        && rep.antipodal
        && rep.max_spread_deg() < 5.0
        && rep.max_h_component < 1e-9
        && all_long
        && pair_ok;
    outcome(
        ok,
        format!(
            "{fitted} directions at 1e5 steps in {} clusters, antipodal error {:.4} deg, max spread {:.4} deg, max |<H,d>|/|H| {:.1e}, disjoint pair angle {:.4} deg",
            rep.clusters.len(),
            rep.antipodal_error_deg,
            rep.max_spread_deg(),
            rep.max_h_component,
            pair.unwrap_or(f64::NAN)
        ),
    )
}

fn timed(f: impl FnOnce() -> Outcome, limit: Option<Duration>) -> (Outcome, Duration) {
    let t = Instant::now();
    let mut o = f();
    let el = t.elapsed();
    if let Some(l) = limit {
        if el > l {
            o.pass = false;
            o.detail.push_str(&format!("; runtime {el:?} exceeds {l:?}"));
        }
    }
    (o, el)
}

fn main() {
    let mut results: Vec<(u32, Outcome, Duration)> = Vec::new();
    let mut push = |id: u32, (o, d): (Outcome, Duration)| results.push((id, o, d));
    push(1, timed(criterion_1, Some(Duration::from_secs(1))));
    push(2, timed(criterion_2, Some(Duration::from_secs(5))));
    push(3, timed(criterion_3, None));
    push(4, timed(criterion_4, None));
    push(5, timed(criterion_5, None));
    push(6, timed(criterion_6, None));
    push(7, timed(criterion_7, None));
    push(8, timed(criterion_8, Some(Duration::from_secs(5))));
    let (rep, elapsed) = sample();
    match rep {
        Ok(rep) => {
            let mut o9 = criterion_9(&rep);
            if elapsed > Duration::from_secs(120) {
                o9.pass = false;
                o9.detail.push_str(&format!("; runtime {elapsed:?} exceeds 120s"));
            }
            push(9, (o9, elapsed));
            push(10, (criterion_10(&rep), elapsed));
        }
        Err(e) => {
            push(9, (outcome(false, format!("sampling failed: {e}")), elapsed));
            push(10, (outcome(false, format!("sampling failed: {e}")), elapsed));
        }
    }

    let mut out = std::io::stdout().lock();
    for (id, o, d) in &results {
        let _ = writeln!(out, "{} criterion {id:>2}: {} [{:.2?}]", if o.pass { "PASS" } else { "FAIL" }, o.detail, d);
    }
    let failing: Vec<u32> = results.iter().filter(|r| !r.1.pass).map(|r| r.0).collect();
    let _ = writeln!(out, "{} of {} criteria pass; failing {failing:?}, documented as failing {KNOWN_FAILING:?}", results.len() - failing.len(), results.len());
    let _ = out.flush();
    if failing != KNOWN_FAILING {
        std::process::exit(1);
    }
}
