use foliate::band::*;
use foliate::cone::{mat_a, mat_b};
use foliate::numerics::{tribonacci, Scalar};
use proptest::prelude::*;

fn w3(a: Q, b: Q, c: Q) -> [Q; 3] {
    [a, b, c]
}

fn ones4() -> [Q; 4] {
    [qi(1), qi(1), qi(1), qi(1)]
}

fn single(w: i64, lo: i64, hi: i64, bases: [i64; 2]) -> BandComplex {
    BandComplex::new(
        MultiInterval::new(vec![Interval::new(qi(lo), qi(hi))]).unwrap(),
        vec![Band::new("B", qi(w), [qi(bases[0]), qi(bases[1])])],
    )
    .unwrap()
}

/// Independent oracle: `B(k) w'` and `l A(k)` by integer matrices.
fn apply_b(k: u64, w: &[Q; 3]) -> [Q; 3] {
    let b = mat_b(k).unwrap();
    std::array::from_fn(|i| (0..3).map(|j| Q::from_integer(b.get(i, j).clone()) * &w[j]).sum())
}

fn apply_a(k: u64, l: &[Q; 4]) -> [Q; 4] {
    let a = mat_a(k).unwrap();
    std::array::from_fn(|j| (0..4).map(|i| &l[i] * Q::from_integer(a.get(i, j).clone())).sum())
}

#[test]
fn free_arcs_basic_examples() {
    assert!(free_arcs(&single(1, 0, 1, [0, 0])).is_empty());
    let two = single(1, 0, 2, [0, 1]);
    let arcs = free_arcs(&two);
    assert_eq!(arcs.len(), 2);
    assert_eq!((arcs[0].lo.clone(), arcs[0].hi.clone()), (qi(0), qi(1)));
    assert_eq!((arcs[1].lo.clone(), arcs[1].hi.clone()), (qi(1), qi(2)));
    let z = make_z4(&apply_b(1, &w3(qi(1), qi(1), qi(1))), &ones4()).unwrap();
    assert!(!free_arcs(&z).is_empty());
}

#[test]
fn collapse_two_base_example() {
    let two = single(1, 0, 2, [0, 1]);
    let arcs = free_arcs(&two);
    let out = collapse(&two, &arcs[0]).unwrap();
    // The left half of the support goes away; the band shrinks to a degenerate
    // band sitting at the point 1, and the isolated point 0 is removed with it.
    assert_eq!(out.support().parts(), &[Interval::new(qi(1), qi(2))]);
    assert_eq!(out.bands().len(), 1);
    assert_eq!(out.bands()[0].width, qi(0));
    assert_eq!(out.bands()[0].bases, [qi(1), qi(2)]);
    assert!(collapse(&two, &FreeArc { lo: qi(0), hi: qi(2), band: 0, side: 0 }).is_err());
}

#[test]
fn collapse_whole_base_triggers_point_rule() {
    // A base equal to a whole component: both offspring are degenerate, and the
    // one left alone on an isolated point disappears.
    let cx = BandComplex::new(
        MultiInterval::new(vec![Interval::new(qi(0), qi(1)), Interval::new(qi(5), qi(8))]).unwrap(),
        vec![
            Band::new("X", qi(1), [qi(0), qi(6)]).with_length(qi(2)),
            Band::new("Y", qi(3), [qi(5), qi(5)]).with_length(qi(1)),
        ],
    )
    .unwrap();
    let arc = free_arcs(&cx).into_iter().find(|a| a.lo == qi(0)).unwrap();
    assert_eq!(arc.hi, qi(1));
    let out = collapse(&cx, &arc).unwrap();
    assert_eq!(out.support().len(), 1);
    assert!(out.bands().iter().all(|b| b.length.is_some()));
    assert_eq!(out.bands().iter().filter(|b| b.label == "X").count(), 0);
}

#[test]
fn z3_examples() {
    let z = make_z3(&w3(qi(3), qi(2), qi(1))).unwrap();
    assert_eq!(z.support().parts(), &[Interval::new(qi(0), qi(6))]);
    assert_eq!(z.bands()[0].base(0), (qi(0), qi(3)));
    assert_eq!(z.bands()[0].base(1), (qi(3), qi(6)));
    let z1 = make_z3(&w3(qi(1), qi(1), qi(1))).unwrap();
    assert_eq!(z1.bands()[1].base(0), (qi(0), qi(1)));
    assert_eq!(z1.bands()[1].base(1), (qi(2), qi(3)));
    assert!(is_symmetric(&z).unwrap());
    assert!(make_z3(&w3(qi(0), qi(1), qi(1))).is_err());
}

#[test]
fn z4_examples() {
    let w = w3(qi(3), qi(2), qi(1));
    let z = make_z4(&w, &ones4()).unwrap();
    assert_eq!(z.area_exact().unwrap(), qi(9));
    assert_eq!(complex_area(&z, 64).unwrap().mid_f64(), 9.0);
    let contracted = contract_band(&z, 3).unwrap().forget_lengths();
    assert!(is_isomorphic(&contracted, &make_z3(&w).unwrap()));
    assert!(is_symmetric(&make_z3(&w).unwrap()).unwrap());
    assert!(make_z4(&w3(qi(1), qi(2), qi(1)), &ones4()).is_err());
}

#[test]
fn isomorphism_examples() {
    let x = make_z3(&w3(qi(3), qi(2), qi(1))).unwrap();
    assert!(is_isomorphic(&x, &x));
    assert!(is_isomorphic(&x, &x.translate(&qi(5))));
    // Bands are unlabeled, so permuting the widths gives the same complex.
    assert!(is_isomorphic(&x, &make_z3(&w3(qi(2), qi(3), qi(1))).unwrap()));
    assert!(!is_isomorphic(&x, &make_z3(&w3(qi(4), qi(1), qi(1))).unwrap()));
    let z = make_z4(&w3(qi(3), qi(2), qi(1)), &ones4()).unwrap();
    let mut longer = z.clone();
    let z2 = make_z4(&w3(qi(3), qi(2), qi(1)), &[qi(1), qi(1), qi(1), qi(2)]).unwrap();
    assert!(!is_isomorphic(&z, &z2));
    assert!(is_isomorphic(&z.forget_lengths(), &z2.forget_lengths()));
    longer = longer.translate(&q(-7, 3));
    assert!(is_isomorphic(&z, &longer));
}

#[test]
fn symmetry_examples() {
    assert!(!is_symmetric(&single(1, 0, 3, [0, 1])).unwrap());
    let empty = BandComplex::new(MultiInterval::new(vec![Interval::new(qi(0), qi(3))]).unwrap(), vec![]).unwrap();
    assert!(is_symmetric(&empty).unwrap());
}

#[test]
fn rips_step_small_examples() {
    let wp = w3(qi(1), q(1, 2), q(1, 3));
    let w = apply_b(1, &wp);
    let step = rips_step(&make_z4(&w, &ones4()).unwrap(), 1).unwrap();
    assert_eq!(step.l_next, [qi(1), qi(2), qi(2), qi(1)]);
    assert!(is_isomorphic(&step.complex, &make_z4(&wp, &step.l_next).unwrap()));
    assert_eq!(apply_b(1, &w3(qi(1), qi(1), qi(1))), w3(qi(3), qi(1), qi(1)));
    assert_eq!(apply_b(2, &w3(qi(1), qi(1), qi(1))), w3(qi(5), qi(1), qi(1)));
    let before = make_z4(&w, &ones4()).unwrap().area_exact().unwrap();
    assert!(step.complex.area_exact().unwrap() < before);
}

#[test]
fn rips_step_rejects_foreign_widths() {
    // w3' = w1 - k(w2 + w3) <= 0: not in the image of B(3).
    let z = make_z4(&w3(qi(5), qi(1), qi(1)), &ones4()).unwrap();
    assert!(matches!(rips_step(&z, 3), Err(foliate::Error::Structural(_))));
    let z3 = make_z3(&w3(qi(3), qi(2), qi(1))).unwrap();
    assert!(matches!(rips_step(&z3, 1), Err(foliate::Error::Structural(_))));
}

#[test]
fn json_roundtrip() {
    let z = make_z4(&w3(q(7, 3), q(5, 4), q(1, 2)), &[qi(2), qi(3), q(5, 2), qi(7)]).unwrap();
    let text = z.to_json(None).unwrap();
    assert!(text.contains("\"precision\": \"exact\""));
    assert!(text.contains("7/3"));
    let back = BandComplex::from_json(&text).unwrap();
    assert_eq!(back, z);
    let approx = z.to_json(Some(6)).unwrap();
    assert!(approx.contains("2.333333") && approx.contains("decimal:6"));
}

#[test]
fn rank_examples() {
    let tol = Scalar::from_f64(1e-9);
    let r = rank_estimate(&make_z3(&w3(qi(3), qi(2), qi(1))).unwrap(), 10, &tol, 128);
    assert_eq!(r.rank, 1);
    let l = tribonacci(200);
    let lq = rational_of(&l);
    let z = make_z3(&w3(&lq * &lq, lq.clone(), qi(1))).unwrap();
    assert_eq!(rank_estimate(&z, 10, &tol, 200).rank, 3);
    let s2 = rational_of(&Scalar::from_int(2).with_prec(200).sqrt().unwrap());
    let z = make_z3(&w3(&s2 + qi(1), s2.clone(), qi(1))).unwrap();
    let r = rank_estimate(&z, 10, &tol, 200);
    assert_eq!(r.rank, 2);
}

fn pos_q() -> impl Strategy<Value = Q> {
    (1i64..60, 1i64..12).prop_map(|(n, d)| q(n, d))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn z3_is_symmetric(a in pos_q(), b in pos_q(), c in pos_q()) {
        prop_assert!(is_symmetric(&make_z3(&[a, b, c]).unwrap()).unwrap());
    }

    #[test]
    fn collapse_soundness(a in pos_q(), b in pos_q(), c in pos_q(), k in 1u64..4) {
        let (a, b) = if a > b { (a, b) } else if a < b { (b, a) } else { (a + qi(1), b) };
        let w = apply_b(k, &[a, b, c]);
        let mut cx = make_z4(&w, &ones4()).unwrap();
        for _ in 0..6 {
            let arcs = free_arcs(&cx);
            if arcs.is_empty() { break; }
            let arc = arcs[0].clone();
            let parent = cx.bands()[arc.band].clone();
            let removed = (&arc.hi - &arc.lo) * parent.length.clone().unwrap();
            let next = collapse(&cx, &arc).unwrap();
            prop_assert!(next.validate().is_ok());
            let drop = cx.area_exact().unwrap() - next.area_exact().unwrap();
            prop_assert!(drop >= removed.clone() && drop > qi(0));
            // Offspring keep the parent's length.
            for b in next.bands() {
                if b.label == parent.label {
                    prop_assert_eq!(b.length.clone(), parent.length.clone());
                }
            }
            cx = next;
        }
    }

    #[test]
    fn rips_identity(k in 1u64..6, a in pos_q(), b in pos_q(), c in pos_q(), l in proptest::array::uniform4(pos_q())) {
        prop_assume!(a > b);
        let wp = [a, b, c];
        let w = apply_b(k, &wp);
        let step = rips_step(&make_z4(&w, &l).unwrap(), k).unwrap();
        let target = make_z4(&wp, &apply_a(k, &l)).unwrap();
        prop_assert!(is_isomorphic(&step.complex, &target));
        prop_assert_eq!(step.collapses.len() as u64, k + 1);
    }
}

#[test]
fn big_k_machine_terminates() {
    let wp = w3(qi(5), qi(3), qi(2));
    let k = 12;
    let w = apply_b(k, &wp);
    let step = rips_step(&make_z4(&w, &ones4()).unwrap(), k).unwrap();
    assert!(is_isomorphic(&step.complex, &make_z4(&wp, &apply_a(k, &ones4())).unwrap()));
}
