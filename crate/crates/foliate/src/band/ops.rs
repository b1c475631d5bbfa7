use std::collections::BTreeSet;

use num_traits::Zero;

use super::complex::{BandComplex, Interval, Q};
use crate::error::{Error, Result};
use crate::numerics::{integer_relation, Scalar};

/// A maximal open interval `(lo, hi)` of the support covered by exactly one base.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct FreeArc {
    pub lo: Q,
    pub hi: Q,
    pub band: usize,
    pub side: usize,
}

/// All maximal free arcs, sorted by left endpoint.
pub fn free_arcs(x: &BandComplex) -> Vec<FreeArc> {
    let bases: Vec<(Q, Q, usize, usize)> = x
        .bands
        .iter()
        .enumerate()
        .flat_map(|(bi, b)| (0..2).map(move |side| {
            let (s, e) = b.base(side);
            (s, e, bi, side)
        }))
        .collect();
    let mut arcs = Vec::new();
    for comp in x.support.parts() {
        let mut pts: BTreeSet<Q> = BTreeSet::new();
        pts.insert(comp.lo.clone());
        pts.insert(comp.hi.clone());
        for (s, e, _, _) in &bases {
            if comp.contains(s) {
                pts.insert(s.clone());
            }
            if comp.contains(e) {
                pts.insert(e.clone());
            }
        }
        let pts: Vec<Q> = pts.into_iter().collect();
        let cover = |a: &Q, b: &Q| -> Vec<(usize, usize)> {
            bases.iter().filter(|(s, e, _, _)| s <= a && b <= e).map(|&(_, _, bi, side)| (bi, side)).collect()
        };
        let touch = |p: &Q| -> Vec<(usize, usize)> {
            bases.iter().filter(|(s, e, _, _)| s <= p && p <= e).map(|&(_, _, bi, side)| (bi, side)).collect()
        };
        let elems: Vec<(Q, Q, Vec<(usize, usize)>)> =
            pts.windows(2).map(|w| (w[0].clone(), w[1].clone(), cover(&w[0], &w[1]))).collect();
        let mut i = 0;
        while i < elems.len() {
            if elems[i].2.len() != 1 {
                i += 1;
                continue;
            }
            let cov = &elems[i].2;
            let mut j = i;
            while j + 1 < elems.len() {
                let (nx, _, ncov) = &elems[j + 1];
                if ncov != cov || &touch(nx) != cov {
                    break;
                }
                j += 1;
            }
            arcs.push(FreeArc { lo: elems[i].0.clone(), hi: elems[j].1.clone(), band: cov[0].0, side: cov[0].1 });
            i = j + 1;
        }
    }
    arcs.sort();
    arcs
}

/// Collapse from a free arc: remove the arc from the support and the matching
/// open strip from its band, which splits into two offspring of the same length.
pub fn collapse(x: &BandComplex, arc: &FreeArc) -> Result<BandComplex> {
    if !free_arcs(x).contains(arc) {
        return Err(Error::Precondition(format!("({}, {}) is not a free arc", arc.lo, arc.hi)));
    }
    let b = &x.bands[arc.band];
    let s = &b.bases[arc.side];
    let c = &arc.lo - s;
    let d = &arc.hi - s;
    let mut left = b.clone();
    left.width = c;
    let mut right = b.clone();
    right.width = &b.width - &d;
    right.bases = [&b.bases[0] + &d, &b.bases[1] + &d];

    let mut bands = x.bands.clone();
    bands.splice(arc.band..=arc.band, [left, right]);

    let mut parts = Vec::with_capacity(x.support.len() + 1);
    for p in x.support.parts() {
        if p.contains_interval(&arc.lo, &arc.hi) {
            parts.push(Interval::new(p.lo.clone(), arc.lo.clone()));
            parts.push(Interval::new(arc.hi.clone(), p.hi.clone()));
        } else {
            parts.push(p.clone());
        }
    }
    let mut out = x.clone();
    *out.support.parts_mut() = parts;
    out.bands = bands;
    remove_isolated_points(&mut out);
    Ok(out)
}

/// A point component with a single attached degenerate band is removed together with that band.
fn remove_isolated_points(x: &mut BandComplex) {
    loop {
        let mut hit = None;
        for (ci, p) in x.support.parts().iter().enumerate() {
            if !p.is_point() {
                continue;
            }
            let att = x.attachments_meeting(&p.lo, &p.hi);
            if att.len() == 1 && x.bands[att[0].0].width.is_zero() {
                hit = Some((ci, att[0].0));
                break;
            }
        }
        match hit {
            Some((ci, bi)) => {
                x.support.parts_mut().remove(ci);
                x.bands.remove(bi);
            }
            None => break,
        }
    }
}

/// Merge every seam, i.e. a support component met by exactly two bases of
/// different bands that both fill it. The two bands become one long band whose
/// length is the sum of theirs. The result is isomorphic to the input and uses
/// the fewest bands reachable this way.
pub fn merge_seams(x: &BandComplex) -> BandComplex {
    let mut cx = x.clone();
    loop {
        let mut hit = None;
        for (ci, p) in cx.support.parts().iter().enumerate() {
            let att = cx.attachments_meeting(&p.lo, &p.hi);
            if att.len() != 2 || att[0].0 == att[1].0 {
                continue;
            }
            let fills = |&(bi, side): &(usize, usize)| {
                let b = &cx.bands[bi];
                b.bases[side] == p.lo && b.width == p.len()
            };
            if fills(&att[0]) && fills(&att[1]) {
                hit = Some((ci, att[0], att[1]));
                break;
            }
        }
        let Some((ci, (b1, e1), (b2, e2))) = hit else { break };
        let x1 = &cx.bands[b1];
        let x2 = &cx.bands[b2];
        let length = match (&x1.length, &x2.length) {
            (Some(a), Some(b)) => Some(a + b),
            _ => None,
        };
        let merged = super::complex::Band {
            label: format!("{}+{}", x1.label, x2.label),
            width: x1.width.clone(),
            length,
            bases: [x1.bases[1 - e1].clone(), x2.bases[1 - e2].clone()],
        };
        let (first, second) = (b1.min(b2), b1.max(b2));
        cx.bands.remove(second);
        cx.bands[first] = merged;
        cx.support.parts_mut().remove(ci);
    }
    cx
}

type Signature = Vec<(Q, Option<Q>, Vec<(usize, Q)>)>;

fn signature(x: &BandComplex, perm: &[usize], with_lengths: bool) -> Signature {
    let parts = x.support.parts();
    let mut sig: Signature = x
        .bands
        .iter()
        .map(|b| {
            let mut ends: Vec<(usize, Q)> = (0..2)
                .map(|side| {
                    let (s, e) = b.base(side);
                    let ci = x.support.component_of(&s, &e).expect("valid complex");
                    (perm[ci], &s - &parts[ci].lo)
                })
                .collect();
            ends.sort();
            let len = if with_lengths { b.length.clone() } else { None };
            (b.width.clone(), len, ends)
        })
        .collect();
    sig.sort();
    sig
}

/// Isomorphism of (enhanced) band complexes: after merging seams, a matching of
/// support components up to translation and of bands with equal widths and
/// offsets. Lengths of long bands are compared when both complexes are enhanced.
pub fn is_isomorphic(x: &BandComplex, y: &BandComplex) -> bool {
    let x = merge_seams(x);
    let y = merge_seams(y);
    if x.support.len() != y.support.len() || x.bands.len() != y.bands.len() {
        return false;
    }
    let with_lengths = x.is_enhanced() && y.is_enhanced() && !x.bands.is_empty();
    let n = x.support.len();
    let ident: Vec<usize> = (0..n).collect();
    let target = signature(&y, &ident, with_lengths);
    let ylens: Vec<Q> = y.support.parts().iter().map(Interval::len).collect();
    let xlens: Vec<Q> = x.support.parts().iter().map(Interval::len).collect();
    let mut perm = vec![usize::MAX; n];
    let mut used = vec![false; n];
    search_perm(0, &xlens, &ylens, &mut perm, &mut used, &mut |p| signature(&x, p, with_lengths) == target)
}

fn search_perm(
    i: usize,
    xlens: &[Q],
    ylens: &[Q],
    perm: &mut Vec<usize>,
    used: &mut Vec<bool>,
    accept: &mut dyn FnMut(&[usize]) -> bool,
) -> bool {
    if i == xlens.len() {
        return accept(perm);
    }
    for j in 0..ylens.len() {
        if used[j] || xlens[i] != ylens[j] {
            continue;
        }
        used[j] = true;
        perm[i] = j;
        if search_perm(i + 1, xlens, ylens, perm, used, accept) {
            return true;
        }
        used[j] = false;
    }
    false
}

/// Whether the flip `x -> lo + hi - x` of a single-interval support maps the set of bands to itself.
pub fn is_symmetric(x: &BandComplex) -> Result<bool> {
    let parts = x.support.parts();
    if parts.len() != 1 {
        return Err(Error::Precondition("symmetry is only checked for a single support interval".into()));
    }
    let total = &parts[0].lo + &parts[0].hi;
    let key = |w: &Q, l: &Option<Q>, a: Q, b: Q| {
        let (a, b) = if a <= b { (a, b) } else { (b, a) };
        (w.clone(), l.clone(), a, b)
    };
    let mut orig: Vec<_> = x.bands.iter().map(|b| key(&b.width, &b.length, b.bases[0].clone(), b.bases[1].clone())).collect();
    let mut flipped: Vec<_> = x
        .bands
        .iter()
        .map(|b| {
            let f = |s: &Q| &total - s - &b.width;
            key(&b.width, &b.length, f(&b.bases[0]), f(&b.bases[1]))
        })
        .collect();
    orig.sort();
    flipped.sort();
    Ok(orig == flipped)
}

/// Total area as a certified scalar.
pub fn complex_area(x: &BandComplex, prec: u32) -> Result<Scalar> {
    Ok(Scalar::from_rational(&x.area_exact()?, prec))
}

#[derive(Clone, Debug)]
pub struct RankEstimate {
    pub rank: usize,
    pub generators: Vec<Scalar>,
    /// For every rejected generator, the relation with the accepted basis that was found
    /// (basis coefficients first, the generator's coefficient last).
    pub relations: Vec<Vec<i64>>,
}

/// Numeric rank: the Q-dimension of the span of the periods, estimated greedily
/// with bounded integer-relation search. Periods are taken as the distances
/// between consecutive base endpoints on each support component, together with
/// the band widths.
pub fn rank_estimate(x: &BandComplex, max_coeff: u32, tol: &Scalar, prec: u32) -> RankEstimate {
    let mut gens: Vec<Q> = Vec::new();
    for b in &x.bands {
        gens.push(b.width.clone());
    }
    for comp in x.support.parts() {
        let mut pts: BTreeSet<Q> = BTreeSet::new();
        for b in &x.bands {
            for side in 0..2 {
                let (s, e) = b.base(side);
                if comp.contains(&s) {
                    pts.insert(s);
                    pts.insert(e);
                }
            }
        }
        let pts: Vec<Q> = pts.into_iter().collect();
        for w in pts.windows(2) {
            gens.push(&w[1] - &w[0]);
        }
    }
    let generators: Vec<Scalar> =
        gens.iter().filter(|g| !g.is_zero()).map(|g| Scalar::from_rational(g, prec)).collect();
    let mut basis: Vec<Scalar> = Vec::new();
    let mut relations = Vec::new();
    for g in &generators {
        let mut trial = basis.clone();
        trial.push(g.clone());
        match integer_relation(&trial, max_coeff, tol) {
            Some(rel) => relations.push(rel),
            None => basis.push(g.clone()),
        }
    }
    RankEstimate { rank: basis.len(), generators, relations }
}
