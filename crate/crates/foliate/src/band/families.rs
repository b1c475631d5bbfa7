use num_traits::{Signed, Zero};

use super::complex::{Band, BandComplex, Interval, MultiInterval, Q};
use super::ops::{collapse, free_arcs, is_isomorphic, merge_seams, FreeArc};
use crate::cone::mat_a;
use crate::error::{Error, Result};

fn check_positive(xs: &[Q], what: &str) -> Result<()> {
    if xs.iter().any(|x| !x.is_positive()) {
        return Err(Error::Domain(format!("{what} must be strictly positive")));
    }
    Ok(())
}

/// The symmetric three-band complex on `[0, w1 + w2 + w3]`: band `i` joins
/// `[0, w_i]` to `[s - w_i, s]`.
pub fn make_z3(w: &[Q; 3]) -> Result<BandComplex> {
    check_positive(w, "widths")?;
    let s: Q = w.iter().sum();
    let bands = (0..3)
        .map(|i| Band::new(format!("B{}", i + 1), w[i].clone(), [Q::zero(), &s - &w[i]]))
        .collect();
    BandComplex::new(MultiInterval::new(vec![Interval::new(Q::zero(), s)])?, bands)
}

/// The enhanced four-band complex: main interval `D = [0, s]` and an extra
/// component `J` of length `w1` placed at `2s`.
///
/// | band | width | base 0        | base 1         |
/// |------|-------|---------------|----------------|
/// | B1   | w1    | `J`           | `[w2+w3, s]`   |
/// | B2   | w2    | `J[0, w2]`    | `[w1+w3, s]`   |
/// | B3   | w3    | `[0, w3]`     | `[w1+w2, s]`   |
/// | B4   | w1    | `J`           | `[0, w1]`      |
///
/// Contracting B4 turns it into [`make_z3`]. Requires `w2 <= w1` so that B2 fits on `J`.
pub fn make_z4(w: &[Q; 3], l: &[Q; 4]) -> Result<BandComplex> {
    check_positive(w, "widths")?;
    check_positive(l, "lengths")?;
    if w[1] > w[0] {
        return Err(Error::Domain("the layout needs w2 <= w1".into()));
    }
    let s: Q = w.iter().sum();
    let j0 = &s + &s;
    let support = MultiInterval::new(vec![
        Interval::new(Q::zero(), s.clone()),
        Interval::new(j0.clone(), &j0 + &w[0]),
    ])?;
    let bands = vec![
        Band::new("B1", w[0].clone(), [j0.clone(), &s - &w[0]]).with_length(l[0].clone()),
        Band::new("B2", w[1].clone(), [j0.clone(), &s - &w[1]]).with_length(l[1].clone()),
        Band::new("B3", w[2].clone(), [Q::zero(), &s - &w[2]]).with_length(l[2].clone()),
        Band::new("B4", w[0].clone(), [j0, Q::zero()]).with_length(l[3].clone()),
    ];
    BandComplex::new(support, bands)
}

/// Contract a band one of whose bases fills a whole support component: that
/// component is identified with the other base and disappears.
pub fn contract_band(x: &BandComplex, band: usize) -> Result<BandComplex> {
    let b = x.bands.get(band).ok_or_else(|| Error::Precondition("no such band".into()))?;
    let parts = x.support.parts();
    let mut found = None;
    for side in 0..2 {
        let (s, e) = b.base(side);
        if let Some(ci) = parts.iter().position(|p| p.lo == s && p.hi == e) {
            let (o, oe) = b.base(1 - side);
            if !parts[ci].contains_interval(&o, &oe) {
                found = Some((ci, side));
                break;
            }
        }
    }
    let (ci, side) =
        found.ok_or_else(|| Error::Precondition("no base of this band fills a separate component".into()))?;
    let shift = &b.bases[1 - side] - &b.bases[side];
    let comp = parts[ci].clone();
    let mut bands = Vec::with_capacity(x.bands.len() - 1);
    for (bi, other) in x.bands.iter().enumerate() {
        if bi == band {
            continue;
        }
        let mut nb = other.clone();
        for e in 0..2 {
            let (s, t) = other.base(e);
            if comp.contains_interval(&s, &t) {
                nb.bases[e] = &s + &shift;
            }
        }
        bands.push(nb);
    }
    let mut rest = parts.to_vec();
    rest.remove(ci);
    BandComplex::new(MultiInterval::new(rest)?, bands)
}

/// Area of `make_z4(w, l)`, i.e. `l . C . w` with `C` rows `e1, e2, e3, e1`.
pub fn z4_area(w: &[Q; 3], l: &[Q; 4]) -> Q {
    &l[0] * &w[0] + &l[1] * &w[1] + &l[2] * &w[2] + &l[3] * &w[0]
}

/// Read off `(w, l)` when `x` is isomorphic to some `make_z4(w, l)`.
pub fn recognize_z4(x: &BandComplex) -> Option<([Q; 3], [Q; 4])> {
    let x = merge_seams(x);
    if x.bands.len() != 4 || !x.is_enhanced() {
        return None;
    }
    let idx = [0usize, 1, 2, 3];
    for p in permutations(&idx) {
        let b: Vec<&Band> = p.iter().map(|&i| &x.bands[i]).collect();
        if b[3].width != b[0].width {
            continue;
        }
        let w = [b[0].width.clone(), b[1].width.clone(), b[2].width.clone()];
        let l = [0, 1, 2, 3].map(|i| b[i].length.clone().unwrap());
        if let Ok(z) = make_z4(&w, &l) {
            if is_isomorphic(&x, &z) {
                return Some((w, l));
            }
        }
    }
    None
}

fn permutations(items: &[usize]) -> Vec<Vec<usize>> {
    if items.len() <= 1 {
        return vec![items.to_vec()];
    }
    let mut out = Vec::new();
    for i in 0..items.len() {
        let mut rest = items.to_vec();
        let head = rest.remove(i);
        for mut tail in permutations(&rest) {
            tail.insert(0, head);
            out.push(tail);
        }
    }
    out
}

/// Outcome of one Rips step on `Z(w, l)`.
#[derive(Clone, Debug)]
pub struct RipsStep {
    pub complex: BandComplex,
    pub collapses: Vec<FreeArc>,
    pub w: [Q; 3],
    pub l: [Q; 4],
    pub w_next: [Q; 3],
    pub l_next: [Q; 4],
}

/// Run the machine on `Z(w, l)` with `w = B(k) w'` until it reaches a complex
/// isomorphic to `Z(w', l A(k))`.
///
/// Each collapse uses the single free arc other than `(w1, w1 + w3)` on the
/// main interval, and seams are merged after every collapse, so the complex
/// keeps four long bands throughout. The machine stops once the area has
/// dropped to that of the target.
pub fn rips_step(z: &BandComplex, k: u64) -> Result<RipsStep> {
    if k == 0 {
        return Err(Error::Domain("k must be at least 1".into()));
    }
    let (w, l) = recognize_z4(z).ok_or_else(|| Error::Structural("complex is not of the form Z(w, l)".into()))?;
    let kq = Q::from_integer(k.into());
    let w3_next = &w[0] - &kq * (&w[1] + &w[2]);
    if !w3_next.is_positive() {
        return Err(Error::Structural(format!("widths are not in B({k}) applied to the positive cone")));
    }
    let w_next = [w[1].clone(), w[2].clone(), w3_next];
    if w_next[0] <= w_next[1] {
        return Err(Error::Structural("no valid free-arc sequence: the step needs w2 > w3".into()));
    }
    let a = mat_a(k)?;
    let l_next: [Q; 4] = std::array::from_fn(|j| {
        (0..4).map(|i| &l[i] * Q::from_integer(a.get(i, j).clone())).sum()
    });
    let target = z4_area(&w_next, &l_next);
    let reserved = (w[0].clone(), &w[0] + &w[2]);

    let mut cx = make_z4(&w, &l)?;
    let mut collapses = Vec::new();
    let cap = 4 * (k as usize + 2);
    loop {
        let area = cx.area_exact()?;
        if area == target {
            break;
        }
        if area < target || collapses.len() >= cap {
            return Err(Error::Structural("collapse sequence overshot the target complex".into()));
        }
        let arcs: Vec<FreeArc> = free_arcs(&cx)
            .into_iter()
            .filter(|f| !(f.lo == reserved.0 && f.hi == reserved.1))
            .collect();
        if arcs.len() != 1 {
            return Err(Error::Structural(format!(
                "expected exactly one usable free arc, found {}",
                arcs.len()
            )));
        }
        cx = merge_seams(&collapse(&cx, &arcs[0])?);
        collapses.push(arcs[0].clone());
    }
    Ok(RipsStep { complex: cx, collapses, w, l, w_next, l_next })
}
