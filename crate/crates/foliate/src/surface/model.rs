use std::cmp::Ordering;

use crate::cone::h_from_w;
use crate::error::{Error, Result};
use crate::numerics::Scalar;

pub type Lattice = [i64; 3];

/// The surface with direction `H` and lattice `2Z^3`. `sigma = w1 + w2 + w3`
/// and `2 H_i = sigma - w_i`.
///
/// Predicates run in `f64` first. When a value lands within a relative `1e-12`
/// of a threshold they are redone with the interval enclosures, and a
/// `CriticalLevel` error is returned if that is still undecided.
#[derive(Clone, Debug)]
pub struct SurfaceModel {
    w: [Scalar; 3],
    h: [Scalar; 3],
    sigma: Scalar,
    wf: [f64; 3],
    hf: [f64; 3],
    sigmaf: f64,
}

/// Relative margin below which the `f64` path defers to intervals.
const MARGIN: f64 = 1e-12;

#[derive(Clone, Copy)]
enum Bound {
    Zero,
    W(usize),
    SigmaMinusW(usize),
    Sigma,
}

impl SurfaceModel {
    /// Model for widths `w`; they must be positive (the thin case lives there).
    pub fn new(w: [Scalar; 3]) -> Result<Self> {
        if w.iter().any(|x| !x.is_positive()) {
            return Err(Error::Domain("widths must be positive".into()));
        }
        let h = h_from_w(&w);
        Ok(Self::build(w, h))
    }

    /// Model for an arbitrary positive `H`; `w_i = sigma - 2 H_i` may then be negative.
    pub fn from_h(h: [Scalar; 3]) -> Result<Self> {
        if h.iter().any(|x| !x.is_positive()) {
            return Err(Error::Domain("H must have positive coordinates".into()));
        }
        let sigma = Scalar::sum(&h);
        let w = std::array::from_fn(|i| &sigma - &h[i].mul_pow2(1));
        Ok(Self::build(w, h))
    }

    fn build(w: [Scalar; 3], h: [Scalar; 3]) -> Self {
        let sigma = Scalar::sum(&w);
        SurfaceModel {
            wf: w.each_ref().map(Scalar::mid_f64),
            hf: h.each_ref().map(Scalar::mid_f64),
            sigmaf: sigma.mid_f64(),
            w,
            h,
            sigma,
        }
    }

    pub fn w(&self) -> &[Scalar; 3] {
        &self.w
    }

    pub fn h(&self) -> &[Scalar; 3] {
        &self.h
    }

    pub fn sigma(&self) -> &Scalar {
        &self.sigma
    }

    pub fn h_f64(&self) -> [f64; 3] {
        self.hf
    }

    pub fn w_f64(&self) -> [f64; 3] {
        self.wf
    }

    pub fn sigma_f64(&self) -> f64 {
        self.sigmaf
    }

    /// All `w_i > 0`, i.e. `H` satisfies the triangle inequalities.
    pub fn triangle(&self) -> bool {
        self.w.iter().all(Scalar::is_positive)
    }

    pub fn h_dot(&self, x: &[f64; 3]) -> f64 {
        self.hf[0] * x[0] + self.hf[1] * x[1] + self.hf[2] * x[2]
    }

    /// `a - <H, 2n>`, the height of level `a` above the bottom of the diagonal `D(2n)`.
    pub fn t_f64(&self, n: &Lattice, a: f64) -> f64 {
        a - 2.0 * (self.hf[0] * n[0] as f64 + self.hf[1] * n[1] as f64 + self.hf[2] * n[2] as f64)
    }

    fn t_scalar(&self, n: &Lattice, a: f64) -> Scalar {
        let s = Scalar::sum(&[
            &self.h[0] * &Scalar::from_int(n[0]),
            &self.h[1] * &Scalar::from_int(n[1]),
            &self.h[2] * &Scalar::from_int(n[2]),
        ]);
        Scalar::from_f64(a) - s.mul_pow2(1)
    }

    fn bound_f64(&self, b: Bound) -> f64 {
        match b {
            Bound::Zero => 0.0,
            Bound::W(i) => self.wf[i],
            Bound::SigmaMinusW(i) => self.sigmaf - self.wf[i],
            Bound::Sigma => self.sigmaf,
        }
    }

    fn bound_scalar(&self, b: Bound) -> Scalar {
        match b {
            Bound::Zero => Scalar::zero(),
            Bound::W(i) => self.w[i].clone(),
            Bound::SigmaMinusW(i) => &self.sigma - &self.w[i],
            Bound::Sigma => self.sigma.clone(),
        }
    }

    /// Whether `lo < a - <H, 2n> < hi`.
    fn t_in(&self, n: &Lattice, a: f64, lo: Bound, hi: Bound) -> Result<bool> {
        let t = self.t_f64(n, a);
        let mag = a.abs() + 2.0 * (0..3).map(|i| (self.hf[i] * n[i] as f64).abs()).sum::<f64>() + self.sigmaf;
        let tol = MARGIN * mag;
        let (l, h) = (self.bound_f64(lo), self.bound_f64(hi));
        if (t - l).abs() > tol && (t - h).abs() > tol {
            return Ok(l < t && t < h);
        }
        let ts = self.t_scalar(n, a);
        let (ls, hs) = (self.bound_scalar(lo), self.bound_scalar(hi));
        let above = strict_cmp(&ts, &ls).map(|o| o == Ordering::Greater);
        let below = strict_cmp(&ts, &hs).map(|o| o == Ordering::Less);
        match (above, below) {
            (Some(x), Some(y)) => Ok(x && y),
            (Some(false), _) | (_, Some(false)) => Ok(false),
            _ => Err(Error::CriticalLevel(format!("level {a} passes through a critical point near n = {n:?}"))),
        }
    }

    /// The plane `<H, x> = a` crosses the open diagonal from `2n` to `2n + (1,1,1)`.
    pub fn vertex_active(&self, n: &Lattice, a: f64) -> Result<bool> {
        self.t_in(n, a, Bound::Zero, Bound::Sigma)
    }

    /// The plane crosses the strip joining the diagonals at `n` and `n + e_i`.
    pub fn edge_active(&self, n: &Lattice, i: usize, a: f64) -> Result<bool> {
        if i > 2 {
            return Err(Error::Domain(format!("axis {i} out of range")));
        }
        self.t_in(n, a, Bound::SigmaMinusW(i), Bound::Sigma)
    }

    /// Same edge seen from its upper end `m = n + e_i`: `0 < a - <H, 2m> < w_i`.
    pub(crate) fn edge_active_from_above(&self, m: &Lattice, i: usize, a: f64) -> Result<bool> {
        self.t_in(m, a, Bound::Zero, Bound::W(i))
    }

    /// Active neighbours of `n` in the section graph, at most six.
    pub fn neighbours(&self, n: &Lattice, a: f64) -> Result<Vec<Lattice>> {
        let mut out = Vec::with_capacity(6);
        for i in 0..3 {
            if self.edge_active(n, i, a)? {
                let mut m = *n;
                m[i] += 1;
                out.push(m);
            }
            if self.edge_active_from_above(n, i, a)? {
                let mut m = *n;
                m[i] -= 1;
                out.push(m);
            }
        }
        Ok(out)
    }

    /// Position of the graph vertex `n` on the plane: `2n + (t / sigma)(1,1,1)`.
    pub fn embed(&self, n: &Lattice, a: f64) -> [f64; 3] {
        let s = self.t_f64(n, a) / self.sigmaf;
        [2.0 * n[0] as f64 + s, 2.0 * n[1] as f64 + s, 2.0 * n[2] as f64 + s]
    }

    /// Orthonormal basis of the plane `<H, x> = 0`.
    pub fn plane_basis(&self) -> [[f64; 3]; 2] {
        let h = self.hf;
        let hn = norm(&h);
        let n = [h[0] / hn, h[1] / hn, h[2] / hn];
        let seed = if n[0].abs() < 0.9 { [1.0, 0.0, 0.0] } else { [0.0, 1.0, 0.0] };
        let d = dot(&seed, &n);
        let e1 = unit(&[seed[0] - d * n[0], seed[1] - d * n[1], seed[2] - d * n[2]]);
        let e2 = cross(&n, &e1);
        [e1, e2]
    }
}

/// `Less`/`Greater` only when the enclosures are strictly separated.
pub(crate) fn strict_cmp(x: &Scalar, y: &Scalar) -> Option<Ordering> {
    if x.hi() < y.lo() {
        Some(Ordering::Less)
    } else if x.lo() > y.hi() {
        Some(Ordering::Greater)
    } else {
        None
    }
}

pub(crate) fn dot(a: &[f64; 3], b: &[f64; 3]) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

pub(crate) fn norm(a: &[f64; 3]) -> f64 {
    dot(a, a).sqrt()
}

pub(crate) fn unit(a: &[f64; 3]) -> [f64; 3] {
    let n = norm(a);
    [a[0] / n, a[1] / n, a[2] / n]
}

pub(crate) fn cross(a: &[f64; 3], b: &[f64; 3]) -> [f64; 3] {
    [a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]]
}
