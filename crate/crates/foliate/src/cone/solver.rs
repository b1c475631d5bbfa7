use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed};

use super::kseq::KSequence;
use super::matrices::{mat_a_big, mat_b_big, mat_c};
use crate::error::{Error, Result};
use crate::numerics::{hilbert_diameter, IMatrix, Scalar};

/// Stages below the last reported one that the barycenter seed is placed at, so
/// every reported stage carries an exact inequality certificate.
pub const SEED_MARGIN: usize = 2;

/// Exact certificate that a stage lies in `{w1 > w2 + w3, w2 > w3}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StageCheck {
    /// `(1, -1, -1) P_i`, nonnegative with a positive entry when certified.
    pub first: Vec<BigInt>,
    /// `(0, 1, -1) P_i`.
    pub second: Vec<BigInt>,
}

impl StageCheck {
    fn of(p: &IMatrix) -> Self {
        let f: Vec<BigInt> = [1, -1, -1].iter().map(|&x| BigInt::from(x)).collect();
        let g: Vec<BigInt> = [0, 1, -1].iter().map(|&x| BigInt::from(x)).collect();
        StageCheck { first: p.apply_left(&f), second: p.apply_left(&g) }
    }

    fn certifies(v: &[BigInt]) -> bool {
        v.iter().all(|x| !x.is_negative()) && v.iter().any(Signed::is_positive)
    }

    pub fn w1_exceeds_w2_plus_w3(&self) -> bool {
        Self::certifies(&self.first)
    }

    pub fn w2_exceeds_w3(&self) -> bool {
        Self::certifies(&self.second)
    }

    pub fn holds(&self) -> bool {
        self.w1_exceeds_w2_plus_w3() && self.w2_exceeds_w3()
    }
}

/// Certified width vectors `w_0, ..., w_depth` with `w_i = B(k_i) w_{i+1}`,
/// normalized by `w_{0,3} = 1`.
#[derive(Clone, Debug)]
pub struct WidthSolution {
    pub ks: Vec<BigInt>,
    pub depth: usize,
    pub prec: u32,
    /// Enclosures of `w_i`, `i = 0..=depth`.
    pub stages: Vec<[Scalar; 3]>,
    /// Hilbert diameter of `B(k_0) ... B(k_{d-1}) K` for `d = 0..=depth + SEED_MARGIN`;
    /// `None` while that cone still touches the boundary of `K`.
    pub diameters: Vec<Option<Scalar>>,
    pub checks: Vec<StageCheck>,
    /// `P_i = B(k_i) ... B(k_{n-1})`, `n = depth + SEED_MARGIN`.
    products: Vec<IMatrix>,
}

impl WidthSolution {
    /// Build the nested cones without any tolerance requirement.
    pub fn compute(ks: &KSequence, depth: usize, prec: u32) -> Result<Self> {
        if depth < 6 {
            return Err(Error::Domain("depth must be at least 6".into()));
        }
        let n = depth + SEED_MARGIN;
        let kv = ks.terms(n)?;
        let bs: Vec<IMatrix> = kv.iter().map(mat_b_big).collect::<Result<_>>()?;

        let mut products = vec![IMatrix::identity(3); n + 1];
        for i in (0..n).rev() {
            products[i] = bs[i].matmul(&products[i + 1]);
        }
        let mut prefix = IMatrix::identity(3);
        let mut diameters = Vec::with_capacity(n + 1);
        for d in 0..=n {
            if d > 0 {
                prefix = prefix.matmul(&bs[d - 1]);
            }
            let cols: Vec<Vec<BigInt>> = (0..3).map(|j| prefix.col(j)).collect();
            diameters.push(hilbert_diameter(&cols, prec)?);
        }

        let denom: Vec<BigInt> = products[0].row(2).to_vec();
        if denom.iter().any(|x| !x.is_positive()) {
            return Err(Error::Accuracy {
                what: "cone has not left the boundary; increase depth".into(),
                achieved: f64::INFINITY,
            });
        }
        let stages = (0..=depth)
            .map(|i| {
                std::array::from_fn(|r| ratio_range(products[i].row(r), &denom, prec))
            })
            .collect();
        let checks = (0..=depth).map(|i| StageCheck::of(&products[i])).collect();
        Ok(WidthSolution { ks: kv, depth, prec, stages, diameters, checks, products })
    }

    /// Certified Hilbert diameter of the final cone, i.e. of the projective class of `w_0`.
    pub fn diameter(&self) -> Option<&Scalar> {
        self.diameters.last().and_then(Option::as_ref)
    }

    pub fn w0(&self) -> &[Scalar; 3] {
        &self.stages[0]
    }

    /// Exact integer representative `P_i (1, 1, 1)` of stage `i` (not normalized).
    pub fn integer_stage(&self, i: usize) -> Vec<BigInt> {
        self.products[i].apply(&[BigInt::one(), BigInt::one(), BigInt::one()])
    }

    /// Rational point of stage `i` from the barycenter seed, scaled so `w_{0,3} = 1`.
    pub fn rational_stage(&self, i: usize) -> [BigRational; 3] {
        let v = self.integer_stage(i);
        let d = self.integer_stage(0)[2].clone();
        std::array::from_fn(|r| BigRational::new(v[r].clone(), d.clone()))
    }

    pub fn product(&self, i: usize) -> &IMatrix {
        &self.products[i]
    }

    /// Enclosure of the linear form `a . w_i` for a row vector `a`.
    pub fn form_at_stage(&self, a: &[BigInt], i: usize) -> Scalar {
        let row = self.products[i].apply_left(a);
        ratio_range(&row, self.products[0].row(2), self.prec)
    }

    /// Stage vectors rescaled to unit coordinate sum.
    pub fn unit_sum_stage(&self, i: usize) -> Result<[Scalar; 3]> {
        let s = Scalar::sum(self.stages[i].iter());
        let out: Vec<Scalar> = self.stages[i].iter().map(|x| x.checked_div(&s)).collect::<Result<_>>()?;
        Ok([out[0].clone(), out[1].clone(), out[2].clone()])
    }
}

/// Range of `(a . y) / (b . y)` over the positive cone: attained at the generators.
fn ratio_range(a: &[BigInt], b: &[BigInt], prec: u32) -> Scalar {
    let qs: Vec<BigRational> = a.iter().zip(b).map(|(x, y)| BigRational::new(x.clone(), y.clone())).collect();
    let lo = qs.iter().min().unwrap();
    let hi = qs.iter().max().unwrap();
    Scalar::from_rational(lo, prec).hull(&Scalar::from_rational(hi, prec))
}

/// Nested-cone width solver: certified to Hilbert diameter `<= tol` at stage 0.
pub fn solve_widths(ks: &KSequence, depth: usize, tol: &Scalar, prec: u32) -> Result<WidthSolution> {
    if !tol.is_positive() {
        return Err(Error::Domain("tolerance must be positive".into()));
    }
    let sol = WidthSolution::compute(ks, depth, prec)?;
    match sol.diameter() {
        Some(d) if d.certainly_lt(tol) || d.hi() <= tol.lo() => Ok(sol),
        Some(d) => Err(Error::Accuracy {
            what: format!("Hilbert diameter above tolerance at depth {depth}"),
            achieved: d.bounds_f64().1,
        }),
        None => Err(Error::Accuracy { what: "cone diameter is still infinite".into(), achieved: f64::INFINITY }),
    }
}

/// `l_n = l_0 A(k_0) ... A(k_{n-1})` as a row vector.
pub fn lengths_recursion(l0: &[BigInt; 4], ks: &KSequence, n: usize) -> Result<[BigInt; 4]> {
    if l0.iter().any(|x| !x.is_positive()) {
        return Err(Error::Domain("initial lengths must be positive".into()));
    }
    let mut l = l0.to_vec();
    for k in ks.terms(n)? {
        l = mat_a_big(&k)?.apply_left(&l);
    }
    Ok([l[0].clone(), l[1].clone(), l[2].clone(), l[3].clone()])
}

/// Certificate for `S_{i+1} > (1 - 2/k_i) S_i`.
#[derive(Clone, Debug)]
pub struct AreaCertificate {
    pub i: usize,
    pub k: BigInt,
    /// Enclosure of `S_{i+1} - (1 - 2/k_i) S_i`.
    pub margin: Scalar,
    /// `k_i A(k_i) C - (k_i - 2) C B(k_i)` times `B(k_{i+1})`; entrywise nonnegative
    /// with a positive entry means the inequality holds exactly for all positive data.
    pub matrix: IMatrix,
    pub exact: bool,
    pub numeric: bool,
}

#[derive(Clone, Debug)]
pub struct AreaSequence {
    pub lengths: Vec<[BigInt; 4]>,
    /// `S_i = l_i . C . w_i`, `i = 0..=depth`.
    pub areas: Vec<Scalar>,
    pub certificates: Vec<AreaCertificate>,
}

/// Areas `S_i` of the complexes `Z(w_i, l_i)` and, when `certify` is set, the
/// per-step inequality certificates (which need `k_{i+1} >= 2 k_i`).
pub fn area_sequence(
    ks: &KSequence,
    depth: usize,
    l0: &[BigInt; 4],
    certify: bool,
    prec: u32,
) -> Result<AreaSequence> {
    if certify && !ks.doubles_through(depth + 1) {
        return Err(Error::Configuration("certificates need k_{i+1} >= 2 k_i".into()));
    }
    let sol = WidthSolution::compute(ks, depth.max(6), prec)?;
    let c = mat_c();
    let mut lengths = vec![l0.clone()];
    for i in 0..depth {
        let next = mat_a_big(&sol.ks[i])?.apply_left(&lengths[i]);
        lengths.push(std::array::from_fn(|j| next[j].clone()));
    }
    let areas: Vec<Scalar> = (0..=depth).map(|i| sol.form_at_stage(&c.apply_left(&lengths[i]), i)).collect();
    let mut certificates = Vec::new();
    if certify {
        for i in 0..depth {
            let k = sol.ks[i].clone();
            let a = mat_a_big(&k)?;
            let b = mat_b_big(&k)?;
            let b_next = mat_b_big(&sol.ks[i + 1])?;
            let left = a.matmul(&c).scale(&k);
            let right = c.matmul(&b).scale(&(&k - 2));
            let m = left.sub(&right).matmul(&b_next);
            let exact = m.all_nonnegative() && m.entries().iter().any(Signed::is_positive);
            let factor = Scalar::from_rational(&BigRational::new(&k - 2, k.clone()), prec);
            let margin = &areas[i + 1] - &(&factor * &areas[i]);
            let numeric = margin.is_positive();
            certificates.push(AreaCertificate { i, k, margin, matrix: m, exact, numeric });
        }
    }
    Ok(AreaSequence { lengths, areas, certificates })
}

/// `H = M w / 2` with `M = [[0,1,1],[1,0,1],[1,1,0]]`, i.e. `2 H_i = s - w_i`.
pub fn h_from_w(w: &[Scalar; 3]) -> [Scalar; 3] {
    let s = Scalar::sum(w.iter());
    std::array::from_fn(|i| (&s - &w[i]).mul_pow2(-1))
}
