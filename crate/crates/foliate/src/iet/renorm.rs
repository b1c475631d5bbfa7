use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::numerics::{IMatrix, Scalar};

/// Exact matrix of the parameter map `x_i = R(k_i) x_{i+1}`.
pub fn mat_r(k: u64) -> Result<IMatrix> {
    mat_r_big(&BigInt::from(k))
}

pub fn mat_r_big(k: &BigInt) -> Result<IMatrix> {
    if *k < BigInt::one() {
        return Err(Error::Domain(format!("k must be at least 1, got {k}")));
    }
    let km = k - 1;
    let mut m = IMatrix::zeros(9, 9);
    let mut add = |r: usize, cols: &[usize], v: &BigInt| {
        for &c in cols {
            let cur = m.get(r - 1, c - 1) + v;
            m.set(r - 1, c - 1, cur);
        }
    };
    let one = BigInt::one();
    let g = [2, 3, 7, 8, 9];
    add(1, &g, &km);
    add(1, &[7], &one);
    add(2, &[8], &one);
    add(3, &[2, 9], &one);
    add(4, &[3, 7], &one);
    add(5, &[1, 2, 3, 4], &one);
    add(6, &g, &km);
    add(6, &[2, 3, 7], &one);
    add(7, &[5], &one);
    add(8, &[2, 3, 6], &one);
    add(9, &[1, 2, 3, 4, 8], &km);
    add(9, &[4], &one);
    Ok(m)
}

/// `R(k) = k R' + R''` with `R'`, `R''` independent of `k`. Fails with an
/// invariant error if the split does not reproduce `R(k)`.
pub fn split_r(k: u64) -> Result<(IMatrix, IMatrix)> {
    let r1 = mat_r(1)?;
    let rp = mat_r(2)?.sub(&r1);
    let rpp = r1.sub(&rp);
    if rp.scale(&BigInt::from(k)).add(&rpp) != mat_r(k)? {
        return Err(Error::Invariant(format!("R({k}) is not affine in k")));
    }
    Ok((rp, rpp))
}

fn unit(ixs: &[usize]) -> Vec<BigInt> {
    let mut v = vec![BigInt::zero(); 9];
    for &i in ixs {
        v[i - 1] = BigInt::one();
    }
    v
}

/// `e1 + e6`.
pub fn u_inf() -> Vec<BigInt> {
    unit(&[1, 6])
}

/// `e9`.
pub fn v_inf() -> Vec<BigInt> {
    unit(&[9])
}

/// Outcome of testing `y1 + y4 - y6 = y5 - y8 = y7 - y2`.
#[derive(Clone, Debug)]
pub struct VCheck {
    pub holds: bool,
    /// `(y1 + y4 - y6) - (y5 - y8)` and `(y5 - y8) - (y7 - y2)`.
    pub residuals: [Scalar; 2],
    /// `y5 - y8`.
    pub common: Scalar,
}

pub fn check_v(y: &[Scalar]) -> Result<VCheck> {
    if y.len() != 9 {
        return Err(Error::Domain(format!("expected 9 coordinates, got {}", y.len())));
    }
    let a = &y[0] + &y[3] - &y[5];
    let b = &y[4] - &y[7];
    let c = &y[6] - &y[1];
    let residuals = [&a - &b, &b - &c];
    let holds = residuals.iter().all(Scalar::contains_zero);
    Ok(VCheck { holds, residuals, common: b })
}

pub fn in_v_exact(y: &[BigInt]) -> bool {
    let a = &y[0] + &y[3] - &y[5];
    let b = &y[4] - &y[7];
    let c = &y[6] - &y[1];
    a == b && b == c
}

/// An integer basis of the 7-dimensional subspace `V`.
pub fn v_basis() -> Vec<Vec<BigInt>> {
    // Free coordinates y2, y3, y4, y5, y6, y8, y9 plus the common value, solved for y1 and y7.
    let mut out = Vec::new();
    for free in [2usize, 3, 4, 5, 6, 8, 9] {
        let mut v = unit(&[free]);
        let c = &v[4] - &v[7];
        v[6] = &c + &v[1];
        v[0] = &c - &v[3] + &v[5];
        out.push(v);
    }
    out
}

/// Whether `x_cur = R(k) x_next` holds within the enclosures.
pub fn renormalize_check(x_cur: &[Scalar], k: u64, x_next: &[Scalar]) -> Result<bool> {
    if x_cur.len() != 9 || x_next.len() != 9 {
        return Err(Error::Domain("parameter vectors have 9 coordinates".into()));
    }
    if x_cur.iter().chain(x_next).any(|x| !x.is_positive()) {
        return Err(Error::Domain("parameter vectors must be positive".into()));
    }
    let r = mat_r(k)?.map(|x| Scalar::from(x));
    Ok(r.apply(x_next).iter().zip(x_cur).all(|(a, b)| a.overlaps(b)))
}

/// Integrals of the measure `y` over the four closed transversals.
pub fn transversal_integrals(y: &[Scalar]) -> Result<[Scalar; 4]> {
    if y.len() != 9 {
        return Err(Error::Domain(format!("expected 9 coordinates, got {}", y.len())));
    }
    let s = |ix: &[usize]| Scalar::sum(ix.iter().map(|&i| &y[i - 1]));
    let two = |i: usize| y[i - 1].mul_pow2(1);
    Ok([
        s(&[2, 3, 4, 5, 6]),
        s(&[2, 5, 7, 8, 9]),
        s(&[2, 4, 6, 7]) + two(3),
        s(&[2, 6]) + two(3) + two(7),
    ])
}
