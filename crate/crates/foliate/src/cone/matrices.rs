use num_bigint::BigInt;

use crate::error::{Error, Result};
use crate::numerics::IMatrix;

fn check_k(k: u64) -> Result<()> {
    if k < 1 {
        return Err(Error::Domain("k must be at least 1".into()));
    }
    Ok(())
}

fn big(rows: [[BigInt; 4]; 4]) -> IMatrix {
    IMatrix::from_rows(rows.into_iter().map(|r| r.to_vec()).collect())
}

/// Length transition `A(k)`, acting on row vectors.
pub fn mat_a(k: u64) -> Result<IMatrix> {
    check_k(k)?;
    mat_a_big(&BigInt::from(k))
}

pub fn mat_a_big(k: &BigInt) -> Result<IMatrix> {
    if k < &BigInt::from(1) {
        return Err(Error::Domain("k must be at least 1".into()));
    }
    let z = || BigInt::from(0);
    let o = || BigInt::from(1);
    Ok(big([
        [z(), z(), o(), k.clone()],
        [o(), z(), z(), z()],
        [z(), o(), z(), z()],
        [z(), o(), o(), k - 1],
    ]))
}

/// Width transition `B(k)`, acting on column vectors.
pub fn mat_b(k: u64) -> Result<IMatrix> {
    check_k(k)?;
    mat_b_big(&BigInt::from(k))
}

pub fn mat_b_big(k: &BigInt) -> Result<IMatrix> {
    if k < &BigInt::from(1) {
        return Err(Error::Domain("k must be at least 1".into()));
    }
    let z = || BigInt::from(0);
    let o = || BigInt::from(1);
    Ok(IMatrix::from_rows(vec![
        vec![k.clone(), k.clone(), o()],
        vec![o(), z(), z()],
        vec![z(), o(), z()],
    ]))
}

/// The factor `B'(k, l, m)` in `B(k) B(l) B(m) = B'(k, l, m) B''`.
pub fn mat_bprime(k: u64, l: u64, m: u64) -> Result<IMatrix> {
    check_k(k)?;
    check_k(l)?;
    check_k(m)?;
    let (k, l, m) = (k as i64, l as i64, m as i64);
    Ok(IMatrix::from_i64(&[
        &[k * (l - 1) + 1, k * (l * (m - 1) + m), 2 * k - 1],
        &[l - 1, l * (m - 1) + 1, 1],
        &[0, m - 1, 1],
    ]))
}

pub fn mat_bpp() -> IMatrix {
    IMatrix::from_i64(&[&[2, 1, 1], &[1, 1, 0], &[1, 1, 1]])
}

/// Area matrix: `S = l . C . w`.
pub fn mat_c() -> IMatrix {
    IMatrix::from_i64(&[&[1, 0, 0], &[0, 1, 0], &[0, 0, 1], &[1, 0, 0]])
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(xs: &[i64]) -> Vec<BigInt> {
        xs.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn small_cases() {
        assert_eq!(mat_b(1).unwrap(), IMatrix::from_i64(&[&[1, 1, 1], &[1, 0, 0], &[0, 1, 0]]));
        assert_eq!(
            mat_a(1).unwrap(),
            IMatrix::from_i64(&[&[0, 0, 1, 1], &[1, 0, 0, 0], &[0, 1, 0, 0], &[0, 1, 1, 0]])
        );
        assert_eq!(mat_b(3).unwrap().apply(&v(&[1, 1, 1])), v(&[7, 1, 1]));
        assert_eq!(mat_bprime(1, 1, 1).unwrap(), IMatrix::from_i64(&[&[1, 1, 1], &[0, 1, 1], &[0, 0, 1]]));
        assert_eq!(mat_b(1).unwrap().pow(3), IMatrix::from_i64(&[&[4, 3, 2], &[2, 2, 1], &[1, 1, 1]]));
        assert!(mat_a(0).is_err() && mat_b(0).is_err());
    }
}
