use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Signed;

use super::scalar::Scalar;
use crate::error::{Error, Result};

/// Hilbert projective distance `log(max(u_i/v_i) / min(u_i/v_i))` between two positive vectors.
pub fn hilbert_distance(u: &[Scalar], v: &[Scalar]) -> Result<Scalar> {
    if u.len() != v.len() || u.is_empty() {
        return Err(Error::Domain("vectors must be nonempty and of equal length".into()));
    }
    if !u.iter().chain(v).all(Scalar::is_positive) {
        return Err(Error::Domain("hilbert distance needs strictly positive coordinates".into()));
    }
    let ratios: Vec<Scalar> = u.iter().zip(v).map(|(a, b)| a.checked_div(b)).collect::<Result<_>>()?;
    let mut hi = ratios[0].clone();
    let mut lo = ratios[0].clone();
    for r in &ratios[1..] {
        hi = hi.max(r);
        lo = lo.min(r);
    }
    let q = hi.checked_div(&lo)?;
    // The true quotient is at least 1; clip the enclosure accordingly.
    let q = q.max(&Scalar::one());
    q.ln()
}

/// Exact-ratio variant for integer vectors: the quotient is formed in rationals
/// and only the logarithm is enclosed.
pub fn hilbert_distance_int(u: &[BigInt], v: &[BigInt], prec: u32) -> Result<Scalar> {
    if u.len() != v.len() || u.is_empty() {
        return Err(Error::Domain("vectors must be nonempty and of equal length".into()));
    }
    if !u.iter().chain(v).all(Signed::is_positive) {
        return Err(Error::Domain("hilbert distance needs strictly positive coordinates".into()));
    }
    let ratios: Vec<BigRational> =
        u.iter().zip(v).map(|(a, b)| BigRational::new(a.clone(), b.clone())).collect();
    let hi = ratios.iter().max().unwrap();
    let lo = ratios.iter().min().unwrap();
    Scalar::from_rational(&(hi / lo), prec).ln()
}

/// Largest pairwise Hilbert distance among the columns of a cone's generators.
/// Returns `None` when some generator has a zero coordinate (the diameter is infinite).
pub fn hilbert_diameter(generators: &[Vec<BigInt>], prec: u32) -> Result<Option<Scalar>> {
    if generators.iter().any(|g| g.iter().any(|x| !x.is_positive())) {
        return Ok(None);
    }
    let mut best = Scalar::zero();
    for i in 0..generators.len() {
        for j in i + 1..generators.len() {
            let d = hilbert_distance_int(&generators[i], &generators[j], prec)?;
            best = best.max(&d);
        }
    }
    Ok(Some(best))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(x: f64) -> Scalar {
        Scalar::from_f64(x)
    }

    #[test]
    fn identity_and_projective_invariance() {
        let u = [s(1.0), s(2.0), s(3.5)];
        assert!(hilbert_distance(&u, &u).unwrap().is_zero());
        let d = hilbert_distance(&[s(1.0), s(2.0)], &[s(2.0), s(4.0)]).unwrap();
        assert!(d.is_zero());
    }

    #[test]
    fn log_two_example() {
        let d = hilbert_distance(&[s(1.0), s(1.0)], &[s(1.0), s(2.0)]).unwrap();
        assert!(d.contains(&Scalar::from_int(2).ln().unwrap().mid()));
        assert!(d.width_f64() < 1e-30);
    }

    #[test]
    fn rejects_nonpositive() {
        assert!(hilbert_distance(&[s(0.0), s(1.0)], &[s(1.0), s(1.0)]).is_err());
    }

    #[test]
    fn diameter_infinite_with_zero_entry() {
        let g = vec![vec![BigInt::from(1), BigInt::from(0)], vec![BigInt::from(1), BigInt::from(1)]];
        assert!(hilbert_diameter(&g, 64).unwrap().is_none());
    }
}
