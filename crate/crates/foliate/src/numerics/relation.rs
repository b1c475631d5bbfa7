use num_bigint::BigInt;

use super::scalar::Scalar;

/// Bounded exhaustive search for an integer relation `sum c_i v_i ~ 0`.
///
/// Candidates are visited by increasing height `max |c_i|`, and within a height in
/// lexicographic order; only primitive vectors whose first nonzero entry is positive
/// are considered. A candidate is returned only when the certified enclosure of
/// `|sum c_i v_i|` lies strictly below `tol`.
pub fn integer_relation(values: &[Scalar], max_coeff: u32, tol: &Scalar) -> Option<Vec<i64>> {
    let n = values.len();
    if n == 0 || max_coeff == 0 {
        return None;
    }
    let mids: Vec<f64> = values.iter().map(Scalar::mid_f64).collect();
    let rads: Vec<f64> = values
        .iter()
        .zip(&mids)
        .map(|(v, m)| v.width_f64() / 2.0 + m.abs() * 4.0 * f64::EPSILON + f64::MIN_POSITIVE)
        .collect();
    let tol_hi = tol.bounds_f64().1;
    let m = max_coeff as i64;
    let mut c = vec![0i64; n];
    for h in 1..=m {
        // Odometer over [-h, h]^n in lexicographic order.
        for x in c.iter_mut() {
            *x = -h;
        }
        loop {
            if admissible(&c, h) {
                let mut s = 0.0;
                let mut err = 0.0;
                for i in 0..n {
                    let t = c[i] as f64 * mids[i];
                    s += t;
                    err += (c[i].abs() as f64) * rads[i] + t.abs() * (n as f64) * f64::EPSILON;
                }
                if s.abs() - err < tol_hi && certify(values, &c, tol) {
                    return Some(c);
                }
            }
            let mut i = n;
            loop {
                if i == 0 {
                    break;
                }
                i -= 1;
                if c[i] < h {
                    c[i] += 1;
                    for x in c.iter_mut().skip(i + 1) {
                        *x = -h;
                    }
                    break;
                }
                if i == 0 {
                    i = usize::MAX;
                    break;
                }
            }
            if i == usize::MAX {
                break;
            }
        }
    }
    None
}

fn admissible(c: &[i64], h: i64) -> bool {
    let first = c.iter().find(|&&x| x != 0);
    match first {
        Some(&x) if x > 0 => {}
        _ => return false,
    }
    if c.iter().map(|x| x.abs()).max() != Some(h) {
        return false;
    }
    c.iter().fold(0i64, |g, &x| num_integer::gcd(g, x)) == 1
}

fn certify(values: &[Scalar], c: &[i64], tol: &Scalar) -> bool {
    let mut acc = Scalar::zero();
    for (v, &ci) in values.iter().zip(c) {
        if ci != 0 {
            acc = &acc + &(v * &Scalar::from_int(BigInt::from(ci)));
        }
    }
    acc.abs().certainly_lt(tol)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::tribonacci;

    #[test]
    fn simple_multiple() {
        let r = integer_relation(&[Scalar::from_int(1), Scalar::from_int(2)], 2, &Scalar::from_f64(1e-9));
        assert_eq!(r, Some(vec![2, -1]));
    }

    #[test]
    fn tribonacci_powers_independent() {
        let l = tribonacci(128);
        let v = [Scalar::one(), l.clone(), l.square()];
        assert_eq!(integer_relation(&v, 10, &Scalar::from_f64(1e-9)), None);
    }

    #[test]
    fn sum_relation() {
        let l = tribonacci(128);
        let w = [l.square(), l.clone(), Scalar::one()];
        let v = [w[0].clone(), w[1].clone(), w[2].clone(), &w[0] + &w[1]];
        assert_eq!(integer_relation(&v, 3, &Scalar::from_f64(1e-9)), Some(vec![1, 1, 0, -1]));
    }
}
