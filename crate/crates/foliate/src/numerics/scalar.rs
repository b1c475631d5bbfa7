use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::dyadic::{Dyadic, Round};
use crate::error::{Error, Result};

pub const DEFAULT_PRECISION: u32 = 128;

/// A closed interval `[lo, hi]` with dyadic endpoints that is guaranteed to
/// contain the real number it stands for.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Scalar {
    lo: Dyadic,
    hi: Dyadic,
    prec: u32,
}

impl Scalar {
    pub fn new(lo: Dyadic, hi: Dyadic, prec: u32) -> Result<Self> {
        if lo > hi {
            return Err(Error::Domain(format!("interval with lo {lo} > hi {hi}")));
        }
        Ok(Scalar { lo, hi, prec })
    }

    fn from_bounds(lo: Dyadic, hi: Dyadic, prec: u32) -> Self {
        debug_assert!(lo <= hi);
        Scalar { lo, hi, prec }
    }

    pub fn exact(d: Dyadic) -> Self {
        Scalar { lo: d.clone(), hi: d, prec: DEFAULT_PRECISION }
    }

    pub fn zero() -> Self {
        Scalar::exact(Dyadic::zero())
    }

    pub fn one() -> Self {
        Scalar::exact(Dyadic::one())
    }

    pub fn from_int(n: impl Into<BigInt>) -> Self {
        Scalar::exact(Dyadic::from_int(n))
    }

    /// Exact value of a finite double. Panics on NaN or infinity.
    pub fn from_f64(x: f64) -> Self {
        Scalar::exact(Dyadic::from_f64(x).expect("finite double"))
    }

    /// Outward-rounded enclosure of a rational number.
    pub fn from_rational(q: &BigRational, prec: u32) -> Self {
        if q.is_integer() {
            return Scalar::from_int(q.to_integer()).with_prec(prec);
        }
        Scalar::from_bounds(
            Dyadic::from_rational(q, prec, Round::Floor),
            Dyadic::from_rational(q, prec, Round::Ceil),
            prec,
        )
    }

    pub fn from_ratio(num: impl Into<BigInt>, den: impl Into<BigInt>, prec: u32) -> Self {
        Scalar::from_rational(&BigRational::new(num.into(), den.into()), prec)
    }

    /// Parse a decimal literal such as `-12.5e-3`, rounding outward.
    pub fn parse_decimal(text: &str, prec: u32) -> Result<Self> {
        let q = parse_decimal_rational(text)?;
        Ok(Scalar::from_rational(&q, prec))
    }

    pub fn hull(&self, other: &Scalar) -> Scalar {
        Scalar::from_bounds(
            self.lo.clone().min(other.lo.clone()),
            self.hi.clone().max(other.hi.clone()),
            self.prec.max(other.prec),
        )
    }

    pub fn with_prec(mut self, prec: u32) -> Self {
        self.prec = prec;
        self
    }

    pub fn lo(&self) -> &Dyadic {
        &self.lo
    }

    pub fn hi(&self) -> &Dyadic {
        &self.hi
    }

    pub fn prec(&self) -> u32 {
        self.prec
    }

    pub fn width(&self) -> Dyadic {
        self.hi.sub(&self.lo)
    }

    /// Upper bound of the width as a double.
    pub fn width_f64(&self) -> f64 {
        self.width().to_f64_dir(Round::Ceil)
    }

    pub fn mid(&self) -> Dyadic {
        self.lo.add(&self.hi).mul_pow2(-1)
    }

    pub fn mid_f64(&self) -> f64 {
        self.mid().to_f64()
    }

    /// Bounds as doubles, rounded outward.
    pub fn bounds_f64(&self) -> (f64, f64) {
        (self.lo.to_f64_dir(Round::Floor), self.hi.to_f64_dir(Round::Ceil))
    }

    pub fn is_zero(&self) -> bool {
        self.lo.is_zero() && self.hi.is_zero()
    }

    pub fn is_exact(&self) -> bool {
        self.lo == self.hi
    }

    pub fn contains(&self, x: &Dyadic) -> bool {
        &self.lo <= x && x <= &self.hi
    }

    pub fn contains_rational(&self, q: &BigRational) -> bool {
        &self.lo.to_rational() <= q && q <= &self.hi.to_rational()
    }

    pub fn contains_zero(&self) -> bool {
        !self.lo.is_positive() && !self.hi.is_negative()
    }

    pub fn is_positive(&self) -> bool {
        self.lo.is_positive()
    }

    pub fn is_negative(&self) -> bool {
        self.hi.is_negative()
    }

    pub fn overlaps(&self, other: &Scalar) -> bool {
        self.lo <= other.hi && other.lo <= self.hi
    }

    pub fn certainly_lt(&self, other: &Scalar) -> bool {
        self.hi < other.lo
    }

    pub fn certainly_gt(&self, other: &Scalar) -> bool {
        self.lo > other.hi
    }

    /// `Some(true)` if certainly below, `Some(false)` if certainly at or above, `None` if undecided.
    pub fn lt(&self, other: &Scalar) -> Option<bool> {
        if self.hi < other.lo {
            Some(true)
        } else if self.lo >= other.hi {
            Some(false)
        } else {
            None
        }
    }

    fn out(lo: Dyadic, hi: Dyadic, prec: u32) -> Scalar {
        Scalar::from_bounds(lo.round(prec, Round::Floor), hi.round(prec, Round::Ceil), prec)
    }

    pub fn abs(&self) -> Scalar {
        if !self.lo.is_negative() {
            self.clone()
        } else if !self.hi.is_positive() {
            -self
        } else {
            let m = self.lo.abs().max(self.hi.clone());
            Scalar::from_bounds(Dyadic::zero(), m, self.prec)
        }
    }

    pub fn min(&self, other: &Scalar) -> Scalar {
        Scalar::from_bounds(
            self.lo.clone().min(other.lo.clone()),
            self.hi.clone().min(other.hi.clone()),
            self.prec.max(other.prec),
        )
    }

    pub fn max(&self, other: &Scalar) -> Scalar {
        Scalar::from_bounds(
            self.lo.clone().max(other.lo.clone()),
            self.hi.clone().max(other.hi.clone()),
            self.prec.max(other.prec),
        )
    }

    pub fn mul_pow2(&self, k: i64) -> Scalar {
        Scalar::from_bounds(self.lo.mul_pow2(k), self.hi.mul_pow2(k), self.prec)
    }

    pub fn square(&self) -> Scalar {
        let a = self.abs();
        Scalar::out(a.lo.mul(&a.lo), a.hi.mul(&a.hi), self.prec)
    }

    pub fn powi(&self, n: u32) -> Scalar {
        let mut acc = Scalar::one().with_prec(self.prec);
        for _ in 0..n {
            acc = &acc * self;
        }
        acc
    }

    /// `1 / self`; fails when the interval contains zero.
    pub fn recip(&self) -> Result<Scalar> {
        Scalar::one().with_prec(self.prec).checked_div(self)
    }

    pub fn checked_div(&self, other: &Scalar) -> Result<Scalar> {
        if other.contains_zero() {
            return Err(Error::Domain("division by an interval containing zero".into()));
        }
        let prec = self.prec.max(other.prec);
        let q = |a: &Dyadic, b: &Dyadic, dir| Dyadic::div_round(a, b, prec, dir);
        let cands_lo = [
            q(&self.lo, &other.lo, Round::Floor),
            q(&self.lo, &other.hi, Round::Floor),
            q(&self.hi, &other.lo, Round::Floor),
            q(&self.hi, &other.hi, Round::Floor),
        ];
        let cands_hi = [
            q(&self.lo, &other.lo, Round::Ceil),
            q(&self.lo, &other.hi, Round::Ceil),
            q(&self.hi, &other.lo, Round::Ceil),
            q(&self.hi, &other.hi, Round::Ceil),
        ];
        let lo = cands_lo.into_iter().min().unwrap();
        let hi = cands_hi.into_iter().max().unwrap();
        Ok(Scalar::from_bounds(lo, hi, prec))
    }

    pub fn sqrt(&self) -> Result<Scalar> {
        if self.hi.is_negative() {
            return Err(Error::Domain("square root of a negative interval".into()));
        }
        let lo = if self.lo.is_negative() { Dyadic::zero() } else { self.lo.clone() };
        Ok(Scalar::from_bounds(
            lo.sqrt_round(self.prec, Round::Floor),
            self.hi.sqrt_round(self.prec, Round::Ceil),
            self.prec,
        ))
    }

    /// Natural logarithm; requires a strictly positive interval.
    pub fn ln(&self) -> Result<Scalar> {
        if !self.is_positive() {
            return Err(Error::Domain("logarithm of a non-positive interval".into()));
        }
        let at_lo = ln_enclosure(&self.lo, self.prec);
        if self.is_exact() {
            return Ok(at_lo);
        }
        let hi = ln_enclosure(&self.hi, self.prec).hi;
        Ok(Scalar::from_bounds(at_lo.lo, hi, self.prec))
    }

    /// Decimal bounds with `digits` fractional digits, rounded outward.
    pub fn decimal_bounds(&self, digits: u32) -> (String, String) {
        (
            dyadic_to_decimal(&self.lo, digits, Round::Floor),
            dyadic_to_decimal(&self.hi, digits, Round::Ceil),
        )
    }

    /// Number of leading decimal digits shared by both endpoints (a verified digit count).
    pub fn verified_digits(&self) -> u32 {
        let w = self.width_f64();
        let m = self.mid_f64().abs();
        if w == 0.0 {
            return 40;
        }
        if m == 0.0 {
            return 0;
        }
        let d = (m / w).log10().floor();
        if d < 0.0 { 0 } else { d as u32 }
    }

    pub fn sum<'a>(items: impl IntoIterator<Item = &'a Scalar>) -> Scalar {
        let mut acc = Scalar::zero();
        for x in items {
            acc = &acc + x;
        }
        acc
    }

    pub fn dot(a: &[Scalar], b: &[Scalar]) -> Scalar {
        assert_eq!(a.len(), b.len());
        let mut acc = Scalar::zero();
        for (x, y) in a.iter().zip(b) {
            acc = &acc + &(x * y);
        }
        acc
    }
}

/// Parse `[-]digits[.digits][e[-]digits]` into an exact rational.
pub fn parse_decimal_rational(text: &str) -> Result<BigRational> {
    let t = text.trim();
    let bad = || Error::Domain(format!("not a decimal number: {text:?}"));
    let (mantissa, exp10) = match t.find(['e', 'E']) {
        Some(i) => (&t[..i], t[i + 1..].parse::<i64>().map_err(|_| bad())?),
        None => (t, 0),
    };
    let (neg, body) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (int_part, frac_part) = match body.find('.') {
        Some(i) => (&body[..i], &body[i + 1..]),
        None => (body, ""),
    };
    if int_part.is_empty() && frac_part.is_empty() {
        return Err(bad());
    }
    if !int_part.chars().chain(frac_part.chars()).all(|c| c.is_ascii_digit()) {
        return Err(bad());
    }
    let digits = format!("{int_part}{frac_part}");
    let mut n: BigInt = digits.parse().map_err(|_| bad())?;
    if neg {
        n = -n;
    }
    let scale = exp10 - frac_part.len() as i64;
    let ten = BigInt::from(10);
    Ok(if scale >= 0 {
        BigRational::from_integer(n * num_traits::pow(ten, scale as usize))
    } else {
        BigRational::new(n, num_traits::pow(ten, (-scale) as usize))
    })
}

fn dyadic_to_decimal(d: &Dyadic, digits: u32, dir: Round) -> String {
    let q = d.to_rational();
    let scale = num_traits::pow(BigInt::from(10), digits as usize);
    let scaled = q * BigRational::from_integer(scale.clone());
    let n = match dir {
        Round::Floor => scaled.floor().to_integer(),
        Round::Ceil => scaled.ceil().to_integer(),
    };
    let neg = n.is_negative();
    let s = n.abs().to_string();
    let s = if s.len() <= digits as usize {
        format!("{}{}", "0".repeat(digits as usize + 1 - s.len()), s)
    } else {
        s
    };
    let (ip, fp) = s.split_at(s.len() - digits as usize);
    let sign = if neg { "-" } else { "" };
    if digits == 0 {
        format!("{sign}{ip}")
    } else {
        format!("{sign}{ip}.{fp}")
    }
}

/// Enclosure of `2 * atanh(t)` for an exact `0 <= t <= 1/3`, working at `wp` bits.
fn two_atanh(t: &Scalar, wp: u32) -> Scalar {
    let t2 = t.square();
    let mut term = t.clone();
    let mut sum = Scalar::zero().with_prec(wp);
    let eps = Dyadic::new(BigInt::one(), -(wp as i64) - 4);
    let mut j: u64 = 0;
    loop {
        let denom = Scalar::from_int(2 * j + 1).with_prec(wp);
        sum = &sum + &term.checked_div(&denom).expect("positive denominator");
        term = &term * &t2;
        j += 1;
        if term.hi <= eps {
            break;
        }
    }
    // Remaining tail is at most term / (1 - t^2) <= 9/8 term; bound it by 2 term.
    let tail = Scalar::from_bounds(Dyadic::zero(), term.hi.mul_pow2(1), wp);
    (&sum + &tail).mul_pow2(1)
}

fn ln_enclosure(x: &Dyadic, prec: u32) -> Scalar {
    let wp = prec + 32;
    let k = x.magnitude_bits() - 1;
    let y = Scalar::exact(x.mul_pow2(-k)).with_prec(wp);
    let one = Scalar::one().with_prec(wp);
    let ln_y = if y.is_exact() && y.lo == Dyadic::one() {
        Scalar::zero()
    } else {
        let t = (&y - &one).checked_div(&(&y + &one)).expect("positive");
        two_atanh(&t, wp)
    };
    let result = if k == 0 {
        ln_y
    } else {
        let third = Scalar::from_ratio(1, 3, wp);
        let ln2 = two_atanh(&third, wp);
        &(&ln2 * &Scalar::from_int(k)) + &ln_y
    };
    Scalar::out(result.lo, result.hi, prec)
}

macro_rules! binop {
    ($tr:ident, $m:ident, $body:expr) => {
        impl<'a, 'b> $tr<&'b Scalar> for &'a Scalar {
            type Output = Scalar;
            fn $m(self, rhs: &'b Scalar) -> Scalar {
                let f: fn(&Scalar, &Scalar) -> Scalar = $body;
                f(self, rhs)
            }
        }
        impl $tr<Scalar> for Scalar {
            type Output = Scalar;
            fn $m(self, rhs: Scalar) -> Scalar {
                (&self).$m(&rhs)
            }
        }
        impl<'b> $tr<&'b Scalar> for Scalar {
            type Output = Scalar;
            fn $m(self, rhs: &'b Scalar) -> Scalar {
                (&self).$m(rhs)
            }
        }
        impl<'a> $tr<Scalar> for &'a Scalar {
            type Output = Scalar;
            fn $m(self, rhs: Scalar) -> Scalar {
                self.$m(&rhs)
            }
        }
    };
}

binop!(Add, add, |a, b| {
    let prec = a.prec.max(b.prec);
    Scalar::out(a.lo.add(&b.lo), a.hi.add(&b.hi), prec)
});

binop!(Sub, sub, |a, b| {
    let prec = a.prec.max(b.prec);
    Scalar::out(a.lo.sub(&b.hi), a.hi.sub(&b.lo), prec)
});

binop!(Mul, mul, |a, b| {
    let prec = a.prec.max(b.prec);
    let p = [a.lo.mul(&b.lo), a.lo.mul(&b.hi), a.hi.mul(&b.lo), a.hi.mul(&b.hi)];
    let lo = p.iter().min().unwrap().clone();
    let hi = p.iter().max().unwrap().clone();
    Scalar::out(lo, hi, prec)
});

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        Scalar::from_bounds(self.hi.neg(), self.lo.neg(), self.prec)
    }
}

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        -&self
    }
}

impl Zero for Scalar {
    fn zero() -> Self {
        Scalar::zero()
    }
    fn is_zero(&self) -> bool {
        self.lo.is_zero() && self.hi.is_zero()
    }
}

impl One for Scalar {
    fn one() -> Self {
        Scalar::one()
    }
}

impl From<i64> for Scalar {
    fn from(n: i64) -> Self {
        Scalar::from_int(n)
    }
}

impl From<&BigInt> for Scalar {
    fn from(n: &BigInt) -> Self {
        Scalar::from_int(n.clone())
    }
}

impl fmt::Debug for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{:?}, {:?}]", self.lo, self.hi)
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let digits = self.verified_digits().clamp(1, 30);
        let m = self.mid_f64();
        if self.is_exact() {
            write!(f, "{m}")
        } else {
            write!(f, "{:.*e} ± {:.1e}", digits as usize, m, self.width_f64() / 2.0)
        }
    }
}

/// Re-run `compute` at doubling precision until the result is narrower than `target_width`.
pub fn refine<F>(compute: F, target_width: &Dyadic, max_prec: u32) -> Result<Scalar>
where
    F: Fn(u32) -> Result<Scalar>,
{
    if !target_width.is_positive() {
        return Err(Error::Domain("target width must be positive".into()));
    }
    let mut prec = DEFAULT_PRECISION;
    let mut best: Option<Scalar> = None;
    loop {
        let x = compute(prec)?;
        let x = match best {
            Some(ref b) if b.overlaps(&x) => Scalar::from_bounds(
                b.lo.clone().max(x.lo.clone()),
                b.hi.clone().min(x.hi.clone()),
                prec,
            ),
            _ => x,
        };
        if &x.width() < target_width {
            return Ok(x);
        }
        if prec >= max_prec {
            return Err(Error::Accuracy {
                what: "refinement reached the precision cap".into(),
                achieved: x.width_f64(),
            });
        }
        best = Some(x);
        prec = (prec * 2).min(max_prec);
    }
}

/// The real root of `x^3 - x^2 - x - 1`, enclosed by exact bisection at `prec` bits.
pub fn tribonacci(prec: u32) -> Scalar {
    let f = |x: &Dyadic| {
        let x2 = x.mul(x);
        x2.mul(x).sub(&x2).sub(x).sub(&Dyadic::one())
    };
    let mut lo = Dyadic::one();
    let mut hi = Dyadic::from_int(2);
    for _ in 0..prec {
        let mid = lo.add(&hi).mul_pow2(-1);
        if f(&mid).is_negative() {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Scalar::from_bounds(lo, hi, prec)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn exact_integer_is_point() {
        let three = Scalar::from_int(3);
        assert!(three.is_exact());
        assert_eq!(three.width(), Dyadic::zero());
    }

    #[test]
    fn dyadic_sum_is_exact() {
        let a = Scalar::from_f64(0.375);
        let b = Scalar::from_f64(1.5);
        let s = &a + &b;
        assert!(s.is_exact());
        assert_eq!(s.mid_f64(), 1.875);
    }

    #[test]
    fn third_is_enclosed() {
        let t = Scalar::from_ratio(1, 3, 64);
        assert!(t.contains_rational(&q(1, 3)));
        assert!(t.width_f64() < 1e-18);
    }

    #[test]
    fn ln_two_and_ln_one() {
        let l2 = Scalar::from_int(2).ln().unwrap();
        assert!((l2.mid_f64() - std::f64::consts::LN_2).abs() < 1e-15);
        assert!(l2.width_f64() < 1e-35);
        assert!(Scalar::one().ln().unwrap().is_zero());
        let l = Scalar::from_f64(0.1).ln().unwrap();
        assert!((l.mid_f64() - 0.1f64.ln()).abs() < 1e-15);
        let big = Scalar::from_f64(12345.678).ln().unwrap();
        assert!((big.mid_f64() - 12345.678f64.ln()).abs() < 1e-12);
    }

    #[test]
    fn sqrt_encloses() {
        let s = Scalar::from_int(2).sqrt().unwrap();
        let sq = s.square();
        assert!(sq.contains(&Dyadic::from_int(2)));
        assert!(s.width_f64() < 1e-35);
    }

    #[test]
    fn tribonacci_digits() {
        let l = tribonacci(128);
        assert!((l.mid_f64() - 1.839286755214161).abs() < 1e-15);
        assert!(l.width_f64() < 1e-37);
    }

    #[test]
    fn parse_and_print_decimal() {
        let x = Scalar::parse_decimal("1.25e-1", 64).unwrap();
        assert!(x.is_exact());
        assert_eq!(x.mid_f64(), 0.125);
        let y = Scalar::parse_decimal("0.1", 64).unwrap();
        assert!(y.contains_rational(&q(1, 10)));
        let (lo, hi) = y.decimal_bounds(5);
        assert_eq!((lo.as_str(), hi.as_str()), ("0.09999", "0.10001"));
        assert!(Scalar::parse_decimal("1.2.3", 64).is_err());
    }

    #[test]
    fn division_by_zero_interval_fails() {
        let z = &Scalar::from_f64(-1.0).hull(&Scalar::from_f64(1.0)) * &Scalar::one();
        assert!(Scalar::one().checked_div(&z).is_err());
    }

    #[test]
    fn refine_reaches_target() {
        let target = Dyadic::new(BigInt::one(), -100);
        let l = refine(|p| Ok(tribonacci(p)), &target, 4096).unwrap();
        assert!(l.width() < target);
        let err = refine(|_| Ok(Scalar::from_f64(0.0).hull(&Scalar::one())), &target, 512);
        assert!(matches!(err, Err(Error::Accuracy { .. })));
    }
}
