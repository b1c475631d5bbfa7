use std::cmp::Ordering;
use std::fmt;

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Rounding direction used when a result has to be cut to a finite number of bits.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Round {
    Floor,
    Ceil,
}

/// An exact number `mant * 2^exp`, kept normalized (odd mantissa, or zero with exponent 0).
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Dyadic {
    mant: BigInt,
    exp: i64,
}

impl Dyadic {
    pub fn new(mant: BigInt, exp: i64) -> Self {
        if mant.is_zero() {
            return Dyadic { mant, exp: 0 };
        }
        let tz = mant.trailing_zeros().unwrap_or(0);
        if tz == 0 {
            Dyadic { mant, exp }
        } else {
            Dyadic { mant: mant >> tz, exp: exp + tz as i64 }
        }
    }

    pub fn zero() -> Self {
        Dyadic { mant: BigInt::zero(), exp: 0 }
    }

    pub fn one() -> Self {
        Dyadic { mant: BigInt::one(), exp: 0 }
    }

    pub fn from_int(n: impl Into<BigInt>) -> Self {
        Dyadic::new(n.into(), 0)
    }

    /// Exact conversion of a finite double.
    pub fn from_f64(x: f64) -> Option<Self> {
        if !x.is_finite() {
            return None;
        }
        if x == 0.0 {
            return Some(Dyadic::zero());
        }
        let bits = x.to_bits();
        let sign = if bits >> 63 == 1 { -1i64 } else { 1 };
        let raw_exp = ((bits >> 52) & 0x7ff) as i64;
        let frac = bits & ((1u64 << 52) - 1);
        let (m, e) = if raw_exp == 0 {
            (frac, -1074)
        } else {
            (frac | (1u64 << 52), raw_exp - 1075)
        };
        Some(Dyadic::new(BigInt::from(m) * sign, e))
    }

    pub fn mantissa(&self) -> &BigInt {
        &self.mant
    }

    pub fn exponent(&self) -> i64 {
        self.exp
    }

    pub fn is_zero(&self) -> bool {
        self.mant.is_zero()
    }

    pub fn is_negative(&self) -> bool {
        self.mant.is_negative()
    }

    pub fn is_positive(&self) -> bool {
        self.mant.is_positive()
    }

    pub fn signum(&self) -> i32 {
        match self.mant.sign() {
            Sign::Minus => -1,
            Sign::NoSign => 0,
            Sign::Plus => 1,
        }
    }

    /// Smallest `m` with `|self| < 2^m`; meaningless for zero.
    pub fn magnitude_bits(&self) -> i64 {
        self.mant.bits() as i64 + self.exp
    }

    pub fn mul_pow2(&self, k: i64) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        Dyadic { mant: self.mant.clone(), exp: self.exp + k }
    }

    pub fn abs(&self) -> Self {
        Dyadic { mant: self.mant.abs(), exp: self.exp }
    }

    fn align(&self, other: &Self) -> (BigInt, BigInt, i64) {
        let e = self.exp.min(other.exp);
        let a = &self.mant << (self.exp - e) as usize;
        let b = &other.mant << (other.exp - e) as usize;
        (a, b, e)
    }

    pub fn add(&self, other: &Self) -> Self {
        if self.is_zero() {
            return other.clone();
        }
        if other.is_zero() {
            return self.clone();
        }
        let (a, b, e) = self.align(other);
        Dyadic::new(a + b, e)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        Dyadic::new(&self.mant * &other.mant, self.exp + other.exp)
    }

    pub fn neg(&self) -> Self {
        Dyadic { mant: -&self.mant, exp: self.exp }
    }

    /// Cut the mantissa to at most `prec` bits, rounding in the given direction.
    pub fn round(&self, prec: u32, dir: Round) -> Self {
        let bits = self.mant.bits();
        if bits <= prec as u64 {
            return self.clone();
        }
        let shift = bits - prec as u64;
        let unit = BigInt::one() << shift as usize;
        let (mut q, r) = self.mant.div_mod_floor(&unit);
        if dir == Round::Ceil && !r.is_zero() {
            q += 1;
        }
        Dyadic::new(q, self.exp + shift as i64)
    }

    /// `a / b` rounded to `prec` bits in direction `dir`. Panics if `b` is zero.
    pub fn div_round(a: &Self, b: &Self, prec: u32, dir: Round) -> Self {
        assert!(!b.is_zero(), "dyadic division by zero");
        if a.is_zero() {
            return Dyadic::zero();
        }
        let s = (prec as i64 + 2 + b.mant.bits() as i64 - a.mant.bits() as i64).max(0);
        let num = &a.mant << s as usize;
        let (mut q, r) = num.div_mod_floor(&b.mant);
        if dir == Round::Ceil && !r.is_zero() {
            q += 1;
        }
        Dyadic::new(q, a.exp - b.exp - s).round(prec, dir)
    }

    /// Square root of a non-negative dyadic rounded to `prec` bits.
    pub fn sqrt_round(&self, prec: u32, dir: Round) -> Self {
        assert!(!self.is_negative(), "square root of a negative dyadic");
        if self.is_zero() {
            return Dyadic::zero();
        }
        let bits = self.mant.bits() as i64;
        let s = (2 * prec as i64 + 5 - bits - self.exp)
            .div_euclid(2)
            .max((1 - self.exp).div_euclid(2));
        let shift = self.exp + 2 * s;
        debug_assert!(shift >= 0);
        let n = &self.mant << shift as usize;
        let mut r = n.sqrt();
        if dir == Round::Ceil && &r * &r < n {
            r += 1;
        }
        Dyadic::new(r, -s).round(prec, dir)
    }

    pub fn to_rational(&self) -> BigRational {
        if self.exp >= 0 {
            BigRational::from_integer(&self.mant << self.exp as usize)
        } else {
            BigRational::new(self.mant.clone(), BigInt::one() << (-self.exp) as usize)
        }
    }

    /// Round a rational to a dyadic with `prec` significant bits.
    pub fn from_rational(q: &BigRational, prec: u32, dir: Round) -> Self {
        let num = Dyadic::from_int(q.numer().clone());
        let den = Dyadic::from_int(q.denom().clone());
        Dyadic::div_round(&num, &den, prec, dir)
    }

    /// Nearest double (ties and overflow handled by `BigInt::to_f64`).
    pub fn to_f64(&self) -> f64 {
        if self.is_zero() {
            return 0.0;
        }
        let bits = self.mant.bits() as i64;
        let drop = (bits - 60).max(0);
        let m = (&self.mant >> drop as usize).to_f64().unwrap_or(f64::NAN);
        let e = self.exp + drop;
        if e > 2000 {
            return m.signum() * f64::INFINITY;
        }
        if e < -2200 {
            return 0.0;
        }
        // Split the scaling so intermediate powers stay finite.
        let half = e / 2;
        m * 2f64.powi(half as i32) * 2f64.powi((e - half) as i32)
    }

    /// A double that is `<=` (Floor) or `>=` (Ceil) the exact value.
    pub fn to_f64_dir(&self, dir: Round) -> f64 {
        let x = self.to_f64();
        let back = match Dyadic::from_f64(x) {
            Some(d) => d,
            None => return x,
        };
        match (dir, back.cmp(self)) {
            (Round::Floor, Ordering::Greater) => x.next_down(),
            (Round::Ceil, Ordering::Less) => x.next_up(),
            _ => x,
        }
    }
}

impl Ord for Dyadic {
    fn cmp(&self, other: &Self) -> Ordering {
        let sa = self.signum();
        let sb = other.signum();
        if sa != sb {
            return sa.cmp(&sb);
        }
        if sa == 0 {
            return Ordering::Equal;
        }
        // Same sign: compare magnitudes first to avoid huge shifts.
        let ma = self.magnitude_bits();
        let mb = other.magnitude_bits();
        if ma != mb {
            let mag = ma.cmp(&mb);
            return if sa > 0 { mag } else { mag.reverse() };
        }
        let (a, b, _) = self.align(other);
        a.cmp(&b)
    }
}

impl PartialOrd for Dyadic {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for Dyadic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}*2^{}", self.mant, self.exp)
    }
}

impl fmt::Display for Dyadic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:e}", self.to_f64())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn normalizes_trailing_zeros() {
        let d = Dyadic::new(BigInt::from(12), 0);
        assert_eq!(d.mantissa(), &BigInt::from(3));
        assert_eq!(d.exponent(), 2);
    }

    #[test]
    fn f64_roundtrip() {
        for x in [0.1, -3.75, 1e-300, 6.02e23, 5e-324] {
            assert_eq!(Dyadic::from_f64(x).unwrap().to_f64(), x);
        }
    }

    #[test]
    fn directed_division() {
        let one = Dyadic::one();
        let three = Dyadic::from_int(3);
        let lo = Dyadic::div_round(&one, &three, 64, Round::Floor);
        let hi = Dyadic::div_round(&one, &three, 64, Round::Ceil);
        let third = BigRational::new(1.into(), 3.into());
        assert!(lo.to_rational() < third && third < hi.to_rational());
        assert!(hi.sub(&lo) <= Dyadic::new(BigInt::one(), -64));
    }

    #[test]
    fn directed_sqrt() {
        let two = Dyadic::from_int(2);
        let lo = two.sqrt_round(80, Round::Floor);
        let hi = two.sqrt_round(80, Round::Ceil);
        assert!(lo.mul(&lo) < two && hi.mul(&hi) > two);
        let four = Dyadic::from_int(4);
        assert_eq!(four.sqrt_round(10, Round::Floor), Dyadic::from_int(2));
        assert_eq!(four.sqrt_round(10, Round::Ceil), Dyadic::from_int(2));
        let tiny = Dyadic::new(BigInt::from(9), -41);
        let r = tiny.sqrt_round(70, Round::Floor);
        assert!(r.mul(&r) <= tiny);
    }

    #[test]
    fn ordering_mixed_scales() {
        let a = Dyadic::new(BigInt::from(1), -1000);
        let b = Dyadic::new(BigInt::from(1), 1000);
        assert!(a < b);
        assert!(b.neg() < a.neg());
        assert!(Dyadic::zero() < a);
    }
}
