use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use super::complex::{Band, BandComplex, Interval, MultiInterval, Q};
use crate::error::{Error, Result};
use crate::numerics::parse_decimal_rational;

#[derive(Serialize, Deserialize, Debug, PartialEq)]
struct BandDoc {
    label: String,
    width: String,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    length: Option<String>,
    bases: [String; 2],
}

#[derive(Serialize, Deserialize, Debug, PartialEq)]
struct ComplexDoc {
    precision: String,
    support: Vec<[String; 2]>,
    bands: Vec<BandDoc>,
}

/// Exact text for a rational: a terminating decimal when one exists, else `p/q`.
pub fn format_exact(x: &Q) -> String {
    let mut d = x.denom().clone();
    let two = BigInt::from(2);
    let five = BigInt::from(5);
    let mut places = 0usize;
    let (mut twos, mut fives) = (0usize, 0usize);
    while d.is_even() {
        d /= &two;
        twos += 1;
    }
    while (&d % &five).is_zero() {
        d /= &five;
        fives += 1;
    }
    if !d.is_one() {
        return format!("{}/{}", x.numer(), x.denom());
    }
    places += twos.max(fives);
    format_decimal(x, places as u32)
}

/// Decimal text rounded to nearest with `places` fractional digits.
pub fn format_decimal(x: &Q, places: u32) -> String {
    let scale = num_traits::pow(BigInt::from(10), places as usize);
    let scaled = x * Q::from_integer(scale);
    let n = scaled.round().to_integer();
    let neg = n.is_negative();
    let mut s = n.abs().to_string();
    if places > 0 {
        if s.len() <= places as usize {
            s = format!("{}{}", "0".repeat(places as usize + 1 - s.len()), s);
        }
        s.insert(s.len() - places as usize, '.');
    }
    if neg { format!("-{s}") } else { s }
}

pub fn parse_number(text: &str) -> Result<Q> {
    match text.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().map_err(|_| Error::Domain(format!("bad rational {text:?}")))?;
            let d: BigInt = d.trim().parse().map_err(|_| Error::Domain(format!("bad rational {text:?}")))?;
            if d.is_zero() {
                return Err(Error::Domain("zero denominator".into()));
            }
            Ok(Q::new(n, d))
        }
        None => parse_decimal_rational(text),
    }
}

impl BandComplex {
    /// Canonical JSON document. With `places = None` every number is exact and the
    /// precision tag is `"exact"`; otherwise numbers are rounded decimals and the tag
    /// is `"decimal:<places>"`.
    pub fn to_json(&self, places: Option<u32>) -> Result<String> {
        let fmt = |x: &Q| match places {
            None => format_exact(x),
            Some(p) => format_decimal(x, p),
        };
        let doc = ComplexDoc {
            precision: match places {
                None => "exact".into(),
                Some(p) => format!("decimal:{p}"),
            },
            support: self.support.parts().iter().map(|p| [fmt(&p.lo), fmt(&p.hi)]).collect(),
            bands: self
                .bands
                .iter()
                .map(|b| BandDoc {
                    label: b.label.clone(),
                    width: fmt(&b.width),
                    length: b.length.as_ref().map(fmt),
                    bases: [fmt(&b.bases[0]), fmt(&b.bases[1])],
                })
                .collect(),
        };
        Ok(serde_json::to_string_pretty(&doc)?)
    }

    pub fn from_json(text: &str) -> Result<BandComplex> {
        let doc: ComplexDoc = serde_json::from_str(text)?;
        let parts = doc
            .support
            .iter()
            .map(|[a, b]| Ok(Interval::new(parse_number(a)?, parse_number(b)?)))
            .collect::<Result<Vec<_>>>()?;
        let bands = doc
            .bands
            .iter()
            .map(|b| {
                Ok(Band {
                    label: b.label.clone(),
                    width: parse_number(&b.width)?,
                    length: b.length.as_deref().map(parse_number).transpose()?,
                    bases: [parse_number(&b.bases[0])?, parse_number(&b.bases[1])?],
                })
            })
            .collect::<Result<Vec<_>>>()?;
        BandComplex::new(MultiInterval::new(parts)?, bands)
    }
}
