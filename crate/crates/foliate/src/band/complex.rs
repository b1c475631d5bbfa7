use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

use crate::error::{Error, Result};

pub type Q = BigRational;

pub fn q(n: i64, d: i64) -> Q {
    Q::new(BigInt::from(n), BigInt::from(d))
}

pub fn qi(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

/// A closed interval `[lo, hi]`, possibly a single point.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Interval {
    pub lo: Q,
    pub hi: Q,
}

impl Interval {
    pub fn new(lo: Q, hi: Q) -> Self {
        Interval { lo, hi }
    }

    pub fn len(&self) -> Q {
        &self.hi - &self.lo
    }

    pub fn is_point(&self) -> bool {
        self.lo == self.hi
    }

    pub fn contains(&self, x: &Q) -> bool {
        &self.lo <= x && x <= &self.hi
    }

    pub fn contains_interval(&self, lo: &Q, hi: &Q) -> bool {
        &self.lo <= lo && hi <= &self.hi
    }

    pub fn meets(&self, lo: &Q, hi: &Q) -> bool {
        lo <= &self.hi && &self.lo <= hi
    }
}

/// Sorted, pairwise disjoint closed intervals.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct MultiInterval {
    parts: Vec<Interval>,
}

impl MultiInterval {
    pub fn new(mut parts: Vec<Interval>) -> Result<Self> {
        parts.sort();
        for p in &parts {
            if p.lo > p.hi {
                return Err(Error::Domain(format!("reversed interval [{}, {}]", p.lo, p.hi)));
            }
        }
        for w in parts.windows(2) {
            if w[0].hi >= w[1].lo {
                return Err(Error::Domain("support intervals overlap or touch".into()));
            }
        }
        Ok(MultiInterval { parts })
    }

    pub fn parts(&self) -> &[Interval] {
        &self.parts
    }

    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    /// Index of the component containing `[lo, hi]`.
    pub fn component_of(&self, lo: &Q, hi: &Q) -> Option<usize> {
        self.parts.iter().position(|p| p.contains_interval(lo, hi))
    }

    pub(crate) fn parts_mut(&mut self) -> &mut Vec<Interval> {
        &mut self.parts
    }
}

/// A band `[0, width] x [0, 1]` whose two bases are glued by translation onto
/// `[bases[e], bases[e] + width]` in the support.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Band {
    pub label: String,
    pub width: Q,
    pub length: Option<Q>,
    pub bases: [Q; 2],
}

impl Band {
    pub fn new(label: impl Into<String>, width: Q, bases: [Q; 2]) -> Self {
        Band { label: label.into(), width, length: None, bases }
    }

    pub fn with_length(mut self, length: Q) -> Self {
        self.length = Some(length);
        self
    }

    pub fn base(&self, side: usize) -> (Q, Q) {
        let s = self.bases[side].clone();
        let e = &s + &self.width;
        (s, e)
    }

    /// Translation carrying base 0 onto base 1.
    pub fn offset(&self) -> Q {
        &self.bases[1] - &self.bases[0]
    }

    pub fn area(&self) -> Option<Q> {
        self.length.as_ref().map(|l| l * &self.width)
    }
}

/// Support multi-interval plus bands. Lengths are present on every band of an
/// enhanced complex.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BandComplex {
    pub(crate) support: MultiInterval,
    pub(crate) bands: Vec<Band>,
}

impl BandComplex {
    pub fn new(support: MultiInterval, bands: Vec<Band>) -> Result<Self> {
        let cx = BandComplex { support, bands };
        cx.validate()?;
        Ok(cx)
    }

    pub fn support(&self) -> &MultiInterval {
        &self.support
    }

    pub fn bands(&self) -> &[Band] {
        &self.bands
    }

    pub fn is_enhanced(&self) -> bool {
        self.bands.iter().all(|b| b.length.is_some())
    }

    pub fn forget_lengths(&self) -> BandComplex {
        let mut cx = self.clone();
        for b in &mut cx.bands {
            b.length = None;
        }
        cx
    }

    /// Shift every coordinate by `t`.
    pub fn translate(&self, t: &Q) -> BandComplex {
        let parts = self
            .support
            .parts
            .iter()
            .map(|p| Interval::new(&p.lo + t, &p.hi + t))
            .collect();
        let bands = self
            .bands
            .iter()
            .map(|b| {
                let mut nb = b.clone();
                nb.bases = [&b.bases[0] + t, &b.bases[1] + t];
                nb
            })
            .collect();
        BandComplex { support: MultiInterval { parts }, bands }
    }

    pub fn validate(&self) -> Result<()> {
        for w in self.support.parts.windows(2) {
            if w[0].hi >= w[1].lo || w[0].lo > w[0].hi {
                return Err(Error::Domain("support is not sorted and disjoint".into()));
            }
        }
        for b in &self.bands {
            if b.width.is_negative() {
                return Err(Error::Domain(format!("band {} has negative width", b.label)));
            }
            if let Some(l) = &b.length {
                if !l.is_positive() {
                    return Err(Error::Domain(format!("band {} has non-positive length", b.label)));
                }
            }
            for side in 0..2 {
                let (s, e) = b.base(side);
                if self.support.component_of(&s, &e).is_none() {
                    return Err(Error::Domain(format!(
                        "base {side} of band {} at [{s}, {e}] leaves the support",
                        b.label
                    )));
                }
            }
        }
        Ok(())
    }

    /// Total area; every band must carry a length.
    pub fn area_exact(&self) -> Result<Q> {
        let mut total = Q::zero();
        for b in &self.bands {
            let a = b.area().ok_or_else(|| Error::Domain(format!("band {} has no length", b.label)))?;
            total += a;
        }
        Ok(total)
    }

    /// Attachments `(band, side)` whose base meets the closed interval `[lo, hi]`.
    pub(crate) fn attachments_meeting(&self, lo: &Q, hi: &Q) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for (bi, b) in self.bands.iter().enumerate() {
            for side in 0..2 {
                let (s, e) = b.base(side);
                if &s <= hi && &e >= lo {
                    out.push((bi, side));
                }
            }
        }
        out
    }
}

impl fmt::Display for BandComplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.support.parts.iter().map(|p| format!("[{}, {}]", p.lo, p.hi)).collect();
        writeln!(f, "support {}", parts.join(" "))?;
        for b in &self.bands {
            let (s0, e0) = b.base(0);
            let (s1, e1) = b.base(1);
            write!(f, "  {} width {}", b.label, b.width)?;
            if let Some(l) = &b.length {
                write!(f, " length {l}")?;
            }
            writeln!(f, " bases [{s0}, {e0}] [{s1}, {e1}]")?;
        }
        Ok(())
    }
}
