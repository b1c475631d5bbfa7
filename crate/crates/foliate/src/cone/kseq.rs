use num_bigint::BigInt;
use num_traits::{One, Pow};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A sequence of natural numbers `k_0, k_1, ...` driving the renormalization.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "KSeqDoc", into = "KSeqDoc")]
pub enum KSequence {
    List(Vec<u64>),
    /// `n = None` means the infinite constant sequence.
    Constant { c: u64, n: Option<usize> },
    /// `k_i = c * r^i`.
    Geometric { c: u64, r: u64 },
    /// `k_i = k0 * 2^i`.
    Doubling { k0: u64 },
}

#[derive(Serialize, Deserialize)]
struct GeoDoc {
    c: u64,
    r: u64,
}

#[derive(Serialize, Deserialize)]
struct DoublingDoc {
    k0: u64,
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum KSeqDoc {
    List {
        list: Vec<u64>,
    },
    Constant {
        constant: u64,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        n: Option<usize>,
    },
    Geometric {
        geometric: GeoDoc,
    },
    Doubling {
        doubling: DoublingDoc,
    },
}

impl TryFrom<KSeqDoc> for KSequence {
    type Error = String;
    fn try_from(d: KSeqDoc) -> std::result::Result<Self, String> {
        let ks = match d {
            KSeqDoc::List { list } => KSequence::List(list),
            KSeqDoc::Constant { constant, n } => KSequence::Constant { c: constant, n },
            KSeqDoc::Geometric { geometric } => KSequence::Geometric { c: geometric.c, r: geometric.r },
            KSeqDoc::Doubling { doubling } => KSequence::Doubling { k0: doubling.k0 },
        };
        ks.validate().map_err(|e| e.to_string())?;
        Ok(ks)
    }
}

impl From<KSequence> for KSeqDoc {
    fn from(k: KSequence) -> Self {
        match k {
            KSequence::List(list) => KSeqDoc::List { list },
            KSequence::Constant { c, n } => KSeqDoc::Constant { constant: c, n },
            KSequence::Geometric { c, r } => KSeqDoc::Geometric { geometric: GeoDoc { c, r } },
            KSequence::Doubling { k0 } => KSeqDoc::Doubling { doubling: DoublingDoc { k0 } },
        }
    }
}

impl KSequence {
    pub fn validate(&self) -> Result<()> {
        let bad = |m: &str| Err(Error::Configuration(m.to_string()));
        match self {
            KSequence::List(v) if v.iter().any(|&k| k < 1) => bad("list terms must be at least 1"),
            KSequence::Constant { c, .. } if *c < 1 => bad("constant must be at least 1"),
            KSequence::Geometric { c, r } if *c < 1 || *r < 2 => bad("geometric needs c >= 1 and r >= 2"),
            KSequence::Doubling { k0 } if *k0 < 1 => bad("doubling needs k0 >= 1"),
            _ => Ok(()),
        }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Configuration(format!("bad k-sequence: {e}")))
    }

    /// Number of available terms, `None` for an infinite rule.
    pub fn len(&self) -> Option<usize> {
        match self {
            KSequence::List(v) => Some(v.len()),
            KSequence::Constant { n, .. } => *n,
            _ => None,
        }
    }

    pub fn term(&self, i: usize) -> Option<BigInt> {
        if let Some(n) = self.len() {
            if i >= n {
                return None;
            }
        }
        Some(match self {
            KSequence::List(v) => BigInt::from(v[i]),
            KSequence::Constant { c, .. } => BigInt::from(*c),
            KSequence::Geometric { c, r } => BigInt::from(*c) * Pow::pow(BigInt::from(*r), i),
            KSequence::Doubling { k0 } => BigInt::from(*k0) << i,
        })
    }

    /// The first `n` terms, or a configuration error if the sequence is shorter.
    pub fn terms(&self, n: usize) -> Result<Vec<BigInt>> {
        (0..n)
            .map(|i| {
                self.term(i).ok_or_else(|| {
                    Error::Configuration(format!("k-sequence has fewer than {n} terms"))
                })
            })
            .collect()
    }

    /// True when the rule guarantees `sum 1/k_i < infinity`.
    pub fn is_summable(&self) -> bool {
        matches!(self, KSequence::Geometric { .. } | KSequence::Doubling { .. })
    }

    /// Whether `k_{i+1} >= 2 k_i` holds for all `i + 1 < n`.
    pub fn doubles_through(&self, n: usize) -> bool {
        match self {
            KSequence::Geometric { .. } | KSequence::Doubling { .. } => true,
            _ => {
                let two = BigInt::one() + BigInt::one();
                (0..n.saturating_sub(1)).all(|i| match (self.term(i), self.term(i + 1)) {
                    (Some(a), Some(b)) => b >= a * &two,
                    _ => false,
                })
            }
        }
    }
}
