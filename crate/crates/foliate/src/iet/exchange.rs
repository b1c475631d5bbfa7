use std::fmt;

use crate::error::{Error, Result};
use crate::numerics::Scalar;

/// Labels laid out in blocks on a top and a bottom row. Block `j` of both rows
/// lives on transversal `T_{j+1}`. Labels are `1..=n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BlockPermutation {
    top: Vec<Vec<usize>>,
    bottom: Vec<Vec<usize>>,
}

impl BlockPermutation {
    pub fn new(top: Vec<Vec<usize>>, bottom: Vec<Vec<usize>>) -> Result<Self> {
        if top.len() != bottom.len() || top.is_empty() {
            return Err(Error::Domain("rows need the same positive number of blocks".into()));
        }
        let n: usize = top.iter().map(Vec::len).sum();
        for row in [&top, &bottom] {
            let mut seen = vec![false; n + 1];
            for &l in row.iter().flatten() {
                if l == 0 || l > n || seen[l] {
                    return Err(Error::Domain(format!("label {l} is out of range or repeated")));
                }
                seen[l] = true;
            }
            if row.iter().any(Vec::is_empty) || seen[1..].iter().any(|s| !s) {
                return Err(Error::Domain("every block must be nonempty and use each label once".into()));
            }
        }
        Ok(BlockPermutation { top, bottom })
    }

    /// The nine-label, three-block permutation of the renormalized stages.
    pub fn standard() -> Self {
        BlockPermutation {
            top: vec![vec![1, 2, 3, 4], vec![5, 6], vec![7, 8, 9]],
            bottom: vec![vec![3, 7, 6], vec![4, 8, 1], vec![9, 2, 5]],
        }
    }

    pub fn top(&self) -> &[Vec<usize>] {
        &self.top
    }

    pub fn bottom(&self) -> &[Vec<usize>] {
        &self.bottom
    }

    pub fn labels(&self) -> usize {
        self.top.iter().map(Vec::len).sum()
    }

    pub fn blocks(&self) -> usize {
        self.top.len()
    }

    pub fn swapped(&self) -> Self {
        BlockPermutation { top: self.bottom.clone(), bottom: self.top.clone() }
    }
}

impl fmt::Display for BlockPermutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let show = |row: &[Vec<usize>]| {
            row.iter()
                .map(|b| b.iter().map(usize::to_string).collect::<Vec<_>>().join(" "))
                .collect::<Vec<_>>()
                .join(" | ")
        };
        write!(f, "{} / {}", show(&self.top), show(&self.bottom))
    }
}

/// A point on transversal `T_{transversal + 1}` at distance `offset` from its left end.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Point {
    pub transversal: usize,
    pub offset: f64,
}

impl Point {
    pub fn new(transversal: usize, offset: f64) -> Self {
        Point { transversal, offset }
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(T{}, {})", self.transversal + 1, self.offset)
    }
}

#[derive(Clone, Debug)]
struct Row {
    block: Vec<usize>,
    start: Vec<Scalar>,
    start_f: Vec<f64>,
}

impl Row {
    fn build(blocks: &[Vec<usize>], lengths: &[Scalar]) -> (Row, Vec<Scalar>) {
        let n = lengths.len();
        let mut row = Row { block: vec![0; n + 1], start: vec![Scalar::zero(); n + 1], start_f: vec![0.0; n + 1] };
        let mut sums = Vec::with_capacity(blocks.len());
        for (bi, labels) in blocks.iter().enumerate() {
            let mut pos = Scalar::zero();
            for &l in labels {
                row.block[l] = bi;
                row.start_f[l] = pos.mid_f64();
                row.start[l] = pos.clone();
                pos = &pos + &lengths[l - 1];
            }
            sums.push(pos);
        }
        (row, sums)
    }
}

/// Interval exchange on a union of transversals: the piece of the top row
/// carrying label `m` is translated onto the piece of the bottom row carrying `m`.
///
/// Lengths are enclosures. Evaluation runs in `f64` and falls back to interval
/// arithmetic near a discontinuity; a point whose enclosure still straddles one
/// is rejected.
#[derive(Clone, Debug)]
pub struct Iet {
    perm: BlockPermutation,
    lengths: Vec<Scalar>,
    blocks: Vec<Scalar>,
    blocks_f: Vec<f64>,
    top: Row,
    bottom: Row,
    slack: f64,
}

impl Iet {
    pub fn new(perm: BlockPermutation, lengths: Vec<Scalar>) -> Result<Self> {
        if lengths.len() != perm.labels() {
            return Err(Error::Domain(format!("{} lengths for {} labels", lengths.len(), perm.labels())));
        }
        if lengths.iter().any(|x| !x.is_positive()) {
            return Err(Error::Domain("interval lengths must be positive".into()));
        }
        let (top, tsum) = Row::build(&perm.top, &lengths);
        let (bottom, bsum) = Row::build(&perm.bottom, &lengths);
        for (j, (a, b)) in tsum.iter().zip(&bsum).enumerate() {
            if !a.overlaps(b) {
                return Err(Error::Domain(format!("block {} has different lengths on the two rows", j + 1)));
            }
        }
        let biggest = tsum.iter().map(|s| s.bounds_f64().1).fold(0.0, f64::max);
        let widest = tsum.iter().chain(&bsum).map(Scalar::width_f64).fold(0.0, f64::max);
        let slack = widest + 1e-12 * biggest.max(1.0);
        Ok(Iet {
            blocks_f: tsum.iter().map(Scalar::mid_f64).collect(),
            blocks: tsum,
            perm,
            lengths,
            top,
            bottom,
            slack,
        })
    }

    pub fn permutation(&self) -> &BlockPermutation {
        &self.perm
    }

    pub fn lengths(&self) -> &[Scalar] {
        &self.lengths
    }

    pub fn block_length(&self, j: usize) -> &Scalar {
        &self.blocks[j]
    }

    pub fn block_length_f64(&self, j: usize) -> f64 {
        self.blocks_f[j]
    }

    /// Label of the top-row piece containing `p`.
    pub fn label_at(&self, p: Point) -> Result<usize> {
        self.locate(&self.perm.top, &self.top, p)
    }

    /// The exchange, top row to bottom row.
    pub fn map(&self, p: Point) -> Result<Point> {
        let m = self.label_at(p)?;
        let d = p.offset - self.top.start_f[m];
        Ok(Point::new(self.bottom.block[m], self.bottom.start_f[m] + d))
    }

    /// The inverse exchange, bottom row to top row.
    pub fn inverse(&self, p: Point) -> Result<Point> {
        let m = self.locate(&self.perm.bottom, &self.bottom, p)?;
        let d = p.offset - self.bottom.start_f[m];
        Ok(Point::new(self.top.block[m], self.top.start_f[m] + d))
    }

    /// The exchange on an enclosure of the offset.
    pub fn map_scalar(&self, transversal: usize, offset: &Scalar) -> Result<(usize, Scalar)> {
        let m = self.locate_scalar(&self.perm.top, &self.top, transversal, offset)?;
        let out = offset - &self.top.start[m] + &self.bottom.start[m];
        Ok((self.bottom.block[m], out))
    }

    fn locate(&self, blocks: &[Vec<usize>], row: &Row, p: Point) -> Result<usize> {
        let labels = blocks
            .get(p.transversal)
            .ok_or_else(|| Error::Domain(format!("no transversal T{}", p.transversal + 1)))?;
        if !p.offset.is_finite() || p.offset < 0.0 {
            return Err(Error::Domain(format!("offset {} is outside the transversal", p.offset)));
        }
        let len = self.blocks_f[p.transversal];
        let mut found = None;
        let mut near = (p.offset - len).abs() < self.slack;
        for &l in labels {
            let s = row.start_f[l];
            if s > 0.0 && (p.offset - s).abs() < self.slack {
                near = true;
            }
            if s <= p.offset {
                found = Some(l);
            }
        }
        if near {
            return self.locate_scalar(blocks, row, p.transversal, &Scalar::from_f64(p.offset));
        }
        if p.offset >= len {
            return Err(Error::Domain(format!("offset {} is outside the transversal", p.offset)));
        }
        Ok(found.expect("offset is nonnegative"))
    }

    fn locate_scalar(&self, blocks: &[Vec<usize>], row: &Row, t: usize, x: &Scalar) -> Result<usize> {
        let labels = blocks.get(t).ok_or_else(|| Error::Domain(format!("no transversal T{}", t + 1)))?;
        let len = &self.blocks[t];
        if x.is_negative() || x.certainly_gt(len) || x.lo() >= len.hi() {
            return Err(Error::Domain("offset is outside the transversal".into()));
        }
        if !x.certainly_lt(len) {
            return Err(Error::Discontinuity(format!("offset {x} is not separated from the end of T{}", t + 1)));
        }
        let mut found = labels[0];
        for &l in &labels[1..] {
            let s = &row.start[l];
            if x.certainly_lt(s) {
                break;
            }
            if !(x.certainly_gt(s) || x.lo() >= s.hi()) {
                return Err(Error::Discontinuity(format!("offset {x} is not separated from the start of label {l}")));
            }
            found = l;
        }
        Ok(found)
    }
}
