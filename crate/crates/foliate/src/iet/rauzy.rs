//! Block-synchronized Rauzy-Veech induction on exact rational parameters.
//!
//! Used as an independent check on the renormalization matrices: running the
//! induction schedule for `k` on the stage parameters `x(B(k) w')` must come back
//! to the standard permutation with parameters `x(w')`, and the accumulated
//! parameter transformation must equal `R(k)`.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::exchange::BlockPermutation;
use crate::cone::mat_b;
use crate::error::{Error, Result};
use crate::numerics::IMatrix;

type Q = BigRational;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RauzyOp {
    /// One induction step at the right end of a block.
    Step(usize),
    /// Reorder transversals: new block `j` is old block `order[j]`.
    Rotate([usize; 3]),
}

/// Record of a single induction step.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RauzyMove {
    pub block: usize,
    pub winner: usize,
    pub loser: usize,
    /// Whether the winner was the last label of the top row.
    pub top_wins: bool,
}

#[derive(Clone, Debug)]
pub struct RauzyState {
    top: Vec<Vec<usize>>,
    bottom: Vec<Vec<usize>>,
    /// Indexed by label - 1.
    lengths: Vec<Q>,
    /// Old parameters = `transform` times current parameters.
    transform: IMatrix,
}

impl RauzyState {
    pub fn new(perm: &BlockPermutation, lengths: Vec<Q>) -> Result<Self> {
        if lengths.len() != perm.labels() || lengths.iter().any(|x| !x.is_positive()) {
            return Err(Error::Domain("one positive length per label is required".into()));
        }
        Ok(RauzyState {
            top: perm.top().to_vec(),
            bottom: perm.bottom().to_vec(),
            transform: IMatrix::identity(lengths.len()),
            lengths,
        })
    }

    pub fn lengths(&self) -> &[Q] {
        &self.lengths
    }

    pub fn transform(&self) -> &IMatrix {
        &self.transform
    }

    pub fn permutation(&self) -> Result<BlockPermutation> {
        BlockPermutation::new(self.top.clone(), self.bottom.clone())
    }

    /// Compare the last labels of block `j`; the longer one wins, is shortened by
    /// the loser, and the loser moves right after the winner in the loser's row.
    pub fn step(&mut self, j: usize) -> Result<RauzyMove> {
        if j >= self.top.len() {
            return Err(Error::Domain(format!("no block {j}")));
        }
        let t = *self.top[j].last().expect("blocks are nonempty");
        let b = *self.bottom[j].last().expect("blocks are nonempty");
        if t == b {
            return Err(Error::Structural(format!("block {j} ends with the same label {t} on both rows")));
        }
        let (lt, lb) = (&self.lengths[t - 1], &self.lengths[b - 1]);
        if lt == lb {
            return Err(Error::Discontinuity(format!("labels {t} and {b} have equal length")));
        }
        let top_wins = lt > lb;
        let (win, lose) = if top_wins { (t, b) } else { (b, t) };
        let row = if top_wins { &mut self.bottom } else { &mut self.top };
        row[j].pop();
        let (bi, pos) = row
            .iter()
            .enumerate()
            .find_map(|(bi, blk)| blk.iter().position(|&l| l == win).map(|p| (bi, p)))
            .expect("winner appears in both rows");
        row[bi].insert(pos + 1, lose);
        if row[j].is_empty() {
            return Err(Error::Structural(format!("block {j} emptied")));
        }
        let shorter = self.lengths[lose - 1].clone();
        self.lengths[win - 1] -= shorter;
        // old = E new with E = I + e_win e_lose^T
        let n = self.lengths.len();
        let mut e = IMatrix::identity(n);
        e.set(win - 1, lose - 1, BigInt::one());
        self.transform = self.transform.matmul(&e);
        Ok(RauzyMove { block: j, winner: win, loser: lose, top_wins })
    }

    pub fn rotate(&mut self, order: [usize; 3]) -> Result<()> {
        if self.top.len() != 3 {
            return Err(Error::Domain("rotation is defined for three blocks".into()));
        }
        let mut seen = [false; 3];
        for &o in &order {
            if o > 2 || seen[o] {
                return Err(Error::Domain(format!("{order:?} is not a permutation")));
            }
            seen[o] = true;
        }
        self.top = order.iter().map(|&o| self.top[o].clone()).collect();
        self.bottom = order.iter().map(|&o| self.bottom[o].clone()).collect();
        Ok(())
    }

    /// Rename label `l` to `map[l - 1]`.
    pub fn relabel(&mut self, map: &[usize]) -> Result<()> {
        let n = self.lengths.len();
        let mut seen = vec![false; n + 1];
        if map.len() != n || map.iter().any(|&m| m == 0 || m > n || std::mem::replace(&mut seen[m], true)) {
            return Err(Error::Domain("relabeling must be a permutation".into()));
        }
        for row in [&mut self.top, &mut self.bottom] {
            for l in row.iter_mut().flatten() {
                *l = map[*l - 1];
            }
        }
        let mut lengths = vec![Q::zero(); n];
        let mut p = IMatrix::zeros(n, n);
        for (old, &new) in map.iter().enumerate() {
            lengths[new - 1] = self.lengths[old].clone();
            p.set(old, new - 1, BigInt::one());
        }
        self.lengths = lengths;
        self.transform = self.transform.matmul(&p);
        Ok(())
    }

    pub fn apply(&mut self, op: RauzyOp) -> Result<Option<RauzyMove>> {
        match op {
            RauzyOp::Step(j) => self.step(j).map(Some),
            RauzyOp::Rotate(order) => self.rotate(order).map(|_| None),
        }
    }
}

/// Relabeling applied after the schedule, as `old -> new`.
pub const FINAL_RELABEL: [usize; 9] = [7, 8, 9, 3, 1, 2, 5, 6, 4];

/// Induction schedule taking stage parameters for `k` to the next stage.
pub fn schedule(k: u64) -> Vec<RauzyOp> {
    use RauzyOp::*;
    let k = k as usize;
    let mut ops = Vec::new();
    let steps = |ops: &mut Vec<RauzyOp>, n: usize| ops.extend(std::iter::repeat(Step(2)).take(n));
    steps(&mut ops, 2 * (k - 1) + 1);
    ops.push(Rotate([2, 0, 1]));
    steps(&mut ops, 2);
    ops.push(Rotate([2, 0, 1]));
    steps(&mut ops, 3 * (k - 1) + 3);
    ops.push(Rotate([2, 0, 1]));
    steps(&mut ops, 2);
    ops.push(Rotate([1, 2, 0]));
    ops
}

#[derive(Clone, Debug)]
pub struct RauzyRun {
    pub k: u64,
    pub moves: Vec<RauzyMove>,
    /// Composite parameter transformation: `x(w) = matrix x(w')`.
    pub matrix: IMatrix,
    pub final_permutation: BlockPermutation,
    pub final_lengths: Vec<Q>,
}

/// `x(w)` for rational `w`.
pub fn x_from_w_exact(w: &[Q; 3]) -> Result<Vec<Q>> {
    let [a, b, c] = w;
    if !(a > &(b + c) && b > c && c.is_positive()) {
        return Err(Error::Domain("x_from_w needs w1 > w2 + w3 > 2 w3 > 0".into()));
    }
    let d = a - b - c;
    Ok(vec![d.clone(), c.clone(), b - c, c.clone(), b.clone(), a - b, c.clone(), b.clone(), d])
}

/// Run the schedule for `k` starting from `x(B(k) w')`.
pub fn rauzy_composite(k: u64, w_next: &[Q; 3]) -> Result<RauzyRun> {
    let b = mat_b(k)?;
    let w: [Q; 3] = std::array::from_fn(|i| (0..3).map(|j| Q::from_integer(b.get(i, j).clone()) * &w_next[j]).sum());
    let mut st = RauzyState::new(&BlockPermutation::standard(), x_from_w_exact(&w)?)?;
    let mut moves = Vec::new();
    for op in schedule(k) {
        moves.extend(st.apply(op)?);
    }
    st.relabel(&FINAL_RELABEL)?;
    let final_permutation = st.permutation()?;
    Ok(RauzyRun { k, moves, matrix: st.transform, final_permutation, final_lengths: st.lengths })
}

/// Whether the schedule for `k` returns to the standard permutation with
/// parameters `x(w')` and composite matrix `expected`.
pub fn rauzy_matches(k: u64, w_next: &[Q; 3], expected: &IMatrix) -> Result<bool> {
    let run = rauzy_composite(k, w_next)?;
    Ok(run.final_permutation == BlockPermutation::standard()
        && run.final_lengths == x_from_w_exact(w_next)?
        && &run.matrix == expected)
}

