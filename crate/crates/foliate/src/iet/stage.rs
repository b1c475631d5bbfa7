use super::exchange::{BlockPermutation, Iet, Point};
use crate::error::{Error, Result};
use crate::numerics::Scalar;

/// `x = (w1-w2-w3, w3, w2-w3, w3, w2, w1-w2, w3, w2, w1-w2-w3)`.
pub fn x_from_w(w: &[Scalar; 3]) -> Result<[Scalar; 9]> {
    let [a, b, c] = w;
    if !a.certainly_gt(&(b + c)) || !b.certainly_gt(c) || !c.is_positive() {
        return Err(Error::Domain("x_from_w needs w1 > w2 + w3 > 2 w3 > 0".into()));
    }
    let d = a - b - c;
    Ok([d.clone(), c.clone(), b - c, c.clone(), b.clone(), a - b, c.clone(), b.clone(), d])
}

/// Stage `i` of the renormalization: widths, parameters and the exchange map on
/// `T1`, `T2`, `T3`, each of length `w1`.
#[derive(Clone, Debug)]
pub struct IetStage {
    pub index: usize,
    pub w: [Scalar; 3],
    pub x: [Scalar; 9],
    iet: Iet,
}

impl IetStage {
    pub fn new(index: usize, w: [Scalar; 3]) -> Result<Self> {
        let x = x_from_w(&w)?;
        let iet = Iet::new(BlockPermutation::standard(), x.to_vec())?;
        Ok(IetStage { index, w, x, iet })
    }

    pub fn iet(&self) -> &Iet {
        &self.iet
    }

    pub fn map(&self, p: Point) -> Result<Point> {
        self.iet.map(p)
    }

    pub fn inverse(&self, p: Point) -> Result<Point> {
        self.iet.inverse(p)
    }

    /// Sums of `x` over the six blocks (top rows first); each equals `w1`.
    pub fn block_sums(&self) -> Vec<Scalar> {
        let perm = self.iet.permutation();
        perm.top()
            .iter()
            .chain(perm.bottom())
            .map(|b| Scalar::sum(b.iter().map(|&l| &self.x[l - 1]).collect::<Vec<_>>()))
            .collect()
    }
}
