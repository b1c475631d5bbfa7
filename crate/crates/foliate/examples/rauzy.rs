//! The Rauzy induction schedule that realizes one renormalization step, and its
//! transition matrix.

use foliate::band::q;
use foliate::iet::{mat_r, rauzy_composite, schedule};

fn main() -> foliate::Result<()> {
    let k = 3;
    let w_next = [q(29, 7), q(5, 3), q(3, 5)];
    println!("{} operations in the schedule for k = {k}", schedule(k).len());
    let run = rauzy_composite(k, &w_next)?;
    println!("{} induction moves", run.moves.len());
    for i in 0..run.matrix.rows() {
        println!("{:?}", run.matrix.row(i).iter().map(ToString::to_string).collect::<Vec<_>>());
    }
    println!("equals R({k}): {}", run.matrix == mat_r(k)?);
    Ok(())
}
