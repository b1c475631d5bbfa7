//! Areas of the complexes along the doubling sequence, with exact integer
//! certificates for each one-step inequality.

use foliate::cone::{area_sequence, KSequence};
use num_bigint::BigInt;

fn main() -> foliate::Result<()> {
    let l0 = [1, 1, 1, 1].map(BigInt::from);
    let seq = area_sequence(&KSequence::Doubling { k0: 2 }, 15, &l0, true, 192)?;
    for (i, s) in seq.areas.iter().enumerate() {
        print!("S_{i:<2} = {:.15}", s.mid_f64());
        if let Some(c) = seq.certificates.get(i) {
            print!("   k = {:<6} exact {} numeric {}", c.k, c.exact, c.numeric);
        }
        println!();
    }
    Ok(())
}
