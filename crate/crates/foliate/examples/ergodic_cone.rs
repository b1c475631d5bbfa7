//! The two invariant directions of the renormalization cocycle for a summable
//! k-sequence.

use foliate::cone::KSequence;
use foliate::iet::ergodic_cone;

fn main() -> foliate::Result<()> {
    let c = ergodic_cone(&KSequence::Doubling { k0: 2 }, 24, 256)?;
    println!("u = {:?}", c.u.iter().map(|x| format!("{:.6}", x.mid_f64())).collect::<Vec<_>>());
    println!("v = {:?}", c.v.iter().map(|x| format!("{:.6}", x.mid_f64())).collect::<Vec<_>>());
    println!("sin(angle) >= {:.6}", c.sin_angle.bounds_f64().0);
    println!("alpha / beta in {:?}", c.ratio.bounds_f64());
    println!("separated: {}", c.separated());
    if let Some(w) = &c.warning {
        println!("warning: {w}");
    }
    Ok(())
}
