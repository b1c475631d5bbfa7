//! Widths in the nested cone for a k-sequence, with per-stage checks and the
//! Hilbert diameters of the cone images.

use foliate::cone::{solve_widths, KSequence};
use foliate::numerics::Scalar;

fn main() -> foliate::Result<()> {
    let ks = match std::env::args().nth(1) {
        Some(text) => KSequence::from_json(&text)?,
        None => KSequence::Doubling { k0: 2 },
    };
    let sol = solve_widths(&ks, 40, &Scalar::from_f64(1e-15), 256)?;
    let w = sol.w0();
    for (i, x) in w.iter().enumerate() {
        let (lo, hi) = x.decimal_bounds(20);
        println!("w{} in [{lo}, {hi}]", i + 1);
    }
    for (i, c) in sol.checks.iter().enumerate().take(8) {
        println!("stage {i}: k = {}, inequalities hold: {}", sol.ks[i], c.holds());
    }
    if let Some(d) = sol.diameter() {
        println!("final Hilbert diameter <= {:.3e}", d.bounds_f64().1);
    }
    Ok(())
}
