//! Orbit of the stage-0 interval exchange and its visit frequencies.

use foliate::cone::{solve_widths, KSequence};
use foliate::iet::{equidistribution_test, IetStage, Point};
use foliate::numerics::Scalar;

fn main() -> foliate::Result<()> {
    let sol = solve_widths(&KSequence::Doubling { k0: 2 }, 24, &Scalar::from_f64(1e-12), 128)?;
    let stage = IetStage::new(0, sol.w0().clone())?;
    let start = Point::new(0, 0.381966 * stage.iet().block_length_f64(0));

    let mut p = start;
    for _ in 0..5 {
        p = stage.map(p)?;
        println!("transversal {} offset {:.12}", p.transversal, p.offset);
    }
    let report = equidistribution_test(stage.iet(), start, 100_000, 1e-2)?;
    println!("{} of {} bins hit, dense: {}", report.bins_hit, report.bins_total, report.dense);
    println!("label frequencies: {:?}", report.frequencies.iter().map(|f| format!("{f:.4}")).collect::<Vec<_>>());
    Ok(())
}
