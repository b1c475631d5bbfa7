//! Samples components on random levels and clusters their directions.

use foliate::cone::KSequence;
use foliate::surface::{sample_components, SampleConfig};

fn main() -> foliate::Result<()> {
    let cfg = SampleConfig { levels: 6, per_level: 2, steps: 20_000, radius: 120, ..SampleConfig::default() };
    let rep = sample_components(&KSequence::Doubling { k0: 2 }, 24, &cfg)?;
    for l in &rep.levels {
        let ends: Vec<usize> = l.components.iter().map(|c| c.end_estimate).collect();
        println!("level {:.6}: ends {ends:?}", l.level);
    }
    for c in &rep.clusters {
        println!("cluster at {:.3} deg, spread {:.4}, {} curves", c.mean_deg, c.spread_deg, c.size);
    }
    println!("antipodal {} (error {:.4} deg)", rep.antipodal, rep.antipodal_error_deg);
    Ok(())
}
