//! Explores one component of a plane section and prints its summary.

use foliate::cone::KSequence;
use foliate::surface::{explore_component, model_for};

fn main() -> foliate::Result<()> {
    let model = model_for(&KSequence::Doubling { k0: 2 }, 24, 128)?;
    let a = 0.37 * model.sigma_f64();
    let seed = [0, 0, 0];
    if !model.vertex_active(&seed, a)? {
        println!("origin is not on this level");
        return Ok(());
    }
    let c = explore_component(&model, &seed, a, 150)?;
    println!("size {} reach {} tree {} ends {}", c.size, c.reach, c.is_tree, c.end_estimate);
    println!("direction {:?} residual {:.3}", c.direction, c.residual);
    Ok(())
}
