//! One Rips-machine step on a four-band complex, checked against the
//! predicted target complex.

use foliate::band::{is_isomorphic, make_z4, q, qi, rips_step};

fn main() -> foliate::Result<()> {
    let k = 2;
    // w = B(2) w' with w' = (3, 2, 1)
    let w_next = [qi(3), qi(2), qi(1)];
    let w = [qi(2 * 3 + 2 * 2 + 1), qi(3), qi(2)];
    let l = [qi(1), q(1, 2), q(2, 3), qi(1)];

    let z = make_z4(&w, &l)?;
    println!("start complex: {} bands, area {}", z.bands().len(), z.area_exact()?);

    let step = rips_step(&z, k)?;
    println!("{} collapses", step.collapses.len());
    for c in &step.collapses {
        println!("  free arc [{}, {}] of band {}", c.lo, c.hi, c.band);
    }
    println!("w' = {:?}", step.w_next.iter().map(ToString::to_string).collect::<Vec<_>>());
    println!("l' = {:?}", step.l_next.iter().map(ToString::to_string).collect::<Vec<_>>());

    let target = make_z4(&w_next, &step.l_next)?;
    println!("isomorphic to Z(w', l'): {}", is_isomorphic(&step.complex, &target));
    Ok(())
}
