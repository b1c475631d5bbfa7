//! Outward-rounded interval scalars: the tribonacci constant, certified digits,
//! and an integer relation recovered from enclosures.

use foliate::numerics::{integer_relation, tribonacci, Scalar};

fn main() -> foliate::Result<()> {
    let t = tribonacci(256);
    let (lo, hi) = t.decimal_bounds(40);
    println!("tribonacci constant in [{lo}, {hi}]");
    println!("verified digits: {}", t.verified_digits());

    // t^3 = t^2 + t + 1
    let defect = &(&t.powi(3) - &t.square()) - &(&t + &Scalar::one());
    println!("t^3 - t^2 - t - 1 contains zero: {}", defect.contains_zero());

    let values = [Scalar::one(), t.clone(), t.square(), t.powi(3)];
    let tol = Scalar::from_ratio(1, 1u64 << 60, 256);
    match integer_relation(&values, 4, &tol) {
        Some(c) => println!("relation among 1, t, t^2, t^3: {c:?}"),
        None => println!("no relation with coefficients up to 4"),
    }
    Ok(())
}
