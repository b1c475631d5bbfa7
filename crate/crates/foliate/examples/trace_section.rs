//! Traces a section curve across the faces of the surface and fits its
//! asymptotic direction. Pass `integrable` to use H = (1, 1, 1).

use foliate::cone::KSequence;
use foliate::numerics::Scalar;
use foliate::surface::{find_face, fit_direction, model_for, start_point, trace_section_curve, SurfaceModel};

fn main() -> foliate::Result<()> {
    let model = if std::env::args().any(|a| a == "integrable") {
        SurfaceModel::from_h([Scalar::one(), Scalar::one(), Scalar::one()])?
    } else {
        model_for(&KSequence::Doubling { k0: 2 }, 24, 128)?
    };
    let a = 0.41 * model.sigma_f64();
    let near = model.embed(&[0, 0, 0], a);
    let Some(face) = find_face(&model, &near, a, 4)? else {
        println!("no face near the origin at this level");
        return Ok(());
    };
    let p0 = start_point(&model, &face, a)?;
    let curve = trace_section_curve(&model, &face, &p0, 20_000)?;
    match curve.closed_after {
        Some(n) => println!("closed curve after {n} faces"),
        None => {
            let fit = fit_direction(&curve.points)?;
            println!("open curve, {} points", curve.points.len());
            println!("direction {:?}, residual {:.3}", fit.direction, fit.residual);
        }
    }
    Ok(())
}
