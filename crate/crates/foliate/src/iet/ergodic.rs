use super::renorm::{check_v, mat_r_big, u_inf, v_inf};
use super::stage::x_from_w;
use crate::cone::{KSequence, WidthSolution};
use crate::error::{Error, Result};
use crate::numerics::Scalar;

/// Approximations of the two extremal invariant measures at stage 0.
#[derive(Clone, Debug)]
pub struct ErgodicCone {
    pub depth: usize,
    /// `prod R(k_j)/k_j` applied to `u_inf`, and to `v_inf`, with a common scale.
    pub u: Vec<Scalar>,
    pub v: Vec<Scalar>,
    /// Stage-0 parameters `x(w_0)`.
    pub x0: Vec<Scalar>,
    /// Least-squares coefficients of `x0 ~ alpha u + beta v`.
    pub alpha: Scalar,
    pub beta: Scalar,
    pub ratio: Scalar,
    /// Gram determinant `|u|^2 |v|^2 - (u.v)^2`; positive means non-collinear.
    pub gram: Scalar,
    pub sin_angle: Scalar,
    /// Relative residual `|x0 - alpha u - beta v| / |x0|` (midpoint estimate).
    pub residual: f64,
    /// `u3 + u6 - u8 - u9` for `u` scaled to unit coordinate sum.
    pub cycle_defect: Scalar,
    pub warning: Option<String>,
}

impl ErgodicCone {
    /// Whether `|cycle_defect|` exceeds `factor` times its own enclosure width.
    pub fn defect_exceeds(&self, factor: f64) -> bool {
        let lo = self.cycle_defect.abs().bounds_f64().0;
        lo > factor * self.cycle_defect.width_f64()
    }

    pub fn separated(&self) -> bool {
        self.gram.is_positive()
    }
}

/// Smallest angle below which `u` and `v` are reported as degenerate.
const MIN_SIN: f64 = 1e-6;

pub fn ergodic_cone(ks: &KSequence, depth: usize, prec: u32) -> Result<ErgodicCone> {
    if !ks.is_summable() {
        return Err(Error::Configuration("the ergodic cone needs a summable k-sequence".into()));
    }
    if depth < 12 || depth % 2 == 1 {
        return Err(Error::Domain("depth must be even and at least 12".into()));
    }
    let sol = WidthSolution::compute(ks, depth, prec)?;
    let x0 = x_from_w(sol.w0())?.to_vec();

    let lift = |v: Vec<num_bigint::BigInt>| -> Vec<Scalar> { v.iter().map(|x| Scalar::from(x).with_prec(prec)).collect() };
    let mut u = lift(u_inf());
    let mut v = lift(v_inf());
    for j in (0..depth).rev() {
        let k = &sol.ks[j];
        let r = mat_r_big(k)?.map(|x| Scalar::from(x));
        let kk = Scalar::from(k).with_prec(prec);
        u = r.apply(&u).iter().map(|x| x.checked_div(&kk)).collect::<Result<_>>()?;
        v = r.apply(&v).iter().map(|x| x.checked_div(&kk)).collect::<Result<_>>()?;
        // keep magnitudes near 1 with an exact power-of-two rescale common to both
        let big = u.iter().chain(&v).map(|x| x.hi().magnitude_bits()).max().unwrap_or(0);
        if big.abs() > 64 {
            u = u.iter().map(|x| x.mul_pow2(-big)).collect();
            v = v.iter().map(|x| x.mul_pow2(-big)).collect();
        }
    }

    let uu = Scalar::dot(&u, &u);
    let vv = Scalar::dot(&v, &v);
    let uv = Scalar::dot(&u, &v);
    let xu = Scalar::dot(&x0, &u);
    let xv = Scalar::dot(&x0, &v);
    let gram = &uu * &vv - uv.square();
    if !gram.is_positive() {
        return Err(Error::Accuracy { what: "u and v are not separated at this precision".into(), achieved: 0.0 });
    }
    let alpha = (&xu * &vv - &xv * &uv).checked_div(&gram)?;
    let beta = (&xv * &uu - &xu * &uv).checked_div(&gram)?;
    let ratio = alpha.checked_div(&beta)?;
    let sin_angle = gram.checked_div(&(&uu * &vv))?.sqrt()?;

    let fit: Vec<f64> = (0..9).map(|i| (&alpha * &u[i] + &beta * &v[i] - &x0[i]).mid_f64()).collect();
    let norm = |z: &[f64]| z.iter().map(|t| t * t).sum::<f64>().sqrt();
    let residual = norm(&fit) / norm(&x0.iter().map(Scalar::mid_f64).collect::<Vec<_>>());

    let su = Scalar::sum(&u);
    let cycle_defect = (&u[2] + &u[5] - &u[7] - &u[8]).checked_div(&su)?;

    let mut warning = None;
    if sin_angle.bounds_f64().0 < MIN_SIN {
        warning = Some(format!("u and v are nearly collinear (sin angle {})", sin_angle.mid_f64()));
    }
    for (name, y) in [("u", &u), ("v", &v)] {
        if !check_v(y)?.holds {
            return Err(Error::Invariant(format!("{name} left the subspace V")));
        }
    }
    Ok(ErgodicCone { depth, u, v, x0, alpha, beta, ratio, gram, sin_angle, residual, cycle_defect, warning })
}
