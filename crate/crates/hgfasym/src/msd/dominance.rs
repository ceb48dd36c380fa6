use std::f64::consts::FRAC_PI_2;

use crate::asym_ac::h_eps_real;
use crate::error::{Error, Result};
use crate::numerics::BigComplex;

/// Whether the saddle at `eps` or the critical point `1/z` controls the integral.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
pub enum Dominance {
    SaddleDominates,
    Inconclusive,
    CriticalDominates,
}

/// `Im ln((z-1)^(1-eps)/z)` at `z = r e^(i theta)`, i.e. `(1-eps) arg(z-1) - theta`.
pub fn f_eps(eps: f64, r: f64, theta: f64) -> f64 {
    let (s, c) = theta.sin_cos();
    (1.0 - eps) * (r * s).atan2(r * c - 1.0) - theta
}

/// `d f_eps / d r`.
pub fn df_eps_dr(eps: f64, r: f64, theta: f64) -> f64 {
    let (s, c) = theta.sin_cos();
    -(1.0 - eps) * s / ((r - 1.0).powi(2) + 2.0 * r * (1.0 - c))
}

/// Compares `Re g` at the saddle `t0 = eps` and at `t_c = 1/z` along the
/// steepest-descent curve through `t0`.
///
/// Along that curve `Im(lambda g)` is constant, so the difference of real
/// parts is `-f_eps / tan(arg lambda)`. For real `lambda` the comparison falls
/// back to `h_eps(Re z) < 1`, which treats slightly complex `z` as real.
pub fn critical_point_dominance(eps: f64, z: &BigComplex, arg_lambda: f64) -> Result<Dominance> {
    if !(eps > 0.0 && eps < 1.0) {
        return Err(Error::DomainViolation(format!("eps = {eps} must lie in (0, 1)")));
    }
    let (x, y) = z.to_f64_pair();
    let crit = 1.0 / eps;
    if (x - crit).hypot(y) <= 1e-9 * crit {
        return Ok(Dominance::Inconclusive);
    }
    let r = x.hypot(y);
    let theta = y.atan2(x);
    if r <= crit {
        return Err(Error::DomainViolation(format!("|z| = {r} must exceed 1/eps = {crit}")));
    }
    if theta.abs() >= FRAC_PI_2 {
        return Err(Error::DomainViolation("|arg z| must be below pi/2".into()));
    }
    if arg_lambda.abs() >= FRAC_PI_2 {
        return Err(Error::DomainViolation("|arg lambda| must be below pi/2".into()));
    }
    if arg_lambda == 0.0 || theta == 0.0 {
        let h = h_eps_real(eps, x)?;
        return Ok(if h < 1.0 {
            Dominance::SaddleDominates
        } else if h > 1.0 {
            Dominance::CriticalDominates
        } else {
            Dominance::Inconclusive
        });
    }
    let f = f_eps(eps, r, theta);
    if f == 0.0 {
        return Ok(Dominance::Inconclusive);
    }
    Ok(if f.signum() == arg_lambda.signum() { Dominance::SaddleDominates } else { Dominance::CriticalDominates })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn z(re: f64, im: f64) -> BigComplex {
        BigComplex::from_f64(64, re, im)
    }

    #[test]
    fn documented_cases() {
        let w = z(3.0 * (PI / 6.0).cos(), -3.0 * (PI / 6.0).sin());
        assert_eq!(critical_point_dominance(0.5, &w, 0.3).unwrap(), Dominance::SaddleDominates);
        assert_eq!(critical_point_dominance(0.5, &z(3.0, 0.0), 0.0).unwrap(), Dominance::SaddleDominates);
        assert_eq!(critical_point_dominance(0.5, &z(2.0, 0.0), 0.0).unwrap(), Dominance::Inconclusive);
        assert!(critical_point_dominance(1.5, &z(3.0, 0.0), 0.0).is_err());
        assert!(critical_point_dominance(0.5, &z(1.5, 0.0), 0.0).is_err());
    }

    #[test]
    fn sign_property_on_grid() {
        for i in 1..10 {
            let eps = i as f64 / 10.0;
            for k in 0..20 {
                let r = (1.0 / eps) * (1.0001 + 0.5 * k as f64);
                for j in 0..20 {
                    let th = -FRAC_PI_2 + (j as f64 + 0.5) * PI / 20.0;
                    let f = f_eps(eps, r, th);
                    let d = df_eps_dr(eps, r, th);
                    if th < 0.0 {
                        assert!(f > 0.0 && d > 0.0, "eps {eps} r {r} th {th}");
                    } else {
                        assert!(f < 0.0 && d < 0.0, "eps {eps} r {r} th {th}");
                    }
                }
            }
        }
    }

    #[test]
    fn derivative_matches_difference() {
        let (eps, r, th) = (0.3, 5.0, -0.7);
        let h = 1e-6;
        let fd = (f_eps(eps, r + h, th) - f_eps(eps, r - h, th)) / (2.0 * h);
        assert!((fd - df_eps_dr(eps, r, th)).abs() < 1e-9);
    }
}
