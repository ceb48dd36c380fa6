use super::{hgf_eval, HgfInput};
use crate::error::{Error, Result};
use crate::numerics::{BigComplex, Precision};

/// Residual of the differential equation with the bound expected from the stencil.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OdeResidual {
    /// `|z(1-z)F'' + (c-(a+b+1)z)F' - abF|` divided by the sum of the three magnitudes.
    pub residual: f64,
    /// Truncation plus rounding estimate for the finite-difference stencil.
    pub bound: f64,
}

/// Relative residual of the hypergeometric equation at `z`.
pub fn hgf_ode_residual(input: &HgfInput, prec: &Precision) -> Result<f64> {
    Ok(ode_residual_report(input, prec)?.residual)
}

/// Residual from central differences with step `h ~ 2^(-bits/4)`.
///
/// Derivatives come from five evaluations on a line through `z`; for `z` on
/// the cut all five use the same side.
pub fn ode_residual_report(input: &HgfInput, prec: &Precision) -> Result<OdeResidual> {
    input.validate()?;
    let bits = prec.bits;
    let z = &input.z;
    let scale_z = z.abs_f64().max(1.0);
    let h_f = (-(bits as f64) / 4.0).exp2() * scale_z;
    if (&BigComplex::one(bits) - z).abs_f64() <= 4.0 * h_f {
        return Err(Error::AtSingularity);
    }
    let step = BigComplex::real(bits, h_f);
    let mut vals = Vec::with_capacity(5);
    let mut eval_err = (-(bits as f64)).exp2();
    for k in -2i64..=2 {
        let zk = z + &step.mul_i64(k);
        let mut pt = HgfInput::new(input.a.clone(), input.b.clone(), input.c.clone(), zk);
        pt.cut_side = input.cut_side;
        let out = hgf_eval(&pt, prec)?;
        eval_err = eval_err.max(out.est_rel_error);
        vals.push(out.value);
    }
    let (fm2, fm1, f0, fp1, fp2) = (&vals[0], &vals[1], &vals[2], &vals[3], &vals[4]);
    let h = &step;
    let h2 = h * h;
    let d1 = &(fp1 - fm1) / &h.mul_i64(2);
    let d2 = &(&(fp1 + fm1) - &f0.mul_i64(2)) / &h2;
    // higher derivatives for the truncation estimate
    let d3 = &(&(fp2 - fm2) - &(fp1 - fm1).mul_i64(2)) / &(&h2 * h).mul_i64(2);
    let d4 = &(&(&(fp2 + fm2) - &(fp1 + fm1).mul_i64(4)) + &f0.mul_i64(6)) / &(&h2 * &h2);
    let one = BigComplex::one(bits);
    let (a, b, c) = (&input.a, &input.b, &input.c);
    let p = z * &(&one - z);
    let q = c - &(&(a + b) + &one) * z;
    let r = a * b;
    let t2 = &p * &d2;
    let t1 = &q * &d1;
    let t0 = &r * f0;
    let res = &(&t2 + &t1) - &t0;
    let mut scale = t2.abs_f64() + t1.abs_f64() + t0.abs_f64();
    if scale == 0.0 {
        scale = 1.0;
    }
    let fabs = f0.abs_f64();
    let trunc = h_f * h_f * (p.abs_f64() * d4.abs_f64() / 12.0 + q.abs_f64() * d3.abs_f64() / 6.0);
    let rounding = eval_err * fabs * (4.0 * p.abs_f64() / (h_f * h_f) + q.abs_f64() / h_f);
    Ok(OdeResidual { residual: res.abs_f64() / scale, bound: 4.0 * (trunc + rounding) / scale })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn residual_is_small() {
        let prec = Precision::new(192).unwrap();
        let inp = HgfInput::from_f64(192, 0.4, -1.3, 2.1, (2.5, 0.0));
        let r = ode_residual_report(&inp, &prec).unwrap();
        assert!(r.residual < 1e-20, "{r:?}");
        assert!(r.residual <= r.bound);
    }

    #[test]
    fn small_at_complex_point() {
        let prec = Precision::new(128).unwrap();
        let inp = HgfInput::from_f64(128, 1.0, 1.0, 2.0, (0.3, 0.2));
        let good = hgf_ode_residual(&inp, &prec).unwrap();
        assert!(good < 1e-12);
    }

    #[test]
    fn near_one_is_rejected() {
        let prec = Precision::new(128).unwrap();
        let inp = HgfInput::from_f64(128, 1.0, 1.0, 2.5, (1.0, 0.0));
        assert!(matches!(ode_residual_report(&inp, &prec), Err(Error::AtSingularity)));
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(12))]
        #[test]
        fn residual_within_bound(a in -2.0f64..2.0, b in -2.0f64..2.0, c in 0.3f64..3.0, x in -3.0f64..3.0, y in -3.0f64..3.0) {
            prop_assume!((x - 1.0).hypot(y) > 0.1 && x.hypot(y) > 0.1);
            let prec = Precision::new(128).unwrap();
            let inp = HgfInput::new(
                BigComplex::real(128, a),
                BigComplex::real(128, b),
                BigComplex::real(128, c),
                BigComplex::from_f64(128, x, y),
            );
            let r = ode_residual_report(&inp, &prec).unwrap();
            prop_assert!(r.residual <= r.bound.max(1e-12), "{:?}", r);
        }
    }
}
