use rug::float::Constant;
use rug::Float;

use super::{EvalOutcome, HgfInput, Method, GUARD_BITS};
use crate::error::{Error, Result};
use crate::numerics::{gamma_ratio, BigComplex, Precision};
use crate::quadrature::{tanh_sinh_interval, tanh_sinh_unit_log, QuadOutcome};

/// Euler integral over `[0, 1]`.
///
/// Needs `Re c > Re a > 0`. For `z` on the cut the factor `(1 - z t)^(-b)`
/// vanishes or blows up inside the interval, which is reported as
/// [`Error::SingularityOnPath`] unless `b` is a non-positive integer.
pub fn hgf_quadrature_a(input: &HgfInput, prec: &Precision) -> Result<EvalOutcome> {
    input.validate()?;
    let (a, b, c, z) = (&input.a, &input.b, &input.c, &input.z);
    if !(a.re() > &0 && c.re() > a.re()) {
        return Err(Error::ParameterDomain("integral needs Re(c) > Re(a) > 0".into()));
    }
    if input.on_cut() && b.as_nonpositive_integer().is_none() {
        return Err(Error::SingularityOnPath);
    }
    let wp = prec.bits + GUARD_BITS;
    let (a, b, c, z) = (a.with_prec(wp), b.with_prec(wp), c.with_prec(wp), z.with_prec(wp));
    let (pref, _) = gamma_ratio(&[&c], &[&a, &(&c - &a)])?;
    let am1 = a.add_f64(-1.0);
    let cam1 = (&c - &a).add_f64(-1.0);
    let neg_b = -&b;
    let one = BigComplex::one(wp);
    let out = tanh_sinh_unit_log(wp, prec.quadrature_tolerance, |node| {
        let mut l = &am1.mul_real(&node.ln_t) + &cam1.mul_real(&node.ln_one_minus_t);
        if !b.is_zero() {
            let base = &one - &z.mul_real(&node.t);
            if base.is_zero() {
                return Err(Error::SingularityOnPath);
            }
            l = &l + &(&neg_b * &base.ln());
        }
        Ok(Some(l))
    })?;
    Ok(EvalOutcome {
        value: (&pref * &out.value).with_prec(prec.bits),
        method: Method::QuadratureA,
        est_rel_error: out.est_rel_error + (-(prec.bits as f64)).exp2(),
    })
}

/// Which singular endpoint the loop encircles.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LoopVariant {
    /// Starts at `t = 0` and encircles `t = 1`.
    B,
    /// Starts at `t = 1` and encircles `t = 0`.
    C,
}

/// A loop made of a real segment and a circle with real center.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LoopContour {
    pub variant: LoopVariant,
    pub center: f64,
    pub radius: f64,
}

impl LoopContour {
    pub fn default_for(variant: LoopVariant) -> Self {
        let center = match variant {
            LoopVariant::B => 1.0,
            LoopVariant::C => 0.0,
        };
        LoopContour { variant, center, radius: 0.45 }
    }

    fn validate(&self) -> Result<()> {
        let r = self.radius;
        let (lo, hi) = (self.center - r, self.center + r);
        let ok = r > 0.0
            && match self.variant {
                LoopVariant::B => lo > 0.0 && lo < 1.0 && hi > 1.0,
                LoopVariant::C => lo < 0.0 && hi > 0.0 && hi < 1.0,
            };
        if ok {
            Ok(())
        } else {
            Err(Error::InvalidInput(format!(
                "circle center {} radius {} must enclose only the encircled endpoint",
                self.center, r
            )))
        }
    }

    /// Real segment traversed twice.
    fn segment(&self) -> (f64, f64) {
        match self.variant {
            LoopVariant::B => (0.0, self.center - self.radius),
            LoopVariant::C => (self.center + self.radius, 1.0),
        }
    }

    /// Rejects contours that cross the cut of `(1 - z t)^(-b)` or enclose its singularity.
    fn check_critical_point(&self, z: (f64, f64), b_is_integer: bool) -> Result<()> {
        let norm = z.0 * z.0 + z.1 * z.1;
        if norm == 0.0 {
            return Ok(());
        }
        let u = (z.0 / norm, -z.1 / norm);
        let margin = 1e-9;
        let (s0, s1) = self.segment();
        if b_is_integer {
            let d = (u.0 - self.center).hypot(u.1);
            let on_segment = u.1.abs() <= margin && u.0 >= s0 - margin && u.0 <= s1 + margin;
            if d <= self.radius + margin || on_segment {
                return Err(Error::ContourEnclosesCriticalPoint);
            }
            return Ok(());
        }
        let unorm = u.0 * u.0 + u.1 * u.1;
        let s_star = (self.center * u.0 / unorm).max(1.0);
        let d = (s_star * u.0 - self.center).hypot(s_star * u.1);
        if d <= self.radius + margin {
            return Err(Error::ContourEnclosesCriticalPoint);
        }
        if u.1.abs() <= margin {
            let hits = if u.0 > 0.0 { s1 >= u.0 - margin } else { s0 <= u.0 + margin };
            if hits {
                return Err(Error::ContourEnclosesCriticalPoint);
            }
        }
        Ok(())
    }
}

/// Loop integral with the default contour of the given variant.
pub fn hgf_quadrature_loop(input: &HgfInput, variant: LoopVariant, prec: &Precision) -> Result<EvalOutcome> {
    hgf_quadrature_loop_with(input, &LoopContour::default_for(variant), prec)
}

/// Loop integral over an explicit contour.
///
/// Variant B needs `Re a > 0`, variant C needs `Re(c - a) > 0`. At the
/// parameters where the gamma prefactor has a pole and the loop integral
/// vanishes (B: `c - a` a positive integer, C: `a` a positive integer) the
/// limit is taken by averaging the loop at `a +- delta`.
pub fn hgf_quadrature_loop_with(input: &HgfInput, contour: &LoopContour, prec: &Precision) -> Result<EvalOutcome> {
    input.validate()?;
    contour.validate()?;
    let (a, b, c) = (&input.a, &input.b, &input.c);
    match contour.variant {
        LoopVariant::B if a.re() <= &0 => {
            return Err(Error::ParameterDomain("loop around t = 1 needs Re(a) > 0".into()))
        }
        LoopVariant::C if (c - a).re() <= &0 => {
            return Err(Error::ParameterDomain("loop around t = 0 needs Re(c - a) > 0".into()))
        }
        _ => {}
    }
    let z = input.effective_z(prec.bits);
    let b_int = b.as_integer().is_some();
    if b.as_nonpositive_integer().is_none() {
        contour.check_critical_point(z.to_f64_pair(), b_int)?;
    }
    let degenerate = match contour.variant {
        LoopVariant::B => (c - a).as_integer().is_some_and(|k| k >= 1),
        LoopVariant::C => a.as_integer().is_some_and(|k| k >= 1),
    };
    let method = match contour.variant {
        LoopVariant::B => Method::QuadratureLoopB,
        LoopVariant::C => Method::QuadratureLoopC,
    };
    let tol = prec.quadrature_tolerance;
    let wp = prec.bits + GUARD_BITS;
    let (value, err) = if degenerate {
        let wp2 = 2 * wp;
        let tol2 = (tol * tol).max((-(wp2 as f64)).exp2());
        let delta = tol.powf(0.75);
        let mut acc = BigComplex::zero(wp2);
        let mut err = 0.0f64;
        for sign in [1.0, -1.0] {
            let ap = a.with_prec(wp2).add_f64(sign * delta);
            let (v, e) = loop_value(contour, &ap, &b.with_prec(wp2), &c.with_prec(wp2), &z.with_prec(wp2), wp2, tol2)?;
            acc = &acc + &v;
            err = err.max(e / delta);
        }
        (acc.mul_f64(0.5), err + delta * delta)
    } else {
        loop_value(contour, &a.with_prec(wp), &b.with_prec(wp), &c.with_prec(wp), &z.with_prec(wp), wp, tol)?
    };
    Ok(EvalOutcome { value: value.with_prec(prec.bits), method, est_rel_error: err + (-(prec.bits as f64)).exp2() })
}

fn two_pi_i(p: u32) -> BigComplex {
    BigComplex::new(Float::new(p), Float::with_val(p, Constant::Pi) * 2u32)
}

fn abs_error(q: &QuadOutcome) -> f64 {
    q.est_rel_error * q.value.abs_f64()
}

/// Loop value and an estimate of its relative error.
fn loop_value(
    contour: &LoopContour,
    a: &BigComplex,
    b: &BigComplex,
    c: &BigComplex,
    z: &BigComplex,
    wp: u32,
    tol: f64,
) -> Result<(BigComplex, f64)> {
    let one = BigComplex::one(wp);
    let am1 = a.add_f64(-1.0);
    let e = (c - a).add_f64(-1.0);
    let neg_b = -b;
    let cut_factor = |t: &BigComplex| -> Result<BigComplex> {
        if b.is_zero() {
            return Ok(BigComplex::zero(wp));
        }
        let base = &one - &(z * t);
        if base.is_zero() {
            return Err(Error::ContourEnclosesCriticalPoint);
        }
        Ok(&neg_b * &base.ln())
    };
    let (s0, s1) = contour.segment();
    let lo = Float::with_val(wp, s0);
    let hi = Float::with_val(wp, s1);
    let width = Float::with_val(wp, &hi - &lo);
    let ln_width = Float::with_val(wp, width.ln_ref());
    let pi = Float::with_val(wp, Constant::Pi);
    let center = Float::with_val(wp, contour.center);
    let radius = Float::with_val(wp, contour.radius);

    // Segment integrand t^(a-1) (1-t)^(c-a-1) (1-zt)^(-b) in log form.
    let segment = tanh_sinh_unit_log(wp, tol, |node| {
        let (ln_t, ln_1mt, t) = match contour.variant {
            LoopVariant::B => {
                let t = Float::with_val(wp, &width * &node.t);
                let ln_t = Float::with_val(wp, &ln_width + &node.ln_t);
                let ln_1mt = Float::with_val(wp, -&t).ln_1p();
                (ln_t, ln_1mt, t)
            }
            LoopVariant::C => {
                let s = Float::with_val(wp, &width * &node.one_minus_t);
                let t = Float::with_val(wp, 1u32 - &s);
                let ln_t = Float::with_val(wp, t.ln_ref());
                let ln_1mt = Float::with_val(wp, &ln_width + &node.ln_one_minus_t);
                (ln_t, ln_1mt, t)
            }
        };
        let l = &(&am1.mul_real(&ln_t) + &e.mul_real(&ln_1mt)) + &cut_factor(&BigComplex::from_float(t))?;
        Ok(Some(l.add_real(&ln_width)))
    })?;

    let variant = contour.variant;
    let circle = tanh_sinh_interval(wp, tol, &Float::with_val(wp, -&pi), &pi, |phi| {
        let (sin, cos) = phi.clone().sin_cos(Float::new(wp));
        let (sin, cos) = match variant {
            // phi in (-pi, pi) for B; shifted to (0, 2 pi) for C
            LoopVariant::B => (sin, cos),
            LoopVariant::C => (-sin, -cos),
        };
        let ray = BigComplex::new(Float::with_val(wp, &radius * &cos), Float::with_val(wp, &radius * &sin));
        let t = ray.add_real(&center);
        let dt = ray.mul_i();
        let ln_t;
        let ln_1mt;
        match variant {
            LoopVariant::B => {
                ln_t = t.ln();
                // principal ln(t - 1) and ln(1 - t) = ln(t - 1) - i pi on the lower side of the real axis branch
                let tm1 = t.add_f64(-1.0);
                ln_1mt = tm1.ln();
            }
            LoopVariant::C => {
                let mut lt = t.ln();
                if t.im().is_sign_negative() && !t.im().is_zero() {
                    let shifted = Float::with_val(wp, lt.im() + Float::with_val(wp, &pi * 2u32));
                    lt = BigComplex::new(lt.re().clone(), shifted);
                }
                ln_t = lt;
                ln_1mt = (&BigComplex::one(wp) - &t).ln();
            }
        }
        let l = &(&(&am1 * &ln_t) + &(&e * &ln_1mt)) + &cut_factor(&t)?;
        Ok(&l.exp() * &dt)
    })?;

    let (prefactor, loop_sum) = match variant {
        LoopVariant::B => {
            // the segment is traversed out below and back above the cut of (t-1)^(c-a-1)
            let sin = e.mul_real(&pi).sin();
            let seg_factor = sin.mul_i().mul_f64(-2.0);
            let (g, _) = gamma_ratio(&[&(a - c).add_f64(1.0), c], &[a])?;
            (&g / &two_pi_i(wp), &(&seg_factor * &segment.value) + &circle.value)
        }
        LoopVariant::C => {
            let rot = a.mul_real(&pi).mul_i().mul_f64(2.0).exp();
            let seg_factor = &rot - &one;
            let phase = (-&a.mul_real(&pi).mul_i()).exp();
            let (g, _) = gamma_ratio(&[&(&one - a), c], &[&(c - a)])?;
            (&(&phase * &g) / &two_pi_i(wp), &(&seg_factor * &segment.value) + &circle.value)
        }
    };
    let value = &prefactor * &loop_sum;
    let mag = loop_sum.abs_f64();
    let err_abs = abs_error(&segment) * 2.0 + abs_error(&circle);
    let rel = if mag > 0.0 { err_abs / mag } else { f64::INFINITY };
    Ok((value, rel))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hgf::hgf_eval;

    const P: u32 = 128;

    fn prec() -> Precision {
        Precision::new(P).unwrap()
    }

    fn inp(a: f64, b: f64, c: f64, z: (f64, f64)) -> HgfInput {
        HgfInput::from_f64(P, a, b, c, z)
    }

    #[test]
    fn quadrature_a_matches_eval() {
        for &(a, b, c, z) in &[(0.5, 0.3, 1.7, (0.4, 0.2)), (1.2, -2.5, 3.1, (-3.0, 1.0)), (0.3, 1.5, 0.9, (0.9, -0.5))]
        {
            let i = inp(a, b, c, z);
            let q = hgf_quadrature_a(&i, &prec()).unwrap();
            let e = hgf_eval(&i, &prec()).unwrap();
            assert!(q.value.rel_diff(&e.value) < 1e-15, "{}", q.value.rel_diff(&e.value));
        }
    }

    #[test]
    fn quadrature_a_domain() {
        assert!(matches!(hgf_quadrature_a(&inp(1.5, 1.0, 1.0, (0.2, 0.0)), &prec()), Err(Error::ParameterDomain(_))));
        assert!(matches!(hgf_quadrature_a(&inp(0.5, 1.5, 1.0, (2.0, 0.0)), &prec()), Err(Error::SingularityOnPath)));
    }

    #[test]
    fn loops_reduce_to_one_for_b_zero() {
        let b = hgf_quadrature_loop(&inp(1.0, 0.0, 2.5, (0.3, 0.0)), LoopVariant::B, &prec()).unwrap();
        assert!(b.value.rel_diff(&BigComplex::one(P)) < 1e-15);
        let c = hgf_quadrature_loop(&inp(0.5, 0.0, 1.5, (0.3, 0.0)), LoopVariant::C, &prec()).unwrap();
        assert!(c.value.rel_diff(&BigComplex::one(P)) < 1e-15);
        // prefactor pole and vanishing loop cancel
        let d = hgf_quadrature_loop(&inp(1.0, 0.0, 3.0, (0.3, 0.0)), LoopVariant::B, &prec()).unwrap();
        assert!(d.value.rel_diff(&BigComplex::one(P)) < 1e-12, "{}", d.value);
    }

    #[test]
    fn loops_match_eval_outside_integral_domain() {
        // Re(c) < Re(a): the Euler integral does not apply
        let i = inp(2.3, 0.4, 1.1, (-0.8, 0.6));
        let e = hgf_eval(&i, &prec()).unwrap().value;
        let b = hgf_quadrature_loop(&i, LoopVariant::B, &prec()).unwrap().value;
        assert!(b.rel_diff(&e) < 1e-15, "{}", b.rel_diff(&e));
        let i = inp(-1.3, 0.4, 0.6, (-0.8, 0.6));
        let e = hgf_eval(&i, &prec()).unwrap().value;
        let c = hgf_quadrature_loop(&i, LoopVariant::C, &prec()).unwrap().value;
        assert!(c.rel_diff(&e) < 1e-15, "{}", c.rel_diff(&e));
        // shifted center
        let contour = LoopContour { variant: LoopVariant::C, center: 0.1, radius: 0.3 };
        let c2 = hgf_quadrature_loop_with(&i, &contour, &prec()).unwrap().value;
        assert!(c2.rel_diff(&e) < 1e-15);
    }

    #[test]
    fn critical_point_inside_loop() {
        let i = inp(0.7, 0.5, 1.9, (1.0 / 1.2, 0.0));
        assert!(matches!(hgf_quadrature_loop(&i, LoopVariant::B, &prec()), Err(Error::ContourEnclosesCriticalPoint)));
        let bad = LoopContour { variant: LoopVariant::B, center: 0.2, radius: 0.1 };
        assert!(matches!(
            hgf_quadrature_loop_with(&inp(0.7, 0.5, 1.9, (0.2, 0.0)), &bad, &prec()),
            Err(Error::InvalidInput(_))
        ));
    }
}
