//! Steepest-descent machinery for integrals `int f(t) exp(lambda g(t)) dt`.
//!
//! Phase functions and amplitudes are closed sets of tags so that every
//! integral the expansions rely on can be re-evaluated numerically along a
//! traced descent path.

mod dominance;
mod integrate;
mod trace;

pub use dominance::{critical_point_dominance, df_eps_dr, f_eps, Dominance};
pub use integrate::sd_integrate;
pub use trace::{sd_path_trace, SdTrace, TraceStop};

use std::f64::consts::PI;

use rug::Float;

use crate::error::{Error, Result};
use crate::numerics::BigComplex;

/// Which phase function `g(t)` is meant.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PhaseKind {
    /// `eps ln t + (1-eps) ln(1-t)`, cuts `(-inf, 0]` and `[1, inf)`.
    AcSmall,
    /// `eps ln t + (1-eps) ln(t-1)`, cut `(-inf, 1]`.
    AcLarge,
    /// `eps ln t - eps ln(t-1) - ln(1-zt)`, cuts `(-inf, 1]` and the ray from `1/z` away from 0.
    Ab,
    /// `eps ln(1-t) - eps ln t + ln(1-zt)` with `arg t` in `(0, 2pi)`, so the
    /// cuts are `[0, inf)` and the ray from `1/z`. Equals `eps pi i - g` of
    /// [`PhaseKind::Ab`] up to the choice of branch.
    AbNeg,
    /// `-t^2`.
    Gaussian,
    /// `ln t - t`.
    Stirling,
}

/// A phase function with its parameters.
#[derive(Debug, Clone, PartialEq)]
pub struct PhaseFunction {
    pub kind: PhaseKind,
    pub eps: Float,
    pub z: Option<BigComplex>,
}

/// A cut `{t : m t real, lo <= m t <= hi}`.
struct Cut {
    scale: BigComplex,
    lo: f64,
    hi: f64,
}

impl Cut {
    /// Whether the real point `x` (in the rotated frame) lies on the cut, compared exactly.
    fn contains(&self, x: &Float) -> bool {
        *x >= self.lo && *x <= self.hi
    }
}

impl PhaseFunction {
    pub fn new(kind: PhaseKind, eps: Float, z: Option<BigComplex>) -> Result<Self> {
        if !eps.is_finite() || eps <= 0 {
            return Err(Error::InvalidInput("eps must be positive".into()));
        }
        match kind {
            PhaseKind::AcSmall | PhaseKind::AcLarge if eps == 1 => {
                return Err(Error::InvalidInput("eps = 1 is excluded for this phase".into()))
            }
            PhaseKind::Ab | PhaseKind::AbNeg => match &z {
                Some(z) if !z.is_zero() && z.is_finite() => {}
                _ => return Err(Error::InvalidInput("phase needs a finite non-zero z".into())),
            },
            _ => {}
        }
        Ok(PhaseFunction { kind, eps, z })
    }

    pub fn ac_small(eps: Float) -> Result<Self> {
        Self::new(PhaseKind::AcSmall, eps, None)
    }

    pub fn ac_large(eps: Float) -> Result<Self> {
        Self::new(PhaseKind::AcLarge, eps, None)
    }

    pub fn ab(eps: Float, z: BigComplex) -> Result<Self> {
        Self::new(PhaseKind::Ab, eps, Some(z))
    }

    pub fn ab_neg(eps: Float, z: BigComplex) -> Result<Self> {
        Self::new(PhaseKind::AbNeg, eps, Some(z))
    }

    pub fn gaussian(prec: u32) -> Self {
        PhaseFunction { kind: PhaseKind::Gaussian, eps: Float::with_val(prec, 1), z: None }
    }

    pub fn stirling(prec: u32) -> Self {
        PhaseFunction { kind: PhaseKind::Stirling, eps: Float::with_val(prec, 1), z: None }
    }

    fn zval(&self) -> &BigComplex {
        self.z.as_ref().expect("validated at construction")
    }

    fn cuts(&self, prec: u32) -> Vec<Cut> {
        let one = BigComplex::one(prec);
        let inf = f64::INFINITY;
        let axis = |lo: f64, hi: f64| Cut { scale: one.clone(), lo, hi };
        let ray = |z: &BigComplex| Cut { scale: z.clone(), lo: 1.0, hi: inf };
        match self.kind {
            PhaseKind::AcSmall => vec![axis(-inf, 0.0), axis(1.0, inf)],
            PhaseKind::AcLarge => vec![axis(-inf, 1.0)],
            PhaseKind::Ab => vec![axis(-inf, 1.0), ray(self.zval())],
            PhaseKind::AbNeg => vec![axis(0.0, inf), ray(self.zval())],
            PhaseKind::Gaussian => vec![],
            PhaseKind::Stirling => vec![axis(-inf, 0.0)],
        }
    }

    /// Points where the phase has a logarithmic singularity.
    pub fn singular_points(&self, prec: u32) -> Vec<BigComplex> {
        let mut pts = match self.kind {
            PhaseKind::Gaussian => vec![],
            PhaseKind::Stirling => vec![BigComplex::zero(prec)],
            _ => vec![BigComplex::zero(prec), BigComplex::one(prec)],
        };
        if matches!(self.kind, PhaseKind::Ab | PhaseKind::AbNeg) {
            pts.push(self.zval().with_prec(prec).recip());
        }
        pts
    }

    fn check_point(&self, t: &BigComplex) -> Result<()> {
        let p = t.prec();
        for s in self.singular_points(p) {
            if (t - &s).is_zero() {
                return Err(Error::AtSingularity);
            }
        }
        for cut in self.cuts(p) {
            let w = &cut.scale * t;
            if w.im().is_zero() && cut.contains(w.re()) {
                return Err(Error::OnBranchCut);
            }
        }
        Ok(())
    }

    /// True when the straight segment `a -> b` crosses or touches a cut.
    pub fn segment_meets_cut(&self, a: &BigComplex, b: &BigComplex) -> bool {
        let p = a.prec();
        for cut in self.cuts(p) {
            let wa = &cut.scale * a;
            let wb = &cut.scale * b;
            let (ya, yb) = (wa.im().to_f64(), wb.im().to_f64());
            let (xa, xb) = (wa.re().to_f64(), wb.re().to_f64());
            let inside = |x: f64| x >= cut.lo && x <= cut.hi;
            if ya == 0.0 && yb == 0.0 {
                // Along the real axis: only the endpoints and the overlap matter.
                let (lo, hi) = if xa < xb { (xa, xb) } else { (xb, xa) };
                if hi >= cut.lo && lo <= cut.hi {
                    return true;
                }
                continue;
            }
            if wa.im().is_zero() && cut.contains(wa.re()) || wb.im().is_zero() && cut.contains(wb.re()) {
                return true;
            }
            if ya.signum() != yb.signum() {
                let x = xa + (xb - xa) * ya / (ya - yb);
                if inside(x) {
                    return true;
                }
            }
        }
        false
    }

    /// `ln t` on the branch belonging to this phase.
    pub(crate) fn ln_t(&self, t: &BigComplex) -> BigComplex {
        let l = t.ln();
        if self.kind == PhaseKind::AbNeg && t.im() < &0 {
            let two_pi = Float::with_val(t.prec(), rug::float::Constant::Pi) * 2u32;
            return BigComplex::new(l.re().clone(), Float::with_val(t.prec(), l.im() + &two_pi));
        }
        l
    }
}

/// `g(t)`; rejects points on the cuts and at the singularities.
pub fn phase_eval(pf: &PhaseFunction, t: &BigComplex) -> Result<BigComplex> {
    pf.check_point(t)?;
    let p = t.prec();
    let eps = BigComplex::from_float(Float::with_val(p, &pf.eps));
    let one = BigComplex::one(p);
    let one_m_eps = &one - &eps;
    Ok(match pf.kind {
        PhaseKind::AcSmall => &(&eps * &t.ln()) + &(&one_m_eps * &(&one - t).ln()),
        PhaseKind::AcLarge => &(&eps * &t.ln()) + &(&one_m_eps * &(t - &one).ln()),
        PhaseKind::Ab => {
            let zt = &pf.zval().with_prec(p) * t;
            &(&eps * &(&t.ln() - &(t - &one).ln())) - &(&one - &zt).ln()
        }
        PhaseKind::AbNeg => {
            let zt = &pf.zval().with_prec(p) * t;
            &(&eps * &(&(&one - t).ln() - &pf.ln_t(t))) + &(&one - &zt).ln()
        }
        PhaseKind::Gaussian => -(t * t),
        PhaseKind::Stirling => &t.ln() - t,
    })
}

/// Derivative of `g` of the given order; order 0 is [`phase_eval`].
pub fn phase_deriv(pf: &PhaseFunction, t: &BigComplex, order: u32) -> Result<BigComplex> {
    if order == 0 {
        return phase_eval(pf, t);
    }
    if order > 2 {
        return Err(Error::InvalidInput(format!("derivative order {order} > 2")));
    }
    pf.check_point(t)?;
    deriv_unchecked(pf, t, order)
}

/// Closed-form derivatives up to order 3.
fn deriv_unchecked(pf: &PhaseFunction, t: &BigComplex, order: u32) -> Result<BigComplex> {
    let p = t.prec();
    let eps = BigComplex::from_float(Float::with_val(p, &pf.eps));
    let one = BigComplex::one(p);
    let one_m_eps = &one - &eps;
    // d^n/dt^n ln(t - s) = (-1)^(n-1) (n-1)! / (t - s)^n
    let n = order as i64;
    let fact = (1..n).product::<i64>();
    let sign = if n % 2 == 1 { 1 } else { -1 };
    let dlog = |u: &BigComplex| u.powi(n).recip().mul_i64(sign * fact);
    let tm1 = t - &one;
    Ok(match pf.kind {
        PhaseKind::AcSmall | PhaseKind::AcLarge => &(&eps * &dlog(t)) + &(&one_m_eps * &dlog(&tm1)),
        PhaseKind::Ab | PhaseKind::AbNeg => {
            let z = pf.zval().with_prec(p);
            // ln(1 - z t) = ln(t - 1/z) + const
            let tc = t - &z.recip();
            let g = &(&eps * &(&dlog(t) - &dlog(&tm1))) - &dlog(&tc);
            if pf.kind == PhaseKind::AbNeg {
                -g
            } else {
                g
            }
        }
        PhaseKind::Gaussian => match order {
            1 => t.mul_i64(-2),
            2 => BigComplex::from_i64(p, -2),
            _ => BigComplex::zero(p),
        },
        PhaseKind::Stirling => {
            let d = dlog(t);
            if order == 1 {
                d.add_f64(-1.0)
            } else {
                d
            }
        }
    })
}

/// Amplitude `f(t)` multiplying `exp(lambda g(t))`.
#[derive(Debug, Clone, PartialEq)]
pub enum Amplitude {
    One,
    /// `exp(-t^2)`.
    Gaussian,
    /// `t^(a-1) (1-t)^(c-a-1) (1-zt)^(-b)`, the Euler integrand.
    Euler {
        a: BigComplex,
        b: BigComplex,
        c: BigComplex,
        z: BigComplex,
    },
    /// `t^(a-1) (t-1)^(c-a-1) (1-zt)^(-b)`, the integrand of the loop around 1.
    Loop {
        a: BigComplex,
        b: BigComplex,
        c: BigComplex,
        z: BigComplex,
    },
}

impl Amplitude {
    /// Value at `t` with `ln t` on the branch of `pf`.
    pub fn eval(&self, pf: &PhaseFunction, t: &BigComplex) -> Result<BigComplex> {
        let p = t.prec();
        let one = BigComplex::one(p);
        let powers = |a: &BigComplex, b: &BigComplex, c: &BigComplex, z: &BigComplex, second: BigComplex| {
            let (a, b, c, z) = (a.with_prec(p), b.with_prec(p), c.with_prec(p), z.with_prec(p));
            let w = &one - &(&z * t);
            if second.is_zero() || w.is_zero() {
                return Err(Error::AtSingularity);
            }
            let l = &(&(&a - &one) * &pf.ln_t(t)) + &(&(&(&c - &a) - &one) * &second.ln());
            Ok((&l - &(&b * &w.ln())).exp())
        };
        match self {
            Amplitude::One => Ok(one),
            Amplitude::Gaussian => Ok((-(t * t)).exp()),
            Amplitude::Euler { a, b, c, z } => powers(a, b, c, z, &one - t),
            Amplitude::Loop { a, b, c, z } => powers(a, b, c, z, t - &one),
        }
    }
}

/// A saddle point of `lambda g` with its local geometry.
#[derive(Debug, Clone, PartialEq)]
pub struct SaddleData {
    pub t0: BigComplex,
    /// Order `N` of the first non-vanishing derivative minus one.
    pub order: u32,
    /// `g^(N+1)(t0)`; the second derivative at a simple saddle.
    pub g2: BigComplex,
    /// Steepest-descent directions in `[0, 2pi)`; the first is the forward one.
    pub angles: Vec<f64>,
    pub dominant: bool,
}

/// Descent angles `((2k+1)pi - alpha)/(N+1)` for `k = 0..=N`, reduced to `[0, 2pi)`.
pub fn steepest_angles(order: u32, alpha: f64) -> Vec<f64> {
    let n = order.max(1) as f64;
    (0..=order.max(1))
        .map(|k| {
            let th = ((2 * k + 1) as f64 * PI - alpha) / (n + 1.0);
            let r = th.rem_euclid(2.0 * PI);
            if r >= 2.0 * PI {
                0.0
            } else {
                r
            }
        })
        .collect()
}

/// Builds the saddle data at `t0`, which must be a zero of `g'`.
pub fn saddle_at(pf: &PhaseFunction, t0: &BigComplex, lam: &BigComplex) -> Result<SaddleData> {
    pf.check_point(t0)?;
    let p = t0.prec();
    let scale = deriv_unchecked(pf, t0, 1)?.abs_f64();
    let g2 = deriv_unchecked(pf, t0, 2)?;
    let tiny = (-(p as f64) / 2.0).exp2();
    let (order, gn) = if g2.abs_f64() > tiny * scale.max(1.0) { (1, g2) } else { (2, third_derivative(pf, t0)?) };
    let alpha = (&lam.with_prec(p) * &gn).arg().to_f64();
    Ok(SaddleData { t0: t0.clone(), order, g2: gn, angles: steepest_angles(order, alpha), dominant: true })
}

fn third_derivative(pf: &PhaseFunction, t: &BigComplex) -> Result<BigComplex> {
    deriv_unchecked(pf, t, 3)
}

/// All saddles of the phase that lie off its cuts, with the dominant ones flagged.
///
/// For [`PhaseKind::Ab`] and [`PhaseKind::AbNeg`] the two roots are
/// `((1-eps) +- sqrt((1-eps)^2 + 4 eps/z))/2`, listed `t+` first.
pub fn saddles(pf: &PhaseFunction, lam: &BigComplex, prec: u32) -> Result<Vec<SaddleData>> {
    let eps = BigComplex::from_float(Float::with_val(prec, &pf.eps));
    let points = match pf.kind {
        PhaseKind::AcSmall | PhaseKind::AcLarge => vec![eps],
        PhaseKind::Gaussian => vec![BigComplex::zero(prec)],
        PhaseKind::Stirling => vec![BigComplex::one(prec)],
        PhaseKind::Ab | PhaseKind::AbNeg => {
            let z = pf.zval().with_prec(prec);
            let one_m = &BigComplex::one(prec) - &eps;
            let disc = (&(&one_m * &one_m) + &(&eps.mul_i64(4) / &z)).sqrt();
            vec![(&one_m + &disc).mul_f64(0.5), (&one_m - &disc).mul_f64(0.5)]
        }
    };
    let mut out = Vec::new();
    for t in points {
        match saddle_at(pf, &t, lam) {
            Ok(s) => out.push(s),
            Err(Error::OnBranchCut) | Err(Error::AtSingularity) => continue,
            Err(e) => return Err(e),
        }
    }
    let lam = lam.with_prec(prec);
    let heights: Vec<f64> =
        out.iter().map(|s| phase_eval(pf, &s.t0).map(|g| (&lam * &g).re().to_f64())).collect::<Result<_>>()?;
    let top = heights.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    for (s, h) in out.iter_mut().zip(&heights) {
        s.dominant = *h >= top - 1e-12 * top.abs().max(1.0);
    }
    Ok(out)
}

/// Second-order saddle contribution `f(t0) sqrt(2pi/|lambda g''|) exp(lambda g(t0) + i theta)`.
///
/// `theta` is the first entry of `saddle.angles`.
pub fn saddle_approx(pf: &PhaseFunction, amp: &Amplitude, saddle: &SaddleData, lam: &BigComplex) -> Result<BigComplex> {
    if saddle.order != 1 {
        return Err(Error::HigherOrderSaddle(saddle.order));
    }
    let p = saddle.t0.prec();
    let t0 = &saddle.t0;
    let lam = lam.with_prec(p);
    let f = amp.eval(pf, t0)?;
    let g = phase_eval(pf, t0)?;
    let two_pi = Float::with_val(p, rug::float::Constant::Pi) * 2u32;
    let width = Float::with_val(p, two_pi / (&lam * &saddle.g2).abs()).sqrt();
    let theta = BigComplex::new(Float::new(p), Float::with_val(p, saddle.angles[0]));
    let e = (&(&lam * &g) + &theta).exp();
    Ok(&f.mul_real(&width) * &e)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    const P: u32 = 192;

    fn fl(x: f64) -> Float {
        Float::with_val(P, x)
    }

    fn c(x: f64, y: f64) -> BigComplex {
        BigComplex::from_f64(P, x, y)
    }

    #[test]
    fn ac_small_saddle_and_curvature() {
        let pf = PhaseFunction::ac_small(fl(0.3)).unwrap();
        let t = c(0.3, 0.0);
        assert!(phase_deriv(&pf, &t, 1).unwrap().abs_f64() < 1e-50);
        let g2 = phase_deriv(&pf, &t, 2).unwrap().to_f64_pair().0;
        assert!((g2 - 1.0 / (0.3 * (0.3 - 1.0))).abs() < 1e-12);
        assert!((g2 + 4.7619).abs() < 1e-4);
    }

    #[test]
    fn cuts_and_singularities() {
        let pf = PhaseFunction::ac_small(fl(0.3)).unwrap();
        assert_eq!(phase_eval(&pf, &c(-0.5, 0.0)), Err(Error::OnBranchCut));
        assert_eq!(phase_eval(&pf, &c(1.5, 0.0)), Err(Error::OnBranchCut));
        assert_eq!(phase_eval(&pf, &c(0.0, 0.0)), Err(Error::AtSingularity));
        // just below the branch point, closer than f64 can tell apart
        let near_one = BigComplex::from_float(Float::with_val(256, 1) - Float::with_val(256, -100f64).exp2());
        assert!(phase_eval(&pf, &near_one.with_prec(256)).is_ok());
        let ab = PhaseFunction::ab(fl(2.0), c(0.5, 0.0)).unwrap();
        assert_eq!(phase_eval(&ab, &c(2.0, 0.0)), Err(Error::AtSingularity));
        assert_eq!(phase_eval(&ab, &c(3.0, 0.0)), Err(Error::OnBranchCut));
        assert!(phase_eval(&ab, &c(1.5, 0.0)).is_ok());
        assert!(PhaseFunction::ac_large(fl(1.0)).is_err());
        assert!(PhaseFunction::ac_small(fl(-0.5)).is_err());
    }

    #[test]
    fn ab_saddles_solve_first_derivative() {
        let pf = PhaseFunction::ab(fl(2.0), c(2.0 / 3.0, 0.0)).unwrap();
        let lam = c(100.0, 0.0);
        let s = saddles(&pf, &lam, P).unwrap();
        // t- is negative and sits on the cut of this phase
        assert_eq!(s.len(), 1);
        assert!(phase_deriv(&pf, &s[0].t0, 1).unwrap().abs_f64() < 1e-50);
        let s = saddles(&pf, &lam, P).unwrap();
        let a = s[0].angles.clone();
        assert!((a[0] - PI / 2.0).abs() < 1e-12 && (a[1] - 1.5 * PI).abs() < 1e-12);
    }

    #[test]
    fn ab_angles_swap_for_negative_form() {
        let z = c(2.0, 0.0);
        let lam = c(50.0, 0.0);
        let ab = PhaseFunction::ab(fl(0.5), c(0.5, 0.0)).unwrap();
        let neg = PhaseFunction::ab_neg(fl(0.5), z).unwrap();
        let sp = saddles(&ab, &lam, P).unwrap();
        let sn = saddles(&neg, &lam, P).unwrap();
        // for z < 1, t+ lies in (1, 1/z) between the two cuts
        let tp = sp.iter().find(|s| s.t0.re() > &0).unwrap();
        assert!((tp.angles[0] - PI / 2.0).abs() < 1e-12);
        // t- is negative: on the first form's cut, but regular for the second
        let tm = sn.iter().find(|s| s.t0.re() < &0).unwrap();
        assert!((tm.angles[0] - PI / 2.0).abs() < 1e-12);
        assert!(tm.dominant);
    }

    #[test]
    fn angle_sets() {
        let a = steepest_angles(1, PI);
        assert!(a[0].abs() < 1e-15 && (a[1] - PI).abs() < 1e-15);
        let a = steepest_angles(1, 0.0);
        assert!((a[0] - PI / 2.0).abs() < 1e-15 && (a[1] - 1.5 * PI).abs() < 1e-15);
        let a = steepest_angles(2, 0.0);
        assert_eq!(a.len(), 3);
        for (x, y) in a.iter().zip([PI / 3.0, PI, 5.0 * PI / 3.0]) {
            assert!((x - y).abs() < 1e-15);
        }
    }

    #[test]
    fn gaussian_and_stirling_saddles() {
        let lam = c(3.0, 0.0);
        let g = PhaseFunction::gaussian(P);
        let s = &saddles(&g, &lam, P).unwrap()[0];
        let v = saddle_approx(&g, &Amplitude::One, s, &lam).unwrap();
        assert!((v.to_f64_pair().0 - (PI / 3.0).sqrt()).abs() < 1e-14);
        let st = PhaseFunction::stirling(P);
        let lam = c(20.0, 0.0);
        let s = &saddles(&st, &lam, P).unwrap()[0];
        let v = saddle_approx(&st, &Amplitude::One, s, &lam).unwrap().to_f64_pair().0;
        let expect = (-20.0f64).exp() * (2.0 * PI / 20.0).sqrt();
        assert!((v / expect - 1.0).abs() < 1e-14);
    }

    #[test]
    fn higher_order_saddle_is_reported() {
        let g = PhaseFunction::gaussian(P);
        let s =
            SaddleData { t0: c(0.0, 0.0), order: 2, g2: c(1.0, 0.0), angles: steepest_angles(2, 0.0), dominant: true };
        let lam = c(10.0, 0.0);
        assert_eq!(saddle_approx(&g, &Amplitude::One, &s, &lam), Err(Error::HigherOrderSaddle(2)));
    }

    fn kinds() -> Vec<PhaseFunction> {
        vec![
            PhaseFunction::ac_small(fl(0.3)).unwrap(),
            PhaseFunction::ac_large(fl(2.5)).unwrap(),
            PhaseFunction::ab(fl(0.7), c(0.4, 0.9)).unwrap(),
            PhaseFunction::ab_neg(fl(1.7), c(2.0, -0.5)).unwrap(),
            PhaseFunction::gaussian(P),
            PhaseFunction::stirling(P),
        ]
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(50))]
        #[test]
        fn derivatives_match_differences(x in -3.0f64..3.0, y in 0.05f64..3.0, flip in any::<bool>()) {
            let y = if flip { -y } else { y };
            let t = c(x, y);
            let h = BigComplex::real(P, 1e-12);
            for pf in kinds() {
                let (Ok(gp), Ok(gm), Ok(g0)) =
                    (phase_eval(&pf, &(&t + &h)), phase_eval(&pf, &(&t - &h)), phase_eval(&pf, &t))
                else { continue };
                if pf.segment_meets_cut(&(&t - &h), &(&t + &h)) {
                    continue;
                }
                let d1 = &(&gp - &gm) / &h.mul_i64(2);
                let d2 = &(&(&gp + &gm) - &g0.mul_i64(2)) / &(&h * &h);
                let e1 = phase_deriv(&pf, &t, 1).unwrap();
                let e2 = phase_deriv(&pf, &t, 2).unwrap();
                prop_assert!(d1.rel_diff(&e1) < 1e-15 || (&d1 - &e1).abs_f64() < 1e-15, "{:?}", pf.kind);
                prop_assert!(d2.rel_diff(&e2) < 1e-12 || (&d2 - &e2).abs_f64() < 1e-12, "{:?}", pf.kind);
            }
        }

        #[test]
        fn ab_saddles_are_stationary(eps in 0.1f64..4.0, x in 0.1f64..5.0, y in -3.0f64..3.0) {
            let pf = PhaseFunction::ab_neg(fl(eps), c(x, y)).unwrap();
            let z = c(x, y);
            let one_m = BigComplex::from_float(Float::with_val(P, 1 - fl(eps)));
            let disc = (&(&one_m * &one_m) + &(&BigComplex::real(P, 4.0 * eps) / &z)).sqrt();
            for t in [(&one_m + &disc).mul_f64(0.5), (&one_m - &disc).mul_f64(0.5)] {
                if let Ok(d) = phase_deriv(&pf, &t, 1) {
                    prop_assert!(d.abs_f64() < 1e-40);
                }
            }
        }
    }
}
