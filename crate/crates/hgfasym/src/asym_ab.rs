//! Expansions of `F(a + eps lambda, b + lambda; c; z)` for large `lambda`.
//!
//! The saddles of the loop integrand are `t± = ((1-eps) ± s)/2` with the
//! regularized discriminant `s = sqrt((1-eps)^2 + 4 eps/z)`, which stays finite
//! at `eps = 1`. At real `z > 1` the principal powers used here give the limit
//! of the function from `Im z < 0`.

use std::cmp::Ordering;

use rug::{Float, Rational};

use crate::asym_ac::{AeResult, AsymCase, Regime, Warning};
use crate::error::{Error, Result};
use crate::numerics::{log_gamma, BigComplex};

/// `|z - 1|` below which a result carries [`Warning::NearExcludedPoint`].
pub const NEAR_ONE_RADIUS: f64 = 0.02;
/// `|z|` above which a result with `eps < 1` carries [`Warning::LargeZ`].
pub const LARGE_Z: f64 = 1e6;

/// The two saddles of the `(eps, 1, 0)` phase.
#[derive(Debug, Clone, PartialEq)]
pub struct AbSaddles {
    pub t_plus: BigComplex,
    pub t_minus: BigComplex,
    /// `sqrt((1-eps)^2 + 4 eps/z)` with non-negative real part.
    pub sigma_reg: BigComplex,
    pub eps: Float,
    pub z: BigComplex,
}

/// Both saddle points; errors when they coalesce at `z = -4 eps/(eps-1)^2`.
pub fn saddle_points_ab(eps: &Float, z: &BigComplex) -> Result<AbSaddles> {
    if eps.partial_cmp(&0) != Some(Ordering::Greater) {
        return Err(Error::DomainViolation("eps must be positive".into()));
    }
    if z.is_zero() || !z.is_finite() {
        return Err(Error::DomainViolation("z must be finite and non-zero".into()));
    }
    let p = z.prec().max(eps.prec());
    let z = z.with_prec(p);
    let e = BigComplex::from_float(Float::with_val(p, eps));
    let one_m = &BigComplex::one(p) - &e;
    let disc = &(&one_m * &one_m) + &(&e.mul_i64(4) / &z);
    let sigma = disc.sqrt();
    if sigma.is_zero() || sigma.log2_abs() < -(p as f64) / 2.0 {
        return Err(Error::CoalescentSaddles);
    }
    Ok(AbSaddles {
        t_plus: (&one_m + &sigma).mul_f64(0.5),
        t_minus: (&one_m - &sigma).mul_f64(0.5),
        sigma_reg: sigma,
        eps: Float::with_val(p, eps),
        z,
    })
}

/// Parameters of an `(eps, 1, 0)` or `(-eps, -1, 0)` case at working precision.
struct Prepared {
    a: BigComplex,
    b: BigComplex,
    c: BigComplex,
    lam: BigComplex,
    eps: BigComplex,
    s: AbSaddles,
    /// `ln` of `Gamma(c) (eps lambda)^(1/2-c) / sqrt(2 pi s)`.
    ln_pre: BigComplex,
    wp: u32,
}

fn prepare(case: &AsymCase, z: &BigComplex, sign: i32) -> Result<Prepared> {
    case.validate()?;
    let ok = if sign > 0 {
        case.eps1 > 0 && case.eps2 == 1 && case.eps3 == 0
    } else {
        case.eps1 < 0 && case.eps2 == -1 && case.eps3 == 0
    };
    if !ok {
        let want = if sign > 0 { "(eps, 1, 0) with eps > 0" } else { "(-eps, -1, 0) with eps > 0" };
        return Err(Error::DomainViolation(format!("expansion needs rates {want}")));
    }
    let p = case.prec();
    let wp = p + 32;
    let eps_abs = Rational::from(case.eps1.abs_ref());
    let eps_f = Float::with_val(wp, &eps_abs);
    let z = z.with_prec(wp);
    let s = saddle_points_ab(&eps_f, &z)?;
    let eps = BigComplex::from_float(eps_f);
    let lam = case.lam.with_prec(wp);
    let c = case.c0.with_prec(wp);
    let half = BigComplex::real(wp, 0.5);
    let two_pi = BigComplex::pi(wp).mul_i64(2);
    let ln_pre =
        &(&log_gamma(&c)? + &(&(&half - &c) * &(&eps * &lam).ln())) - &(&two_pi * &s.sigma_reg).ln().mul_f64(0.5);
    Ok(Prepared { a: case.a0.with_prec(wp), b: case.b0.with_prec(wp), c, lam, eps, s, ln_pre, wp })
}

impl Prepared {
    /// `ln[t^(a+eps lam) (t-1)^(c-a-eps lam) (1-zt)^(-b-lam)]`.
    fn ln_term(&self, t: &BigComplex) -> BigComplex {
        let one = BigComplex::one(self.wp);
        let el = &self.eps * &self.lam;
        let ap = &self.a + &el;
        let l1 = &ap * &t.ln();
        let l2 = &(&(&self.c - &self.a) - &el) * &(t - &one).ln();
        let l3 = &(&self.b + &self.lam) * &(&one - &(&self.s.z * t)).ln();
        &(&l1 + &l2) - &l3
    }

    fn term(&self, t: &BigComplex, p: u32) -> BigComplex {
        (&self.ln_pre + &self.ln_term(t)).exp().with_prec(p)
    }

    fn warning(&self) -> Option<Warning> {
        let (x, y) = self.s.z.to_f64_pair();
        if (x - 1.0).hypot(y) < NEAR_ONE_RADIUS {
            Some(Warning::NearExcludedPoint)
        } else if x.hypot(y) > LARGE_Z && self.eps.re() < &1 {
            Some(Warning::LargeZ)
        } else {
            None
        }
    }
}

fn check_excluded(z: &BigComplex) -> Result<()> {
    if (&BigComplex::one(z.prec()) - z).is_zero() {
        return Err(Error::ExcludedPoint);
    }
    Ok(())
}

/// Two-saddle expansion for complex `z` and complex `lambda`.
pub fn ae_ab_complex(case: &AsymCase, z: &BigComplex) -> Result<AeResult> {
    if z.im().is_zero() || case.lam.im().is_zero() {
        return Err(Error::RealInputsUseDominant);
    }
    check_excluded(z)?;
    let pr = prepare(case, z, 1)?;
    let p = case.prec();
    let terms = vec![("t-plus", pr.term(&pr.s.t_plus, p)), ("t-minus", pr.term(&pr.s.t_minus, p))];
    Ok(AeResult::from_terms(terms, Regime::AbComplex, pr.warning()))
}

/// Expansion from the saddle `t+` alone; covers real `lambda` or real `z`, including `z > 1`.
pub fn ae_ab_dominant(case: &AsymCase, z: &BigComplex) -> Result<AeResult> {
    if !z.im().is_zero() && !case.lam.im().is_zero() {
        return Err(Error::DomainViolation("complex z and complex lambda need both saddles".into()));
    }
    check_excluded(z)?;
    let pr = prepare(case, z, 1)?;
    let terms = vec![("t-plus", pr.term(&pr.s.t_plus, case.prec()))];
    Ok(AeResult::from_terms(terms, Regime::AbDominant, pr.warning()))
}

/// Contribution of `t-` relative to `t+`, as a modulus.
pub fn ab_saddle_ratio(case: &AsymCase, z: &BigComplex) -> Result<f64> {
    let pr = prepare(case, z, 1)?;
    let d = &pr.ln_term(&pr.s.t_minus) - &pr.ln_term(&pr.s.t_plus);
    Ok(d.re().to_f64().exp())
}

/// Expansion of `F(a - eps lambda, b - lambda; c; z)` from the saddle `t-`:
/// `Gamma(c) (eps lambda)^(1/2-c)/sqrt(2 pi s) (1-t-)^(c-a+eps lambda) (-t-)^(a-eps lambda) (1-zt-)^(lambda-b)`.
pub fn ae_ab_negative(case: &AsymCase, z: &BigComplex) -> Result<AeResult> {
    check_excluded(z)?;
    let pr = prepare(case, z, -1)?;
    let one = BigComplex::one(pr.wp);
    let t = &pr.s.t_minus;
    let el = &pr.eps * &pr.lam;
    let l1 = &(&(&pr.c - &pr.a) + &el) * &(&one - t).ln();
    let l2 = &(&pr.a - &el) * &(-t).ln();
    let l3 = &(&pr.lam - &pr.b) * &(&one - &(&pr.s.z * t)).ln();
    let l = &(&(&pr.ln_pre + &l1) + &l2) + &l3;
    let terms = vec![("t-minus", l.exp().with_prec(case.prec()))];
    Ok(AeResult::from_terms(terms, Regime::AbNegative, pr.warning()))
}

/// The `(-eps, -1, 0)` case `(c-a, c-b, c)` related to `case` by Euler's transformation.
pub fn euler_partner(case: &AsymCase) -> Result<AsymCase> {
    AsymCase::new(
        &case.c0 - &case.a0,
        &case.c0 - &case.b0,
        case.c0.clone(),
        (Rational::from(-&case.eps1), Rational::from(-&case.eps2), case.eps3.clone()),
        case.lam.clone(),
    )
}

/// Relative gap of the identity relating the two saddles:
/// `(-t-)^(c-a-eps lam) (1-t-)^(a+eps lam) / ((1-zt-)^(c-b-lam) (1-z)^(a+b-c+(eps+1) lam))`
/// against `t+^(a+eps lam) (t+-1)^(c-a-eps lam) / (1-zt+)^(b+lam)`.
pub fn tpm_identity_gap(case: &AsymCase, z: &BigComplex) -> Result<f64> {
    let pr = prepare(case, z, 1)?;
    let one = BigComplex::one(pr.wp);
    let t = &pr.s.t_minus;
    let el = &pr.eps * &pr.lam;
    let (a, b, c, lam) = (&pr.a, &pr.b, &pr.c, &pr.lam);
    let lhs = &(&(&(&(&(c - a) - &el) * &(-t).ln()) + &(&(a + &el) * &(&one - t).ln()))
        - &(&(&(c - b) - lam) * &(&one - &(&pr.s.z * t)).ln()))
        - &(&(&(&(a + b) - c) + &(&(&pr.eps + &one) * lam)) * &(&one - &pr.s.z).ln());
    let rhs = pr.ln_term(&pr.s.t_plus);
    Ok(lhs.exp().rel_diff(&rhs.exp()))
}

/// Laplace's large-`n` form `sqrt(2/(n pi sin theta)) cos((n+1/2) theta - pi/4)` of `P_n(cos theta)`.
pub fn legendre_laplace(n: u64, theta: f64) -> Result<f64> {
    use std::f64::consts::{FRAC_PI_4, PI};
    if n < 1 || !(theta > 0.0 && theta < PI) {
        return Err(Error::DomainViolation("need n >= 1 and 0 < theta < pi".into()));
    }
    let nf = n as f64;
    Ok((2.0 / (nf * PI * theta.sin())).sqrt() * ((nf + 0.5) * theta - FRAC_PI_4).cos())
}

/// `P_n(x)` by the three-term recurrence.
pub fn legendre_p(n: u64, x: f64) -> f64 {
    let (mut p0, mut p1) = (1.0, x);
    if n == 0 {
        return p0;
    }
    for k in 1..n {
        let kf = k as f64;
        let p2 = ((2.0 * kf + 1.0) * x * p1 - kf * p0) / (kf + 1.0);
        p0 = p1;
        p1 = p2;
    }
    p1
}
