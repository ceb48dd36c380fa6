//! Expansions of `F(a + eps lambda, b; c + lambda; z)` for large `lambda`.
//!
//! Every power `w^(s + sigma lambda)` is formed as `exp((s + sigma lambda) ln w)`
//! with one principal logarithm per base, so complex `lambda` never tears a
//! branch.

use std::cmp::Ordering;

use std::fmt;

use rug::{Float, Rational};

use crate::error::{Error, Result};
use crate::hgf::{mixed_connection, HgfInput};
use crate::numerics::{log_gamma, reciprocal_gamma, BigComplex};

/// Exclusion radius around `z = 1/eps`, as a multiple of `1/eps`.
pub const DEFAULT_EXCLUSION_FACTOR: f64 = 0.05;

/// Parameters `(a0, b0, c0)`, growth rates `(eps1, eps2, eps3)` and `lambda`:
/// the function is `F(a0 + eps1 lambda, b0 + eps2 lambda; c0 + eps3 lambda; z)`.
#[derive(Debug, Clone, PartialEq)]
pub struct AsymCase {
    pub a0: BigComplex,
    pub b0: BigComplex,
    pub c0: BigComplex,
    pub eps1: Rational,
    pub eps2: Rational,
    pub eps3: Rational,
    pub lam: BigComplex,
}

impl AsymCase {
    /// Validates `Re lambda > 0` and that exactly one rate vanishes; the
    /// single-large-parameter case `(0, 0, 1)` is also accepted.
    pub fn new(
        a0: BigComplex,
        b0: BigComplex,
        c0: BigComplex,
        eps: (Rational, Rational, Rational),
        lam: BigComplex,
    ) -> Result<Self> {
        let case = AsymCase { a0, b0, c0, eps1: eps.0, eps2: eps.1, eps3: eps.2, lam };
        case.validate()?;
        Ok(case)
    }

    /// The `(eps, 0, 1)` family with `f64` parameters.
    pub fn ac(prec: u32, a: f64, b: f64, c: f64, eps: Rational, lam: (f64, f64)) -> Result<Self> {
        Self::new(
            BigComplex::real(prec, a),
            BigComplex::real(prec, b),
            BigComplex::real(prec, c),
            (eps, Rational::new(), Rational::from(1)),
            BigComplex::from_f64(prec, lam.0, lam.1),
        )
    }

    /// The `(eps, 1, 0)` family with `f64` parameters.
    pub fn ab(prec: u32, a: f64, b: f64, c: f64, eps: Rational, lam: (f64, f64)) -> Result<Self> {
        Self::new(
            BigComplex::real(prec, a),
            BigComplex::real(prec, b),
            BigComplex::real(prec, c),
            (eps, Rational::from(1), Rational::new()),
            BigComplex::from_f64(prec, lam.0, lam.1),
        )
    }

    pub fn validate(&self) -> Result<()> {
        if self.lam.re().partial_cmp(&0) != Some(Ordering::Greater) {
            return Err(Error::DomainViolation("Re(lambda) must be positive".into()));
        }
        for v in [&self.a0, &self.b0, &self.c0, &self.lam] {
            if !v.is_finite() {
                return Err(Error::InvalidInput("non-finite parameter".into()));
            }
        }
        let zeros = [&self.eps1, &self.eps2, &self.eps3].iter().filter(|e| ***e == 0).count();
        let single_c = self.eps1 == 0 && self.eps2 == 0 && self.eps3 == 1;
        if zeros != 1 && !single_c {
            return Err(Error::DomainViolation("exactly one of eps1, eps2, eps3 must vanish".into()));
        }
        Ok(())
    }

    pub fn prec(&self) -> u32 {
        self.lam.prec()
    }

    /// `(a, b, c)` of the full function.
    pub fn parameters(&self) -> (BigComplex, BigComplex, BigComplex) {
        let p = self.prec();
        let grow = |base: &BigComplex, e: &Rational| &base.with_prec(p) + &self.lam.mul_real(&Float::with_val(p, e));
        (grow(&self.a0, &self.eps1), grow(&self.b0, &self.eps2), grow(&self.c0, &self.eps3))
    }

    /// Input for the reference evaluator at `z`.
    pub fn hgf_input(&self, z: &BigComplex) -> HgfInput {
        let (a, b, c) = self.parameters();
        HgfInput::new(a, b, c, z.with_prec(self.prec()))
    }

    fn eps1_f(&self, p: u32) -> Float {
        Float::with_val(p, &self.eps1)
    }
}

/// Which formula produced an [`AeResult`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
pub enum Regime {
    LargeCOnly,
    AcLeading,
    AcFull,
    AbComplex,
    AbDominant,
    AbNegative,
}

impl Regime {
    pub fn tag(&self) -> &'static str {
        match self {
            Regime::LargeCOnly => "large-c",
            Regime::AcLeading => "ac-leading",
            Regime::AcFull => "ac-full",
            Regime::AbComplex => "ab-complex",
            Regime::AbDominant => "ab-dominant",
            Regime::AbNegative => "ab-negative",
        }
    }
}

/// Conditions under which a value is returned but should not be trusted.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
pub enum Warning {
    /// `z` lies within the exclusion radius of `1/eps`.
    NearCriticalZ,
    /// `z` is close to 1.
    NearExcludedPoint,
    /// `|z|` is very large with `eps < 1`.
    LargeZ,
}

impl Warning {
    pub fn tag(&self) -> &'static str {
        match self {
            Warning::NearCriticalZ => "near-critical-z",
            Warning::NearExcludedPoint => "near-excluded-point",
            Warning::LargeZ => "large-z",
        }
    }
}

impl fmt::Display for Warning {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Warning::NearCriticalZ => "z is near 1/eps where the expansion is not uniform",
            Warning::NearExcludedPoint => "z is near 1 where the expansion is not uniform",
            Warning::LargeZ => "|z| is large with eps < 1; the saddle approaches 0",
        })
    }
}

/// Value of an expansion with its individual terms.
#[derive(Debug, Clone, PartialEq)]
pub struct AeResult {
    pub value: BigComplex,
    pub terms: Vec<(&'static str, BigComplex)>,
    pub regime: Regime,
    pub warning: Option<Warning>,
}

impl AeResult {
    pub(crate) fn from_terms(terms: Vec<(&'static str, BigComplex)>, regime: Regime, warning: Option<Warning>) -> Self {
        let p = terms.first().map_or(64, |t| t.1.prec());
        let value = terms.iter().fold(BigComplex::zero(p), |acc, t| &acc + &t.1);
        AeResult { value, terms, regime, warning }
    }
}

fn require(cond: bool, what: &str) -> Result<()> {
    if cond {
        Ok(())
    } else {
        Err(Error::DomainViolation(what.into()))
    }
}

fn rate_is(e: &Rational, v: i32) -> bool {
    *e == v
}

/// `1 + a0 b0 z / (c0 + lambda)`, the first-order expansion in large `c` alone.
pub fn ae_large_c_only(case: &AsymCase, z: &BigComplex) -> Result<AeResult> {
    case.validate()?;
    require(case.eps1 == 0 && case.eps2 == 0 && rate_is(&case.eps3, 1), "large-c expansion needs rates (0, 0, 1)")?;
    let p = case.prec();
    let c = &case.c0.with_prec(p) + &case.lam;
    let corr = &(&(&case.a0.with_prec(p) * &case.b0.with_prec(p)) * &z.with_prec(p)) / &c;
    Ok(AeResult::from_terms(vec![("leading", BigComplex::one(p)), ("first-order", corr)], Regime::LargeCOnly, None))
}

fn near_critical(eps: &Float, z: &BigComplex, factor: f64) -> bool {
    let crit = eps.to_f64().recip();
    let (x, y) = z.to_f64_pair();
    (x - crit).hypot(y) < factor * crit
}

/// `(1 - eps z)^(-b0)` on the principal branch, valid away from `z = 1/eps` for `0 < eps < 1`.
pub fn ae_ac_leading(case: &AsymCase, z: &BigComplex) -> Result<AeResult> {
    ae_ac_leading_with(case, z, DEFAULT_EXCLUSION_FACTOR)
}

/// [`ae_ac_leading`] with an explicit exclusion radius `factor / eps`.
pub fn ae_ac_leading_with(case: &AsymCase, z: &BigComplex, factor: f64) -> Result<AeResult> {
    case.validate()?;
    require(
        case.eps1 > 0 && case.eps1 < 1 && case.eps2 == 0 && rate_is(&case.eps3, 1),
        "leading expansion needs rates (eps, 0, 1) with 0 < eps < 1",
    )?;
    let p = case.prec();
    let eps = case.eps1_f(p);
    let z = z.with_prec(p);
    let term = leading_term(&eps, &case.b0.with_prec(p), &z);
    let warning = near_critical(&eps, &z, factor).then_some(Warning::NearCriticalZ);
    Ok(AeResult::from_terms(vec![("leading", term)], Regime::AcLeading, warning))
}

fn leading_term(eps: &Float, b: &BigComplex, z: &BigComplex) -> BigComplex {
    let one = BigComplex::one(z.prec());
    let w = &one - &z.mul_real(eps);
    if b.is_zero() {
        return one;
    }
    (-(b * &w.ln())).exp()
}

/// `(1/(eps^eps |x|)) |(x-1)/(1-eps)|^(1-eps)` for real `x`.
pub fn h_eps_real(eps: f64, x: f64) -> Result<f64> {
    if eps == 0.0 || eps == 1.0 {
        return Err(Error::DomainViolation("eps must differ from 0 and 1".into()));
    }
    if x == 0.0 || x == 1.0 {
        return Err(Error::AtSingularity);
    }
    Ok(((x - 1.0) / (1.0 - eps)).abs().powf(1.0 - eps) / (eps.powf(eps) * x.abs()))
}

/// The complex base `(1/(eps^eps z)) ((eps-1)/(1-z))^(eps-1)` of the pole term.
///
/// Formed from the principal logarithms of `eps`, `z`, `eps - 1` and `1 - z`.
pub fn h_eps(eps: &Float, z: &BigComplex) -> Result<BigComplex> {
    Ok(ln_h_eps(eps, z)?.exp())
}

fn ln_h_eps(eps: &Float, z: &BigComplex) -> Result<BigComplex> {
    if eps.is_zero() || *eps == 1 {
        return Err(Error::DomainViolation("eps must differ from 0 and 1".into()));
    }
    let p = z.prec().max(eps.prec());
    let one = BigComplex::one(p);
    let z = z.with_prec(p);
    if z.is_zero() || (&one - &z).is_zero() {
        return Err(Error::AtSingularity);
    }
    let e = BigComplex::from_float(Float::with_val(p, eps));
    let em1 = &e - &one;
    let l = &(&(&e * &e.ln()) + &z.ln()).mul_i64(-1) + &(&em1 * &(&em1.ln() - &(&one - &z).ln()));
    Ok(l)
}

fn require_pole_case(case: &AsymCase, z: &BigComplex) -> Result<u64> {
    case.validate()?;
    require(case.eps1 > 1, "residue needs eps > 1")?;
    let b = case
        .b0
        .as_integer()
        .filter(|&n| n >= 1)
        .ok_or_else(|| Error::DomainViolation("residue needs a positive integer b".into()))?;
    let one = BigComplex::one(z.prec());
    require(!z.is_zero() && !(&one - z).is_zero(), "residue needs z outside {0, 1}")?;
    Ok(b as u64)
}

/// Large-`lambda` form of the residue at `t = 1/z` of the loop integrand.
///
/// `-lambda^(b-1) z^(1-c-lambda) (eps z - 1)^(b-1) / (Gamma(b) (1-z)^(a+b-c+(eps-1) lambda))`.
pub fn residue_asym(case: &AsymCase, z: &BigComplex) -> Result<BigComplex> {
    require_pole_case(case, z)?;
    let p = case.prec() + 32;
    let (a, b, c) = (case.a0.with_prec(p), case.b0.with_prec(p), case.c0.with_prec(p));
    let lam = case.lam.with_prec(p);
    let z = z.with_prec(p);
    let one = BigComplex::one(p);
    let eps = BigComplex::from_float(case.eps1_f(p));
    let bm1 = &b - &one;
    let mut l = &bm1 * &lam.ln();
    l = &l + &(&(&(&one - &c) - &lam) * &z.ln());
    if !bm1.is_zero() {
        l = &l + &(&bm1 * &(&(&eps * &z) - &one).ln());
    }
    l = &l - &log_gamma(&b)?;
    let expo = &(&(&a + &b) - &c) + &(&(&eps - &one) * &lam);
    l = &l - &(&expo * &(&one - &z).ln());
    Ok((-l.exp()).with_prec(case.prec()))
}

/// Exact residue at `t = 1/z` of `t^(A-1) (t-1)^(C-A-1) (1-zt)^(-b)`,
/// `A = a + eps lambda`, `C = c + lambda`, by the Leibniz rule for the
/// `(b-1)`-th derivative.
pub fn residue_exact(case: &AsymCase, z: &BigComplex) -> Result<BigComplex> {
    let b = require_pole_case(case, z)?;
    let p = case.prec() + 32 + 4 * b as u32;
    let (a_big, _, c_big) = case.parameters();
    let (a_big, c_big) = (a_big.with_prec(p), c_big.with_prec(p));
    let one = BigComplex::one(p);
    let z = z.with_prec(p);
    let t = z.recip();
    let tm1 = &t - &one;
    let alpha = &a_big - &one;
    let beta = &(&c_big - &a_big) - &one;
    let n = b - 1;
    let base_t = (&alpha * &t.ln()).exp();
    let base_tm1 = (&beta * &tm1.ln()).exp();
    // falling factorials x (x-1) ... (x-k+1)
    let falling = |x: &BigComplex, k: u64| (0..k).fold(BigComplex::one(p), |acc, j| &acc * &x.add_f64(-(j as f64)));
    let mut sum = BigComplex::zero(p);
    let mut binom = Float::with_val(p, 1);
    for k in 0..=n {
        let dt = &(&falling(&alpha, k) * &base_t) * &t.powi(-(k as i64));
        let j = n - k;
        let dtm1 = &(&falling(&beta, j) * &base_tm1) * &tm1.powi(-(j as i64));
        sum = &sum + &(&dt * &dtm1).mul_real(&binom);
        binom = binom * (n - k) / (k + 1);
    }
    let mut fact = Float::with_val(p, 1);
    for k in 1..=n {
        fact *= k;
    }
    // (1 - z t)^(-b) = (-z)^(-b) (t - 1/z)^(-b)
    let neg_z_pow = (-&z).powi(-(b as i64));
    Ok((&sum * &neg_z_pow).mul_real(&fact.recip()).with_prec(case.prec()))
}

/// Expansion for `eps > 1`: `(1 - eps z)^(-b)` plus, for `|z| > 1/eps`, the
/// pole/branch term `sqrt(2pi)/Gamma(b) (eps-1)^(a-c+1/2)/eps^(a-1/2)
/// z^(1-c) (eps z - 1)^(b-1)/(1-z)^(a+b-c) lambda^(b-1/2) h_eps(z)^lambda`.
pub fn ae_ac_full(case: &AsymCase, z: &BigComplex) -> Result<AeResult> {
    ae_ac_full_with(case, z, DEFAULT_EXCLUSION_FACTOR)
}

/// [`ae_ac_full`] with an explicit exclusion radius `factor / eps`.
pub fn ae_ac_full_with(case: &AsymCase, z: &BigComplex, factor: f64) -> Result<AeResult> {
    case.validate()?;
    require(
        case.eps1 > 1 && case.eps2 == 0 && rate_is(&case.eps3, 1),
        "full expansion needs rates (eps, 0, 1) with eps > 1",
    )?;
    let p = case.prec();
    let wp = p + 32;
    let eps = case.eps1_f(wp);
    let z = z.with_prec(wp);
    let one = BigComplex::one(wp);
    let (a, b, c) = (case.a0.with_prec(wp), case.b0.with_prec(wp), case.c0.with_prec(wp));
    let lam = case.lam.with_prec(wp);
    let warning = near_critical(&eps, &z, factor).then_some(Warning::NearCriticalZ);
    let mut terms = vec![("leading", leading_term(&eps, &b, &z).with_prec(p))];
    if z.abs_f64() * eps.to_f64() > 1.0 {
        if (&one - &z).is_zero() {
            return Err(Error::AtOne);
        }
        let e = BigComplex::from_float(eps.clone());
        let ezm1 = &z.mul_real(&eps) - &one;
        if ezm1.is_zero() {
            return Err(Error::AtSingularity);
        }
        let rg = reciprocal_gamma(&b);
        let second = if rg.is_zero() {
            BigComplex::zero(wp)
        } else {
            let half = BigComplex::real(wp, 0.5);
            let two_pi = BigComplex::pi(wp).mul_i64(2);
            let em1 = &e - &one;
            let mut l = two_pi.ln().mul_f64(0.5);
            l = &l + &(&(&(&a - &c) + &half) * &em1.ln());
            l = &l - &(&(&a - &half) * &e.ln());
            l = &l + &(&(&one - &c) * &z.ln());
            l = &l + &(&(&b - &one) * &ezm1.ln());
            l = &l - &(&(&(&a + &b) - &c) * &(&one - &z).ln());
            l = &l + &(&(&b - &half) * &lam.ln());
            l = &l + &(&lam * &ln_h_eps(&eps, &z)?);
            &rg * &l.exp()
        };
        terms.push(("pole-branch", second.with_prec(p)));
    }
    Ok(AeResult::from_terms(terms, Regime::AcFull, warning))
}

/// One function of a [`Reduction`]: `multiplier * F(case; z)`.
#[derive(Debug, Clone, PartialEq)]
pub struct ReducedPart {
    pub case: AsymCase,
    pub z: BigComplex,
    pub multiplier: BigComplex,
}

/// The original function as a sum of reduced parts.
#[derive(Debug, Clone, PartialEq)]
pub struct Reduction {
    pub parts: Vec<ReducedPart>,
    /// Human-readable account of the transformations applied.
    pub recipe: String,
}

impl Reduction {
    /// Sum of `multiplier * value` given the value of each reduced function.
    pub fn recombine(&self, values: &[BigComplex]) -> BigComplex {
        let p = self.parts.first().map_or(64, |x| x.multiplier.prec());
        self.parts.iter().zip(values).fold(BigComplex::zero(p), |acc, (part, v)| &acc + &(&part.multiplier * v))
    }
}

/// Rewrites a case with a negative rate as cases with rates `(eps', 0, 1)`, `eps' >= 0`.
///
/// `(-eps, 0, 1)` uses the Pfaff transformation. `(eps, 0, -1)` goes through
/// the connection between `z` and `1 - z`, which produces a second function
/// whose rates are `(-eps, 0, 1)` and is then Pfaff-transformed. `(-eps, 0, -1)`
/// with `eps > 1` is Pfaff-transformed to `(eps - 1, 0, -1)`; with `eps <= 1`
/// the connection is applied first.
pub fn reduce_negative_eps(case: &AsymCase, z: &BigComplex) -> Result<Reduction> {
    case.validate()?;
    require(case.eps2 == 0, "reduction handles rates (eps1, 0, eps3)")?;
    let mut recipe = Vec::new();
    let p = case.prec() + 32;
    let start = ReducedPart { case: case.clone(), z: z.with_prec(p), multiplier: BigComplex::one(p) };
    let parts = reduce_part(start, &mut recipe, 0)?;
    let parts = parts
        .into_iter()
        .map(|mut part| {
            part.multiplier = part.multiplier.with_prec(case.prec());
            part.z = part.z.with_prec(case.prec());
            part
        })
        .collect();
    let recipe = if recipe.is_empty() { "identity".to_string() } else { recipe.join("; ") };
    Ok(Reduction { parts, recipe })
}

fn nudge_off_axis(z: &BigComplex) -> BigComplex {
    if !z.is_real() || (z.re() >= &0 && z.re() < &1) {
        return z.clone();
    }
    let p = z.prec();
    let tiny = Float::with_val(p, Float::i_exp(1, -2 * p as i32));
    BigComplex::new(z.re().clone(), tiny)
}

fn reduce_part(part: ReducedPart, recipe: &mut Vec<String>, depth: u32) -> Result<Vec<ReducedPart>> {
    if depth > 6 {
        return Err(Error::DegenerateTransformation("reduction did not terminate".into()));
    }
    let case = &part.case;
    let (e1, e3) = (case.eps1.clone(), case.eps3.clone());
    if e3 == 1 && e1 >= 0 {
        return Ok(vec![part]);
    }
    let p = part.z.prec();
    let one = BigComplex::one(p);
    // Real z on [1, inf) or (-inf, 0) sits on a cut of (1-z)^s or z^s: move it
    // to the upper side, which is the side the principal logarithm selects
    // for z^s and the default side of the reference evaluator.
    let z = &nudge_off_axis(&part.z);
    let (a, b, c) = (case.a0.with_prec(p), case.b0.with_prec(p), case.c0.with_prec(p));
    let lam = case.lam.with_prec(p);
    if e3 == 1 || (e3 == -1 && e1 < -1) {
        // Pfaff: F(A, B; C; z) = (1-z)^(-B) F(C-A, B; C; z/(z-1))
        let mult = (-(&b * &(&one - z).ln())).exp();
        let z2 = z / &(z - &one);
        let new = AsymCase { a0: &c - &a, eps1: Rational::from(&e3 - &e1), ..case.clone() };
        recipe.push(format!("Pfaff with z -> z/(z-1): rates ({e1}, 0, {e3}) -> ({}, 0, {e3})", new.eps1));
        let next = ReducedPart { case: new, z: z2, multiplier: &part.multiplier * &mult };
        return reduce_part(next, recipe, depth + 1);
    }
    require(e3 == -1, "reduction handles eps3 = +1 or -1")?;
    // F(A,B;C;z) = k1 F(A,B;A+B-C+1;1-z) + k2 F(1-A,1-B;2-C;z)
    let (big_a, big_b, big_c) = case.parameters();
    let (big_a, big_b, big_c) = (big_a.with_prec(p), big_b.with_prec(p), big_c.with_prec(p));
    if (&(&big_c - &big_a) - &big_b).as_integer().is_some() {
        return Err(Error::DegenerateTransformation("c - a - b is an integer".into()));
    }
    if big_c.as_integer().is_some_and(|n| n >= 0) {
        return Err(Error::DegenerateTransformation("c is a non-negative integer".into()));
    }
    let mc = mixed_connection(&big_a, &big_b, &big_c, z).map_err(|e| Error::DegenerateTransformation(e.to_string()))?;
    // First function: upper rate e1, lower rate e1 + 1 (after C -> A+B-C+1).
    let lower = Rational::from(&e1 + 1u32);
    if lower <= 0 {
        return Err(Error::DegenerateTransformation("lower rate does not grow after connection".into()));
    }
    let lam1 = lam.mul_real(&Float::with_val(p, &lower));
    let first = AsymCase {
        a0: a.clone(),
        b0: b.clone(),
        c0: &(&(&a + &b) - &c) + &one,
        eps1: Rational::from(&e1 / &lower),
        eps2: Rational::new(),
        eps3: Rational::from(1),
        lam: lam1,
    };
    let second = AsymCase {
        a0: &one - &a,
        b0: &one - &b,
        c0: &one.mul_i64(2) - &c,
        eps1: Rational::from(-&e1),
        eps2: Rational::new(),
        eps3: Rational::from(1),
        lam: lam.clone(),
    };
    recipe.push(format!(
        "connection z -> 1-z: rates ({e1}, 0, -1) -> ({}, 0, 1) with lambda scaled by {lower}, plus ({}, 0, 1) at z",
        first.eps1, second.eps1
    ));
    let mut out = reduce_part(
        ReducedPart { case: first, z: &one - z, multiplier: &part.multiplier * &mc.coeff_one_minus },
        recipe,
        depth + 1,
    )?;
    out.extend(reduce_part(
        ReducedPart { case: second, z: z.clone(), multiplier: &part.multiplier * &mc.coeff_z },
        recipe,
        depth + 1,
    )?);
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hgf::hgf_eval;
    use crate::numerics::Precision;
    use proptest::prelude::*;

    const P: u32 = 128;

    fn q(n: i32, d: i32) -> Rational {
        Rational::from((n, d))
    }

    fn c(x: f64, y: f64) -> BigComplex {
        BigComplex::from_f64(P, x, y)
    }

    fn reference(case: &AsymCase, z: &BigComplex) -> BigComplex {
        hgf_eval(&case.hgf_input(z), &Precision::new(P).unwrap()).unwrap().value
    }

    #[test]
    fn case_validation() {
        assert!(AsymCase::ac(P, 1.0, 1.0, 2.0, q(1, 2), (-1.0, 0.0)).is_err());
        let bad = AsymCase::new(c(1.0, 0.0), c(1.0, 0.0), c(1.0, 0.0), (q(1, 2), q(1, 1), q(1, 1)), c(5.0, 0.0));
        assert!(bad.is_err());
        let single = AsymCase::new(c(1.0, 0.0), c(1.0, 0.0), c(1.0, 0.0), (q(0, 1), q(0, 1), q(1, 1)), c(5.0, 0.0));
        assert!(single.is_ok());
    }

    #[test]
    fn large_c_only() {
        let mk = |a: f64, z: f64| {
            let case =
                AsymCase::new(c(a, 0.0), c(3.0, 0.0), c(1.0, 0.0), (q(0, 1), q(0, 1), q(1, 1)), c(1e6, 0.0)).unwrap();
            (ae_large_c_only(&case, &c(z, 0.0)).unwrap().value, case)
        };
        assert_eq!(mk(0.0, 0.7).0.to_f64_pair(), (1.0, 0.0));
        assert_eq!(mk(2.0, 0.0).0.to_f64_pair(), (1.0, 0.0));
        let (v, case) = mk(2.0, 0.7);
        let expect = 1.0 + 4.2e-6 / (1.0 + 1e-6);
        assert!((v.to_f64_pair().0 - expect).abs() < 1e-15);
        assert!(v.rel_diff(&reference(&case, &c(0.7, 0.0))) < 1e-10);
    }

    #[test]
    fn leading_examples() {
        let case = AsymCase::ac(P, 1.0, 0.0, 2.0, q(1, 2), (400.0, 200.0)).unwrap();
        assert_eq!(ae_ac_leading(&case, &c(2.7, 0.3)).unwrap().value.to_f64_pair(), (1.0, 0.0));
        let case = AsymCase::ac(P, 1.0, 1.0, 2.0, q(1, 2), (400.0, 200.0)).unwrap();
        let v = ae_ac_leading(&case, &c(1.0, 0.0)).unwrap();
        assert!((v.value.to_f64_pair().0 - 2.0).abs() < 1e-30);
        let r = reference(&case, &c(1.0, 0.0));
        assert!(v.value.rel_diff(&r) < 0.01);
        // real z beyond 1/eps: imaginary part -sin(pi b) |1 - eps z|^(-b)
        let case = AsymCase::ac(P, 1.0, 0.75, 2.0, q(1, 2), (400.0, 200.0)).unwrap();
        let v = ae_ac_leading(&case, &c(3.0, 0.0)).unwrap().value.to_f64_pair();
        let expect = -(0.75 * std::f64::consts::PI).sin() * 0.5f64.powf(-0.75);
        assert!((v.1 - expect).abs() < 1e-14);
        let near = ae_ac_leading(&case, &c(2.05, 0.0)).unwrap();
        assert_eq!(near.warning, Some(Warning::NearCriticalZ));
        assert!(ae_ac_leading(&AsymCase::ac(P, 1.0, 1.0, 2.0, q(3, 2), (4.0, 0.0)).unwrap(), &c(0.2, 0.0)).is_err());
    }

    #[test]
    fn h_eps_shape() {
        for eps in [0.2, 0.5, 0.8, 1.5, 2.0, 3.0] {
            let at = h_eps_real(eps, 1.0 / eps).unwrap();
            assert!((at - 1.0).abs() < 1e-14);
            for d in [-0.05, 0.05] {
                let x = 1.0 / eps + d;
                if x == 1.0 {
                    continue;
                }
                let h = h_eps_real(eps, x).unwrap();
                if eps < 1.0 {
                    assert!(h < 1.0);
                } else {
                    assert!(h > 1.0);
                }
            }
        }
        assert!(h_eps_real(2.0, 1.0 + 1e-12).unwrap() > 1e5);
        assert_eq!(h_eps_real(2.0, 1.0), Err(Error::AtSingularity));
        let mut prev = 1.0;
        for k in 1..40 {
            let h = h_eps_real(0.5, 1.0 + k as f64 * 0.5).unwrap();
            assert!(h <= 1.0 + 1e-15);
            if 1.0 + k as f64 * 0.5 > 2.0 {
                assert!(h < prev);
            }
            prev = h;
        }
        assert!(h_eps_real(0.5, 1e12).unwrap() < 1e-5);
        // complex modulus agrees with the real form
        let e = Float::with_val(P, 1.5);
        let v = h_eps(&e, &c(0.4, 0.0)).unwrap();
        assert!((v.abs_f64() - h_eps_real(1.5, 0.4).unwrap()).abs() < 1e-14);
    }

    #[test]
    fn h_eps_second_derivative() {
        for eps in [0.3, 0.6, 1.7, 2.5] {
            let x = 1.0 / eps;
            let hh = 1e-4;
            let d2 = (h_eps_real(eps, x + hh).unwrap() - 2.0 + h_eps_real(eps, x - hh).unwrap()) / (hh * hh);
            let expect = eps.powi(3) / (eps - 1.0);
            assert!((d2 - expect).abs() < 1e-5 * expect.abs().max(1.0), "{eps}: {d2} vs {expect}");
        }
    }

    #[test]
    fn residue_forms() {
        let case = AsymCase::ac(P, 0.0, 1.0, 1.0, q(2, 1), (50.0, 0.0)).unwrap();
        let z = c(0.6, 0.0);
        let a = residue_asym(&case, &z).unwrap();
        let e = residue_exact(&case, &z).unwrap();
        // b = 1: both are the simple-pole value
        assert!(a.rel_diff(&e) < 1e-30);
        let mut devs = Vec::new();
        for lam in [100.0, 200.0, 400.0, 800.0] {
            let case = AsymCase::ac(P, 0.0, 2.0, 1.0, q(2, 1), (lam, 0.0)).unwrap();
            let a = residue_asym(&case, &z).unwrap();
            let e = residue_exact(&case, &z).unwrap();
            devs.push(a.rel_diff(&e));
        }
        assert!(devs[1] < 0.05);
        for w in devs.windows(2) {
            assert!(w[1] < w[0]);
        }
        let slope = (devs[3] / devs[0]).log2() / 3.0;
        assert!(slope <= -0.9, "{slope}");
        let bad = AsymCase::ac(P, 0.0, 1.5, 1.0, q(2, 1), (50.0, 0.0)).unwrap();
        assert!(residue_asym(&bad, &z).is_err());
    }

    #[test]
    fn residue_simple_pole_limit() {
        // (t - 1/z) t^(A-1) (t-1)^(C-A-1) / (1 - z t) as t -> 1/z
        let case = AsymCase::ac(P, 0.3, 1.0, 1.2, q(5, 2), (5.0, 0.0)).unwrap();
        let z = c(0.4, 0.1);
        let exact = residue_exact(&case, &z).unwrap();
        let (a, _, cc) = case.parameters();
        let one = BigComplex::one(P);
        let t0 = z.recip();
        let d = BigComplex::from_f64(P, 1e-20, 1e-20);
        let t = &t0 + &d;
        let f = &(&(&(&a - &one) * &t.ln()).exp() * &(&(&(&cc - &a) - &one) * &(&t - &one).ln()).exp())
            / &(&one - &(&z * &t));
        let lim = &d * &f;
        assert!(lim.rel_diff(&exact) < 1e-15);
    }

    #[test]
    fn full_expansion() {
        let case = AsymCase::ac(P, 0.0, -2.0, 1.0, q(2, 1), (100.0, 0.0)).unwrap();
        for x in [0.3, 0.8, 2.5] {
            let r = ae_ac_full(&case, &c(x, 0.0)).unwrap();
            let expect = (1.0 - 2.0 * x).powi(2);
            assert!((r.value.to_f64_pair().0 - expect).abs() < 1e-12 * expect.max(1.0));
        }
        let case = AsymCase::ac(P, 0.0, 2.0, 1.0, q(3, 2), (50.0, 75.0)).unwrap();
        let z = c(0.9, 0.0);
        let r = ae_ac_full(&case, &z).unwrap();
        assert_eq!(r.terms.len(), 2);
        let reference = hgf_eval(&case.hgf_input(&z), &Precision::new(P).unwrap()).unwrap().value;
        let full_err = r.value.rel_diff(&reference);
        let lead_err = r.terms[0].1.rel_diff(&reference);
        assert!(full_err < 0.05 && lead_err > 0.5, "{full_err} {lead_err}");
        let case = AsymCase::ac(P, 0.0, 2.0, 1.0, q(2, 1), (50.0, 0.0)).unwrap();
        let r = ae_ac_full(&case, &c(0.3, 0.0)).unwrap();
        assert_eq!(r.terms.len(), 1);
        assert!(matches!(ae_ac_full(&case, &c(1.0, 0.0)), Err(Error::AtOne)));
    }

    #[test]
    fn pole_term_grows_between_critical_points() {
        let z = c(0.7, 0.0);
        let mut prev = 0.0;
        for lam in [25.0, 50.0, 100.0, 200.0] {
            let case = AsymCase::ac(P, 0.2, 0.5, 1.1, q(2, 1), (lam, 0.0)).unwrap();
            let r = ae_ac_full(&case, &z).unwrap();
            let ratio = r.terms[1].1.abs_f64() / r.terms[0].1.abs_f64();
            assert!(ratio > prev);
            prev = ratio;
        }
    }

    #[test]
    fn eps_one_continuity() {
        let z = c(0.4, 0.2);
        let target = (-(&c(0.7, 0.0) * &(&BigComplex::one(P) - &z).ln())).exp();
        let mut last = (f64::INFINITY, f64::INFINITY);
        for k in 3..12 {
            let below = q((1 << k) - 1, 1 << k);
            let above = q((1 << k) + 1, 1 << k);
            let lo = AsymCase::ac(P, 0.3, 0.7, 1.2, below, (80.0, 0.0)).unwrap();
            let hi = AsymCase::ac(P, 0.3, 0.7, 1.2, above, (80.0, 0.0)).unwrap();
            let dl = ae_ac_leading(&lo, &z).unwrap().value.rel_diff(&target);
            let dh = ae_ac_full(&hi, &z).unwrap().value.rel_diff(&target);
            assert!(dl < last.0 && dh < last.1);
            last = (dl, dh);
        }
        assert!(last.0 < 1e-3 && last.1 < 1e-3);
    }

    fn check_round_trip(case: &AsymCase, z: &BigComplex) {
        let prec = Precision::new(P).unwrap();
        let red = reduce_negative_eps(case, z).unwrap();
        let values: Vec<BigComplex> = red
            .parts
            .iter()
            .map(|part| {
                assert!(part.case.eps1 >= 0 && part.case.eps3 == 1, "{}", red.recipe);
                hgf_eval(&part.case.hgf_input(&part.z), &prec).unwrap().value
            })
            .collect();
        let v = red.recombine(&values);
        let reference = reference(case, z);
        assert!(v.rel_diff(&reference) < 1e-20, "{}: {}", red.recipe, v.rel_diff(&reference));
    }

    #[test]
    fn reductions_round_trip() {
        let z = c(0.3, 0.0);
        let neg = AsymCase::ac(P, 0.6, 0.7, 1.3, q(-2, 5), (30.0, 0.0)).unwrap();
        let red = reduce_negative_eps(&neg, &z).unwrap();
        assert_eq!(red.parts.len(), 1);
        assert_eq!(red.parts[0].case.eps1, q(7, 5));
        check_round_trip(&neg, &z);
        let mk = |e: Rational, e3: i32| {
            AsymCase::new(c(0.6, 0.0), c(0.7, 0.0), c(0.35, 0.0), (e, q(0, 1), q(e3, 1)), c(20.5, 0.0)).unwrap()
        };
        check_round_trip(&mk(q(1, 2), -1), &z);
        check_round_trip(&mk(q(-1, 2), -1), &z);
        check_round_trip(&mk(q(-3, 2), -1), &z);
        let id = mk(q(0, 1), 1);
        let red = reduce_negative_eps(&id, &z).unwrap();
        assert_eq!(red.recipe, "identity");
        assert_eq!(red.parts[0].multiplier.to_f64_pair(), (1.0, 0.0));
    }

    #[test]
    fn degenerate_connection_is_reported() {
        // C - A - B integer
        let case =
            AsymCase::new(c(0.5, 0.0), c(0.5, 0.0), c(1.0, 0.0), (q(1, 1), q(0, 1), q(-1, 1)), c(10.0, 0.0)).unwrap();
        assert!(matches!(reduce_negative_eps(&case, &c(0.3, 0.0)), Err(Error::DegenerateTransformation(_))));
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(10))]
        #[test]
        fn terms_sum_to_value(b in -1.5f64..2.5, x in 0.6f64..3.0, y in -1.0f64..1.0) {
            let case = AsymCase::ac(P, 0.3, b, 1.2, q(2, 1), (30.0, 5.0)).unwrap();
            let z = c(x, y);
            prop_assume!((&BigComplex::one(P) - &z).abs_f64() > 1e-3);
            let r = ae_ac_full(&case, &z).unwrap();
            let sum = r.terms.iter().fold(BigComplex::zero(P), |acc, t| &acc + &t.1);
            prop_assert!(sum.rel_diff(&r.value) == 0.0);
        }
    }
}
