use rug::Float;

use super::series::{check_lower_parameter, series_sum, terminating_degree, Partial};
use super::{CutSide, EvalOutcome, HgfInput, Method, GUARD_BITS};
use crate::error::{Error, Result};
use crate::numerics::{gamma_ratio, BigComplex, Precision};

/// Below this modulus the direct or Pfaff series is used without looking further.
const DIRECT_RADIUS: f64 = 0.75;
/// Largest modulus at which a transformed series is still accepted.
const MAP_RADIUS: f64 = 0.9;
const MAX_ATTEMPTS: usize = 6;

/// Argument maps with a series representation around the new variable.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Route {
    Direct,
    Pfaff,
    OneMinusZ,
    RecipZ,
    RecipOneMinusZ,
    OneMinusRecipZ,
}

impl Route {
    const ALL: [Route; 6] =
        [Route::Direct, Route::Pfaff, Route::OneMinusZ, Route::RecipZ, Route::RecipOneMinusZ, Route::OneMinusRecipZ];

    fn modulus(self, z: (f64, f64)) -> f64 {
        let r = z.0.hypot(z.1);
        let s = (1.0 - z.0).hypot(z.1);
        match self {
            Route::Direct => r,
            Route::Pfaff => r / s,
            Route::OneMinusZ => s,
            Route::RecipZ => 1.0 / r,
            Route::RecipOneMinusZ => 1.0 / s,
            Route::OneMinusRecipZ => s / r,
        }
    }

    fn method(self) -> Method {
        match self {
            Route::Direct => Method::Series,
            Route::Pfaff => Method::PfaffContinuation,
            Route::OneMinusZ | Route::OneMinusRecipZ => Method::ConnectionFormula,
            Route::RecipZ | Route::RecipOneMinusZ => Method::ReciprocalConnection,
        }
    }

    /// The connection coefficients have cancelling poles at these parameters.
    fn degenerate(self, a: &BigComplex, b: &BigComplex, c: &BigComplex) -> bool {
        match self {
            Route::Direct | Route::Pfaff => false,
            Route::OneMinusZ | Route::OneMinusRecipZ => is_integer(&(&(c - a) - b)),
            Route::RecipZ | Route::RecipOneMinusZ => is_integer(&(a - b)),
        }
    }
}

fn is_integer(x: &BigComplex) -> bool {
    x.is_real() && x.re().is_integer()
}

fn one(p: u32) -> BigComplex {
    BigComplex::one(p)
}

/// One summand of a connection formula with its error bookkeeping.
struct Term {
    value: BigComplex,
    lost: f64,
    tail: f64,
}

/// Gamma ratio with the bits its exponential may lose.
fn ratio(num: &[&BigComplex], den: &[&BigComplex]) -> Result<(BigComplex, f64)> {
    let (v, size) = gamma_ratio(num, den)?;
    Ok((v, size.max(1.0).log2()))
}

/// `base^expo` with the bits lost in the exponential.
fn power(base: &BigComplex, expo: &BigComplex) -> (BigComplex, f64) {
    let size = (expo * &base.ln()).abs_f64();
    (base.pow(expo), size.max(1.0).log2())
}

fn term(coef: (BigComplex, f64), factors: &[(BigComplex, f64)], inner: Partial) -> Term {
    let mut value = &coef.0 * &inner.value;
    let mut lost = coef.1 + inner.lost_bits;
    for (f, l) in factors {
        value = &value * f;
        lost += l;
    }
    Term { value, lost, tail: inner.tail }
}

fn combine(terms: Vec<Term>) -> Partial {
    let p = terms.iter().map(|t| t.value.prec()).max().unwrap_or(64);
    let mut sum = BigComplex::zero(p);
    for t in &terms {
        sum = &sum + &t.value;
    }
    if sum.is_zero() {
        let lost = terms.iter().map(|t| t.lost).fold(0.0, f64::max);
        return Partial { value: sum, lost_bits: lost, tail: 0.0 };
    }
    let s = sum.log2_abs();
    let mut lost = 0.0f64;
    let mut tail = 0.0f64;
    for t in &terms {
        if t.value.is_zero() {
            continue;
        }
        let rel = t.value.log2_abs() - s;
        lost = lost.max(t.lost + rel.max(0.0));
        tail += t.tail * rel.exp2();
    }
    Partial { value: sum, lost_bits: lost, tail }
}

fn eval_route(
    route: Route,
    a: &BigComplex,
    b: &BigComplex,
    c: &BigComplex,
    z: &BigComplex,
    log_tol: f64,
) -> Result<Partial> {
    let p = z.prec();
    let cma = c - a;
    let cmb = c - b;
    let s = &cma - b;
    let neg_s = -&s;
    let one_minus_z = &one(p) - z;
    match route {
        Route::Direct => series_sum(a, b, c, z, log_tol),
        Route::Pfaff => {
            let w = z / &(z - &one(p));
            if cmb.as_nonpositive_integer().is_some() {
                let inner = series_sum(a, &cmb, c, &w, log_tol)?;
                Ok(combine(vec![term((one(p), 0.0), &[power(&one_minus_z, &-a)], inner)]))
            } else {
                let inner = series_sum(&cma, b, c, &w, log_tol)?;
                Ok(combine(vec![term((one(p), 0.0), &[power(&one_minus_z, &-b)], inner)]))
            }
        }
        Route::OneMinusZ => {
            let w = one_minus_z.clone();
            let t1 = term(ratio(&[c, &s], &[&cma, &cmb])?, &[], series_sum(a, b, &neg_s.add_f64(1.0), &w, log_tol)?);
            let t2 = term(
                ratio(&[c, &neg_s], &[a, b])?,
                &[power(&w, &s)],
                series_sum(&cma, &cmb, &s.add_f64(1.0), &w, log_tol)?,
            );
            Ok(combine(vec![t1, t2]))
        }
        Route::RecipZ => {
            let w = z.recip();
            let mz = -z;
            let amb = a - b;
            let bma = -&amb;
            let t1 = term(
                ratio(&[c, &bma], &[b, &cma])?,
                &[power(&mz, &-a)],
                series_sum(a, &(&one(p) - &cma), &amb.add_f64(1.0), &w, log_tol)?,
            );
            let t2 = term(
                ratio(&[c, &amb], &[a, &cmb])?,
                &[power(&mz, &-b)],
                series_sum(b, &(&one(p) - &cmb), &bma.add_f64(1.0), &w, log_tol)?,
            );
            Ok(combine(vec![t1, t2]))
        }
        Route::RecipOneMinusZ => {
            let w = one_minus_z.recip();
            let amb = a - b;
            let bma = -&amb;
            let t1 = term(
                ratio(&[c, &bma], &[b, &cma])?,
                &[power(&one_minus_z, &-a)],
                series_sum(a, &cmb, &amb.add_f64(1.0), &w, log_tol)?,
            );
            let t2 = term(
                ratio(&[c, &amb], &[a, &cmb])?,
                &[power(&one_minus_z, &-b)],
                series_sum(b, &cma, &bma.add_f64(1.0), &w, log_tol)?,
            );
            Ok(combine(vec![t1, t2]))
        }
        Route::OneMinusRecipZ => {
            let w = &one(p) - &z.recip();
            let t1 = term(
                ratio(&[c, &s], &[&cma, &cmb])?,
                &[power(z, &-a)],
                series_sum(a, &(&one(p) - &cma), &neg_s.add_f64(1.0), &w, log_tol)?,
            );
            let t2 = term(
                ratio(&[c, &neg_s], &[a, b])?,
                &[power(&one_minus_z, &s), power(z, &-&cma)],
                series_sum(&cma, &(&one(p) - a), &s.add_f64(1.0), &w, log_tol)?,
            );
            Ok(combine(vec![t1, t2]))
        }
    }
}

/// Same route at doubled precision with the offending parameter moved by
/// `+-delta`; the average removes the first-order shift.
fn eval_perturbed(
    route: Route,
    a: &BigComplex,
    b: &BigComplex,
    c: &BigComplex,
    z: &BigComplex,
    log_tol: f64,
) -> Result<Partial> {
    let wp = z.prec();
    let wp2 = 2 * wp;
    let exp = -((wp / 2 + 8) as i32);
    let delta = Float::with_val(wp2, Float::i_exp(1, exp));
    let (a2, b2, c2, z2) = (a.with_prec(wp2), b.with_prec(wp2), c.with_prec(wp2), z.with_prec(wp2));
    let mut vals = Vec::with_capacity(2);
    for sign in [1i32, -1] {
        let d = BigComplex::from_float(Float::with_val(wp2, &delta * sign));
        let r = match route {
            Route::OneMinusZ | Route::OneMinusRecipZ => {
                eval_route(route, &a2, &b2, &(&c2 + &d), &z2, log_tol - wp as f64)?
            }
            _ => eval_route(route, &(&a2 + &d), &b2, &c2, &z2, log_tol - wp as f64)?,
        };
        vals.push(r);
    }
    let value = (&vals[0].value + &vals[1].value).mul_f64(0.5).with_prec(wp);
    let lost = vals.iter().map(|r| r.lost_bits).fold(0.0, f64::max) - wp as f64;
    let tail = vals.iter().map(|r| r.tail).fold(0.0, f64::max) + (2.0 * exp as f64).exp2();
    Ok(Partial { value, lost_bits: lost.max(0.0), tail })
}

/// Integrates the differential equation along a straight line from `z/(2|z|)`.
fn taylor_continuation(
    a: &BigComplex,
    b: &BigComplex,
    c: &BigComplex,
    z: &BigComplex,
    log_tol: f64,
) -> Result<Partial> {
    let p = z.prec();
    let r = z.abs();
    let z0 = &z.mul_real(&Float::with_val(p, 0.5 / r));
    let start = series_sum(a, b, c, z0, log_tol)?;
    let shifted = series_sum(&a.add_f64(1.0), &b.add_f64(1.0), &c.add_f64(1.0), z0, log_tol)?;
    let ab = a * b;
    let mut f = start.value;
    let mut df = &(&ab / c) * &shifted.value;
    let mut lost = start.lost_bits.max(shifted.lost_bits);
    let mut zeta = z0.clone();
    let q1 = -&(a + b).add_f64(1.0);
    let r0 = -&ab;
    for _ in 0..10_000 {
        let rem = z - &zeta;
        let rem_abs = rem.abs_f64();
        if rem.is_zero() || rem_abs < (-(p as f64)).exp2() * 4.0 {
            break;
        }
        let dist = zeta.abs_f64().min((&zeta - &one(p)).abs_f64());
        let step = 0.5 * dist;
        let h = if step >= rem_abs { rem.clone() } else { rem.mul_f64(step / rem_abs) };
        let one_minus = &one(p) - &zeta;
        let p0 = &zeta * &one_minus;
        let p1 = &one(p) - &zeta.mul_i64(2);
        let q0 = c - &(&(a + b).add_f64(1.0) * &zeta);
        let h2 = &h * &h;
        let mut g_prev = f.clone();
        let mut g_cur = &df * &h;
        let mut sum_f = &g_prev + &g_cur;
        let mut sum_d = g_cur.clone();
        let mut max_log = g_prev.log2_abs().max(g_cur.log2_abs());
        let mut small = 0;
        let mut k: i64 = 0;
        loop {
            // coefficient of t^k in the equation determines g_{k+2}
            let c1 = &p1.mul_i64(k * (k + 1)) + &q0.mul_i64(k + 1);
            let c0 = (&q1.mul_i64(k) + &r0).add_f64(-((k * (k - 1)) as f64));
            let num = &(&c1 * &(&g_cur * &h)) + &(&c0 * &(&g_prev * &h2));
            let g_next = -&(&num / &p0.mul_i64((k + 1) * (k + 2)));
            sum_f = &sum_f + &g_next;
            sum_d = &sum_d + &g_next.mul_i64(k + 2);
            let lg = g_next.log2_abs();
            max_log = max_log.max(lg);
            let reference = sum_f.log2_abs().min(sum_d.log2_abs());
            if g_next.is_zero() || lg + ((k + 3) as f64).log2() < reference + log_tol {
                small += 1;
                if small >= 3 {
                    break;
                }
            } else {
                small = 0;
            }
            g_prev = g_cur;
            g_cur = g_next;
            k += 1;
            if k > 1_000_000 {
                return Err(Error::NonConvergent(z.abs_f64()));
            }
        }
        lost += (max_log - sum_f.log2_abs()).max(0.0);
        f = sum_f;
        df = &sum_d / &h;
        zeta = &zeta + &h;
    }
    Ok(Partial { value: f, lost_bits: lost, tail: 0.0 })
}

fn is_exactly_one(z: &BigComplex) -> bool {
    z.is_real() && z.re() == &1
}

fn evaluate(a: &BigComplex, b: &BigComplex, c: &BigComplex, z: &BigComplex, log_tol: f64) -> Result<(Partial, Method)> {
    let p = z.prec();
    if terminating_degree(a, b).is_some() {
        return Ok((series_sum(a, b, c, z, log_tol)?, Method::TerminatingPolynomial));
    }
    if z.is_zero() {
        return Ok((Partial::exact(one(p)), Method::Series));
    }
    let cma = c - a;
    let cmb = c - b;
    let s = &cma - b;
    if is_exactly_one(z) {
        if s.re() > &0 {
            let (v, lost) = ratio(&[c, &s], &[&cma, &cmb])?;
            return Ok((Partial { value: v, lost_bits: lost, tail: 0.0 }, Method::GaussSum));
        }
        return Err(Error::DivergesAtOne);
    }
    if terminating_degree(&cma, &cmb).is_some() && check_lower_parameter(&cma, &cmb, c).is_ok() {
        let inner = series_sum(&cma, &cmb, c, z, log_tol)?;
        let t = term((one(p), 0.0), &[power(&(&one(p) - z), &s)], inner);
        return Ok((combine(vec![t]), Method::TerminatingPolynomial));
    }
    let zf = z.to_f64_pair();
    for route in [Route::Direct, Route::Pfaff] {
        if route.modulus(zf) <= DIRECT_RADIUS {
            return Ok((eval_route(route, a, b, c, z, log_tol)?, route.method()));
        }
    }
    let mut candidates: Vec<(f64, Route)> =
        Route::ALL.iter().map(|r| (r.modulus(zf), *r)).filter(|(m, _)| *m <= MAP_RADIUS).collect();
    candidates.sort_by(|x, y| x.0.total_cmp(&y.0));
    if candidates.is_empty() {
        return Ok((taylor_continuation(a, b, c, z, log_tol)?, Method::TaylorContinuation));
    }
    if let Some((_, route)) = candidates.iter().find(|(_, r)| !r.degenerate(a, b, c)) {
        return Ok((eval_route(*route, a, b, c, z, log_tol)?, route.method()));
    }
    let route = candidates[0].1;
    Ok((eval_perturbed(route, a, b, c, z, log_tol)?, route.method()))
}

/// General evaluator: picks a convergent representation and raises the
/// working precision until the bits lost to cancellation are covered.
pub fn hgf_eval(input: &HgfInput, prec: &Precision) -> Result<EvalOutcome> {
    input.validate()?;
    let bits = prec.bits;
    let z = input.effective_z(bits);
    let base_log_tol = prec.series_tail_tolerance.log2();
    let mut wp = bits + GUARD_BITS;
    for attempt in 0..MAX_ATTEMPTS {
        let log_tol = base_log_tol - (wp - bits - GUARD_BITS) as f64;
        let (r, method) = evaluate(
            &input.a.with_prec(wp),
            &input.b.with_prec(wp),
            &input.c.with_prec(wp),
            &z.with_prec(wp),
            log_tol,
        )?;
        let spare = wp as f64 - bits as f64 - r.lost_bits;
        if spare >= 8.0 || attempt + 1 == MAX_ATTEMPTS {
            let rounding = (-(wp as f64 - r.lost_bits)).exp2();
            return Ok(EvalOutcome { value: r.value.with_prec(bits), method, est_rel_error: rounding + r.tail });
        }
        // The loss is measured against a sum that may itself be noise, so at
        // least double each time.
        let needed = bits + GUARD_BITS + r.lost_bits.ceil() as u32 + 16;
        wp = needed.max(2 * wp);
    }
    unreachable!("escalation loop always returns")
}

/// Coefficients of `F(a,b;c;z) = A F(a,b;a+b-c+1;1-z) + B F(1-a,1-b;2-c;z)`.
#[derive(Debug, Clone)]
pub struct MixedConnection {
    pub coeff_one_minus: BigComplex,
    pub coeff_z: BigComplex,
}

/// Connection that mixes a series in `1 - z` with one in `z`.
///
/// Needs `c` and `a - c + 1`, `b - c + 1` away from the integers where the
/// gamma factors have poles.
pub fn mixed_connection(a: &BigComplex, b: &BigComplex, c: &BigComplex, z: &BigComplex) -> Result<MixedConnection> {
    let p = z.prec().max(a.prec()).max(c.prec());
    let one = one(p);
    let a1 = &(a - c) + &one;
    let b1 = &(b - c) + &one;
    let omc = &one - c;
    let s1 = &(a + b) - &(c - &one);
    let cm1 = c - &one;
    let wrap = |e: Error| Error::DegenerateConnection(format!("mixed connection: {e}"));
    let (coeff_one_minus, _) = gamma_ratio(&[&a1, &b1], &[&omc, &s1]).map_err(wrap)?;
    let (g, _) = gamma_ratio(&[&a1, &b1, &cm1], &[&omc, a, b]).map_err(wrap)?;
    let factor = &z.pow(&omc) * &(&one - z).pow(&(&(c - a) - b));
    let coeff_z = -&(&g * &factor);
    Ok(MixedConnection { coeff_one_minus, coeff_z })
}

impl MixedConnection {
    /// Evaluates both series with [`hgf_eval`] and recombines them.
    pub fn evaluate(
        &self,
        a: &BigComplex,
        b: &BigComplex,
        c: &BigComplex,
        z: &BigComplex,
        prec: &Precision,
    ) -> Result<BigComplex> {
        let p = prec.bits + GUARD_BITS;
        let one = one(p);
        let first = HgfInput::new(a.clone(), b.clone(), &(&(a + b) - c) + &one, &one - z);
        let second = HgfInput::new(&one - a, &one - b, &one.mul_i64(2) - c, z.clone());
        let f1 = hgf_eval(&first, &prec.with_bits(p))?.value;
        let f2 = hgf_eval(&second, &prec.with_bits(p))?.value;
        Ok((&(&self.coeff_one_minus * &f1) + &(&self.coeff_z * &f2)).with_prec(prec.bits))
    }
}

fn flip(side: CutSide) -> CutSide {
    match side {
        CutSide::Upper => CutSide::Lower,
        CutSide::Lower => CutSide::Upper,
    }
}

/// `F(a,b;c;z) = (1-z)^(-b) F(c-a, b; c; z/(z-1))`: returns the multiplier and the new input.
pub fn pfaff_transform(input: &HgfInput) -> (BigComplex, HgfInput) {
    let p = input.z.prec().max(input.a.prec());
    let one = one(p);
    let z_side = input.effective_z(p);
    let multiplier = (&one - &z_side).pow(&-&input.b);
    let w = &input.z / &(&input.z - &one);
    let mut out = HgfInput::new(&input.c - &input.a, input.b.clone(), input.c.clone(), w);
    if input.on_cut() {
        out.cut_side = flip(input.cut_side);
    }
    (multiplier, out)
}

/// `F(a,b;c;z) = (1-z)^(c-a-b) F(c-a, c-b; c; z)`: returns the multiplier and the new input.
pub fn euler_transform(input: &HgfInput) -> (BigComplex, HgfInput) {
    let p = input.z.prec().max(input.a.prec());
    let one = one(p);
    let z_side = input.effective_z(p);
    let s = &(&input.c - &input.a) - &input.b;
    let multiplier = (&one - &z_side).pow(&s);
    let mut out = HgfInput::new(&input.c - &input.a, &input.c - &input.b, input.c.clone(), input.z.clone());
    out.cut_side = input.cut_side;
    (multiplier, out)
}
