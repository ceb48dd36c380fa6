use rug::Float;

use super::{EvalOutcome, HgfInput, Method, GUARD_BITS};
use crate::error::{Error, Result};
use crate::numerics::{BigComplex, Precision};

const MAX_TERMS: u64 = 5_000_000;

/// A value with the bits lost to cancellation and a truncation estimate.
#[derive(Debug, Clone)]
pub(crate) struct Partial {
    pub value: BigComplex,
    pub lost_bits: f64,
    pub tail: f64,
}

impl Partial {
    pub fn exact(value: BigComplex) -> Self {
        Partial { value, lost_bits: 0.0, tail: 0.0 }
    }
}

/// Degree of the polynomial when `a` or `b` is a non-positive integer.
pub(crate) fn terminating_degree(a: &BigComplex, b: &BigComplex) -> Option<u64> {
    match (a.as_nonpositive_integer(), b.as_nonpositive_integer()) {
        (Some(m), Some(n)) => Some(m.min(n)),
        (Some(m), None) | (None, Some(m)) => Some(m),
        (None, None) => None,
    }
}

/// `c = -k` is allowed only when the series stops at degree `m <= k`.
pub(crate) fn check_lower_parameter(a: &BigComplex, b: &BigComplex, c: &BigComplex) -> Result<()> {
    if let Some(k) = c.as_nonpositive_integer() {
        match terminating_degree(a, b) {
            Some(m) if m <= k => Ok(()),
            _ => Err(Error::UndefinedC),
        }
    } else {
        Ok(())
    }
}

/// Partial sums of the defining series at the precision of the arguments.
///
/// Summation stops once three consecutive terms fall below `2^log_tol`
/// relative to the partial sum.
pub(crate) fn series_sum(
    a: &BigComplex,
    b: &BigComplex,
    c: &BigComplex,
    z: &BigComplex,
    log_tol: f64,
) -> Result<Partial> {
    check_lower_parameter(a, b, c)?;
    let degree = terminating_degree(a, b);
    let p = a.prec().max(b.prec()).max(c.prec()).max(z.prec());
    let zabs = z.abs_f64();
    if degree.is_none() && zabs >= 1.0 {
        return Err(Error::NonConvergent(zabs));
    }
    let mut term = BigComplex::one(p);
    let mut sum = BigComplex::one(p);
    if z.is_zero() || degree == Some(0) {
        return Ok(Partial::exact(sum));
    }
    let mut max_log = 0.0f64;
    let mut small = 0;
    let mut last_log = 0.0;
    let mut n: u64 = 0;
    loop {
        if let Some(m) = degree {
            if n == m {
                break;
            }
        }
        let nf = Float::with_val(p, n);
        let num = &a.add_real(&nf) * &b.add_real(&nf);
        let den = c.add_real(&nf).mul_real(&Float::with_val(p, n + 1));
        term = &(&term * &num) * &(z / &den);
        sum = &sum + &term;
        let lt = term.log2_abs();
        max_log = max_log.max(lt);
        last_log = lt;
        n += 1;
        if degree.is_none() {
            if lt < sum.log2_abs() + log_tol {
                small += 1;
                if small >= 3 {
                    break;
                }
            } else {
                small = 0;
            }
            if n > MAX_TERMS {
                return Err(Error::NonConvergent(zabs));
            }
        }
    }
    let sum_log = sum.log2_abs();
    let lost_bits = if sum.is_zero() { 0.0 } else { (max_log - sum_log).max(0.0) };
    let tail = if degree.is_some() { 0.0 } else { (last_log - sum_log).exp2() * zabs / (1.0 - zabs) };
    Ok(Partial { value: sum, lost_bits, tail })
}

/// Precision retries before the series gives up and reports its error estimate.
const ESCALATIONS: usize = 8;

/// Direct summation of the series.
///
/// Stops once three consecutive terms fall below the tail tolerance relative
/// to the partial sum; a terminating series is summed to its last term for
/// any `z`.
pub fn hgf_series(input: &HgfInput, prec: &Precision) -> Result<EvalOutcome> {
    input.validate()?;
    let bits = prec.bits;
    let mut wp = bits + GUARD_BITS;
    let polynomial = terminating_degree(&input.a, &input.b).is_some();
    let method = if polynomial { Method::TerminatingPolynomial } else { Method::Series };
    for attempt in 0..ESCALATIONS {
        let r = series_sum(
            &input.a.with_prec(wp),
            &input.b.with_prec(wp),
            &input.c.with_prec(wp),
            &input.z.with_prec(wp),
            prec.series_tail_tolerance.log2() - (wp - bits - GUARD_BITS) as f64,
        )?;
        let spare = wp as f64 - bits as f64 - r.lost_bits;
        if spare >= 8.0 || attempt + 1 == ESCALATIONS {
            let rounding = (-(wp as f64 - r.lost_bits)).exp2();
            return Ok(EvalOutcome { value: r.value.with_prec(bits), method, est_rel_error: rounding + r.tail });
        }
        // The loss is measured against a sum that may itself be noise, so at
        // least double each time.
        wp = (bits + GUARD_BITS + r.lost_bits.ceil() as u32 + 16).max(2 * wp);
    }
    unreachable!("escalation loop always returns")
}
