//! Arbitrary-precision complex arithmetic and the gamma family.

mod complex;
mod gamma;
mod precision;

pub use complex::{cmp_abs, BigComplex};
pub use gamma::{
    gamma, gamma_ratio, log_gamma, pochhammer, reciprocal_gamma, stirling_lgamma, DEFAULT_STIRLING_CUTOFF,
};
pub use precision::{Precision, DEFAULT_BITS, MIN_BITS};

use crate::error::Result;

/// Result of [`escalate`]: the last value, the precision that produced it and
/// the relative change from the previous precision.
#[derive(Debug, Clone)]
pub struct Escalated {
    pub value: BigComplex,
    pub bits_used: u32,
    pub rel_change: f64,
}

/// Re-evaluate at doubled precision until two successive results agree to `tol`.
///
/// Stops at `max_bits`, returning the best value and the last observed change.
pub fn escalate<F>(prec: &Precision, max_bits: u32, tol: f64, mut eval: F) -> Result<Escalated>
where
    F: FnMut(&Precision) -> Result<BigComplex>,
{
    let mut p = *prec;
    let mut prev = eval(&p)?;
    let mut change = f64::INFINITY;
    while p.bits.saturating_mul(2) <= max_bits {
        let next = p.with_bits(p.bits * 2);
        let v = eval(&next)?;
        change = v.rel_diff(&prev);
        p = next;
        prev = v;
        if change <= tol {
            break;
        }
    }
    Ok(Escalated { value: prev.with_prec(prec.bits), bits_used: p.bits, rel_change: change })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn escalation_converges() {
        let prec = Precision::new(64).unwrap();
        let out = escalate(&prec, 1024, 1e-30, |p| {
            let x = BigComplex::real(p.bits, 2.0);
            Ok(x.sqrt())
        })
        .unwrap();
        assert!(out.rel_change < 1e-18);
        assert_eq!(out.value.prec(), 64);
    }

    #[test]
    fn escalation_stops_at_cap() {
        let prec = Precision::new(64).unwrap();
        let mut calls = 0;
        let out = escalate(&prec, 256, 0.0, |p| {
            calls += 1;
            Ok(BigComplex::real(p.bits, calls as f64))
        })
        .unwrap();
        assert_eq!(out.bits_used, 256);
        assert_eq!(calls, 3);
    }
}
