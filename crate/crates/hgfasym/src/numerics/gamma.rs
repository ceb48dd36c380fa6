use std::f64::consts::{LN_2, PI as PI64};
use std::sync::{OnceLock, RwLock};

use rug::float::Constant;
use rug::{Float, Integer, Rational};

use super::complex::BigComplex;
use crate::error::{Error, Result};

/// Extra bits carried internally by the gamma family.
const GUARD_BITS: u32 = 32;

/// Default lower bound on `|z|` accepted by [`stirling_lgamma`].
pub const DEFAULT_STIRLING_CUTOFF: f64 = 10.0;

/// Coefficients `B_{2k} / (2k (2k-1))` of the Stirling series, k = 1, 2, ...
fn stirling_coefficients(count: usize) -> Vec<Rational> {
    static TABLE: OnceLock<RwLock<Vec<Rational>>> = OnceLock::new();
    let table = TABLE.get_or_init(|| RwLock::new(Vec::new()));
    {
        let t = table.read().expect("coefficient table lock");
        if t.len() >= count {
            return t[..count].to_vec();
        }
    }
    let mut t = table.write().expect("coefficient table lock");
    if t.len() < count {
        let n = count.max(2 * t.len()).max(64);
        *t = build_stirling_coefficients(n);
    }
    t[..count].to_vec()
}

/// Even Bernoulli numbers from tangent numbers, integer arithmetic only.
fn build_stirling_coefficients(n: usize) -> Vec<Rational> {
    let mut tan = vec![Integer::new(); n + 1];
    tan[1] = Integer::from(1);
    for k in 2..=n {
        tan[k] = Integer::from(&tan[k - 1] * (k as u64 - 1));
    }
    for k in 2..=n {
        for j in k..=n {
            let a = Integer::from(&tan[j - 1] * (j as u64 - k as u64));
            let b = Integer::from(&tan[j] * (j as u64 - k as u64 + 2));
            tan[j] = a + b;
        }
    }
    (1..=n)
        .map(|k| {
            // B_{2k} = (-1)^{k-1} 2k T_k / (4^k (4^k - 1))
            let four_k = Integer::from(1) << (2 * k as u32);
            let den = Integer::from(&four_k - 1u32) * &four_k;
            let mut num = Integer::from(&tan[k] * (2 * k as u64));
            if k % 2 == 0 {
                num = -num;
            }
            let b2k = Rational::from((num, den));
            let m = (2 * k as u64) * (2 * k as u64 - 1);
            b2k / Integer::from(m)
        })
        .collect()
}

/// Stirling series for `ln Gamma(w)`, valid for `Re w` large.
fn stirling_series(w: &BigComplex) -> BigComplex {
    let p = w.prec();
    let half_ln_2pi = Float::with_val(p, Float::with_val(p, Constant::Pi) * 2u32).ln() / 2u32;
    let lnw = w.ln();
    let mut res = &(&w.add_f64(-0.5) * &lnw) - w;
    res = res.add_real(&half_ln_2pi);

    let wabs = w.abs_f64();
    let kmax = ((PI64 * wabs) as usize + 8).min(4000);
    let coeffs = stirling_coefficients(kmax);
    let wi = w.recip();
    let wi2 = &wi * &wi;
    let mut pw = wi;
    let mut prev = f64::INFINITY;
    let target = -(p as f64);
    for c in coeffs.iter() {
        let term = pw.mul_real(&Float::with_val(p, c));
        let tl = term.log2_abs();
        if tl > prev {
            break;
        }
        res = &res + &term;
        if tl < target + res.log2_abs().max(0.0) {
            break;
        }
        prev = tl;
        pw = &pw * &wi2;
    }
    res
}

/// `sum_{k<n} ln(z+k)` as one continuous branch: each factor's principal log.
fn log_rising(z: &BigComplex, n: u64) -> BigComplex {
    let p = z.prec();
    let two_pi = Float::with_val(p, Constant::Pi) * 2u32;
    let mut acc = BigComplex::zero(p);
    let mut k = 0u64;
    while k < n {
        let end = (k + 16).min(n);
        let mut prod = BigComplex::one(p);
        let mut arg_sum = 0.0f64;
        for j in k..end {
            let f = z.add_real(&Float::with_val(p, j));
            arg_sum += f.arg().to_f64();
            prod = &prod * &f;
        }
        let mut l = prod.ln();
        let turns = ((arg_sum - l.im().to_f64()) / (2.0 * PI64)).round();
        if turns != 0.0 {
            let shift = Float::with_val(p, &two_pi * turns);
            l = &l + &BigComplex::new(Float::new(p), shift);
        }
        acc = &acc + &l;
        k = end;
    }
    acc
}

/// Principal branch of `ln Gamma(z)` at the precision of `z`.
///
/// Shifts by the recurrence until `Re z` is large enough for the Stirling
/// series to reach full precision, then undoes the shift with a continuous
/// sum of principal logarithms.
pub fn log_gamma(z: &BigComplex) -> Result<BigComplex> {
    if let Some(n) = z.near_nonpositive_integer(8) {
        return Err(Error::PoleAtNonPositiveInteger(format!("-{n}")));
    }
    let p = z.prec();
    let mag = z.abs_f64().max(1.0);
    let extra = (mag * mag.ln().max(1.0)).log2().max(0.0) as u32;
    let wp = p + GUARD_BITS + extra;
    let zw = z.with_prec(wp);
    let threshold = (wp as f64 * LN_2 / (2.0 * PI64) + 4.0).max(32.0);
    let re = zw.re().to_f64();
    let shift = if re < threshold { (threshold - re).ceil() as u64 } else { 0 };
    let w = zw.add_real(&Float::with_val(wp, shift));
    let mut res = stirling_series(&w);
    if shift > 0 {
        res = &res - &log_rising(&zw, shift);
    }
    Ok(res.with_prec(p))
}

/// `Gamma(z)`; errors at the poles.
pub fn gamma(z: &BigComplex) -> Result<BigComplex> {
    Ok(log_gamma(z)?.exp())
}

/// `1/Gamma(z)`, exactly zero at the non-positive integers.
pub fn reciprocal_gamma(z: &BigComplex) -> BigComplex {
    if z.as_nonpositive_integer().is_some() {
        return BigComplex::zero(z.prec());
    }
    match log_gamma(z) {
        Ok(l) => (-l).exp(),
        Err(_) => BigComplex::zero(z.prec()),
    }
}

/// Rising factorial `(x)_n` as a finite product.
pub fn pochhammer(x: &BigComplex, n: u64) -> BigComplex {
    let p = x.prec();
    let mut acc = BigComplex::one(p);
    for k in 0..n {
        let f = x.add_real(&Float::with_val(p, k));
        if f.is_zero() {
            return BigComplex::zero(p);
        }
        acc = &acc * &f;
    }
    acc
}

/// Leading Stirling approximation `(z - 1/2) ln z - z + ln(2 pi)/2`.
pub fn stirling_lgamma(z: &BigComplex, cutoff: f64) -> Result<BigComplex> {
    let modulus = z.abs_f64();
    if modulus < cutoff {
        return Err(Error::BelowThreshold { modulus, cutoff });
    }
    if z.re().is_sign_negative() || z.re().is_zero() {
        return Err(Error::DomainViolation("stirling_lgamma needs Re(z) > 0".into()));
    }
    let p = z.prec();
    let half_ln_2pi = Float::with_val(p, Float::with_val(p, Constant::Pi) * 2u32).ln() / 2u32;
    let r = &(&z.add_f64(-0.5) * &z.ln()) - z;
    Ok(r.add_real(&half_ln_2pi))
}

/// `prod Gamma(num) / prod Gamma(den)` evaluated in log space.
///
/// Returns the value and `|log|` of it, which callers use to estimate the
/// bits lost in the final exponential. A pole in the denominator gives an
/// exact zero; a pole in the numerator is an error.
pub fn gamma_ratio(num: &[&BigComplex], den: &[&BigComplex]) -> Result<(BigComplex, f64)> {
    let p = num.iter().chain(den.iter()).map(|z| z.prec()).max().unwrap_or(super::precision::DEFAULT_BITS);
    for d in den {
        if d.as_nonpositive_integer().is_some() || d.near_nonpositive_integer(8).is_some() {
            return Ok((BigComplex::zero(p), 0.0));
        }
    }
    let mut l = BigComplex::zero(p);
    for n in num {
        l = &l + &log_gamma(n)?;
    }
    for d in den {
        l = &l - &log_gamma(d)?;
    }
    let size = l.abs_f64();
    Ok((l.exp(), size))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    const P: u32 = 256;

    fn c(re: f64, im: f64) -> BigComplex {
        BigComplex::from_f64(P, re, im)
    }

    #[test]
    fn bernoulli_values() {
        let t = build_stirling_coefficients(4);
        // B2 = 1/6, B4 = -1/30, B6 = 1/42, B8 = -1/30
        assert_eq!(t[0], Rational::from((1, 12)));
        assert_eq!(t[1], Rational::from((-1, 360)));
        assert_eq!(t[2], Rational::from((1, 1260)));
        assert_eq!(t[3], Rational::from((-1, 1680)));
    }

    #[test]
    fn log_gamma_examples() {
        assert!(log_gamma(&c(1.0, 0.0)).unwrap().abs_f64() < 1e-70);
        let half = log_gamma(&c(0.5, 0.0)).unwrap();
        let ln_sqrt_pi = Float::with_val(P, Constant::Pi).sqrt().ln();
        assert!(half.rel_diff(&BigComplex::from_float(ln_sqrt_pi)) < 1e-70);
        let five = log_gamma(&c(5.0, 0.0)).unwrap();
        assert!(five.rel_diff(&BigComplex::from_float(Float::with_val(P, 24).ln())) < 1e-70);
    }

    #[test]
    fn log_gamma_poles() {
        assert!(matches!(log_gamma(&c(0.0, 0.0)), Err(Error::PoleAtNonPositiveInteger(_))));
        assert!(matches!(log_gamma(&c(-3.0, 0.0)), Err(Error::PoleAtNonPositiveInteger(_))));
    }

    #[test]
    fn matches_mpfr_on_real_axis() {
        for &x in &[0.01, 0.3, 1.7, 9.25, 33.5, 250.125, 1e5 + 0.5, -0.5, -7.25, -40.5] {
            let ours = log_gamma(&c(x, 0.0)).unwrap();
            let (mpfr, _) = Float::with_val(P, x).ln_abs_gamma();
            let d = Float::with_val(P, ours.re() - &mpfr).abs().to_f64();
            assert!(d < 1e-65 * mpfr.to_f64().abs().max(1.0), "x = {x}: {d}");
        }
    }

    #[test]
    fn principal_branch_on_imaginary_direction() {
        // ln Gamma is continuous across the positive real axis and conjugate-symmetric.
        let a = log_gamma(&c(-2.5, 1e-20)).unwrap();
        let b = log_gamma(&c(-2.5, -1e-20)).unwrap();
        assert!((a.im().to_f64() + b.im().to_f64()).abs() < 1e-15);
        // Large imaginary part: compare with the Stirling leading term's branch.
        let z = c(0.5, 200.0);
        let l = log_gamma(&z).unwrap();
        let s = stirling_lgamma(&z, 1.0).unwrap();
        assert!((l.im().to_f64() - s.im().to_f64()).abs() < 1e-2);
    }

    #[test]
    fn reciprocal_gamma_examples() {
        assert!(reciprocal_gamma(&c(-2.0, 0.0)).is_zero());
        assert!(reciprocal_gamma(&c(1.0, 0.0)).rel_diff(&c(1.0, 0.0)) < 1e-70);
        assert!(reciprocal_gamma(&c(3.0, 0.0)).rel_diff(&c(0.5, 0.0)) < 1e-70);
    }

    #[test]
    fn pochhammer_examples() {
        assert_eq!(pochhammer(&c(1.0, 0.0), 6).to_f64_pair(), (720.0, 0.0));
        assert!(pochhammer(&c(-3.0, 0.0), 5).is_zero());
        // (-p)_n = (-1)^n p!/(p-n)!
        assert_eq!(pochhammer(&c(-5.0, 0.0), 3).to_f64_pair(), (-60.0, 0.0));
        assert_eq!(pochhammer(&c(-5.0, 0.0), 0).to_f64_pair(), (1.0, 0.0));
    }

    #[test]
    fn stirling_examples() {
        let rel = |x: f64| {
            let z = c(x, 0.0);
            let d = &stirling_lgamma(&z, DEFAULT_STIRLING_CUTOFF).unwrap() - &log_gamma(&z).unwrap();
            (d.exp() - c(1.0, 0.0)).abs_f64()
        };
        assert!(rel(100.0) < 1e-3);
        assert!(rel(1e6) < 1e-7);
        let seq: Vec<f64> = (2..=8).map(|k| rel(10f64.powi(k))).collect();
        assert!(seq.windows(2).all(|w| w[1] < w[0]), "{seq:?}");
        assert!(matches!(stirling_lgamma(&c(3.0, 0.0), DEFAULT_STIRLING_CUTOFF), Err(Error::BelowThreshold { .. })));
    }

    #[test]
    fn gamma_ratio_zero_on_denominator_pole() {
        let (v, _) = gamma_ratio(&[&c(2.5, 0.0)], &[&c(-1.0, 0.0)]).unwrap();
        assert!(v.is_zero());
        assert!(gamma_ratio(&[&c(-1.0, 0.0)], &[&c(2.0, 0.0)]).is_err());
        let (v, _) = gamma_ratio(&[&c(5.0, 0.0)], &[&c(3.0, 0.0)]).unwrap();
        assert!(v.rel_diff(&c(12.0, 0.0)) < 1e-70);
    }

    fn arb_z() -> impl Strategy<Value = (f64, f64)> {
        (0.05f64..40.0, -30.0f64..30.0)
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(100))]

        #[test]
        fn recurrence((x, y) in arb_z()) {
            let z = c(x, y);
            let lhs = log_gamma(&z.add_f64(1.0)).unwrap();
            let rhs = &log_gamma(&z).unwrap() + &z.ln();
            // Equal modulo 2 pi i only if the branch were wrong; principal branch gives equality.
            prop_assert!((&lhs - &rhs).abs_f64() < 1e-60 * lhs.abs_f64().max(1.0));
        }

        #[test]
        fn reciprocal_times_gamma((x, y) in arb_z()) {
            let z = c(x, y);
            let prod = &reciprocal_gamma(&z) * &log_gamma(&z).unwrap().exp();
            prop_assert!(prod.rel_diff(&c(1.0, 0.0)) < 1e-60);
        }

        #[test]
        fn reflection(x in -6.0f64..6.0, y in -3.0f64..3.0) {
            prop_assume!((x - x.round()).abs() > 1e-3 || y.abs() > 1e-3);
            let b = c(x, y);
            let one_minus = &c(1.0, 0.0) - &b;
            let g = &log_gamma(&b).unwrap().exp() * &log_gamma(&one_minus).unwrap().exp();
            let s = b.mul_real(&Float::with_val(P, Constant::Pi)).sin();
            let prod = (&g * &s).mul_real(&Float::with_val(P, Constant::Pi).recip());
            prop_assert!(prod.rel_diff(&c(1.0, 0.0)) < 1e-55);
        }

        #[test]
        fn pochhammer_splits(x in -5.0f64..5.0, y in -2.0f64..2.0, n in 0u64..12, m in 0u64..12) {
            let z = c(x, y);
            let lhs = &pochhammer(&z, n) * &pochhammer(&z.add_f64(n as f64), m);
            let rhs = pochhammer(&z, n + m);
            prop_assert!((&lhs - &rhs).abs_f64() <= 1e-60 * rhs.abs_f64().max(1e-300));
        }
    }
}
