//! Numerical integration at arbitrary precision.
//!
//! Two families: a tanh-sinh rule on `[0, 1]` whose nodes carry `ln t` and
//! `ln(1-t)` so that endpoint singularities are evaluated in log space, and
//! an adaptive composite Gauss–Legendre rule along complex line segments.

use rug::float::Constant;
use rug::Float;

use crate::error::{Error, Result};
use crate::numerics::BigComplex;

/// Largest abscissa parameter visited by the tanh-sinh rule.
const S_MAX: f64 = 14.0;

/// A tanh-sinh node on `(0, 1)`.
#[derive(Debug, Clone)]
pub struct UnitNode {
    pub t: Float,
    pub one_minus_t: Float,
    pub ln_t: Float,
    pub ln_one_minus_t: Float,
    /// `ln` of the quadrature weight, step size excluded.
    pub ln_weight: Float,
}

fn softplus(x: &Float) -> Float {
    let p = x.prec();
    if x.is_sign_positive() {
        let e = Float::with_val(p, -x).exp();
        Float::with_val(p, x + e.ln_1p())
    } else {
        Float::with_val(p, x.exp_ref()).ln_1p()
    }
}

impl UnitNode {
    fn at(s: &Float) -> UnitNode {
        let p = s.prec();
        let pi = Float::with_val(p, Constant::Pi);
        let (sh, ch) = s.clone().sinh_cosh(Float::new(p));
        let u = Float::with_val(p, &pi * &sh);
        let neg_u = Float::with_val(p, -&u);
        let ln_t = -softplus(&neg_u);
        let ln_one_minus_t = -softplus(&u);
        let t = Float::with_val(p, ln_t.exp_ref());
        let one_minus_t = Float::with_val(p, ln_one_minus_t.exp_ref());
        let ln_weight = Float::with_val(p, &pi * &ch).ln() + &ln_t + &ln_one_minus_t;
        UnitNode { t, one_minus_t, ln_t, ln_one_minus_t, ln_weight }
    }
}

/// Outcome of an adaptive quadrature.
#[derive(Debug, Clone)]
pub struct QuadOutcome {
    pub value: BigComplex,
    /// Relative change between the last two refinement levels.
    pub est_rel_error: f64,
    pub evaluations: usize,
}

/// Tanh-sinh quadrature of `int_0^1 exp(L(t)) dt` where the closure returns `L(t)`.
///
/// The closure may return `None` where the integrand vanishes exactly.
pub fn tanh_sinh_unit_log<F>(bits: u32, tol: f64, mut log_integrand: F) -> Result<QuadOutcome>
where
    F: FnMut(&UnitNode) -> Result<Option<BigComplex>>,
{
    let wp = bits + 16;
    let mut term_at = |s: f64| -> Result<Option<BigComplex>> {
        let node = UnitNode::at(&Float::with_val(wp, s));
        if node.t.is_zero() || node.one_minus_t.is_zero() {
            return Ok(None);
        }
        match log_integrand(&node)? {
            None => Ok(None),
            Some(l) => {
                let v = l.add_real(&node.ln_weight).exp();
                if !v.is_finite() {
                    return Err(Error::PathSingularity(format!("non-finite integrand at t = {}", node.t.to_f64())));
                }
                Ok(Some(v))
            }
        }
    };
    integrate_levels(wp, bits, tol, &mut term_at)
}

/// Tanh-sinh quadrature of a smooth or endpoint-singular `f` over `[lo, hi]`.
pub fn tanh_sinh_interval<F>(bits: u32, tol: f64, lo: &Float, hi: &Float, mut f: F) -> Result<QuadOutcome>
where
    F: FnMut(&Float) -> Result<BigComplex>,
{
    let wp = bits + 16;
    let width = Float::with_val(wp, hi - lo);
    let ln_width = Float::with_val(wp, width.abs_ref()).ln();
    tanh_sinh_unit_log(bits, tol, |node| {
        let x = Float::with_val(wp, lo + Float::with_val(wp, &width * &node.t));
        let v = f(&x)?;
        if v.is_zero() {
            return Ok(None);
        }
        let mut l = v.ln();
        l = l.add_real(&ln_width);
        Ok(Some(l))
    })
}

fn integrate_levels<F>(wp: u32, bits: u32, tol: f64, term_at: &mut F) -> Result<QuadOutcome>
where
    F: FnMut(f64) -> Result<Option<BigComplex>>,
{
    let negligible = -(bits as f64) - 24.0;
    let mut evaluations = 0usize;
    let h0 = 0.5f64;

    // Level 0: all multiples of h0.
    let mut raw = BigComplex::zero(wp);
    let mut scale = f64::NEG_INFINITY;
    if let Some(v) = term_at(0.0)? {
        scale = v.log2_abs();
        raw = &raw + &v;
    }
    evaluations += 1;
    for dir in [1.0f64, -1.0] {
        let mut small = 0;
        let mut j = 1;
        loop {
            let s = dir * j as f64 * h0;
            if s.abs() > S_MAX {
                break;
            }
            evaluations += 1;
            match term_at(s)? {
                Some(v) => {
                    let lv = v.log2_abs();
                    scale = scale.max(lv);
                    raw = &raw + &v;
                    if lv < scale + negligible {
                        small += 1;
                    } else {
                        small = 0;
                    }
                }
                None => small += 1,
            }
            if small >= 3 {
                break;
            }
            j += 1;
        }
    }
    let mut h = h0;
    let mut estimate = raw.mul_f64(h);
    let mut change = f64::INFINITY;

    for level in 1..=12u32 {
        h /= 2.0;
        let mut add = BigComplex::zero(wp);
        for dir in [1.0f64, -1.0] {
            let mut small = 0;
            let mut j = 1u64;
            loop {
                let s = dir * j as f64 * h;
                if s.abs() > S_MAX {
                    break;
                }
                evaluations += 1;
                match term_at(s)? {
                    Some(v) => {
                        let lv = v.log2_abs();
                        scale = scale.max(lv);
                        add = &add + &v;
                        if lv < scale + negligible {
                            small += 1;
                        } else {
                            small = 0;
                        }
                    }
                    None => small += 1,
                }
                if small >= 3 {
                    break;
                }
                j += 2;
            }
        }
        raw = &raw + &add;
        let next = raw.mul_f64(h);
        change = if next.is_zero() { 0.0 } else { next.rel_diff(&estimate) };
        estimate = next;
        if level >= 3 && change <= tol {
            break;
        }
    }
    Ok(QuadOutcome { value: estimate.with_prec(bits), est_rel_error: change, evaluations })
}

/// Gauss–Legendre nodes and weights on `[-1, 1]`, ascending in the node.
pub fn gauss_legendre(n: usize, bits: u32) -> Vec<(Float, Float)> {
    let wp = bits + 16;
    let mut out: Vec<(Float, Float)> = Vec::with_capacity(n);
    let legendre = |x: &Float| -> (Float, Float) {
        let mut p0 = Float::with_val(wp, 1);
        let mut p1 = x.clone();
        for k in 2..=n {
            let kf = k as u32;
            let a = Float::with_val(wp, x * &p1) * (2 * kf - 1);
            let b = Float::with_val(wp, &p0 * (kf - 1));
            let p2 = Float::with_val(wp, a - b) / kf;
            p0 = p1;
            p1 = p2;
        }
        // P_n'(x) = n (x P_n - P_{n-1}) / (x^2 - 1)
        let num = Float::with_val(wp, Float::with_val(wp, x * &p1) - &p0) * n as u32;
        let den = Float::with_val(wp, x.square_ref()) - 1u32;
        (p1, num / den)
    };
    for i in 1..=n.div_ceil(2) {
        let guess = (std::f64::consts::PI * (i as f64 - 0.25) / (n as f64 + 0.5)).cos();
        let mut x = Float::with_val(wp, guess);
        for _ in 0..100 {
            let (pn, dpn) = legendre(&x);
            let dx = Float::with_val(wp, &pn / &dpn);
            x -= &dx;
            if dx.is_zero() || dx.get_exp().is_none_or(|e| e < -(wp as i32) + 4) {
                break;
            }
        }
        let (_, dpn) = legendre(&x);
        let one_minus = Float::with_val(wp, 1u32 - Float::with_val(wp, x.square_ref()));
        let w = Float::with_val(wp, 2u32 / (one_minus * Float::with_val(wp, dpn.square_ref())));
        out.push((x, w));
    }
    let mut nodes: Vec<(Float, Float)> = Vec::with_capacity(n);
    for (x, w) in out.iter() {
        nodes.push((Float::with_val(bits, x), Float::with_val(bits, w)));
        if !(n % 2 == 1 && x.is_zero()) {
            nodes.push((Float::with_val(bits, -x), Float::with_val(bits, w)));
        }
    }
    nodes.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
    nodes.truncate(n);
    nodes
}

/// Adaptive composite Gauss–Legendre quadrature of `f` along the segment `a -> b`.
///
/// `scale` is a magnitude used for the absolute acceptance threshold
/// `tol * scale`; pass the best available estimate of the full integral.
pub fn gauss_segment<F>(
    a: &BigComplex,
    b: &BigComplex,
    bits: u32,
    tol: f64,
    scale: f64,
    rule: &[(Float, Float)],
    f: &mut F,
) -> Result<BigComplex>
where
    F: FnMut(&BigComplex) -> Result<BigComplex>,
{
    let mut apply = |lo: &BigComplex, hi: &BigComplex| -> Result<BigComplex> {
        let half = (hi - lo).mul_f64(0.5);
        let mid = (hi + lo).mul_f64(0.5);
        let mut acc = BigComplex::zero(bits);
        for (x, w) in rule {
            let t = &mid + &half.mul_real(x);
            let v = f(&t)?;
            if !v.is_finite() {
                return Err(Error::PathSingularity(format!("non-finite integrand at {t:.6}")));
            }
            acc = &acc + &v.mul_real(w);
        }
        Ok(&acc * &half)
    };
    let total_len = (b - a).abs_f64();
    let mut result = BigComplex::zero(bits);
    let whole = apply(a, b)?;
    let mut stack = vec![(a.clone(), b.clone(), whole, 0u32)];
    let abs_tol = tol * scale.max(f64::MIN_POSITIVE);
    let resolution = (-(bits as f64) + 16.0).exp2();
    while let Some((lo, hi, q, depth)) = stack.pop() {
        let mid = (&lo + &hi).mul_f64(0.5);
        let left = apply(&lo, &mid)?;
        let right = apply(&mid, &hi)?;
        let refined = &left + &right;
        let err = (&refined - &q).abs_f64();
        let len = (&hi - &lo).abs_f64();
        let local_tol = abs_tol * (len / total_len).max(1e-3);
        // Halving further would put nodes within rounding distance of the ends.
        let unresolvable = len <= total_len * resolution;
        if err <= local_tol || unresolvable || depth >= 400 {
            if depth >= 400 && err > local_tol {
                return Err(Error::PathSingularity("adaptive subdivision did not converge".into()));
            }
            result = &result + &refined;
        } else {
            stack.push((mid.clone(), hi, right, depth + 1));
            stack.push((lo, mid, left, depth + 1));
        }
    }
    Ok(result)
}
