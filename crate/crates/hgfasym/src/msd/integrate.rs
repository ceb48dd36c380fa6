use super::{phase_eval, Amplitude, PhaseFunction};
use crate::error::{Error, Result};
use crate::numerics::{BigComplex, Precision};
use crate::quadrature::{gauss_legendre, gauss_segment};

/// `int f(t) exp(lambda g(t)) dt` along a polyline by adaptive Gauss–Legendre.
///
/// The exponential is taken relative to the vertex with the largest
/// `Re(lambda g)`, so the integrand stays representable for large `lambda`.
/// Vertices may sit at singular points of the phase (open endpoints); the
/// quadrature nodes never touch them.
pub fn sd_integrate(
    pf: &PhaseFunction,
    amp: &Amplitude,
    path: &[BigComplex],
    lam: &BigComplex,
    prec: &Precision,
) -> Result<BigComplex> {
    if path.len() < 2 {
        return Err(Error::InvalidInput("path needs at least two vertices".into()));
    }
    let wp = prec.bits + 32;
    let lam = lam.with_prec(wp);
    let path: Vec<BigComplex> = path.iter().map(|t| t.with_prec(wp)).collect();
    for w in path.windows(2) {
        if pf.segment_meets_cut(&w[0], &w[1]) && !touches_only_at_ends(pf, &w[0], &w[1]) {
            return Err(Error::PathSingularity(format!("segment {:.6} -> {:.6} meets a cut", w[0], w[1])));
        }
    }
    let mut reference: Option<BigComplex> = None;
    for t in &path {
        if let Ok(g) = phase_eval(pf, t) {
            let v = &lam * &g;
            if reference.as_ref().is_none_or(|r| v.re() > r.re()) {
                reference = Some(v);
            }
        }
    }
    let reference = match reference {
        Some(r) => r,
        None => {
            // All vertices singular: use the midpoint of the first segment.
            let m = (&path[0] + &path[1]).mul_f64(0.5);
            &lam * &phase_eval(pf, &m).map_err(|e| Error::PathSingularity(e.to_string()))?
        }
    };
    let mut integrand = |t: &BigComplex| -> Result<BigComplex> {
        let g = phase_eval(pf, t).map_err(|e| Error::PathSingularity(format!("{e} at {t:.6}")))?;
        let f = amp.eval(pf, t).map_err(|e| Error::PathSingularity(format!("{e} at {t:.6}")))?;
        Ok(&f * &(&(&lam * &g) - &reference).exp())
    };
    let coarse_rule = gauss_legendre(12, wp);
    let total_len: f64 = path.windows(2).map(|w| (&w[1] - &w[0]).abs_f64()).sum();
    let mut rough = BigComplex::zero(wp);
    for w in path.windows(2) {
        let part = gauss_segment(&w[0], &w[1], wp, 1e-6, total_len, &coarse_rule, &mut integrand)?;
        rough = &rough + &part;
    }
    let rule = gauss_legendre(20 + (prec.bits / 16) as usize, wp);
    let scale = rough.abs_f64().max(f64::MIN_POSITIVE);
    let tol = prec.quadrature_tolerance.min(1e-20);
    let mut acc = BigComplex::zero(wp);
    for w in path.windows(2) {
        let part = gauss_segment(&w[0], &w[1], wp, tol, scale, &rule, &mut integrand)?;
        acc = &acc + &part;
    }
    Ok((&acc * &reference.exp()).with_prec(prec.bits))
}

/// A segment that starts or ends exactly at the endpoint of a cut but is otherwise clear.
fn touches_only_at_ends(pf: &PhaseFunction, a: &BigComplex, b: &BigComplex) -> bool {
    let singular = pf.singular_points(a.prec());
    let at = |t: &BigComplex| singular.iter().any(|s| (t - s).is_zero());
    if !(at(a) || at(b)) {
        return false;
    }
    let shrink = |from: &BigComplex, to: &BigComplex| from + &(to - from).mul_f64(1e-9);
    let a2 = if at(a) { shrink(a, b) } else { a.clone() };
    let b2 = if at(b) { shrink(b, a) } else { b.clone() };
    !pf.segment_meets_cut(&a2, &b2)
}
