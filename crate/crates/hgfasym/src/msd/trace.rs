use std::fmt::Write as _;

use super::{phase_deriv, phase_eval, PhaseFunction, SaddleData};
use crate::error::{Error, Result};
use crate::numerics::BigComplex;

/// Why a branch of the trace ended.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TraceStop {
    ArcLength,
    /// `exp(lambda g)` fell below the working precision relative to the saddle.
    Negligible,
    /// Reached a singular point of the phase.
    Endpoint,
    CutContact,
}

/// Level curve `Im(lambda g) = Im(lambda g(t0))` through a simple saddle.
#[derive(Debug, Clone, PartialEq)]
pub struct SdTrace {
    pub t0: BigComplex,
    /// Vertices leaving `t0` along the first descent angle, `t0` excluded.
    pub forward: Vec<BigComplex>,
    /// Vertices along the opposite angle.
    pub backward: Vec<BigComplex>,
    pub forward_stop: TraceStop,
    pub backward_stop: TraceStop,
    /// Largest `|Im(lambda g) - Im(lambda g(t0))|` accepted at a vertex.
    pub tolerance: f64,
}

impl SdTrace {
    /// Vertices from the end of the backward branch through `t0` to the end of the forward one.
    pub fn polyline(&self) -> Vec<BigComplex> {
        let mut out: Vec<BigComplex> = self.backward.iter().rev().cloned().collect();
        out.push(self.t0.clone());
        out.extend(self.forward.iter().cloned());
        out
    }

    /// [`SdTrace::polyline`] closed by straight segments to `start` and `end`.
    pub fn closed_polyline(&self, start: &BigComplex, end: &BigComplex) -> Vec<BigComplex> {
        let mut out = vec![start.clone()];
        out.extend(self.polyline());
        out.push(end.clone());
        out
    }

    /// CSV with columns `idx,t_re,t_im,re_lg,im_lg`; backward vertices get negative indices.
    pub fn to_csv(&self, pf: &PhaseFunction, lam: &BigComplex) -> Result<String> {
        let mut s = String::from("idx,t_re,t_im,re_lg,im_lg\n");
        let start = -(self.backward.len() as i64);
        for (k, t) in self.polyline().iter().enumerate() {
            let v = &lam.with_prec(t.prec()) * &phase_eval(pf, t)?;
            let (tr, ti) = t.to_f64_pair();
            let (vr, vi) = v.to_f64_pair();
            writeln!(s, "{},{tr:e},{ti:e},{vr:e},{vi:e}", start + k as i64).expect("write to String");
        }
        Ok(s)
    }
}

fn direction(angle: f64, prec: u32) -> BigComplex {
    let clean = |x: f64| if x.abs() < 1e-15 { 0.0 } else { x };
    BigComplex::from_f64(prec, clean(angle.cos()), clean(angle.sin()))
}

/// Unit steepest-descent direction `-conj(phi')/|phi'|`.
fn descent(dphi: &BigComplex) -> Option<BigComplex> {
    let m = dphi.abs();
    if m.is_zero() {
        return None;
    }
    Some((-dphi.conj()).mul_real(&m.recip()))
}

struct Tracer<'a> {
    pf: &'a PhaseFunction,
    lam: BigComplex,
    target: f64,
    top: f64,
    tol: f64,
    negligible: f64,
    floor: f64,
    arclen: f64,
    step: f64,
}

enum StepFailure {
    Cut,
    Other,
}

impl Tracer<'_> {
    fn phi(&self, t: &BigComplex) -> Result<BigComplex> {
        Ok(&self.lam * &phase_eval(self.pf, t)?)
    }

    fn dphi(&self, t: &BigComplex) -> Result<BigComplex> {
        Ok(&self.lam * &phase_deriv(self.pf, t, 1)?)
    }

    fn dist_to_singularity(&self, t: &BigComplex) -> f64 {
        self.pf.singular_points(t.prec()).iter().map(|s| (t - s).abs_f64()).fold(f64::INFINITY, f64::min)
    }

    /// Newton steps orthogonal to the level set, starting from `pred`.
    fn correct(&self, from: &BigComplex, pred: BigComplex) -> std::result::Result<(BigComplex, f64), StepFailure> {
        let mut t = pred;
        for _ in 0..12 {
            if self.pf.segment_meets_cut(from, &t) {
                return Err(StepFailure::Cut);
            }
            let v = self.phi(&t).map_err(|_| StepFailure::Other)?;
            let dev = v.im().to_f64() - self.target;
            if dev.abs() <= self.tol {
                return Ok((t, v.re().to_f64()));
            }
            let d = self.dphi(&t).map_err(|_| StepFailure::Other)?;
            let Some(dir) = descent(&d) else { return Err(StepFailure::Other) };
            // Im(phi' * i * dir) = -|phi'|, so a shift s along i*dir changes Im(phi) by -s|phi'|.
            let shift = dev / d.abs_f64();
            t = &t + &dir.mul_i().mul_f64(shift);
        }
        Err(StepFailure::Other)
    }

    fn branch(&self, t0: &BigComplex, angle: f64) -> Result<(Vec<BigComplex>, TraceStop)> {
        let p = t0.prec();
        let mut pts = Vec::new();
        let mut t = t0.clone();
        let mut dir = direction(angle, p);
        let mut travelled = 0.0;
        let mut h = self.step;
        let mut prev_re = self.top;
        loop {
            if travelled >= self.arclen * (1.0 - 1e-12) {
                return Ok((pts, TraceStop::ArcLength));
            }
            let dist = self.dist_to_singularity(&t);
            if dist < self.floor {
                return Ok((pts, TraceStop::Endpoint));
            }
            if !pts.is_empty() {
                if let Some(d) = descent(&self.dphi(&t)?) {
                    dir = d;
                }
            }
            let h_eff = h.min(0.25 * dist).min(self.arclen - travelled);
            let pred = &t + &dir.mul_f64(h_eff);
            let failure = match self.correct(&t, pred) {
                Ok((tc, re)) if re < prev_re => {
                    travelled += (&tc - &t).abs_f64();
                    t = tc;
                    pts.push(t.clone());
                    prev_re = re;
                    h = (2.0 * h_eff).min(self.step);
                    if self.top - re > self.negligible {
                        return Ok((pts, TraceStop::Negligible));
                    }
                    continue;
                }
                Ok(_) => StepFailure::Other,
                Err(f) => f,
            };
            h = h_eff / 2.0;
            if h < self.floor {
                return match failure {
                    StepFailure::Cut => Ok((pts, TraceStop::CutContact)),
                    StepFailure::Other if dist < 1e-6 * self.arclen.max(1.0) => Ok((pts, TraceStop::Endpoint)),
                    StepFailure::Other => Err(Error::StallNearSingularity(format!("{t:.6}"))),
                };
            }
        }
    }
}

/// Traces the steepest-descent curve through a simple saddle in both directions.
///
/// Each step predicts along the unit descent direction and corrects with
/// Newton steps on `Im(lambda g)` orthogonal to it. Steps halve on failure
/// down to `1e-12 * arclen`.
pub fn sd_path_trace(
    pf: &PhaseFunction,
    saddle: &SaddleData,
    lam: &BigComplex,
    arclen: f64,
    step: f64,
) -> Result<SdTrace> {
    if saddle.order != 1 {
        return Err(Error::HigherOrderSaddle(saddle.order));
    }
    if !(step > 0.0 && arclen > 0.0 && step.is_finite() && arclen.is_finite()) {
        return Err(Error::InvalidInput("step and arclen must be positive".into()));
    }
    let t0 = &saddle.t0;
    let p = t0.prec();
    let lam = lam.with_prec(p);
    let v0 = &lam * &phase_eval(pf, t0)?;
    let tracer = Tracer {
        pf,
        target: v0.im().to_f64(),
        top: v0.re().to_f64(),
        tol: (-(p as f64) / 2.0).exp2() * v0.abs_f64().max(1.0),
        negligible: (p as f64 + 20.0) * std::f64::consts::LN_2,
        floor: 1e-12 * arclen,
        arclen,
        step,
        lam,
    };
    let (forward, forward_stop) = tracer.branch(t0, saddle.angles[0])?;
    let (backward, backward_stop) = tracer.branch(t0, saddle.angles[1])?;
    Ok(SdTrace { t0: t0.clone(), forward, backward, forward_stop, backward_stop, tolerance: tracer.tol })
}
