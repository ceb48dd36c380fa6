//! Error measurement: expansions against a reference over grids of `z` and `lambda`.

mod config;
mod partition;
mod presets;
mod selftest;
mod table;

pub use config::{parse_complex, parse_rational, SweepConfig};
pub use partition::{partition_table, run_partition, PartitionModes, PartitionRow};
pub use presets::{figure_preset, PRESET_IDS};
pub use selftest::{selftest, SelftestCheck};
pub use table::{format_float, Table};

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use rug::{Float, Rational};

use crate::asym_ab::{ae_ab_complex, ae_ab_dominant, ae_ab_negative};
use crate::asym_ac::{ae_ac_full, ae_ac_leading, ae_large_c_only, AeResult, AsymCase};
use crate::error::{Error, Result};
use crate::hgf::{hgf_eval, hgf_quadrature_a, CutSide, EvalOutcome, HgfInput};
use crate::msd::{sd_integrate, Amplitude, PhaseFunction};
use crate::numerics::{gamma_ratio, BigComplex, Precision};

/// `R = 100 |1 - ae/reference|`, in percent.
pub fn relative_error(ae: &BigComplex, reference: &BigComplex) -> Result<f64> {
    if reference.is_zero() {
        return Err(Error::ReferenceZero);
    }
    let q = ae / reference;
    Ok((&BigComplex::one(q.prec()) - &q).abs_f64() * 100.0)
}

/// Expansion evaluated in a sweep.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
pub enum AeMethod {
    LargeC,
    AcLeading,
    /// First term of the `eps > 1` expansion, without the pole/branch contribution.
    AcLimited,
    AcFull,
    AbDominant,
    AbComplex,
    AbNegative,
    /// Two saddles when both `z` and `lambda` are complex, otherwise the dominant one.
    AbAuto,
}

impl AeMethod {
    pub const ALL: [AeMethod; 8] = [
        AeMethod::LargeC,
        AeMethod::AcLeading,
        AeMethod::AcLimited,
        AeMethod::AcFull,
        AeMethod::AbDominant,
        AeMethod::AbComplex,
        AeMethod::AbNegative,
        AeMethod::AbAuto,
    ];

    pub fn tag(&self) -> &'static str {
        match self {
            AeMethod::LargeC => "large-c",
            AeMethod::AcLeading => "ac-leading",
            AeMethod::AcLimited => "ac-limited",
            AeMethod::AcFull => "ac-full",
            AeMethod::AbDominant => "ab-dominant",
            AeMethod::AbComplex => "ab-complex",
            AeMethod::AbNegative => "ab-negative",
            AeMethod::AbAuto => "ab-auto",
        }
    }

    pub fn evaluate(&self, case: &AsymCase, z: &BigComplex) -> Result<AeResult> {
        match self {
            AeMethod::LargeC => ae_large_c_only(case, z),
            AeMethod::AcLeading => ae_ac_leading(case, z),
            AeMethod::AcLimited => {
                let full = ae_ac_full(case, z)?;
                let first = full.terms[0].clone();
                Ok(AeResult { value: first.1.clone(), terms: vec![first], ..full })
            }
            AeMethod::AcFull => ae_ac_full(case, z),
            AeMethod::AbDominant => ae_ab_dominant(case, z),
            AeMethod::AbComplex => ae_ab_complex(case, z),
            AeMethod::AbNegative => ae_ab_negative(case, z),
            AeMethod::AbAuto => {
                if !z.im().is_zero() && !case.lam.im().is_zero() {
                    ae_ab_complex(case, z)
                } else {
                    ae_ab_dominant(case, z)
                }
            }
        }
    }
}

impl fmt::Display for AeMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

impl FromStr for AeMethod {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        AeMethod::ALL.into_iter().find(|m| m.tag() == s).ok_or_else(|| Error::Config(format!("unknown method '{s}'")))
    }
}

/// Reference used for the relative error.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
pub enum Oracle {
    /// [`hgf_eval`]: series with analytic continuation.
    Series,
    /// [`hgf_quadrature_a`]: the Euler integral.
    Quadrature,
    /// Euler integral along `[0, 1]` through [`sd_integrate`]; `(eps, 0, 1)` with `0 < eps < 1` only.
    SdIntegrate,
}

/// Largest estimated relative error accepted from a reference evaluation.
pub const REFERENCE_TOLERANCE: f64 = 1e-20;

impl Oracle {
    pub fn tag(&self) -> &'static str {
        match self {
            Oracle::Series => "series",
            Oracle::Quadrature => "quadrature",
            Oracle::SdIntegrate => "sd-integrate",
        }
    }

    /// Reference value of the function described by `case` at `z`.
    ///
    /// Real `z >= 1` is taken from `Im z < 0`, the side on which the
    /// principal-branch expansions live. A value whose own error estimate
    /// exceeds [`REFERENCE_TOLERANCE`] is refused.
    pub fn evaluate(&self, case: &AsymCase, z: &BigComplex, prec: &Precision) -> Result<BigComplex> {
        let input = case.hgf_input(z).with_side(CutSide::Lower);
        let checked = |o: EvalOutcome| {
            if o.est_rel_error.is_finite() && o.est_rel_error <= REFERENCE_TOLERANCE {
                Ok(o.value)
            } else {
                Err(Error::UnreliableReference(o.est_rel_error))
            }
        };
        match self {
            Oracle::Series => checked(hgf_eval(&input, prec)?),
            Oracle::Quadrature => checked(hgf_quadrature_a(&input, prec)?),
            Oracle::SdIntegrate => euler_by_msd(case, &input, prec),
        }
    }
}

impl FromStr for Oracle {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        [Oracle::Series, Oracle::Quadrature, Oracle::SdIntegrate]
            .into_iter()
            .find(|o| o.tag() == s)
            .ok_or_else(|| Error::Config(format!("unknown oracle '{s}'")))
    }
}

fn euler_by_msd(case: &AsymCase, input: &HgfInput, prec: &Precision) -> Result<BigComplex> {
    if !(case.eps1 > 0 && case.eps1 < 1 && case.eps2 == 0 && case.eps3 == 1) {
        return Err(Error::DomainViolation("sd-integrate oracle needs rates (eps, 0, 1) with 0 < eps < 1".into()));
    }
    let wp = prec.bits;
    let eps = Float::with_val(wp, &case.eps1);
    let pf = PhaseFunction::ac_small(eps)?;
    let amp = Amplitude::Euler {
        a: case.a0.with_prec(wp),
        b: case.b0.with_prec(wp),
        c: case.c0.with_prec(wp),
        z: input.z.with_prec(wp),
    };
    let path = [BigComplex::zero(wp), BigComplex::one(wp)];
    let integral = sd_integrate(&pf, &amp, &path, &case.lam.with_prec(wp), prec)?;
    let c_minus_a = &input.c - &input.a;
    let (pre, _) = gamma_ratio(&[&input.c], &[&input.a, &c_minus_a])?;
    Ok(&pre.with_prec(wp) * &integral)
}

/// `lambda` with modulus `m` on the ray of `base`, for each `m`.
pub fn lambda_along_ray(base: &BigComplex, magnitudes: &[f64]) -> Vec<BigComplex> {
    let unit = base.mul_real(&base.abs().recip());
    magnitudes.iter().map(|m| unit.mul_f64(*m)).collect()
}

/// `count` points from `start` to `stop` inclusive, all with imaginary part `im`.
///
/// The endpoints are read as the decimals they print as, so a grid such as
/// `0.05, 0.10, ..., 2.0` hits `1` exactly.
pub fn z_axis(prec: u32, start: f64, stop: f64, count: usize, im: f64) -> Vec<BigComplex> {
    let exact =
        |x: f64| parse_rational(&format!("{x:?}")).unwrap_or_else(|_| Rational::from_f64(x).unwrap_or_default());
    let (a, b) = (exact(start), exact(stop));
    let im = Float::with_val(prec, im);
    match count {
        0 => Vec::new(),
        1 => vec![BigComplex::new(Float::with_val(prec, &a), im)],
        _ => (0..count)
            .map(|k| {
                let n = (count - 1) as u64;
                let x = (Rational::from(&a * (n - k as u64)) + Rational::from(&b * k as u64)) / n;
                BigComplex::new(Float::with_val(prec, &x), im.clone())
            })
            .collect(),
    }
}

/// A grid of expansions to compare against one oracle.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepSpec {
    pub label: String,
    /// `case.lam` is replaced by each entry of `lambda_grid`.
    pub case: AsymCase,
    pub z_grid: Vec<BigComplex>,
    pub lambda_grid: Vec<BigComplex>,
    pub methods: Vec<AeMethod>,
    pub oracle: Oracle,
    pub prec: Precision,
}

impl SweepSpec {
    pub fn validate(&self) -> Result<()> {
        if self.z_grid.is_empty() || self.lambda_grid.is_empty() || self.methods.is_empty() {
            return Err(Error::Config(format!("sweep '{}' has an empty grid or no methods", self.label)));
        }
        for lam in &self.lambda_grid {
            AsymCase { lam: lam.clone(), ..self.case.clone() }.validate()?;
        }
        Ok(())
    }
}

/// Outcome for one `(z, lambda, method)`.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub label: String,
    pub z: BigComplex,
    pub lam: BigComplex,
    pub method: AeMethod,
    pub hgf: Option<BigComplex>,
    pub ae: Option<BigComplex>,
    pub rel_err_pct: Option<f64>,
    /// `ok`, a warning tag, or the tag of the error that stopped the row.
    pub status: String,
}

impl SweepRow {
    /// True when the row ended in an error rather than a value.
    pub fn is_hard_error(&self) -> bool {
        self.rel_err_pct.is_none()
    }
}

/// Every `(z, lambda, method)` of `spec`, z-major, then `lambda`, then method.
///
/// Points are evaluated in parallel; a failure only affects its own rows.
pub fn run_sweep(spec: &SweepSpec) -> Result<Vec<SweepRow>> {
    spec.validate()?;
    let bits = spec.prec.bits;
    let points: Vec<(BigComplex, BigComplex)> = spec
        .z_grid
        .iter()
        .flat_map(|z| spec.lambda_grid.iter().map(move |l| (z.with_prec(bits), l.with_prec(bits))))
        .collect();
    let rows: Vec<Vec<SweepRow>> = points
        .par_iter()
        .map(|(z, lam)| {
            let case = AsymCase {
                a0: spec.case.a0.with_prec(bits),
                b0: spec.case.b0.with_prec(bits),
                c0: spec.case.c0.with_prec(bits),
                lam: lam.clone(),
                ..spec.case.clone()
            };
            let reference = spec.oracle.evaluate(&case, z, &spec.prec);
            spec.methods
                .iter()
                .map(|m| {
                    let ae = m.evaluate(&case, z);
                    let row =
                        |hgf: Option<BigComplex>, ae: Option<BigComplex>, r: Option<f64>, status: String| SweepRow {
                            label: spec.label.clone(),
                            z: z.clone(),
                            lam: lam.clone(),
                            method: *m,
                            hgf,
                            ae,
                            rel_err_pct: r,
                            status,
                        };
                    match (&reference, ae) {
                        (Err(e), ae) => row(None, ae.ok().map(|a| a.value), None, format!("reference-{}", e.tag())),
                        (Ok(h), Err(e)) => row(Some(h.clone()), None, None, e.tag().to_string()),
                        (Ok(h), Ok(a)) => {
                            let status = a.warning.map_or("ok", |w| w.tag()).to_string();
                            match relative_error(&a.value, h) {
                                Ok(r) => row(Some(h.clone()), Some(a.value), Some(r), status),
                                Err(e) => row(Some(h.clone()), Some(a.value), None, e.tag().to_string()),
                            }
                        }
                    }
                })
                .collect()
        })
        .collect();
    Ok(rows.into_iter().flatten().collect())
}

/// Rows of one or more sweeps as a table with a configuration header.
pub fn sweep_table(specs: &[SweepSpec], rows: &[SweepRow], tolerance: Option<f64>) -> Table {
    let bits = specs.first().map_or(crate::numerics::DEFAULT_BITS, |s| s.prec.bits);
    let mut table = Table::new(&[
        "case",
        "z_re",
        "z_im",
        "lam_re",
        "lam_im",
        "method",
        "hgf_re",
        "hgf_im",
        "ae_re",
        "ae_im",
        "rel_err_pct",
        "status",
    ]);
    table.header("kind", "sweep");
    table.header("precision_bits", &bits.to_string());
    table.header("digits", &table::digits_for(bits).to_string());
    for s in specs {
        let (a, b, c) = (&s.case.a0, &s.case.b0, &s.case.c0);
        table.header(
            &format!("case.{}", s.label),
            &format!(
                "a0={} b0={} c0={} rates=({}, {}, {}) oracle={} methods={} z_points={} lambda_points={}",
                short(a),
                short(b),
                short(c),
                s.case.eps1,
                s.case.eps2,
                s.case.eps3,
                s.oracle.tag(),
                s.methods.iter().map(|m| m.tag()).collect::<Vec<_>>().join("/"),
                s.z_grid.len(),
                s.lambda_grid.len()
            ),
        );
    }
    if let Some(t) = tolerance {
        table.header("tolerance", &format!("{t:e}"));
    }
    let cplx = |v: &Option<BigComplex>| match v {
        Some(v) => (format_float(v.re(), bits), format_float(v.im(), bits)),
        None => (String::new(), String::new()),
    };
    for r in rows {
        let (hr, hi) = cplx(&r.hgf);
        let (ar, ai) = cplx(&r.ae);
        let mut status = r.status.clone();
        if let (Some(t), Some(e)) = (tolerance, r.rel_err_pct) {
            if e > 100.0 * t {
                status.push_str(";above-tolerance");
            }
        }
        table.row(vec![
            r.label.clone(),
            format_float(r.z.re(), bits),
            format_float(r.z.im(), bits),
            format_float(r.lam.re(), bits),
            format_float(r.lam.im(), bits),
            r.method.tag().to_string(),
            hr,
            hi,
            ar,
            ai,
            r.rel_err_pct.map_or(String::new(), |e| format!("{e:e}")),
            status,
        ]);
    }
    table
}

fn short(v: &BigComplex) -> String {
    let (x, y) = v.to_f64_pair();
    if y == 0.0 {
        format!("{x}")
    } else {
        format!("{x}{y:+}i")
    }
}
