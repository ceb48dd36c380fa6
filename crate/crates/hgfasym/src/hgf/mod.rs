//! Reference evaluation of the Gauss hypergeometric function.
//!
//! [`hgf_eval`] is the general entry point: it picks a convergent series
//! through a linear transformation of `z`, or falls back to Taylor
//! continuation of the differential equation. The quadratures in this module
//! are deliberately independent routes used to cross-check it.

mod continuation;
mod ode;
mod quad;
mod series;

pub use continuation::{euler_transform, hgf_eval, mixed_connection, pfaff_transform, MixedConnection};
pub use ode::{hgf_ode_residual, ode_residual_report, OdeResidual};
pub use quad::{hgf_quadrature_a, hgf_quadrature_loop, hgf_quadrature_loop_with, LoopContour, LoopVariant};
pub use series::hgf_series;

use rug::Float;

use crate::error::{Error, Result};
use crate::numerics::BigComplex;

/// Extra bits carried through every reference evaluation.
pub(crate) const GUARD_BITS: u32 = 32;

/// Side of the cut `[1, inf)` used when `z` lies on it.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum CutSide {
    /// Limit from `Im z > 0`, where `arg(1 - z) = -pi`.
    #[default]
    Upper,
    /// Limit from `Im z < 0`, where `arg(1 - z) = +pi`.
    Lower,
}

/// Parameters and argument of `2F1(a, b; c; z)`.
#[derive(Debug, Clone, PartialEq)]
pub struct HgfInput {
    pub a: BigComplex,
    pub b: BigComplex,
    pub c: BigComplex,
    pub z: BigComplex,
    /// Must be set when `z` is real and at least 1; `arg z` is then taken as 0.
    pub on_cut_arg_zero: bool,
    pub cut_side: CutSide,
}

impl HgfInput {
    /// Builds an input, setting `on_cut_arg_zero` automatically when `z` is on the cut.
    pub fn new(a: BigComplex, b: BigComplex, c: BigComplex, z: BigComplex) -> Self {
        let on_cut = is_on_cut(&z);
        HgfInput { a, b, c, z, on_cut_arg_zero: on_cut, cut_side: CutSide::Upper }
    }

    pub fn from_f64(prec: u32, a: f64, b: f64, c: f64, z: (f64, f64)) -> Self {
        HgfInput::new(
            BigComplex::real(prec, a),
            BigComplex::real(prec, b),
            BigComplex::real(prec, c),
            BigComplex::from_f64(prec, z.0, z.1),
        )
    }

    pub fn with_side(mut self, side: CutSide) -> Self {
        self.cut_side = side;
        self
    }

    pub fn on_cut(&self) -> bool {
        is_on_cut(&self.z)
    }

    pub fn validate(&self) -> Result<()> {
        for (name, v) in [("a", &self.a), ("b", &self.b), ("c", &self.c), ("z", &self.z)] {
            if !v.is_finite() {
                return Err(Error::InvalidInput(format!("{name} is not finite")));
            }
        }
        if self.on_cut() && !self.on_cut_arg_zero {
            return Err(Error::InvalidInput("z lies on the cut [1, inf): on_cut_arg_zero must be set".into()));
        }
        series::check_lower_parameter(&self.a, &self.b, &self.c)
    }

    /// `z` moved off the cut to the selected side by a negligible amount.
    pub(crate) fn effective_z(&self, bits: u32) -> BigComplex {
        if !self.on_cut() || self.z.re() == &1 {
            return self.z.clone();
        }
        let p = self.z.prec().max(bits + GUARD_BITS);
        let tiny = Float::with_val(p, Float::i_exp(1, -(2 * bits as i32) - 64));
        let im = match self.cut_side {
            CutSide::Upper => tiny,
            CutSide::Lower => -tiny,
        };
        BigComplex::new(Float::with_val(p, self.z.re()), im)
    }
}

fn is_on_cut(z: &BigComplex) -> bool {
    z.is_real() && z.re() >= &1
}

/// Route actually used to produce a value.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
pub enum Method {
    Series,
    PfaffContinuation,
    ConnectionFormula,
    /// Connection through `1/z` or `1/(1-z)`.
    ReciprocalConnection,
    TerminatingPolynomial,
    /// Value at `z = 1` from the gamma-function closed form.
    GaussSum,
    /// Taylor steps of the differential equation from a point inside the disk.
    TaylorContinuation,
    QuadratureA,
    QuadratureLoopB,
    QuadratureLoopC,
}

impl Method {
    pub fn tag(&self) -> &'static str {
        match self {
            Method::Series => "series",
            Method::PfaffContinuation => "pfaff",
            Method::ConnectionFormula => "connection",
            Method::ReciprocalConnection => "reciprocal-connection",
            Method::TerminatingPolynomial => "polynomial",
            Method::GaussSum => "gauss-sum",
            Method::TaylorContinuation => "taylor",
            Method::QuadratureA => "quadrature-a",
            Method::QuadratureLoopB => "quadrature-loop-b",
            Method::QuadratureLoopC => "quadrature-loop-c",
        }
    }
}

/// A value with the route that produced it and an error estimate.
#[derive(Debug, Clone)]
pub struct EvalOutcome {
    pub value: BigComplex,
    pub method: Method,
    pub est_rel_error: f64,
}
