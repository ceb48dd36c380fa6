use rug::{Integer, Rational};
use serde::Deserialize;

use super::{lambda_along_ray, z_axis, AeMethod, Oracle, SweepSpec};
use crate::asym_ac::AsymCase;
use crate::error::{Error, Result};
use crate::numerics::{BigComplex, Precision, DEFAULT_BITS};

/// A real number or a `[re, im]` pair.
#[derive(Debug, Clone, Copy, PartialEq, Deserialize)]
#[serde(untagged)]
pub enum ComplexValue {
    Real(f64),
    Pair([f64; 2]),
}

impl ComplexValue {
    fn to_big(self, bits: u32) -> BigComplex {
        match self {
            ComplexValue::Real(x) => BigComplex::real(bits, x),
            ComplexValue::Pair([x, y]) => BigComplex::from_f64(bits, x, y),
        }
    }
}

/// A rate written as an integer, a decimal, or a string such as `"3/2"`.
#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(untagged)]
pub enum RateValue {
    Int(i64),
    Text(String),
    Float(f64),
}

impl RateValue {
    fn to_rational(&self) -> Result<Rational> {
        match self {
            RateValue::Int(n) => Ok(Rational::from(*n)),
            RateValue::Text(s) => parse_rational(s),
            RateValue::Float(x) => parse_rational(&x.to_string()),
        }
    }
}

/// Sweep description read from a TOML file; every key is optional except the
/// parameters and rates, and unknown keys are rejected.
#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepConfig {
    #[serde(default = "default_label")]
    pub label: String,
    pub a: ComplexValue,
    pub b: ComplexValue,
    pub c: ComplexValue,
    pub rates: [RateValue; 3],
    pub lambda: ComplexValue,
    /// Moduli along the ray of `lambda`; defaults to `lambda` alone.
    pub lambda_magnitudes: Option<Vec<f64>>,
    /// Explicit `z` points; takes precedence over the axis keys.
    pub z: Option<Vec<ComplexValue>>,
    pub z_start: Option<f64>,
    pub z_stop: Option<f64>,
    pub z_count: Option<usize>,
    #[serde(default)]
    pub z_im: f64,
    pub methods: Vec<String>,
    #[serde(default = "default_oracle")]
    pub oracle: String,
    pub precision_bits: Option<u32>,
}

fn default_label() -> String {
    "custom".into()
}

fn default_oracle() -> String {
    "series".into()
}

impl SweepConfig {
    pub fn parse(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::Config(e.to_string()))
    }

    /// The sweep described by the file; `bits` overrides `precision_bits` when given.
    pub fn to_spec(&self, bits: Option<u32>) -> Result<SweepSpec> {
        let bits = bits.or(self.precision_bits).unwrap_or(DEFAULT_BITS);
        let prec = Precision::new(bits)?;
        let rates = (self.rates[0].to_rational()?, self.rates[1].to_rational()?, self.rates[2].to_rational()?);
        let lam = self.lambda.to_big(bits);
        let case = AsymCase::new(self.a.to_big(bits), self.b.to_big(bits), self.c.to_big(bits), rates, lam.clone())?;
        let lambda_grid = match &self.lambda_magnitudes {
            Some(m) => lambda_along_ray(&lam, m),
            None => vec![lam],
        };
        let z_grid = match (&self.z, self.z_start, self.z_stop, self.z_count) {
            (Some(points), ..) => points.iter().map(|p| p.to_big(bits)).collect(),
            (None, Some(s), Some(e), Some(n)) => z_axis(bits, s, e, n, self.z_im),
            _ => return Err(Error::Config("give either z = [...] or z_start, z_stop and z_count".into())),
        };
        let methods = self.methods.iter().map(|m| m.parse()).collect::<Result<Vec<AeMethod>>>()?;
        let oracle: Oracle = self.oracle.parse()?;
        let spec = SweepSpec { label: self.label.clone(), case, z_grid, lambda_grid, methods, oracle, prec };
        spec.validate().map_err(|e| match e {
            Error::Config(_) => e,
            other => Error::Config(other.to_string()),
        })?;
        Ok(spec)
    }
}

/// `"x"` or `"x,y"` as a complex number.
pub fn parse_complex(s: &str, bits: u32) -> Result<BigComplex> {
    let bad = || Error::Config(format!("cannot read '{s}' as a complex number (use re or re,im)"));
    let mut parts = s.split(',').map(str::trim);
    let re: f64 = parts.next().ok_or_else(bad)?.parse().map_err(|_| bad())?;
    let im: f64 = match parts.next() {
        Some(t) => t.parse().map_err(|_| bad())?,
        None => 0.0,
    };
    if parts.next().is_some() {
        return Err(bad());
    }
    Ok(BigComplex::from_f64(bits, re, im))
}

/// An integer, a fraction `n/d` or a plain decimal, read exactly.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    let bad = || Error::Config(format!("cannot read '{s}' as a rational number"));
    if s.contains('/') {
        return s.parse::<Rational>().map_err(|_| bad());
    }
    match s.split_once('.') {
        None => s.parse::<Integer>().map(Rational::from).map_err(|_| bad()),
        Some((whole, frac)) => {
            if frac.is_empty() || !frac.bytes().all(|b| b.is_ascii_digit()) {
                return Err(bad());
            }
            let digits: Integer = format!("{whole}{frac}").parse().map_err(|_| bad())?;
            let den = Integer::from(Integer::u_pow_u(10, frac.len() as u32));
            Ok(Rational::from((digits, den)))
        }
    }
}
