use crate::error::{Error, Result};

/// Default working precision in bits.
pub const DEFAULT_BITS: u32 = 256;

/// Smallest precision accepted anywhere in the crate.
pub const MIN_BITS: u32 = 64;

/// Working precision and the two stopping tolerances derived from it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Precision {
    pub bits: u32,
    /// Relative size of a series term below which summation stops.
    pub series_tail_tolerance: f64,
    /// Relative change between quadrature refinements accepted as converged.
    pub quadrature_tolerance: f64,
}

impl Precision {
    /// Tolerances default to `2^-(bits-8)` for series and `2^-(bits/2)` for quadrature.
    pub fn new(bits: u32) -> Result<Self> {
        if bits < MIN_BITS {
            return Err(Error::InvalidPrecision(format!("{bits} bits is below the minimum of {MIN_BITS}")));
        }
        Ok(Precision { bits, series_tail_tolerance: pow2_neg(bits - 8), quadrature_tolerance: pow2_neg(bits / 2) })
    }

    pub fn with_tolerances(bits: u32, series: f64, quadrature: f64) -> Result<Self> {
        let mut p = Self::new(bits)?;
        for (name, v) in [("series", series), ("quadrature", quadrature)] {
            if !(v > 0.0 && v.is_finite() && v < 1.0) {
                return Err(Error::InvalidPrecision(format!("{name} tolerance {v} must lie in (0, 1)")));
            }
        }
        // A tolerance finer than the working precision cannot be met.
        let floor = pow2_neg(bits);
        p.series_tail_tolerance = series.max(floor);
        p.quadrature_tolerance = quadrature.max(floor);
        Ok(p)
    }

    /// Same tolerances scaled to a different bit count.
    pub fn with_bits(&self, bits: u32) -> Self {
        let bits = bits.max(MIN_BITS);
        let scale = |tol: f64| -> f64 {
            let lost = -tol.log2() / self.bits as f64;
            pow2_neg((lost * bits as f64) as u32)
        };
        Precision {
            bits,
            series_tail_tolerance: scale(self.series_tail_tolerance),
            quadrature_tolerance: scale(self.quadrature_tolerance),
        }
    }

    /// Unit roundoff `2^-bits`.
    pub fn epsilon(&self) -> f64 {
        pow2_neg(self.bits)
    }
}

impl Default for Precision {
    fn default() -> Self {
        Precision::new(DEFAULT_BITS).expect("default precision is valid")
    }
}

/// `2^-n`, saturating at the smallest positive normal f64.
pub(crate) fn pow2_neg(n: u32) -> f64 {
    if n >= 1022 {
        f64::MIN_POSITIVE
    } else {
        (-(n as f64)).exp2()
    }
}
