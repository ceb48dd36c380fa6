use rug::{Float, Rational};

use super::{relative_error, AeMethod, Oracle};
use crate::asym_ab::{saddle_points_ab, tpm_identity_gap};
use crate::asym_ac::AsymCase;
use crate::error::Result;
use crate::hgf::{hgf_eval, HgfInput};
use crate::lattice_gas::{partition_bruteforce, partition_closed_exact, LatticeGasSystem};
use crate::numerics::{BigComplex, Precision};

/// Outcome of one quick check.
#[derive(Debug, Clone, PartialEq)]
pub struct SelftestCheck {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

fn check(name: &'static str, r: Result<(bool, String)>) -> SelftestCheck {
    match r {
        Ok((passed, detail)) => SelftestCheck { name, passed, detail },
        Err(e) => SelftestCheck { name, passed: false, detail: e.to_string() },
    }
}

/// A handful of fast end-to-end checks at the given precision.
pub fn selftest(prec: &Precision) -> Vec<SelftestCheck> {
    let bits = prec.bits;
    vec![
        check(
            "log-series",
            (|| {
                // F(1, 1; 2; z) = -ln(1 - z)/z
                let z = BigComplex::from_f64(bits, 0.3, 0.4);
                let v = hgf_eval(&HgfInput::from_f64(bits, 1.0, 1.0, 2.0, (0.3, 0.4)), prec)?.value;
                let expect = &(-(&BigComplex::one(bits) - &z).ln()) / &z;
                let d = v.rel_diff(&expect);
                Ok((d < prec.epsilon() * 1e6, format!("rel diff {d:e}")))
            })(),
        ),
        check(
            "partition-75",
            (|| {
                let s = LatticeGasSystem::with_zeta(10, 3, 2, Rational::from(2))?;
                let b = partition_bruteforce(&s)?;
                let c = partition_closed_exact(&s)?;
                Ok((b == 75 && c == 75, format!("brute {b}, closed {c}")))
            })(),
        ),
        check(
            "vieta",
            (|| {
                let z = BigComplex::from_f64(bits, 0.5, 0.5);
                let s = saddle_points_ab(&Float::with_val(bits, 0.5), &z)?;
                let prod = &s.t_plus * &s.t_minus;
                let d = prod.rel_diff(&(-&z.recip()).mul_f64(0.5));
                Ok((d < 1e-30, format!("product rel diff {d:e}")))
            })(),
        ),
        check(
            "saddle-identity",
            (|| {
                let case = AsymCase::ab(bits, 2.0, 1.0, 3.0, Rational::from((1, 2)), (100.0, 0.0))?;
                let gap = tpm_identity_gap(&case, &BigComplex::real(bits, 0.4))?;
                Ok((gap < 1e-30, format!("gap {gap:e}")))
            })(),
        ),
        check(
            "fig2a-z1",
            (|| {
                let case = AsymCase::ac(bits, 1.0, 1.0, 2.0, Rational::from((1, 2)), (400.0, 200.0))?;
                let z = BigComplex::one(bits);
                let h = Oracle::Series.evaluate(&case, &z, prec)?;
                let r = relative_error(&AeMethod::AcLeading.evaluate(&case, &z)?.value, &h)?;
                Ok((r < 1.0, format!("R = {r:.4}%")))
            })(),
        ),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn all_pass() {
        for c in selftest(&Precision::new(256).unwrap()) {
            assert!(c.passed, "{}: {}", c.name, c.detail);
        }
    }
}
