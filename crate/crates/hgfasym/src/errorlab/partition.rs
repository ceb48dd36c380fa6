use rug::ops::Pow;
use rug::Rational;

use super::table::{format_float, Table};
use crate::error::{Error, Result};
use crate::lattice_gas::{
    holes_complement, partition_ae_dense, partition_ae_dilute, partition_ae_trapping, partition_bruteforce,
    partition_closed, zeta_variable, LatticeGasSystem, PartitionAe, RegimeGuards,
};
use crate::numerics::{BigComplex, Precision};

/// Which rows [`run_partition`] produces.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PartitionModes {
    /// Brute force runs only when `min(p, t)` is at most this.
    pub bruteforce_limit: u64,
    pub dilute: bool,
    pub trapping: bool,
    pub dense: bool,
    pub guards: RegimeGuards,
}

impl Default for PartitionModes {
    fn default() -> Self {
        PartitionModes {
            bruteforce_limit: 300,
            dilute: true,
            trapping: true,
            dense: true,
            guards: RegimeGuards::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PartitionRow {
    pub method: &'static str,
    pub value: Option<BigComplex>,
    /// `|value - closed| / |closed|`.
    pub dev_vs_closed: Option<f64>,
    pub dev_vs_bruteforce: Option<f64>,
    pub status: String,
}

/// Brute force, closed form and each expansion for `sys`, with relative deviations.
///
/// An overfull system is evaluated through its holes complement and rescaled;
/// every row then carries `complemented` in its status.
pub fn run_partition(sys: &LatticeGasSystem, modes: &PartitionModes, prec: &Precision) -> Result<Vec<PartitionRow>> {
    sys.validate()?;
    let bits = prec.bits;
    let (work, power) = if sys.free_slack().is_none() {
        let h = holes_complement(sys);
        (h.system, h.zeta_power)
    } else {
        (sys.clone(), 0)
    };
    let zeta = zeta_variable(sys);
    let scale_q = Rational::from((&zeta).pow(power as u32));
    let scale = BigComplex::from_rational(bits, &scale_q);
    let tag = |s: &str| if power > 0 { format!("{s};complemented") } else { s.to_string() };

    let mut rows = Vec::new();
    let small = work.p.min(work.t);
    let brute = if small <= modes.bruteforce_limit {
        partition_bruteforce(&work).map(|q| BigComplex::from_rational(bits, &(q * &scale_q)))
    } else {
        Err(Error::SizeGuard(small))
    };
    let closed = partition_closed(&work, prec).map(|v| &v * &scale);
    let mut push = |method: &'static str, r: Result<(BigComplex, String)>| {
        let row = match r {
            Ok((v, status)) => PartitionRow {
                method,
                dev_vs_closed: closed.as_ref().ok().map(|c| v.rel_diff(c)),
                dev_vs_bruteforce: brute.as_ref().ok().map(|b| v.rel_diff(b)),
                value: Some(v),
                status: tag(&status),
            },
            Err(e) => {
                PartitionRow { method, value: None, dev_vs_closed: None, dev_vs_bruteforce: None, status: tag(e.tag()) }
            }
        };
        rows.push(row);
    };
    push("bruteforce", brute.clone().map(|v| (v, "ok".into())));
    push("closed", closed.clone().map(|v| (v, "ok".into())));
    let ae = |r: Result<PartitionAe>| r.map(|a| (&a.value * &scale, a.warning.map_or("ok", |w| w.tag()).to_string()));
    if modes.dilute {
        push("dilute", ae(partition_ae_dilute(&work, prec, &modes.guards)));
    }
    if modes.trapping {
        push("trapping", ae(partition_ae_trapping(&work, prec, &modes.guards)));
    }
    if modes.dense {
        push("dense", ae(partition_ae_dense(&work, prec, &modes.guards)));
    }
    Ok(rows)
}

/// Rows of [`run_partition`] with the system in the header.
pub fn partition_table(sys: &LatticeGasSystem, rows: &[PartitionRow], prec: &Precision) -> Table {
    let mut t = Table::new(&["method", "value_re", "value_im", "dev_vs_closed", "dev_vs_bruteforce", "status"]);
    t.header("kind", "partition");
    t.header("system", &format!("N={} t={} p={} zeta={}", sys.n, sys.t, sys.p, zeta_variable(sys)));
    t.header("precision_bits", &prec.bits.to_string());
    if sys.free_slack().is_none() {
        let h = holes_complement(sys);
        t.header(
            "complement",
            &format!("N={} t={} p={}, Z = zeta^{} Z(complement)", h.system.n, h.system.t, h.system.p, h.zeta_power),
        );
    }
    let dev = |d: Option<f64>| d.map_or(String::new(), |x| format!("{x:e}"));
    for r in rows {
        let (re, im) = match &r.value {
            Some(v) => (format_float(v.re(), prec.bits), format_float(v.im(), prec.bits)),
            None => (String::new(), String::new()),
        };
        t.row(vec![r.method.to_string(), re, im, dev(r.dev_vs_closed), dev(r.dev_vs_bruteforce), r.status.clone()]);
    }
    t
}

#[cfg(test)]
mod tests {
    use super::*;

    fn prec() -> Precision {
        Precision::new(256).unwrap()
    }

    #[test]
    fn small_system() {
        let sys = LatticeGasSystem::with_zeta(10, 3, 2, Rational::from(2)).unwrap();
        let rows = run_partition(&sys, &PartitionModes::default(), &prec()).unwrap();
        let v = |m: &str| rows.iter().find(|r| r.method == m).unwrap().value.clone().unwrap();
        assert!(v("bruteforce").rel_diff(&BigComplex::real(256, 75.0)) < 1e-70);
        assert!(v("closed").rel_diff(&BigComplex::real(256, 75.0)) < 1e-70);
        assert_eq!(rows.len(), 5);
    }

    #[test]
    fn overfull_system_is_complemented() {
        let sys = LatticeGasSystem::with_zeta(10, 8, 7, Rational::from(2)).unwrap();
        let rows = run_partition(&sys, &PartitionModes::default(), &prec()).unwrap();
        assert!(rows.iter().all(|r| r.status.ends_with("complemented")));
        let b = rows[0].value.clone().unwrap();
        assert!(b.rel_diff(&BigComplex::real(256, 6400.0)) < 1e-70);
        let t = partition_table(&sys, &rows, &prec());
        assert!(t.header.iter().any(|(k, _)| k == "complement"));
    }

    #[test]
    fn dense_row_under_one_percent() {
        let sys = LatticeGasSystem::with_zeta(3000, 2000, 1000, Rational::from(2)).unwrap();
        let modes = PartitionModes { bruteforce_limit: 0, ..Default::default() };
        let rows = run_partition(&sys, &modes, &prec()).unwrap();
        let dense = rows.iter().find(|r| r.method == "dense").unwrap();
        assert_eq!(dense.status, "ok");
        assert!(dense.dev_vs_closed.unwrap() < 1e-2);
        assert_eq!(rows[0].status, "size-guard");
    }
}
