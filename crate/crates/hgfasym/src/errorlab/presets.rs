use rug::Rational;

use super::{lambda_along_ray, z_axis, AeMethod, Oracle, SweepSpec};
use crate::asym_ac::AsymCase;
use crate::error::{Error, Result};
use crate::numerics::{BigComplex, Precision};

pub const PRESET_IDS: [&str; 9] = ["fig2a", "fig2b", "fig5a", "fig5b", "fig5c", "fig5d", "fig7a", "fig7b", "fig8"];

/// Magnitudes of `lambda` for the convergence study.
pub const FIG8_LAMBDAS: [f64; 5] = [50.0, 100.0, 200.0, 400.0, 800.0];

struct Base {
    label: &'static str,
    case: AsymCase,
    methods: Vec<AeMethod>,
    /// Two points for the convergence study.
    probe: [(f64, f64); 2],
}

fn q(n: i32, d: i32) -> Rational {
    Rational::from((n, d))
}

fn bases(bits: u32) -> Result<Vec<Base>> {
    let ac = |a, b, c, e, l| AsymCase::ac(bits, a, b, c, e, l);
    let ab = |a, b, c, e, l| AsymCase::ab(bits, a, b, c, e, l);
    let limited_full = vec![AeMethod::AcLimited, AeMethod::AcFull];
    Ok(vec![
        Base {
            label: "fig2a",
            case: ac(1.0, 1.0, 2.0, q(1, 2), (400.0, 200.0))?,
            methods: vec![AeMethod::AcLeading],
            probe: [(0.5, 0.0), (3.0, 0.0)],
        },
        Base {
            label: "fig2b",
            case: ac(1.0, 0.75, 2.0, q(1, 2), (400.0, 200.0))?,
            methods: vec![AeMethod::AcLeading],
            probe: [(0.5, 0.25), (3.0, 0.25)],
        },
        Base {
            label: "fig5a",
            case: ac(0.0, 2.0, 1.0, q(3, 2), (50.0, 75.0))?,
            methods: limited_full.clone(),
            probe: [(0.85, 0.0), (0.95, 0.0)],
        },
        Base {
            label: "fig5b",
            case: ac(0.0, -2.0, 1.0, q(2, 1), (100.0, 0.0))?,
            methods: limited_full.clone(),
            probe: [(0.7, 0.0), (0.9, 0.0)],
        },
        Base {
            label: "fig5c",
            case: ac(0.0, 2.5, 1.0, q(3, 2), (50.0, 0.0))?,
            methods: limited_full.clone(),
            probe: [(0.85, 0.0), (0.95, 0.0)],
        },
        Base {
            label: "fig5d",
            case: ac(0.0, -0.5, 1.0, q(2, 1), (100.0, 50.0))?,
            methods: limited_full,
            probe: [(0.7, 0.0), (0.9, 0.0)],
        },
        Base {
            label: "fig7a-eps1/2",
            case: ab(2.0, 1.0, 3.0, q(1, 2), (100.0, 0.0))?,
            methods: vec![AeMethod::AbAuto],
            probe: [(0.5, 0.0), (1.5, 0.0)],
        },
        Base {
            label: "fig7a-eps5/2",
            case: ab(2.0, 1.0, 3.0, q(5, 2), (100.0, 0.0))?,
            methods: vec![AeMethod::AbAuto],
            probe: [(0.5, 0.0), (1.5, 0.0)],
        },
        Base {
            label: "fig7b-eps1/2",
            case: ab(2.0 / 3.0, 4.0 / 3.0, 7.0 / 3.0, q(1, 2), (100.0, 50.0))?,
            methods: vec![AeMethod::AbAuto],
            probe: [(0.5, 0.0), (0.5, 0.5)],
        },
        Base {
            label: "fig7b-eps5/2",
            case: ab(2.0 / 3.0, 4.0 / 3.0, 7.0 / 3.0, q(5, 2), (100.0, 50.0))?,
            methods: vec![AeMethod::AbAuto],
            probe: [(0.5, 0.0), (0.5, 0.5)],
        },
    ])
}

/// Grid of one figure; `fig8` yields one spec per case, probing two `z` over [`FIG8_LAMBDAS`].
pub fn figure_preset(id: &str, prec: &Precision) -> Result<Vec<SweepSpec>> {
    let bits = prec.bits;
    let spec = |b: Base, z_grid: Vec<BigComplex>| SweepSpec {
        label: b.label.to_string(),
        lambda_grid: vec![b.case.lam.clone()],
        case: b.case,
        z_grid,
        methods: b.methods,
        oracle: Oracle::Series,
        prec: *prec,
    };
    // z in [0.05, 2] in steps of 0.05 without the excluded point 1
    let ab_axis = || z_axis(bits, 0.05, 2.0, 40, 0.0).into_iter().filter(|z| z.re() != &1).collect::<Vec<_>>();
    let all = bases(bits)?;
    if id == "fig8" {
        return Ok(all
            .into_iter()
            .map(|b| {
                let lambda_grid = lambda_along_ray(&b.case.lam, &FIG8_LAMBDAS);
                let z_grid = b.probe.iter().map(|(x, y)| BigComplex::from_f64(bits, *x, *y)).collect();
                SweepSpec {
                    label: b.label.to_string(),
                    lambda_grid,
                    case: b.case,
                    z_grid,
                    methods: b.methods,
                    oracle: Oracle::Series,
                    prec: *prec,
                }
            })
            .collect());
    }
    let grid = match id {
        "fig2a" => z_axis(bits, 0.0, 4.0, 81, 0.0),
        "fig2b" => z_axis(bits, 0.0, 4.0, 81, 0.25),
        "fig5a" | "fig5b" | "fig5c" | "fig5d" => z_axis(bits, 0.02, 0.98, 49, 0.0),
        "fig7a" | "fig7b" => ab_axis(),
        _ => return Err(Error::Config(format!("unknown preset '{id}' (expected one of {})", PRESET_IDS.join(", ")))),
    };
    let out = all.into_iter().filter(|b| b.label.starts_with(id)).map(|b| spec(b, grid.clone())).collect();
    Ok(out)
}
