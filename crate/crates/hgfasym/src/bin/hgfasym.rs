//! Command-line front end: single evaluations, expansion sweeps, figure data and partition functions.

use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use rug::Rational;

use hgfasym::asym_ac::AsymCase;
use hgfasym::errorlab::{
    figure_preset, format_float, parse_complex, parse_rational, partition_table, run_partition, run_sweep, selftest,
    sweep_table, AeMethod, PartitionModes, SweepConfig, Table,
};
use hgfasym::hgf::{hgf_eval, hgf_quadrature_a, hgf_quadrature_loop, hgf_series, CutSide, HgfInput, LoopVariant};
use hgfasym::lattice_gas::LatticeGasSystem;
use hgfasym::{Error, Precision};

#[derive(Parser)]
#[command(name = "hgfasym", version, about = "Gauss hypergeometric function with two large parameters")]
struct Cli {
    /// Working precision in bits.
    #[arg(long, global = true, env = "HGFASYM_PRECISION_BITS", default_value_t = 256)]
    precision_bits: u32,
    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    format: Format,
    /// Output file; standard output when absent.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Relative error above which sweep rows are flagged.
    #[arg(long, global = true)]
    tolerance: Option<f64>,
    /// Exit with status 2 when any row ends in an error.
    #[arg(long, global = true)]
    strict: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum Side {
    Upper,
    Lower,
}

#[derive(Clone, Copy, ValueEnum)]
enum EvalMethod {
    Auto,
    Series,
    QuadA,
    LoopB,
    LoopC,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate F(a, b; c; z); complex arguments are written re,im.
    Eval {
        #[arg(long, allow_hyphen_values = true)]
        a: String,
        #[arg(long, allow_hyphen_values = true)]
        b: String,
        #[arg(long, allow_hyphen_values = true)]
        c: String,
        #[arg(long, allow_hyphen_values = true)]
        z: String,
        /// Side of the cut [1, inf) for real z >= 1.
        #[arg(long, value_enum, default_value_t = Side::Upper)]
        side: Side,
        #[arg(long, value_enum, default_value_t = EvalMethod::Auto)]
        method: EvalMethod,
    },
    /// Evaluate one expansion of F(a + e1 lambda, b + e2 lambda; c + e3 lambda; z).
    Ae {
        #[arg(long, allow_hyphen_values = true)]
        a: String,
        #[arg(long, allow_hyphen_values = true)]
        b: String,
        #[arg(long, allow_hyphen_values = true)]
        c: String,
        /// Growth rates e1,e2,e3, e.g. 1/2,0,1.
        #[arg(long, allow_hyphen_values = true)]
        rates: String,
        #[arg(long)]
        lambda: String,
        #[arg(long, allow_hyphen_values = true)]
        z: String,
        /// One of large-c, ac-leading, ac-limited, ac-full, ab-dominant, ab-complex, ab-negative, ab-auto.
        #[arg(long)]
        method: String,
    },
    /// Run a sweep described by a TOML file.
    Sweep {
        #[arg(long)]
        config: PathBuf,
    },
    /// Partition function of the lattice gas with traps.
    Partition {
        #[arg(long)]
        n: u64,
        #[arg(long)]
        t: u64,
        #[arg(long)]
        p: u64,
        /// zeta directly, e.g. 2 or 1/2.
        #[arg(long, conflicts_with_all = ["p_on", "p_off"])]
        zeta: Option<String>,
        #[arg(long, requires = "p_off")]
        p_on: Option<String>,
        #[arg(long, requires = "p_on")]
        p_off: Option<String>,
        /// Largest min(p, t) for the brute-force sum.
        #[arg(long, default_value_t = 300)]
        bruteforce_limit: u64,
    },
    /// Data behind one figure: fig2a, fig2b, fig5a-d, fig7a, fig7b or fig8.
    Figure {
        #[arg(long)]
        preset: String,
    },
    /// Quick end-to-end checks.
    Selftest,
}

enum Failure {
    Usage(String),
    Numerical(String),
    Config(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Usage(_) => 1,
            Failure::Numerical(_) => 2,
            Failure::Config(_) => 3,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Usage(m) | Failure::Numerical(m) | Failure::Config(m) => m,
        }
    }
}

fn usage(e: Error) -> Failure {
    Failure::Usage(e.to_string())
}

fn numerical(e: Error) -> Failure {
    Failure::Numerical(e.to_string())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("hgfasym: {}", f.message());
            ExitCode::from(f.code())
        }
    }
}

fn run(cli: &Cli) -> Result<(), Failure> {
    let prec = Precision::new(cli.precision_bits).map_err(usage)?;
    let bits = prec.bits;
    let (table, failed) = match &cli.command {
        Command::Eval { a, b, c, z, side, method } => {
            let mut input = HgfInput::new(cx(a, bits)?, cx(b, bits)?, cx(c, bits)?, cx(z, bits)?);
            input = input.with_side(match side {
                Side::Upper => CutSide::Upper,
                Side::Lower => CutSide::Lower,
            });
            let out = match method {
                EvalMethod::Auto => hgf_eval(&input, &prec),
                EvalMethod::Series => hgf_series(&input, &prec),
                EvalMethod::QuadA => hgf_quadrature_a(&input, &prec),
                EvalMethod::LoopB => hgf_quadrature_loop(&input, LoopVariant::B, &prec),
                EvalMethod::LoopC => hgf_quadrature_loop(&input, LoopVariant::C, &prec),
            }
            .map_err(numerical)?;
            let mut t = Table::new(&["method", "value_re", "value_im", "est_rel_error"]);
            t.header("kind", "eval");
            t.header("precision_bits", &bits.to_string());
            t.row(vec![
                out.method.tag().to_string(),
                format_float(out.value.re(), bits),
                format_float(out.value.im(), bits),
                format!("{:e}", out.est_rel_error),
            ]);
            (t, false)
        }
        Command::Ae { a, b, c, rates, lambda, z, method } => {
            let r: Vec<Rational> = rates.split(',').map(parse_rational).collect::<Result<_, _>>().map_err(usage)?;
            let [e1, e2, e3]: [Rational; 3] =
                r.try_into().map_err(|_| Failure::Usage("--rates needs three values".into()))?;
            let case = AsymCase::new(cx(a, bits)?, cx(b, bits)?, cx(c, bits)?, (e1, e2, e3), cx(lambda, bits)?)
                .map_err(usage)?;
            let m: AeMethod = method.parse().map_err(usage)?;
            let res = m.evaluate(&case, &cx(z, bits)?).map_err(numerical)?;
            let mut t = Table::new(&["term", "value_re", "value_im", "status"]);
            t.header("kind", "ae");
            t.header("method", m.tag());
            t.header("regime", res.regime.tag());
            t.header("precision_bits", &bits.to_string());
            let status = res.warning.map_or("ok", |w| w.tag());
            for (name, v) in res.terms.iter().map(|(n, v)| (*n, v)).chain([("total", &res.value)]) {
                t.row(vec![
                    name.to_string(),
                    format_float(v.re(), bits),
                    format_float(v.im(), bits),
                    status.to_string(),
                ]);
            }
            (t, false)
        }
        Command::Sweep { config } => {
            let text = fs::read_to_string(config).map_err(|e| Failure::Config(format!("{}: {e}", config.display())))?;
            let cfg = SweepConfig::parse(&text).map_err(|e| Failure::Config(e.to_string()))?;
            let explicit = std::env::var_os("HGFASYM_PRECISION_BITS").is_some() || cli.precision_bits != 256;
            let spec = cfg.to_spec(explicit.then_some(bits)).map_err(|e| Failure::Config(e.to_string()))?;
            let rows = run_sweep(&spec).map_err(numerical)?;
            let failed = rows.iter().any(|r| r.is_hard_error());
            (sweep_table(&[spec], &rows, cli.tolerance), failed)
        }
        Command::Figure { preset } => {
            let specs = figure_preset(preset, &prec).map_err(usage)?;
            let mut rows = Vec::new();
            for s in &specs {
                rows.extend(run_sweep(s).map_err(numerical)?);
            }
            let failed = rows.iter().any(|r| r.is_hard_error());
            let mut t = sweep_table(&specs, &rows, cli.tolerance);
            t.header.insert(1, ("preset".into(), preset.clone()));
            (t, failed)
        }
        Command::Partition { n, t, p, zeta, p_on, p_off, bruteforce_limit } => {
            let sys = match (zeta, p_on, p_off) {
                (Some(z), _, _) => LatticeGasSystem::with_zeta(*n, *t, *p, parse_rational(z).map_err(usage)?),
                (None, Some(on), Some(off)) => LatticeGasSystem::new(
                    *n,
                    *t,
                    *p,
                    parse_rational(on).map_err(usage)?,
                    parse_rational(off).map_err(usage)?,
                ),
                _ => return Err(Failure::Usage("give --zeta or both --p-on and --p-off".into())),
            }
            .map_err(usage)?;
            let modes = PartitionModes { bruteforce_limit: *bruteforce_limit, ..Default::default() };
            let rows = run_partition(&sys, &modes, &prec).map_err(numerical)?;
            let failed = rows.iter().any(|r| r.value.is_none() && r.method != "bruteforce");
            (partition_table(&sys, &rows, &prec), failed)
        }
        Command::Selftest => {
            let checks = selftest(&prec);
            let mut t = Table::new(&["check", "result", "detail"]);
            t.header("kind", "selftest");
            t.header("precision_bits", &bits.to_string());
            for c in &checks {
                t.row(vec![c.name.to_string(), if c.passed { "PASS" } else { "FAIL" }.to_string(), c.detail.clone()]);
            }
            let failed = checks.iter().any(|c| !c.passed);
            emit(cli, &t)?;
            return if failed { Err(Failure::Numerical("self-test failed".into())) } else { Ok(()) };
        }
    };
    emit(cli, &table)?;
    if failed && cli.strict {
        return Err(Failure::Numerical("some rows ended in an error".into()));
    }
    Ok(())
}

fn cx(s: &str, bits: u32) -> Result<hgfasym::BigComplex, Failure> {
    parse_complex(s, bits).map_err(usage)
}

fn emit(cli: &Cli, table: &Table) -> Result<(), Failure> {
    let text = match cli.format {
        Format::Csv => table.to_csv().map_err(numerical)?,
        Format::Json => table.to_json(),
    };
    match &cli.out {
        Some(path) => fs::write(path, text).map_err(|e| Failure::Usage(format!("{}: {e}", path.display()))),
        None => std::io::stdout().write_all(text.as_bytes()).map_err(|e| Failure::Numerical(e.to_string())),
    }
}
