//! `charvar`: sampling, invariants, membership tests, flows, lifts and
//! polynomial expansion for character varieties of free groups.

mod io;
mod verify;

use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use charvar::groups::{sample_tuple, seeded_rng};
use charvar::invariants::{invariant_record, SU2Rank2Coords, SU2Rank3Coords};
use charvar::kempfness::{composite_retraction, kn_flow, DEFAULT_MAX_ITER};
use charvar::poincare::{baird_poly, surface_counterexample_polys, IntPolynomial};
use charvar::reconstruct::{su2_rank2_lift, su2_rank3_lift, unitary_conjugacy};
use charvar::retraction::retract_tuple;
use charvar::semialgebraic::{alcove_grid, tetrahedron_boundary};
use charvar::{Family, GroupDescriptor, RepTuple, DEFAULT_TOL};

use crate::io::{Format, Output};

#[derive(Parser, Debug)]
#[command(name = "charvar", version, about)]
struct Cli {
    #[command(flatten)]
    config: RunConfig,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
struct RunConfig {
    /// Seed for every random draw.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Sample count for `verify` (each suite has its own default).
    #[arg(long, global = true, value_parser = clap::value_parser!(u64).range(1..))]
    samples: Option<u64>,
    /// Numerical tolerance for validity and membership decisions.
    #[arg(long, global = true, env = "CHARVAR_TOL", default_value_t = DEFAULT_TOL, value_parser = positive)]
    tol: f64,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Write here instead of standard output.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

fn positive(s: &str) -> std::result::Result<f64, String> {
    match s.parse::<f64>() {
        Ok(v) if v > 0.0 && v.is_finite() => Ok(v),
        Ok(v) => Err(format!("{v} is not a positive number")),
        Err(e) => Err(e.to_string()),
    }
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Draw a random tuple (Haar for SU, k·exp(H) for SL).
    Sample {
        #[arg(long, value_parser = parse_family)]
        group: Family,
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
        n: u64,
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
        r: u64,
    },
    /// Invariant coordinates of a tuple, chosen by group and rank.
    Invariants {
        /// Tuple JSON; standard input if omitted or `-`.
        input: Option<PathBuf>,
    },
    /// Grid data for the SU(3) alcove or the SU(2) tetrahedron boundary.
    Region {
        #[arg(value_enum)]
        name: RegionName,
        #[arg(long, default_value_t = 64)]
        resolution: usize,
    },
    /// Run a property suite; exits nonzero if any check fails.
    Verify {
        #[arg(value_enum)]
        suite: verify::Suite,
    },
    /// Polar retraction of every component at time `t`.
    Retract {
        input: Option<PathBuf>,
        #[arg(long, default_value_t = 1.0)]
        t: f64,
    },
    /// Kempf–Ness descent; with `--t`, follow it by the retraction.
    Flow {
        input: Option<PathBuf>,
        #[arg(long, default_value_t = DEFAULT_MAX_ITER)]
        max_iter: usize,
        #[arg(long)]
        t: Option<f64>,
    },
    /// Rebuild an SU(2) pair or triple from its coordinates.
    Lift {
        /// Invariant record JSON, as printed by `invariants`.
        input: Option<PathBuf>,
        /// Sheet for rank 3 (+1 or -1).
        #[arg(long, default_value_t = 1, allow_hyphen_values = true)]
        sign: i8,
    },
    /// Find a unitary conjugator between two SU tuples.
    Conjugacy { first: PathBuf, second: PathBuf },
    /// Poincaré polynomial of the SL(2) character variety of a free group.
    Poincare {
        #[arg(long, default_value_t = 3, value_parser = clap::value_parser!(u32).range(1..))]
        r: u32,
        /// Print the two surface-group polynomials instead.
        #[arg(long)]
        surface: bool,
    },
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum RegionName {
    Su3Alcove,
    Su2TetrahedronBoundary,
}

fn parse_family(s: &str) -> std::result::Result<Family, String> {
    s.parse::<Family>().map_err(|e| e.to_string())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

/// `Ok(false)` means the command ran but a check it reports on failed.
fn run(cli: Cli) -> Result<bool> {
    let cfg = cli.config;
    let out = Output::new(cfg.out.clone(), cfg.format);
    match cli.command {
        Command::Sample { group, n, r } => {
            let d = GroupDescriptor::new(group, n as usize)?;
            let rho = sample_tuple(d, r as usize, &mut seeded_rng(cfg.seed));
            out.tuple(&rho)?;
            Ok(true)
        }
        Command::Invariants { input } => {
            let rho = io::read_tuple(input.as_deref(), cfg.tol)?;
            out.record(&invariant_record(&rho)?)?;
            Ok(true)
        }
        Command::Region { name, resolution } => {
            let (columns, rows): (&[&str], Vec<Vec<f64>>) = match name {
                RegionName::Su3Alcove => (
                    &["p1", "p2", "margin"],
                    alcove_grid(resolution)?.iter().map(|r| r.to_vec()).collect(),
                ),
                RegionName::Su2TetrahedronBoundary => (
                    &["a1", "a2", "a3", "sigma"],
                    tetrahedron_boundary(resolution)?.iter().map(|r| r.to_vec()).collect(),
                ),
            };
            out.table(columns, &rows)?;
            Ok(true)
        }
        Command::Verify { suite } => {
            let reports = verify::run(suite, cfg.samples, cfg.seed, cfg.tol);
            let pass = reports.iter().all(|r| r.pass);
            out.reports(&reports)?;
            Ok(pass)
        }
        Command::Retract { input, t } => {
            let rho = io::read_tuple(input.as_deref(), cfg.tol)?;
            out.tuple(&retract_tuple(&rho, t)?)?;
            Ok(true)
        }
        Command::Flow { input, max_iter, t } => {
            let rho = io::read_tuple(input.as_deref(), cfg.tol)?;
            if let Some(t) = t {
                let res = composite_retraction(&rho, t, max_iter, cfg.tol)?;
                out.json(&json!({
                    "before": res.before,
                    "after": res.after,
                    "tuple": res.tuple,
                    "iterations": res.flow.iterations(),
                }))?;
                return Ok(true);
            }
            let res = kn_flow(&rho, max_iter, cfg.tol)?;
            let last = *res.trace.last();
            match cfg.format {
                Format::Csv => out.text(&res.trace.to_csv())?,
                Format::Json => out.json(&json!({
                    "converged": res.trace.converged,
                    "iterations": last.iter,
                    "p": last.p,
                    "residual": last.residual,
                    "tuple": res.tuple,
                }))?,
            }
            Ok(res.trace.converged)
        }
        Command::Lift { input, sign } => {
            if sign != 1 && sign != -1 {
                bail!("--sign must be 1 or -1");
            }
            let values = io::read_record(input.as_deref())?;
            let lifted = lift(&values, sign, cfg.tol)?;
            out.tuple(&lifted)?;
            Ok(true)
        }
        Command::Conjugacy { first, second } => {
            let a = io::read_tuple(Some(&first), cfg.tol)?;
            let b = io::read_tuple(Some(&second), cfg.tol)?;
            let k = unitary_conjugacy(&a, &b, cfg.tol)?;
            out.json(&json!({ "conjugate": k.is_some(), "k": k }))?;
            Ok(k.is_some())
        }
        Command::Poincare { r, surface } => {
            if surface {
                let (n, m, differ) = surface_counterexample_polys();
                out.json(&json!({
                    "fixed_determinant": poly_json(&n),
                    "higgs": poly_json(&m),
                    "differ": differ,
                }))?;
            } else {
                let mut v = poly_json(&baird_poly(r)?);
                v["r"] = json!(r);
                out.json(&v)?;
            }
            Ok(true)
        }
    }
}

fn poly_json(p: &IntPolynomial) -> Value {
    let coeffs: Vec<Value> = p
        .coeffs()
        .iter()
        .map(|c| match i64::try_from(c) {
            Ok(v) => json!(v),
            Err(_) => json!(c.to_string()),
        })
        .collect();
    json!({ "polynomial": p.to_string(), "coefficients": coeffs })
}

fn lift(values: &serde_json::Map<String, Value>, sign: i8, tol: f64) -> Result<RepTuple> {
    let get = |k: &str| -> Result<f64> {
        let v = values.get(k);
        // complex records store [re, im]; only a real point can be lifted
        let re = match v {
            Some(Value::Array(p)) if p.len() == 2 && p[1].as_f64() == Some(0.0) => p[0].as_f64(),
            _ => v.and_then(Value::as_f64),
        };
        re.with_context(|| format!("record has no real value `{k}`"))
    };
    if values.contains_key("a12") {
        let c = SU2Rank3Coords::from_array([
            get("a1")?,
            get("a2")?,
            get("a3")?,
            get("a12")?,
            get("a13")?,
            get("a23")?,
        ]);
        let res = su2_rank3_lift(&c, Some(sign), tol)?;
        Ok(res.tuples.into_iter().next().context("lift returned no tuple")?)
    } else {
        let a = SU2Rank2Coords::new(get("a1")?, get("a2")?, get("a3")?);
        let res = su2_rank2_lift(&a, tol)?;
        Ok(res.tuples.into_iter().next().context("lift returned no tuple")?)
    }
}
