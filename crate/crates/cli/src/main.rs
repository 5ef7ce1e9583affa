//! `erqes`: command-line access to the sector matrices, the perturbative
//! series, WKB quantization, the numerical oracle and the full match run.

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use erqes_core::oracle::{
    bound_states, periodic_band_edges, BlochSector, BoundSolveConfig, Discretization, PeriodicSolveConfig,
};
use erqes_core::qes::{build_qes_matrix, qes_spectrum};
use erqes_core::report::run::{published_e0, run_match};
use erqes_core::report::{emit_report, RunConfig};
use erqes_core::rspt::{coefficient_rows, rspt_ground_energy};
use erqes_core::wkb::{extract_energy_series, solve_quantization, tunneling_action, QuantizationProblem};
use erqes_core::{HalfInt, ModelParams, PotentialId, SpectralResult};
use serde_json::json;

#[derive(Parser)]
#[command(name = "erqes", version, about = "Energy-reflection checks for ½sin²x + γcos x and ½sinh²x − γcosh x")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Algebraic-sector matrix and its eigenvalues.
    Spectrum {
        #[arg(long, default_value = "v1")]
        potential: PotentialId,
        #[arg(long)]
        j: HalfInt,
        /// Solve through the exact characteristic polynomial at any size.
        #[arg(long)]
        exact_char_poly: bool,
        /// Print the matrix as CSV of exact fractions instead of JSON.
        #[arg(long)]
        csv: bool,
    },
    /// Exact weak-coupling series of the lowest V₁ band edge.
    Perturb {
        #[arg(long, default_value_t = 6)]
        order: usize,
        /// Print an aligned coefficient table instead of JSON.
        #[arg(long)]
        text: bool,
    },
    /// Higher-order WKB quantization of V₂ and the V₁ tunneling action.
    #[command(subcommand)]
    Wkb(WkbCommand),
    /// Direct numerical spectra of V₁ and V₂.
    #[command(subcommand)]
    Oracle(OracleCommand),
    /// Full comparison run; exits with status 1 when the engines disagree.
    Match(MatchArgs),
}

#[derive(Subcommand)]
enum WkbCommand {
    /// Quantize level n of V₂.
    Solve {
        #[arg(long)]
        j: HalfInt,
        /// Level index; defaults to the top algebraic level 4j.
        #[arg(long)]
        n: Option<usize>,
        #[arg(long, default_value_t = 4)]
        order: u8,
    },
    /// Fit the large-κ series of the top algebraic level.
    Series {
        #[arg(long, value_delimiter = ',', required = true)]
        gammas: Vec<f64>,
        #[arg(long, default_value_t = 4)]
        order: u8,
        #[arg(long)]
        terms: Option<usize>,
    },
    /// Barrier action and band gap of V₁.
    Tunneling {
        #[arg(long)]
        j: HalfInt,
    },
}

#[derive(Subcommand)]
enum OracleCommand {
    /// Band edges of V₁ in the periodic or antiperiodic sector.
    Bands {
        #[arg(long)]
        j: HalfInt,
        #[arg(long, default_value = "p")]
        sector: BlochSector,
        #[arg(long, default_value_t = 1)]
        count: usize,
        #[arg(long, default_value_t = 64)]
        cutoff: usize,
        #[arg(long)]
        csv: bool,
    },
    /// Bound states of V₂.
    Bound {
        #[arg(long)]
        j: HalfInt,
        #[arg(long, default_value_t = 1)]
        count: usize,
        #[arg(long, default_value = "sinc")]
        discretization: Discretization,
        #[arg(long)]
        csv: bool,
    },
}

#[derive(Args)]
struct MatchArgs {
    /// key = value configuration file.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_delimiter = ',')]
    j: Option<Vec<String>>,
    #[arg(long)]
    rspt_order: Option<usize>,
    #[arg(long)]
    wkb_order: Option<u8>,
    #[arg(long)]
    seed: Option<u64>,
    /// Any other setting, as key=value; may be repeated.
    #[arg(long = "set", value_name = "KEY=VALUE")]
    set: Vec<String>,
}

fn out(text: &str) -> Result<()> {
    std::io::stdout().lock().write_all(text.as_bytes())?;
    Ok(())
}

fn print_json(v: &impl serde::Serialize) -> Result<()> {
    out(&(serde_json::to_string_pretty(v)? + "\n"))
}

fn levels_csv(r: &SpectralResult) -> String {
    let mut s = String::from("index,energy,error,parity\n");
    for (i, l) in r.levels.iter().enumerate() {
        let parity = l.parity.map(|p| format!("{p:?}").to_lowercase()).unwrap_or_default();
        s.push_str(&format!("{i},{:.15e},{:.3e},{parity}\n", l.energy, l.error));
    }
    s
}

fn spectrum(potential: PotentialId, j: HalfInt, exact: bool, csv: bool) -> Result<()> {
    let params = ModelParams::new(j)?;
    let m = build_qes_matrix(&params, potential)?;
    if csv {
        return out(&m.to_csv());
    }
    let spec = qes_spectrum(&m, exact)?;
    let rows: Vec<Vec<String>> = (0..m.dim())
        .map(|r| (0..m.dim()).map(|c| m.entry(r, c).to_string()).collect())
        .collect();
    print_json(&json!({
        "params": params,
        "potential": potential,
        "matrix": rows,
        "levels": spec,
    }))
}

fn perturb(order: usize, text: bool) -> Result<()> {
    let s = rspt_ground_energy(order)?;
    let rows = coefficient_rows(&s);
    if !text {
        return print_json(&json!({ "series": s, "coefficients": rows }));
    }
    let published = published_e0();
    let mut table = vec![["power".to_string(), "exact".into(), "value".into(), "published".into()]];
    for (r, (p, _)) in rows.iter().zip(s.terms()) {
        let pubv = published
            .iter()
            .find(|(q, _)| *q == p)
            .map(|(_, v)| v.to_string())
            .unwrap_or_else(|| "-".into());
        table.push([format!("kappa^({})", r.power), r.value.clone(), format!("{:+.12e}", r.approx), pubv]);
    }
    let widths: Vec<usize> = (0..4)
        .map(|i| table.iter().map(|r| r[i].chars().count()).max().unwrap_or(0))
        .collect();
    for r in &table {
        let line: Vec<String> = r.iter().zip(&widths).map(|(c, w)| format!("{c:<w$}", w = *w)).collect();
        out(&format!("{}\n", line.join("  ").trim_end()))?;
    }
    Ok(())
}

fn wkb(cmd: WkbCommand) -> Result<()> {
    match cmd {
        WkbCommand::Solve { j, n, order } => {
            let params = ModelParams::new(j)?;
            let problem = match n {
                Some(n) => QuantizationProblem::new(&params, n),
                None => QuantizationProblem::top_level(&params),
            };
            print_json(&solve_quantization(&problem, order)?)
        }
        WkbCommand::Series { gammas, order, terms } => print_json(&extract_energy_series(&gammas, order, terms)?),
        WkbCommand::Tunneling { j } => print_json(&tunneling_action(&ModelParams::new(j)?)?),
    }
}

fn oracle(cmd: OracleCommand) -> Result<()> {
    let (r, csv) = match cmd {
        OracleCommand::Bands {
            j,
            sector,
            count,
            cutoff,
            csv,
        } => {
            let cfg = PeriodicSolveConfig {
                plane_wave_cutoff: cutoff,
                bloch_sector: sector,
                count,
                ..PeriodicSolveConfig::default()
            };
            (periodic_band_edges(&ModelParams::new(j)?, &cfg)?, csv)
        }
        OracleCommand::Bound {
            j,
            count,
            discretization,
            csv,
        } => {
            let cfg = BoundSolveConfig {
                count,
                discretization,
                ..BoundSolveConfig::default()
            };
            (bound_states(&ModelParams::new(j)?, &cfg)?, csv)
        }
    };
    if csv {
        out(&levels_csv(&r))
    } else {
        print_json(&r)
    }
}

fn match_config(a: &MatchArgs) -> Result<RunConfig> {
    let mut cfg = match &a.config {
        Some(p) => RunConfig::load(p)?,
        None => RunConfig::default(),
    };
    if let Some(j) = &a.j {
        cfg.set("j", &j.join(","))?;
    }
    if let Some(v) = a.rspt_order {
        cfg.rspt_order = v;
    }
    if let Some(v) = a.wkb_order {
        cfg.wkb_order = v;
    }
    if let Some(v) = a.seed {
        cfg.seed = v;
    }
    for kv in &a.set {
        let Some((k, v)) = kv.split_once('=') else {
            bail!("--set expects KEY=VALUE, got {kv:?}");
        };
        cfg.set(k, v)?;
    }
    if let Some(out) = &a.out {
        cfg.out_dir = Some(out.clone());
    }
    cfg.validate()?;
    Ok(cfg)
}

fn run(cli: Cli) -> Result<ExitCode> {
    match cli.command {
        Command::Spectrum {
            potential,
            j,
            exact_char_poly,
            csv,
        } => spectrum(potential, j, exact_char_poly, csv)?,
        Command::Perturb { order, text } => perturb(order, text)?,
        Command::Wkb(c) => wkb(c)?,
        Command::Oracle(c) => oracle(c)?,
        Command::Match(a) => {
            let cfg = match_config(&a)?;
            let out = cfg.out_dir.clone().context("no output directory: pass --out or set out in the config")?;
            let report = run_match(&cfg)?;
            for p in emit_report(&report, &out)? {
                eprintln!("wrote {}", p.display());
            }
            eprintln!(
                "internal mismatches: {}, published mismatches: {}",
                report.internal_mismatches, report.published_mismatches
            );
            if report.has_internal_mismatch() {
                return Ok(ExitCode::from(1));
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => code,
        // A closed pipe (e.g. `| head`) is not an error.
        Err(e) if e.downcast_ref::<std::io::Error>().map(|io| io.kind()) == Some(std::io::ErrorKind::BrokenPipe) => {
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
