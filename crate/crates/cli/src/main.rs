mod config;
mod output;

use std::io::Write;
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use kerrsq::figures::run_figure;
use kerrsq::oracle::{convolution_suite, dft_suite, fock_suite};
use kerrsq::spectra::{compute_spectrum, optimal_phase_with, spectrum_optimal_with, sweep};
use kerrsq::{RegimeWarning, VerificationReport};

use config::{Format, RunConfig};
use output::{json_document, num, Csv};

const EXIT_USAGE: u8 = 1;
const EXIT_NUMERIC: u8 = 2;
const EXIT_ORACLE: u8 = 3;

#[derive(Debug, Parser)]
#[command(name = "kerrsq", version, about = "Quadrature squeezing spectra of Kerr-modulated pulses")]
struct Cli {
    /// JSON run configuration; omitted sections take their defaults.
    #[arg(long, global = true)]
    config: Option<String>,
    /// Override one configuration leaf, e.g. `--set spectra.Omega0=0.5`.
    #[arg(long = "set", value_name = "PATH=VALUE", global = true)]
    overrides: Vec<String>,
    /// Output file; standard output when absent.
    #[arg(long, global = true)]
    output: Option<String>,
    #[arg(long, value_enum, global = true)]
    format: Option<Format>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// S_X and S_Y over the configured frequency grid.
    Spectrum,
    /// Optimal probe phase and the spectra it gives at Omega0.
    OptimalPhase,
    /// Spectra along the configured sweep axis.
    Sweep,
    /// Reproduce one of the seven figure families.
    Figure {
        #[arg(value_parser = clap::value_parser!(u8).range(1..=7))]
        number: u8,
    },
    /// Run a verification suite.
    Oracle {
        #[arg(value_enum)]
        kind: OracleKind,
    },
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum OracleKind {
    Dft,
    Convolution,
    Fock,
}

struct Rendered {
    text: String,
    oracle_failed: bool,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let cfg = match load(&cli) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {e:#}");
            return ExitCode::from(EXIT_USAGE);
        }
    };
    if let Err(e) = configure_threads() {
        eprintln!("error: {e:#}");
        return ExitCode::from(EXIT_USAGE);
    }
    let rendered = match run(&cli.command, &cfg) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e:#}");
            return ExitCode::from(exit_code(&e));
        }
    };
    if let Err(e) = emit(&cfg, &rendered.text) {
        eprintln!("error: {e:#}");
        return ExitCode::from(EXIT_USAGE);
    }
    if rendered.oracle_failed {
        ExitCode::from(EXIT_ORACLE)
    } else {
        ExitCode::SUCCESS
    }
}

fn load(cli: &Cli) -> Result<RunConfig> {
    let mut cfg = RunConfig::load(cli.config.as_deref(), &cli.overrides)?;
    if cli.output.is_some() {
        cfg.output_path = cli.output.clone();
    }
    if cli.format.is_some() {
        cfg.format = cli.format;
    }
    Ok(cfg)
}

fn configure_threads() -> Result<()> {
    let Ok(raw) = std::env::var("KERRSQ_THREADS") else {
        return Ok(());
    };
    let n: usize = raw
        .trim()
        .parse()
        .ok()
        .filter(|n| *n > 0)
        .with_context(|| format!("KERRSQ_THREADS must be a positive integer, got `{raw}`"))?;
    rayon::ThreadPoolBuilder::new().num_threads(n).build_global()?;
    Ok(())
}

fn exit_code(e: &anyhow::Error) -> u8 {
    match e.downcast_ref::<kerrsq::Error>() {
        Some(k) if k.is_numeric() => EXIT_NUMERIC,
        _ => EXIT_USAGE,
    }
}

fn emit(cfg: &RunConfig, text: &str) -> Result<()> {
    match &cfg.output_path {
        Some(path) => std::fs::write(path, text).with_context(|| format!("writing `{path}`")),
        None => {
            std::io::stdout().lock().write_all(text.as_bytes())?;
            Ok(())
        }
    }
}

fn warning_notes(warnings: &[RegimeWarning]) -> Result<Vec<String>> {
    warnings
        .iter()
        .map(|w| Ok(format!("warning: {}", serde_json::to_string(w)?)))
        .collect()
}

fn run(command: &Command, cfg: &RunConfig) -> Result<Rendered> {
    let plain = |text| Rendered {
        text,
        oracle_failed: false,
    };
    let format = cfg.format.unwrap_or(match command {
        Command::Oracle { .. } => Format::Json,
        _ => Format::Csv,
    });
    match command {
        Command::Spectrum => {
            let res = compute_spectrum(&cfg.request())?;
            Ok(plain(match format {
                Format::Json => json_document("spectrum", cfg, &res)?,
                Format::Csv => {
                    let mut notes = vec![format!("probe linear phase: {}", num(res.phases.linear_phase))];
                    if res.degenerate_phase {
                        notes.push("optimal phase undefined without nonlinearity; used 0".into());
                    }
                    notes.extend(warning_notes(&res.warnings)?);
                    let mut csv = Csv::new("spectrum", cfg, &notes)?;
                    csv.header(&["Omega", "S_X", "S_Y"]);
                    for p in &res.points {
                        csv.row(&[num(p.omega), num(p.s_x), num(p.s_y)]);
                    }
                    csv.finish()
                }
            }))
        }
        Command::OptimalPhase => {
            let req = cfg.request();
            let phases = kerrsq::nlo_phase::phases_quasistatic(&req.params, &req.pulse1, &req.pulse2, req.t)?;
            let phase = optimal_phase_with(&req.kernel, &phases, req.omega0)?;
            let s = spectrum_optimal_with(&req.kernel, &phases, req.omega0);
            #[derive(Serialize)]
            struct Optimal {
                t: f64,
                #[serde(rename = "Omega0")]
                omega0: f64,
                phi1: f64,
                phi_star: f64,
                optimal_phase: f64,
                #[serde(rename = "S0_X")]
                s0_x: f64,
                #[serde(rename = "S0_Y")]
                s0_y: f64,
            }
            let out = Optimal {
                t: req.t,
                omega0: req.omega0,
                phi1: phases.phi1,
                phi_star: phases.phi_star,
                optimal_phase: phase,
                s0_x: s.s_x,
                s0_y: s.s_y,
            };
            Ok(plain(match format {
                Format::Json => json_document("optimal-phase", cfg, &out)?,
                Format::Csv => {
                    let mut csv = Csv::new("optimal-phase", cfg, &[])?;
                    csv.header(&["t", "Omega0", "phi1", "phi_star", "optimal_phase", "S0_X", "S0_Y"]);
                    csv.row(&[
                        num(out.t),
                        num(out.omega0),
                        num(out.phi1),
                        num(out.phi_star),
                        num(out.optimal_phase),
                        num(out.s0_x),
                        num(out.s0_y),
                    ]);
                    csv.finish()
                }
            }))
        }
        Command::Sweep => {
            let axis = cfg.sweep_axis()?;
            let table = sweep(&cfg.request(), axis, &cfg.sweep.values)?;
            Ok(plain(match format {
                Format::Json => json_document("sweep", cfg, &table)?,
                Format::Csv => {
                    let mut csv = Csv::new("sweep", cfg, &warning_notes(&table.warnings)?)?;
                    csv.header(&[axis.name(), "Omega", "S_X", "S_Y", "phase"]);
                    for r in &table.rows {
                        csv.row(&[num(r.value), num(r.omega), num(r.s_x), num(r.s_y), num(r.phase)]);
                    }
                    csv.finish()
                }
            }))
        }
        Command::Figure { number } => {
            let table = run_figure(*number)?;
            let command = format!("figure {number}");
            Ok(plain(match format {
                Format::Json => json_document(&command, cfg, &table)?,
                Format::Csv => {
                    let notes = [format!("x: {}", table.preset.x_label())];
                    let mut csv = Csv::new(&command, cfg, &notes)?;
                    csv.header(&["curve_label", "x", "S_X"]);
                    for r in &table.rows {
                        csv.row(&[r.curve_label.clone(), num(r.x), num(r.s_x)]);
                    }
                    csv.finish()
                }
            }))
        }
        Command::Oracle { kind } => {
            let report = match kind {
                OracleKind::Dft => dft_suite(&cfg.oracle.dft)?,
                OracleKind::Convolution => convolution_suite(&cfg.oracle.convolution)?,
                OracleKind::Fock => fock_suite(&cfg.oracle.fock)?,
            };
            for c in report.failures() {
                eprintln!("check failed: {} (observed {:e}, tolerance {:e})", c.name, c.observed, c.tolerance);
            }
            Ok(Rendered {
                text: render_report(&report, cfg, format)?,
                oracle_failed: !report.passed(),
            })
        }
    }
}

fn render_report(report: &VerificationReport, cfg: &RunConfig, format: Format) -> Result<String> {
    let command = format!("oracle {}", report.suite);
    match format {
        Format::Json => json_document(&command, cfg, report),
        Format::Csv => {
            let mut csv = Csv::new(&command, cfg, &[])?;
            csv.header(&["name", "observed", "expected", "tolerance", "pass"]);
            for c in &report.checks {
                csv.row(&[
                    c.name.clone(),
                    num(c.observed),
                    num(c.expected),
                    num(c.tolerance),
                    c.pass.to_string(),
                ]);
            }
            Ok(csv.finish())
        }
    }
}
