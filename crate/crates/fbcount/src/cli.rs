//! Command-line front end.
//!
//! Exit codes: 0 generic with every applicable residual zero, 1 malformed input
//! or I/O failure, 2 a nonzero residual (or an inconsistent trace), 3 the
//! curve is not generic, 4 the oracle did not settle or disagrees with the
//! pipeline.

use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use fbcount_core::oracle::{oracle_counts, unmatched};
use fbcount_core::pipeline::{analyze, traces};
use fbcount_core::trace::{Ledger, TraceKind};
use fbcount_core::{Analysis, Config, CurveModel};

use crate::report::{cause_name, residual_strings, status_of, Counts, Report, Status};
use crate::spec::{sampled_spec, CurveSpec, SpecError};

pub const EXIT_MALFORMED: i32 = 1;
pub const EXIT_ORACLE: i32 = 4;

fn defaults_help() -> String {
    let c = Config::default();
    format!(
        "Exit codes: 0 ok, 1 malformed input, 2 nonzero residual, 3 not generic, 4 oracle failure.\n\n\
         Config defaults (override in the spec's \"config\" block):\n  \
         grid = {}\n  tol_sep = {:e}\n  tol_on = {:e}\n  v_min = {:e}\n  delta_cusp = {:e}\n  \
         tol_kg = {:e}\n  tol_dedup = {:e}\n  tol_ang = {:e}\n  eps = {:e}\n  kappa_bend = {:?}\n  \
         newton_iters = {}\n  newton_tol = {:e}\n  oracle_resolution = {}",
        c.grid,
        c.tol_sep,
        c.tol_on,
        c.v_min,
        c.delta_cusp,
        c.tol_kg,
        c.tol_dedup,
        c.tol_ang,
        c.eps,
        c.kappa_bend,
        c.newton_iters,
        c.newton_tol,
        c.oracle_resolution
    )
}

#[derive(Debug, Parser)]
#[command(name = "fbcount", version, about = "Count and classify singularities of closed curves in RP²")]
#[command(after_help = defaults_help())]
pub struct Cli {
    /// Worker threads; all cores when unset.
    #[arg(long, global = true, env = "FBCOUNT_THREADS")]
    pub threads: Option<usize>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run the full pipeline and report counts, residuals and events.
    Analyze {
        spec: PathBuf,
        /// Write the report JSON here.
        #[arg(long)]
        json: Option<PathBuf>,
        /// Write a disk-model drawing here.
        #[arg(long)]
        svg: Option<PathBuf>,
        /// Skip the Mp/Vp trace ledgers.
        #[arg(long)]
        no_trace: bool,
    },
    /// Redraw the SVG of a saved report.
    Render {
        report: PathBuf,
        #[arg(long)]
        svg: PathBuf,
    },
    /// Write the dual curve as a sampled spec file.
    Dual {
        spec: PathBuf,
        /// Output path; stdout when absent.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, default_value_t = 2048)]
        samples: usize,
    },
    /// Write the Mp or Vp step function and its jumps as CSV.
    Trace {
        spec: PathBuf,
        #[arg(long, value_enum, default_value_t = TraceArg::Mp)]
        kind: TraceArg,
        /// Output path; stdout when absent.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Brute-force counts on dense polylines.
    Oracle {
        spec: PathBuf,
        /// Samples per period; the spec's config value when absent.
        #[arg(long)]
        resolution: Option<usize>,
        /// Also run the pipeline and require identical counts and events.
        #[arg(long)]
        compare: bool,
    },
    /// Genericity checks only.
    Check { spec: PathBuf },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum TraceArg {
    Mp,
    Vp,
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error(transparent)]
    Spec(#[from] SpecError),
    #[error("cannot write {path}: {source}")]
    Write { path: String, source: std::io::Error },
    #[error("cannot read report {path}: {message}")]
    Report { path: String, message: String },
    #[error("{0}")]
    Usage(String),
}

fn write_file(path: &Path, text: &str) -> Result<(), CliError> {
    std::fs::write(path, text).map_err(|source| CliError::Write { path: path.display().to_string(), source })
}

fn write_out(path: Option<&Path>, text: &str) -> Result<(), CliError> {
    match path {
        Some(p) => write_file(p, text),
        None => std::io::stdout()
            .write_all(text.as_bytes())
            .map_err(|source| CliError::Write { path: "stdout".into(), source }),
    }
}

fn load(spec: &Path) -> Result<(CurveModel, Config), CliError> {
    let s = CurveSpec::load(spec)?;
    let cfg = s.config()?;
    Ok((s.build()?, cfg))
}

fn counts_line(c: &Counts) -> String {
    format!(
        "T1={} T2={} C1={} C2={} I={} U={} A1={} A2={} N1={} N2={}",
        c.t1, c.t2, c.c1, c.c2, c.i, c.u, c.a1, c.a2, c.n1, c.n2
    )
}

fn print_summary(report: &Report) {
    println!("status: {}", status_name(report.status));
    println!("counts: {}", counts_line(&report.counts));
    let res: Vec<String> = report.residuals.iter().map(|(k, v)| format!("{k}={v}")).collect();
    println!("residuals: {}", res.join(" "));
    if let Some(kb) = &report.kbar_report {
        println!("kbar counts: {}", counts_line(&kb.counts));
        let res: Vec<String> = kb.residuals.iter().map(|(k, v)| format!("{k}={v}")).collect();
        println!("kbar residuals: {}", res.join(" "));
    }
    for v in &report.violations {
        println!("violation {}: {}", v.code, v.message);
    }
}

fn status_name(s: Status) -> &'static str {
    match s {
        Status::Ok => "ok",
        Status::NonzeroResidual => "nonzero_residual",
        Status::NonGeneric => "non_generic",
    }
}

fn trace_csv(ledger: &Ledger, events: &Analysis) -> Result<String, CliError> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let io = |e: csv::Error| CliError::Write { path: "csv".into(), source: e.into() };
    w.write_record(["row", "t", "value", "delta", "causes"]).map_err(io)?;
    let name = ledger.kind.name();
    let value = |s: &fbcount_core::trace::TraceSample| match ledger.kind {
        TraceKind::Mp => s.mp(),
        TraceKind::Vp => s.vp(),
    };
    // sample rows hold the value between jumps; jump rows the change at them
    let mut rows: Vec<(f64, Vec<String>)> = Vec::new();
    for s in &ledger.samples {
        let t = s.param();
        rows.push((t, vec![name.to_string(), t.to_string(), value(s).to_string(), String::new(), String::new()]));
    }
    for j in &ledger.jumps {
        let mut causes: Vec<String> = j.roles.iter().map(|r| cause_name(r.cause)).collect();
        causes.dedup();
        let kinds: Vec<String> = causes
            .iter()
            .map(|c| match c.strip_prefix("event:").and_then(|i| i.parse::<usize>().ok()) {
                Some(i) => format!("{}({})", c, events.events[i].kind.name()),
                None => c.clone(),
            })
            .collect();
        rows.push((j.t, vec!["jump".into(), j.t.to_string(), String::new(), j.delta.to_string(), kinds.join(" ")]));
    }
    rows.sort_by(|a, b| a.0.total_cmp(&b.0));
    for (_, r) in rows {
        w.write_record(&r).map_err(io)?;
    }
    let bytes = w.into_inner().map_err(|e| CliError::Usage(e.to_string()))?;
    Ok(String::from_utf8(bytes).expect("csv is utf-8"))
}

pub fn run(cli: Cli) -> Result<i32, CliError> {
    if let Some(n) = cli.threads {
        if n == 0 {
            return Err(CliError::Usage("--threads must be at least 1".into()));
        }
        // a second call only fails if a pool already exists, which is harmless
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
    match cli.command {
        Command::Analyze { spec, json, svg, no_trace } => {
            let (k, cfg) = load(&spec)?;
            let a = analyze(&k, &cfg);
            let tr = if no_trace { None } else { Some(traces(&k, &a, &cfg)) };
            let report = Report::new(&k, &a, tr.as_ref());
            if let Some(p) = json {
                write_file(&p, &report.to_json())?;
            }
            if let Some(p) = svg {
                write_file(&p, &crate::svg::render(&report))?;
            }
            print_summary(&report);
            Ok(report.status.exit_code())
        }
        Command::Render { report, svg } => {
            let text = std::fs::read_to_string(&report).map_err(|e| CliError::Report {
                path: report.display().to_string(),
                message: e.to_string(),
            })?;
            let r = Report::from_json(&text).map_err(|e| CliError::Report {
                path: report.display().to_string(),
                message: e.to_string(),
            })?;
            write_file(&svg, &crate::svg::render(&r))?;
            Ok(0)
        }
        Command::Dual { spec, out, samples } => {
            if samples < 64 {
                return Err(CliError::Usage("--samples must be at least 64".into()));
            }
            let (k, cfg) = load(&spec)?;
            let d = k.dual_curve(&cfg);
            let mut s = sampled_spec(&d, samples);
            s.config = CurveSpec::load(&spec)?.config;
            let mut text = serde_json::to_string_pretty(&s).expect("spec serializes");
            text.push('\n');
            write_out(out.as_deref(), &text)?;
            Ok(0)
        }
        Command::Trace { spec, kind, out } => {
            let (k, cfg) = load(&spec)?;
            let a = analyze(&k, &cfg);
            let [mp, vp] = traces(&k, &a, &cfg);
            let ledger = match kind {
                TraceArg::Mp => mp,
                TraceArg::Vp => vp,
            };
            write_out(out.as_deref(), &trace_csv(&ledger, &a)?)?;
            for e in &ledger.errors {
                eprintln!("trace: {e}");
            }
            if !a.is_generic() {
                Ok(Status::NonGeneric.exit_code())
            } else if ledger.net() != 0 || !ledger.errors.is_empty() {
                Ok(Status::NonzeroResidual.exit_code())
            } else {
                Ok(0)
            }
        }
        Command::Oracle { spec, resolution, compare } => {
            let (k, cfg) = load(&spec)?;
            let n = resolution.unwrap_or(cfg.oracle_resolution);
            let o = match oracle_counts(&k, n, &cfg) {
                Ok(o) => o,
                Err(e) => {
                    println!("oracle: {e}");
                    return Ok(EXIT_ORACLE);
                }
            };
            println!("counts: {}", counts_line(&Counts::from(&o.report)));
            let res: Vec<String> =
                residual_strings(&o.report.residuals).iter().map(|(k, v)| format!("{k}={v}")).collect();
            println!("residuals: {}", res.join(" "));
            for e in o.unlabelled() {
                println!("unlabelled {} at t={:.6}", e.kind.name(), e.t);
            }
            if compare {
                let a = analyze(&k, &cfg);
                let tol = 1e-3 * k.period();
                let (lost_p, lost_o) = unmatched(&a.events, &o.events, k.period(), tol);
                for &i in &lost_p {
                    println!("pipeline only: {} at t={:.6}", a.events[i].kind.name(), a.events[i].t);
                }
                for &i in &lost_o {
                    println!("oracle only: {} at t={:.6}", o.events[i].kind.name(), o.events[i].t);
                }
                let same = a.report.same_counts(&o.report);
                println!("agreement: {}", if same && lost_p.is_empty() && lost_o.is_empty() { "yes" } else { "no" });
                if !same || !lost_p.is_empty() || !lost_o.is_empty() {
                    return Ok(EXIT_ORACLE);
                }
                return Ok(status_of(&a).exit_code());
            }
            Ok(if o.report.residuals.all_zero() { 0 } else { Status::NonzeroResidual.exit_code() })
        }
        Command::Check { spec } => {
            let (k, cfg) = load(&spec)?;
            let a = analyze(&k, &cfg);
            for v in &a.violations {
                println!("violation {}: {v}", v.code());
            }
            if a.is_generic() {
                println!("generic");
                Ok(0)
            } else {
                Ok(Status::NonGeneric.exit_code())
            }
        }
    }
}
