//! `tgc`: plan, build, verify and simulate tiered gradient codes.

mod config;
mod svg;

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use tiered_gc::numeric::dump;
use tiered_gc::sim::{self, ModelKind, MuSemantics, SimConfig, StragglerModel};
use tiered_gc::supports::{build_for_params, normalize_finished};
use tiered_gc::verify::{check_span_tiered, check_support_condition};
use tiered_gc::{instantiate, plan, Error, TieredParams, VerificationReport};

use crate::config::Defaults;

#[derive(Debug)]
pub enum CliError {
    /// Bad flags, parameters or input files. Exit code 2.
    Invalid(String),
    /// A code failed verification. Exit code 1.
    Verification(String),
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Invalid(e.to_string())
    }
}

type CliResult<T> = Result<T, CliError>;

#[derive(Parser)]
#[command(name = "tgc", version, about = "Tiered gradient codes")]
struct Cli {
    /// key=value file overriding built-in defaults
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone, Copy)]
struct ParamArgs {
    #[arg(long)]
    n1: usize,
    #[arg(long)]
    n2: usize,
    #[arg(long)]
    k: usize,
    #[arg(long)]
    c: usize,
}

impl ParamArgs {
    fn params(&self) -> CliResult<TieredParams> {
        Ok(TieredParams::new(self.n1, self.n2, self.k, self.c)?)
    }
}

#[derive(Args, Clone)]
struct SimArgs {
    /// se1, se2 or pa
    #[arg(long, value_parser = parse_model)]
    model: Option<ModelKind>,
    #[arg(long)]
    trials: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    /// Treat mu as a rate proportional to the task size
    #[arg(long, conflicts_with = "inverse_mu")]
    literal_mu: bool,
    /// Exponential mean is task size divided by mu
    #[arg(long)]
    inverse_mu: bool,
}

impl SimArgs {
    fn resolve(&self, d: &Defaults) -> (StragglerModel, usize, u64) {
        let mu = if self.literal_mu || (d.literal_mu && !self.inverse_mu) {
            MuSemantics::Rate
        } else if self.inverse_mu {
            MuSemantics::InverseMean
        } else {
            MuSemantics::Mean
        };
        let model = StragglerModel::new(self.model.unwrap_or(d.model)).with_mu(mu);
        (model, self.trials.unwrap_or(d.trials), self.seed.unwrap_or(d.seed))
    }
}

fn parse_model(s: &str) -> Result<ModelKind, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Text,
    Csv,
}

#[derive(Clone, Copy, ValueEnum, PartialEq, Eq)]
enum Vary {
    N1,
    C,
}

#[derive(Subcommand)]
enum Command {
    /// Regime, construction and per-server load
    Plan {
        #[command(flatten)]
        p: ParamArgs,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
    /// Instantiate a code and write its matrices to a directory
    Build {
        #[command(flatten)]
        p: ParamArgs,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        tol: Option<f64>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Run the span and support checks on a fresh or dumped code
    Verify {
        #[arg(long, required_unless_present = "dir")]
        n1: Option<usize>,
        #[arg(long, required_unless_present = "dir")]
        n2: Option<usize>,
        #[arg(long, required_unless_present = "dir")]
        k: Option<usize>,
        #[arg(long, required_unless_present = "dir")]
        c: Option<usize>,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        tol: Option<f64>,
        /// Code directory written by `build`
        #[arg(long, conflicts_with_all = ["n1", "n2", "k", "c"])]
        dir: Option<PathBuf>,
        /// Write every failing tuple here
        #[arg(long)]
        log: Option<PathBuf>,
    },
    /// Monte Carlo comparison of tiered and plain codes
    Simulate {
        #[command(flatten)]
        p: ParamArgs,
        #[command(flatten)]
        sim: SimArgs,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Simulate over a range of n1 or c
    Sweep {
        #[arg(long, value_enum)]
        vary: Vary,
        #[arg(long)]
        n1: Option<usize>,
        #[arg(long)]
        n2: usize,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        c: Option<usize>,
        #[command(flatten)]
        sim: SimArgs,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Also write a SUC-vs-SCT scatter plot
        #[arg(long)]
        svg: Option<PathBuf>,
    },
    /// Print the 0/1 support matrices
    Dump {
        #[command(flatten)]
        p: ParamArgs,
        /// Comma-separated finished set; all sets when omitted
        #[arg(long, value_delimiter = ',')]
        finished: Option<Vec<usize>>,
        /// Write one file per matrix instead of printing
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn emit(out: Option<&Path>, text: &str) -> CliResult<()> {
    match out {
        Some(path) => fs::write(path, text)
            .map_err(|e| CliError::Invalid(format!("{}: {e}", path.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn plain_ratio_text(n2: usize, k: usize) -> String {
    format!("{}/{}", n2 - k + 1, n2)
}

fn cmd_plan(p: ParamArgs, format: Format) -> CliResult<String> {
    let params = p.params()?;
    let pl = plan(&params)?;
    let frac = format!("{}/{}", pl.fraction.numer(), pl.fraction.denom());
    let base = plain_ratio_text(params.n2, params.k);
    Ok(match format {
        Format::Text => format!(
            "params {params}\nregime {}\nconstruction {}\npartitions {}\npool {}\ngain {}\nfraction {frac}\nbaseline {base}\n",
            pl.regime.name(),
            pl.construction.name(),
            pl.q_partitions,
            pl.virtual_pool,
            pl.gain,
        ),
        Format::Csv => format!(
            "n1,n2,k,c,regime,construction,partitions,pool,gain,fraction,baseline\n{},{},{},{},{},{},{},{},{},{frac},{base}\n",
            params.n1,
            params.n2,
            params.k,
            params.c,
            pl.regime.name(),
            pl.construction.name(),
            pl.q_partitions,
            pl.virtual_pool,
            pl.gain,
        ),
    })
}

fn cmd_build(p: ParamArgs, seed: u64, tol: f64, out: &Path) -> CliResult<String> {
    let params = p.params()?;
    let ts = build_for_params(&params)?;
    let code = instantiate(&ts, seed, tol)?;
    dump::write_code(&code, seed, out)?;
    Ok(format!(
        "wrote {} ({}, Q={}, seed {seed})\n",
        out.display(),
        ts.plan.construction.name(),
        ts.q()
    ))
}

fn report_line(name: &str, r: &VerificationReport) -> String {
    format!("{name}: {} tuples checked, {} failures\n", r.checked, r.failure_count)
}

fn cmd_verify(
    params: Option<TieredParams>,
    dir: Option<&Path>,
    seed: u64,
    tol: f64,
    log: Option<&Path>,
) -> CliResult<String> {
    let mut text = String::new();
    let mut log_text = String::new();
    let mut failed = false;

    let code = match dir {
        Some(dir) => {
            let (code, seed) = dump::read_code(dir)?;
            let _ = writeln!(text, "code {} seed {seed}", dir.display());
            code
        }
        None => {
            let params = params.expect("clap requires params without --dir");
            let ts = build_for_params(&params)?;
            let _ = writeln!(text, "params {params} seed {seed}");
            let support = check_support_condition(&ts)?;
            text += &report_line("support", &support);
            log_text += &support.to_log();
            failed |= !support.passed;
            instantiate(&ts, seed, tol)?
        }
    };

    let span = check_span_tiered(&code)?;
    text += &report_line("span", &span);
    log_text += &span.to_log();
    failed |= !span.passed;
    text += &format!("{} tuples checked\n", span.checked);

    if let Some(path) = log {
        emit(Some(path), &log_text)?;
    }
    if failed {
        let mut msg = text;
        for f in span.summary().lines().skip(3).take(10) {
            let _ = writeln!(msg, "{f}");
        }
        return Err(CliError::Verification(msg));
    }
    Ok(text)
}

fn cmd_simulate(p: ParamArgs, model: StragglerModel, trials: usize, seed: u64) -> CliResult<String> {
    let mut cfg = SimConfig::new(p.params()?, model);
    cfg.trials = trials;
    cfg.seed = seed;
    let res = sim::monte_carlo(&cfg)?;
    let mut s = format!("{}\n", sim::CSV_HEADER);
    for row in res.csv_rows() {
        s += &row;
        s.push('\n');
    }
    Ok(s)
}

fn sweep_points(vary: Vary, results: &[sim::SimResult]) -> Vec<svg::Point> {
    let mut pts = Vec::new();
    for r in results {
        if let Some(t) = &r.tiered {
            let label = match vary {
                Vary::N1 => format!("n1={}", r.params.n1),
                Vary::C => format!("c={}", r.params.c),
            };
            pts.push(svg::Point { label, sct: t.mean_sct, suc: t.mean_suc, reference: false });
        }
    }
    for r in results {
        if let Some(g) = &r.gradient {
            pts.push(svg::Point {
                label: "gradient code".into(),
                sct: g.mean_sct,
                suc: g.mean_suc,
                reference: true,
            });
        }
    }
    pts
}

#[allow(clippy::too_many_arguments)]
fn cmd_sweep(
    vary: Vary,
    n1: Option<usize>,
    n2: usize,
    k: usize,
    c: Option<usize>,
    model: StragglerModel,
    trials: usize,
    seed: u64,
    svg_out: Option<&Path>,
) -> CliResult<String> {
    let results = match vary {
        Vary::N1 => {
            let c = c.ok_or_else(|| CliError::Invalid("--vary n1 needs --c".into()))?;
            if n1.is_some() {
                return Err(CliError::Invalid("--vary n1 takes no --n1".into()));
            }
            sim::sweep_n1(n2, k, c, model, trials, seed)?
        }
        Vary::C => {
            let n1 = n1.ok_or_else(|| CliError::Invalid("--vary c needs --n1".into()))?;
            if c.is_some() {
                return Err(CliError::Invalid("--vary c takes no --c".into()));
            }
            sim::sweep_c(n1, n2, k, model, trials, seed)?
        }
    };
    if let Some(path) = svg_out {
        let title = match vary {
            Vary::N1 => format!("n2={n2}, k={k}, c={}, {}", c.unwrap_or(1), model.kind),
            Vary::C => format!("n1={}, n2={n2}, k={k}, {}", n1.unwrap_or(k), model.kind),
        };
        emit(Some(path), &svg::scatter(&title, &sweep_points(vary, &results)))?;
    }
    Ok(sim::sweep_csv(&results))
}

fn cmd_dump(p: ParamArgs, finished: Option<Vec<usize>>, out: Option<&Path>) -> CliResult<String> {
    let params = p.params()?;
    let ts = build_for_params(&params)?;
    let sets: Vec<Vec<usize>> = match finished {
        Some(m) => vec![normalize_finished(&params, &m)?],
        None if ts.b_rows() == 0 => Vec::new(),
        None => tiered_gc::numeric::finished_sets(params.n1, params.c),
    };
    let name = |m: &[usize]| {
        let parts: Vec<String> = m.iter().map(|s| s.to_string()).collect();
        parts.join("-")
    };

    if let Some(dir) = out {
        fs::create_dir_all(dir).map_err(|e| CliError::Invalid(format!("{}: {e}", dir.display())))?;
        emit(Some(&dir.join("f_support.txt")), &ts.f.to_text())?;
        if ts.b_rows() > 0 {
            for m in &sets {
                let path = dir.join(format!("b_support_{}.txt", name(m)));
                emit(Some(&path), &ts.b_support(m)?.to_text())?;
            }
        }
        return Ok(format!("wrote {}\n", dir.display()));
    }

    let mut s = format!("# F {}\n{}", ts.plan.construction.name(), ts.f.to_text());
    if ts.b_rows() > 0 {
        for m in &sets {
            let _ = write!(s, "# B M={}\n{}", name(m), ts.b_support(m)?.to_text());
        }
    }
    Ok(s)
}

fn run(cli: Cli) -> CliResult<String> {
    let d = Defaults::load(cli.config.as_deref())?;
    match cli.command {
        Command::Plan { p, format } => cmd_plan(p, format),
        Command::Build { p, seed, tol, out } => {
            cmd_build(p, seed.unwrap_or(d.seed), tol.unwrap_or(d.tol), &out)
        }
        Command::Verify { n1, n2, k, c, seed, tol, dir, log } => {
            let params = match (n1, n2, k, c) {
                (Some(n1), Some(n2), Some(k), Some(c)) => Some(TieredParams::new(n1, n2, k, c)?),
                _ => None,
            };
            cmd_verify(
                params,
                dir.as_deref(),
                seed.unwrap_or(d.seed),
                tol.unwrap_or(d.tol),
                log.as_deref(),
            )
        }
        Command::Simulate { p, sim, out } => {
            let (model, trials, seed) = sim.resolve(&d);
            let csv = cmd_simulate(p, model, trials, seed)?;
            emit_or_return(out.as_deref(), csv)
        }
        Command::Sweep { vary, n1, n2, k, c, sim, out, svg } => {
            let (model, trials, seed) = sim.resolve(&d);
            let csv = cmd_sweep(vary, n1, n2, k, c, model, trials, seed, svg.as_deref())?;
            emit_or_return(out.as_deref(), csv)
        }
        Command::Dump { p, finished, out } => cmd_dump(p, finished, out.as_deref()),
    }
}

fn emit_or_return(out: Option<&Path>, text: String) -> CliResult<String> {
    match out {
        Some(path) => {
            emit(Some(path), &text)?;
            Ok(String::new())
        }
        None => Ok(text),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(text) => {
            print!("{text}");
            ExitCode::SUCCESS
        }
        Err(CliError::Verification(msg)) => {
            print!("{msg}");
            eprintln!("verification failed");
            ExitCode::from(1)
        }
        Err(CliError::Invalid(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
