use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use hermite_scaling::experiment::{fit_order, FitModel};
use hermite_scaling::operators::transition_point;
use hermite_scaling_cli::config::Settings;
use hermite_scaling_cli::output::{csv_string, read_csv_file, records_data, write_csv_file};
use hermite_scaling_cli::reproduce::{reproduce, Target, TRANSITION_BRACKET};
use hermite_scaling_cli::sweep::{default_threads, run_parallel};
use hermite_scaling_cli::{exit, CliError, CliResult};

/// Scaled Hermite-Galerkin convergence experiments.
#[derive(Debug, Parser)]
#[command(name = "hscale", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Solve -u'' + gamma u = f for each N and write one CSV row per N
    Sweep(Common),
    /// Fit a convergence order to a CSV file or to a fresh sweep
    Fit {
        #[command(flatten)]
        common: Common,
        /// CSV written by `sweep`; without it the sweep is run from the flags
        #[arg(long)]
        input: Option<PathBuf>,
        /// `algebraic` or `exp_power(g)`
        #[arg(long, default_value = "algebraic")]
        model: String,
    },
    /// Locate where the spatial and frequency tails of u cross
    Transition(Common),
    /// Regenerate a figure or table and compare against reference values
    Reproduce {
        target: Target,
        /// Output directory
        #[arg(long, default_value = "reproduce-out")]
        out: PathBuf,
        #[arg(long)]
        threads: Option<usize>,
    },
}

#[derive(Debug, Args)]
struct Common {
    /// Catalog function, e.g. `algebraic:h=1.5`, `gaussian_power:n=4`, or `algebraic` with --h
    #[arg(long)]
    function: Option<String>,
    /// Exponent of the algebraic family
    #[arg(long)]
    h: Option<f64>,
    /// N values: `a,b,c` or `start:stop:step`
    #[arg(long)]
    n: Option<String>,
    #[arg(long)]
    gamma: Option<f64>,
    /// constant(c), power(c,p), logsqrt(c) or hlog(c)
    #[arg(long)]
    schedule: Option<String>,
    /// l2_solution, l2_nodal, l2_projection or h1_solution
    #[arg(long)]
    measure: Option<String>,
    /// Output file; stdout when absent
    #[arg(long)]
    out: Option<PathBuf>,
    /// Flat key=value file whose entries override the flags
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    threads: Option<usize>,
}

impl Common {
    fn settings(&self) -> CliResult<Settings> {
        let flags = Settings {
            function: self.function.clone(),
            h: self.h,
            n: self.n.clone(),
            gamma: self.gamma,
            schedule: self.schedule.clone(),
            measure: self.measure.clone(),
            out: self.out.clone(),
        };
        Ok(match &self.config {
            Some(path) => flags.overlay(Settings::load(path)?),
            None => flags,
        })
    }

    fn threads(&self) -> usize {
        self.threads.unwrap_or_else(default_threads)
    }
}

fn emit(out: &Option<PathBuf>, text: &str) -> CliResult<()> {
    match out {
        Some(path) => std::fs::write(path, text).map_err(|e| CliError::io(path, e)),
        None => std::io::stdout()
            .write_all(text.as_bytes())
            .map_err(|e| CliError::io("<stdout>", e)),
    }
}

fn sweep(common: &Common) -> CliResult<u8> {
    let plan = common.settings()?.resolve()?;
    let records = run_parallel(&plan.sweep, common.threads())?;
    match &plan.out {
        Some(path) => {
            write_csv_file(path, &records)?;
            let comment = plan.to_config().trim_end().replace('\n', "; ");
            records_data(&comment, &records).write(&path.with_extension("dat"))?;
        }
        None => emit(&None, &csv_string(&records))?,
    }
    let mut status = exit::OK;
    for r in &records {
        if let Some(e) = &r.failure {
            eprintln!("N={}: {e}", r.n);
            status = exit::NUMERICAL;
        }
    }
    Ok(status)
}

fn fit(common: &Common, input: &Option<PathBuf>, model: &str) -> CliResult<u8> {
    let model: FitModel = model.parse()?;
    let settings = common.settings()?;
    let points: Vec<(f64, f64)> = match input {
        Some(path) => read_csv_file(path)?.iter().map(|r| (r.n as f64, r.error)).collect(),
        None => {
            let plan = settings.resolve()?;
            run_parallel(&plan.sweep, common.threads())?
                .iter()
                .map(|r| (r.n as f64, r.error))
                .collect()
        }
    };
    let f = fit_order(&points, model)?;
    emit(
        &settings.out,
        &format!(
            "model = {model}\nrate = {:.6}\nintercept = {:.6}\nr2 = {:.6}\npoints = {}\n",
            f.rate, f.intercept, f.r2, f.points
        ),
    )?;
    Ok(exit::OK)
}

fn transition(common: &Common) -> CliResult<u8> {
    let settings = common.settings()?;
    let u = settings.function_spec()?.build()?;
    let t = transition_point(&u, TRANSITION_BRACKET)?;
    emit(
        &settings.out,
        &format!(
            "function = {}\nX* = {:.6}\nN* = {:.6}\nnearest N = {}\n",
            u.id(),
            t.cutoff,
            t.n,
            t.n.round()
        ),
    )?;
    Ok(exit::OK)
}

fn run(cli: Cli) -> CliResult<u8> {
    match &cli.command {
        Command::Sweep(c) => sweep(c),
        Command::Fit { common, input, model } => fit(common, input, model),
        Command::Transition(c) => transition(c),
        Command::Reproduce { target, out, threads } => {
            let report = reproduce(*target, out, threads.unwrap_or_else(default_threads))?;
            print!("{}", report.summary());
            if report.passed() {
                Ok(exit::OK)
            } else {
                Err(CliError::Comparison(report.failures()))
            }
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { exit::USAGE } else { exit::OK });
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("hscale: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
