//! Reproduction runs: each target sweeps, fits, writes CSV and data files,
//! and compares the fitted quantities with reference values.

use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use clap::ValueEnum;
use hermite_scaling::experiment::{
    detect_slope_change, fit_records, ConvergenceRecord, FitModel, FunctionSpec, Measure, Schedule, SweepConfig,
};
use hermite_scaling::operators::transition_point;

use crate::error::{CliError, CliResult};
use crate::output::{records_data, write_csv_file, DataFile};
use crate::sweep::run_parallel;

/// Fitted algebraic orders for `(h, β = 5, β = 30/√N)` over `N ∈ [200, 400]`.
pub const ORDER_REFERENCE: [(f64, f64, f64); 6] = [
    (1.0, 0.940, 2.04),
    (1.4, 1.32, 2.83),
    (1.8, 1.70, 3.62),
    (2.2, 2.07, 4.41),
    (2.6, 2.45, 5.20),
    (3.0, 2.83, 5.99),
];
pub const ORDER_TOL: f64 = 0.15;

/// Transition cutoffs `X*` for `(1 + x²)^{-h}`.
pub const TRANSITION_REFERENCE: [(f64, f64); 4] = [(1.5, 5.92), (2.0, 11.1), (2.5, 16.7), (3.0, 22.5)];
pub const TRANSITION_TOL: f64 = 0.5;
pub const TRANSITION_BRACKET: (f64, f64) = (1.0, 200.0);

const MIN_R2: f64 = 0.95;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Target {
    Fig1,
    Fig2,
    Fig3,
    Fig4,
    Table1,
    Table2,
}

impl Target {
    pub const ALL: [Target; 6] = [
        Self::Fig1,
        Self::Fig2,
        Self::Fig3,
        Self::Fig4,
        Self::Table1,
        Self::Table2,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Self::Fig1 => "fig1",
            Self::Fig2 => "fig2",
            Self::Fig3 => "fig3",
            Self::Fig4 => "fig4",
            Self::Table1 => "table1",
            Self::Table2 => "table2",
        }
    }
}

impl fmt::Display for Target {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Target {
    type Err = CliError;

    fn from_str(s: &str) -> CliResult<Self> {
        Self::ALL
            .into_iter()
            .find(|t| t.name() == s)
            .ok_or_else(|| CliError::Usage(format!("unknown target `{s}`")))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Debug, Clone)]
pub struct Report {
    pub target: Target,
    pub checks: Vec<Check>,
    pub files: Vec<PathBuf>,
}

impl Report {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> usize {
        self.checks.iter().filter(|c| !c.passed).count()
    }

    pub fn summary(&self) -> String {
        let mut s = format!("{}\n", self.target);
        for c in &self.checks {
            s.push_str(&format!(
                "{}  {}: {}\n",
                if c.passed { "PASS" } else { "FAIL" },
                c.name,
                c.detail
            ));
        }
        s.push_str(&format!(
            "{}: {}/{} checks passed\n",
            if self.passed() { "PASS" } else { "FAIL" },
            self.checks.len() - self.failures(),
            self.checks.len()
        ));
        s
    }
}

struct Run<'a> {
    dir: &'a Path,
    threads: usize,
    checks: Vec<Check>,
    files: Vec<PathBuf>,
}

impl Run<'_> {
    fn sweep(&mut self, name: &str, config: SweepConfig) -> CliResult<Vec<ConvergenceRecord>> {
        let records = run_parallel(&config, self.threads)?;
        let failed: Vec<String> = records
            .iter()
            .filter_map(|r| r.failure.as_ref().map(|e| format!("N={}: {e}", r.n)))
            .collect();
        if !failed.is_empty() {
            self.check(&format!("{name} sweep points"), false, failed.join("; "));
        }
        let csv = self.dir.join(format!("{name}.csv"));
        write_csv_file(&csv, &records)?;
        self.files.push(csv);
        let comment = format!(
            "{} gamma={} schedule={} measure={}",
            config.function, config.gamma, config.schedule, config.measure
        );
        self.data(&format!("{name}.dat"), &records_data(&comment, &records))?;
        Ok(records)
    }

    fn data(&mut self, file: &str, d: &DataFile) -> CliResult<()> {
        let path = self.dir.join(file);
        d.write(&path)?;
        self.files.push(path);
        Ok(())
    }

    fn check(&mut self, name: &str, passed: bool, detail: String) {
        self.checks.push(Check {
            name: name.to_string(),
            passed,
            detail,
        });
    }
}

fn config(function: FunctionSpec, schedule: Schedule, n_values: Vec<usize>, measure: Measure) -> SweepConfig {
    SweepConfig {
        function,
        gamma: 1.0,
        n_values,
        schedule,
        measure,
    }
}

fn fit_with_curve(
    records: &[ConvergenceRecord],
    model: FitModel,
    d: &mut DataFile,
) -> CliResult<hermite_scaling::experiment::Fit> {
    let fit = fit_records(records, model)?;
    for r in records {
        d.row(&[r.n as f64, r.error, fit.predict_log(model, r.n as f64).exp()]);
    }
    Ok(fit)
}

const EIGHTH_POWER: FunctionSpec = FunctionSpec::GaussianPower { n: 4 };

fn eighth_power_grid() -> Vec<usize> {
    (32..=256).step_by(16).collect()
}

fn fig1(run: &mut Run) -> CliResult<()> {
    let recs = run.sweep(
        "fig1",
        config(
            EIGHTH_POWER,
            Schedule::Constant(1.0),
            eighth_power_grid(),
            Measure::L2Solution,
        ),
    )?;
    let model = FitModel::ExpPower(4.0 / 7.0);
    let mut d = DataFile::new(&format!("e^(-x^8), beta=1, fit {model}"), &["n", "error", "fit"]);
    let fit = fit_with_curve(&recs, model, &mut d)?;
    run.data("fig1_fit.dat", &d)?;
    run.check(
        "beta=1 follows exp(-c N^(4/7))",
        fit.r2 > MIN_R2,
        format!(
            "rate {:.4}, R2 {:.4} over {} points (need R2 > {MIN_R2})",
            fit.rate, fit.r2, fit.points
        ),
    );
    Ok(())
}

fn fig2(run: &mut Run) -> CliResult<()> {
    let scaled = run.sweep(
        "fig2",
        config(
            EIGHTH_POWER,
            Schedule::Power { c: 1.0, p: 0.375 },
            eighth_power_grid(),
            Measure::L2Solution,
        ),
    )?;
    let plain = run.sweep(
        "fig2_beta1",
        config(
            EIGHTH_POWER,
            Schedule::Constant(1.0),
            eighth_power_grid(),
            Measure::L2Solution,
        ),
    )?;
    let model = FitModel::ExpPower(1.0);
    let mut d = DataFile::new(&format!("e^(-x^8), beta=N^(3/8), fit {model}"), &["n", "error", "fit"]);
    let fit = fit_with_curve(&scaled, model, &mut d)?;
    run.data("fig2_fit.dat", &d)?;
    run.check(
        "beta=N^(3/8) converges geometrically",
        fit.r2 > MIN_R2,
        format!(
            "rate {:.4}, R2 {:.4} over {} points above the rounding floor (need R2 > {MIN_R2})",
            fit.rate, fit.r2, fit.points
        ),
    );
    let at = |r: &[ConvergenceRecord]| r.iter().find(|r| r.n == 128).map_or(f64::NAN, |r| r.error);
    let (e1, e2) = (at(&plain), at(&scaled));
    run.check(
        "scaling gains 10x at N=128",
        e1 >= 10.0 * e2,
        format!("beta=1 {e1:.3e} vs beta=N^(3/8) {e2:.3e}"),
    );
    Ok(())
}

fn fig3(run: &mut Run) -> CliResult<()> {
    let ns: Vec<usize> = (64..=512).step_by(32).collect();
    let f = FunctionSpec::Algebraic { h: 1.0 };
    let plain = run.sweep(
        "fig3_beta1",
        config(f, Schedule::Constant(1.0), ns.clone(), Measure::L2Solution),
    )?;
    let scaled = run.sweep(
        "fig3_beta10",
        config(f, Schedule::LogSqrt(10.0), ns, Measure::L2Solution),
    )?;
    let mut d = DataFile::new(
        "(1+x^2)^-1: beta=1 against beta=10/sqrt(N)",
        &["n", "error_beta1", "error_beta10"],
    );
    let mut losing = Vec::new();
    for (p, s) in plain.iter().zip(&scaled) {
        d.row(&[p.n as f64, p.error, s.error]);
        if s.error.partial_cmp(&p.error) != Some(std::cmp::Ordering::Less) {
            losing.push(p.n.to_string());
        }
    }
    run.data("fig3.dat", &d)?;
    run.check(
        "beta=10/sqrt(N) beats beta=1 for every N >= 64",
        losing.is_empty(),
        if losing.is_empty() {
            "all N".to_string()
        } else {
            format!("not smaller at N = {}", losing.join(", "))
        },
    );
    Ok(())
}

/// `N` grid for the slope-change search: dense where the transitions sit.
pub fn slope_change_grid() -> Vec<usize> {
    (4..=40)
        .step_by(4)
        .chain((48..=160).step_by(16))
        .chain((192..=640).step_by(32))
        .collect()
}

fn fig4(run: &mut Run) -> CliResult<()> {
    let mut d = DataFile::new(
        "(1+x^2)^-h at beta=1; early fit exp_power(1/2), late fit algebraic",
        &["n", "error", "early_fit", "late_fit"],
    );
    let mut summary = DataFile::new(
        "slope change against transition cutoff",
        &["h", "n_b", "sqrt_2n_b", "x_star", "ratio"],
    );
    for (h, x_ref) in TRANSITION_REFERENCE {
        let recs = run.sweep(
            &format!("fig4_h{h}"),
            config(
                FunctionSpec::Algebraic { h },
                Schedule::Constant(1.0),
                slope_change_grid(),
                Measure::L2Nodal,
            ),
        )?;
        let pts: Vec<(f64, f64)> = recs.iter().map(|r| (r.n as f64, r.error)).collect();
        let sc = detect_slope_change(&pts)?;
        d.block(&format!("h={h}"));
        for (n, e) in &pts {
            d.row(&[
                *n,
                *e,
                sc.early
                    .predict_log(hermite_scaling::experiment::SlopeChange::EARLY, *n)
                    .exp(),
                sc.late
                    .predict_log(hermite_scaling::experiment::SlopeChange::LATE, *n)
                    .exp(),
            ]);
        }
        // compared in the collocation half-width X = sqrt(2N)
        let x = (2.0 * sc.location()).sqrt();
        let ratio = x / x_ref;
        summary.row(&[h, sc.location(), x, x_ref, ratio]);
        run.check(
            &format!("slope change h={h}"),
            (0.5..=2.0).contains(&ratio),
            format!(
                "N_b {:.1}, sqrt(2 N_b) {x:.2} against {x_ref} (ratio {ratio:.2}, need 0.5..2)",
                sc.location()
            ),
        );
    }
    run.data("fig4.dat", &d)?;
    run.data("fig4_summary.dat", &summary)?;
    Ok(())
}

fn table1(run: &mut Run) -> CliResult<()> {
    let ns: Vec<usize> = (200..=400).step_by(20).collect();
    let mut d = DataFile::new(
        "fitted algebraic orders, N in [200, 400]",
        &[
            "h",
            "order_beta5",
            "reference_beta5",
            "order_beta30",
            "reference_beta30",
        ],
    );
    for (h, ref5, ref30) in ORDER_REFERENCE {
        let f = FunctionSpec::Algebraic { h };
        let a = run.sweep(
            &format!("table1_h{h}_beta5"),
            config(f, Schedule::Constant(5.0), ns.clone(), Measure::L2Nodal),
        )?;
        let b = run.sweep(
            &format!("table1_h{h}_beta30"),
            config(f, Schedule::LogSqrt(30.0), ns.clone(), Measure::L2Nodal),
        )?;
        let ra = fit_records(&a, FitModel::Algebraic)?.rate;
        let rb = fit_records(&b, FitModel::Algebraic)?.rate;
        d.row(&[h, ra, ref5, rb, ref30]);
        for (label, got, want) in [("beta=5", ra, ref5), ("beta=30/sqrt(N)", rb, ref30)] {
            run.check(
                &format!("order h={h} {label}"),
                (got - want).abs() <= ORDER_TOL,
                format!("{got:.3} against {want} (tol {ORDER_TOL})"),
            );
        }
    }
    run.data("table1.dat", &d)?;
    Ok(())
}

fn table2(run: &mut Run) -> CliResult<()> {
    let mut d = DataFile::new(
        "transition cutoffs in X = sqrt(2N)",
        &["h", "x_star", "n_star", "reference_x"],
    );
    for (h, want) in TRANSITION_REFERENCE {
        let t = transition_point(&FunctionSpec::Algebraic { h }.build()?, TRANSITION_BRACKET)?;
        d.row(&[h, t.cutoff, t.n, want]);
        run.check(
            &format!("transition h={h}"),
            (t.cutoff - want).abs() <= TRANSITION_TOL,
            format!(
                "X* {:.3} (N* {:.2}) against {want} (tol {TRANSITION_TOL})",
                t.cutoff, t.n
            ),
        );
    }
    run.data("table2.dat", &d)?;
    Ok(())
}

/// Runs `target`, writing every artifact and `<target>_summary.txt` under `dir`.
pub fn reproduce(target: Target, dir: &Path, threads: usize) -> CliResult<Report> {
    std::fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))?;
    let mut run = Run {
        dir,
        threads,
        checks: Vec::new(),
        files: Vec::new(),
    };
    match target {
        Target::Fig1 => fig1(&mut run)?,
        Target::Fig2 => fig2(&mut run)?,
        Target::Fig3 => fig3(&mut run)?,
        Target::Fig4 => fig4(&mut run)?,
        Target::Table1 => table1(&mut run)?,
        Target::Table2 => table2(&mut run)?,
    }
    let mut report = Report {
        target,
        checks: run.checks,
        files: run.files,
    };
    let path = dir.join(format!("{target}_summary.txt"));
    std::fs::write(&path, report.summary()).map_err(|e| CliError::io(&path, e))?;
    report.files.push(path);
    Ok(report)
}
