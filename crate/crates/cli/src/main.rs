//! Command-line front end for the GOSPA / T-GOSPA quasi-metrics.
//!
//! Subcommands: `gospa` (object sets at one time step), `tgospa` (trajectory
//! sets, exact or LP solver), `sweep` (rho sweep to CSV), `montecarlo`
//! (seeded scenario + corruption + RMS curves to CSV) and `validate`
//! (trajectory file checking). All outputs are pure functions of the inputs
//! and flags, so identical invocations produce byte-identical results.
//!
//! Exit codes: 0 success, 2 file/parse errors, 3 parameter errors, 4 exact
//! solver size bound exceeded.

mod io;

use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};

use gospa::basedist::{AsymScale, BaseDistance, Euclidean};
use gospa::error::Error as CoreError;
use gospa::evalrfs::{corrupt, generate_fig3_scenario, project_components, CorruptionConfig};
use gospa::gospa::{gospa, GospaResult};
use gospa::tgospa::{
    tgospa_exact, tgospa_exact_curve, tgospa_lp, tgospa_sweep, Solver, StepReport, TgospaResult,
};
use gospa::types::{GospaParams, MetricReport, ObjectSet, TgospaParams, TrajectorySet};

#[derive(Parser)]
#[command(
    name = "gospa",
    about = "GOSPA and T-GOSPA quasi-metrics between object and trajectory sets",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum SolverArg {
    Exact,
    Lp,
}

impl From<SolverArg> for Solver {
    fn from(value: SolverArg) -> Solver {
        match value {
            SolverArg::Exact => Solver::Exact,
            SolverArg::Lp => Solver::Lp,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// GOSPA between the object sets of two trajectory files at one time step
    Gospa {
        truth: PathBuf,
        estimate: PathBuf,
        /// Maximum localisation cost
        #[arg(long)]
        c: f64,
        /// Exponent, >= 1
        #[arg(long)]
        p: f64,
        /// False-object cost fraction, in (0, 1)
        #[arg(long)]
        rho: f64,
        /// Base distance: "euclidean" or "asym:<kappa>"
        #[arg(long, default_value = "euclidean")]
        base: String,
        /// Time step to slice both files at
        #[arg(long, default_value_t = 1)]
        at: usize,
        /// Machine-readable output
        #[arg(long)]
        json: bool,
    },
    /// T-GOSPA between two trajectory files
    Tgospa {
        truth: PathBuf,
        estimate: PathBuf,
        #[arg(long)]
        c: f64,
        #[arg(long)]
        p: f64,
        #[arg(long)]
        rho: f64,
        /// Track switching penalty
        #[arg(long)]
        gamma: f64,
        #[arg(long, default_value = "euclidean")]
        base: String,
        /// Exact dynamic programming or the LP relaxation
        #[arg(long, value_enum, default_value_t = SolverArg::Lp)]
        solver: SolverArg,
        /// Print the per-time-step cost table
        #[arg(long)]
        decompose: bool,
        #[arg(long)]
        json: bool,
    },
    /// Evaluate several rho values with one solve and write a CSV
    Sweep {
        truth: PathBuf,
        estimate: PathBuf,
        #[arg(long)]
        c: f64,
        #[arg(long)]
        p: f64,
        #[arg(long)]
        gamma: f64,
        /// Comma-separated rho values, each in (0, 1)
        #[arg(long, value_delimiter = ',', required = true)]
        rho_list: Vec<f64>,
        #[arg(long, default_value = "euclidean")]
        base: String,
        #[arg(long, value_enum, default_value_t = SolverArg::Lp)]
        solver: SolverArg,
        /// Output CSV path (stdout when omitted)
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// RMS error curves over Monte-Carlo runs of a corrupted scenario
    Montecarlo {
        /// "fig3" for the built-in four-object benchmark, or a truth file
        #[arg(long, default_value = "fig3")]
        scenario: String,
        /// Number of Monte-Carlo runs
        #[arg(long, default_value_t = 100)]
        runs: usize,
        /// Master seed: the scenario uses it directly, run i corrupts with
        /// seed + 1 + i
        #[arg(long, default_value_t = 1)]
        seed: u64,
        /// Per-step detection probability
        #[arg(long, default_value_t = 0.9)]
        p_detection: f64,
        /// Clutter rate per step
        #[arg(long, default_value_t = 20.0)]
        clutter_rate: f64,
        /// Fraction of clutter promoted to short false tracks
        #[arg(long, default_value_t = 0.005)]
        false_track_fraction: f64,
        /// Identity-swap probability per step
        #[arg(long, default_value_t = 0.0)]
        switch_prob: f64,
        /// Measurement noise variance per positional component
        #[arg(long, default_value_t = 4.0)]
        noise_var: f64,
        /// Clutter area bounds "low,high", applied to every positional component
        #[arg(long, value_delimiter = ',', default_values_t = [0.0, 800.0])]
        region: Vec<f64>,
        #[arg(long, default_value_t = 10.0)]
        c: f64,
        #[arg(long, default_value_t = 2.0)]
        p: f64,
        #[arg(long, default_value_t = 1.0)]
        gamma: f64,
        #[arg(long, value_delimiter = ',', default_values_t = [0.3, 0.5, 0.7])]
        rho_list: Vec<f64>,
        /// The exact solver evaluates all window truncations in one pass;
        /// the LP re-solves every window and suits short windows only
        #[arg(long, value_enum, default_value_t = SolverArg::Exact)]
        solver: SolverArg,
        /// Output CSV path (stdout when omitted)
        #[arg(long)]
        out: Option<PathBuf>,
        /// Write the generated (projected) truth to this trajectory file
        #[arg(long)]
        dump_scenario: Option<PathBuf>,
    },
    /// Parse and validate a trajectory file
    Validate { file: PathBuf },
}

struct CliError {
    code: i32,
    message: String,
}

impl CliError {
    fn parse(message: impl Into<String>) -> Self {
        CliError {
            code: 2,
            message: message.into(),
        }
    }

    fn parameter(message: impl Into<String>) -> Self {
        CliError {
            code: 3,
            message: message.into(),
        }
    }
}

impl From<io::ParseError> for CliError {
    fn from(e: io::ParseError) -> Self {
        CliError::parse(e.0)
    }
}

impl From<CoreError> for CliError {
    fn from(e: CoreError) -> Self {
        let code = match &e {
            CoreError::SizeLimit { .. } => 4,
            CoreError::InvalidParameter { .. }
            | CoreError::AsymmetricBase
            | CoreError::OutOfWindow { .. } => 3,
            _ => 2,
        };
        CliError {
            code,
            message: e.to_string(),
        }
    }
}

fn main() {
    let cli = Cli::parse();
    if let Err(e) = run(cli.command) {
        eprintln!("error: {}", e.message);
        std::process::exit(e.code);
    }
}

fn parse_base(spec: &str) -> Result<Box<dyn BaseDistance>, CliError> {
    if spec == "euclidean" {
        return Ok(Box::new(Euclidean));
    }
    if let Some(kappa) = spec.strip_prefix("asym:") {
        let kappa: f64 = kappa
            .parse()
            .map_err(|_| CliError::parameter(format!("invalid kappa in --base {spec}")))?;
        return Ok(Box::new(AsymScale::new(kappa)?));
    }
    Err(CliError::parameter(format!(
        "unknown base distance {spec}; use \"euclidean\" or \"asym:<kappa>\""
    )))
}

/// All present states of the file's trajectories at one time step.
fn object_set_at(set: &TrajectorySet, k: usize) -> Result<ObjectSet, CliError> {
    let slices = set.slice(k)?;
    let states: Vec<gospa::types::ObjectState> = slices
        .into_iter()
        .flat_map(|s| s.iter().cloned().collect::<Vec<_>>())
        .collect();
    Ok(ObjectSet::new(states)?)
}

fn format_float(v: f64) -> String {
    format!("{v}")
}

fn report_json(report: &MetricReport) -> serde_json::Value {
    serde_json::json!({
        "total": report.total,
        "total_pth_power": report.total_pth_power,
        "localisation": report.localisation,
        "missed": report.missed,
        "false": report.false_cost,
        "switch": report.switch,
    })
}

fn print_report(report: &MetricReport) {
    println!("total: {}", format_float(report.total));
    println!("total^p: {}", format_float(report.total_pth_power));
    println!("localisation: {}", format_float(report.localisation));
    println!("missed: {}", format_float(report.missed));
    println!("false: {}", format_float(report.false_cost));
    println!("switch: {}", format_float(report.switch));
}

fn print_step_table(per_step: &[StepReport]) {
    println!("step,localisation,missed,false,switch");
    for (k, s) in per_step.iter().enumerate() {
        println!(
            "{},{},{},{},{}",
            k + 1,
            format_float(s.localisation),
            format_float(s.missed),
            format_float(s.false_cost),
            format_float(s.switch)
        );
    }
}

fn write_output(path: Option<&Path>, content: &str) -> Result<(), CliError> {
    match path {
        Some(p) => {
            std::fs::write(p, content).map_err(|e| CliError::parse(format!("{}: {e}", p.display())))
        }
        None => {
            print!("{content}");
            Ok(())
        }
    }
}

fn run(command: Command) -> Result<(), CliError> {
    match command {
        Command::Gospa {
            truth,
            estimate,
            c,
            p,
            rho,
            base,
            at,
            json,
        } => {
            let base = parse_base(&base)?;
            let params = GospaParams::new(c, p, rho)?;
            let truth_set = io::read_trajectory_set(&truth)?;
            let estimate_set = io::read_trajectory_set(&estimate)?;
            let truth_objects = object_set_at(&truth_set, at)?;
            let estimate_objects = object_set_at(&estimate_set, at)?;
            let result: GospaResult = gospa(&truth_objects, &estimate_objects, &params, &*base)?;
            if json {
                let mut value = report_json(&result.report);
                value["assignment"] = serde_json::json!(result.assignment);
                value["unassigned_truth"] = serde_json::json!(result.unassigned_truth);
                value["unassigned_estimate"] = serde_json::json!(result.unassigned_estimate);
                println!("{value}");
            } else {
                print_report(&result.report);
            }
            Ok(())
        }
        Command::Tgospa {
            truth,
            estimate,
            c,
            p,
            rho,
            gamma,
            base,
            solver,
            decompose,
            json,
        } => {
            let base = parse_base(&base)?;
            let params = TgospaParams::from_values(c, p, rho, gamma)?;
            let truth_set = io::read_trajectory_set(&truth)?;
            let estimate_set = io::read_trajectory_set(&estimate)?;
            let result: TgospaResult = match Solver::from(solver) {
                Solver::Exact => tgospa_exact(&truth_set, &estimate_set, &params, &*base)?,
                Solver::Lp => tgospa_lp(&truth_set, &estimate_set, &params, &*base)?,
            };
            if json {
                let mut value = report_json(&result.report);
                if decompose {
                    value["per_step"] = serde_json::json!(result
                        .per_step
                        .iter()
                        .map(|s| serde_json::json!({
                            "localisation": s.localisation,
                            "missed": s.missed,
                            "false": s.false_cost,
                            "switch": s.switch,
                        }))
                        .collect::<Vec<_>>());
                }
                println!("{value}");
            } else {
                print_report(&result.report);
                if decompose {
                    print_step_table(&result.per_step);
                }
            }
            Ok(())
        }
        Command::Sweep {
            truth,
            estimate,
            c,
            p,
            gamma,
            rho_list,
            base,
            solver,
            out,
        } => {
            let base = parse_base(&base)?;
            let truth_set = io::read_trajectory_set(&truth)?;
            let estimate_set = io::read_trajectory_set(&estimate)?;
            let results = tgospa_sweep(
                &truth_set,
                &estimate_set,
                c,
                p,
                gamma,
                &rho_list,
                &*base,
                solver.into(),
            )?;
            let mut csv = String::from("rho,total,localisation,missed,false,switch\n");
            for (rho, result) in rho_list.iter().zip(&results) {
                csv.push_str(&format!(
                    "{},{},{},{},{},{}\n",
                    format_float(*rho),
                    format_float(result.report.total),
                    format_float(result.report.localisation),
                    format_float(result.report.missed),
                    format_float(result.report.false_cost),
                    format_float(result.report.switch)
                ));
            }
            write_output(out.as_deref(), &csv)
        }
        Command::Montecarlo {
            scenario,
            runs,
            seed,
            p_detection,
            clutter_rate,
            false_track_fraction,
            switch_prob,
            noise_var,
            region,
            c,
            p,
            gamma,
            rho_list,
            solver,
            out,
            dump_scenario,
        } => {
            if runs < 1 {
                return Err(CliError::parameter("--runs must be at least 1"));
            }
            let truth = if scenario == "fig3" {
                project_components(&generate_fig3_scenario(seed), &[0, 2])?
            } else {
                io::read_trajectory_set(Path::new(&scenario))?
            };
            if let Some(path) = &dump_scenario {
                io::write_trajectory_set(path, &truth)?;
            }
            let dim = truth
                .dim()
                .ok_or_else(|| CliError::parse("scenario has no trajectories"))?;
            if !(noise_var.is_finite() && noise_var >= 0.0) {
                return Err(CliError::parameter("--noise-var must be >= 0"));
            }
            if region.len() != 2 {
                return Err(CliError::parameter("--region needs exactly \"low,high\""));
            }
            let mut noise_cov = vec![0.0; dim * dim];
            for a in 0..dim {
                noise_cov[a * dim + a] = noise_var;
            }
            let make_config = |run: usize| CorruptionConfig {
                detection_probability: p_detection,
                clutter_rate,
                false_track_fraction,
                false_track_len: (1, 3),
                clutter_region: vec![(region[0], region[1]); dim],
                noise_cov: noise_cov.clone(),
                switch_probability: switch_prob,
                position_indices: (0..dim).collect(),
                seed: seed + 1 + run as u64,
            };
            let estimates: Vec<TrajectorySet> = (0..runs)
                .map(|run| corrupt(&truth, &make_config(run)))
                .collect::<gospa::Result<Vec<_>>>()?;

            let window = truth.window();
            let base = Euclidean;
            let mut csv = String::from("k,rho,rms,localisation,missed,false,switch\n");
            for &rho in &rho_list {
                let params = TgospaParams::from_values(c, p, rho, gamma)?;
                // per step: squared totals and p-th-power components per run
                let mut sq = vec![Vec::with_capacity(runs); window];
                let mut loc = vec![Vec::with_capacity(runs); window];
                let mut missed = vec![Vec::with_capacity(runs); window];
                let mut false_c = vec![Vec::with_capacity(runs); window];
                let mut switch = vec![Vec::with_capacity(runs); window];
                for estimate in &estimates {
                    let curve: Vec<MetricReport> = match Solver::from(solver) {
                        Solver::Exact => tgospa_exact_curve(&truth, estimate, &params, &base)?,
                        Solver::Lp => (1..=window)
                            .map(|k| {
                                Ok(tgospa_lp(
                                    &truth.truncated(k)?,
                                    &estimate.truncated(k)?,
                                    &params,
                                    &base,
                                )?
                                .report)
                            })
                            .collect::<gospa::Result<Vec<_>>>()?,
                    };
                    for (k, report) in curve.iter().enumerate() {
                        sq[k].push(report.total * report.total);
                        loc[k].push(report.localisation);
                        missed[k].push(report.missed);
                        false_c[k].push(report.false_cost);
                        switch[k].push(report.switch);
                    }
                }
                for k in 0..window {
                    let denom = (runs * (k + 1)) as f64;
                    let rms = (gospa::evalrfs::pairwise_sum(&sq[k]) / denom).sqrt();
                    let rms_of = |values: &[f64]| {
                        format_float((gospa::evalrfs::pairwise_sum(values) / denom).sqrt())
                    };
                    csv.push_str(&format!(
                        "{},{},{},{},{},{},{}\n",
                        k + 1,
                        format_float(rho),
                        format_float(rms),
                        rms_of(&loc[k]),
                        rms_of(&missed[k]),
                        rms_of(&false_c[k]),
                        rms_of(&switch[k])
                    ));
                }
            }
            write_output(out.as_deref(), &csv)
        }
        Command::Validate { file } => {
            let set = io::read_trajectory_set(&file)?;
            let states: usize = set.trajectories().iter().map(|t| t.len()).sum();
            println!(
                "valid trajectory file: T={}, trajectories={}, states={}, dimension={}",
                set.window(),
                set.len(),
                states,
                set.dim().map_or("n/a".to_string(), |d| d.to_string())
            );
            Ok(())
        }
    }
}
