//! Command-line driver for the tournament toolkit.
//!
//! Subcommands build fixture plans, simulate single runs or seeded Monte
//! Carlo batches, compare the three formats, lay fixtures onto a calendar,
//! and tabulate the analytic outcome model. All randomness flows from the
//! `--seed` flag, so every command is reproducible byte for byte. Outputs
//! are plot-ready CSV tables and machine-readable JSON under `--out`.
//!
//! Exit codes: 0 on success, 2 on usage errors, 3 on I/O errors.

use std::fmt;
use std::fs::{self, File};
use std::io::{BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use chrono::NaiveDate;
use clap::{Args, Parser, Subcommand, ValueEnum};

use cupsim::export;
use cupsim::metrics::match_metrics;
use cupsim::model::Side;
use cupsim::montecarlo::{collect_runs, collect_runs_serial, summarize};
use cupsim::{
    build_plan, compare_formats, duration_curve, run_stream, run_tournament, schedule,
    BatchConfig, FormatKind, Roster, ScheduleParams, WORLD_CUP_TEAMS,
};

#[derive(Parser)]
#[command(
    name = "cupsim",
    version,
    about = "Simulate and compare 48-team tournament formats",
    propagate_version = true
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Export a format's fixture graph as JSON.
    Plan(PlanArgs),
    /// Simulate one tournament: match log, final classification, per-match metrics.
    Simulate(SimulateArgs),
    /// Run a Monte Carlo batch and write its summary and plot-ready histograms.
    Batch(BatchArgs),
    /// Run identical batches over all three formats and write a comparison report.
    Compare(CompareArgs),
    /// Lay fixtures onto a calendar under capacity and rest constraints.
    Schedule(ScheduleArgs),
    /// Tabulate analytic win/draw/loss probabilities by rank difference.
    ModelCurve(ModelCurveArgs),
}

/// Tournament format, by its public name.
#[derive(Clone, Copy, Debug, ValueEnum)]
enum FormatArg {
    #[value(name = "double-elim-48")]
    DoubleElim48,
    #[value(name = "group-of-3")]
    GroupOf3,
    #[value(name = "group-of-4")]
    GroupOf4,
}

impl From<FormatArg> for FormatKind {
    fn from(arg: FormatArg) -> FormatKind {
        match arg {
            FormatArg::DoubleElim48 => FormatKind::DoubleElim48,
            FormatArg::GroupOf3 => FormatKind::GroupOf3,
            FormatArg::GroupOf4 => FormatKind::GroupOf4,
        }
    }
}

#[derive(Args)]
struct OutputArgs {
    /// Directory for output files (created if missing).
    #[arg(long, default_value = "out")]
    out: PathBuf,
    /// List the files the command would write, without writing anything.
    #[arg(long)]
    dry_run: bool,
}

#[derive(Args)]
struct PlanArgs {
    /// Format to export.
    #[arg(long, value_enum)]
    format: FormatArg,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args)]
struct SimulateArgs {
    /// Format to simulate.
    #[arg(long, value_enum)]
    format: FormatArg,
    /// Base seed; fully determines draw, lots and scores.
    #[arg(long)]
    seed: u64,
    /// Which run of the seed's batch to replay.
    #[arg(long, default_value_t = 0)]
    run_index: u64,
    /// Roster file (.csv or .json); defaults to synthetic ranks 1..48.
    #[arg(long)]
    roster: Option<PathBuf>,
    /// FIFA-rank cutoff separating TOP-ranked teams for interest classes.
    #[arg(long, default_value_t = 8)]
    interest_threshold: u32,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args)]
struct BatchArgs {
    /// Format to simulate.
    #[arg(long, value_enum)]
    format: FormatArg,
    /// Number of tournament runs.
    #[arg(long)]
    runs: usize,
    /// Base seed; run i always uses the same RNG stream.
    #[arg(long)]
    seed: u64,
    /// Displacement exponent of the fairness index.
    #[arg(long, default_value_t = 2.0)]
    gamma: f64,
    /// Roster file (.csv or .json); defaults to synthetic ranks 1..48.
    #[arg(long)]
    roster: Option<PathBuf>,
    /// FIFA-rank cutoff separating TOP-ranked teams for interest classes.
    #[arg(long, default_value_t = 8)]
    interest_threshold: u32,
    /// Force single-threaded execution (output is identical either way).
    #[arg(long)]
    serial: bool,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args)]
struct CompareArgs {
    /// Number of tournament runs per format.
    #[arg(long)]
    runs: usize,
    /// Base seed, shared by all three formats.
    #[arg(long)]
    seed: u64,
    /// Roster file (.csv or .json); defaults to synthetic ranks 1..48.
    #[arg(long)]
    roster: Option<PathBuf>,
    /// FIFA-rank cutoff separating TOP-ranked teams for interest classes.
    #[arg(long, default_value_t = 8)]
    interest_threshold: u32,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args)]
struct ScheduleArgs {
    /// Format to schedule.
    #[arg(long, value_enum)]
    format: FormatArg,
    /// Daily match capacity on days not covered by --per-day-capacities.
    #[arg(long, default_value_t = 4)]
    max_per_day: usize,
    /// Per-day capacities for the opening days, e.g. `6,6,6,6`.
    #[arg(long, value_delimiter = ',')]
    per_day_capacities: Option<Vec<usize>>,
    /// Minimum days between a fixture and each of its predecessors.
    #[arg(long, default_value_t = 4)]
    rest: u32,
    /// Reduced rest allowed before repechage fixtures.
    #[arg(long, default_value_t = 4)]
    repechage_rest: u32,
    /// Calendar date of day 0.
    #[arg(long, default_value = "2026-06-15")]
    start_date: NaiveDate,
    /// Also sweep uniform capacities LOW..HIGH into a duration curve.
    #[arg(long, value_parser = parse_sweep, value_name = "LOW..HIGH")]
    capacity_sweep: Option<(usize, usize)>,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args)]
struct ModelCurveArgs {
    /// Largest FIFA rank to tabulate.
    #[arg(long, default_value_t = 50)]
    max_rank: u32,
    #[command(flatten)]
    output: OutputArgs,
}

fn parse_sweep(s: &str) -> Result<(usize, usize), String> {
    let (lo, hi) = s
        .split_once("..")
        .ok_or_else(|| String::from("expected LOW..HIGH, e.g. 1..12"))?;
    let lo: usize = lo.trim().parse().map_err(|e| format!("bad low bound: {e}"))?;
    let hi: usize = hi.trim().parse().map_err(|e| format!("bad high bound: {e}"))?;
    if lo == 0 || hi < lo {
        return Err(String::from("expected 1 <= LOW <= HIGH"));
    }
    Ok((lo, hi))
}

/// Failures after argument parsing, bucketed by exit code.
enum CliError {
    /// Invalid values or infeasible configuration — exit 2.
    Usage(String),
    /// Filesystem or serialization failure — exit 3.
    Io(String),
}

impl From<cupsim::Error> for CliError {
    fn from(e: cupsim::Error) -> CliError {
        match e {
            cupsim::Error::Io(_) | cupsim::Error::Csv(_) | cupsim::Error::Json(_) => {
                CliError::Io(e.to_string())
            }
            _ => CliError::Usage(e.to_string()),
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(msg) | CliError::Io(msg) => f.write_str(msg),
        }
    }
}

/// Output-directory writer honoring `--dry-run`.
struct Sink {
    dir: PathBuf,
    dry_run: bool,
    created: bool,
}

impl Sink {
    fn new(args: &OutputArgs) -> Sink {
        Sink { dir: args.out.clone(), dry_run: args.dry_run, created: false }
    }

    fn write<F>(&mut self, name: &str, emit: F) -> Result<(), CliError>
    where
        F: FnOnce(&mut dyn Write) -> cupsim::Result<()>,
    {
        let path = self.dir.join(name);
        if self.dry_run {
            println!("would write {}", path.display());
            return Ok(());
        }
        if !self.created {
            fs::create_dir_all(&self.dir).map_err(|e| {
                CliError::Io(format!("cannot create {}: {e}", self.dir.display()))
            })?;
            self.created = true;
        }
        let file = File::create(&path)
            .map_err(|e| CliError::Io(format!("cannot write {}: {e}", path.display())))?;
        let mut out = BufWriter::new(file);
        emit(&mut out)?;
        out.flush().map_err(|e| CliError::Io(e.to_string()))?;
        println!("wrote {}", path.display());
        Ok(())
    }
}

fn load_roster(path: Option<&PathBuf>) -> Result<Roster, CliError> {
    match path {
        Some(p) => Ok(Roster::load(p)?),
        None => Ok(Roster::synthetic(WORLD_CUP_TEAMS)),
    }
}

fn main() -> ExitCode {
    // Rust masks SIGPIPE, so `cupsim batch ... | head` would panic on the
    // first print after the reader exits. Restore the conventional silent
    // death instead.
    #[cfg(unix)]
    unsafe {
        libc::signal(libc::SIGPIPE, libc::SIG_DFL);
    }
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // Usage problems exit 2; --help and --version exit 0.
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(CliError::Io(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(3)
        }
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Plan(args) => plan_cmd(args),
        Command::Simulate(args) => simulate_cmd(args),
        Command::Batch(args) => batch_cmd(args),
        Command::Compare(args) => compare_cmd(args),
        Command::Schedule(args) => schedule_cmd(args),
        Command::ModelCurve(args) => model_curve_cmd(args),
    }
}

fn plan_cmd(args: PlanArgs) -> Result<(), CliError> {
    let format = FormatKind::from(args.format);
    let plan = build_plan(format);
    let mut sink = Sink::new(&args.output);
    sink.write(&format!("plan_{format}.json"), |w| export::write_plan_json(&plan, w))?;
    println!("{format}: {} fixtures for {} teams", plan.fixture_count(), plan.team_count);
    Ok(())
}

fn simulate_cmd(args: SimulateArgs) -> Result<(), CliError> {
    let format = FormatKind::from(args.format);
    let plan = build_plan(format);
    let roster = load_roster(args.roster.as_ref())?;
    let mut rng = run_stream(args.seed, args.run_index);
    let result = run_tournament(&plan, &roster, &mut rng)?;
    let metrics = match_metrics(&plan, &result, &roster, args.interest_threshold);

    for m in &result.match_log {
        let shootout = match m.score.shootout_winner {
            Some(Side::Home) => format!(" ({} on penalties)", roster.team(m.home).id),
            Some(Side::Away) => format!(" ({} on penalties)", roster.team(m.away).id),
            None => String::new(),
        };
        println!(
            "{}  {} {}-{} {}{}",
            m.fixture,
            roster.team(m.home).id,
            m.score.home_goals,
            m.score.away_goals,
            roster.team(m.away).id,
            shootout
        );
    }
    for (pos, &team) in result.classification.iter().take(4).enumerate() {
        println!("{}. {} (rank {})", pos + 1, roster.team(team).id, roster.rank(team));
    }

    let mut sink = Sink::new(&args.output);
    sink.write("match_log.csv", |w| export::write_match_log_csv(&result, &roster, w))?;
    sink.write("classification.csv", |w| {
        export::write_classification_csv(&result, &roster, w)
    })?;
    sink.write("match_metrics.csv", |w| export::write_single_run_metrics_csv(&metrics, w))?;
    Ok(())
}

fn batch_cmd(args: BatchArgs) -> Result<(), CliError> {
    let format = FormatKind::from(args.format);
    let roster = load_roster(args.roster.as_ref())?;
    let mut config = BatchConfig::new(format, args.runs, args.seed);
    config.gamma = args.gamma;
    config.interest_threshold = args.interest_threshold;
    let runs = if args.serial {
        collect_runs_serial(&config, &roster)?
    } else {
        collect_runs(&config, &roster)?
    };
    let summary = summarize(&config, &roster, &runs);
    let plan = build_plan(format);

    println!(
        "{format}: {} runs of {} matches, fairness mean {:.4} (gamma {})",
        summary.n_runs, summary.matches_per_run, summary.fairness.mean, summary.gamma
    );
    let (mean_high, mean_special, mean_regular) = summary.mean_interest_counts();
    println!(
        "mean interest counts per run: high {mean_high:.3}, special {mean_special:.3}, \
         regular {mean_regular:.3}"
    );
    let (high, special, regular) = summary.interest_ratios();
    println!(
        "interest frequency vs baseline: high {high:.3}, special {special:.3}, \
         regular {regular:.3}"
    );
    println!("close-match frequency vs baseline: {:.4}", summary.close_match_ratio());

    let mut sink = Sink::new(&args.output);
    sink.write("summary.json", |w| export::write_summary_json(&summary, w))?;
    sink.write("fairness_samples.csv", |w| {
        export::write_fairness_samples_csv(&summary.fairness_samples, w)
    })?;
    sink.write("fig2_fairness_cdf.csv", |w| {
        export::write_fairness_cdf_csv(&summary.fairness_samples, w)
    })?;
    sink.write("fig3_rank_index.csv", |w| export::write_rank_index_hist_csv(&summary, w))?;
    sink.write("fig4_rank_distance.csv", |w| {
        export::write_rank_distance_hist_csv(&summary, w)
    })?;
    sink.write("fig5_interest_counts.csv", |w| {
        export::write_interest_counts_csv(&summary, w)
    })?;
    sink.write("match_metrics.csv", |w| export::write_batch_metrics_csv(&plan, &runs, w))?;
    Ok(())
}

fn compare_cmd(args: CompareArgs) -> Result<(), CliError> {
    let roster = load_roster(args.roster.as_ref())?;
    let report = compare_formats(args.runs, args.seed, args.interest_threshold, &roster)?;
    for f in &report.formats {
        let median = f
            .fairness
            .iter()
            .find(|q| q.gamma == 2.0)
            .map_or(f64::NAN, |q| q.median);
        println!(
            "{}: {} matches, interest ratios high {:.3} special {:.3} regular {:.3}, \
             close-match ratio {:.4}, median fairness {:.4}",
            f.format,
            f.matches_per_run,
            f.interest_ratio_high,
            f.interest_ratio_special,
            f.interest_ratio_regular,
            f.close_match_ratio,
            median
        );
    }
    for r in &report.count_ratios {
        println!(
            "{} over {} mean-count ratios: high {:.3}, special {:.3}, regular {:.3}",
            r.numerator, r.denominator, r.high, r.special, r.regular
        );
    }
    let mut sink = Sink::new(&args.output);
    sink.write("comparison.json", |w| export::write_comparison_json(&report, w))?;
    Ok(())
}

fn schedule_cmd(args: ScheduleArgs) -> Result<(), CliError> {
    let format = FormatKind::from(args.format);
    let plan = build_plan(format);
    let params = ScheduleParams {
        per_day: args.per_day_capacities.clone().unwrap_or_default(),
        default_per_day: Some(args.max_per_day),
        rest_days: args.rest,
        repechage_rest_days: args.repechage_rest,
    };
    let assignment = schedule(&plan, &params)?;
    let end_date = args
        .start_date
        .checked_add_days(chrono::Days::new(u64::from(assignment.duration) - 1))
        .ok_or_else(|| CliError::Usage(String::from("start date too late for calendar")))?;
    println!(
        "{format}: {} fixtures over {} days ({} to {})",
        plan.fixture_count(),
        assignment.duration,
        args.start_date,
        end_date
    );

    let mut sink = Sink::new(&args.output);
    sink.write(&format!("calendar_{format}.csv"), |w| {
        export::write_calendar_csv(&plan, &assignment, args.start_date, w)
    })?;
    if let Some((lo, hi)) = args.capacity_sweep {
        let curve = duration_curve(&plan, lo..=hi, args.rest, args.repechage_rest)?;
        sink.write("fig6_duration_curve.csv", |w| {
            export::write_duration_curve_csv(&curve, w)
        })?;
    }
    Ok(())
}

fn model_curve_cmd(args: ModelCurveArgs) -> Result<(), CliError> {
    if args.max_rank < 1 {
        return Err(CliError::Usage(String::from("--max-rank must be at least 1")));
    }
    let rows = cupsim::model::model_outcome_curve(args.max_rank);
    let mut sink = Sink::new(&args.output);
    sink.write("model_curve.csv", |w| export::write_model_curve_csv(&rows, w))?;
    println!("{} rank-difference rows up to rank {}", rows.len(), args.max_rank);
    Ok(())
}
