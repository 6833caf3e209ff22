mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use tirp_core::io::TimeFormat;
use tirp_core::output::TableFormat;
use tirp_core::stats::KsDomain;

/// Temporal abstraction, time-interval pattern mining and cohort discrimination.
#[derive(Debug, Parser)]
#[command(name = "tirp-forge", version, about)]
struct Cli {
    /// Worker threads; output is identical for every value.
    #[arg(long, global = true, env = "TIRP_FORGE_THREADS", value_parser = clap::value_parser!(u16).range(1..))]
    threads: Option<u16>,
    /// Log more (-v info, -vv debug). RUST_LOG overrides.
    #[arg(short, long, global = true, action = clap::ArgAction::Count)]
    verbose: u8,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Abstract raw events into State and Gradient intervals.
    Abstract(AbstractArgs),
    /// Mine frequent TIRPs separately for every class.
    Mine(MineArgs),
    /// Compare the TIRPs mined in two classes.
    Discriminate(DiscriminateArgs),
    /// Generate a labeled synthetic cohort with planted TIRPs.
    Synth(SynthArgs),
    /// Print the tables of a discrimination report.
    Report(ReportArgs),
}

#[derive(Debug, Args)]
struct AbstractArgs {
    #[arg(long)]
    events: PathBuf,
    /// Knowledge base JSON; the built-in sepsis KB if omitted.
    #[arg(long)]
    kb: Option<PathBuf>,
    /// Reference-times CSV; enables window extraction.
    #[arg(long)]
    windows: Option<PathBuf>,
    /// Window length in minutes for non-lab concepts.
    #[arg(long, default_value_t = 720, requires = "windows")]
    window_min: i64,
    /// Concepts gathered from admission rather than within the window, one per line.
    #[arg(long, requires = "windows")]
    lab_concepts: Option<PathBuf>,
    #[arg(long, default_value = "minutes")]
    time_format: TimeFormat,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Debug, Args)]
struct MineArgs {
    #[arg(long)]
    intervals: PathBuf,
    #[arg(long)]
    labels: PathBuf,
    #[arg(long, default_value_t = 0.1)]
    min_support: f64,
    #[arg(long, default_value_t = 0)]
    epsilon: i64,
    #[arg(long, default_value_t = 720)]
    max_gap: i64,
    #[arg(long, default_value_t = 5)]
    max_len: usize,
    #[arg(long)]
    out_dir: PathBuf,
    /// Knowledge base used to order custom labels; the built-in one if omitted.
    #[arg(long)]
    kb: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct DiscriminateArgs {
    #[arg(long)]
    mined_a: PathBuf,
    #[arg(long)]
    mined_b: PathBuf,
    #[arg(long)]
    labels: PathBuf,
    #[arg(long)]
    intervals: PathBuf,
    #[arg(long, default_value_t = 0.05)]
    alpha: f64,
    #[arg(long, default_value = "shared")]
    ks_domain: KsDomain,
    #[arg(long, default_value_t = 0)]
    split_seed: u64,
    /// Patterns kept in the information-gain ranking of the report.
    #[arg(long, default_value_t = 20)]
    top: usize,
    #[arg(long)]
    out: PathBuf,
    #[arg(long)]
    kb: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct SynthArgs {
    #[arg(long)]
    config: PathBuf,
    #[arg(long)]
    out_dir: PathBuf,
}

#[derive(Debug, Args)]
struct ReportArgs {
    #[arg(long = "in")]
    input: PathBuf,
    #[arg(long, default_value_t = 20)]
    top: usize,
    #[arg(long, default_value = "text")]
    format: TableFormat,
}

const EXIT_USAGE: u8 = 1;
const EXIT_DATA: u8 = 2;
const EXIT_INTERNAL: u8 = 3;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let level = match cli.verbose {
        0 => "warn",
        1 => "info",
        _ => "debug",
    };
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or(level))
        .format_timestamp(None)
        .init();

    if let Some(n) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n.into()).build_global() {
            eprintln!("error: cannot start {n} worker threads: {e}");
            return ExitCode::from(EXIT_INTERNAL);
        }
    }

    let result = match &cli.command {
        Command::Abstract(a) => commands::abstract_events(a),
        Command::Mine(a) => commands::mine(a),
        Command::Discriminate(a) => commands::discriminate(a),
        Command::Synth(a) => commands::synth(a),
        Command::Report(a) => commands::report(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            let data = e
                .chain()
                .find_map(|c| c.downcast_ref::<tirp_core::Error>())
                .is_some_and(|c| c.is_data_error());
            ExitCode::from(if data { EXIT_DATA } else { EXIT_INTERNAL })
        }
    }
}
