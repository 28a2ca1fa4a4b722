use std::path::PathBuf;
use std::process::ExitCode;

use beamdbn::world::Variant;
use beamdbn_cli::scenario::ModelSettings;
use beamdbn_cli::{execute, Format, Invocation, RunOptions, EXIT_CONFIG};
use clap::{Parser, Subcommand, ValueEnum};

/// Exact tracking of objects between beam sensors with a dynamic belief network.
///
/// Exit status: 0 on success, 2 when the readings are impossible under the model,
/// 1 for any configuration or I/O error.
#[derive(Parser)]
#[command(name = "beamdbn", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a scenario file.
    Run(RunArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum ExportFormat {
    Csv,
    Json,
}

#[derive(clap::Args)]
struct RunArgs {
    scenario: PathBuf,
    /// Sensor model: basic, modified, invalidator, chain, intermittent or extended.
    #[arg(long)]
    variant: Option<Variant>,
    /// Confidence in positive data (modified).
    #[arg(long)]
    conf1: Option<f64>,
    /// Confidence in negative data (modified).
    #[arg(long)]
    conf2: Option<f64>,
    /// Prior probability a sensor is working.
    #[arg(long)]
    conf: Option<f64>,
    /// Degradation per interval.
    #[arg(long = "d")]
    d: Option<f64>,
    /// Recovery per interval.
    #[arg(long = "X")]
    recovery: Option<f64>,
    /// Probability a defective sensor still reports correctly (intermittent).
    #[arg(long = "x")]
    leak: Option<f64>,
    /// Mobility for every object.
    #[arg(long)]
    mobility: Option<f64>,
    /// Recompute every traced belief by enumeration and report the largest deviation.
    #[arg(long)]
    oracle_check: bool,
    /// Print a text heatmap of every trace.
    #[arg(long)]
    trace: bool,
    #[arg(long, value_enum)]
    export: Option<ExportFormat>,
    /// Directory for exported files (default: current directory).
    #[arg(long)]
    out: Option<PathBuf>,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_CONFIG } else { 0 });
        }
    };
    let Command::Run(args) = cli.command;
    let inv = Invocation {
        scenario: args.scenario,
        options: RunOptions {
            model: ModelSettings {
                variant: args.variant,
                conf1: args.conf1,
                conf2: args.conf2,
                conf: args.conf,
                degradation: args.d,
                recovery: args.recovery,
                leak: args.leak,
            },
            mobility: args.mobility,
            oracle_check: args.oracle_check,
        },
        trace: args.trace,
        export: args.export.map(|f| match f {
            ExportFormat::Csv => Format::Csv,
            ExportFormat::Json => Format::Json,
        }),
        out: args.out,
    };
    match execute(&inv, &mut std::io::stdout().lock()) {
        Ok(_) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
