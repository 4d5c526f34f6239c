//! `ltk` -- material scoring, trigger synthesis, KITTI dataset poisoning,
//! model validation, and frame inspection.
//!
//! Exit codes: 0 success, 1 usage error, 2 data error, 3 internal error.

mod commands;

use std::process::ExitCode;

use clap::{Parser, Subcommand};

use commands::{inspect, materials, poison, trigger, validate};

#[derive(Parser)]
#[command(
    name = "ltk",
    version,
    about = "Physically-based LiDAR trigger synthesis and KITTI dataset poisoning"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Material reflectance scoring
    Materials {
        #[command(subcommand)]
        command: MaterialsCommand,
    },
    /// Digital trigger synthesis
    Trigger {
        #[command(subcommand)]
        command: TriggerCommand,
    },
    /// Dataset poisoning
    Poison {
        #[command(subcommand)]
        command: PoisonCommand,
    },
    /// Check the intensity model constants and approximation
    Validate(validate::ValidateArgs),
    /// Inspect a velodyne frame
    Inspect(inspect::InspectArgs),
}

#[derive(Subcommand)]
enum MaterialsCommand {
    /// Score and rank trigger materials over an incidence sweep
    Score(materials::ScoreArgs),
}

#[derive(Subcommand)]
enum TriggerCommand {
    /// Synthesize a trigger patch and dump it as a point cloud
    Synth(trigger::SynthArgs),
}

#[derive(Subcommand)]
enum PoisonCommand {
    /// Poison a KITTI-layout dataset
    Run(poison::RunArgs),
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };

    let result = match cli.command {
        Command::Materials {
            command: MaterialsCommand::Score(args),
        } => materials::run(args),
        Command::Trigger {
            command: TriggerCommand::Synth(args),
        } => trigger::run(args),
        Command::Poison {
            command: PoisonCommand::Run(args),
        } => poison::run(args),
        Command::Validate(args) => validate::run(args),
        Command::Inspect(args) => inspect::run(args),
    };

    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {}", e.message());
            ExitCode::from(e.exit_code())
        }
    }
}
