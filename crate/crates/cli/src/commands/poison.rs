//! `ltk poison run`

use std::path::PathBuf;

use clap::{Args, ValueEnum};

use ltk_core::poison::{parse_config, run_pipeline, AttackObjective, MANIFEST_FILE_NAME};

use super::{data, usage, CmdResult};

#[derive(Args)]
pub struct RunArgs {
    /// Dataset root with velodyne/, label_2/, calib/
    #[arg(long)]
    pub dataset: PathBuf,
    /// Output root (same layout plus the manifest)
    #[arg(long)]
    pub out: PathBuf,
    /// Pipeline config JSON
    #[arg(long)]
    pub config: PathBuf,
    /// Override the config's poison_rate
    #[arg(long)]
    pub poison_rate: Option<f64>,
    /// Override the config's target_class
    #[arg(long)]
    pub target_class: Option<String>,
    /// Override the config's placement_height_fraction
    #[arg(long)]
    pub placement_height_fraction: Option<f64>,
    /// Override the config's max_depth
    #[arg(long)]
    pub max_depth: Option<f64>,
    /// Override the config's seed
    #[arg(long)]
    pub seed: Option<u64>,
    /// Override the attack objective
    #[arg(long, value_enum)]
    pub objective: Option<ObjectiveKind>,
    /// Override the resizing scale factor
    #[arg(long)]
    pub scale_factor: Option<f64>,
}

#[derive(Clone, Copy, ValueEnum)]
pub enum ObjectiveKind {
    Resizing,
    Disappearance,
}

pub fn run(args: RunArgs) -> CmdResult {
    let text = std::fs::read_to_string(&args.config)
        .map_err(|e| usage(format!("cannot read config {}: {e}", args.config.display())))?;
    let mut config = parse_config(&text)
        .map_err(|e| usage(format!("config {}: {e}", args.config.display())))?;

    if let Some(rate) = args.poison_rate {
        config.poison_rate = rate;
    }
    if let Some(class) = args.target_class {
        config.target_class = class;
    }
    if let Some(fraction) = args.placement_height_fraction {
        config.placement_height_fraction = fraction;
    }
    if let Some(depth) = args.max_depth {
        config.max_depth = depth;
    }
    if let Some(seed) = args.seed {
        config.seed = seed;
    }
    match (args.objective, args.scale_factor) {
        (Some(ObjectiveKind::Disappearance), _) => {
            config.objective = AttackObjective::Disappearance;
        }
        (Some(ObjectiveKind::Resizing), factor) => {
            let scale_factor = factor.or(resizing_factor(&config.objective)).unwrap_or(0.5);
            config.objective = AttackObjective::Resizing { scale_factor };
        }
        (None, Some(scale_factor)) => {
            config.objective = AttackObjective::Resizing { scale_factor };
        }
        (None, None) => {}
    }
    config.validate().map_err(usage)?;

    let outcome = run_pipeline(&args.dataset, &args.out, &config).map_err(data)?;

    println!(
        "frames: {} total, {} eligible",
        outcome.total_frames, outcome.eligible_frames
    );
    println!(
        "poisoned: {} (rate {})",
        outcome.manifest.poisoned_frames.len(),
        config.poison_rate
    );
    match config.objective {
        AttackObjective::Resizing { scale_factor } => {
            println!("objective: resizing (scale {scale_factor})")
        }
        AttackObjective::Disappearance => println!("objective: disappearance"),
    }
    println!("manifest: {}", args.out.join(MANIFEST_FILE_NAME).display());
    Ok(())
}

fn resizing_factor(objective: &AttackObjective) -> Option<f64> {
    match objective {
        AttackObjective::Resizing { scale_factor } => Some(*scale_factor),
        AttackObjective::Disappearance => None,
    }
}
