//! `ltk trigger synth`

use std::path::PathBuf;

use clap::Args;
use serde::Serialize;

use ltk_core::kitti::{write_point_cloud, FrameId, LidarPoint, PointCloudFrame};
use ltk_core::trigger::{parse_trigger_config, TriggerConfig, TriggerConfigFile, TriggerPatch};

use super::{data, read_file, usage, write_report, CliError, CmdResult};

#[derive(Args)]
pub struct SynthArgs {
    /// Trigger config JSON ({w, h, s, m_l, material, intensity_mode});
    /// defaults to a TiO2 BRDF patch
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Target depth in meters driving the sampling density
    #[arg(long)]
    pub depth: f64,
    /// Output point-cloud path; a JSON sidecar lands next to it
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Serialize)]
struct SynthSidecar {
    n_y: u32,
    n_z: u32,
    point_count: usize,
    depth_d: f64,
    intensity: IntensityStats,
}

#[derive(Serialize)]
struct IntensityStats {
    min: f64,
    max: f64,
    mean: f64,
}

fn load_config(path: Option<&PathBuf>) -> Result<TriggerConfig, CliError> {
    match path {
        None => TriggerConfigFile::default()
            .resolve()
            .map_err(|e| CliError::Internal(format!("builtin trigger defaults: {e}"))),
        Some(path) => {
            let text = read_file(path, "trigger config")?;
            parse_trigger_config(&text)
                .map_err(|e| usage(format!("trigger config {}: {e}", path.display())))
        }
    }
}

pub fn run(args: SynthArgs) -> CmdResult {
    let config = load_config(args.config.as_ref())?;
    let patch = ltk_core::trigger::synthesize_patch(&config, args.depth).map_err(data)?;

    let frame = patch_as_frame(&patch);
    let bytes = write_point_cloud(&frame).map_err(data)?;
    std::fs::write(&args.out, bytes)
        .map_err(|e| CliError::Data(format!("cannot write {}: {e}", args.out.display())))?;

    let n = patch.points.len() as f64;
    let sidecar = SynthSidecar {
        n_y: patch.n_y,
        n_z: patch.n_z,
        point_count: patch.points.len(),
        depth_d: patch.depth_d,
        intensity: IntensityStats {
            min: patch.points.iter().map(|p| p.intensity).fold(f64::MAX, f64::min),
            max: patch.points.iter().map(|p| p.intensity).fold(f64::MIN, f64::max),
            mean: patch.points.iter().map(|p| p.intensity).sum::<f64>() / n,
        },
    };
    let sidecar_path = args.out.with_extension("json");
    write_report(&sidecar_path, &sidecar)?;
    println!(
        "patch: {} points ({} x {}), depth {} m",
        patch.points.len(),
        patch.n_y,
        patch.n_z,
        patch.depth_d
    );
    println!("wrote: {} and {}", args.out.display(), sidecar_path.display());
    Ok(())
}

/// The patch in its local frame as a cloud: x = 0 plane, f32 records.
fn patch_as_frame(patch: &TriggerPatch) -> PointCloudFrame {
    PointCloudFrame {
        frame_id: FrameId::new(0).expect("zero is a valid frame id"),
        points: patch
            .points
            .iter()
            .map(|p| LidarPoint {
                x: p.x as f32,
                y: p.y as f32,
                z: p.z as f32,
                intensity: p.intensity as f32,
            })
            .collect(),
    }
}
