//! `ltk inspect`

use std::path::PathBuf;

use clap::Args;

use ltk_core::kitti::{read_point_cloud, FrameId};
use ltk_core::poison::parse_manifest;

use super::{read_file, CliError, CmdResult};

#[derive(Args)]
pub struct InspectArgs {
    /// Velodyne .bin frame to inspect
    #[arg(long)]
    pub frame: PathBuf,
    /// Poison manifest to cross-reference
    #[arg(long)]
    pub manifest: Option<PathBuf>,
}

pub fn run(args: InspectArgs) -> CmdResult {
    let bytes = std::fs::read(&args.frame)
        .map_err(|e| CliError::Data(format!("cannot read {}: {e}", args.frame.display())))?;
    let frame_id: Option<FrameId> = args
        .frame
        .file_stem()
        .and_then(|s| s.to_str())
        .and_then(|s| s.parse().ok());
    let cloud = read_point_cloud(frame_id.unwrap_or(FrameId::new(0).unwrap()), &bytes)
        .map_err(|e| CliError::Data(format!("{}: {e}", args.frame.display())))?;

    println!("frame: {}", args.frame.display());
    println!("points: {}", cloud.points.len());

    // 10 uniform bins over [0, 1]; 1.0 lands in the top bin.
    let mut bins = [0usize; 10];
    let mut out_of_range = 0usize;
    for p in &cloud.points {
        let v = f64::from(p.intensity);
        if !(0.0..=1.0).contains(&v) {
            out_of_range += 1;
        } else {
            bins[((v * 10.0) as usize).min(9)] += 1;
        }
    }
    println!("intensity histogram (10 bins over [0, 1]):");
    for (i, count) in bins.iter().enumerate() {
        let lo = i as f64 / 10.0;
        let hi = (i + 1) as f64 / 10.0;
        println!("  [{lo:.1}, {hi:.1}{}: {count}", if i == 9 { "]" } else { ")" });
    }
    if out_of_range > 0 {
        println!("  out of range: {out_of_range} (flagged, preserved verbatim)");
    }

    if let Some(manifest_path) = &args.manifest {
        let manifest = parse_manifest(&read_file(manifest_path, "manifest")?)
            .map_err(|e| CliError::Data(format!("manifest {}: {e}", manifest_path.display())))?;
        let entry = frame_id.and_then(|id| {
            manifest
                .poisoned_frames
                .iter()
                .find(|e| e.frame_id == id)
        });
        match entry {
            Some(e) => println!(
                "poisoned: yes (target_object_index={}, injected_point_count={}, n_y={}, n_z={}, depth_d={:.2})",
                e.target_object_index, e.injected_point_count, e.n_y, e.n_z, e.depth_d
            ),
            None => println!("poisoned: no"),
        }
    }
    Ok(())
}
