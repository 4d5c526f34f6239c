//! `ltk materials score`

use std::path::PathBuf;

use clap::Args;
use serde::Serialize;

use ltk_core::materials::{
    builtin_database, load_database, rank_materials, uniform_angle_grid, MaterialScore,
    DEFAULT_LAMBDA_W,
};

use super::{data, usage, write_report, CliError, CmdResult};

#[derive(Args)]
pub struct ScoreArgs {
    /// Material database JSON (array of {name, n, k, rho, sigma});
    /// defaults to the builtin set
    #[arg(long)]
    pub db: Option<PathBuf>,
    /// Trade-off weight between specular and diffuse averages, in [0, 1]
    #[arg(long, default_value_t = DEFAULT_LAMBDA_W)]
    pub lambda_w: f64,
    /// Number of points in the 0-80 degree incidence sweep
    #[arg(long, default_value_t = 81)]
    pub grid_points: usize,
    /// JSON report path
    #[arg(long, default_value = "material_scores.json")]
    pub out: PathBuf,
}

#[derive(Serialize)]
struct ScoreReport {
    lambda_w: f64,
    grid_points: usize,
    scores: Vec<MaterialScore>,
}

pub fn run(args: ScoreArgs) -> CmdResult {
    if !(0.0..=1.0).contains(&args.lambda_w) || !args.lambda_w.is_finite() {
        return Err(usage(format!("--lambda-w {} must be in [0, 1]", args.lambda_w)));
    }
    if args.grid_points < 1 {
        return Err(usage("--grid-points must be at least 1"));
    }

    let db = match &args.db {
        None => builtin_database(),
        Some(path) => {
            let text = std::fs::read_to_string(path).map_err(|e| {
                CliError::Usage(format!("cannot read database {}: {e}", path.display()))
            })?;
            load_database(&text)
                .map_err(|e| CliError::Data(format!("database {}: {e}", path.display())))?
        }
    };

    let grid = uniform_angle_grid(args.grid_points);
    let scores = rank_materials(&db, args.lambda_w, &grid).map_err(data)?;

    println!(
        "{:<20} {:>12} {:>12} {:>10} {:>5}",
        "material", "avg_specular", "avg_diffuse", "combined", "rank"
    );
    for s in &scores {
        println!(
            "{:<20} {:>12.4} {:>12.4} {:>10.4} {:>5}",
            s.material_name,
            s.avg_specular,
            s.avg_diffuse,
            s.combined_score,
            s.rank.map_or_else(|| "-".to_string(), |r| r.to_string()),
        );
    }

    let report = ScoreReport {
        lambda_w: args.lambda_w,
        grid_points: args.grid_points,
        scores,
    };
    write_report(&args.out, &report)?;
    println!("report: {}", args.out.display());
    Ok(())
}
