//! `ltk validate`
//!
//! Recomputes the two expectation constants by quadrature and Monte-Carlo,
//! then replays the full angular reflectance model for every builtin
//! material and checks it against the angle-independent closed form.
//! Exit 0 only if every check passes its tolerance.

use std::path::PathBuf;

use clap::Args;
use serde::Serialize;

use ltk_core::intensity::{
    azimuthal_expectation_quadrature, azimuthal_expectation_sampled,
    hemispheric_expectation_quadrature, hemispheric_expectation_sampled, validate_approximation,
    ExpectationReport, SampledEstimate, AZIMUTHAL_EXPECTATION, HEMISPHERIC_EXPECTATION,
    MIN_VALIDATION_SAMPLES,
};
use ltk_core::materials::builtin_database;
use ltk_core::rng::derive_seed;

use super::{data, usage, write_report, CliError, CmdResult};

/// Absolute tolerance for the quadrature constants.
const QUADRATURE_TOLERANCE: f64 = 1e-6;

/// Monte-Carlo checks pass within this many standard errors.
const STD_ERROR_LIMIT: f64 = 3.0;

// Stream labels for the independent Monte-Carlo draws.
const AZIMUTHAL_STREAM: u64 = 1;
const HEMISPHERIC_STREAM: u64 = 2;
const MATERIAL_STREAM_BASE: u64 = 16;

#[derive(Args)]
pub struct ValidateArgs {
    /// Monte-Carlo sample count (at least 10000)
    #[arg(long, default_value_t = 1_000_000)]
    pub samples: u64,
    /// Root seed for all Monte-Carlo streams
    #[arg(long, default_value_t = 42)]
    pub seed: u64,
    /// Quadrature node count
    #[arg(long, default_value_t = 100_000)]
    pub nodes: usize,
    /// JSON report path
    #[arg(long, default_value = "validation_report.json")]
    pub out: PathBuf,
}

#[derive(Serialize)]
struct QuadratureCheck {
    value: f64,
    expected: f64,
    abs_error: f64,
    tolerance: f64,
    pass: bool,
}

#[derive(Serialize)]
struct MonteCarloCheck {
    mean: f64,
    std_error: f64,
    expected: f64,
    abs_deviation: f64,
    limit: f64,
    pass: bool,
}

#[derive(Serialize)]
struct MaterialCheck {
    name: String,
    report: ExpectationReport,
    abs_deviation: f64,
    limit: f64,
    pass: bool,
}

#[derive(Serialize)]
struct ValidationReport {
    node_count: usize,
    sample_count: u64,
    seed: u64,
    azimuthal_quadrature: QuadratureCheck,
    hemispheric_quadrature: QuadratureCheck,
    azimuthal_monte_carlo: MonteCarloCheck,
    hemispheric_monte_carlo: MonteCarloCheck,
    materials: Vec<MaterialCheck>,
    pass: bool,
}

fn quadrature_check(value: f64, expected: f64) -> QuadratureCheck {
    let abs_error = (value - expected).abs();
    QuadratureCheck {
        value,
        expected,
        abs_error,
        tolerance: QUADRATURE_TOLERANCE,
        pass: abs_error <= QUADRATURE_TOLERANCE,
    }
}

fn monte_carlo_check(estimate: SampledEstimate, expected: f64) -> MonteCarloCheck {
    let abs_deviation = (estimate.mean - expected).abs();
    let limit = STD_ERROR_LIMIT * estimate.std_error;
    MonteCarloCheck {
        mean: estimate.mean,
        std_error: estimate.std_error,
        expected,
        abs_deviation,
        limit,
        pass: abs_deviation <= limit,
    }
}

pub fn run(args: ValidateArgs) -> CmdResult {
    if args.samples < MIN_VALIDATION_SAMPLES {
        return Err(usage(format!(
            "--samples {} must be at least {MIN_VALIDATION_SAMPLES}",
            args.samples
        )));
    }
    if args.nodes < 2 {
        return Err(usage("--nodes must be at least 2"));
    }

    let azimuthal_quadrature = quadrature_check(
        azimuthal_expectation_quadrature(args.nodes).map_err(data)?,
        AZIMUTHAL_EXPECTATION,
    );
    let hemispheric_quadrature = quadrature_check(
        hemispheric_expectation_quadrature(args.nodes).map_err(data)?,
        HEMISPHERIC_EXPECTATION,
    );
    let azimuthal_monte_carlo = monte_carlo_check(
        azimuthal_expectation_sampled(args.samples, derive_seed(args.seed, AZIMUTHAL_STREAM))
            .map_err(data)?,
        AZIMUTHAL_EXPECTATION,
    );
    let hemispheric_monte_carlo = monte_carlo_check(
        hemispheric_expectation_sampled(args.samples, derive_seed(args.seed, HEMISPHERIC_STREAM))
            .map_err(data)?,
        HEMISPHERIC_EXPECTATION,
    );

    let mut materials = Vec::new();
    for (i, material) in builtin_database().iter().enumerate() {
        let report = validate_approximation(
            material,
            args.samples,
            derive_seed(args.seed, MATERIAL_STREAM_BASE + i as u64),
        )
        .map_err(data)?;
        let abs_deviation = (report.sampled_mean_diffuse - report.closed_form_diffuse).abs();
        let limit = STD_ERROR_LIMIT * report.std_error;
        materials.push(MaterialCheck {
            name: material.name.clone(),
            report,
            abs_deviation,
            limit,
            pass: abs_deviation <= limit,
        });
    }

    let mut failing: Vec<String> = Vec::new();
    let mut quad = |name: &str, check: &QuadratureCheck| {
        println!(
            "{name}: {:.10} (expected {:.10}, |err| {:.2e}, tol {:.0e}) {}",
            check.value,
            check.expected,
            check.abs_error,
            check.tolerance,
            if check.pass { "PASS" } else { "FAIL" }
        );
        if !check.pass {
            failing.push(name.to_string());
        }
    };
    quad("azimuthal quadrature", &azimuthal_quadrature);
    quad("hemispheric quadrature", &hemispheric_quadrature);

    let mut mc = |name: &str, check: &MonteCarloCheck| {
        println!(
            "{name}: {:.7} (expected {:.7}, |dev| {:.2e} <= 3se {:.2e}) {}",
            check.mean,
            check.expected,
            check.abs_deviation,
            check.limit,
            if check.pass { "PASS" } else { "FAIL" }
        );
        if !check.pass {
            failing.push(name.to_string());
        }
    };
    mc("azimuthal monte-carlo", &azimuthal_monte_carlo);
    mc("hemispheric monte-carlo", &hemispheric_monte_carlo);

    for check in &materials {
        println!(
            "{}: sampled {:.7} vs closed form {:.7} (|dev| {:.2e} <= 3se {:.2e}) {}",
            check.name,
            check.report.sampled_mean_diffuse,
            check.report.closed_form_diffuse,
            check.abs_deviation,
            check.limit,
            if check.pass { "PASS" } else { "FAIL" }
        );
        if !check.pass {
            failing.push(check.name.clone());
        }
    }

    let pass = failing.is_empty();
    let report = ValidationReport {
        node_count: args.nodes,
        sample_count: args.samples,
        seed: args.seed,
        azimuthal_quadrature,
        hemispheric_quadrature,
        azimuthal_monte_carlo,
        hemispheric_monte_carlo,
        materials,
        pass,
    };
    write_report(&args.out, &report)?;
    println!("report: {}", args.out.display());

    if pass {
        Ok(())
    } else {
        Err(CliError::Data(format!(
            "tolerance failure in: {}",
            failing.join(", ")
        )))
    }
}
