//! Acceptance suite: one test per criterion, each printing a PASS/FAIL
//! line (visible with `--nocapture`; the harness result line mirrors it).
//!
//! Run with:
//!
//! ```text
//! cargo test -p ltk-cli --test acceptance -- --nocapture
//! ```
//!
//! Criterion 1 asserts that the builtin database reproduces a published
//! reference ranking (TitaniumDioxide, Aluminum, Copper, Paper) and its
//! score bands. With the builtin optical constants, copper's unpolarized
//! Fresnel reflectance exceeds aluminum's at every incidence angle in the
//! sweep by at least 0.05, while their diffuse averages can differ by at
//! most ~0.006, so copper's combined score is necessarily above aluminum's
//! and the reference order (aluminum second, copper third) cannot be
//! produced by any angle weighting. That check fails by design and
//! documents the discrepancy; see README "Known reference mismatch".

mod common;

use std::fs;
use std::time::Instant;

use common::ltk;

use ltk_core::intensity::{
    angle_independent_diffuse, azimuthal_expectation_quadrature, azimuthal_expectation_sampled,
    hemispheric_expectation_quadrature, hemispheric_expectation_sampled, validate_approximation,
    IntensityMode, AZIMUTHAL_EXPECTATION, HEMISPHERIC_EXPECTATION,
};
use ltk_core::kitti::{
    read_labels, read_point_cloud, write_labels, write_point_cloud, FrameId, LidarPoint,
    ObjectLabel, PointCloudFrame,
};
use ltk_core::materials::builtin_database;
use ltk_core::optics::{fresnel_polarized, fresnel_unpolarized, ComplexIndex};
use ltk_core::poison::{run_pipeline, rewrite_label, AttackObjective, PoisonConfig};
use ltk_core::rng::{derive_seed, rng_from_seed, uniform_unit};
use ltk_core::trigger::{grid_resolution, TriggerConfig};

fn report(criterion: u32, name: &str, failures: &[String]) {
    if failures.is_empty() {
        println!("ACCEPTANCE {criterion} ({name}): PASS");
    } else {
        println!("ACCEPTANCE {criterion} ({name}): FAIL");
        for failure in failures {
            println!("  - {failure}");
        }
        panic!(
            "criterion {criterion} ({name}) failed:\n{}",
            failures.join("\n")
        );
    }
}

fn tio2() -> ltk_core::materials::MaterialSpec {
    builtin_database()
        .into_iter()
        .find(|m| m.name == "TitaniumDioxide")
        .unwrap()
}

#[test]
fn criterion_1_material_ranking_reproduction() {
    let started = Instant::now();
    let dir = tempfile::tempdir().unwrap();
    let report_path = dir.path().join("scores.json");
    let output = ltk()
        .args(["materials", "score", "--lambda-w", "0.2", "--grid-points", "81", "--out"])
        .arg(&report_path)
        .output()
        .unwrap();
    let elapsed = started.elapsed();

    let mut failures = Vec::new();
    if !output.status.success() {
        failures.push(format!(
            "materials score exited {:?}: {}",
            output.status.code(),
            String::from_utf8_lossy(&output.stderr)
        ));
        report(1, "material ranking reproduction", &failures);
        return;
    }

    let parsed: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(&report_path).unwrap()).unwrap();
    let scores = parsed["scores"].as_array().unwrap();

    // Reference ranking and score bands for the builtin candidates.
    let reference = [
        ("TitaniumDioxide", 1u64, 0.26, 0.18),
        ("Aluminum", 2, 0.21, 0.92),
        ("Copper", 3, 0.20, 0.94),
        ("Paper", 4, 0.17, 0.04),
    ];
    for (name, want_rank, want_combined, want_specular) in reference {
        let Some(entry) = scores.iter().find(|s| s["material_name"] == name) else {
            failures.push(format!("{name} missing from report"));
            continue;
        };
        let rank = entry["rank"].as_u64().unwrap();
        let combined = entry["combined_score"].as_f64().unwrap();
        let specular = entry["avg_specular"].as_f64().unwrap();
        if rank != want_rank {
            failures.push(format!("{name}: rank {rank}, reference {want_rank}"));
        }
        if (combined - want_combined).abs() > 0.05 {
            failures.push(format!(
                "{name}: combined {combined:.4} outside {want_combined} +/- 0.05"
            ));
        }
        if (specular - want_specular).abs() > 0.03 {
            failures.push(format!(
                "{name}: avg_specular {specular:.4} outside {want_specular} +/- 0.03"
            ));
        }
    }
    if elapsed.as_secs_f64() >= 1.0 {
        failures.push(format!("runtime {:.2}s exceeds 1s", elapsed.as_secs_f64()));
    }
    report(1, "material ranking reproduction", &failures);
}

#[test]
fn criterion_2_expectation_constants() {
    let started = Instant::now();
    let mut failures = Vec::new();

    let azim = azimuthal_expectation_quadrature(100_000).unwrap();
    if (azim - AZIMUTHAL_EXPECTATION).abs() > 1e-6 {
        failures.push(format!(
            "azimuthal quadrature {azim:.12} off 1/pi by {:.2e}",
            (azim - AZIMUTHAL_EXPECTATION).abs()
        ));
    }
    let hemi = hemispheric_expectation_quadrature(100_000).unwrap();
    if (hemi - HEMISPHERIC_EXPECTATION).abs() > 1e-6 {
        failures.push(format!(
            "hemispheric quadrature {hemi:.12} off 4/3 by {:.2e}",
            (hemi - HEMISPHERIC_EXPECTATION).abs()
        ));
    }

    let azim_mc = azimuthal_expectation_sampled(1_000_000, derive_seed(42, 1)).unwrap();
    if (azim_mc.mean - AZIMUTHAL_EXPECTATION).abs() > 3.0 * azim_mc.std_error {
        failures.push(format!(
            "azimuthal monte-carlo {:.7} deviates {:.2e} > 3se {:.2e}",
            azim_mc.mean,
            (azim_mc.mean - AZIMUTHAL_EXPECTATION).abs(),
            3.0 * azim_mc.std_error
        ));
    }
    let hemi_mc = hemispheric_expectation_sampled(1_000_000, derive_seed(42, 2)).unwrap();
    if (hemi_mc.mean - HEMISPHERIC_EXPECTATION).abs() > 3.0 * hemi_mc.std_error {
        failures.push(format!(
            "hemispheric monte-carlo {:.7} deviates {:.2e} > 3se {:.2e}",
            hemi_mc.mean,
            (hemi_mc.mean - HEMISPHERIC_EXPECTATION).abs(),
            3.0 * hemi_mc.std_error
        ));
    }

    let elapsed = started.elapsed();
    if elapsed.as_secs_f64() >= 5.0 {
        failures.push(format!("runtime {:.2}s exceeds 5s", elapsed.as_secs_f64()));
    }
    report(2, "expectation constants", &failures);
}

#[test]
fn criterion_3_approximation_equivalence() {
    let started = Instant::now();
    let dir = tempfile::tempdir().unwrap();
    let report_path = dir.path().join("validation.json");
    let output = ltk()
        .args(["validate", "--samples", "1000000", "--seed", "42", "--out"])
        .arg(&report_path)
        .output()
        .unwrap();

    let mut failures = Vec::new();
    if !output.status.success() {
        failures.push(format!(
            "validate exited {:?}: {}",
            output.status.code(),
            String::from_utf8_lossy(&output.stderr)
        ));
    } else {
        let parsed: serde_json::Value =
            serde_json::from_str(&fs::read_to_string(&report_path).unwrap()).unwrap();
        for check in parsed["materials"].as_array().unwrap() {
            if check["pass"] != true {
                failures.push(format!(
                    "{}: |{} - {}| > 3se",
                    check["name"],
                    check["report"]["sampled_mean_diffuse"],
                    check["report"]["closed_form_diffuse"]
                ));
            }
        }
    }

    // Exact equality for a smooth (sigma = 0) material: the integrand is
    // constant, so the sampled mean must match the closed form to 1e-12.
    let smooth = ltk_core::materials::MaterialSpec::new(
        "smooth",
        ComplexIndex::new(1.5, 0.0).unwrap(),
        0.6,
        0.0,
    )
    .unwrap();
    let smooth_report = validate_approximation(&smooth, 1_000_000, derive_seed(42, 3)).unwrap();
    let deviation = (smooth_report.sampled_mean_diffuse - smooth_report.closed_form_diffuse).abs();
    if deviation > 1e-12 {
        failures.push(format!("sigma=0 deviation {deviation:.2e} exceeds 1e-12"));
    }

    let elapsed = started.elapsed();
    if elapsed.as_secs_f64() >= 10.0 {
        failures.push(format!("runtime {:.2}s exceeds 10s", elapsed.as_secs_f64()));
    }
    report(3, "approximation equivalence", &failures);
}

#[test]
fn criterion_4_fresnel_closed_forms() {
    let mut failures = Vec::new();

    for n in [1.05, 1.33, 1.5, 2.0, 2.51, 3.2, 4.0] {
        let idx = ComplexIndex::new(n, 0.0).unwrap();
        let got = fresnel_unpolarized(idx, 0.0).unwrap();
        let expected = ((n - 1.0) / (n + 1.0)).powi(2);
        if (got - expected).abs() > 1e-12 {
            failures.push(format!(
                "dielectric n={n}: normal incidence {got:.15} vs closed form {expected:.15}"
            ));
        }
    }

    // Aluminum normal incidence against the complex-arithmetic oracle
    // |n - 1|^2 / |n + 1|^2.
    let (n, k) = (1.43, 8.33);
    let oracle = ((n - 1.0) * (n - 1.0) + k * k) / ((n + 1.0) * (n + 1.0) + k * k);
    let aluminum = fresnel_unpolarized(ComplexIndex::new(n, k).unwrap(), 0.0).unwrap();
    if (aluminum - oracle).abs() > 1e-12 || (aluminum - 0.924).abs() > 1e-3 {
        failures.push(format!(
            "aluminum normal incidence {aluminum:.6} vs oracle {oracle:.6} / 0.924 +/- 1e-3"
        ));
    }

    for n in [1.1, 1.33, 1.5, 2.51, 3.5] {
        let idx = ComplexIndex::new(n, 0.0).unwrap();
        let (_, r_p) = fresnel_polarized(idx, n.atan()).unwrap();
        if r_p > 1e-6 {
            failures.push(format!("Brewster dip for n={n}: R_p = {r_p:.2e} > 1e-6"));
        }
    }
    report(4, "fresnel closed forms", &failures);
}

#[test]
fn criterion_5_distance_scaling() {
    let mut failures = Vec::new();
    let config = TriggerConfig::with_defaults(tio2(), IntensityMode::Brdf);

    for (depth, want) in [(10.0, (10, 15)), (5.0, (20, 30)), (1e6, (4, 4))] {
        let got = grid_resolution(&config, depth).unwrap();
        if got != want {
            failures.push(format!("d={depth}: resolution {got:?}, expected {want:?}"));
        }
    }

    // Monotone non-increase over 1000 random depths.
    let mut stream = rng_from_seed(derive_seed(42, 5));
    let mut depths: Vec<f64> = (0..1000)
        .map(|_| 0.2 + uniform_unit(&mut stream) * 500.0)
        .collect();
    depths.sort_by(f64::total_cmp);
    let mut last = (u32::MAX, u32::MAX);
    for depth in depths {
        let (ny, nz) = grid_resolution(&config, depth).unwrap();
        if ny > last.0 || nz > last.1 {
            failures.push(format!("resolution grew at depth {depth}"));
            break;
        }
        if ny < 4 || nz < 4 {
            failures.push(format!("resolution fell below the floor at depth {depth}"));
            break;
        }
        last = (ny, nz);
    }
    report(5, "distance scaling", &failures);
}

#[test]
fn criterion_6_round_trip_fidelity() {
    let mut failures = Vec::new();

    // Corpus of 22 point-cloud files: empty, single-point, and twenty
    // varied frames including negative zero, subnormals, huge coordinates,
    // and out-of-range intensities.
    let mut corpus: Vec<Vec<LidarPoint>> = vec![
        vec![],
        vec![LidarPoint { x: 1.0, y: 2.0, z: 3.0, intensity: 0.5 }],
    ];
    let mut stream = rng_from_seed(derive_seed(42, 6));
    for file in 0..20 {
        let count = 1 + (file * 37) % 300;
        let mut points = Vec::with_capacity(count);
        for i in 0..count {
            let special = i % 17 == 0;
            points.push(if special {
                LidarPoint {
                    x: -0.0,
                    y: 1.5e-42,
                    z: 3.4e38,
                    intensity: 7.5,
                }
            } else {
                LidarPoint {
                    x: (uniform_unit(&mut stream) * 200.0 - 100.0) as f32,
                    y: (uniform_unit(&mut stream) * 200.0 - 100.0) as f32,
                    z: (uniform_unit(&mut stream) * 20.0 - 10.0) as f32,
                    intensity: uniform_unit(&mut stream) as f32,
                }
            });
        }
        corpus.push(points);
    }
    assert!(corpus.len() >= 20);
    for (i, points) in corpus.iter().enumerate() {
        let frame = PointCloudFrame {
            frame_id: FrameId::new(i as u32).unwrap(),
            points: points.clone(),
        };
        let bytes = write_point_cloud(&frame).unwrap();
        let reread = read_point_cloud(frame.frame_id, &bytes).unwrap();
        let rewritten = write_point_cloud(&reread).unwrap();
        if rewritten != bytes {
            failures.push(format!("file {i}: write(read(bytes)) differs"));
        }
        if reread.points != frame.points {
            failures.push(format!("file {i}: points changed across round trip"));
        }
    }

    // Label round trip preserves all 15 fields.
    let line = "Car 0.00 0 -1.58 587.01 173.33 614.12 200.12 1.65 1.67 3.64 -0.65 1.71 46.70 -1.59\nVan 0.20 2 1.02 0.00 150.00 88.12 220.00 2.10 1.90 5.20 -8.40 1.90 22.10 0.88\n";
    let labels = read_labels(line).unwrap();
    let written = write_labels(&labels).unwrap();
    if written != line {
        failures.push("label write(read(text)) is not byte-identical".into());
    }
    let reread = read_labels(&written).unwrap();
    if reread != labels {
        failures.push("label fields changed across round trip".into());
    }
    report(6, "round-trip fidelity", &failures);
}

#[test]
fn criterion_7_pipeline_determinism_and_counting() {
    let mut failures = Vec::new();
    let dataset = tempfile::tempdir().unwrap();
    common::write_synthetic_dataset(dataset.path(), 20);
    let out_a = tempfile::tempdir().unwrap();
    let out_b = tempfile::tempdir().unwrap();

    let mut config =
        PoisonConfig::with_defaults(TriggerConfig::with_defaults(tio2(), IntensityMode::Brdf), 0);
    config.seed = 42;

    let outcome = run_pipeline(dataset.path(), out_a.path(), &config).unwrap();
    let again = run_pipeline(dataset.path(), out_b.path(), &config).unwrap();

    if outcome.manifest.poisoned_frames.len() != 3 {
        failures.push(format!(
            "poisoned {} frames, expected 3 of 20 at rate 0.15",
            outcome.manifest.poisoned_frames.len()
        ));
    }
    if common::snapshot_tree(out_a.path()) != common::snapshot_tree(out_b.path()) {
        failures.push("same seed produced different output trees".into());
    }
    if outcome.manifest != again.manifest {
        failures.push("same seed produced different manifests".into());
    }

    let brdf_f32 = angle_independent_diffuse(&config.trigger.material).unwrap() as f32;
    for i in 0..20u32 {
        let frame_id = FrameId::new(i).unwrap();
        let name = format!("{frame_id}.bin");
        let before = fs::read(dataset.path().join("velodyne").join(&name)).unwrap();
        let after = fs::read(out_a.path().join("velodyne").join(&name)).unwrap();
        match outcome.manifest.poisoned_frames.iter().find(|e| e.frame_id == frame_id) {
            None => {
                if before != after {
                    failures.push(format!("clean frame {frame_id} not byte-identical"));
                }
            }
            Some(entry) => {
                let added = entry.n_y as usize * entry.n_z as usize;
                if entry.injected_point_count != added {
                    failures.push(format!(
                        "frame {frame_id}: manifest count {} != n_y*n_z {added}",
                        entry.injected_point_count
                    ));
                }
                if after.len() != before.len() + 16 * added {
                    failures.push(format!(
                        "frame {frame_id}: output size {} != input {} + 16*{added}",
                        after.len(),
                        before.len()
                    ));
                }
                let cloud = read_point_cloud(frame_id, &after).unwrap();
                for p in &cloud.points[cloud.points.len() - added..] {
                    if (f64::from(p.intensity) - f64::from(brdf_f32)).abs() > 1e-9 {
                        failures.push(format!(
                            "frame {frame_id}: injected intensity {} != {brdf_f32}",
                            p.intensity
                        ));
                        break;
                    }
                }
            }
        }
    }
    report(7, "pipeline determinism and counting", &failures);
}

#[test]
fn criterion_8_label_rewrite_semantics() {
    let mut failures = Vec::new();
    let mut stream = rng_from_seed(derive_seed(42, 8));

    for case in 0..100 {
        let count = 1 + (case % 5) as usize;
        let labels: Vec<ObjectLabel> = (0..count)
            .map(|j| {
                let mut label = common::car_label(
                    uniform_unit(&mut stream) * 20.0 - 10.0,
                    5.0 + uniform_unit(&mut stream) * 50.0,
                    uniform_unit(&mut stream) * 6.0 - 3.0,
                );
                label.dims_hwl = [
                    1.0 + uniform_unit(&mut stream) * 2.0,
                    1.0 + uniform_unit(&mut stream),
                    3.0 + uniform_unit(&mut stream) * 3.0,
                ];
                label.bbox_2d = [
                    uniform_unit(&mut stream) * 500.0,
                    uniform_unit(&mut stream) * 200.0,
                    500.0 + uniform_unit(&mut stream) * 500.0,
                    200.0 + uniform_unit(&mut stream) * 170.0,
                ];
                if j % 2 == 1 {
                    label.object_type = "Cyclist".into();
                }
                label
            })
            .collect();
        let target = (case as usize * 7) % count;
        let factor = 0.25 + uniform_unit(&mut stream) * 1.5;

        let resized =
            rewrite_label(&labels, target, AttackObjective::Resizing { scale_factor: factor })
                .unwrap();
        if resized.len() != labels.len() {
            failures.push(format!("case {case}: resizing changed label count"));
            break;
        }
        for (j, (before, after)) in labels.iter().zip(&resized).enumerate() {
            if j == target {
                for axis in 0..3 {
                    let want = before.dims_hwl[axis] * factor;
                    if after.dims_hwl[axis].to_bits() != want.to_bits() {
                        failures.push(format!("case {case}: dims not scaled exactly"));
                    }
                }
                let same_rest = after.location_xyz == before.location_xyz
                    && after.rotation_y.to_bits() == before.rotation_y.to_bits()
                    && after.bbox_2d == before.bbox_2d
                    && after.object_type == before.object_type
                    && after.truncated == before.truncated
                    && after.occluded == before.occluded
                    && after.alpha == before.alpha;
                if !same_rest {
                    failures.push(format!(
                        "case {case}: resizing touched fields other than dims"
                    ));
                }
            } else if after != before {
                failures.push(format!("case {case}: non-target label {j} changed"));
            }
        }

        let removed = rewrite_label(&labels, target, AttackObjective::Disappearance).unwrap();
        let mut expected = labels.clone();
        expected.remove(target);
        if removed != expected {
            failures.push(format!("case {case}: disappearance removed the wrong label"));
        }
        if !failures.is_empty() {
            break;
        }
    }
    report(8, "label rewrite semantics", &failures);
}
