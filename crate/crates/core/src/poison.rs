//! End-to-end dataset poisoning.
//!
//! Selects a seeded fraction of eligible frames, places a trigger patch on
//! the sensor-facing end of the nearest target vehicle, injects the patch
//! points into the velodyne scan, rewrites the target's label per the
//! attack objective, and persists a manifest of everything it did.
//!
//! Frames are independent work units: per-frame randomness derives from
//! `(config.seed, frame id)`, clean frames are copied verbatim, and the
//! manifest is assembled in frame-id order, so output is identical under
//! any processing schedule.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{ensure_in_range, Error};
use crate::intensity::IntensityMode;
use crate::kitti::{
    self, cam_to_velo, cam_to_velo_direction, CalibrationSet, FrameId, ObjectLabel,
    PointCloudFrame,
};
use crate::trigger::{self, TriggerConfig, TriggerConfigFile, TriggerPatch};
use crate::{parallel, rng, Result};

/// Manifest file written at the output root.
pub const MANIFEST_FILE_NAME: &str = "poison_manifest.json";

/// Marker file left behind when a run aborts mid-way.
pub const INCOMPLETE_MARKER: &str = "INCOMPLETE";

/// Default fraction of eligible frames to poison.
pub const DEFAULT_POISON_RATE: f64 = 0.15;

/// Default label class to target.
pub const DEFAULT_TARGET_CLASS: &str = "Car";

/// Default patch height on the box face, as a fraction of box height above
/// the bottom (rear-glass height on a sedan).
pub const DEFAULT_PLACEMENT_HEIGHT_FRACTION: f64 = 0.75;

/// Default eligibility cutoff: targets farther than this are skipped, since
/// floor-clamped patches would dominate the signal out there.
pub const DEFAULT_MAX_DEPTH_M: f64 = 60.0;

/// What the attack does to the target label.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum AttackObjective {
    /// Scale the box dimensions, keeping the bottom-center anchored.
    Resizing {
        #[serde(default = "default_scale_factor")]
        scale_factor: f64,
    },
    /// Remove the target's label entirely.
    Disappearance,
}

fn default_scale_factor() -> f64 {
    0.5
}

impl Default for AttackObjective {
    fn default() -> Self {
        AttackObjective::Resizing {
            scale_factor: default_scale_factor(),
        }
    }
}

/// How target depth is measured from the sensor origin.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DepthMetric {
    /// Minimum Euclidean distance over the eight box corners.
    #[default]
    Euclidean,
    /// Minimum forward (x) coordinate over the eight box corners.
    Forward,
}

/// Full pipeline configuration with the trigger material resolved.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PoisonConfig {
    pub poison_rate: f64,
    pub target_class: String,
    pub trigger: TriggerConfig,
    pub objective: AttackObjective,
    pub placement_height_fraction: f64,
    pub max_depth: f64,
    pub depth_metric: DepthMetric,
    pub seed: u64,
}

impl PoisonConfig {
    /// Defaults: 15% rate, Car targets, TiO2 BRDF trigger, 0.5x resizing.
    pub fn with_defaults(trigger: TriggerConfig, seed: u64) -> Self {
        Self {
            poison_rate: DEFAULT_POISON_RATE,
            target_class: DEFAULT_TARGET_CLASS.to_string(),
            trigger,
            objective: AttackObjective::default(),
            placement_height_fraction: DEFAULT_PLACEMENT_HEIGHT_FRACTION,
            max_depth: DEFAULT_MAX_DEPTH_M,
            depth_metric: DepthMetric::Euclidean,
            seed: rng::derive_seed(seed, 0),
        }
    }

    pub fn validate(&self) -> Result<()> {
        ensure_in_range("poison_rate", self.poison_rate, f64::MIN_POSITIVE, 1.0)
            .map_err(|_| Error::Config(format!("poison_rate {} must be in (0, 1]", self.poison_rate)))?;
        if self.target_class.is_empty() {
            return Err(Error::Config("target_class is empty".into()));
        }
        self.trigger.validate()?;
        if let AttackObjective::Resizing { scale_factor } = self.objective {
            if !scale_factor.is_finite() || scale_factor <= 0.0 || scale_factor > 10.0 {
                return Err(Error::Config(format!(
                    "scale_factor {scale_factor} must be in (0, 10]"
                )));
            }
        }
        ensure_in_range(
            "placement_height_fraction",
            self.placement_height_fraction,
            0.0,
            1.0,
        )?;
        if !self.max_depth.is_finite() || self.max_depth <= 0.0 {
            return Err(Error::Config(format!(
                "max_depth {} must be positive",
                self.max_depth
            )));
        }
        Ok(())
    }
}

/// JSON file schema: `trigger.material` may be a database name or an inline
/// spec, and every field has a default.
#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct PoisonConfigFile {
    #[serde(default = "default_rate")]
    poison_rate: f64,
    #[serde(default = "default_target_class")]
    target_class: String,
    #[serde(default)]
    trigger: TriggerConfigFile,
    #[serde(default)]
    objective: AttackObjective,
    #[serde(default = "default_height_fraction")]
    placement_height_fraction: f64,
    #[serde(default = "default_max_depth")]
    max_depth: f64,
    #[serde(default)]
    depth_metric: DepthMetric,
    #[serde(default)]
    seed: u64,
}

fn default_rate() -> f64 {
    DEFAULT_POISON_RATE
}

fn default_target_class() -> String {
    DEFAULT_TARGET_CLASS.to_string()
}

fn default_height_fraction() -> f64 {
    DEFAULT_PLACEMENT_HEIGHT_FRACTION
}

fn default_max_depth() -> f64 {
    DEFAULT_MAX_DEPTH_M
}

/// Parses and validates a pipeline config from its JSON file contents.
pub fn parse_config(json: &str) -> Result<PoisonConfig> {
    let file: PoisonConfigFile = serde_json::from_str(json)?;
    let config = PoisonConfig {
        poison_rate: file.poison_rate,
        target_class: file.target_class,
        trigger: file.trigger.resolve()?,
        objective: file.objective,
        placement_height_fraction: file.placement_height_fraction,
        max_depth: file.max_depth,
        depth_metric: file.depth_metric,
        seed: file.seed,
    };
    config.validate()?;
    Ok(config)
}

/// Trigger placement on the target's sensor-facing end face.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Placement {
    /// Patch center in LiDAR coordinates, meters.
    pub center: [f64; 3],
    /// Unit normal of the face, pointing away from the vehicle.
    pub outward_normal: [f64; 3],
    /// Target depth per the configured metric.
    pub depth_d: f64,
}

/// One frame's chosen target.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FrameTarget {
    pub frame_id: FrameId,
    pub target_index: usize,
    pub depth_d: f64,
}

/// Per-frame record of what was poisoned.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ManifestEntry {
    pub frame_id: FrameId,
    pub target_object_index: usize,
    pub depth_d: f64,
    pub n_y: u32,
    pub n_z: u32,
    pub injected_point_count: usize,
    pub original_dims: [f64; 3],
    pub rewritten_dims_or_removed: RewriteOutcome,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RewriteOutcome {
    Removed,
    Resized { dims_hwl: [f64; 3] },
}

/// Reproducibility record for one pipeline run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PoisonManifest {
    pub dataset_root: String,
    pub config: PoisonConfig,
    pub poisoned_frames: Vec<ManifestEntry>,
    pub tool_version: String,
}

/// Manifest plus run statistics that are not part of the persisted record.
#[derive(Debug, Clone, PartialEq)]
pub struct PipelineOutcome {
    pub manifest: PoisonManifest,
    pub total_frames: usize,
    pub eligible_frames: usize,
}

mod vec3 {
    pub fn sub(a: [f64; 3], b: [f64; 3]) -> [f64; 3] {
        [a[0] - b[0], a[1] - b[1], a[2] - b[2]]
    }

    pub fn add(a: [f64; 3], b: [f64; 3]) -> [f64; 3] {
        [a[0] + b[0], a[1] + b[1], a[2] + b[2]]
    }

    pub fn scale(a: [f64; 3], s: f64) -> [f64; 3] {
        [a[0] * s, a[1] * s, a[2] * s]
    }

    pub fn dot(a: [f64; 3], b: [f64; 3]) -> f64 {
        a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
    }

    pub fn cross(a: [f64; 3], b: [f64; 3]) -> [f64; 3] {
        [
            a[1] * b[2] - a[2] * b[1],
            a[2] * b[0] - a[0] * b[2],
            a[0] * b[1] - a[1] * b[0],
        ]
    }

    pub fn norm(a: [f64; 3]) -> f64 {
        dot(a, a).sqrt()
    }

    pub fn normalize(a: [f64; 3]) -> [f64; 3] {
        scale(a, 1.0 / norm(a))
    }
}

/// Rotation by `rotation_y` around the camera y-axis.
fn rotate_y(angle: f64, v: [f64; 3]) -> [f64; 3] {
    let (s, c) = angle.sin_cos();
    [c * v[0] + s * v[2], v[1], -s * v[0] + c * v[2]]
}

/// The eight box corners in camera coordinates. KITTI boxes anchor at the
/// bottom-center with y pointing down, so the box spans y in [-h, 0].
fn box_corners_cam(label: &ObjectLabel) -> [[f64; 3]; 8] {
    let [h, w, l] = label.dims_hwl;
    let mut corners = [[0.0; 3]; 8];
    let mut i = 0;
    for &sx in &[-0.5, 0.5] {
        for &sy in &[-1.0, 0.0] {
            for &sz in &[-0.5, 0.5] {
                let local = [sx * l, sy * h, sz * w];
                corners[i] = vec3::add(rotate_y(label.rotation_y, local), label.location_xyz);
                i += 1;
            }
        }
    }
    corners
}

/// Depth of a label's box per the configured metric; also used for
/// eligibility screening.
pub fn label_depth(
    label: &ObjectLabel,
    calib: &CalibrationSet,
    metric: DepthMetric,
) -> Result<f64> {
    let mut depth = f64::INFINITY;
    for corner in box_corners_cam(label) {
        let velo = cam_to_velo(corner, calib)?;
        let d = match metric {
            DepthMetric::Euclidean => vec3::norm(velo),
            DepthMetric::Forward => velo[0],
        };
        depth = depth.min(d);
    }
    Ok(depth)
}

/// Computes the trigger placement for one labeled box.
///
/// The two box faces perpendicular to the vehicle's length axis are
/// candidates; the one whose outward normal points more directly at the
/// sensor origin wins. The patch center sits on that face,
/// `height_fraction` of the box height above the box bottom, laterally
/// centered.
pub fn compute_placement(
    label: &ObjectLabel,
    calib: &CalibrationSet,
    height_fraction: f64,
    metric: DepthMetric,
) -> Result<Placement> {
    let [h, w, l] = label.dims_hwl;
    if !(h > 0.0 && w > 0.0 && l > 0.0) {
        return Err(Error::DegenerateBox { h, w, l });
    }
    ensure_in_range("height_fraction", height_fraction, 0.0, 1.0)?;

    let face = |sign: f64| -> Result<([f64; 3], [f64; 3])> {
        // Patch anchor: on the end face, raised off the box bottom.
        let anchor_cam = vec3::add(
            vec3::add(
                rotate_y(label.rotation_y, [sign * 0.5 * l, 0.0, 0.0]),
                [0.0, -height_fraction * h, 0.0],
            ),
            label.location_xyz,
        );
        let normal_cam = rotate_y(label.rotation_y, [sign, 0.0, 0.0]);
        let anchor = cam_to_velo(anchor_cam, calib)?;
        let normal = vec3::normalize(cam_to_velo_direction(normal_cam, calib)?);
        Ok((anchor, normal))
    };

    let (front_center, front_normal) = face(1.0)?;
    let (rear_center, rear_normal) = face(-1.0)?;
    let facing = |center: [f64; 3], normal: [f64; 3]| {
        vec3::dot(normal, vec3::normalize(vec3::sub([0.0; 3], center)))
    };
    let (center, outward_normal) =
        if facing(front_center, front_normal) >= facing(rear_center, rear_normal) {
            (front_center, front_normal)
        } else {
            (rear_center, rear_normal)
        };

    Ok(Placement {
        center,
        outward_normal,
        depth_d: label_depth(label, calib, metric)?,
    })
}

/// Orthonormal in-plane axes for a patch whose plane normal is `normal`:
/// `e_z` is the world-up direction projected into the plane (so the patch
/// stays upright), `e_y` completes the right-handed frame.
fn patch_basis(normal: [f64; 3]) -> ([f64; 3], [f64; 3]) {
    let up_seed = if normal[2].abs() < 0.99 {
        [0.0, 0.0, 1.0]
    } else {
        [0.0, 1.0, 0.0]
    };
    let e_z = vec3::normalize(vec3::sub(up_seed, vec3::scale(normal, vec3::dot(up_seed, normal))));
    let e_y = vec3::cross(e_z, normal);
    (e_y, e_z)
}

/// Appends the patch to the frame, rigidly placed so its plane normal
/// aligns with the placement normal and its center sits at the placement
/// center. Original points are untouched and keep their order.
pub fn inject_trigger(
    frame: &PointCloudFrame,
    patch: &TriggerPatch,
    placement: &Placement,
) -> PointCloudFrame {
    let (e_y, e_z) = patch_basis(placement.outward_normal);
    let mut out = frame.clone();
    out.points.reserve(patch.points.len());
    for p in &patch.points {
        let world = vec3::add(
            placement.center,
            vec3::add(vec3::scale(e_y, p.y), vec3::scale(e_z, p.z)),
        );
        out.points.push(kitti::LidarPoint {
            x: world[0] as f32,
            y: world[1] as f32,
            z: world[2] as f32,
            intensity: p.intensity as f32,
        });
    }
    out
}

/// Applies the attack objective to `labels`, returning the rewritten list.
///
/// Disappearance removes the target label; resizing scales its dimensions
/// component-wise. KITTI locations anchor at the bottom-center, so the
/// location (and every other field) is left untouched by resizing.
pub fn rewrite_label(
    labels: &[ObjectLabel],
    target_index: usize,
    objective: AttackObjective,
) -> Result<Vec<ObjectLabel>> {
    if target_index >= labels.len() {
        return Err(Error::TargetIndex {
            index: target_index,
            label_count: labels.len(),
        });
    }
    let mut out = Vec::with_capacity(labels.len());
    for (i, label) in labels.iter().enumerate() {
        if i == target_index {
            match objective {
                AttackObjective::Disappearance => continue,
                AttackObjective::Resizing { scale_factor } => {
                    let mut resized = label.clone();
                    for d in &mut resized.dims_hwl {
                        *d *= scale_factor;
                    }
                    out.push(resized);
                }
            }
        } else {
            out.push(label.clone());
        }
    }
    Ok(out)
}

/// Finds the nearest eligible target in one frame, if any: a label of the
/// target class with positive dimensions whose depth is positive and
/// within `max_depth`.
pub fn nearest_eligible_target(
    frame_id: FrameId,
    labels: &[ObjectLabel],
    calib: &CalibrationSet,
    config: &PoisonConfig,
) -> Result<Option<FrameTarget>> {
    let mut best: Option<FrameTarget> = None;
    for (index, label) in labels.iter().enumerate() {
        if label.object_type != config.target_class {
            continue;
        }
        let [h, w, l] = label.dims_hwl;
        if !(h > 0.0 && w > 0.0 && l > 0.0) {
            continue;
        }
        let depth = label_depth(label, calib, config.depth_metric)?;
        if depth <= 0.0 || depth > config.max_depth {
            continue;
        }
        if best.is_none_or(|b| depth < b.depth_d) {
            best = Some(FrameTarget {
                frame_id,
                target_index: index,
                depth_d: depth,
            });
        }
    }
    Ok(best)
}

/// Label reserved for the selection shuffle stream (frame labels are the
/// six-digit ids, well below this).
const SELECTION_STREAM: u64 = u64::MAX;

/// Chooses `round(poison_rate * eligible)` frames by seeded shuffle.
/// Deterministic given the seed; the result is sorted by frame id.
pub fn select_poison_set(
    eligible: &[FrameTarget],
    config: &PoisonConfig,
) -> Result<Vec<FrameTarget>> {
    config.validate()?;
    if eligible.is_empty() {
        return Err(Error::NoEligibleFrames {
            target_class: config.target_class.clone(),
            max_depth: config.max_depth,
        });
    }
    let mut pool: Vec<FrameTarget> = eligible.to_vec();
    pool.sort_by_key(|t| t.frame_id);
    let mut stream = rng::rng_from_seed(rng::derive_seed(config.seed, SELECTION_STREAM));
    rng::shuffle(&mut pool, &mut stream);
    let count = (config.poison_rate * eligible.len() as f64).round() as usize;
    let mut chosen: Vec<FrameTarget> = pool.into_iter().take(count).collect();
    chosen.sort_by_key(|t| t.frame_id);
    Ok(chosen)
}

struct FramePaths {
    velodyne: PathBuf,
    label: PathBuf,
    calib: PathBuf,
}

fn frame_paths(root: &Path, frame_id: FrameId) -> FramePaths {
    FramePaths {
        velodyne: root.join("velodyne").join(format!("{frame_id}.bin")),
        label: root.join("label_2").join(format!("{frame_id}.txt")),
        calib: root.join("calib").join(format!("{frame_id}.txt")),
    }
}

fn read_to_string(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| Error::io(path, e))
}

fn read_bytes(path: &Path) -> Result<Vec<u8>> {
    fs::read(path).map_err(|e| Error::io(path, e))
}

fn write_bytes(path: &Path, bytes: &[u8]) -> Result<()> {
    fs::write(path, bytes).map_err(|e| Error::io(path, e))
}

fn copy_file(from: &Path, to: &Path) -> Result<()> {
    fs::copy(from, to).map(|_| ()).map_err(|e| Error::io(from, e))
}

/// Frame ids present in `velodyne/`, sorted. Only `######.bin` entries
/// count as frames.
fn enumerate_frames(dataset_root: &Path) -> Result<Vec<FrameId>> {
    let velodyne = dataset_root.join("velodyne");
    let mut ids = Vec::new();
    let entries = fs::read_dir(&velodyne).map_err(|e| Error::io(&velodyne, e))?;
    for entry in entries {
        let entry = entry.map_err(|e| Error::io(&velodyne, e))?;
        let path = entry.path();
        if path.extension().and_then(|e| e.to_str()) != Some("bin") {
            continue;
        }
        let Some(stem) = path.file_stem().and_then(|s| s.to_str()) else {
            continue;
        };
        if let Ok(id) = stem.parse::<FrameId>() {
            ids.push(id);
        }
    }
    ids.sort_unstable();
    Ok(ids)
}

/// The intensity mode actually used for one frame: random draws re-seed
/// from `(config.seed, frame id)` so frames are schedule-independent.
fn frame_intensity_mode(config: &PoisonConfig, frame_id: FrameId) -> IntensityMode {
    match config.trigger.intensity_mode {
        IntensityMode::Random { .. } => IntensityMode::Random {
            seed: rng::derive_seed(config.seed, frame_id.seed_label()),
        },
        mode => mode,
    }
}

fn poison_frame(
    input: &FramePaths,
    output: &FramePaths,
    target: &FrameTarget,
    config: &PoisonConfig,
) -> Result<ManifestEntry> {
    let frame_id = target.frame_id;
    let cloud = kitti::read_point_cloud(frame_id, &read_bytes(&input.velodyne)?)?;
    let labels = kitti::read_labels(&read_to_string(&input.label)?)?;
    let calib = kitti::read_calibration(&read_to_string(&input.calib)?)?;

    if target.target_index >= labels.len() {
        return Err(Error::TargetIndex {
            index: target.target_index,
            label_count: labels.len(),
        });
    }
    let label = &labels[target.target_index];
    let placement = compute_placement(
        label,
        &calib,
        config.placement_height_fraction,
        config.depth_metric,
    )?;

    let mut trigger_config = config.trigger.clone();
    trigger_config.intensity_mode = frame_intensity_mode(config, frame_id);
    let patch = trigger::synthesize_patch(&trigger_config, placement.depth_d)?;

    let poisoned_cloud = inject_trigger(&cloud, &patch, &placement);
    let rewritten = rewrite_label(&labels, target.target_index, config.objective)?;

    write_bytes(&output.velodyne, &kitti::write_point_cloud(&poisoned_cloud)?)?;
    write_bytes(&output.label, kitti::write_labels(&rewritten)?.as_bytes())?;
    copy_file(&input.calib, &output.calib)?;

    Ok(ManifestEntry {
        frame_id,
        target_object_index: target.target_index,
        depth_d: placement.depth_d,
        n_y: patch.n_y,
        n_z: patch.n_z,
        injected_point_count: patch.points.len(),
        original_dims: label.dims_hwl,
        rewritten_dims_or_removed: match config.objective {
            AttackObjective::Disappearance => RewriteOutcome::Removed,
            AttackObjective::Resizing { .. } => RewriteOutcome::Resized {
                dims_hwl: rewritten[target.target_index].dims_hwl,
            },
        },
    })
}

/// Runs the full pipeline: copies clean frames verbatim, poisons the
/// selected ones, and writes the manifest JSON at the output root.
///
/// Deterministic given `config.seed`; any frame-level error aborts the run
/// and leaves an [`INCOMPLETE_MARKER`] file at the output root.
pub fn run_pipeline(
    dataset_root: &Path,
    output_root: &Path,
    config: &PoisonConfig,
) -> Result<PipelineOutcome> {
    config.validate()?;
    for sub in ["velodyne", "label_2", "calib"] {
        let dir = dataset_root.join(sub);
        if !dir.is_dir() {
            return Err(Error::io(
                &dir,
                std::io::Error::new(std::io::ErrorKind::NotFound, "missing dataset directory"),
            ));
        }
    }

    let frame_ids = enumerate_frames(dataset_root)?;
    let total_frames = frame_ids.len();

    // Eligibility pre-pass: labels and calibration only, no cloud reads.
    let candidates = parallel::map_indexed(frame_ids.len(), |i| -> Result<Option<FrameTarget>> {
        let frame_id = frame_ids[i];
        let paths = frame_paths(dataset_root, frame_id);
        let labels =
            kitti::read_labels(&read_to_string(&paths.label)?).map_err(|e| Error::in_frame(frame_id, e))?;
        let calib = kitti::read_calibration(&read_to_string(&paths.calib)?)
            .map_err(|e| Error::in_frame(frame_id, e))?;
        nearest_eligible_target(frame_id, &labels, &calib, config)
            .map_err(|e| Error::in_frame(frame_id, e))
    });
    let mut eligible = Vec::new();
    for candidate in candidates {
        if let Some(target) = candidate? {
            eligible.push(target);
        }
    }
    let eligible_frames = eligible.len();

    let selected = select_poison_set(&eligible, config)?;
    let selected_by_frame: BTreeMap<FrameId, FrameTarget> =
        selected.iter().map(|t| (t.frame_id, *t)).collect();

    for sub in ["velodyne", "label_2", "calib"] {
        let dir = output_root.join(sub);
        fs::create_dir_all(&dir).map_err(|e| Error::io(&dir, e))?;
    }

    let results = parallel::map_indexed(frame_ids.len(), |i| -> Result<Option<ManifestEntry>> {
        let frame_id = frame_ids[i];
        let input = frame_paths(dataset_root, frame_id);
        let output = frame_paths(output_root, frame_id);
        match selected_by_frame.get(&frame_id) {
            Some(target) => poison_frame(&input, &output, target, config)
                .map(Some)
                .map_err(|e| Error::in_frame(frame_id, e)),
            None => {
                copy_file(&input.velodyne, &output.velodyne)?;
                copy_file(&input.label, &output.label)?;
                copy_file(&input.calib, &output.calib)?;
                Ok(None)
            }
        }
    });

    let mut poisoned_frames = Vec::with_capacity(selected.len());
    for result in results {
        match result {
            Ok(Some(entry)) => poisoned_frames.push(entry),
            Ok(None) => {}
            Err(e) => {
                let marker = output_root.join(INCOMPLETE_MARKER);
                let _ = fs::write(&marker, format!("aborted: {e}\n"));
                return Err(e);
            }
        }
    }

    let manifest = PoisonManifest {
        dataset_root: dataset_root.display().to_string(),
        config: config.clone(),
        poisoned_frames,
        tool_version: env!("CARGO_PKG_VERSION").to_string(),
    };
    let manifest_path = output_root.join(MANIFEST_FILE_NAME);
    let json = serde_json::to_string_pretty(&manifest)?;
    write_bytes(&manifest_path, json.as_bytes())?;

    Ok(PipelineOutcome {
        manifest,
        total_frames,
        eligible_frames,
    })
}

/// Reads a manifest back from its JSON file contents.
pub fn parse_manifest(json: &str) -> Result<PoisonManifest> {
    Ok(serde_json::from_str(json)?)
}
