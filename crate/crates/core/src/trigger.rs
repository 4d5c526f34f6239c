//! Digital trigger synthesis.
//!
//! A trigger is a thin planar patch of points in its local y-z plane with
//! fixed physical dimensions. The grid resolution adapts to the target
//! depth `d` as `n = max(m_l, ceil(s * extent / d))`, so nearby targets get
//! dense patches and distant ones sparse patches while the physical extent
//! stays constant -- matching how a spinning LiDAR samples real surfaces.

use serde::{Deserialize, Serialize};

use crate::error::{ensure_finite, Error};
use crate::intensity::{self, IntensityMode};
use crate::materials::{self, MaterialRef, MaterialSpec};
use crate::Result;

/// Default patch width in meters.
pub const DEFAULT_WIDTH_M: f64 = 0.2;
/// Default patch height in meters.
pub const DEFAULT_HEIGHT_M: f64 = 0.3;
/// Default density scale; roughly the reciprocal of a spinning LiDAR's
/// effective angular resolution in radians.
pub const DEFAULT_SCALE_S: f64 = 500.0;
/// Default resolution floor per axis.
pub const DEFAULT_MIN_RESOLUTION: u32 = 4;

/// Trigger geometry, density, material, and intensity settings.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TriggerConfig {
    /// Physical width (local y extent) in meters.
    pub width_w: f64,
    /// Physical height (local z extent) in meters.
    pub height_h: f64,
    /// Density scale `s` in the resolution formula.
    pub scale_s: f64,
    /// Lower bound `m_l` on points per axis.
    pub min_resolution_m_l: u32,
    pub material: MaterialSpec,
    pub intensity_mode: IntensityMode,
}

impl TriggerConfig {
    /// Defaults (0.2 m x 0.3 m, s = 500, m_l = 4) around the given material
    /// and intensity mode.
    pub fn with_defaults(material: MaterialSpec, intensity_mode: IntensityMode) -> Self {
        Self {
            width_w: DEFAULT_WIDTH_M,
            height_h: DEFAULT_HEIGHT_M,
            scale_s: DEFAULT_SCALE_S,
            min_resolution_m_l: DEFAULT_MIN_RESOLUTION,
            material,
            intensity_mode,
        }
    }

    pub fn validate(&self) -> Result<()> {
        for (name, value) in [
            ("width_w", self.width_w),
            ("height_h", self.height_h),
            ("scale_s", self.scale_s),
        ] {
            ensure_finite(name, value)?;
            if value <= 0.0 {
                return Err(Error::OutOfRange {
                    name,
                    value,
                    min: f64::MIN_POSITIVE,
                    max: f64::INFINITY,
                });
            }
        }
        if self.min_resolution_m_l < 1 {
            return Err(Error::BelowMinimum {
                name: "min_resolution_m_l",
                value: u64::from(self.min_resolution_m_l),
                min: 1,
            });
        }
        Ok(())
    }
}

/// JSON file schema for a trigger section. Every field has a default;
/// `material` may name a builtin database entry or carry an inline spec.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TriggerConfigFile {
    #[serde(rename = "w", default = "default_width")]
    pub width_w: f64,
    #[serde(rename = "h", default = "default_height")]
    pub height_h: f64,
    #[serde(rename = "s", default = "default_scale")]
    pub scale_s: f64,
    #[serde(rename = "m_l", default = "default_min_resolution")]
    pub min_resolution_m_l: u32,
    #[serde(default = "default_material")]
    pub material: MaterialRef,
    #[serde(default = "default_intensity_mode")]
    pub intensity_mode: IntensityMode,
}

fn default_width() -> f64 {
    DEFAULT_WIDTH_M
}

fn default_height() -> f64 {
    DEFAULT_HEIGHT_M
}

fn default_scale() -> f64 {
    DEFAULT_SCALE_S
}

fn default_min_resolution() -> u32 {
    DEFAULT_MIN_RESOLUTION
}

fn default_material() -> MaterialRef {
    MaterialRef::Name("TitaniumDioxide".to_string())
}

fn default_intensity_mode() -> IntensityMode {
    IntensityMode::Brdf
}

impl Default for TriggerConfigFile {
    fn default() -> Self {
        TriggerConfigFile {
            width_w: default_width(),
            height_h: default_height(),
            scale_s: default_scale(),
            min_resolution_m_l: default_min_resolution(),
            material: default_material(),
            intensity_mode: default_intensity_mode(),
        }
    }
}

impl TriggerConfigFile {
    /// Resolves the material against the builtin database and validates.
    pub fn resolve(self) -> Result<TriggerConfig> {
        let material = self.material.resolve(&materials::builtin_database())?;
        let config = TriggerConfig {
            width_w: self.width_w,
            height_h: self.height_h,
            scale_s: self.scale_s,
            min_resolution_m_l: self.min_resolution_m_l,
            material,
            intensity_mode: self.intensity_mode,
        };
        config.validate()?;
        Ok(config)
    }
}

/// Parses and resolves a standalone trigger config from JSON text.
pub fn parse_trigger_config(json: &str) -> Result<TriggerConfig> {
    let file: TriggerConfigFile = serde_json::from_str(json)?;
    file.resolve()
}

/// One synthesized point in the patch's local frame, meters and `[0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PatchPoint {
    pub x: f64,
    pub y: f64,
    pub z: f64,
    pub intensity: f64,
}

/// A synthesized planar trigger patch.
///
/// Points lie in the local y-z plane (`x = 0`), centered on the origin, in
/// row-major order: z varies in the outer loop, y in the inner. For
/// `n >= 2` per axis the extreme coordinates span exactly the configured
/// width and height.
#[derive(Debug, Clone, PartialEq)]
pub struct TriggerPatch {
    pub points: Vec<PatchPoint>,
    pub n_y: u32,
    pub n_z: u32,
    /// Depth the resolution was computed for.
    pub depth_d: f64,
}

/// Grid resolution `(n_y, n_z)` at depth `d`:
/// `n = max(m_l, ceil(s * extent / d))` per axis.
pub fn grid_resolution(config: &TriggerConfig, depth_d: f64) -> Result<(u32, u32)> {
    config.validate()?;
    ensure_finite("depth_d", depth_d)?;
    if depth_d <= 0.0 {
        return Err(Error::OutOfRange {
            name: "depth_d",
            value: depth_d,
            min: f64::MIN_POSITIVE,
            max: f64::INFINITY,
        });
    }
    let axis = |extent: f64| -> u32 {
        // The cast saturates at u32::MAX for absurd densities.
        let wanted = (config.scale_s * extent / depth_d).ceil() as u32;
        wanted.max(config.min_resolution_m_l)
    };
    Ok((axis(config.width_w), axis(config.height_h)))
}

/// Endpoint-inclusive axis coordinates spanning `extent` around zero.
/// A single point sits at the span center.
fn axis_coords(extent: f64, n: u32) -> Vec<f64> {
    if n == 1 {
        return vec![0.0];
    }
    (0..n)
        .map(|i| (f64::from(i) / f64::from(n - 1) - 0.5) * extent)
        .collect()
}

/// Synthesizes the patch for `config` at depth `depth_d`.
pub fn synthesize_patch(config: &TriggerConfig, depth_d: f64) -> Result<TriggerPatch> {
    let (n_y, n_z) = grid_resolution(config, depth_d)?;
    let point_count = n_y as usize * n_z as usize;
    let intensities = intensity::assign_intensity(config.intensity_mode, &config.material, point_count)?;

    let ys = axis_coords(config.width_w, n_y);
    let zs = axis_coords(config.height_h, n_z);
    let mut points = Vec::with_capacity(point_count);
    for (zi, &z) in zs.iter().enumerate() {
        for (yi, &y) in ys.iter().enumerate() {
            points.push(PatchPoint {
                x: 0.0,
                y,
                z,
                intensity: intensities[zi * n_y as usize + yi],
            });
        }
    }
    Ok(TriggerPatch {
        points,
        n_y,
        n_z,
        depth_d,
    })
}
