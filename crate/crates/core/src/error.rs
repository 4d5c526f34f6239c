//! Crate-wide error type.

use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("{name} must be finite, got {value}")]
    NonFinite { name: &'static str, value: f64 },

    #[error("{name} = {value} is outside [{min}, {max}]")]
    OutOfRange {
        name: &'static str,
        value: f64,
        min: f64,
        max: f64,
    },

    #[error("{name} = {value}, need at least {min}")]
    BelowMinimum {
        name: &'static str,
        value: u64,
        min: u64,
    },

    #[error("refractive index real part must be positive, got {0}")]
    NonPhysicalIndex(f64),

    #[error("reflectance {value} deviates from [0, 1] by more than {tolerance:e}")]
    ReflectanceSpill { value: f64, tolerance: f64 },

    #[error("angle grid is empty")]
    EmptyAngleGrid,

    #[error("material database is empty")]
    EmptyDatabase,

    #[error("duplicate material name {0:?}")]
    DuplicateMaterial(String),

    #[error("unknown material {0:?}; not in the loaded database")]
    UnknownMaterial(String),

    #[error("point cloud byte length {0} is not a multiple of 16")]
    PointCloudLength(usize),

    #[error("non-finite component in point {index}")]
    NonFinitePoint { index: usize },

    #[error("label line {line}: {reason}")]
    LabelFormat { line: usize, reason: String },

    #[error("invalid frame id {0:?}: want exactly six digits")]
    FrameId(String),

    #[error("calibration: {0}")]
    Calibration(String),

    #[error("singular transform: rotation determinant {0:e} below 1e-9")]
    SingularTransform(f64),

    #[error("degenerate box dimensions h={h} w={w} l={l}")]
    DegenerateBox { h: f64, w: f64, l: f64 },

    #[error("no eligible frames: no {target_class:?} label with positive dimensions within {max_depth} m")]
    NoEligibleFrames {
        target_class: String,
        max_depth: f64,
    },

    #[error("target object index {index} out of range for frame with {label_count} labels")]
    TargetIndex { index: usize, label_count: usize },

    #[error("config: {0}")]
    Config(String),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("frame {frame_id}: {source}")]
    Frame {
        frame_id: String,
        #[source]
        source: Box<Error>,
    },

    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    pub fn in_frame(frame_id: impl ToString, source: Error) -> Self {
        Error::Frame {
            frame_id: frame_id.to_string(),
            source: Box::new(source),
        }
    }
}

/// Checks that `value` is finite, as a building block for argument validation.
pub(crate) fn ensure_finite(name: &'static str, value: f64) -> crate::Result<f64> {
    if value.is_finite() {
        Ok(value)
    } else {
        Err(Error::NonFinite { name, value })
    }
}

/// Checks that `value` is finite and inside `[min, max]`.
pub(crate) fn ensure_in_range(
    name: &'static str,
    value: f64,
    min: f64,
    max: f64,
) -> crate::Result<f64> {
    ensure_finite(name, value)?;
    if value < min || value > max {
        return Err(Error::OutOfRange {
            name,
            value,
            min,
            max,
        });
    }
    Ok(value)
}
