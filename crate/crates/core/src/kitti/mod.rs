//! Bit-exact KITTI object-dataset I/O.
//!
//! Velodyne `.bin` point clouds (little-endian float32 x, y, z, intensity
//! records), 15-field object label lines, calibration files, and the
//! camera<->LiDAR coordinate transforms. Directory layout: `velodyne/`,
//! `label_2/`, `calib/` sharing six-digit frame ids.

mod calib;
mod cloud;
mod label;

pub use calib::{cam_to_velo, cam_to_velo_direction, read_calibration, velo_to_cam, CalibrationSet};
pub use cloud::{read_point_cloud, write_point_cloud, LidarPoint, PointCloudFrame, POINT_RECORD_BYTES};
pub use label::{read_labels, write_labels, ObjectLabel, DONT_CARE_TYPE};

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::Error;

/// Six-digit zero-padded frame identifier shared across `velodyne/`,
/// `label_2/`, and `calib/`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct FrameId(u32);

impl FrameId {
    pub fn new(value: u32) -> crate::Result<Self> {
        if value > 999_999 {
            return Err(Error::FrameId(value.to_string()));
        }
        Ok(Self(value))
    }

    pub fn value(&self) -> u32 {
        self.0
    }

    /// Numeric value used as the per-frame seed-derivation label.
    pub fn seed_label(&self) -> u64 {
        u64::from(self.0)
    }
}

impl fmt::Display for FrameId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:06}", self.0)
    }
}

impl FromStr for FrameId {
    type Err = Error;

    fn from_str(s: &str) -> crate::Result<Self> {
        if s.len() != 6 || !s.bytes().all(|b| b.is_ascii_digit()) {
            return Err(Error::FrameId(s.to_string()));
        }
        let value = s.parse::<u32>().map_err(|_| Error::FrameId(s.to_string()))?;
        FrameId::new(value)
    }
}

impl TryFrom<String> for FrameId {
    type Error = Error;

    fn try_from(s: String) -> crate::Result<Self> {
        s.parse()
    }
}

impl From<FrameId> for String {
    fn from(id: FrameId) -> String {
        id.to_string()
    }
}
