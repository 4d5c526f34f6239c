//! Velodyne `.bin` point-cloud records.

use crate::error::Error;
use crate::Result;

use super::FrameId;

/// Bytes per point record: four little-endian `f32` values.
pub const POINT_RECORD_BYTES: usize = 16;

/// One LiDAR return. Coordinates in meters (x forward, y left, z up);
/// intensity nominally in `[0, 1]`. Out-of-range intensities in source
/// files are preserved verbatim so round-trips never corrupt third-party
/// data; they are only flagged by inspection tooling.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LidarPoint {
    pub x: f32,
    pub y: f32,
    pub z: f32,
    pub intensity: f32,
}

/// One LiDAR scan with its frame identity.
#[derive(Debug, Clone, PartialEq)]
pub struct PointCloudFrame {
    pub frame_id: FrameId,
    pub points: Vec<LidarPoint>,
}

/// Parses consecutive 16-byte little-endian float quadruplets in file order.
pub fn read_point_cloud(frame_id: FrameId, bytes: &[u8]) -> Result<PointCloudFrame> {
    if bytes.len() % POINT_RECORD_BYTES != 0 {
        return Err(Error::PointCloudLength(bytes.len()));
    }
    let mut points = Vec::with_capacity(bytes.len() / POINT_RECORD_BYTES);
    for (index, record) in bytes.chunks_exact(POINT_RECORD_BYTES).enumerate() {
        let field = |at: usize| f32::from_le_bytes(record[at..at + 4].try_into().unwrap());
        let point = LidarPoint {
            x: field(0),
            y: field(4),
            z: field(8),
            intensity: field(12),
        };
        if !(point.x.is_finite()
            && point.y.is_finite()
            && point.z.is_finite()
            && point.intensity.is_finite())
        {
            return Err(Error::NonFinitePoint { index });
        }
        points.push(point);
    }
    Ok(PointCloudFrame { frame_id, points })
}

/// Inverse of [`read_point_cloud`]; the round trip is byte-exact.
pub fn write_point_cloud(frame: &PointCloudFrame) -> Result<Vec<u8>> {
    let mut bytes = Vec::with_capacity(frame.points.len() * POINT_RECORD_BYTES);
    for (index, point) in frame.points.iter().enumerate() {
        if !(point.x.is_finite()
            && point.y.is_finite()
            && point.z.is_finite()
            && point.intensity.is_finite())
        {
            return Err(Error::NonFinitePoint { index });
        }
        bytes.extend_from_slice(&point.x.to_le_bytes());
        bytes.extend_from_slice(&point.y.to_le_bytes());
        bytes.extend_from_slice(&point.z.to_le_bytes());
        bytes.extend_from_slice(&point.intensity.to_le_bytes());
    }
    Ok(bytes)
}
