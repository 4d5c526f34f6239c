//! KITTI object label lines.
//!
//! Each line has exactly 15 whitespace-separated fields:
//! type, truncated, occluded, alpha, four 2D bbox pixel coordinates,
//! three dimensions (height, width, length), the camera-frame bottom-center
//! location (x, y, z), and the yaw `rotation_y`. Floats are written with
//! two decimals, matching stock ground-truth files, so rewritten labels are
//! not fingerprintable by formatting alone.

use crate::error::Error;
use crate::Result;

/// Object type for ignore regions; its numeric fields carry sentinels and
/// are exempt from semantic validation.
pub const DONT_CARE_TYPE: &str = "DontCare";

/// One labeled object in camera coordinates.
#[derive(Debug, Clone, PartialEq)]
pub struct ObjectLabel {
    pub object_type: String,
    /// Fraction of the object outside image boundaries.
    pub truncated: f64,
    /// Occlusion state code (0 fully visible .. 3 unknown).
    pub occluded: i32,
    /// Observation angle in radians.
    pub alpha: f64,
    /// 2D box: left, top, right, bottom in pixels.
    pub bbox_2d: [f64; 4],
    /// 3D dimensions: height, width, length in meters.
    pub dims_hwl: [f64; 3],
    /// Bottom-center of the 3D box in camera coordinates, meters.
    pub location_xyz: [f64; 3],
    /// Yaw around the camera y-axis, radians in [-pi, pi].
    pub rotation_y: f64,
}

impl ObjectLabel {
    pub fn is_dont_care(&self) -> bool {
        self.object_type == DONT_CARE_TYPE
    }
}

fn validate(label: &ObjectLabel, line: usize) -> Result<()> {
    let bad = |reason: String| Error::LabelFormat { line, reason };
    let all_fields = [
        ("truncated", label.truncated),
        ("alpha", label.alpha),
        ("rotation_y", label.rotation_y),
    ]
    .into_iter()
    .chain(label.bbox_2d.iter().map(|&v| ("bbox", v)))
    .chain(label.dims_hwl.iter().map(|&v| ("dimensions", v)))
    .chain(label.location_xyz.iter().map(|&v| ("location", v)));
    for (name, value) in all_fields {
        if !value.is_finite() {
            return Err(bad(format!("non-finite {name} value {value}")));
        }
    }
    if !label.is_dont_care() {
        let [h, w, l] = label.dims_hwl;
        if h <= 0.0 || w <= 0.0 || l <= 0.0 {
            return Err(bad(format!(
                "non-positive dimensions {h} {w} {l} for type {:?}",
                label.object_type
            )));
        }
        if label.rotation_y.abs() > std::f64::consts::PI + 1e-6 {
            return Err(bad(format!("rotation_y {} outside [-pi, pi]", label.rotation_y)));
        }
    }
    Ok(())
}

/// Parses a label file. Empty input gives an empty list; errors carry
/// 1-based line numbers.
pub fn read_labels(text: &str) -> Result<Vec<ObjectLabel>> {
    let mut labels = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        if raw.trim().is_empty() {
            continue;
        }
        let fields: Vec<&str> = raw.split_whitespace().collect();
        if fields.len() != 15 {
            return Err(Error::LabelFormat {
                line,
                reason: format!("expected 15 fields, found {}", fields.len()),
            });
        }
        let float = |at: usize, name: &str| -> Result<f64> {
            fields[at].parse::<f64>().map_err(|_| Error::LabelFormat {
                line,
                reason: format!("unparsable {name} {:?}", fields[at]),
            })
        };
        let occluded = fields[2].parse::<i32>().map_err(|_| Error::LabelFormat {
            line,
            reason: format!("unparsable occluded code {:?}", fields[2]),
        })?;
        let label = ObjectLabel {
            object_type: fields[0].to_string(),
            truncated: float(1, "truncated")?,
            occluded,
            alpha: float(3, "alpha")?,
            bbox_2d: [
                float(4, "bbox left")?,
                float(5, "bbox top")?,
                float(6, "bbox right")?,
                float(7, "bbox bottom")?,
            ],
            dims_hwl: [
                float(8, "height")?,
                float(9, "width")?,
                float(10, "length")?,
            ],
            location_xyz: [float(11, "x")?, float(12, "y")?, float(13, "z")?],
            rotation_y: float(14, "rotation_y")?,
        };
        validate(&label, line)?;
        labels.push(label);
    }
    Ok(labels)
}

/// Serializes labels with two-decimal fixed formatting for float fields.
/// Reading back what was written is value-preserving, and a second
/// write/read cycle is a fixed point.
pub fn write_labels(labels: &[ObjectLabel]) -> Result<String> {
    let mut out = String::new();
    for (i, label) in labels.iter().enumerate() {
        validate(label, i + 1)?;
        out.push_str(&format!(
            "{} {:.2} {} {:.2} {:.2} {:.2} {:.2} {:.2} {:.2} {:.2} {:.2} {:.2} {:.2} {:.2} {:.2}\n",
            label.object_type,
            label.truncated,
            label.occluded,
            label.alpha,
            label.bbox_2d[0],
            label.bbox_2d[1],
            label.bbox_2d[2],
            label.bbox_2d[3],
            label.dims_hwl[0],
            label.dims_hwl[1],
            label.dims_hwl[2],
            label.location_xyz[0],
            label.location_xyz[1],
            label.location_xyz[2],
            label.rotation_y,
        ));
    }
    Ok(out)
}
