//! Calibration files and camera<->LiDAR transforms.
//!
//! A KITTI calibration file carries `P0`..`P3` (3x4 projections), `R0_rect`
//! (3x3 rectifying rotation), and `Tr_velo_to_cam` (3x4 rigid transform).
//! A LiDAR point maps to the rectified camera frame as
//! `x_cam = R0 * (R_tr * x_velo + t_tr)`; the inverse uses rotation
//! transposes (the rigid analytic inverse) rather than general matrix
//! inversion.

use crate::error::Error;
use crate::Result;

pub type Mat3 = [[f64; 3]; 3];
pub type Mat34 = [[f64; 4]; 3];

/// Calibration matrices for one frame.
#[derive(Debug, Clone, PartialEq)]
pub struct CalibrationSet {
    /// Projection matrices P0..P3 (cameras 0-3).
    pub projections: [Mat34; 4],
    pub r0_rect: Mat3,
    pub tr_velo_to_cam: Mat34,
}

fn rotation_of(m: &Mat34) -> Mat3 {
    [
        [m[0][0], m[0][1], m[0][2]],
        [m[1][0], m[1][1], m[1][2]],
        [m[2][0], m[2][1], m[2][2]],
    ]
}

fn translation_of(m: &Mat34) -> [f64; 3] {
    [m[0][3], m[1][3], m[2][3]]
}

fn det3(m: &Mat3) -> f64 {
    m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
        - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
        + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
}

fn mul_vec(m: &Mat3, v: [f64; 3]) -> [f64; 3] {
    [
        m[0][0] * v[0] + m[0][1] * v[1] + m[0][2] * v[2],
        m[1][0] * v[0] + m[1][1] * v[1] + m[1][2] * v[2],
        m[2][0] * v[0] + m[2][1] * v[1] + m[2][2] * v[2],
    ]
}

/// `m^T * v`: applies the inverse of an orthonormal `m` without
/// materializing the transpose.
fn mul_transpose_vec(m: &Mat3, v: [f64; 3]) -> [f64; 3] {
    [
        m[0][0] * v[0] + m[1][0] * v[1] + m[2][0] * v[2],
        m[0][1] * v[0] + m[1][1] * v[1] + m[2][1] * v[2],
        m[0][2] * v[0] + m[1][2] * v[1] + m[2][2] * v[2],
    ]
}

fn max_abs_diff_from_identity(m: &Mat3) -> f64 {
    let mut worst: f64 = 0.0;
    for r in 0..3 {
        for c in 0..3 {
            // row r of m times row c of m = (m m^T)[r][c]
            let dot = m[r][0] * m[c][0] + m[r][1] * m[c][1] + m[r][2] * m[c][2];
            let target = if r == c { 1.0 } else { 0.0 };
            worst = worst.max((dot - target).abs());
        }
    }
    worst
}

fn ensure_invertible(rotation: &Mat3) -> Result<()> {
    let det = det3(rotation);
    if det.abs() < 1e-9 {
        return Err(Error::SingularTransform(det));
    }
    Ok(())
}

impl CalibrationSet {
    /// Validates the stored-file invariants: finite entries and `R0_rect`
    /// orthonormal within 1e-3 (files carry limited precision).
    pub fn validate(&self) -> Result<()> {
        let finite34 = |m: &Mat34| m.iter().flatten().all(|v| v.is_finite());
        if !self.projections.iter().all(finite34)
            || !finite34(&self.tr_velo_to_cam)
            || !self.r0_rect.iter().flatten().all(|v| v.is_finite())
        {
            return Err(Error::Calibration("non-finite matrix entry".into()));
        }
        let drift = max_abs_diff_from_identity(&self.r0_rect);
        if drift > 1e-3 {
            return Err(Error::Calibration(format!(
                "R0_rect deviates from orthonormal by {drift:.2e} (limit 1e-3)"
            )));
        }
        Ok(())
    }
}

/// Parses a calibration file. Rows look like `P0: v0 v1 ... v11` (the colon
/// is optional); `P0`..`P3` and `Tr_velo_to_cam` carry 12 values, `R0_rect`
/// 9. Unknown keys are ignored.
pub fn read_calibration(text: &str) -> Result<CalibrationSet> {
    let mut p: [Option<Mat34>; 4] = [None, None, None, None];
    let mut r0: Option<Mat3> = None;
    let mut tr: Option<Mat34> = None;

    for raw in text.lines() {
        let line = raw.trim();
        if line.is_empty() {
            continue;
        }
        let mut parts = line.split_whitespace();
        let Some(key) = parts.next() else { continue };
        let key = key.trim_end_matches(':');
        let values: Vec<f64> = parts
            .map(|t| {
                t.parse::<f64>()
                    .map_err(|_| Error::Calibration(format!("unparsable value {t:?} in row {key}")))
            })
            .collect::<Result<_>>()?;

        let want = |n: usize| -> Result<()> {
            if values.len() == n {
                Ok(())
            } else {
                Err(Error::Calibration(format!(
                    "row {key} has {} values, expected {n}",
                    values.len()
                )))
            }
        };
        let as34 = |v: &[f64]| -> Mat34 {
            [
                [v[0], v[1], v[2], v[3]],
                [v[4], v[5], v[6], v[7]],
                [v[8], v[9], v[10], v[11]],
            ]
        };
        match key {
            "P0" | "P1" | "P2" | "P3" => {
                want(12)?;
                let idx = (key.as_bytes()[1] - b'0') as usize;
                p[idx] = Some(as34(&values));
            }
            "R0_rect" | "R_rect" => {
                want(9)?;
                r0 = Some([
                    [values[0], values[1], values[2]],
                    [values[3], values[4], values[5]],
                    [values[6], values[7], values[8]],
                ]);
            }
            "Tr_velo_to_cam" => {
                want(12)?;
                tr = Some(as34(&values));
            }
            _ => {}
        }
    }

    let missing = |what: &str| Error::Calibration(format!("missing row {what}"));
    let calib = CalibrationSet {
        projections: [
            p[0].ok_or_else(|| missing("P0"))?,
            p[1].ok_or_else(|| missing("P1"))?,
            p[2].ok_or_else(|| missing("P2"))?,
            p[3].ok_or_else(|| missing("P3"))?,
        ],
        r0_rect: r0.ok_or_else(|| missing("R0_rect"))?,
        tr_velo_to_cam: tr.ok_or_else(|| missing("Tr_velo_to_cam"))?,
    };
    calib.validate()?;
    Ok(calib)
}

/// LiDAR frame to rectified camera frame.
pub fn velo_to_cam(point: [f64; 3], calib: &CalibrationSet) -> Result<[f64; 3]> {
    let rotation = rotation_of(&calib.tr_velo_to_cam);
    ensure_invertible(&rotation)?;
    ensure_invertible(&calib.r0_rect)?;
    let t = translation_of(&calib.tr_velo_to_cam);
    let moved = mul_vec(&rotation, point);
    let cam = [moved[0] + t[0], moved[1] + t[1], moved[2] + t[2]];
    Ok(mul_vec(&calib.r0_rect, cam))
}

/// Rectified camera frame to LiDAR frame: the rigid inverse
/// `x_velo = R_tr^T (R0^T x_cam - t_tr)`.
pub fn cam_to_velo(point: [f64; 3], calib: &CalibrationSet) -> Result<[f64; 3]> {
    let rotation = rotation_of(&calib.tr_velo_to_cam);
    ensure_invertible(&rotation)?;
    ensure_invertible(&calib.r0_rect)?;
    let t = translation_of(&calib.tr_velo_to_cam);
    let unrect = mul_transpose_vec(&calib.r0_rect, point);
    let shifted = [unrect[0] - t[0], unrect[1] - t[1], unrect[2] - t[2]];
    Ok(mul_transpose_vec(&rotation, shifted))
}

/// Direction (rotation-only) version of [`cam_to_velo`] for normals and
/// axes.
pub fn cam_to_velo_direction(direction: [f64; 3], calib: &CalibrationSet) -> Result<[f64; 3]> {
    let rotation = rotation_of(&calib.tr_velo_to_cam);
    ensure_invertible(&rotation)?;
    ensure_invertible(&calib.r0_rect)?;
    let unrect = mul_transpose_vec(&calib.r0_rect, direction);
    Ok(mul_transpose_vec(&rotation, unrect))
}
