//! Synthetic KITTI-layout fixtures shared by the integration tests.
#![allow(dead_code)] // each test binary uses a different subset

use std::fs;
use std::path::Path;

use ltk_core::kitti::{write_labels, write_point_cloud, FrameId, LidarPoint, ObjectLabel, PointCloudFrame};
use ltk_core::rng::{derive_seed, rng_from_seed, uniform_unit};

/// Axis-permutation calibration with zero offset: x_cam = -y_velo,
/// y_cam = -z_velo, z_cam = x_velo. Exactly orthonormal.
pub const AXIS_SWAP_CALIB: &str = "\
P0: 1 0 0 0 0 1 0 0 0 0 1 0
P1: 1 0 0 0 0 1 0 0 0 0 1 0
P2: 1 0 0 0 0 1 0 0 0 0 1 0
P3: 1 0 0 0 0 1 0 0 0 0 1 0
R0_rect: 1 0 0 0 1 0 0 0 1
Tr_velo_to_cam: 0 -1 0 0 0 0 -1 0 1 0 0 0
";

pub fn car_label(x_cam: f64, z_cam: f64, rotation_y: f64) -> ObjectLabel {
    ObjectLabel {
        object_type: "Car".into(),
        truncated: 0.0,
        occluded: 0,
        alpha: 0.0,
        bbox_2d: [100.0, 100.0, 220.0, 190.0],
        dims_hwl: [1.5, 1.7, 4.0],
        location_xyz: [x_cam, 0.0, z_cam],
        rotation_y,
    }
}

pub fn pedestrian_label(z_cam: f64) -> ObjectLabel {
    ObjectLabel {
        object_type: "Pedestrian".into(),
        truncated: 0.0,
        occluded: 1,
        alpha: 0.2,
        bbox_2d: [300.0, 110.0, 340.0, 230.0],
        dims_hwl: [1.8, 0.6, 0.9],
        location_xyz: [1.5, 0.0, z_cam],
        rotation_y: 0.1,
    }
}

pub fn dont_care_label() -> ObjectLabel {
    ObjectLabel {
        object_type: "DontCare".into(),
        truncated: -1.0,
        occluded: -1,
        alpha: -10.0,
        bbox_2d: [500.0, 160.0, 560.0, 190.0],
        dims_hwl: [-1.0, -1.0, -1.0],
        location_xyz: [-1000.0, -1000.0, -1000.0],
        rotation_y: -10.0,
    }
}

/// Deterministic background scan: `point_count` returns spread over the
/// forward field of view.
pub fn background_cloud(frame_id: FrameId, point_count: usize) -> PointCloudFrame {
    let mut stream = rng_from_seed(derive_seed(0xF1D0, frame_id.seed_label()));
    let points = (0..point_count)
        .map(|_| LidarPoint {
            x: (uniform_unit(&mut stream) * 60.0) as f32,
            y: (uniform_unit(&mut stream) * 40.0 - 20.0) as f32,
            z: (uniform_unit(&mut stream) * 5.0 - 2.0) as f32,
            intensity: uniform_unit(&mut stream) as f32,
        })
        .collect();
    PointCloudFrame { frame_id, points }
}

/// Writes a `frame_count`-frame dataset in the KITTI layout. Every frame
/// contains one Car within eligibility range, so they are all eligible.
pub fn write_synthetic_dataset(root: &Path, frame_count: u32) {
    for sub in ["velodyne", "label_2", "calib"] {
        fs::create_dir_all(root.join(sub)).unwrap();
    }
    for i in 0..frame_count {
        let frame_id = FrameId::new(i).unwrap();
        let cloud = background_cloud(frame_id, 200 + (i as usize % 7) * 30);
        fs::write(
            root.join("velodyne").join(format!("{frame_id}.bin")),
            write_point_cloud(&cloud).unwrap(),
        )
        .unwrap();

        let z_cam = 8.0 + f64::from(i % 12) * 2.5;
        let x_cam = f64::from(i % 5) - 2.0;
        let yaw = f64::from(i % 8) * 0.7 - 2.8;
        let mut labels = vec![car_label(x_cam, z_cam, yaw)];
        if i % 3 == 0 {
            labels.push(pedestrian_label(z_cam + 4.0));
        }
        if i % 4 == 0 {
            labels.push(dont_care_label());
        }
        if i % 5 == 2 {
            // A second, farther car; the nearer one must be targeted.
            labels.push(car_label(-x_cam, z_cam + 10.0, -yaw));
        }
        fs::write(
            root.join("label_2").join(format!("{frame_id}.txt")),
            write_labels(&labels).unwrap(),
        )
        .unwrap();

        fs::write(
            root.join("calib").join(format!("{frame_id}.txt")),
            AXIS_SWAP_CALIB,
        )
        .unwrap();
    }
}

/// Recursively collects `(relative path, bytes)` for tree comparison.
pub fn snapshot_tree(root: &Path) -> Vec<(String, Vec<u8>)> {
    let mut entries = Vec::new();
    fn walk(base: &Path, dir: &Path, out: &mut Vec<(String, Vec<u8>)>) {
        let mut paths: Vec<_> = fs::read_dir(dir).unwrap().map(|e| e.unwrap().path()).collect();
        paths.sort();
        for path in paths {
            if path.is_dir() {
                walk(base, &path, out);
            } else {
                let rel = path.strip_prefix(base).unwrap().display().to_string();
                out.push((rel, fs::read(&path).unwrap()));
            }
        }
    }
    walk(root, root, &mut entries);
    entries
}
