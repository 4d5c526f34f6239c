//! Physically-based LiDAR reflectance modeling and KITTI dataset poisoning.
//!
//! The crate has three layers:
//!
//! - **Reflectance physics** ([`optics`], [`materials`], [`intensity`]):
//!   Fresnel specular reflectance for complex refractive indices, the
//!   Oren-Nayar rough-diffuse BRDF, a material scoring objective that ranks
//!   candidate trigger coatings at 905 nm, and an angle-independent diffuse
//!   approximation with a quadrature/Monte-Carlo validation harness.
//! - **Trigger synthesis** ([`trigger`]): planar point-grid triggers with
//!   fixed physical size and depth-adaptive sampling density.
//! - **Dataset tooling** ([`kitti`], [`poison`]): bit-exact KITTI
//!   velodyne/label/calibration I/O and a deterministic poisoning pipeline
//!   that injects triggers and rewrites labels.
//!
//! All randomness flows from explicit 64-bit seeds (see [`rng`]); every
//! operation is deterministic given its inputs. With the `parallel` feature
//! (on by default) the heavy inner loops run on rayon, and they are chunked
//! so that parallel and sequential runs produce bit-identical results.

pub mod error;
pub mod intensity;
pub mod kitti;
pub mod materials;
pub mod numeric;
pub mod optics;
pub mod parallel;
pub mod poison;
pub mod rng;
pub mod trigger;

pub use error::Error;

pub type Result<T> = std::result::Result<T, Error>;
