//! Angle-independent LiDAR intensity model and its validation harness.
//!
//! The angle-independent diffuse reflectance replaces the angular factors of
//! the Oren-Nayar model with their expectations:
//!
//! - the azimuthal factor `max(0, cos dphi)` averages to `1/pi` over a
//!   uniform azimuth;
//! - the geometric factor `sin^2(theta)/cos(theta)` averages to `4/3` over
//!   the upper hemisphere with `sin(theta) cos(theta)` sampling weights.
//!
//! That gives `R = (rho/pi) (A + 4B / (3 pi))`, a single intensity per
//! material that needs no per-point surface geometry. Both constants are
//! recomputed here by quadrature and by Monte-Carlo sampling, and
//! [`validate_approximation`] replays the full angular model under the same
//! sampling distributions so the closed form can be checked end to end: the
//! derivation makes the Monte-Carlo estimator unbiased for the closed form,
//! so the two must agree within sampling error.

use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{ensure_in_range, Error};
use crate::materials::MaterialSpec;
use crate::numeric::{KahanSum, MomentAccumulator};
use crate::optics::{self, IncidenceGeometry};
use crate::{parallel, rng, Result};

/// `E[max(0, cos dphi)]` over a uniform azimuth: `1/pi`.
pub const AZIMUTHAL_EXPECTATION: f64 = std::f64::consts::FRAC_1_PI;

/// `E[sin^2(theta)/cos(theta)]` over the weighted hemisphere: `4/3`.
pub const HEMISPHERIC_EXPECTATION: f64 = 4.0 / 3.0;

/// Minimum sample count accepted by [`validate_approximation`].
pub const MIN_VALIDATION_SAMPLES: u64 = 10_000;

/// Work-unit size for the chunked reductions. Fixed chunk boundaries make
/// parallel and sequential runs bit-identical.
const CHUNK: u64 = 8192;

/// How each trigger point gets its intensity value.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum IntensityMode {
    /// Angle-independent diffuse reflectance of the trigger material.
    Brdf,
    /// One constant for every point.
    Fixed { fixed_value: f64 },
    /// Independent uniform draws in `[0, 1)` from `seed`.
    Random { seed: u64 },
    /// Zero intensity; the channel is still serialized.
    None,
}

impl IntensityMode {
    pub fn fixed(value: f64) -> Self {
        IntensityMode::Fixed { fixed_value: value }
    }
}

/// Point estimate with its standard error.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SampledEstimate {
    pub mean: f64,
    pub std_error: f64,
    pub sample_count: u64,
}

/// Side-by-side comparison of the closed-form intensity and a Monte-Carlo
/// replay of the full angular model.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ExpectationReport {
    /// Sampled mean of `max(0, cos dphi)`; converges to `1/pi`.
    pub azimuthal_expectation: f64,
    /// Sampled mean of `sin^2(theta)/cos(theta)`; converges to `4/3`.
    pub hemispheric_expectation: f64,
    /// `(rho/pi) (A + 4B/(3 pi))`.
    pub closed_form_diffuse: f64,
    /// Sampled mean of the full angular model.
    pub sampled_mean_diffuse: f64,
    pub sample_count: u64,
    /// Standard error of `sampled_mean_diffuse`.
    pub std_error: f64,
}

fn ensure_node_count(node_count: usize) -> Result<()> {
    if node_count < 2 {
        return Err(Error::BelowMinimum {
            name: "node_count",
            value: node_count as u64,
            min: 2,
        });
    }
    Ok(())
}

/// Chunked compensated sum of `f(j)` for `j in 0..count`.
fn chunked_sum<F>(count: u64, term: F) -> f64
where
    F: Fn(u64) -> f64 + Sync + Send,
{
    let chunks = count.div_ceil(CHUNK) as usize;
    let partials = parallel::map_indexed(chunks, |c| {
        let start = c as u64 * CHUNK;
        let end = (start + CHUNK).min(count);
        let mut acc = KahanSum::default();
        for j in start..end {
            acc.add(term(j));
        }
        acc.value()
    });
    let mut total = KahanSum::default();
    for p in partials {
        total.add(p);
    }
    total.value()
}

/// Rectangle-rule estimate of `(1/2pi) Int_0^{2pi} max(0, cos dphi) d dphi`.
///
/// The integrand is periodic, so the rule converges to `1/pi` at
/// `O(1/node_count^2)` despite the kinks at `pi/2` and `3pi/2`.
pub fn azimuthal_expectation_quadrature(node_count: usize) -> Result<f64> {
    ensure_node_count(node_count)?;
    let h = std::f64::consts::TAU / node_count as f64;
    let sum = chunked_sum(node_count as u64, |j| (j as f64 * h).cos().max(0.0));
    Ok(sum / node_count as f64)
}

/// Midpoint-rule estimates of the numerator `Int_0^{pi/2} sin^3` and the
/// denominator `Int_0^{pi/2} sin cos` of the hemispheric expectation.
pub fn hemispheric_quadrature_parts(node_count: usize) -> Result<(f64, f64)> {
    ensure_node_count(node_count)?;
    let h = std::f64::consts::FRAC_PI_2 / node_count as f64;
    let numerator = chunked_sum(node_count as u64, |j| {
        let t = (j as f64 + 0.5) * h;
        t.sin().powi(3)
    }) * h;
    let denominator = chunked_sum(node_count as u64, |j| {
        let t = (j as f64 + 0.5) * h;
        t.sin() * t.cos()
    }) * h;
    Ok((numerator, denominator))
}

/// Ratio of the two hemispheric integrals; converges to `4/3`.
pub fn hemispheric_expectation_quadrature(node_count: usize) -> Result<f64> {
    let (numerator, denominator) = hemispheric_quadrature_parts(node_count)?;
    Ok(numerator / denominator)
}

fn ensure_sample_count(sample_count: u64, min: u64) -> Result<()> {
    if sample_count < min {
        return Err(Error::BelowMinimum {
            name: "sample_count",
            value: sample_count,
            min,
        });
    }
    Ok(())
}

/// Chunked Monte-Carlo driver. Chunk `c` draws from the stream
/// `derive_seed(seed, c)`, and chunk results merge in index order, so the
/// outcome is independent of thread schedule.
fn chunked_monte_carlo<F>(sample_count: u64, seed: u64, sample: F) -> MomentAccumulator
where
    F: Fn(&mut ChaCha8Rng) -> f64 + Sync + Send,
{
    let chunks = sample_count.div_ceil(CHUNK) as usize;
    let partials = parallel::map_indexed(chunks, |c| {
        let mut stream = rng::rng_from_seed(rng::derive_seed(seed, c as u64));
        let start = c as u64 * CHUNK;
        let end = (start + CHUNK).min(sample_count);
        let mut acc = MomentAccumulator::default();
        for _ in start..end {
            acc.add(sample(&mut stream));
        }
        acc
    });
    let mut total = MomentAccumulator::default();
    for p in partials {
        total.merge(p);
    }
    total
}

/// Monte-Carlo estimate of the azimuthal expectation from uniform draws of
/// `dphi` on `[0, 2pi)`. Independent check of the quadrature value `1/pi`.
pub fn azimuthal_expectation_sampled(sample_count: u64, seed: u64) -> Result<SampledEstimate> {
    ensure_sample_count(sample_count, 2)?;
    let acc = chunked_monte_carlo(sample_count, seed, |stream| {
        (std::f64::consts::TAU * rng::uniform_unit(stream)).cos().max(0.0)
    });
    Ok(SampledEstimate {
        mean: acc.mean(),
        std_error: acc.std_error(),
        sample_count,
    })
}

/// Monte-Carlo estimate of the hemispheric expectation: `theta` is drawn
/// with density proportional to `sin(theta) cos(theta)` via
/// `theta = asin(sqrt(u))`, the inverse of the CDF `sin^2(theta)`.
pub fn hemispheric_expectation_sampled(sample_count: u64, seed: u64) -> Result<SampledEstimate> {
    ensure_sample_count(sample_count, 2)?;
    let acc = chunked_monte_carlo(sample_count, seed, |stream| {
        let theta = rng::uniform_unit(stream).sqrt().asin();
        theta.sin() * theta.tan()
    });
    Ok(SampledEstimate {
        mean: acc.mean(),
        std_error: acc.std_error(),
        sample_count,
    })
}

/// Closed-form angle-independent diffuse reflectance
/// `(rho/pi) (A + 4B / (3 pi))`.
pub fn angle_independent_diffuse(material: &MaterialSpec) -> Result<f64> {
    let rho = ensure_in_range("diffuse_albedo_rho", material.diffuse_albedo_rho, 0.0, 1.0)?;
    let coeffs = optics::roughness_coefficients(material.roughness_sigma)?;
    Ok(rho / std::f64::consts::PI
        * (coeffs.a_coef + 4.0 * coeffs.b_coef / (3.0 * std::f64::consts::PI)))
}

/// Replays the full angular model under the derivation's sampling
/// distributions and reports the sampled mean next to the closed form.
///
/// `dphi` is uniform on `[0, 2pi)`, `theta` has density proportional to
/// `sin(theta) cos(theta)` on `[0, pi/2)`, and the model is evaluated
/// monostatically at `theta_i = theta_r = theta`. Deterministic given
/// `seed`.
pub fn validate_approximation(
    material: &MaterialSpec,
    sample_count: u64,
    seed: u64,
) -> Result<ExpectationReport> {
    ensure_sample_count(sample_count, MIN_VALIDATION_SAMPLES)?;
    let closed_form = angle_independent_diffuse(material)?;

    #[derive(Default, Clone, Copy)]
    struct Partial {
        diffuse: MomentAccumulator,
        azimuthal: KahanSum,
        hemispheric: KahanSum,
    }

    let chunks = sample_count.div_ceil(CHUNK) as usize;
    let partials = parallel::map_indexed(chunks, |c| {
        let mut stream = rng::rng_from_seed(rng::derive_seed(seed, c as u64));
        let start = c as u64 * CHUNK;
        let end = (start + CHUNK).min(sample_count);
        let mut acc = Partial::default();
        for _ in start..end {
            let dphi = std::f64::consts::TAU * rng::uniform_unit(&mut stream);
            let theta = rng::uniform_unit(&mut stream).sqrt().asin();
            let geom = IncidenceGeometry::new(theta, theta, dphi)
                .expect("sampled angles satisfy the geometry invariants");
            let value = optics::oren_nayar(material, &geom)
                .expect("material was validated before sampling");
            acc.diffuse.add(value);
            acc.azimuthal.add(dphi.cos().max(0.0));
            acc.hemispheric.add(theta.sin() * theta.tan());
        }
        acc
    });

    let mut diffuse = MomentAccumulator::default();
    let mut azimuthal = KahanSum::default();
    let mut hemispheric = KahanSum::default();
    for p in partials {
        diffuse.merge(p.diffuse);
        azimuthal.merge(p.azimuthal);
        hemispheric.merge(p.hemispheric);
    }

    let n = sample_count as f64;
    Ok(ExpectationReport {
        azimuthal_expectation: azimuthal.value() / n,
        hemispheric_expectation: hemispheric.value() / n,
        closed_form_diffuse: closed_form,
        sampled_mean_diffuse: diffuse.mean(),
        sample_count,
        std_error: diffuse.std_error(),
    })
}

/// Produces `point_count` intensities in `[0, 1]` for the given mode.
pub fn assign_intensity(
    mode: IntensityMode,
    material: &MaterialSpec,
    point_count: usize,
) -> Result<Vec<f64>> {
    if point_count < 1 {
        return Err(Error::BelowMinimum {
            name: "point_count",
            value: point_count as u64,
            min: 1,
        });
    }
    match mode {
        IntensityMode::Brdf => {
            let value = angle_independent_diffuse(material)?;
            Ok(vec![value; point_count])
        }
        IntensityMode::Fixed { fixed_value } => {
            let value = ensure_in_range("fixed_value", fixed_value, 0.0, 1.0)?;
            Ok(vec![value; point_count])
        }
        IntensityMode::Random { seed } => {
            let mut stream = rng::rng_from_seed(seed);
            Ok((0..point_count)
                .map(|_| rng::uniform_unit(&mut stream))
                .collect())
        }
        IntensityMode::None => Ok(vec![0.0; point_count]),
    }
}
