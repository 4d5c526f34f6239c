//! Closed-form reflectance physics.
//!
//! Fresnel specular reflectance at an air interface for complex refractive
//! indices (absorbing media), the Oren-Nayar rough-diffuse BRDF, and the
//! environmental perturbation formulas (water-film index mixing and beam
//! divergence).
//!
//! Conventions:
//! - the ambient medium is air, `n1 = 1`;
//! - angles are measured from the surface normal, in radians;
//! - `cos(theta_t)` comes from the complex Snell relation
//!   `sin(theta_t) = sin(theta_i) / n_M`, taking the square-root branch with
//!   non-negative imaginary part so the transmitted wave decays inside an
//!   absorbing medium;
//! - the p-polarized reflectance is
//!   `|(n_M cos(theta_i) - n1 cos(theta_t)) / (n_M cos(theta_i) + n1 cos(theta_t))|^2`.
//!   Some sources print the numerator with opposite sign; the squared
//!   magnitude is the same either way.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{ensure_finite, ensure_in_range, Error};
use crate::materials::MaterialSpec;
use crate::Result;

/// Refractive index of the ambient medium (air).
pub const AIR_INDEX: f64 = 1.0;

/// Refractive index of water at 905 nm, used for wet-surface mixing.
pub const WATER_INDEX: ComplexIndex = ComplexIndex { n: 1.33, k: 0.0 };

/// Tolerated floating-point spill outside `[0, 1]` before a reflectance is
/// treated as a formula bug rather than rounding noise.
pub const REFLECTANCE_SPILL: f64 = 1e-9;

/// Complex refractive index `n + ik` at a fixed wavelength.
///
/// `k = 0` is a pure dielectric; metals carry a large extinction
/// coefficient `k`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ComplexIndex {
    /// Real refractive index, dimensionless, `>= 0`.
    pub n: f64,
    /// Extinction coefficient, dimensionless, `>= 0`.
    pub k: f64,
}

impl ComplexIndex {
    pub fn new(n: f64, k: f64) -> Result<Self> {
        ensure_finite("refractive index n", n)?;
        ensure_finite("extinction coefficient k", k)?;
        if n < 0.0 {
            return Err(Error::OutOfRange {
                name: "refractive index n",
                value: n,
                min: 0.0,
                max: f64::INFINITY,
            });
        }
        if k < 0.0 {
            return Err(Error::OutOfRange {
                name: "extinction coefficient k",
                value: k,
                min: 0.0,
                max: f64::INFINITY,
            });
        }
        Ok(Self { n, k })
    }

    pub fn is_dielectric(&self) -> bool {
        self.k == 0.0
    }

    pub fn as_complex(&self) -> Complex64 {
        Complex64::new(self.n, self.k)
    }
}

/// Incidence/reflection geometry for the Oren-Nayar evaluation.
///
/// `theta_i` and `theta_r` are strictly below pi/2; grazing incidence is
/// handled as a limit case by the operations that need it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IncidenceGeometry {
    theta_i: f64,
    theta_r: f64,
    delta_phi: f64,
}

impl IncidenceGeometry {
    pub fn new(theta_i: f64, theta_r: f64, delta_phi: f64) -> Result<Self> {
        ensure_finite("theta_i", theta_i)?;
        ensure_finite("theta_r", theta_r)?;
        ensure_finite("delta_phi", delta_phi)?;
        let half_pi = std::f64::consts::FRAC_PI_2;
        if !(0.0..half_pi).contains(&theta_i) {
            return Err(Error::OutOfRange {
                name: "theta_i",
                value: theta_i,
                min: 0.0,
                max: half_pi,
            });
        }
        if !(0.0..half_pi).contains(&theta_r) {
            return Err(Error::OutOfRange {
                name: "theta_r",
                value: theta_r,
                min: 0.0,
                max: half_pi,
            });
        }
        let two_pi = std::f64::consts::TAU;
        if !(0.0..two_pi).contains(&delta_phi) {
            return Err(Error::OutOfRange {
                name: "delta_phi",
                value: delta_phi,
                min: 0.0,
                max: two_pi,
            });
        }
        Ok(Self {
            theta_i,
            theta_r,
            delta_phi,
        })
    }

    pub fn theta_i(&self) -> f64 {
        self.theta_i
    }

    pub fn theta_r(&self) -> f64 {
        self.theta_r
    }

    pub fn delta_phi(&self) -> f64 {
        self.delta_phi
    }
}

/// Oren-Nayar roughness coefficients `A` and `B` for a roughness `sigma`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RoughnessCoefficients {
    /// `A = 1 - sigma^2 / (2 (sigma^2 + 0.33))`, in `(0.5, 1]`.
    pub a_coef: f64,
    /// `B = 0.45 sigma^2 / (sigma^2 + 0.09)`, in `[0, 0.45)`.
    pub b_coef: f64,
}

/// `(R_s, R_p)` reflectances for s- and p-polarized light at `theta_i`.
pub fn fresnel_polarized(index: ComplexIndex, theta_i: f64) -> Result<(f64, f64)> {
    ensure_finite("theta_i", theta_i)?;
    if index.n <= 0.0 || !index.n.is_finite() {
        return Err(Error::NonPhysicalIndex(index.n));
    }
    ensure_finite("extinction coefficient k", index.k)?;
    let half_pi = std::f64::consts::FRAC_PI_2;
    ensure_in_range("theta_i", theta_i, 0.0, half_pi)?;
    if theta_i == half_pi {
        // Analytic grazing-incidence limit; the quotient itself is 0/0 there.
        return Ok((1.0, 1.0));
    }

    let n_m = index.as_complex();
    let cos_i = Complex64::new(theta_i.cos(), 0.0);
    let sin_t = theta_i.sin() / n_m;
    let mut cos_t = (Complex64::new(1.0, 0.0) - sin_t * sin_t).sqrt();
    if cos_t.im < 0.0 {
        // Decaying-wave branch inside the absorbing medium.
        cos_t = -cos_t;
    }

    let r_s = ((cos_i - n_m * cos_t) / (cos_i + n_m * cos_t)).norm_sqr();
    let r_p = ((n_m * cos_i - cos_t) / (n_m * cos_i + cos_t)).norm_sqr();
    Ok((r_s, r_p))
}

/// Unpolarized Fresnel reflectance `(R_s + R_p) / 2`, clamped against
/// floating-point spill of at most [`REFLECTANCE_SPILL`] outside `[0, 1]`.
pub fn fresnel_unpolarized(index: ComplexIndex, theta_i: f64) -> Result<f64> {
    let (r_s, r_p) = fresnel_polarized(index, theta_i)?;
    clamp_reflectance(0.5 * (r_s + r_p))
}

fn clamp_reflectance(value: f64) -> Result<f64> {
    if value < -REFLECTANCE_SPILL || value > 1.0 + REFLECTANCE_SPILL {
        return Err(Error::ReflectanceSpill {
            value,
            tolerance: REFLECTANCE_SPILL,
        });
    }
    Ok(value.clamp(0.0, 1.0))
}

/// Oren-Nayar roughness coefficients for `sigma >= 0`.
pub fn roughness_coefficients(sigma: f64) -> Result<RoughnessCoefficients> {
    ensure_finite("sigma", sigma)?;
    if sigma < 0.0 {
        return Err(Error::OutOfRange {
            name: "sigma",
            value: sigma,
            min: 0.0,
            max: f64::INFINITY,
        });
    }
    let s2 = sigma * sigma;
    Ok(RoughnessCoefficients {
        a_coef: 1.0 - s2 / (2.0 * (s2 + 0.33)),
        b_coef: 0.45 * s2 / (s2 + 0.09),
    })
}

/// Oren-Nayar diffuse reflectance
/// `(rho/pi) (A + B max(0, cos dphi) sin(alpha) tan(beta))`
/// with `alpha = max(theta_i, theta_r)` and `beta = min(theta_i, theta_r)`.
pub fn oren_nayar(material: &MaterialSpec, geom: &IncidenceGeometry) -> Result<f64> {
    let rho = ensure_in_range("diffuse albedo rho", material.diffuse_albedo_rho, 0.0, 1.0)?;
    let coeffs = roughness_coefficients(material.roughness_sigma)?;
    let alpha = geom.theta_i.max(geom.theta_r);
    let beta = geom.theta_i.min(geom.theta_r);
    let azimuthal = geom.delta_phi.cos().max(0.0);
    Ok(rho / std::f64::consts::PI
        * (coeffs.a_coef + coeffs.b_coef * azimuthal * alpha.sin() * beta.tan()))
}

/// Effective index of a surface carrying a fractional water film:
/// `f * n_water + (1 - f) * n_dry`, component-wise.
///
/// `coverage_f = 0` returns the dry index bit for bit, so a hydrophobic
/// surface evaluates exactly as the dry computation downstream.
pub fn wet_effective_index(dry: ComplexIndex, coverage_f: f64) -> Result<ComplexIndex> {
    ensure_in_range("coverage_f", coverage_f, 0.0, 1.0)?;
    Ok(ComplexIndex {
        n: coverage_f * WATER_INDEX.n + (1.0 - coverage_f) * dry.n,
        k: coverage_f * WATER_INDEX.k + (1.0 - coverage_f) * dry.k,
    })
}

/// Diffraction-limited beam divergence `lambda / D` in radians.
pub fn beam_divergence(wavelength: f64, aperture: f64) -> Result<f64> {
    ensure_finite("wavelength", wavelength)?;
    ensure_finite("aperture", aperture)?;
    if wavelength <= 0.0 {
        return Err(Error::OutOfRange {
            name: "wavelength",
            value: wavelength,
            min: f64::MIN_POSITIVE,
            max: f64::INFINITY,
        });
    }
    if aperture <= 0.0 {
        return Err(Error::OutOfRange {
            name: "aperture",
            value: aperture,
            min: f64::MIN_POSITIVE,
            max: f64::INFINITY,
        });
    }
    Ok(wavelength / aperture)
}
