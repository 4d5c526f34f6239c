//! Optical-property database at 905 nm and the material selection objective.
//!
//! Candidate trigger materials are scored by a weighted sum of average
//! specular and average diffuse reflectance over an incidence sweep. The
//! diffuse term is evaluated in monostatic geometry (`theta_r = theta_i`,
//! emitter and receiver co-located, as for a LiDAR) with the azimuthal
//! attenuation factor `1/pi` applied to the roughness `B` term.

use serde::{Deserialize, Serialize};

use crate::error::{ensure_finite, ensure_in_range, Error};
use crate::optics::{self, ComplexIndex};
use crate::{parallel, Result};

/// Default trade-off weight between specular and diffuse reflectance.
pub const DEFAULT_LAMBDA_W: f64 = 0.2;

/// Default number of points in the incidence sweep.
pub const DEFAULT_GRID_POINTS: usize = 81;

/// Upper end of the incidence sweep (80 degrees; beyond this the sweep
/// would be dominated by the grazing asymptote).
pub fn max_score_angle() -> f64 {
    80f64.to_radians()
}

/// Named material with its optical identity at 905 nm.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "MaterialRecord", into = "MaterialRecord")]
pub struct MaterialSpec {
    pub name: String,
    pub index: ComplexIndex,
    /// Diffuse albedo, fraction of incident light scattered diffusely.
    pub diffuse_albedo_rho: f64,
    /// Oren-Nayar surface roughness.
    pub roughness_sigma: f64,
}

impl MaterialSpec {
    pub fn new(
        name: impl Into<String>,
        index: ComplexIndex,
        diffuse_albedo_rho: f64,
        roughness_sigma: f64,
    ) -> Result<Self> {
        let name = name.into();
        if name.is_empty() {
            return Err(Error::Config("material name is empty".into()));
        }
        ComplexIndex::new(index.n, index.k)?;
        ensure_in_range("diffuse_albedo_rho", diffuse_albedo_rho, 0.0, 1.0)?;
        ensure_finite("roughness_sigma", roughness_sigma)?;
        if roughness_sigma < 0.0 {
            return Err(Error::OutOfRange {
                name: "roughness_sigma",
                value: roughness_sigma,
                min: 0.0,
                max: f64::INFINITY,
            });
        }
        Ok(Self {
            name,
            index,
            diffuse_albedo_rho,
            roughness_sigma,
        })
    }
}

/// Flat on-disk form: `{name, n, k, rho, sigma}`.
#[derive(Debug, Clone, Serialize, Deserialize)]
struct MaterialRecord {
    name: String,
    n: f64,
    #[serde(default)]
    k: f64,
    rho: f64,
    sigma: f64,
}

impl TryFrom<MaterialRecord> for MaterialSpec {
    type Error = Error;

    fn try_from(rec: MaterialRecord) -> Result<Self> {
        MaterialSpec::new(
            rec.name,
            ComplexIndex::new(rec.n, rec.k)?,
            rec.rho,
            rec.sigma,
        )
    }
}

impl From<MaterialSpec> for MaterialRecord {
    fn from(spec: MaterialSpec) -> Self {
        MaterialRecord {
            name: spec.name,
            n: spec.index.n,
            k: spec.index.k,
            rho: spec.diffuse_albedo_rho,
            sigma: spec.roughness_sigma,
        }
    }
}

/// A material given either by database name or as an inline spec.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum MaterialRef {
    Name(String),
    Spec(MaterialSpec),
}

impl MaterialRef {
    pub fn resolve(&self, database: &[MaterialSpec]) -> Result<MaterialSpec> {
        match self {
            MaterialRef::Name(name) => database
                .iter()
                .find(|m| &m.name == name)
                .cloned()
                .ok_or_else(|| Error::UnknownMaterial(name.clone())),
            MaterialRef::Spec(spec) => Ok(spec.clone()),
        }
    }
}

/// Per-material score over an incidence sweep. `rank` is set by
/// [`rank_materials`] / [`assign_ranks`]; 1 is best.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MaterialScore {
    pub material_name: String,
    pub avg_specular: f64,
    pub avg_diffuse: f64,
    pub combined_score: f64,
    pub rank: Option<u32>,
}

/// Builtin candidate materials at 905 nm.
pub fn builtin_database() -> Vec<MaterialSpec> {
    let entry = |name: &str, n: f64, k: f64, rho: f64, sigma: f64| {
        MaterialSpec::new(name, ComplexIndex { n, k }, rho, sigma)
            .expect("builtin material constants are valid")
    };
    vec![
        entry("Aluminum", 1.43, 8.33, 0.10, 0.05),
        entry("Copper", 0.23, 6.09, 0.08, 0.05),
        entry("Paper", 1.50, 0.0, 0.75, 0.80),
        entry("TitaniumDioxide", 2.51, 0.0, 0.95, 0.70),
    ]
}

/// Parses a material database from a UTF-8 JSON array of
/// `{name, n, k, rho, sigma}` objects.
pub fn load_database(json: &str) -> Result<Vec<MaterialSpec>> {
    let specs: Vec<MaterialSpec> = serde_json::from_str(json)?;
    if specs.is_empty() {
        return Err(Error::EmptyDatabase);
    }
    let mut seen = std::collections::BTreeSet::new();
    for spec in &specs {
        if !seen.insert(spec.name.clone()) {
            return Err(Error::DuplicateMaterial(spec.name.clone()));
        }
        if spec.index.n <= 0.0 {
            return Err(Error::NonPhysicalIndex(spec.index.n));
        }
    }
    Ok(specs)
}

/// Uniform incidence sweep with `points` nodes from 0 to 80 degrees
/// inclusive. A single-point grid degenerates to normal incidence.
pub fn uniform_angle_grid(points: usize) -> Vec<f64> {
    if points <= 1 {
        return vec![0.0];
    }
    let max = max_score_angle();
    (0..points)
        .map(|i| (i as f64 / (points - 1) as f64) * max)
        .collect()
}

/// The default 81-point sweep, one degree per step.
pub fn default_angle_grid() -> Vec<f64> {
    (0..DEFAULT_GRID_POINTS as u32)
        .map(|d| f64::from(d).to_radians())
        .collect()
}

/// Monostatic diffuse reflectance used for scoring: `theta_r = theta_i`,
/// direct backscatter, with the azimuthal factor `1/pi` on the `B` term.
fn monostatic_diffuse(material: &MaterialSpec, theta: f64) -> Result<f64> {
    let coeffs = optics::roughness_coefficients(material.roughness_sigma)?;
    let rho = material.diffuse_albedo_rho;
    Ok(rho / std::f64::consts::PI
        * (coeffs.a_coef
            + coeffs.b_coef * std::f64::consts::FRAC_1_PI * theta.sin() * theta.tan()))
}

/// Scores one material over `angle_grid` with trade-off weight `lambda_w`.
/// The returned score has `rank` unset.
pub fn score_material(
    material: &MaterialSpec,
    lambda_w: f64,
    angle_grid: &[f64],
) -> Result<MaterialScore> {
    ensure_in_range("lambda_w", lambda_w, 0.0, 1.0)?;
    if angle_grid.is_empty() {
        return Err(Error::EmptyAngleGrid);
    }
    let max = max_score_angle();
    let mut spec_sum = 0.0;
    let mut diff_sum = 0.0;
    for &theta in angle_grid {
        ensure_in_range("angle", theta, 0.0, max)?;
        spec_sum += optics::fresnel_unpolarized(material.index, theta)?;
        diff_sum += monostatic_diffuse(material, theta)?;
    }
    let n = angle_grid.len() as f64;
    let avg_specular = spec_sum / n;
    let avg_diffuse = diff_sum / n;
    Ok(MaterialScore {
        material_name: material.name.clone(),
        avg_specular,
        avg_diffuse,
        combined_score: lambda_w * avg_specular + (1.0 - lambda_w) * avg_diffuse,
        rank: None,
    })
}

/// Sorts scores by descending combined score (ties by ascending name) and
/// writes ranks 1..N.
pub fn assign_ranks(scores: &mut Vec<MaterialScore>) {
    scores.sort_by(|a, b| {
        b.combined_score
            .total_cmp(&a.combined_score)
            .then_with(|| a.material_name.cmp(&b.material_name))
    });
    for (i, score) in scores.iter_mut().enumerate() {
        score.rank = Some(i as u32 + 1);
    }
}

/// Scores every material and ranks them by descending combined score.
pub fn rank_materials(
    specs: &[MaterialSpec],
    lambda_w: f64,
    angle_grid: &[f64],
) -> Result<Vec<MaterialScore>> {
    if specs.is_empty() {
        return Err(Error::EmptyDatabase);
    }
    let mut scores = parallel::map_indexed(specs.len(), |i| {
        score_material(&specs[i], lambda_w, angle_grid)
    })
    .into_iter()
    .collect::<Result<Vec<_>>>()?;
    assign_ranks(&mut scores);
    Ok(scores)
}
