//! Run configuration: a JSON file, optionally overridden by command-line flags.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::coalgebra::DeformedModel;
use crate::dynamics::{FlowOptions, Method};
use crate::error::{Error, Result};
use crate::geometry::{ChartKind, CkSignature, SpaceTag};
use crate::hamiltonians::{CustomTerms, HamiltonianKind, HamiltonianSpec};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    Csv,
    #[default]
    Json,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ModelConfig {
    pub z: Option<f64>,
    pub b1: Option<f64>,
    pub b2: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SignatureConfig {
    pub kappa1: f64,
    pub kappa2: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct HamiltonianConfig {
    /// `FreeI`, `FreeS`, `ISW`, `IKC`, `SSW` or `Custom`.
    pub kind: String,
    pub beta0: f64,
    pub gamma: f64,
    /// Registry name, required when `kind` is `Custom`.
    pub custom: Option<String>,
}

impl Default for HamiltonianConfig {
    fn default() -> Self {
        Self { kind: "SSW".into(), beta0: 1.0, gamma: 1.0, custom: None }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct GeodesicConfig {
    pub chart: Option<ChartKind>,
    /// `[radial, theta, v_radial, v_theta]`; defaults to [`GeodesicConfig::default_start`].
    pub start: Option<[f64; 4]>,
    pub s_end: f64,
}

impl Default for GeodesicConfig {
    fn default() -> Self {
        Self { chart: None, start: None, s_end: 10.0 }
    }
}

impl GeodesicConfig {
    /// A timelike start on Lorentzian spaces, a mostly angular one otherwise.
    pub fn default_start(kappa2: f64) -> [f64; 4] {
        if kappa2 < 0.0 {
            [0.7, 0.4, 1.0, 0.3]
        } else {
            [1.0, 0.3, 0.2, 1.0]
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MethodName {
    #[default]
    Dopri5,
    ImplicitMidpoint,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct IntegratorConfig {
    pub method: MethodName,
    /// Fixed step of the implicit midpoint rule.
    pub step: f64,
    pub rtol: f64,
    pub atol: f64,
    pub t_end: f64,
    pub max_steps: usize,
    pub sample_interval: Option<f64>,
}

impl Default for IntegratorConfig {
    fn default() -> Self {
        let d = FlowOptions::default();
        Self {
            method: MethodName::Dopri5,
            step: 1e-3,
            rtol: d.rtol,
            // resolves angular velocities that decay like e^{-2r} on hyperbolic charts
            atol: 1e-16,
            t_end: 20.0,
            max_steps: d.max_steps,
            sample_interval: Some(0.1),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SamplingConfig {
    pub seed: u64,
    pub n_points: usize,
    pub z_grid: Vec<f64>,
    pub b_grid: Vec<[f64; 2]>,
}

impl Default for SamplingConfig {
    fn default() -> Self {
        Self {
            seed: 20_240_601,
            n_points: 1000,
            z_grid: vec![-1.0, -0.3, 0.3, 1.0],
            b_grid: vec![[0.0, 0.0], [1.0, 2.0], [-0.5, 1.5]],
        }
    }
}

/// Pass thresholds. Residuals are measured relative to `1 + |value|`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Thresholds {
    pub algebra: f64,
    pub identity: f64,
    pub transform: f64,
    pub drift: f64,
    pub curvature: f64,
    pub geodesic: f64,
    pub first_integral: f64,
}

impl Default for Thresholds {
    fn default() -> Self {
        Self { algebra: 1e-9, identity: 1e-12, transform: 1e-8, drift: 1e-6, curvature: 1e-5, geodesic: 1e-6, first_integral: 1e-7 }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct OutputConfig {
    pub format: OutputFormat,
    pub path: Option<String>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct RunConfig {
    pub model: ModelConfig,
    pub space: Option<SpaceTag>,
    /// Explicit labels, an alternative to `space`.
    pub signature: Option<SignatureConfig>,
    pub hamiltonian: HamiltonianConfig,
    /// `[q1, q2, p1, p2]` for `simulate`.
    pub initial_state: Option<[f64; 4]>,
    pub geodesic: GeodesicConfig,
    pub integrator: IntegratorConfig,
    pub sampling: SamplingConfig,
    pub thresholds: Thresholds,
    pub output: OutputConfig,
    /// Tables printed by `tables` when none are named on the command line.
    pub tables: Vec<u8>,
}

pub const DEFAULT_Z: f64 = 0.3;
pub const DEFAULT_STATE: [f64; 4] = [0.8, 0.9, 0.4, -0.3];

impl RunConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| {
            let full = e.to_string();
            let message = full.rsplit_once(" at line ").map_or(full.as_str(), |(m, _)| m);
            Error::Config(format!("line {}, column {}: {message}", e.line(), e.column()))
        })
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
        Self::from_json(&text).map_err(|e| match e {
            Error::Config(m) => Error::Config(format!("{}: {m}", path.display())),
            other => other,
        })
    }

    /// Structural checks that do not depend on the subcommand.
    pub fn validate(&self) -> Result<()> {
        if self.space.is_some() && self.signature.is_some() {
            return Err(Error::Config("give either `space` or `signature`, not both".into()));
        }
        if let (Some(tag), Some(z)) = (self.space, self.model.z) {
            if z != tag.z() {
                return Err(Error::Config(format!("model.z = {z} contradicts space {tag} (z = {})", tag.z())));
            }
        }
        if let Some(s) = self.signature {
            CkSignature::new(s.kappa1, s.kappa2).map_err(|e| Error::Config(e.to_string()))?;
            if self.model.z.is_some_and(|z| z != s.kappa1) {
                return Err(Error::Config("model.z contradicts signature.kappa1".into()));
            }
        }
        self.flow_options()?;
        self.hamiltonian_spec()?;
        if self.sampling.n_points == 0 {
            return Err(Error::Config("sampling.n_points must be positive".into()));
        }
        if self.tables.iter().any(|t| !(1..=4).contains(t)) {
            return Err(Error::Config(format!("tables must be in 1..=4, got {:?}", self.tables)));
        }
        Ok(())
    }

    /// The `z` fixed by the configuration, if any.
    pub fn fixed_z(&self) -> Option<f64> {
        self.model.z.or(self.space.map(SpaceTag::z)).or(self.signature.map(|s| s.kappa1))
    }

    pub fn signature_or(&self, default: SpaceTag) -> Result<CkSignature> {
        if let Some(s) = self.signature {
            return CkSignature::new(s.kappa1, s.kappa2).map_err(|e| Error::Config(e.to_string()));
        }
        match (self.space, self.model.z) {
            (Some(tag), _) => Ok(tag.signature()),
            (None, Some(z)) => CkSignature::new(z, 1.0),
            (None, None) => Ok(default.signature()),
        }
    }

    /// Model for the single-system commands; barriers default to `(1, 1)`.
    pub fn model(&self) -> Result<DeformedModel> {
        let k2 = match (self.space, self.signature) {
            (Some(t), _) => t.kappa2(),
            (_, Some(s)) => s.kappa2,
            _ => 1.0,
        };
        let z = self.fixed_z().unwrap_or(DEFAULT_Z);
        Ok(DeformedModel::new(z, self.model.b1.unwrap_or(1.0), self.model.b2.unwrap_or(1.0)).with_signature(k2))
    }

    pub fn hamiltonian_spec(&self) -> Result<HamiltonianSpec> {
        let h = &self.hamiltonian;
        let kind: HamiltonianKind = h.kind.parse()?;
        match (kind, &h.custom) {
            (HamiltonianKind::Custom, Some(name)) => {
                Ok(HamiltonianSpec::custom(CustomTerms::named(name, h.beta0, h.gamma).map_err(as_config)?))
            }
            (HamiltonianKind::Custom, None) => Err(Error::Config(format!(
                "hamiltonian.custom must name one of {:?}",
                CustomTerms::NAMES
            ))),
            (_, Some(_)) => Err(Error::Config("hamiltonian.custom is only allowed with kind Custom".into())),
            (kind, None) => HamiltonianSpec::of_kind(kind, h.beta0, h.gamma).map_err(as_config),
        }
    }

    pub fn flow_options(&self) -> Result<FlowOptions> {
        let i = &self.integrator;
        let method = match i.method {
            MethodName::Dopri5 => Method::Dopri5,
            MethodName::ImplicitMidpoint => Method::ImplicitMidpoint { step: i.step },
        };
        let opts = FlowOptions { method, rtol: i.rtol, atol: i.atol, max_steps: i.max_steps, sample_interval: i.sample_interval };
        opts.validate()?;
        if !(i.t_end > 0.0) {
            return Err(Error::Config(format!("integrator.t_end must be positive, got {}", i.t_end)));
        }
        Ok(opts)
    }
}

fn as_config(e: Error) -> Error {
    match e {
        Error::Config(_) => e,
        other => Error::Config(other.to_string()),
    }
}
