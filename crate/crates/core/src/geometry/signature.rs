use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::coalgebra::DeformedModel;
use crate::error::{Error, Result};

/// Named spaces.
///
/// The first six tags (`S2z` .. `dSz`, plus the shared `E2`/`M2`) label the
/// deformed, non-constant curvature spaces; `S2`, `AdS`, `H2`, `dS` label the
/// constant-curvature ones. In both families the tag fixes `z` and `κ₂`.
/// Note that the deformed sphere sits at `z = −1` while the round sphere sits
/// at `z = +1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub enum SpaceTag {
    S2z,
    AdSz,
    H2z,
    DSz,
    E2,
    M2,
    S2,
    AdS,
    H2,
    DS,
}

impl SpaceTag {
    pub const ALL: [SpaceTag; 10] = [
        SpaceTag::S2z,
        SpaceTag::AdSz,
        SpaceTag::H2z,
        SpaceTag::DSz,
        SpaceTag::E2,
        SpaceTag::M2,
        SpaceTag::S2,
        SpaceTag::AdS,
        SpaceTag::H2,
        SpaceTag::DS,
    ];
    /// Spaces of the non-constant curvature family.
    pub const DEFORMED: [SpaceTag; 6] =
        [SpaceTag::S2z, SpaceTag::AdSz, SpaceTag::E2, SpaceTag::M2, SpaceTag::H2z, SpaceTag::DSz];
    /// Constant curvature spaces.
    pub const CONSTANT: [SpaceTag; 6] =
        [SpaceTag::S2, SpaceTag::AdS, SpaceTag::E2, SpaceTag::M2, SpaceTag::H2, SpaceTag::DS];

    pub fn as_str(self) -> &'static str {
        match self {
            SpaceTag::S2z => "S2z",
            SpaceTag::AdSz => "AdSz",
            SpaceTag::H2z => "H2z",
            SpaceTag::DSz => "dSz",
            SpaceTag::E2 => "E2",
            SpaceTag::M2 => "M2",
            SpaceTag::S2 => "S2",
            SpaceTag::AdS => "AdS",
            SpaceTag::H2 => "H2",
            SpaceTag::DS => "dS",
        }
    }

    /// `z` of the tagged space.
    pub fn z(self) -> f64 {
        match self {
            SpaceTag::S2z | SpaceTag::AdSz | SpaceTag::H2 | SpaceTag::DS => -1.0,
            SpaceTag::E2 | SpaceTag::M2 => 0.0,
            SpaceTag::H2z | SpaceTag::DSz | SpaceTag::S2 | SpaceTag::AdS => 1.0,
        }
    }

    /// `κ₂ = λ₂²`: `1` for Riemannian, `−1` for Lorentzian spaces.
    pub fn kappa2(self) -> f64 {
        match self {
            SpaceTag::AdSz | SpaceTag::DSz | SpaceTag::M2 | SpaceTag::AdS | SpaceTag::DS => -1.0,
            _ => 1.0,
        }
    }

    pub fn is_lorentzian(self) -> bool {
        self.kappa2() < 0.0
    }

    /// The polar chart that goes with the tag: `RhoChart` for the deformed
    /// family, `RChart` for the constant-curvature one. `E2`/`M2` use `RhoChart`,
    /// where both charts coincide anyway.
    pub fn natural_chart(self) -> ChartKind {
        match self {
            SpaceTag::S2 | SpaceTag::AdS | SpaceTag::H2 | SpaceTag::DS => ChartKind::RChart,
            _ => ChartKind::RhoChart,
        }
    }

    pub fn signature(self) -> CkSignature {
        CkSignature { kappa1: self.z(), kappa2: self.kappa2(), tag: Some(self) }
    }
}

impl fmt::Display for SpaceTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for SpaceTag {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        SpaceTag::ALL
            .into_iter()
            .find(|t| t.as_str() == s)
            .ok_or_else(|| {
                let names: Vec<_> = SpaceTag::ALL.iter().map(|t| t.as_str()).collect();
                Error::Config(format!("unknown space tag {s:?}; expected one of {}", names.join(", ")))
            })
    }
}

impl TryFrom<String> for SpaceTag {
    type Error = Error;
    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

impl From<SpaceTag> for String {
    fn from(t: SpaceTag) -> String {
        t.as_str().to_string()
    }
}

/// The two polar charts.
///
/// `RhoChart` is adapted to the non-constant metric, with `cosh(λ₁ρ) = e^{zJ₋}`.
/// `RChart` is the geodesic polar chart of the constant-curvature metric,
/// `r = ∫₀^ρ dx / cosh(λ₁x)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ChartKind {
    RhoChart,
    RChart,
}

/// Curvature and signature labels.
///
/// `kappa1` is `λ₁² = z`. In the `RChart` it is the constant curvature itself;
/// in the `RhoChart` the conformally rescaled metric has curvature `−kappa1`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CkSignature {
    pub kappa1: f64,
    pub kappa2: f64,
    pub tag: Option<SpaceTag>,
}

impl CkSignature {
    pub fn new(kappa1: f64, kappa2: f64) -> Result<Self> {
        if !kappa1.is_finite() {
            return Err(Error::Domain(format!("curvature label {kappa1} is not finite")));
        }
        if kappa2 != 1.0 && kappa2 != -1.0 {
            return Err(Error::Domain(format!("signature label must be 1 or -1, got {kappa2}")));
        }
        Ok(Self { kappa1, kappa2, tag: None })
    }

    /// Coalgebra model living on this space.
    pub fn model(&self, b1: f64, b2: f64) -> DeformedModel {
        DeformedModel::new(self.kappa1, b1, b2).with_signature(self.kappa2)
    }
}

impl From<SpaceTag> for CkSignature {
    fn from(t: SpaceTag) -> Self {
        t.signature()
    }
}

impl DeformedModel {
    pub fn ck_signature(&self) -> CkSignature {
        CkSignature { kappa1: self.z, kappa2: self.signature, tag: None }
    }
}
