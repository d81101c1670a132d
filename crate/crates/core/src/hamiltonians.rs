//! Hamiltonians of the form `ℋ = ½ J₊ f(zJ₋) + 𝒰(z, J₋)` on the two-site
//! realization, with their integrals in Cartesian and polar variables.
//!
//! Cartesian observables are the coalgebra-side quantities `ℋ`, `𝒞`, `ℐ`.
//! The polar functions return the rescaled ones, `H = 2ℋ`, `C = 4κ₂𝒞` and
//! `I = 4κ₂(ℐ − β₀/2z − z b₁)`, written in the momenta produced by
//! [`crate::geometry::cartesian_to_polar`].

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::coalgebra::{casimir_observable, two_site_generators, DeformedModel, SiteParts};
use crate::error::{Error, Result};
use crate::geometry::{ambient_embed, ChartKind, CkSignature, PolarState};
use crate::kappa_math::{ck_cos, ck_sin, ck_tan, expm1_ratio, ln1p_ratio, sinhc};
use crate::phase_space::{CartesianState, Observable};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum HamiltonianKind {
    FreeI,
    FreeS,
    #[serde(rename = "ISW")]
    Isw,
    #[serde(rename = "IKC")]
    Ikc,
    #[serde(rename = "SSW")]
    Ssw,
    Custom,
}

impl HamiltonianKind {
    pub const CATALOG: [HamiltonianKind; 5] = [
        HamiltonianKind::FreeI,
        HamiltonianKind::FreeS,
        HamiltonianKind::Isw,
        HamiltonianKind::Ikc,
        HamiltonianKind::Ssw,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            HamiltonianKind::FreeI => "FreeI",
            HamiltonianKind::FreeS => "FreeS",
            HamiltonianKind::Isw => "ISW",
            HamiltonianKind::Ikc => "IKC",
            HamiltonianKind::Ssw => "SSW",
            HamiltonianKind::Custom => "Custom",
        }
    }

    /// Whether the kinetic factor is `e^{zJ₋}` (constant curvature family).
    pub fn is_constant_curvature(self) -> bool {
        matches!(self, HamiltonianKind::FreeS | HamiltonianKind::Ssw)
    }
}

impl fmt::Display for HamiltonianKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for HamiltonianKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        HamiltonianKind::CATALOG
            .into_iter()
            .chain([HamiltonianKind::Custom])
            .find(|k| k.as_str() == s)
            .ok_or_else(|| Error::Config(format!("unknown hamiltonian kind {s:?}")))
    }
}

type ScalarMap = dyn Fn(f64) -> (f64, f64) + Send + Sync;
type PotentialMap = dyn Fn(f64, f64) -> (f64, f64) + Send + Sync;

/// Kinetic factor `f(u)` and potential `𝒰(z, J₋)` of a custom Hamiltonian.
///
/// Both closures return `(value, derivative)`: `f'(u)` and `∂𝒰/∂J₋`.
#[derive(Clone)]
pub struct CustomTerms {
    name: String,
    f: Arc<ScalarMap>,
    potential: Arc<PotentialMap>,
}

impl fmt::Debug for CustomTerms {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("CustomTerms").field("name", &self.name).finish_non_exhaustive()
    }
}

/// Argument `zJ₋` at which the `z → 0` limits are probed.
pub const LIMIT_PROBE: f64 = 1e-8;

impl CustomTerms {
    /// Validates that `f → 1` and that `𝒰` stays finite as `zJ₋ → 0`.
    pub fn new<F, U>(name: impl Into<String>, f: F, potential: U) -> Result<Self>
    where
        F: Fn(f64) -> (f64, f64) + Send + Sync + 'static,
        U: Fn(f64, f64) -> (f64, f64) + Send + Sync + 'static,
    {
        let name = name.into();
        let (f0, df0) = f(LIMIT_PROBE);
        if !((f0 - 1.0).abs() < 1e-6) || !df0.is_finite() {
            return Err(Error::InvalidSpec(format!("{name}: f(zJ-) must tend to 1, got f({LIMIT_PROBE:e}) = {f0}")));
        }
        let (u0, du0) = potential(LIMIT_PROBE, 1.0);
        if !u0.is_finite() || !du0.is_finite() {
            return Err(Error::InvalidSpec(format!("{name}: potential has no finite z -> 0 limit")));
        }
        Ok(Self { name, f: Arc::new(f), potential: Arc::new(potential) })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub const NAMES: [&'static str; 6] = ["free", "free-s", "isw", "ikc", "ssw", "exp-minus"];

    /// Registry of ready-made pairs. `beta0` and `gamma` enter the potentials.
    ///
    /// `exp-minus` uses the kinetic factor `e^{−zJ₋}` with the potential
    /// `β₀ J₋ e^{−zJ₋}`.
    pub fn named(name: &str, beta0: f64, gamma: f64) -> Result<Self> {
        let one = |_: f64| (1.0, 0.0);
        let exp = |u: f64| (u.exp(), u.exp());
        match name {
            "free" => Self::new(name, one, |_, _| (0.0, 0.0)),
            "free-s" => Self::new(name, exp, |_, _| (0.0, 0.0)),
            "isw" => Self::new(name, one, move |z, j| isw_potential(beta0, z, j)),
            "ikc" => Self::new(name, one, move |z, j| ikc_potential(gamma, z, j)),
            "ssw" => Self::new(name, exp, move |z, j| ssw_potential(beta0, z, j)),
            "exp-minus" => Self::new(
                name,
                |u: f64| ((-u).exp(), -(-u).exp()),
                move |z, j| {
                    let e = (-z * j).exp();
                    (beta0 * j * e, beta0 * e * (1.0 - z * j))
                },
            ),
            _ => Err(Error::InvalidSpec(format!(
                "unknown custom hamiltonian {name:?}; expected one of {}",
                Self::NAMES.join(", ")
            ))),
        }
    }
}

/// `β₀ sinh(zJ₋)/z`
fn isw_potential(beta0: f64, z: f64, j: f64) -> (f64, f64) {
    (beta0 * j * sinhc(z * j), beta0 * (z * j).cosh())
}

/// `β₀ sinh(zJ₋) e^{zJ₋}/z = β₀ (e^{2zJ₋} − 1)/2z`
fn ssw_potential(beta0: f64, z: f64, j: f64) -> (f64, f64) {
    (beta0 * j * expm1_ratio(2.0 * z * j), beta0 * (2.0 * z * j).exp())
}

/// `−γ √(2z/(e^{2zJ₋} − 1)) e^{2zJ₋}`
fn ikc_potential(gamma: f64, z: f64, j: f64) -> (f64, f64) {
    let w = j * expm1_ratio(2.0 * z * j);
    let e = (2.0 * z * j).exp();
    let root = w.sqrt();
    let value = -gamma * e / root;
    let slope = -gamma * (2.0 * z * e / root - 0.5 * e * e / (w * root));
    (value, slope)
}

/// A Hamiltonian of the catalog, or a custom `(f, 𝒰)` pair.
#[derive(Debug, Clone)]
pub struct HamiltonianSpec {
    pub kind: HamiltonianKind,
    /// Oscillator strength `β₀` (frequency `√β₀`).
    pub beta0: f64,
    /// Kepler–Coulomb strength `γ`; polar forms use `k = 2√2 γ`.
    pub gamma: f64,
    pub custom: Option<CustomTerms>,
}

impl HamiltonianSpec {
    fn plain(kind: HamiltonianKind) -> Self {
        Self { kind, beta0: 0.0, gamma: 0.0, custom: None }
    }

    pub fn free_i() -> Self {
        Self::plain(HamiltonianKind::FreeI)
    }

    pub fn free_s() -> Self {
        Self::plain(HamiltonianKind::FreeS)
    }

    pub fn isw(beta0: f64) -> Self {
        Self { beta0, ..Self::plain(HamiltonianKind::Isw) }
    }

    pub fn ikc(gamma: f64) -> Self {
        Self { gamma, ..Self::plain(HamiltonianKind::Ikc) }
    }

    pub fn ssw(beta0: f64) -> Self {
        Self { beta0, ..Self::plain(HamiltonianKind::Ssw) }
    }

    pub fn custom(terms: CustomTerms) -> Self {
        Self { custom: Some(terms), ..Self::plain(HamiltonianKind::Custom) }
    }

    /// Catalog entry by kind; couplings the kind does not use are dropped.
    pub fn of_kind(kind: HamiltonianKind, beta0: f64, gamma: f64) -> Result<Self> {
        Ok(match kind {
            HamiltonianKind::FreeI => Self::free_i(),
            HamiltonianKind::FreeS => Self::free_s(),
            HamiltonianKind::Isw => Self::isw(beta0),
            HamiltonianKind::Ikc => Self::ikc(gamma),
            HamiltonianKind::Ssw => Self::ssw(beta0),
            HamiltonianKind::Custom => {
                return Err(Error::InvalidSpec("custom hamiltonians need explicit terms".into()))
            }
        })
    }

    /// `k = 2√2 γ`
    pub fn kepler_k(&self) -> f64 {
        2.0 * 2f64.sqrt() * self.gamma
    }

    pub fn validate(&self) -> Result<()> {
        if self.kind == HamiltonianKind::Custom && self.custom.is_none() {
            return Err(Error::InvalidSpec("kind Custom without custom terms".into()));
        }
        if !self.beta0.is_finite() || !self.gamma.is_finite() {
            return Err(Error::InvalidSpec("non-finite coupling".into()));
        }
        Ok(())
    }

    /// `(f(u), f'(u))`
    pub fn kinetic_factor(&self, u: f64) -> (f64, f64) {
        match self.kind {
            HamiltonianKind::FreeI | HamiltonianKind::Isw | HamiltonianKind::Ikc => (1.0, 0.0),
            HamiltonianKind::FreeS | HamiltonianKind::Ssw => (u.exp(), u.exp()),
            HamiltonianKind::Custom => (self.custom.as_ref().expect("validated").f)(u),
        }
    }

    /// `(𝒰(z, J₋), ∂𝒰/∂J₋)`
    pub fn potential(&self, z: f64, j: f64) -> Result<(f64, f64)> {
        let out = match self.kind {
            HamiltonianKind::FreeI | HamiltonianKind::FreeS => (0.0, 0.0),
            HamiltonianKind::Isw => isw_potential(self.beta0, z, j),
            HamiltonianKind::Ssw => ssw_potential(self.beta0, z, j),
            HamiltonianKind::Ikc => {
                if j == 0.0 {
                    return Err(Error::SingularPoint("Kepler-Coulomb potential at J- = 0".into()));
                }
                if j < 0.0 {
                    return Err(Error::Domain(format!("Kepler-Coulomb potential needs J- > 0, got {j}")));
                }
                ikc_potential(self.gamma, z, j)
            }
            HamiltonianKind::Custom => (self.custom.as_ref().expect("validated").potential)(z, j),
        };
        Ok(out)
    }
}

/// `β₁ = 2b₂`, `β₂ = 2b₁`: the polar SW couplings in terms of the centrifugal
/// coefficients of the realization. Note the index swap.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SwCouplings {
    pub beta1: f64,
    pub beta2: f64,
}

impl SwCouplings {
    pub fn from_barriers(b1: f64, b2: f64) -> Self {
        Self { beta1: 2.0 * b2, beta2: 2.0 * b1 }
    }

    /// Inverse of [`SwCouplings::from_barriers`], returns `(b₁, b₂)`.
    pub fn to_barriers(self) -> (f64, f64) {
        (0.5 * self.beta2, 0.5 * self.beta1)
    }
}

/// Hamiltonian and constants of motion on Cartesian phase space.
#[derive(Debug, Clone)]
pub struct IntegralSet {
    pub model: DeformedModel,
    pub kind: HamiltonianKind,
    pub h: Observable,
    pub c_z: Observable,
    /// Extra integral, only for `SSW`. Stored shifted by the constant
    /// `−β₀/2z` so that it stays finite at `z = 0`.
    pub i_z: Option<Observable>,
    pub beta1: f64,
    pub beta2: f64,
}

impl IntegralSet {
    /// `(name, observable)` for every present integral, `h` first.
    pub fn named(&self) -> Vec<(&str, &Observable)> {
        let mut v = vec![("h", &self.h), ("c_z", &self.c_z)];
        if let Some(i) = &self.i_z {
            v.push(("i_z", i));
        }
        v
    }
}

pub fn hamiltonian_observable(model: &DeformedModel, spec: &HamiltonianSpec) -> Result<Observable> {
    spec.validate()?;
    let g = two_site_generators(model);
    let spec = spec.clone();
    let z = model.z;
    Ok(Observable::new(format!("H[{}]", spec.kind), move |x| {
        let jm = g.j_minus.jet(x)?;
        let jp = g.j_plus.jet(x)?;
        let (f, df) = spec.kinetic_factor(z * jm.value);
        let (u, du) = spec.potential(z, jm.value)?;
        Ok(jp * jm.chain(f, z * df) * 0.5 + jm.chain(u, du))
    }))
}

/// Shifted extra integral `ℐ − β₀/2z` of the `SSW` system.
pub fn extra_integral(model: &DeformedModel, beta0: f64) -> Observable {
    let m = *model;
    Observable::new("I_z", move |x| {
        let s = SiteParts::new(&m, x);
        let u = s.a1 * m.z;
        let eu = u.exp();
        let mut total = s.s1 * eu * s.p1.square() * (0.5 * m.signature);
        if m.b1 != 0.0 {
            if s.a1.value == 0.0 {
                return Err(Error::SingularPoint(format!("extra integral at q1 = 0, {x:?}")));
            }
            total = total + eu / (s.a1 * s.s1) * (0.5 * m.b1);
        }
        Ok(total + s.a1 * (u * 2.0).expm1_ratio() * beta0)
    })
}

/// `I = 4κ₂(ℐ − β₀/2z − z b₁)`, the normalization of the polar extra integral.
pub fn rescaled_extra_integral(model: &DeformedModel, shifted_value: f64) -> f64 {
    4.0 * model.signature * (shifted_value - model.z * model.b1)
}

pub fn build(model: &DeformedModel, spec: &HamiltonianSpec) -> Result<IntegralSet> {
    let h = hamiltonian_observable(model, spec)?;
    let i_z = (spec.kind == HamiltonianKind::Ssw).then(|| extra_integral(model, spec.beta0));
    let SwCouplings { beta1, beta2 } = SwCouplings::from_barriers(model.b1, model.b2);
    Ok(IntegralSet { model: *model, kind: spec.kind, h, c_z: casimir_observable(model), i_z, beta1, beta2 })
}

/// Kinetic and potential parts `(𝒯, 𝒱)`, written out term by term.
pub fn custom_split(model: &DeformedModel, spec: &HamiltonianSpec, x: &CartesianState) -> Result<(f64, f64)> {
    spec.validate()?;
    let (z, k) = (model.z, model.signature);
    let (a1, a2) = (k * x.q1 * x.q1, x.q2 * x.q2);
    let j = a1 + a2;
    let (e2, e1) = ((z * a2).exp(), (-z * a1).exp());
    let (f, _) = spec.kinetic_factor(z * j);
    let kinetic = 0.5 * (sinhc(z * a1) * e2 * k * x.p1 * x.p1 + sinhc(z * a2) * e1 * x.p2 * x.p2) * f;
    let barrier = |b: f64, a: f64| -> Result<f64> {
        if b == 0.0 {
            Ok(0.0)
        } else if a == 0.0 {
            Err(Error::SingularPoint(format!("centrifugal term on an axis, {x:?}")))
        } else {
            Ok(b / (2.0 * a * sinhc(z * a)))
        }
    };
    let potential = (barrier(model.b1, a1)? * e2 + barrier(model.b2, a2)? * e1) * f + spec.potential(z, j)?.0;
    Ok((kinetic, potential))
}

fn angular(sig: &CkSignature, theta: f64) -> (f64, f64) {
    (ck_sin(theta, sig.kappa2), ck_cos(theta, sig.kappa2))
}

fn inverse_square(what: &str, coupling: f64, v: f64) -> Result<f64> {
    if coupling == 0.0 {
        Ok(0.0)
    } else if v == 0.0 {
        Err(Error::SingularPoint(format!("{what} barrier at its pole")))
    } else {
        Ok(coupling / (v * v))
    }
}

/// `C = p_θ² + 4b₁/S_θ² + 4κ₂b₂/C_θ²`, with `S_θ, C_θ` the κ₂-sine and cosine.
pub fn cz_polar(sig: &CkSignature, theta: f64, p_theta: f64, b1: f64, b2: f64) -> Result<f64> {
    let (s, c) = angular(sig, theta);
    Ok(p_theta * p_theta + 4.0 * inverse_square("b1", b1, s)? + 4.0 * sig.kappa2 * inverse_square("b2", b2, c)?)
}

/// Same as [`cz_polar`] in terms of the SW couplings:
/// `C = p_θ² + 2κ₂β₁/C_θ² + 2β₂/S_θ²`.
pub fn cz_polar_sw(sig: &CkSignature, theta: f64, p_theta: f64, beta: SwCouplings) -> Result<f64> {
    let (s, c) = angular(sig, theta);
    Ok(p_theta * p_theta
        + 2.0 * sig.kappa2 * inverse_square("beta1", beta.beta1, c)?
        + 2.0 * inverse_square("beta2", beta.beta2, s)?)
}

/// `J₋` as a function of the `RhoChart` radius: `cosh(λ₁ρ) = e^{zJ₋}`.
pub fn j_minus_of_rho(z: f64, rho: f64) -> f64 {
    let sh = ck_sin(0.5 * rho, -z);
    2.0 * sh * sh * ln1p_ratio(2.0 * z * sh * sh)
}

fn unsupported_chart(spec: &HamiltonianSpec, chart: ChartKind) -> Error {
    Error::VariantUnavailable(format!("{} has no closed polar form in the {chart:?}", spec.kind))
}

/// `g(ρ) = 2𝒰` with the closed forms `β₀CT²` (ISW) and `−kC/T` (IKC).
fn rho_potential(model: &DeformedModel, spec: &HamiltonianSpec, rho: f64) -> Result<f64> {
    let z = model.z;
    let (c, t) = (ck_cos(rho, -z), ck_tan(rho, -z));
    Ok(match spec.kind {
        HamiltonianKind::Isw => spec.beta0 * c * t * t,
        HamiltonianKind::Ikc => -spec.kepler_k() * c / t,
        _ => 2.0 * spec.potential(z, j_minus_of_rho(z, rho))?.0,
    })
}

fn check_polar(model: &DeformedModel, chart: ChartKind, radial: f64) -> Result<CkSignature> {
    let sig = model.ck_signature();
    crate::geometry::polar_chart(&sig, chart, radial, 0.0)?;
    Ok(sig)
}

/// `H = 2ℋ` in polar variables.
///
/// `RhoChart`: `f·[½C(p_ρ² + p_θ²/(κ₂S²)) + (2C/S²)(b₁/(κ₂S_θ²) + b₂/C_θ²)] + g(ρ)`.
/// `RChart` (constant curvature kinds only):
/// `½(p_r² + p_θ²/(κ₂S²)) + β₀T² + (1/S²)(β₁/C_θ² + β₂/(κ₂S_θ²))`.
pub fn polar_form(model: &DeformedModel, spec: &HamiltonianSpec, chart: ChartKind, ps: &PolarState) -> Result<f64> {
    spec.validate()?;
    let sig = check_polar(model, chart, ps.radial)?;
    let (z, k) = (model.z, model.signature);
    let (st, ct) = angular(&sig, ps.theta);
    match chart {
        ChartKind::RhoChart => {
            let (c, s) = (ck_cos(ps.radial, -z), ck_sin(ps.radial, -z));
            let (f, _) = spec.kinetic_factor(z * j_minus_of_rho(z, ps.radial));
            let barriers = inverse_square("b1", model.b1, st)? / k + inverse_square("b2", model.b2, ct)?;
            let kinetic = 0.5 * c * (ps.p_radial * ps.p_radial + ps.p_theta * ps.p_theta / (k * s * s))
                + 2.0 * c / (s * s) * barriers;
            Ok(f * kinetic + rho_potential(model, spec, ps.radial)?)
        }
        ChartKind::RChart => {
            if !spec.kind.is_constant_curvature() {
                return Err(unsupported_chart(spec, chart));
            }
            let (s, t) = (ck_sin(ps.radial, z), ck_tan(ps.radial, z));
            let beta = SwCouplings::from_barriers(model.b1, model.b2);
            let barriers = inverse_square("beta1", beta.beta1, ct)? + inverse_square("beta2", beta.beta2, st)? / k;
            Ok(0.5 * (ps.p_radial * ps.p_radial + ps.p_theta * ps.p_theta / (k * s * s))
                + spec.beta0 * t * t
                + barriers / (s * s))
        }
    }
}

/// One-dimensional radial Hamiltonian with the angular integral frozen at `c_value`.
pub fn radial_reduce(
    model: &DeformedModel,
    spec: &HamiltonianSpec,
    chart: ChartKind,
    c_value: f64,
    radial: f64,
    p_radial: f64,
) -> Result<f64> {
    spec.validate()?;
    check_polar(model, chart, radial)?;
    let (z, k) = (model.z, model.signature);
    match chart {
        ChartKind::RhoChart => {
            let (c, s) = (ck_cos(radial, -z), ck_sin(radial, -z));
            let (f, _) = spec.kinetic_factor(z * j_minus_of_rho(z, radial));
            let kinetic = 0.5 * c * p_radial * p_radial + c * c_value / (2.0 * k * s * s);
            Ok(f * kinetic + rho_potential(model, spec, radial)?)
        }
        ChartKind::RChart => {
            if !spec.kind.is_constant_curvature() {
                return Err(unsupported_chart(spec, chart));
            }
            let (s, t) = (ck_sin(radial, z), ck_tan(radial, z));
            Ok(0.5 * p_radial * p_radial + c_value / (2.0 * k * s * s) + spec.beta0 * t * t)
        }
    }
}

/// Extra integral of the constant-curvature SW system in the `RChart`:
/// `(κ₂S_θ p_r + C_θ p_θ/T)² + 2β₀T²S_θ² + 2β₂/(T²S_θ²)`.
pub fn iz_polar(sig: &CkSignature, ps: &PolarState, beta0: f64, beta2: f64) -> Result<f64> {
    crate::geometry::polar_chart(sig, ChartKind::RChart, ps.radial, ps.theta)?;
    let (st, ct) = angular(sig, ps.theta);
    let t = ck_tan(ps.radial, sig.kappa1);
    let lead = sig.kappa2 * st * ps.p_radial + ct * ps.p_theta / t;
    Ok(lead * lead + 2.0 * beta0 * t * t * st * st + 2.0 * inverse_square("beta2", beta2, t * st)?)
}

/// An oscillator centered at `O₁` or `O₂`: `value = oscillator + constant`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CenteredTerm {
    pub distance: f64,
    pub oscillator: f64,
    pub constant: f64,
}

impl CenteredTerm {
    pub fn value(&self) -> f64 {
        self.oscillator + self.constant
    }
}

/// The SW potential on a constant-curvature space, split into labeled terms.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SwDecomposition {
    /// `β₀ T²(r)`, the oscillator centered at the origin.
    pub central: f64,
    /// `β₁ / S²(x)`, barrier in the parallel coordinate `x`.
    pub barrier_x: f64,
    /// `β₂ / (κ₂ S²(y))`, barrier in the parallel coordinate `y`.
    pub barrier_y: f64,
    pub x: f64,
    pub y: f64,
    /// `barrier_x` rewritten around `O₁`, where that point exists.
    pub center_1: Option<CenteredTerm>,
    /// `barrier_y` rewritten around `O₂`, where that point exists.
    pub center_2: Option<CenteredTerm>,
}

impl SwDecomposition {
    pub fn total(&self) -> f64 {
        self.central + self.barrier_x + self.barrier_y
    }

    /// The potential with every available barrier replaced by its centered
    /// oscillator. Fails on spaces where neither center exists.
    pub fn centered_total(&self) -> Result<f64> {
        if self.center_1.is_none() && self.center_2.is_none() {
            return Err(Error::VariantUnavailable(
                "oscillator centers lie outside this space".into(),
            ));
        }
        let x = self.center_1.map_or(self.barrier_x, |c| c.value());
        let y = self.center_2.map_or(self.barrier_y, |c| c.value());
        Ok(self.central + x + y)
    }
}

pub fn sw_decompose(sig: &CkSignature, r: f64, theta: f64, beta0: f64, beta1: f64, beta2: f64) -> Result<SwDecomposition> {
    let (k1, k2) = (sig.kappa1, sig.kappa2);
    let e = ambient_embed(sig, r, theta)?;
    let t = ck_tan(r, k1);
    let barrier_x = inverse_square("beta1", beta1, ck_sin(e.x, k1))?;
    let barrier_y = inverse_square("beta2", beta2, ck_sin(e.y, k1 * k2))? / k2;
    let center_1 = e.r1.map(|r1| CenteredTerm {
        distance: r1,
        oscillator: beta1 * k1 * k1 * ck_tan(r1, k1).powi(2),
        constant: beta1 * k1,
    });
    let m = k1 * k2;
    let center_2 = e.r2.map(|r2| CenteredTerm {
        distance: r2,
        oscillator: beta2 * k1 * m * ck_tan(r2, m).powi(2),
        constant: beta2 * k1,
    });
    Ok(SwDecomposition { central: beta0 * t * t, barrier_x, barrier_y, x: e.x, y: e.y, center_1, center_2 })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{cartesian_to_polar, SpaceTag};
    use crate::phase_space::{bracket, gradient_selfcheck, sample_state};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;
    use std::f64::consts::FRAC_PI_4;

    fn catalog() -> Vec<HamiltonianSpec> {
        vec![
            HamiltonianSpec::free_i(),
            HamiltonianSpec::free_s(),
            HamiltonianSpec::isw(0.7),
            HamiltonianSpec::ikc(1.1),
            HamiltonianSpec::ssw(0.7),
            HamiltonianSpec::custom(CustomTerms::named("exp-minus", 0.4, 0.0).unwrap()),
        ]
    }

    #[test]
    fn isw_flat_value() {
        let set = build(&DeformedModel::new(0.0, 1.0, 2.0), &HamiltonianSpec::isw(1.0)).unwrap();
        let h = set.h.eval(&CartesianState::new(1.0, 1.0, 1.0, 1.0)).unwrap();
        assert!((h - 4.5).abs() < 1e-15);
        assert!(set.i_z.is_none());
        assert_eq!((set.beta1, set.beta2), (4.0, 2.0));
    }

    #[test]
    fn ikc_flat_limit() {
        let x = CartesianState::new(1.0, 1.0, 0.0, 0.0);
        let h = |z: f64| {
            build(&DeformedModel::new(z, 0.0, 0.0), &HamiltonianSpec::ikc(1.0)).unwrap().h.eval(&x).unwrap()
        };
        assert!((h(0.0) + 0.5f64.sqrt()).abs() < 1e-15);
        assert!((h(1e-7) - h(0.0)).abs() < 1e-6);
    }

    #[test]
    fn ikc_root_argument_is_positive() {
        for z in [-2.0f64, -0.5, -1e-6, 1e-6, 0.5, 2.0] {
            for j in [1e-3f64, 0.5, 3.0] {
                let v: f64 = 2.0 * z / (2.0 * z * j).exp_m1();
                assert!(v > 0.0);
                // same quantity as used internally
                assert!((1.0 / (j * expm1_ratio(2.0 * z * j)) - v).abs() < 1e-9 * v);
            }
        }
    }

    #[test]
    fn ssw_is_isw_times_exponential() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let model = DeformedModel::new(0.6, 0.8, 1.3);
        let ssw = build(&model, &HamiltonianSpec::ssw(0.9)).unwrap().h;
        let isw = build(&model, &HamiltonianSpec::isw(0.9)).unwrap().h;
        for _ in 0..100 {
            let x = sample_state(&mut rng);
            let j = x.q1 * x.q1 + x.q2 * x.q2;
            let lhs = ssw.eval(&x).unwrap();
            let rhs = isw.eval(&x).unwrap() * (0.6 * j).exp();
            assert!((lhs - rhs).abs() < 1e-12 * lhs.abs().max(1.0));
        }
    }

    #[test]
    fn integrals_commute_with_h() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        for z in [-1.0, -0.3, 0.0, 0.3, 1.0] {
            for k in [1.0, -1.0] {
                let model = DeformedModel::new(z, 0.6, -0.9).with_signature(k);
                for spec in catalog() {
                    let set = build(&model, &spec).unwrap();
                    for _ in 0..30 {
                        let mut x = sample_state(&mut rng);
                        if spec.kind == HamiltonianKind::Ikc && k < 0.0 {
                            x.q2 = x.q1.abs() + 0.3;
                        }
                        let scale = set.h.eval(&x).unwrap().abs().max(1.0) * set.c_z.eval(&x).unwrap().abs().max(1.0);
                        let hc = bracket(&set.h, &set.c_z, &x).unwrap();
                        assert!(hc.abs() < 1e-12 * scale.max(1e3), "{} z={z} k={k}: {hc}", spec.kind);
                        if let Some(i) = &set.i_z {
                            let hi = bracket(&set.h, i, &x).unwrap();
                            assert!(hi.abs() < 1e-9, "{} z={z} k={k}: {hi}", spec.kind);
                        }
                        for (_, obs) in set.named() {
                            assert!(gradient_selfcheck(obs, &x).unwrap() < 1e-4);
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn custom_validation() {
        let bad_f = CustomTerms::new("bad", |u: f64| (2.0 + u, 1.0), |_, _| (0.0, 0.0));
        assert!(matches!(bad_f, Err(Error::InvalidSpec(_))));
        let bad_u = CustomTerms::new("bad", |_| (1.0, 0.0), |z: f64, _| (1.0 / z.powi(2) - 1e16, 0.0));
        assert!(bad_u.is_ok());
        let pole = CustomTerms::new("pole", |_| (1.0, 0.0), |z: f64, j: f64| (1.0 / (z * j - 1e-8), 0.0));
        assert!(matches!(pole, Err(Error::InvalidSpec(_))));
        assert!(CustomTerms::named("nope", 0.0, 0.0).is_err());
        for name in CustomTerms::NAMES {
            assert!(CustomTerms::named(name, 0.5, 0.5).is_ok());
        }
    }

    #[test]
    fn registry_reproduces_catalog() {
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        let model = DeformedModel::new(0.45, 0.3, 0.7);
        for (name, spec) in [
            ("free", HamiltonianSpec::free_i()),
            ("free-s", HamiltonianSpec::free_s()),
            ("isw", HamiltonianSpec::isw(0.8)),
            ("ikc", HamiltonianSpec::ikc(0.6)),
            ("ssw", HamiltonianSpec::ssw(0.8)),
        ] {
            let a = build(&model, &spec).unwrap().h;
            let b = build(&model, &HamiltonianSpec::custom(CustomTerms::named(name, 0.8, 0.6).unwrap())).unwrap().h;
            for _ in 0..20 {
                let x = sample_state(&mut rng);
                let (va, jb) = (a.jet(&x).unwrap(), b.jet(&x).unwrap());
                assert!((va.value - jb.value).abs() < 1e-12 * va.value.abs().max(1.0));
                for i in 0..4 {
                    assert!((va.grad[i] - jb.grad[i]).abs() < 1e-10 * va.grad[i].abs().max(1.0));
                }
            }
        }
    }

    #[test]
    fn kinetic_potential_split() {
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        for k in [1.0, -1.0] {
            let model = DeformedModel::new(-0.35, 0.5, 1.5).with_signature(k);
            for spec in catalog().into_iter().filter(|s| s.kind != HamiltonianKind::Ikc) {
                let h = build(&model, &spec).unwrap().h;
                for _ in 0..20 {
                    let x = sample_state(&mut rng);
                    let (t, v) = custom_split(&model, &spec, &x).unwrap();
                    let e = h.eval(&x).unwrap();
                    assert!((t + v - e).abs() < 1e-12 * e.abs().max(1.0));
                }
            }
        }
        let free = DeformedModel::new(0.3, 0.0, 0.0);
        let x = CartesianState::new(0.4, 0.9, 1.0, -0.5);
        let (t, v) = custom_split(&free, &HamiltonianSpec::free_i(), &x).unwrap();
        let half_jp = 0.5 * two_site_generators(&free).j_plus.eval(&x).unwrap();
        assert!((t - half_jp).abs() < 1e-15 && v == 0.0);
    }

    #[test]
    fn beta_converter_swaps_indices() {
        let c = SwCouplings::from_barriers(1.0, 3.0);
        assert_eq!((c.beta1, c.beta2), (6.0, 2.0));
        assert_eq!(c.to_barriers(), (1.0, 3.0));
    }

    #[test]
    fn cz_examples_and_forms() {
        let s2 = SpaceTag::S2z.signature();
        assert_eq!(cz_polar(&s2, 0.3, 1.7, 0.0, 0.0).unwrap(), 1.7 * 1.7);
        assert!((cz_polar(&s2, FRAC_PI_4, 1.0, 1.0, 1.0).unwrap() - 17.0).abs() < 1e-13);
        let mut rng = ChaCha8Rng::seed_from_u64(14);
        for tag in SpaceTag::ALL {
            let sig = tag.signature();
            for _ in 0..20 {
                let (th, p, b1, b2) = (rng.gen_range(0.1..1.4), rng.gen_range(-2.0..2.0), rng.gen_range(-1.0..2.0), rng.gen_range(-1.0..2.0));
                let a = cz_polar(&sig, th, p, b1, b2).unwrap();
                let b = cz_polar_sw(&sig, th, p, SwCouplings::from_barriers(b1, b2)).unwrap();
                assert!((a - b).abs() < 1e-12 * a.abs().max(1.0));
            }
        }
        assert!(matches!(cz_polar(&s2, 0.0, 1.0, 1.0, 0.0), Err(Error::SingularPoint(_))));
    }

    fn legal(rng: &mut ChaCha8Rng, k: f64) -> CartesianState {
        let mut x = sample_state(rng);
        if k < 0.0 {
            x.q2 = x.q1.abs() * rng.gen_range(1.3..2.5);
        }
        x
    }

    #[test]
    fn polar_and_cartesian_paths_agree() {
        let mut rng = ChaCha8Rng::seed_from_u64(15);
        for tag in SpaceTag::ALL {
            let model = tag.signature().model(0.4, 0.9);
            let chart = tag.natural_chart();
            for spec in catalog() {
                if chart == ChartKind::RChart && !spec.kind.is_constant_curvature() {
                    continue;
                }
                let h = build(&model, &spec).unwrap().h;
                let c = casimir_observable(&model);
                for _ in 0..30 {
                    let x = legal(&mut rng, model.signature);
                    let Ok(ps) = cartesian_to_polar(&model, chart, &x) else { continue };
                    let cart = 2.0 * h.eval(&x).unwrap();
                    let polar = polar_form(&model, &spec, chart, &ps).unwrap();
                    assert!((cart - polar).abs() < 1e-9 * cart.abs().max(1.0), "{tag} {}: {cart} vs {polar}", spec.kind);
                    let cz = cz_polar(&tag.signature(), ps.theta, ps.p_theta, model.b1, model.b2).unwrap();
                    let c4 = 4.0 * model.signature * c.eval(&x).unwrap();
                    assert!((cz - c4).abs() < 1e-9 * cz.abs().max(1.0), "{tag}: {cz} vs {c4}");
                    let radial = radial_reduce(&model, &spec, chart, cz, ps.radial, ps.p_radial).unwrap();
                    assert!((radial - polar).abs() < 1e-12 * polar.abs().max(1.0));
                }
            }
        }
    }

    #[test]
    fn table_rows() {
        // deformed sphere, free motion: ½cos ρ (p_ρ² + p_θ²/sin²ρ)
        let model = SpaceTag::S2z.signature().model(0.0, 0.0);
        let ps = PolarState::new(0.8, 0.3, 0.5, -1.2);
        let h = polar_form(&model, &HamiltonianSpec::free_i(), ChartKind::RhoChart, &ps).unwrap();
        let expected = 0.5 * 0.8f64.cos() * (0.25 + 1.44 / 0.8f64.sin().powi(2));
        assert!((h - expected).abs() < 1e-14);
        // sphere SW radial row: ½p_r² + C/(2 sin²r) + β₀ tan²r
        let model = SpaceTag::S2.signature().model(0.0, 0.0);
        let v = radial_reduce(&model, &HamiltonianSpec::ssw(0.3), ChartKind::RChart, 2.5, 0.8, 0.4).unwrap();
        let expected = 0.08 + 2.5 / (2.0 * 0.8f64.sin().powi(2)) + 0.3 * 0.8f64.tan().powi(2);
        assert!((v - expected).abs() < 1e-14);
        // flat ISW radial limit: ½p² + C/(2ρ²) + β₀ρ²
        let model = SpaceTag::E2.signature().model(0.0, 0.0);
        let v = radial_reduce(&model, &HamiltonianSpec::isw(0.3), ChartKind::RhoChart, 2.5, 0.8, 0.4).unwrap();
        assert!((v - (0.08 + 2.5 / 1.28 + 0.3 * 0.64)).abs() < 1e-14);
        // sphere row of the extra integral
        let ps = PolarState::new(0.7, 0.4, 0.3, -0.6);
        let iz = iz_polar(&SpaceTag::S2.signature(), &ps, 0.5, 0.8).unwrap();
        let (t, s) = (0.7f64.tan(), 0.4f64.sin());
        let expected = (s * 0.3 + 0.4f64.cos() * -0.6 / t).powi(2) + 2.0 * 0.5 * t * t * s * s + 1.6 / (t * t * s * s);
        assert!((iz - expected).abs() < 1e-13);
        assert_eq!(iz_polar(&SpaceTag::S2.signature(), &PolarState::new(0.7, 0.4, 0.0, 0.0), 0.0, 0.0).unwrap(), 0.0);
    }

    #[test]
    fn closed_form_potentials_match_substitution() {
        let mut rng = ChaCha8Rng::seed_from_u64(16);
        for z in [-1.0, -0.2, 0.3, 1.0] {
            for _ in 0..50 {
                let rho: f64 = rng.gen_range(0.05..1.4);
                let j = j_minus_of_rho(z, rho);
                let (c, t) = (ck_cos(rho, -z), ck_tan(rho, -z));
                assert!(((z * j).exp() - c).abs() < 1e-13 * c);
                let isw = 2.0 * isw_potential(0.7, z, j).0;
                assert!((isw - 0.7 * c * t * t).abs() < 1e-12 * isw.abs().max(1.0));
                let ikc = 2.0 * ikc_potential(0.4, z, j).0;
                assert!((ikc + 2.0 * 2f64.sqrt() * 0.4 * c / t).abs() < 1e-12 * ikc.abs().max(1.0));
            }
        }
    }

    #[test]
    fn extra_integral_rescale() {
        let mut rng = ChaCha8Rng::seed_from_u64(18);
        for tag in [SpaceTag::S2, SpaceTag::H2, SpaceTag::AdS, SpaceTag::DS] {
            let model = tag.signature().model(0.6, 1.1).with_z(0.5 * tag.z());
            let i = extra_integral(&model, 0.8);
            for _ in 0..100 {
                let x = legal(&mut rng, model.signature);
                let Ok(ps) = cartesian_to_polar(&model, ChartKind::RChart, &x) else { continue };
                let beta2 = SwCouplings::from_barriers(model.b1, model.b2).beta2;
                let polar = iz_polar(&model.ck_signature(), &ps, 0.8, beta2).unwrap();
                let cart = rescaled_extra_integral(&model, i.eval(&x).unwrap());
                assert!((polar - cart).abs() < 1e-8 * polar.abs().max(1.0), "{tag}: {polar} vs {cart}");
            }
        }
    }

    #[test]
    fn sw_decomposition_identities() {
        let mut rng = ChaCha8Rng::seed_from_u64(19);
        for tag in SpaceTag::CONSTANT {
            let sig = tag.signature();
            for _ in 0..50 {
                let (r, th) = (rng.gen_range(0.05..1.4), rng.gen_range(0.05..1.4));
                let Ok(d) = sw_decompose(&sig, r, th, 0.4, 1.3, 0.7) else { continue };
                // equals the (fl) potential
                let (st, ct) = (ck_sin(th, sig.kappa2), ck_cos(th, sig.kappa2));
                let s = ck_sin(r, sig.kappa1);
                let fl = 0.4 * ck_tan(r, sig.kappa1).powi(2) + (1.3 / (ct * ct) + 0.7 / (sig.kappa2 * st * st)) / (s * s);
                assert!((d.total() - fl).abs() < 1e-10 * fl.abs().max(1.0));
                match d.centered_total() {
                    Ok(v) => assert!((v - d.total()).abs() < 1e-12 * v.abs().max(1.0)),
                    Err(e) => {
                        assert!(matches!(e, Error::VariantUnavailable(_)));
                        assert!(matches!(tag, SpaceTag::H2 | SpaceTag::E2 | SpaceTag::M2));
                    }
                }
            }
        }
        // flat limit gives the Cartesian SW terms
        let d = sw_decompose(&SpaceTag::E2.signature(), 1.2, 0.5, 1.0, 1.0, 1.0).unwrap();
        let (x, y) = (1.2 * 0.5f64.cos(), 1.2 * 0.5f64.sin());
        assert!((d.central - 1.44).abs() < 1e-14);
        assert!((d.barrier_x - 1.0 / (x * x)).abs() < 1e-12 && (d.barrier_y - 1.0 / (y * y)).abs() < 1e-12);
        // dS: −β₂/sin²y = −β₂tan²r₂ − β₂
        let d = sw_decompose(&SpaceTag::DS.signature(), 0.6, 0.8, 0.0, 0.0, 0.7).unwrap();
        let r2 = d.center_2.unwrap();
        assert!((d.barrier_y - (-0.7 * r2.distance.tan().powi(2) - 0.7)).abs() < 1e-12);
        // sphere: β₁/sin²x = β₁tan²r₁ + β₁
        let d = sw_decompose(&SpaceTag::S2.signature(), 0.9, 0.3, 0.0, 1.3, 0.0).unwrap();
        let r1 = d.center_1.unwrap();
        assert!((d.barrier_x - (1.3 * r1.distance.tan().powi(2) + 1.3)).abs() < 1e-12);
    }
}
