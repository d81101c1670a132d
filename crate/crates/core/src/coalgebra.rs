//! The non-standard deformation of the sl(2) Poisson coalgebra.
//!
//! Brackets of the abstract generators:
//!
//! ```text
//! {J₃, J₊} = 2 J₊ cosh(z J₋)    {J₃, J₋} = −2 sinh(z J₋)/z    {J₋, J₊} = 4 J₃
//! ```
//!
//! with the primitive coproduct for `J₋`, the twisted one
//! `Δ(Jᵢ) = Jᵢ ⊗ e^{zJ₋} + e^{−zJ₋} ⊗ Jᵢ` for `J₊, J₃`, and the Casimir
//! `C = (sinh(zJ₋)/z) J₊ − J₃²`.
//!
//! # Signature of the first site
//!
//! The relativistic spaces need `λ₂ = i`. Instead of complex arithmetic the
//! first canonical pair is continued as `q₁ → i q₁, p₁ → −i p₁`, which is a
//! canonical map. In real variables this multiplies `q₁²` and `p₁²` by the
//! signature `κ₂ = −1` and leaves `q₁ p₁` unchanged. With `κ₂ = 1` every
//! formula reduces to the plain two-particle realization.

use crate::error::{Error, Result};
use crate::phase_space::{bracket_of_gradients, gradient_selfcheck, CartesianState, Jet, Observable};

/// Deformation parameter and centrifugal coefficients.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct DeformedModel {
    pub z: f64,
    pub b1: f64,
    pub b2: f64,
    /// `κ₂ = λ₂²` carried by the first site; `1` for Riemannian spaces.
    pub signature: f64,
}

impl DeformedModel {
    pub fn new(z: f64, b1: f64, b2: f64) -> Self {
        Self { z, b1, b2, signature: 1.0 }
    }

    pub fn with_signature(mut self, signature: f64) -> Self {
        self.signature = signature;
        self
    }

    pub fn with_z(mut self, z: f64) -> Self {
        self.z = z;
        self
    }
}

/// Which canonical pair a one-site realization acts on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Site {
    First,
    Second,
}

/// Realized generators `(J₋, J₊, J₃)`.
#[derive(Debug, Clone)]
pub struct GeneratorTriple {
    pub j_minus: Observable,
    pub j_plus: Observable,
    pub j_3: Observable,
}

impl GeneratorTriple {
    pub fn iter(&self) -> impl Iterator<Item = &Observable> {
        [&self.j_minus, &self.j_plus, &self.j_3].into_iter()
    }
}

fn singular(what: &str, x: &CartesianState) -> Error {
    Error::SingularPoint(format!("{what} has a pole at {x:?}"))
}

/// Centrifugal term `b/(κq² sinhc(zκq²)) = z b / sinh(z κ q²)`.
///
/// `scaled_square` is `κq²` and `shape` is `sinhc(zκq²)`.
fn centrifugal(b: f64, scaled_square: Jet, shape: Jet, what: &str, x: &CartesianState) -> Result<Jet> {
    if b == 0.0 {
        return Ok(Jet::constant(0.0));
    }
    if scaled_square.value == 0.0 {
        return Err(singular(what, x));
    }
    Ok((scaled_square * shape).recip() * b)
}

/// Single-site realization on pair `site`:
/// `J₋ = κq²`, `J₃ = sinhc(zκq²) q p`, `J₊ = κ sinhc(zκq²) p² + z b / sinh(zκq²)`.
///
/// `signature` is the `κ` of that pair; pass `1.0` for the ordinary realization.
pub fn one_site_generators(z: f64, b: f64, site: Site, signature: f64) -> GeneratorTriple {
    let (qi, pi) = match site {
        Site::First => (0, 2),
        Site::Second => (1, 3),
    };
    let parts = move |x: &CartesianState| {
        let v = Jet::seed(x);
        let (q, p) = (v[qi], v[pi]);
        let jm = q.square() * signature;
        let shape = (jm * z).sinhc();
        (q, p, jm, shape)
    };
    let j_minus = Observable::new(format!("J-[{site:?}]"), move |x| Ok(parts(x).2));
    let j_3 = Observable::new(format!("J3[{site:?}]"), move |x| {
        let (q, p, _, s) = parts(x);
        Ok(s * q * p)
    });
    let j_plus = Observable::new(format!("J+[{site:?}]"), move |x| {
        let (_, p, jm, s) = parts(x);
        let c = centrifugal(b, jm, s, "one-site J+", x)?;
        Ok(s * p.square() * signature + c)
    });
    GeneratorTriple { j_minus, j_plus, j_3 }
}

/// Composes two one-site triples through the deformed coproduct.
///
/// `left` must act on the first pair and `right` on the second.
pub fn coproduct_join(left: &GeneratorTriple, right: &GeneratorTriple, z: f64) -> GeneratorTriple {
    let (lm, rm) = (left.j_minus.clone(), right.j_minus.clone());
    let j_minus = Observable::new("ΔJ-", move |x| Ok(lm.jet(x)? + rm.jet(x)?));
    let twisted = |l: &Observable, r: &Observable, name: &str| {
        let (l, r) = (l.clone(), r.clone());
        let (lm, rm) = (left.j_minus.clone(), right.j_minus.clone());
        Observable::new(name, move |x| {
            let right_factor = (rm.jet(x)? * z).exp();
            let left_factor = (lm.jet(x)? * -z).exp();
            Ok(l.jet(x)? * right_factor + left_factor * r.jet(x)?)
        })
    };
    GeneratorTriple {
        j_plus: twisted(&left.j_plus, &right.j_plus, "ΔJ+"),
        j_3: twisted(&left.j_3, &right.j_3, "ΔJ3"),
        j_minus,
    }
}

/// Common building blocks of the explicit two-site formulas.
pub(crate) struct SiteParts {
    pub q1: Jet,
    pub q2: Jet,
    pub p1: Jet,
    pub p2: Jet,
    /// `κ₂ q₁²`
    pub a1: Jet,
    /// `q₂²`
    pub a2: Jet,
    /// `sinhc(z a₁)`, `sinhc(z a₂)`
    pub s1: Jet,
    pub s2: Jet,
}

impl SiteParts {
    pub fn new(model: &DeformedModel, x: &CartesianState) -> Self {
        let [q1, q2, p1, p2] = Jet::seed(x);
        let a1 = q1.square() * model.signature;
        let a2 = q2.square();
        let s1 = (a1 * model.z).sinhc();
        let s2 = (a2 * model.z).sinhc();
        Self { q1, q2, p1, p2, a1, a2, s1, s2 }
    }
}

/// Explicit two-particle realization, written out independently of [`coproduct_join`].
pub fn two_site_generators(model: &DeformedModel) -> GeneratorTriple {
    let m = *model;
    let j_minus = Observable::new("J-", move |x| {
        let s = SiteParts::new(&m, x);
        Ok(s.a1 + s.a2)
    });
    let j_3 = Observable::new("J3", move |x| {
        let s = SiteParts::new(&m, x);
        let e2 = (s.a2 * m.z).exp();
        let e1 = (s.a1 * -m.z).exp();
        Ok(s.s1 * s.q1 * s.p1 * e2 + s.s2 * s.q2 * s.p2 * e1)
    });
    let j_plus = Observable::new("J+", move |x| {
        let s = SiteParts::new(&m, x);
        let e2 = (s.a2 * m.z).exp();
        let e1 = (s.a1 * -m.z).exp();
        let c1 = centrifugal(m.b1, s.a1, s.s1, "J+ (b1 term)", x)?;
        let c2 = centrifugal(m.b2, s.a2, s.s2, "J+ (b2 term)", x)?;
        let first = s.s1 * s.p1.square() * m.signature + c1;
        let second = s.s2 * s.p2.square() + c2;
        Ok(first * e2 + e1 * second)
    });
    GeneratorTriple { j_minus, j_plus, j_3 }
}

/// Abstract Casimir `(sinh(zJ₋)/z) J₊ − J₃²` composed with any realization.
pub fn casimir_from_generators(triple: &GeneratorTriple, z: f64) -> Observable {
    let t = triple.clone();
    Observable::new("C(abstract)", move |x| {
        let jm = t.j_minus.jet(x)?;
        let jp = t.j_plus.jet(x)?;
        let j3 = t.j_3.jet(x)?;
        Ok(jm * (jm * z).sinhc() * jp - j3.square())
    })
}

/// The explicit two-particle Casimir.
pub fn casimir_observable(model: &DeformedModel) -> Observable {
    let m = *model;
    Observable::new("C_z", move |x| {
        let s = SiteParts::new(&m, x);
        let k = m.signature;
        let mixed = (s.a1 * -m.z).exp() * (s.a2 * m.z).exp();
        let angular = s.q1 * s.p2 - s.q2 * s.p1 * k;
        let mut total = s.s1 * s.s2 * angular.square() * mixed * k;
        if m.b1 != 0.0 {
            if s.a1.value == 0.0 {
                return Err(singular("Casimir (b1 term)", x));
            }
            let ratio = (s.a2 * s.s2) / (s.a1 * s.s1);
            total = total + (s.a2 * (2.0 * m.z)).exp() * m.b1 + ratio * mixed * m.b1;
        }
        if m.b2 != 0.0 {
            if s.a2.value == 0.0 {
                return Err(singular("Casimir (b2 term)", x));
            }
            let ratio = (s.a1 * s.s1) / (s.a2 * s.s2);
            total = total + (s.a1 * (-2.0 * m.z)).exp() * m.b2 + ratio * mixed * m.b2;
        }
        Ok(total)
    })
}

/// Residuals of the defining relations at one point.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct AlgebraResiduals {
    /// `|{J₃,J₊} − 2J₊ cosh zJ₋|`
    pub r1: f64,
    /// `|{J₃,J₋} + 2 sinh(zJ₋)/z|`
    pub r2: f64,
    /// `|{J₋,J₊} − 4J₃|`
    pub r3: f64,
    /// `maxᵢ |{C, Jᵢ}|`
    pub r4: f64,
    /// Largest gradient self-check deviation among the generators and the Casimir.
    pub r5: f64,
}

impl AlgebraResiduals {
    pub fn max_bracket(&self) -> f64 {
        self.r1.max(self.r2).max(self.r3)
    }
}

pub fn algebra_residuals(model: &DeformedModel, x: &CartesianState) -> Result<AlgebraResiduals> {
    let g = two_site_generators(model);
    let c = casimir_observable(model);
    let jm = g.j_minus.jet(x)?;
    let jp = g.j_plus.jet(x)?;
    let j3 = g.j_3.jet(x)?;
    let cz = c.jet(x)?;
    let z = model.z;
    let r1 = (bracket_of_gradients(&j3.grad, &jp.grad) - 2.0 * jp.value * (z * jm.value).cosh()).abs();
    let sinh_over_z = jm.value * crate::kappa_math::sinhc(z * jm.value);
    let r2 = (bracket_of_gradients(&j3.grad, &jm.grad) + 2.0 * sinh_over_z).abs();
    let r3 = (bracket_of_gradients(&jm.grad, &jp.grad) - 4.0 * j3.value).abs();
    let r4 = [jm, jp, j3]
        .iter()
        .map(|j| bracket_of_gradients(&cz.grad, &j.grad).abs())
        .fold(0.0, f64::max);
    let mut r5: f64 = 0.0;
    for obs in g.iter().chain(std::iter::once(&c)) {
        r5 = r5.max(gradient_selfcheck(obs, x)?);
    }
    Ok(AlgebraResiduals { r1, r2, r3, r4, r5 })
}
