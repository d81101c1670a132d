//! Canonical phase space of two degrees of freedom.
//!
//! Observables carry their exact gradient through forward-mode propagation
//! ([`Jet`]), so the Poisson bracket is exact to rounding. Finite differences
//! appear only in [`gradient_selfcheck`], which audits that contract.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::sync::Arc;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::kappa_math;

/// A point `(q₁, q₂, p₁, p₂)` of the two-particle phase space.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CartesianState {
    pub q1: f64,
    pub q2: f64,
    pub p1: f64,
    pub p2: f64,
}

impl CartesianState {
    pub const FIELDS: [&'static str; 4] = ["q1", "q2", "p1", "p2"];

    pub fn new(q1: f64, q2: f64, p1: f64, p2: f64) -> Self {
        Self { q1, q2, p1, p2 }
    }

    pub fn to_array(self) -> [f64; 4] {
        [self.q1, self.q2, self.p1, self.p2]
    }

    pub fn from_array(a: [f64; 4]) -> Self {
        Self::new(a[0], a[1], a[2], a[3])
    }

    pub fn is_finite(&self) -> bool {
        self.to_array().iter().all(|v| v.is_finite())
    }
}

/// A value together with its gradient in `(q₁, q₂, p₁, p₂)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Jet {
    pub value: f64,
    pub grad: [f64; 4],
}

impl Jet {
    pub fn constant(value: f64) -> Self {
        Self { value, grad: [0.0; 4] }
    }

    /// The `index`-th canonical coordinate as an independent variable.
    pub fn variable(value: f64, index: usize) -> Self {
        let mut grad = [0.0; 4];
        grad[index] = 1.0;
        Self { value, grad }
    }

    /// Seeds the four canonical coordinates of `x`.
    pub fn seed(x: &CartesianState) -> [Jet; 4] {
        let a = x.to_array();
        [
            Jet::variable(a[0], 0),
            Jet::variable(a[1], 1),
            Jet::variable(a[2], 2),
            Jet::variable(a[3], 3),
        ]
    }

    /// Chain rule: applies a scalar map with value `f` and slope `df` at `self.value`.
    pub fn chain(self, f: f64, df: f64) -> Self {
        Self {
            value: f,
            grad: self.grad.map(|g| df * g),
        }
    }

    pub fn scale(self, s: f64) -> Self {
        Self {
            value: self.value * s,
            grad: self.grad.map(|g| g * s),
        }
    }

    pub fn exp(self) -> Self {
        let e = self.value.exp();
        self.chain(e, e)
    }

    pub fn sinh(self) -> Self {
        self.chain(self.value.sinh(), self.value.cosh())
    }

    pub fn cosh(self) -> Self {
        self.chain(self.value.cosh(), self.value.sinh())
    }

    pub fn sqrt(self) -> Self {
        let s = self.value.sqrt();
        self.chain(s, 0.5 / s)
    }

    pub fn recip(self) -> Self {
        let v = self.value;
        self.chain(1.0 / v, -1.0 / (v * v))
    }

    pub fn square(self) -> Self {
        self * self
    }

    pub fn sinhc(self) -> Self {
        self.chain(kappa_math::sinhc(self.value), kappa_math::sinhc_prime(self.value))
    }

    pub fn expm1_ratio(self) -> Self {
        self.chain(
            kappa_math::expm1_ratio(self.value),
            kappa_math::expm1_ratio_prime(self.value),
        )
    }
}

impl Add for Jet {
    type Output = Jet;
    fn add(self, o: Jet) -> Jet {
        Jet {
            value: self.value + o.value,
            grad: std::array::from_fn(|i| self.grad[i] + o.grad[i]),
        }
    }
}

impl Sub for Jet {
    type Output = Jet;
    fn sub(self, o: Jet) -> Jet {
        Jet {
            value: self.value - o.value,
            grad: std::array::from_fn(|i| self.grad[i] - o.grad[i]),
        }
    }
}

impl Mul for Jet {
    type Output = Jet;
    fn mul(self, o: Jet) -> Jet {
        Jet {
            value: self.value * o.value,
            grad: std::array::from_fn(|i| self.grad[i] * o.value + self.value * o.grad[i]),
        }
    }
}

impl Div for Jet {
    type Output = Jet;
    fn div(self, o: Jet) -> Jet {
        let inv = 1.0 / o.value;
        Jet {
            value: self.value * inv,
            grad: std::array::from_fn(|i| (self.grad[i] - self.value * inv * o.grad[i]) * inv),
        }
    }
}

impl Neg for Jet {
    type Output = Jet;
    fn neg(self) -> Jet {
        self.scale(-1.0)
    }
}

impl Add<f64> for Jet {
    type Output = Jet;
    fn add(self, c: f64) -> Jet {
        Jet { value: self.value + c, grad: self.grad }
    }
}

impl Mul<f64> for Jet {
    type Output = Jet;
    fn mul(self, c: f64) -> Jet {
        self.scale(c)
    }
}

type EvalFn = dyn Fn(&CartesianState) -> Result<Jet> + Send + Sync;

/// A smooth phase-space function with an exact gradient.
///
/// Cloning is cheap; the underlying closure is shared.
#[derive(Clone)]
pub struct Observable {
    name: Arc<str>,
    f: Arc<EvalFn>,
}

impl fmt::Debug for Observable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Observable({})", self.name)
    }
}

impl Observable {
    pub fn new<F>(name: impl Into<String>, f: F) -> Self
    where
        F: Fn(&CartesianState) -> Result<Jet> + Send + Sync + 'static,
    {
        let name: String = name.into();
        Self { name: name.into(), f: Arc::new(f) }
    }

    pub fn constant(c: f64) -> Self {
        Self::new(format!("{c}"), move |_| Ok(Jet::constant(c)))
    }

    /// One of the canonical coordinates: 0 → q₁, 1 → q₂, 2 → p₁, 3 → p₂.
    pub fn coordinate(index: usize) -> Self {
        assert!(index < 4, "canonical coordinate index out of range");
        Self::new(CartesianState::FIELDS[index], move |x| {
            Ok(Jet::variable(x.to_array()[index], index))
        })
    }

    pub fn q1() -> Self {
        Self::coordinate(0)
    }
    pub fn q2() -> Self {
        Self::coordinate(1)
    }
    pub fn p1() -> Self {
        Self::coordinate(2)
    }
    pub fn p2() -> Self {
        Self::coordinate(3)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn renamed(&self, name: impl Into<String>) -> Self {
        let name: String = name.into();
        Self { name: name.into(), f: self.f.clone() }
    }

    pub fn jet(&self, x: &CartesianState) -> Result<Jet> {
        (self.f)(x)
    }

    pub fn eval(&self, x: &CartesianState) -> Result<f64> {
        self.jet(x).map(|j| j.value)
    }

    pub fn grad(&self, x: &CartesianState) -> Result<[f64; 4]> {
        self.jet(x).map(|j| j.grad)
    }

    /// Pointwise product with a scalar.
    pub fn scaled(&self, c: f64) -> Self {
        let f = self.f.clone();
        Self::new(format!("{c}*{}", self.name), move |x| Ok(f(x)?.scale(c)))
    }

    /// Composition with a smooth scalar map given by its value and slope.
    pub fn compose<F>(&self, name: impl Into<String>, map: F) -> Self
    where
        F: Fn(f64) -> (f64, f64) + Send + Sync + 'static,
    {
        let f = self.f.clone();
        Self::new(name, move |x| {
            let j = f(x)?;
            let (v, d) = map(j.value);
            Ok(j.chain(v, d))
        })
    }

    fn binary<F>(&self, other: &Self, op: &str, combine: F) -> Self
    where
        F: Fn(Jet, Jet) -> Jet + Send + Sync + 'static,
    {
        let (f, g) = (self.f.clone(), other.f.clone());
        Self::new(format!("({} {op} {})", self.name, other.name), move |x| {
            Ok(combine(f(x)?, g(x)?))
        })
    }
}

impl Add for &Observable {
    type Output = Observable;
    fn add(self, o: &Observable) -> Observable {
        self.binary(o, "+", |a, b| a + b)
    }
}

impl Sub for &Observable {
    type Output = Observable;
    fn sub(self, o: &Observable) -> Observable {
        self.binary(o, "-", |a, b| a - b)
    }
}

impl Mul for &Observable {
    type Output = Observable;
    fn mul(self, o: &Observable) -> Observable {
        self.binary(o, "*", |a, b| a * b)
    }
}

/// Canonical Poisson bracket `Σᵢ ∂f/∂qᵢ ∂g/∂pᵢ − ∂g/∂qᵢ ∂f/∂pᵢ` of two gradients.
pub fn bracket_of_gradients(df: &[f64; 4], dg: &[f64; 4]) -> f64 {
    (df[0] * dg[2] - dg[0] * df[2]) + (df[1] * dg[3] - dg[1] * df[3])
}

/// Poisson bracket `{f, g}` at `x`.
///
/// Errors propagate from the observables (poles); a non-finite gradient gives NaN.
pub fn bracket(f: &Observable, g: &Observable, x: &CartesianState) -> Result<f64> {
    Ok(bracket_of_gradients(&f.grad(x)?, &g.grad(x)?))
}

/// Step used by [`gradient_selfcheck`].
pub const SELFCHECK_STEP: f64 = 1e-6;

/// Largest deviation between the exact gradient and a central difference.
pub fn gradient_selfcheck(f: &Observable, x: &CartesianState) -> Result<f64> {
    let exact = f.grad(x)?;
    let base = x.to_array();
    let mut worst: f64 = 0.0;
    for i in 0..4 {
        let mut plus = base;
        let mut minus = base;
        plus[i] += SELFCHECK_STEP;
        minus[i] -= SELFCHECK_STEP;
        let fd = (f.eval(&CartesianState::from_array(plus))?
            - f.eval(&CartesianState::from_array(minus))?)
            / (2.0 * SELFCHECK_STEP);
        let diff = (exact[i] - fd).abs();
        if diff.is_nan() {
            return Ok(f64::NAN);
        }
        worst = worst.max(diff);
    }
    Ok(worst)
}

/// Random states following the suite-wide convention: `qᵢ ∈ ±[0.2, 1.2]`,
/// `pᵢ ∈ [-2, 2]`.
pub fn sample_state<R: Rng + ?Sized>(rng: &mut R) -> CartesianState {
    let mut q = || {
        let m: f64 = rng.gen_range(0.2..1.2);
        if rng.gen_bool(0.5) {
            m
        } else {
            -m
        }
    };
    let (q1, q2) = (q(), q());
    CartesianState::new(q1, q2, rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0))
}

/// Rejects a state with a non-finite component.
pub fn ensure_finite(x: &CartesianState) -> Result<()> {
    if x.is_finite() {
        Ok(())
    } else {
        Err(Error::Domain(format!("non-finite state {x:?}")))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn pt() -> CartesianState {
        CartesianState::new(0.7, -0.4, 1.2, 0.3)
    }

    #[test]
    fn canonical_pair() {
        let v = bracket(&Observable::q1(), &Observable::p1(), &pt()).unwrap();
        assert_eq!(v, 1.0);
        assert_eq!(bracket(&Observable::q1(), &Observable::p2(), &pt()).unwrap(), 0.0);
    }

    #[test]
    fn bracket_of_square() {
        let q1sq = &Observable::q1() * &Observable::q1();
        let x = CartesianState::new(2.0, 0.5, 0.1, 0.1);
        assert_eq!(bracket(&q1sq, &Observable::p1(), &x).unwrap(), 4.0);
    }

    #[test]
    fn selfcheck_examples() {
        let f = &Observable::q1() * &Observable::p2();
        assert!(gradient_selfcheck(&f, &pt()).unwrap() < 1e-8);
        assert_eq!(gradient_selfcheck(&Observable::constant(3.0), &pt()).unwrap(), 0.0);
    }

    #[test]
    fn composition_carries_slope() {
        let e = Observable::q1().compose("exp", |v| (v.exp(), v.exp()));
        let g = e.grad(&pt()).unwrap();
        assert!((g[0] - 0.7f64.exp()).abs() < 1e-15);
        assert!(gradient_selfcheck(&e, &pt()).unwrap() < 1e-8);
    }

    #[test]
    fn jet_division_and_functions() {
        let x = pt();
        let f = Observable::new("mix", |x: &CartesianState| {
            let [q1, q2, p1, p2] = Jet::seed(x);
            Ok((q1 * p2).sinh() / (q2.square() + 1.0).sqrt() + (p1 * 0.3).sinhc() * q2.expm1_ratio())
        });
        assert!(gradient_selfcheck(&f, &x).unwrap() < 1e-8);
    }

    #[test]
    fn sampler_respects_convention() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..1000 {
            let x = sample_state(&mut rng);
            for q in [x.q1, x.q2] {
                assert!((0.2..1.2).contains(&q.abs()));
            }
            for p in [x.p1, x.p2] {
                assert!((-2.0..2.0).contains(&p));
            }
        }
    }
}
