//! Curvature-labelled trigonometry in real arithmetic.
//!
//! Every formula of the deformed spaces depends on a label `κ = λ²` where
//! `λ` is real, zero, or purely imaginary. The kernels here evaluate
//! `cos(√κ x)`, `sin(√κ x)/√κ` and friends for any real `κ`, so the circular
//! (`κ > 0`), hyperbolic (`κ < 0`) and flat (`κ = 0`) cases share one code path.
//! Removable singularities are filled by truncated series inside the guard
//! band `|κ x²| < SERIES_GUARD`.

use crate::error::{Error, Result};

/// Below this magnitude of `κ x²` (or `u`) the kernels switch to series.
pub const SERIES_GUARD: f64 = 1e-4;

/// Derivative kernels suffer `eps/u²` cancellation, so they use a wider band.
const DERIVATIVE_SERIES_BAND: f64 = 0.5;

/// `cos(√κ x)`: `cos` for `κ > 0`, `cosh(√-κ x)` for `κ < 0`, `1` for `κ = 0`.
pub fn ck_cos(x: f64, kappa: f64) -> f64 {
    if (kappa * x * x).abs() < SERIES_GUARD {
        ck_cos_series(x, kappa)
    } else {
        ck_cos_closed(x, kappa)
    }
}

/// `sin(√κ x)/√κ`: `sinh(√-κ x)/√-κ` for `κ < 0`, `x` for `κ = 0`.
pub fn ck_sin(x: f64, kappa: f64) -> f64 {
    if (kappa * x * x).abs() < SERIES_GUARD {
        ck_sin_series(x, kappa)
    } else {
        ck_sin_closed(x, kappa)
    }
}

/// `ck_sin / ck_cos`.
pub fn ck_tan(x: f64, kappa: f64) -> f64 {
    ck_sin(x, kappa) / ck_cos(x, kappa)
}

fn ck_cos_series(x: f64, kappa: f64) -> f64 {
    let w = kappa * x * x;
    1.0 - w / 2.0 + w * w / 24.0 - w * w * w / 720.0
}

fn ck_cos_closed(x: f64, kappa: f64) -> f64 {
    if kappa > 0.0 {
        (kappa.sqrt() * x).cos()
    } else if kappa < 0.0 {
        ((-kappa).sqrt() * x).cosh()
    } else {
        1.0
    }
}

fn ck_sin_series(x: f64, kappa: f64) -> f64 {
    let w = kappa * x * x;
    x * (1.0 - w / 6.0 + w * w / 120.0 - w * w * w / 5040.0)
}

fn ck_sin_closed(x: f64, kappa: f64) -> f64 {
    if kappa > 0.0 {
        let s = kappa.sqrt();
        (s * x).sin() / s
    } else if kappa < 0.0 {
        let s = (-kappa).sqrt();
        (s * x).sinh() / s
    } else {
        x
    }
}

/// Inverse of [`ck_sin`] on its principal branch.
pub fn ck_arcsin(v: f64, kappa: f64) -> Result<f64> {
    let w = kappa * v * v;
    if w.abs() < SERIES_GUARD {
        return Ok(v * (1.0 + w / 6.0 + 3.0 * w * w / 40.0 + 5.0 * w * w * w / 112.0));
    }
    if kappa > 0.0 {
        let s = kappa.sqrt();
        let arg = s * v;
        if arg.abs() > 1.0 + 1e-14 {
            return Err(Error::Domain(format!(
                "ck_arcsin: |√κ v| = {} exceeds 1",
                arg.abs()
            )));
        }
        Ok(arg.clamp(-1.0, 1.0).asin() / s)
    } else {
        let s = (-kappa).sqrt();
        Ok((s * v).asinh() / s)
    }
}

/// Inverse of [`ck_tan`] on its principal branch.
pub fn ck_arctan(v: f64, kappa: f64) -> Result<f64> {
    let w = kappa * v * v;
    if w.abs() < SERIES_GUARD {
        return Ok(v * (1.0 - w / 3.0 + w * w / 5.0 - w * w * w / 7.0));
    }
    if kappa > 0.0 {
        let s = kappa.sqrt();
        Ok((s * v).atan() / s)
    } else {
        let s = (-kappa).sqrt();
        let arg = s * v;
        if arg.abs() >= 1.0 {
            return Err(Error::Domain(format!(
                "ck_arctan: |√-κ v| = {} is not below 1",
                arg.abs()
            )));
        }
        Ok(arg.atanh() / s)
    }
}

/// `sinh(u)/u`, equal to 1 at the origin.
pub fn sinhc(u: f64) -> f64 {
    if u.abs() < SERIES_GUARD {
        let u2 = u * u;
        1.0 + u2 / 6.0 + u2 * u2 / 120.0
    } else {
        u.sinh() / u
    }
}

/// Derivative of [`sinhc`].
pub fn sinhc_prime(u: f64) -> f64 {
    if u.abs() < DERIVATIVE_SERIES_BAND {
        // sum_{k>=1} 2k u^{2k-1} / (2k+1)!
        let u2 = u * u;
        let mut pow = u;
        let mut fact = 6.0;
        let mut sum = 0.0;
        for k in 1..=12 {
            let kf = k as f64;
            sum += 2.0 * kf * pow / fact;
            pow *= u2;
            fact *= (2.0 * kf + 2.0) * (2.0 * kf + 3.0);
        }
        sum
    } else {
        (u * u.cosh() - u.sinh()) / (u * u)
    }
}

/// `(eᵘ - 1)/u`, equal to 1 at the origin.
pub fn expm1_ratio(u: f64) -> f64 {
    if u.abs() < SERIES_GUARD {
        1.0 + u / 2.0 + u * u / 6.0 + u * u * u / 24.0
    } else {
        u.exp_m1() / u
    }
}

/// Derivative of [`expm1_ratio`].
pub fn expm1_ratio_prime(u: f64) -> f64 {
    if u.abs() < DERIVATIVE_SERIES_BAND {
        // sum_{k>=1} k u^{k-1} / (k+1)!
        let mut pow = 1.0;
        let mut fact = 2.0;
        let mut sum = 0.0;
        for k in 1..=24 {
            let kf = k as f64;
            sum += kf * pow / fact;
            pow *= u;
            fact *= kf + 2.0;
        }
        sum
    } else {
        (u.exp() * (u - 1.0) + 1.0) / (u * u)
    }
}

/// `ln(1 + u)/u`, equal to 1 at the origin.
pub fn ln1p_ratio(u: f64) -> f64 {
    if u.abs() < SERIES_GUARD {
        1.0 - u / 2.0 + u * u / 3.0 - u * u * u / 4.0
    } else {
        u.ln_1p() / u
    }
}

/// Radial reparametrization `r(ρ) = ∫₀^ρ dx / cosh(λ₁x)` with `z = λ₁²`.
///
/// Evaluated as `r = 2·arctan_z(tan_{-z}(ρ/2))`, which is the Gudermannian for
/// `z > 0`, its circular counterpart for `z < 0`, and the identity at `z = 0`.
/// For `z < 0` the integrand vanishes at `√-z |ρ| = π/2`, which bounds the domain.
pub fn gudermann_r(z: f64, rho: f64) -> Result<f64> {
    if !rho.is_finite() {
        return Err(Error::Domain(format!("gudermann_r: non-finite ρ = {rho}")));
    }
    if z < 0.0 && (-z).sqrt() * rho.abs() >= std::f64::consts::FRAC_PI_2 {
        return Err(Error::Domain(format!(
            "gudermann_r: √-z·|ρ| = {} must stay below π/2",
            (-z).sqrt() * rho.abs()
        )));
    }
    Ok(2.0 * ck_arctan(ck_tan(rho / 2.0, -z), z)?)
}

/// Inverse of [`gudermann_r`]: recovers `ρ` from the constant-curvature radius `r`.
pub fn gudermann_rho(z: f64, r: f64) -> Result<f64> {
    if !r.is_finite() {
        return Err(Error::Domain(format!("gudermann_rho: non-finite r = {r}")));
    }
    if z > 0.0 && z.sqrt() * r.abs() >= std::f64::consts::FRAC_PI_2 {
        return Err(Error::Domain(format!(
            "gudermann_rho: √z·|r| = {} must stay below π/2",
            z.sqrt() * r.abs()
        )));
    }
    Ok(2.0 * ck_arctan(ck_tan(r / 2.0, z), -z)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use std::f64::consts::PI;

    /// Plain power series, independent of the guarded kernels.
    fn cos_series_oracle(x: f64, kappa: f64, terms: usize) -> f64 {
        let mut sum = 0.0;
        let mut term = 1.0;
        for k in 0..terms {
            sum += term;
            let k = k as f64;
            term *= -kappa * x * x / ((2.0 * k + 1.0) * (2.0 * k + 2.0));
        }
        sum
    }

    fn sin_series_oracle(x: f64, kappa: f64, terms: usize) -> f64 {
        let mut sum = 0.0;
        let mut term = x;
        for k in 0..terms {
            sum += term;
            let k = k as f64;
            term *= -kappa * x * x / ((2.0 * k + 2.0) * (2.0 * k + 3.0));
        }
        sum
    }

    /// Composite Simpson on 1/cosh(λ₁x), written with explicit cos/cosh.
    fn gudermann_quadrature(z: f64, rho: f64) -> f64 {
        let f = |x: f64| {
            if z > 0.0 {
                1.0 / (z.sqrt() * x).cosh()
            } else if z < 0.0 {
                1.0 / ((-z).sqrt() * x).cos()
            } else {
                1.0
            }
        };
        let n = 20_000;
        let h = rho / n as f64;
        let mut s = f(0.0) + f(rho);
        for i in 1..n {
            let w = if i % 2 == 1 { 4.0 } else { 2.0 };
            s += w * f(i as f64 * h);
        }
        s * h / 3.0
    }

    #[test]
    fn ck_cos_examples() {
        assert_eq!(ck_cos(0.0, 1.0), 1.0);
        assert!((ck_cos(PI, 1.0) + 1.0).abs() < 1e-15);
        let oracle = cos_series_oracle(1.0, -1.0, 30);
        assert!((oracle - 1.5430806348).abs() < 1e-10);
        assert!((ck_cos(1.0, -1.0) - oracle).abs() < 1e-14);
    }

    #[test]
    fn ck_sin_examples() {
        assert_eq!(ck_sin(0.37, 0.0), 0.37);
        assert!((ck_sin(PI / 2.0, 1.0) - 1.0).abs() < 1e-15);
        let oracle = sin_series_oracle(1.0, -4.0, 30);
        assert!((oracle - 1.8134302039).abs() < 1e-10);
        assert!((ck_sin(1.0, -4.0) - oracle).abs() < 1e-13);
    }

    #[test]
    fn sinhc_examples() {
        assert_eq!(sinhc(0.0), 1.0);
        assert!((sinhc(1.0) - 1.0f64.sinh()).abs() < 1e-15);
        assert!((sinhc(1e-6) - (1.0 + 1e-12 / 6.0)).abs() < 1e-16);
        assert!(sinhc(1e-6) > 1.0);
    }

    #[test]
    fn gudermann_examples() {
        assert_eq!(gudermann_r(1.0, 0.0).unwrap(), 0.0);
        assert_eq!(gudermann_r(0.0, 3.7).unwrap(), 3.7);
        let r = gudermann_r(1.0, 5.0).unwrap();
        assert!((r - gudermann_quadrature(1.0, 5.0)).abs() < 1e-10);
        assert!((r - 1.5573).abs() < 1e-4);
        assert!(r < PI / 2.0);
    }

    #[test]
    fn gudermann_rejects_past_quarter_period() {
        assert!(matches!(gudermann_r(-1.0, 1.6), Err(Error::Domain(_))));
        assert!(gudermann_r(-1.0, 1.5).is_ok());
    }

    #[test]
    fn gudermann_matches_quadrature_on_random_points() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for _ in 0..100 {
            let z: f64 = rng.gen_range(-2.0..2.0);
            let max_rho = if z < 0.0 { 0.95 * PI / 2.0 / (-z).sqrt() } else { 4.0 };
            let rho = rng.gen_range(0.0..max_rho);
            let r = gudermann_r(z, rho).unwrap();
            assert!(
                (r - gudermann_quadrature(z, rho)).abs() < 1e-10,
                "z={z} rho={rho}"
            );
            let back = gudermann_rho(z, r).unwrap();
            assert!((back - rho).abs() < 1e-9 * (1.0 + rho), "z={z} rho={rho}");
        }
    }

    #[test]
    fn gudermann_derivative_is_secant() {
        for &(z, rho) in &[(1.0, 0.8), (-1.0, 1.1), (0.3, 2.0), (-0.5, 0.4), (1e-7, 1.0)] {
            let h = 1e-5;
            let fd = (gudermann_r(z, rho + h).unwrap() - gudermann_r(z, rho - h).unwrap()) / (2.0 * h);
            assert!((fd - 1.0 / ck_cos(rho, -z)).abs() < 1e-6);
        }
    }

    #[test]
    fn series_and_closed_forms_agree_on_handover_band() {
        for &w in &[1e-5, 3e-5, 1e-4, 3e-4, 1e-3] {
            for &sign in &[1.0, -1.0] {
                for &x in &[0.5, 1.0, 2.0] {
                    let kappa = sign * w / (x * x);
                    assert!((ck_cos_series(x, kappa) - ck_cos_closed(x, kappa)).abs() < 1e-12);
                    assert!((ck_sin_series(x, kappa) - ck_sin_closed(x, kappa)).abs() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn derivative_kernels_match_finite_differences() {
        for &u in &[-2.0, -0.49, -0.1, -1e-3, 0.0, 1e-5, 0.2, 0.51, 3.0] {
            let h = 1e-5;
            let fd = (sinhc(u + h) - sinhc(u - h)) / (2.0 * h);
            assert!((fd - sinhc_prime(u)).abs() < 1e-8, "sinhc' at {u}");
            let fd = (expm1_ratio(u + h) - expm1_ratio(u - h)) / (2.0 * h);
            assert!((fd - expm1_ratio_prime(u)).abs() < 1e-8, "expm1_ratio' at {u}");
        }
    }

    #[test]
    fn inverse_kernels_roundtrip() {
        for &kappa in &[-2.0, -1.0, 0.0, 1e-9, 0.5, 1.0] {
            for &x in &[-0.9, 0.1, 0.7] {
                let s = ck_sin(x, kappa);
                assert!((ck_arcsin(s, kappa).unwrap() - x).abs() < 1e-13);
                let t = ck_tan(x, kappa);
                assert!((ck_arctan(t, kappa).unwrap() - x).abs() < 1e-13);
            }
        }
        assert!(ck_arcsin(1.5, 1.0).is_err());
    }

    proptest! {
        #[test]
        fn pythagorean_identity(x in -5.0f64..5.0, kappa in -4.0f64..4.0) {
            let c = ck_cos(x, kappa);
            let s = ck_sin(x, kappa);
            let residual = c * c + kappa * s * s - 1.0;
            // cosh/sinh grow like e^{10}; compare relative to the largest term.
            let scale = (c * c).max(1.0);
            prop_assert!(residual.abs() / scale < 1e-12);
        }

        #[test]
        fn sinhc_is_at_least_one(u in -30.0f64..30.0) {
            prop_assert!(sinhc(u) >= 1.0);
        }
    }
}
