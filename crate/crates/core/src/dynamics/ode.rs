//! Integrators for autonomous-or-not systems `y' = f(t, y)` with `y ∈ ℝ⁴`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type State = [f64; 4];

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "method", rename_all = "snake_case", deny_unknown_fields)]
pub enum Method {
    /// Dormand–Prince 5(4) with step-size control.
    Dopri5,
    /// Fixed step implicit midpoint rule solved by fixed-point iteration.
    ImplicitMidpoint { step: f64 },
}

impl Method {
    pub fn name(&self) -> &'static str {
        match self {
            Method::Dopri5 => "dopri5",
            Method::ImplicitMidpoint { .. } => "implicit_midpoint",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FlowOptions {
    pub method: Method,
    pub rtol: f64,
    pub atol: f64,
    pub max_steps: usize,
    /// Record samples on this grid instead of at every accepted step.
    pub sample_interval: Option<f64>,
}

impl Default for FlowOptions {
    fn default() -> Self {
        Self { method: Method::Dopri5, rtol: 1e-10, atol: 1e-12, max_steps: 2_000_000, sample_interval: None }
    }
}

impl FlowOptions {
    pub fn with_tolerance(mut self, rtol: f64, atol: f64) -> Self {
        self.rtol = rtol;
        self.atol = atol;
        self
    }

    pub fn sampled(mut self, interval: f64) -> Self {
        self.sample_interval = Some(interval);
        self
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: &str| Err(Error::Config(m.to_string()));
        if !(self.rtol > 0.0) || !(self.atol > 0.0) {
            return bad("tolerances must be positive");
        }
        if self.max_steps == 0 {
            return bad("max_steps must be positive");
        }
        if let Some(dt) = self.sample_interval {
            if !(dt > 0.0) {
                return bad("sample_interval must be positive");
            }
        }
        if let Method::ImplicitMidpoint { step } = self.method {
            if !(step > 0.0) {
                return bad("implicit midpoint step must be positive");
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct StepStats {
    pub accepted: usize,
    pub rejected: usize,
    pub evaluations: usize,
}

/// What the observer wants after a recorded point.
pub enum Control {
    Continue,
    Stop,
}

// Dormand–Prince tableau
const C2: f64 = 1.0 / 5.0;
const C3: f64 = 3.0 / 10.0;
const C4: f64 = 4.0 / 5.0;
const C5: f64 = 8.0 / 9.0;
const A21: f64 = 1.0 / 5.0;
const A31: f64 = 3.0 / 40.0;
const A32: f64 = 9.0 / 40.0;
const A41: f64 = 44.0 / 45.0;
const A42: f64 = -56.0 / 15.0;
const A43: f64 = 32.0 / 9.0;
const A51: f64 = 19372.0 / 6561.0;
const A52: f64 = -25360.0 / 2187.0;
const A53: f64 = 64448.0 / 6561.0;
const A54: f64 = -212.0 / 729.0;
const A61: f64 = 9017.0 / 3168.0;
const A62: f64 = -355.0 / 33.0;
const A63: f64 = 46732.0 / 5247.0;
const A64: f64 = 49.0 / 176.0;
const A65: f64 = -5103.0 / 18656.0;
const B1: f64 = 35.0 / 384.0;
const B3: f64 = 500.0 / 1113.0;
const B4: f64 = 125.0 / 192.0;
const B5: f64 = -2187.0 / 6784.0;
const B6: f64 = 11.0 / 84.0;
// b − b̂
const E1: f64 = 71.0 / 57600.0;
const E3: f64 = -71.0 / 16695.0;
const E4: f64 = 71.0 / 1920.0;
const E5: f64 = -17253.0 / 339200.0;
const E6: f64 = 22.0 / 525.0;
const E7: f64 = -1.0 / 40.0;

fn axpy(y: &State, h: f64, terms: &[(f64, &State)]) -> State {
    std::array::from_fn(|i| y[i] + h * terms.iter().map(|(c, k)| c * k[i]).sum::<f64>())
}

fn finite(y: &State) -> bool {
    y.iter().all(|v| v.is_finite())
}

struct Rhs<'a, F> {
    f: &'a mut F,
    stats: StepStats,
}

impl<F: FnMut(f64, &State) -> Result<State>> Rhs<'_, F> {
    fn eval(&mut self, t: f64, y: &State) -> Result<State> {
        self.stats.evaluations += 1;
        let d = (self.f)(t, y)?;
        if !finite(&d) {
            return Err(Error::Domain(format!("non-finite derivative at t = {t}")));
        }
        Ok(d)
    }
}

/// One Dormand–Prince attempt; returns the new state, its derivative and the error norm.
fn dopri_step<F: FnMut(f64, &State) -> Result<State>>(
    rhs: &mut Rhs<F>,
    t: f64,
    y: &State,
    k1: &State,
    h: f64,
    rtol: f64,
    atol: f64,
) -> Result<(State, State, f64)> {
    let k2 = rhs.eval(t + C2 * h, &axpy(y, h, &[(A21, k1)]))?;
    let k3 = rhs.eval(t + C3 * h, &axpy(y, h, &[(A31, k1), (A32, &k2)]))?;
    let k4 = rhs.eval(t + C4 * h, &axpy(y, h, &[(A41, k1), (A42, &k2), (A43, &k3)]))?;
    let k5 = rhs.eval(t + C5 * h, &axpy(y, h, &[(A51, k1), (A52, &k2), (A53, &k3), (A54, &k4)]))?;
    let k6 = rhs.eval(t + h, &axpy(y, h, &[(A61, k1), (A62, &k2), (A63, &k3), (A64, &k4), (A65, &k5)]))?;
    let y_new = axpy(y, h, &[(B1, k1), (B3, &k3), (B4, &k4), (B5, &k5), (B6, &k6)]);
    let k7 = rhs.eval(t + h, &y_new)?;
    let mut sum = 0.0;
    for i in 0..4 {
        let e = h * (E1 * k1[i] + E3 * k3[i] + E4 * k4[i] + E5 * k5[i] + E6 * k6[i] + E7 * k7[i]);
        let sc = atol + rtol * y[i].abs().max(y_new[i].abs());
        sum += (e / sc).powi(2);
    }
    Ok((y_new, k7, (sum / 4.0).sqrt()))
}

/// Initial step guess from the derivative scale (Hairer, Nørsett & Wanner, II.4).
fn initial_step<F: FnMut(f64, &State) -> Result<State>>(
    rhs: &mut Rhs<F>,
    t: f64,
    y: &State,
    k1: &State,
    span: f64,
    rtol: f64,
    atol: f64,
) -> f64 {
    let norm = |v: &State| {
        let s: f64 = (0..4).map(|i| (v[i] / (atol + rtol * y[i].abs())).powi(2)).sum();
        (s / 4.0).sqrt()
    };
    let (d0, d1) = (norm(y), norm(k1));
    let h0 = if d0 < 1e-5 || d1 < 1e-5 { 1e-6 } else { 0.01 * d0 / d1 };
    let h0 = h0.min(span);
    let Ok(k2) = rhs.eval(t + h0, &axpy(y, h0, &[(1.0, k1)])) else {
        return h0 * 1e-3;
    };
    let diff: State = std::array::from_fn(|i| k2[i] - k1[i]);
    let d2 = norm(&diff) / h0;
    let h1 = if d1.max(d2) <= 1e-15 { (h0 * 1e-3).max(1e-6) } else { (0.01 / d1.max(d2)).powf(0.2) };
    (100.0 * h0).min(h1).min(span)
}

/// Integrates from `t0` to `t_end`.
///
/// `observe(t, y, recorded)` runs at `t0` and after every accepted step.
/// `recorded` is true at `t0`, at `t_end` and at the points that belong in the
/// output: every accepted step, or only the multiples of
/// `opts.sample_interval` when that is set.
pub fn integrate<F, O>(mut f: F, t0: f64, y0: State, t_end: f64, opts: &FlowOptions, mut observe: O) -> Result<StepStats>
where
    F: FnMut(f64, &State) -> Result<State>,
    O: FnMut(f64, &State, bool) -> Result<Control>,
{
    opts.validate()?;
    if !(t_end > t0) {
        return Err(Error::Config(format!("integration end {t_end} must exceed start {t0}")));
    }
    let mut rhs = Rhs { f: &mut f, stats: StepStats::default() };
    if let Control::Stop = observe(t0, &y0, true)? {
        return Ok(rhs.stats);
    }
    let span = t_end - t0;
    let mut next_sample = opts.sample_interval.map(|dt| (1usize, dt));
    let target = |next: &Option<(usize, f64)>| match next {
        Some((n, dt)) => (t0 + *n as f64 * dt).min(t_end),
        None => t_end,
    };
    let (mut t, mut y) = (t0, y0);

    match opts.method {
        Method::Dopri5 => {
            let mut k1 = rhs.eval(t, &y)?;
            let mut h = initial_step(&mut rhs, t, &y, &k1, span, opts.rtol, opts.atol);
            // no step growth right after a rejection
            let mut just_rejected = false;
            loop {
                if rhs.stats.accepted + rhs.stats.rejected >= opts.max_steps {
                    return Err(Error::StepFailure { t, reason: format!("exceeded {} steps", opts.max_steps) });
                }
                let stop_at = target(&next_sample);
                let hits = t + h >= stop_at - 1e-14 * stop_at.abs().max(1.0);
                let h_try = if hits { stop_at - t } else { h };
                if h_try < 1e-14 * t.abs().max(1.0) {
                    return Err(Error::StepFailure { t, reason: format!("step size underflow (h = {h_try:e})") });
                }
                match dopri_step(&mut rhs, t, &y, &k1, h_try, opts.rtol, opts.atol) {
                    Ok((y_new, k_new, err)) if err <= 1.0 => {
                        rhs.stats.accepted += 1;
                        t = if hits { stop_at } else { t + h_try };
                        y = y_new;
                        k1 = k_new;
                        let mut factor = if err == 0.0 { 5.0 } else { (0.9 * err.powf(-0.2)).clamp(0.2, 5.0) };
                        if just_rejected {
                            factor = factor.min(1.0);
                        }
                        just_rejected = false;
                        // keep the controller's proposal when the step was shortened to land on a sample
                        h = if hits { h.max(h_try * factor) } else { h_try * factor };
                        let at_end = t >= t_end;
                        let recorded = next_sample.is_none() || hits;
                        if recorded {
                            if let Some((n, _)) = next_sample.as_mut() {
                                *n += 1;
                            }
                        }
                        if let Control::Stop = observe(t, &y, recorded)? {
                            break;
                        }
                        if at_end {
                            break;
                        }
                    }
                    Ok((_, _, err)) => {
                        rhs.stats.rejected += 1;
                        just_rejected = true;
                        h = h_try * (0.9 * err.powf(-0.2)).clamp(0.1, 0.9);
                    }
                    Err(_) => {
                        rhs.stats.rejected += 1;
                        just_rejected = true;
                        h = h_try * 0.25;
                    }
                }
            }
        }
        Method::ImplicitMidpoint { step } => {
            while t < t_end {
                if rhs.stats.accepted >= opts.max_steps {
                    return Err(Error::StepFailure { t, reason: format!("exceeded {} steps", opts.max_steps) });
                }
                let stop_at = target(&next_sample);
                let hits = t + step >= stop_at - 1e-12 * stop_at.abs().max(1.0);
                let h = if hits { stop_at - t } else { step };
                y = midpoint_step(&mut rhs, t, &y, h)?;
                rhs.stats.accepted += 1;
                t = if hits { stop_at } else { t + h };
                let recorded = next_sample.is_none() || hits;
                if recorded {
                    if let Some((n, _)) = next_sample.as_mut() {
                        *n += 1;
                    }
                }
                if let Control::Stop = observe(t, &y, recorded)? {
                    break;
                }
            }
        }
    }
    Ok(rhs.stats)
}

fn midpoint_step<F: FnMut(f64, &State) -> Result<State>>(rhs: &mut Rhs<F>, t: f64, y: &State, h: f64) -> Result<State> {
    let mut next = axpy(y, h, &[(1.0, &rhs.eval(t, y)?)]);
    for _ in 0..200 {
        let mid: State = std::array::from_fn(|i| 0.5 * (y[i] + next[i]));
        let d = rhs.eval(t + 0.5 * h, &mid)?;
        let updated = axpy(y, h, &[(1.0, &d)]);
        let change = (0..4).map(|i| (updated[i] - next[i]).abs() / next[i].abs().max(1.0)).fold(0.0, f64::max);
        next = updated;
        if change < 1e-12 {
            return Ok(next);
        }
    }
    Err(Error::StepFailure { t, reason: "implicit midpoint iteration did not converge".into() })
}
