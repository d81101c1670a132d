use std::collections::BTreeMap;
use std::io::Write;

use serde::{Deserialize, Serialize};

use super::ode::{FlowOptions, StepStats};
use crate::error::{Error, Result};

/// How a flow ended.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum FlowStatus {
    Completed,
    /// Stopped at the singularity standoff before reaching the end time.
    SingularityApproach { t: f64, reason: String },
    /// The solution left the region covered by the chart.
    ChartExit { t: f64, reason: String },
}

impl FlowStatus {
    pub fn is_completed(&self) -> bool {
        matches!(self, FlowStatus::Completed)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Sample {
    pub t: f64,
    pub state: [f64; 4],
    pub invariants: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Trajectory {
    /// Column names of `state`.
    pub state_fields: Vec<String>,
    pub invariant_names: Vec<String>,
    pub samples: Vec<Sample>,
    pub method: String,
    pub rtol: f64,
    pub atol: f64,
    pub stats: StepStats,
    pub status: FlowStatus,
}

impl Trajectory {
    pub(crate) fn new(state_fields: &[&str], invariant_names: Vec<String>, opts: &FlowOptions) -> Self {
        Self {
            state_fields: state_fields.iter().map(|s| s.to_string()).collect(),
            invariant_names,
            samples: Vec::new(),
            method: opts.method.name().to_string(),
            rtol: opts.rtol,
            atol: opts.atol,
            stats: StepStats::default(),
            status: FlowStatus::Completed,
        }
    }

    pub fn last(&self) -> Option<&Sample> {
        self.samples.last()
    }

    pub fn invariant_index(&self, name: &str) -> Option<usize> {
        self.invariant_names.iter().position(|n| n == name)
    }

    /// Values of one invariant along the trajectory.
    pub fn series(&self, name: &str) -> Option<Vec<f64>> {
        let i = self.invariant_index(name)?;
        Some(self.samples.iter().map(|s| s.invariants[i]).collect())
    }

    /// CSV with header `t,<state fields>,<invariant names>`, 17 significant digits.
    pub fn write_csv<W: Write>(&self, w: W) -> Result<()> {
        let mut out = csv::Writer::from_writer(w);
        let header: Vec<&str> =
            std::iter::once("t").chain(self.state_fields.iter().map(String::as_str)).chain(self.invariant_names.iter().map(String::as_str)).collect();
        out.write_record(&header)?;
        for s in &self.samples {
            let row: Vec<String> =
                std::iter::once(s.t).chain(s.state).chain(s.invariants.iter().copied()).map(format_real).collect();
            out.write_record(&row)?;
        }
        out.flush()?;
        Ok(())
    }

    pub fn to_csv_string(&self) -> Result<String> {
        let mut buf = Vec::new();
        self.write_csv(&mut buf)?;
        String::from_utf8(buf).map_err(|e| Error::Io(e.to_string()))
    }

    pub fn to_json(&self) -> Result<String> {
        serde_json::to_string_pretty(self).map_err(|e| Error::Io(e.to_string()))
    }
}

/// Scientific notation with 17 significant digits.
pub fn format_real(v: f64) -> String {
    format!("{v:.16e}")
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Drift {
    pub abs: f64,
    pub rel: f64,
}

/// Largest deviation of each invariant from its first value.
/// The relative drift divides by `max(|v₀|, 10⁻³)`.
pub fn drift_report(traj: &Trajectory) -> Result<BTreeMap<String, Drift>> {
    let first = traj.samples.first().ok_or_else(|| Error::Domain("drift of an empty trajectory".into()))?;
    let mut out = BTreeMap::new();
    for (i, name) in traj.invariant_names.iter().enumerate() {
        let v0 = first.invariants[i];
        let abs = traj.samples.iter().map(|s| (s.invariants[i] - v0).abs()).fold(0.0, f64::max);
        out.insert(name.clone(), Drift { abs, rel: abs / v0.abs().max(1e-3) });
    }
    Ok(out)
}
