use serde::Serialize;

use crate::certificates::{check_assumption_with, BoundEvaluator, BoundForm, Certificate};
use crate::error::{invalid, Result};
use crate::params::BoundaryParams;
use crate::signal::DisturbanceSignal;
use crate::solver::Trace;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Tolerances {
    pub rel_tol: f64,
    pub abs_tol: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            rel_tol: 0.01,
            abs_tol: 1e-6,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct IssSample {
    pub t: f64,
    pub energy: f64,
    pub bound: f64,
    /// `bound (1 + rel_tol) + abs_tol - energy`
    pub margin: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct IssReport {
    pub samples: Vec<IssSample>,
    /// `max_k (E_k - allowed_k) / allowed_k`; nonpositive iff every margin is.
    pub max_relative_violation: f64,
    pub pass: bool,
    pub first_violation_time: Option<f64>,
}

#[derive(Serialize)]
struct IssSummary {
    pass: bool,
    max_relative_violation: f64,
    first_violation_time: Option<f64>,
    n_samples: usize,
}

impl IssReport {
    pub fn n_samples(&self) -> usize {
        self.samples.len()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&IssSummary {
            pass: self.pass,
            max_relative_violation: self.max_relative_violation,
            first_violation_time: self.first_violation_time,
            n_samples: self.samples.len(),
        })
        .expect("report serializes")
    }
}

/// Compares each recorded energy with the certified bound started from
/// `trace.energies[0]`. The certificate is first re-checked against the
/// scenario's boundary data and growth constants.
#[allow(clippy::too_many_arguments)]
pub fn verify_iss_trajectory(
    trace: &Trace,
    cert: &Certificate,
    bc: &BoundaryParams,
    m1: f64,
    m2: f64,
    d1: &DisturbanceSignal,
    d2: &DisturbanceSignal,
    form: BoundForm,
    tol: Tolerances,
) -> Result<IssReport> {
    if !(tol.rel_tol >= 0.0) || !(tol.abs_tol >= 0.0) {
        return invalid("tolerances must be nonnegative");
    }
    if trace.is_empty() || trace.energies.len() != trace.times.len() {
        return invalid("trace must hold matching, nonempty times and energies");
    }
    let delta = cert.options.strictness(bc.mu);
    let check = check_assumption_with(
        cert.path,
        bc,
        m1,
        m2,
        &cert.splits,
        &cert.check_eps(),
        delta,
    )
    .map_err(|e| {
        crate::error::IssError::InvalidArgument(format!(
            "certificate does not apply to this scenario: {e}"
        ))
    })?;
    if let Some(bad) = check.first_failure() {
        return invalid(format!(
            "certificate path {} fails '{}' for this scenario (slack {:e})",
            cert.path, bad.name, bad.slack
        ));
    }

    let mut eval = BoundEvaluator::new(cert, trace.energies[0], d1, d2, form)?;
    let mut samples = Vec::with_capacity(trace.len());
    let mut worst = f64::NEG_INFINITY;
    let mut first_violation_time = None;
    for (&t, &energy) in trace.times.iter().zip(&trace.energies) {
        let bound = eval.at(t)?;
        let allowed = bound * (1.0 + tol.rel_tol) + tol.abs_tol;
        let margin = allowed - energy;
        let rel = if allowed > 0.0 {
            -margin / allowed
        } else if energy > 0.0 {
            f64::INFINITY
        } else {
            0.0
        };
        worst = worst.max(rel);
        if margin < 0.0 && first_violation_time.is_none() {
            first_violation_time = Some(t);
        }
        samples.push(IssSample {
            t,
            energy,
            bound,
            margin,
        });
    }
    Ok(IssReport {
        pass: first_violation_time.is_none(),
        samples,
        max_relative_violation: worst,
        first_violation_time,
    })
}

/// Least-squares slope of `-ln E(t)` over `window`, by default the second
/// half of the trace.
pub fn measure_decay_rate(trace: &Trace, window: Option<(f64, f64)>) -> Result<f64> {
    if trace.is_empty() {
        return invalid("empty trace");
    }
    let (lo, hi) = window.unwrap_or_else(|| {
        let end = *trace.times.last().unwrap();
        (0.5 * end, end)
    });
    let pts: Vec<(f64, f64)> = trace
        .times
        .iter()
        .zip(&trace.energies)
        .filter(|(t, _)| **t >= lo && **t <= hi)
        .map(|(t, e)| (*t, *e))
        .collect();
    if pts.len() < 10 {
        return invalid(format!(
            "window [{lo}, {hi}] holds {} samples, need 10",
            pts.len()
        ));
    }
    if let Some((t, e)) = pts.iter().find(|(_, e)| !(*e > 0.0)) {
        return invalid(format!("energy {e} at t = {t} is not positive"));
    }
    let n = pts.len() as f64;
    let tm = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let ys: Vec<f64> = pts.iter().map(|p| -p.1.ln()).collect();
    let ym = ys.iter().sum::<f64>() / n;
    let (mut sxy, mut sxx) = (0.0, 0.0);
    for ((t, _), y) in pts.iter().zip(&ys) {
        sxy += (t - tm) * (y - ym);
        sxx += (t - tm) * (t - tm);
    }
    Ok(sxy / sxx)
}
