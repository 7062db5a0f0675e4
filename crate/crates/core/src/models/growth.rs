//! Sampled verification of the growth conditions a reaction term claims.

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};

use super::{ReactionForm, ReactionTerm};

/// A term passes when no lattice point exceeds its bound by more than this.
pub const GROWTH_PASS_TOL: f64 = 1e-12;

/// Lattice of sample values for each argument of `f(t, x, u, p)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SampleSpec {
    pub t: Vec<f64>,
    pub x: Vec<f64>,
    pub u: Vec<f64>,
    pub p: Vec<f64>,
}

impl SampleSpec {
    pub fn new(t: Vec<f64>, x: Vec<f64>, u: Vec<f64>, p: Vec<f64>) -> Self {
        Self { t, x, u, p }
    }

    /// `count` evenly spaced points on `[lo, hi]`; a single point is `lo`.
    pub fn linspace(lo: f64, hi: f64, count: usize) -> Vec<f64> {
        match count {
            0 => Vec::new(),
            1 => vec![lo],
            _ => (0..count)
                .map(|i| lo + (hi - lo) * i as f64 / (count - 1) as f64)
                .collect(),
        }
    }

    fn validate(&self) -> Result<()> {
        for (name, axis) in [
            ("t", &self.t),
            ("x", &self.x),
            ("u", &self.u),
            ("p", &self.p),
        ] {
            if axis.is_empty() {
                return invalid(format!("sample axis {name} is empty"));
            }
            if axis.iter().any(|v| !v.is_finite()) {
                return invalid(format!("sample axis {name} has non-finite entries"));
            }
        }
        if self.t.iter().any(|&t| t < 0.0) {
            return invalid("sample times must be nonnegative");
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SamplePoint {
    pub t: f64,
    pub x: f64,
    pub u: f64,
    pub p: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GrowthReport {
    pub pass: bool,
    /// Largest `LHS - RHS` over the lattice and all checked inequalities.
    pub worst_violation: f64,
    pub witness: SamplePoint,
    /// Which inequality produced the worst value.
    pub check: &'static str,
    pub evaluations: usize,
}

/// Evaluates, at every lattice point, the inequality the term's form
/// claims, plus the growth envelope `|f| <= rho(t,|u|)(1 + |p|^gamma)` when
/// one is attached:
///
/// * general bound: `f u - (M1 u^2 + (|d2(t)| + M2 |p|) |u|)`
/// * linear form: `|f - (d(t, x) + M1 u + M2 p)|`
pub fn check_growth_bound(term: &ReactionTerm, spec: &SampleSpec) -> Result<GrowthReport> {
    spec.validate()?;
    let mut report = GrowthReport {
        pass: true,
        worst_violation: f64::NEG_INFINITY,
        witness: SamplePoint {
            t: spec.t[0],
            x: spec.x[0],
            u: spec.u[0],
            p: spec.p[0],
        },
        check: "",
        evaluations: 0,
    };
    let record = |v: f64, pt: SamplePoint, check: &'static str, r: &mut GrowthReport| {
        // NaN counts as a violation
        if v > r.worst_violation || v.is_nan() && !r.worst_violation.is_nan() {
            r.worst_violation = v;
            r.witness = pt;
            r.check = check;
        }
    };
    for &t in &spec.t {
        let d2 = term.d2().value(t).abs();
        for &x in &spec.x {
            for &u in &spec.u {
                for &p in &spec.p {
                    let f = term.eval(t, x, u, p);
                    let pt = SamplePoint { t, x, u, p };
                    report.evaluations += 1;
                    match term.form() {
                        ReactionForm::GeneralBound => {
                            let rhs = term.m1() * u * u + (d2 + term.m2() * p.abs()) * u.abs();
                            record(f * u - rhs, pt, "one_sided_bound", &mut report);
                        }
                        ReactionForm::LinearForm => {
                            let d = term.distributed().map_or(0.0, |d| d.eval(t, x));
                            let exact = d + term.m1() * u + term.m2() * p;
                            record((f - exact).abs(), pt, "linear_identity", &mut report);
                        }
                    }
                    if let Some(g) = term.growth() {
                        let bound = (g.rho)(t, u.abs()) * (1.0 + p.abs().powf(g.gamma_exp));
                        record(f.abs() - bound, pt, "envelope", &mut report);
                    }
                }
            }
        }
    }
    report.pass = report.worst_violation <= GROWTH_PASS_TOL;
    Ok(report)
}
