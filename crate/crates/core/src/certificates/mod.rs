//! Parameter assumptions of the energy estimate and synthesis of explicit
//! decay/gain constants.
//!
//! With `E(t) = ||u(t,.)||^2`, each assumption path splits the diffusion
//! budget `mu ||u_x||^2` into nonnegative weights, absorbs the boundary terms
//! through the trace inequalities and leaves
//!
//! ```text
//! dE/dt <= -c_decay E + c_gain_boundary |d1|^2 + c_gain_distributed |d2|^2
//! ```
//!
//! with `c_gain_boundary = mu / (2 eps1 b2^2)` and
//! `c_gain_distributed = 1 / (2 eps2)`.

mod bound;
mod paths;
mod synthesis;
mod wellposedness;

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};

pub use bound::{iss_bound, BoundEvaluator, BoundForm, BOUND_QUAD_REL_TOL};
pub use paths::{
    check_assumption, check_assumption_with, default_strictness, AssumptionPath, AssumptionReport,
    Slack, SUM_TOL,
};
pub use synthesis::{
    eps_grid, simplex_points, synthesize_certificate, BindingConstraint, Infeasible, Synthesis,
    SynthesisOptions,
};
pub use wellposedness::{
    check_wellposedness_params, plus_ab1_slacks, plus_ab2_slacks, SplitRange, WellPosednessReport,
    WELLPOSEDNESS_GRID,
};

/// Young's-inequality parameters handed to [`check_assumption`].
///
/// `eps0` belongs to the general-bound paths only (it weighs `M2 |p| |u|`).
/// `eps1` and `eps2`, when present, add the conditions under which the
/// boundary term and the decay rate close.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct Eps {
    pub eps0: Option<f64>,
    pub eps1: Option<f64>,
    pub eps2: Option<f64>,
}

impl Eps {
    pub fn none() -> Self {
        Self::default()
    }

    pub fn general(eps0: f64) -> Self {
        Self {
            eps0: Some(eps0),
            ..Self::default()
        }
    }

    fn validate(&self) -> Result<()> {
        for (name, v) in [
            ("eps0", self.eps0),
            ("eps1", self.eps1),
            ("eps2", self.eps2),
        ] {
            if let Some(v) = v {
                if !(v > 0.0) || !v.is_finite() {
                    return invalid(format!("{name} must be positive and finite, got {v}"));
                }
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CertificateEps {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub eps0: Option<f64>,
    pub eps1: f64,
    pub eps2: f64,
    /// Always equal to `eps0` on the general-bound paths.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub eps3: Option<f64>,
}

/// A witness that one assumption path holds, with the constants it yields.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Certificate {
    pub path: AssumptionPath,
    pub splits: Vec<f64>,
    pub eps: CertificateEps,
    pub c_decay: f64,
    pub c_gain_boundary: f64,
    pub c_gain_distributed: f64,
    /// Margin of every inequality the path requires, by name.
    pub slacks: BTreeMap<String, f64>,
    pub options: SynthesisOptions,
}

impl Certificate {
    pub fn check_eps(&self) -> Eps {
        Eps {
            eps0: self.eps.eps0,
            eps1: Some(self.eps.eps1),
            eps2: Some(self.eps.eps2),
        }
    }

    /// `(c_decay, c_gain_boundary, c_gain_distributed)` recomputed from the
    /// stored splits and epsilons.
    pub fn recompute(&self, mu: f64, b2: f64, m1: f64, m2: f64) -> (f64, f64, f64) {
        let decay = paths::decay_rate(
            self.path,
            &self.splits,
            m1,
            m2,
            self.eps.eps3.or(self.eps.eps0),
            self.eps.eps2,
        );
        (
            decay,
            synthesis::gain_boundary(mu, self.eps.eps1, b2),
            synthesis::gain_distributed(self.eps.eps2),
        )
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("certificate serializes")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let cert: Self = serde_json::from_str(s).map_err(|e| {
            crate::error::IssError::InvalidArgument(format!("certificate JSON: {e}"))
        })?;
        if cert.splits.len() != cert.path.split_len() {
            return invalid(format!(
                "path {} needs {} splits, found {}",
                cert.path,
                cert.path.split_len(),
                cert.splits.len()
            ));
        }
        Ok(cert)
    }
}
