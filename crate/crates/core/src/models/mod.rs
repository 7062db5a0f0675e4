//! Reaction terms `f(t, x, u, p)` with their growth descriptors, the
//! built-in example models and the boundary homogenization helpers.

mod builtin;
mod growth;
mod lifting;

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};
use crate::signal::{DistributedDisturbance, DisturbanceSignal};

pub use builtin::{
    make_generalized_gl, make_ginzburg_landau, make_transport, transport_transform,
    TransformDirection, TransportModel,
};
pub use growth::{check_growth_bound, GrowthReport, SamplePoint, SampleSpec, GROWTH_PASS_TOL};
pub use lifting::{lifting_polynomial, normalize_robin, LiftingPolynomial, NormalizedRobin};

/// Evaluation rule `(t, x, u, p) -> f`.
pub type ReactionFn = Arc<dyn Fn(f64, f64, f64, f64) -> f64 + Send + Sync>;
/// Growth envelope `rho(t, r)`, nonnegative and nondecreasing in `r`.
pub type EnvelopeFn = Arc<dyn Fn(f64, f64) -> f64 + Send + Sync>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ReactionForm {
    /// `f u <= M1 u^2 + (|d2(t)| + M2 |p|) |u|` with `M2 >= 0`.
    GeneralBound,
    /// `f = d(t, x) + M1 u + M2 p` with `|d(t, x)| <= |d2(t)|`.
    LinearForm,
}

#[derive(Clone)]
pub struct GrowthEnvelope {
    pub rho: EnvelopeFn,
    /// Exponent `gamma` in `|f| <= rho(t, |u|) (1 + |p|^gamma)`, in [1, 3).
    pub gamma_exp: f64,
}

impl fmt::Debug for GrowthEnvelope {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("GrowthEnvelope")
            .field("gamma_exp", &self.gamma_exp)
            .finish_non_exhaustive()
    }
}

#[derive(Clone)]
pub struct ReactionTerm {
    name: String,
    eval: ReactionFn,
    form: ReactionForm,
    m1: f64,
    m2: f64,
    d2: DisturbanceSignal,
    distributed: Option<DistributedDisturbance>,
    growth: Option<GrowthEnvelope>,
    uses_gradient: bool,
}

impl fmt::Debug for ReactionTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ReactionTerm")
            .field("name", &self.name)
            .field("form", &self.form)
            .field("m1", &self.m1)
            .field("m2", &self.m2)
            .field("d2", &self.d2)
            .field("distributed", &self.distributed)
            .field("growth", &self.growth)
            .finish()
    }
}

impl ReactionTerm {
    /// A term described only by the one-sided bound
    /// `f u <= m1 u^2 + (|d2(t)| + m2 |p|) |u|`. Nothing checks the claim
    /// here; see [`check_growth_bound`].
    pub fn general_bound(
        name: impl Into<String>,
        eval: ReactionFn,
        m1: f64,
        m2: f64,
        d2: DisturbanceSignal,
    ) -> Result<Self> {
        if !m1.is_finite() || !m2.is_finite() {
            return invalid("growth coefficients must be finite");
        }
        if m2 < 0.0 {
            return invalid(format!("general-bound M2 must be nonnegative, got {m2}"));
        }
        d2.validate()?;
        Ok(Self {
            name: name.into(),
            eval,
            form: ReactionForm::GeneralBound,
            m1,
            m2,
            d2,
            distributed: None,
            growth: None,
            uses_gradient: true,
        })
    }

    /// `f = d(t, x) + m1 u + m2 p`.
    pub fn linear_form(
        m1: f64,
        m2: f64,
        distributed: Option<DistributedDisturbance>,
    ) -> Result<Self> {
        if !m1.is_finite() || !m2.is_finite() {
            return invalid("growth coefficients must be finite");
        }
        let d2 = match &distributed {
            Some(d) => {
                d.signal.validate()?;
                d.signal.clone()
            }
            None => DisturbanceSignal::Zero,
        };
        let dist = distributed.clone();
        let eval: ReactionFn = Arc::new(move |t, x, u, p| {
            let d = dist.as_ref().map_or(0.0, |d| d.eval(t, x));
            d + m1 * u + m2 * p
        });
        let rho_m = m1.abs().max(m2.abs());
        let sig = d2.clone();
        let growth = GrowthEnvelope {
            rho: Arc::new(move |t, r| sig.value(t).abs() + rho_m * (1.0 + r)),
            gamma_exp: 1.0,
        };
        Ok(Self {
            name: "linear_form".into(),
            eval,
            form: ReactionForm::LinearForm,
            m1,
            m2,
            d2,
            distributed,
            growth: Some(growth),
            uses_gradient: m2 != 0.0,
        })
    }

    /// `f = 0`.
    pub fn zero() -> Self {
        Self::linear_form(0.0, 0.0, None).expect("zero term is valid")
    }

    pub fn with_growth(mut self, rho: EnvelopeFn, gamma_exp: f64) -> Result<Self> {
        if !(1.0..3.0).contains(&gamma_exp) {
            return invalid(format!("gamma_exp must lie in [1, 3), got {gamma_exp}"));
        }
        self.growth = Some(GrowthEnvelope { rho, gamma_exp });
        Ok(self)
    }

    pub fn without_growth(mut self) -> Self {
        self.growth = None;
        self
    }

    pub fn eval(&self, t: f64, x: f64, u: f64, p: f64) -> f64 {
        (self.eval)(t, x, u, p)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn form(&self) -> ReactionForm {
        self.form
    }

    pub fn m1(&self) -> f64 {
        self.m1
    }

    pub fn m2(&self) -> f64 {
        self.m2
    }

    /// Scalar signal bounding the distributed disturbance.
    pub fn d2(&self) -> &DisturbanceSignal {
        &self.d2
    }

    pub fn distributed(&self) -> Option<&DistributedDisturbance> {
        self.distributed.as_ref()
    }

    pub fn growth(&self) -> Option<&GrowthEnvelope> {
        self.growth.as_ref()
    }

    /// Whether `f` may depend on `p`; the solver skips the gradient otherwise.
    pub fn uses_gradient(&self) -> bool {
        self.uses_gradient
    }

    pub(crate) fn gradient_free(mut self) -> Self {
        self.uses_gradient = false;
        self
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::signal::SpatialShape;

    #[test]
    fn linear_form_evaluates_identity() {
        let d = DistributedDisturbance::new(
            DisturbanceSignal::Constant { value: 0.5 },
            SpatialShape::Cosine { mode: 1 },
        );
        let term = ReactionTerm::linear_form(-1.0, 2.0, Some(d)).unwrap();
        let v = term.eval(0.0, 0.0, 3.0, 1.0);
        assert_eq!(v, 0.5 - 3.0 + 2.0);
        assert_eq!(term.d2(), &DisturbanceSignal::Constant { value: 0.5 });
        assert_eq!(term.form(), ReactionForm::LinearForm);
    }

    #[test]
    fn general_bound_rejects_negative_m2() {
        let f: ReactionFn = Arc::new(|_, _, u, _| -u);
        assert!(
            ReactionTerm::general_bound("x", f.clone(), -1.0, -0.5, DisturbanceSignal::Zero)
                .is_err()
        );
        let t = ReactionTerm::general_bound("x", f, -1.0, 0.0, DisturbanceSignal::Zero).unwrap();
        assert!(t.with_growth(Arc::new(|_, r| r), 3.0).is_err());
    }
}
