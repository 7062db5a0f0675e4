use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};
use crate::quadrature::adaptive_trapezoid;
use crate::signal::DisturbanceSignal;

use super::Certificate;

pub const BOUND_QUAD_REL_TOL: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BoundForm {
    /// Integral gains: `E0 e^{-ct} + C1 int d1^2 + C2 int d2^2`.
    Eiiss,
    /// Sup gains: `E0 e^{-ct} + (1 - e^{-ct}) (C1 sup d1^2 + C2 sup d2^2)`.
    Eiss,
}

/// Evaluates the energy bound at a nondecreasing sequence of times,
/// accumulating the integrals and running maxima segment by segment.
#[derive(Debug, Clone)]
pub struct BoundEvaluator<'a> {
    c_decay: f64,
    c1: f64,
    c2: f64,
    e0: f64,
    d1: &'a DisturbanceSignal,
    d2: &'a DisturbanceSignal,
    form: BoundForm,
    t: f64,
    int1: f64,
    int2: f64,
    sup1: f64,
    sup2: f64,
}

impl<'a> BoundEvaluator<'a> {
    pub fn new(
        cert: &Certificate,
        e0: f64,
        d1: &'a DisturbanceSignal,
        d2: &'a DisturbanceSignal,
        form: BoundForm,
    ) -> Result<Self> {
        if !(e0 >= 0.0) || !e0.is_finite() {
            return invalid(format!(
                "initial energy must be finite and nonnegative, got {e0}"
            ));
        }
        d1.validate()?;
        d2.validate()?;
        let sq = |d: &DisturbanceSignal| {
            let v = d.value(0.0);
            v * v
        };
        Ok(Self {
            c_decay: cert.c_decay,
            c1: cert.c_gain_boundary,
            c2: cert.c_gain_distributed,
            e0,
            d1,
            d2,
            form,
            t: 0.0,
            int1: 0.0,
            int2: 0.0,
            sup1: sq(d1),
            sup2: sq(d2),
        })
    }

    fn advance(&mut self, t: f64) {
        if t <= self.t {
            return;
        }
        for (d, int, sup) in [
            (self.d1, &mut self.int1, &mut self.sup1),
            (self.d2, &mut self.int2, &mut self.sup2),
        ] {
            if d.is_zero() {
                continue;
            }
            let q = adaptive_trapezoid(
                |s| {
                    let v = d.value(s);
                    v * v
                },
                self.t,
                t,
                BOUND_QUAD_REL_TOL,
            );
            *int += q.integral;
            *sup = sup.max(q.max_sample);
        }
        self.t = t;
    }

    /// Bound at time `t`; `t` must not be smaller than the previous call's.
    pub fn at(&mut self, t: f64) -> Result<f64> {
        if !(t >= 0.0) || !t.is_finite() {
            return invalid(format!("time must be finite and nonnegative, got {t}"));
        }
        if t < self.t {
            return invalid(format!(
                "times must be nondecreasing ({t} after {})",
                self.t
            ));
        }
        self.advance(t);
        let decay = (-self.c_decay * t).exp();
        let value = match self.form {
            BoundForm::Eiiss => self.e0 * decay + self.c1 * self.int1 + self.c2 * self.int2,
            BoundForm::Eiss => {
                self.e0 * decay + (1.0 - decay) * (self.c1 * self.sup1 + self.c2 * self.sup2)
            }
        };
        Ok(value)
    }
}

/// Energy bound implied by `cert` at time `t` for initial energy `e0`.
pub fn iss_bound(
    cert: &Certificate,
    e0: f64,
    d1: &DisturbanceSignal,
    d2: &DisturbanceSignal,
    t: f64,
    form: BoundForm,
) -> Result<f64> {
    BoundEvaluator::new(cert, e0, d1, d2, form)?.at(t)
}
