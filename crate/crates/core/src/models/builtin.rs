use std::sync::Arc;

use crate::error::{invalid, Result};
use crate::grid::{Field, Grid};
use crate::params::BoundaryParams;
use crate::signal::DisturbanceSignal;

use super::{ReactionFn, ReactionTerm};

/// `f = alpha u - beta |u|^2 u`, with `M1 = alpha`, `M2 = 0`.
pub fn make_ginzburg_landau(alpha: f64, beta: f64) -> Result<ReactionTerm> {
    if !(beta > 0.0) || !alpha.is_finite() || !beta.is_finite() {
        return invalid(format!(
            "need finite alpha and beta > 0, got alpha={alpha}, beta={beta}"
        ));
    }
    let eval: ReactionFn = Arc::new(move |_, _, u, _| alpha * u - beta * u * u * u);
    ReactionTerm::general_bound("ginzburg_landau", eval, alpha, 0.0, DisturbanceSignal::Zero)?
        .gradient_free()
        .with_growth(
            Arc::new(move |_, r| alpha.abs() * r + beta * r * r * r),
            1.0,
        )
}

/// `f = alpha u - beta |u|^2 u - gamma_c |u|^4 u + lambda p`, with
/// `M1 = alpha`, `M2 = |lambda|`.
pub fn make_generalized_gl(
    alpha: f64,
    beta: f64,
    gamma_c: f64,
    lambda: f64,
) -> Result<ReactionTerm> {
    if !(beta > 0.0) || !(gamma_c > 0.0) {
        return invalid(format!(
            "need beta > 0 and gamma_c > 0, got {beta}, {gamma_c}"
        ));
    }
    if !alpha.is_finite() || !lambda.is_finite() || !beta.is_finite() || !gamma_c.is_finite() {
        return invalid("generalized Ginzburg-Landau parameters must be finite");
    }
    let eval: ReactionFn = Arc::new(move |_, _, u, p| {
        let u2 = u * u;
        alpha * u - beta * u2 * u - gamma_c * u2 * u2 * u + lambda * p
    });
    let term = ReactionTerm::general_bound(
        "generalized_gl",
        eval,
        alpha,
        lambda.abs(),
        DisturbanceSignal::Zero,
    )?;
    let term = if lambda == 0.0 {
        term.gradient_free()
    } else {
        term
    };
    term.with_growth(
        Arc::new(move |_, r| {
            alpha.abs() * r + beta * r.powi(3) + gamma_c * r.powi(5) + lambda.abs()
        }),
        1.0,
    )
}

/// The transport equation `u_t = mu u_xx - m u_x - n u` with
///
/// ```text
/// u_x(t,1) = (m/(2mu) - a) u(t,1)
/// u_x(t,0) = (m/(2mu) - b) u(t,0) + d(t)
/// ```
///
/// expressed in the drift-free variable `w = exp(-m x / (2 mu)) u`, which
/// satisfies `w_t = mu w_xx - (m^2/(4 mu) + n) w` with
/// `w_x(1) = -a w(1)` and `w_x(0) = -b w(0) + d(t)`.
#[derive(Debug, Clone)]
pub struct TransportModel {
    pub term: ReactionTerm,
    pub m: f64,
    pub n: f64,
    pub mu: f64,
}

impl TransportModel {
    pub const A2: f64 = 1.0;
    pub const B2: f64 = 1.0;

    /// Robin data of the transformed problem: `a1 = a, a2 = 1, b1 = b, b2 = 1`.
    pub fn boundary_params(&self, a: f64, b: f64) -> Result<BoundaryParams> {
        BoundaryParams::new(a, Self::A2, b, Self::B2, self.mu)
    }

    /// `exp(m x / (2 mu))`, the factor taking `w` back to `u`.
    pub fn multiplier(&self, x: f64) -> f64 {
        (self.m * x / (2.0 * self.mu)).exp()
    }
}

pub fn make_transport(m: f64, n: f64, mu: f64) -> Result<TransportModel> {
    if !(mu > 0.0) || !mu.is_finite() {
        return invalid(format!("mu must be positive, got {mu}"));
    }
    if !(m >= 0.0) || !m.is_finite() || !n.is_finite() {
        return invalid(format!("need finite m >= 0 and n, got m={m}, n={n}"));
    }
    let m1 = -(m * m / (4.0 * mu) + n);
    let mut term = ReactionTerm::linear_form(m1, 0.0, None)?;
    term.name = "transport".into();
    Ok(TransportModel { term, m, n, mu })
}

/// Direction of the change of variables between the simulated (drift-free)
/// variable `w` and the physical transport variable `u = exp(m x/(2 mu)) w`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TransformDirection {
    /// `w -> u`: multiply by `exp(m x / (2 mu))`.
    Forward,
    /// `u -> w`: divide by `exp(m x / (2 mu))`.
    Inverse,
}

pub fn transport_transform(
    field: &Field,
    grid: &Grid,
    m: f64,
    mu: f64,
    direction: TransformDirection,
) -> Result<Field> {
    if !(mu > 0.0) {
        return invalid(format!("mu must be positive, got {mu}"));
    }
    field.check_grid(grid)?;
    let k = m / (2.0 * mu);
    let values = field
        .values
        .iter()
        .zip(grid.nodes())
        .map(|(v, &x)| match direction {
            TransformDirection::Forward => v * (k * x).exp(),
            TransformDirection::Inverse => v / (k * x).exp(),
        })
        .collect();
    Field::new(field.time, values)
}
