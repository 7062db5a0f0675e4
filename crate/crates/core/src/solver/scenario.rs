use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};
use crate::grid::{l2_norm_sq, Field, Grid};
use crate::models::ReactionTerm;
use crate::params::BoundaryParams;
use crate::series::{FourierSeries, Polynomial};
use crate::signal::DisturbanceSignal;

use super::operator::assemble_diffusion;
use super::stepper::Stepper;

/// Tolerance on `u0(1)` when the right end is Dirichlet.
pub const DIRICHLET_COMPAT_TOL: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
#[derive(Default)]
pub enum InitialCondition {
    #[default]
    Zero,
    /// Half-range series on [0, 1].
    Fourier(FourierSeries),
    Polynomial {
        coeffs: Vec<f64>,
    },
    /// Piecewise-linear through `(x[i], values[i])`; must cover [0, 1].
    Table {
        x: Vec<f64>,
        values: Vec<f64>,
    },
}

impl InitialCondition {
    pub fn validate(&self) -> Result<()> {
        match self {
            Self::Zero => Ok(()),
            Self::Fourier(s) => s.validate(),
            Self::Polynomial { coeffs } => Polynomial::new(coeffs.clone()).map(|_| ()),
            Self::Table { x, values } => {
                if x.len() < 2 || x.len() != values.len() {
                    return invalid("initial table needs at least two (x, value) pairs");
                }
                if x.iter().chain(values).any(|v| !v.is_finite()) {
                    return invalid("initial table entries must be finite");
                }
                if x.windows(2).any(|w| !(w[1] > w[0])) {
                    return invalid("initial table x must be strictly increasing");
                }
                if x[0] > 0.0 || x[x.len() - 1] < 1.0 {
                    return invalid("initial table must cover [0, 1]");
                }
                Ok(())
            }
        }
    }

    pub fn eval(&self, x: f64) -> f64 {
        match self {
            Self::Zero => 0.0,
            Self::Fourier(s) => s.value(x, 0.0, 1.0),
            Self::Polynomial { coeffs } => coeffs.iter().rev().fold(0.0, |acc, c| acc * x + c),
            Self::Table { x: xs, values } => {
                let k = xs.partition_point(|&v| v <= x).clamp(1, xs.len() - 1);
                let (x0, x1) = (xs[k - 1], xs[k]);
                let w = (x - x0) / (x1 - x0);
                values[k - 1] + w * (values[k] - values[k - 1])
            }
        }
    }

    pub fn field(&self, grid: &Grid) -> Result<Field> {
        self.validate()?;
        Field::from_fn(grid, 0.0, |x| self.eval(x))
    }
}

/// `min(1e-3, t_end / 1000)`
pub fn default_dt(t_end: f64) -> f64 {
    (t_end / 1000.0).min(1e-3)
}

#[derive(Debug, Clone)]
pub struct Scenario {
    pub bc: BoundaryParams,
    pub term: ReactionTerm,
    pub d1: DisturbanceSignal,
    pub u0: InitialCondition,
    pub grid: Grid,
    pub t_end: f64,
    pub dt: f64,
    /// Record every `output_stride`-th step (plus the first and last).
    pub output_stride: usize,
    pub store_fields: bool,
}

impl Scenario {
    pub fn new(
        bc: BoundaryParams,
        term: ReactionTerm,
        d1: DisturbanceSignal,
        u0: InitialCondition,
        grid: Grid,
        t_end: f64,
        dt: f64,
    ) -> Result<Self> {
        let s = Self {
            bc,
            term,
            d1,
            u0,
            grid,
            t_end,
            dt,
            output_stride: 1,
            store_fields: false,
        };
        s.validate()?;
        Ok(s)
    }

    pub fn with_output_stride(mut self, stride: usize) -> Self {
        self.output_stride = stride;
        self
    }

    pub fn with_fields(mut self, store: bool) -> Self {
        self.store_fields = store;
        self
    }

    pub fn validate(&self) -> Result<()> {
        self.bc.validate()?;
        self.bc.require_robin_left()?;
        self.d1.validate()?;
        if !(self.t_end > 0.0) || !self.t_end.is_finite() {
            return invalid(format!("t_end must be positive, got {}", self.t_end));
        }
        if !(self.dt > 0.0) || self.dt > self.t_end {
            return invalid(format!("need 0 < dt <= t_end, got dt = {}", self.dt));
        }
        if self.output_stride == 0 {
            return invalid("output_stride must be at least 1");
        }
        let u0 = self.u0.field(&self.grid)?;
        if self.bc.dirichlet_right() {
            let end = u0.values[u0.len() - 1];
            if end.abs() > DIRICHLET_COMPAT_TOL {
                return invalid(format!("u0(1) = {end:e} violates u(t,1) = 0 (a2 = 0)"));
            }
        }
        Ok(())
    }

    /// Number of steps and the step actually used, so that the last step
    /// lands on `t_end`.
    pub fn steps(&self) -> (usize, f64) {
        let n = ((self.t_end / self.dt) * (1.0 - 1e-12)).ceil().max(1.0) as usize;
        (n, self.t_end / n as f64)
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct Trace {
    pub times: Vec<f64>,
    pub energies: Vec<f64>,
    pub boundary_left: Vec<f64>,
    pub boundary_right: Vec<f64>,
    pub fields: Option<Vec<Field>>,
}

impl Trace {
    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    fn record(&mut self, t: f64, u: &[f64], grid: &Grid) -> Result<()> {
        let field = Field {
            time: t,
            values: u.to_vec(),
        };
        self.times.push(t);
        self.energies.push(l2_norm_sq(&field, grid)?);
        self.boundary_left.push(u[0]);
        self.boundary_right.push(u[u.len() - 1]);
        if let Some(fs) = &mut self.fields {
            fs.push(field);
        }
        Ok(())
    }

    /// `t,energy,u0,u1` with 17 significant digits.
    pub fn to_csv(&self) -> String {
        let mut s = String::from("t,energy,u0,u1\n");
        for k in 0..self.times.len() {
            let _ = writeln!(
                s,
                "{:.16e},{:.16e},{:.16e},{:.16e}",
                self.times[k], self.energies[k], self.boundary_left[k], self.boundary_right[k]
            );
        }
        s
    }

    pub fn last_field(&self) -> Option<&Field> {
        self.fields.as_ref().and_then(|f| f.last())
    }
}

pub fn simulate(scenario: &Scenario) -> Result<Trace> {
    scenario.validate()?;
    let grid = &scenario.grid;
    let op = assemble_diffusion(grid, &scenario.bc)?;
    let (n_steps, dt) = scenario.steps();
    let mut stepper = Stepper::new(&op, dt)?;
    let mut u = scenario.u0.field(grid)?.values;
    if scenario.bc.dirichlet_right() {
        let n = u.len();
        u[n - 1] = 0.0;
    }
    let mut trace = Trace {
        fields: scenario.store_fields.then(Vec::new),
        ..Trace::default()
    };
    trace.record(0.0, &u, grid)?;
    for k in 0..n_steps {
        let t = k as f64 * dt;
        stepper.step(&op, &mut u, t, &scenario.term, &scenario.d1)?;
        let done = k + 1;
        if done % scenario.output_stride == 0 || done == n_steps {
            let t_next = if done == n_steps {
                scenario.t_end
            } else {
                done as f64 * dt
            };
            trace.record(t_next, &u, grid)?;
        }
    }
    Ok(trace)
}
