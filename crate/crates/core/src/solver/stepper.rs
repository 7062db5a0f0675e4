use crate::error::{invalid, IssError, Result};
use crate::grid::{Field, Grid};
use crate::models::ReactionTerm;
use crate::params::BoundaryParams;
use crate::signal::DisturbanceSignal;

use super::operator::{DiffusionOperator, ImplicitFactor};

/// `u_x` at the nodes: central differences inside, the Robin relations at
/// the ends, and a one-sided second-order difference at a Dirichlet end.
pub fn spatial_gradient(state: &Field, grid: &Grid, bc: &BoundaryParams, d1: f64) -> Result<Field> {
    state.check_grid(grid)?;
    let left = bc.left_ratio()?;
    let mut p = vec![0.0; state.len()];
    fill_gradient(
        &state.values,
        grid.h(),
        left,
        bc.b2,
        bc.right_ratio(),
        d1,
        &mut p,
    );
    Ok(Field {
        time: state.time,
        values: p,
    })
}

fn fill_gradient(
    u: &[f64],
    h: f64,
    left: f64,
    b2: f64,
    right: Option<f64>,
    d1: f64,
    p: &mut [f64],
) {
    let n = u.len() - 1;
    for i in 1..n {
        p[i] = (u[i + 1] - u[i - 1]) / (2.0 * h);
    }
    p[0] = d1 / b2 - left * u[0];
    p[n] = match right {
        Some(r) => -r * u[n],
        None => (3.0 * u[n] - 4.0 * u[n - 1] + u[n - 2]) / (2.0 * h),
    };
}

/// Crank-Nicolson on the diffusion, forward Euler on the reaction and on
/// the boundary input (taken at the half step).
#[derive(Debug, Clone)]
pub(crate) struct Stepper {
    factor: ImplicitFactor,
    dt: f64,
    rhs: Vec<f64>,
    grad: Vec<f64>,
}

impl Stepper {
    pub fn new(op: &DiffusionOperator, dt: f64) -> Result<Self> {
        if !(dt > 0.0) || !dt.is_finite() {
            return invalid(format!("dt must be positive, got {dt}"));
        }
        let n = op.diag().len();
        Ok(Self {
            factor: ImplicitFactor::new(op, 0.5 * dt)?,
            dt,
            rhs: vec![0.0; n],
            grad: vec![0.0; n],
        })
    }

    /// Advances `u` from `t` to `t + dt` in place.
    pub fn step(
        &mut self,
        op: &DiffusionOperator,
        u: &mut [f64],
        t: f64,
        term: &ReactionTerm,
        d1: &DisturbanceSignal,
    ) -> Result<()> {
        let dt = self.dt;
        let n = u.len();
        let bc = op.bc();
        let grid = op.grid();
        let lu = op.apply(u);
        if term.uses_gradient() {
            let left = bc.b1 / bc.b2;
            fill_gradient(
                u,
                grid.h(),
                left,
                bc.b2,
                bc.right_ratio(),
                d1.value(t),
                &mut self.grad,
            );
        }
        let active = if op.dirichlet_right() { n - 1 } else { n };
        for i in 0..n {
            self.rhs[i] = u[i] + 0.5 * dt * lu[i];
        }
        for i in 0..active {
            let x = grid.nodes()[i];
            self.rhs[i] += dt * term.eval(t, x, u[i], self.grad[i]);
        }
        self.rhs[0] += dt * op.boundary_source(d1.value(t + 0.5 * dt));
        if op.dirichlet_right() {
            self.rhs[n - 1] = 0.0;
        }
        self.factor.solve(&mut self.rhs);
        if self.rhs.iter().any(|v| !v.is_finite()) {
            return Err(IssError::BlowUp { time: t + dt });
        }
        u.copy_from_slice(&self.rhs);
        Ok(())
    }
}

/// One IMEX step of size `dt` from `state` at time `t`.
pub fn step_imex(
    state: &Field,
    t: f64,
    dt: f64,
    op: &DiffusionOperator,
    term: &ReactionTerm,
    d1: &DisturbanceSignal,
) -> Result<Field> {
    state.check_grid(op.grid())?;
    if !(t >= 0.0) {
        return invalid(format!("time must be nonnegative, got {t}"));
    }
    let mut stepper = Stepper::new(op, dt)?;
    let mut u = state.values.clone();
    stepper.step(op, &mut u, t, term, d1)?;
    Ok(Field {
        time: t + dt,
        values: u,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::build_grid;
    use crate::models::make_ginzburg_landau;
    use crate::solver::assemble_diffusion;
    use std::f64::consts::PI;

    fn bc(a1: f64, a2: f64, b1: f64, b2: f64, mu: f64) -> BoundaryParams {
        BoundaryParams::new(a1, a2, b1, b2, mu).unwrap()
    }

    #[test]
    fn gradient_of_line_and_constant() {
        let g = build_grid(10).unwrap();
        let line = Field::from_fn(&g, 0.0, |x| x).unwrap();
        let p = spatial_gradient(&line, &g, &bc(1.0, 0.0, 0.0, 1.0, 1.0), 1.0).unwrap();
        assert!(
            p.values.iter().all(|v| (v - 1.0).abs() < 1e-12),
            "{:?}",
            p.values
        );
        let c = Field::from_fn(&g, 0.0, |_| 2.0).unwrap();
        let p = spatial_gradient(&c, &g, &bc(0.0, 1.0, 0.0, 1.0, 1.0), 0.0).unwrap();
        assert!(p.values.iter().all(|v| v.abs() < 1e-12));
    }

    #[test]
    fn gradient_of_sine() {
        let g = build_grid(128).unwrap();
        let s = Field::from_fn(&g, 0.0, |x| (PI * x).sin()).unwrap();
        let p = spatial_gradient(&s, &g, &bc(1.0, 0.0, 0.0, 1.0, 1.0), PI).unwrap();
        for (i, x) in g.nodes().iter().enumerate().skip(1).take(127) {
            assert!((p.values[i] - PI * (PI * x).cos()).abs() < 1e-3);
        }
    }

    #[test]
    fn zero_is_fixed() {
        let g = build_grid(16).unwrap();
        let b = bc(1.0, 1.0, 0.0, 1.0, 1.0);
        let op = assemble_diffusion(&g, &b).unwrap();
        let z = Field::zeros(&g);
        let out = step_imex(
            &z,
            0.0,
            1e-3,
            &op,
            &ReactionTerm::zero(),
            &DisturbanceSignal::Zero,
        )
        .unwrap();
        assert!(out.values.iter().all(|v| *v == 0.0));
    }

    #[test]
    fn linear_step_is_linear() {
        let g = build_grid(32).unwrap();
        let b = bc(1.5, 1.0, 0.2, 1.0, 0.7);
        let op = assemble_diffusion(&g, &b).unwrap();
        let term = ReactionTerm::linear_form(-0.5, 0.8, None).unwrap();
        let u = Field::from_fn(&g, 0.0, |x| (3.0 * x).cos() + x).unwrap();
        let u2 = Field::from_fn(&g, 0.0, |x| 2.0 * ((3.0 * x).cos() + x)).unwrap();
        let a = step_imex(&u, 0.0, 1e-2, &op, &term, &DisturbanceSignal::Zero).unwrap();
        let b2 = step_imex(&u2, 0.0, 1e-2, &op, &term, &DisturbanceSignal::Zero).unwrap();
        for (x, y) in a.values.iter().zip(&b2.values) {
            assert!((2.0 * x - y).abs() <= 1e-14 * y.abs().max(1.0));
        }
    }

    #[test]
    fn dirichlet_node_stays_zero() {
        let g = build_grid(16).unwrap();
        let b = bc(1.0, 0.0, 0.0, 1.0, 1.0);
        let op = assemble_diffusion(&g, &b).unwrap();
        let gl = make_ginzburg_landau(2.0, 1.0).unwrap();
        let u = Field::from_fn(&g, 0.0, |x| 1.0 - x * x).unwrap();
        let d = DisturbanceSignal::Constant { value: 1.0 };
        let out = step_imex(&u, 0.0, 1e-3, &op, &gl, &d).unwrap();
        assert_eq!(out.values[16], 0.0);
    }

    #[test]
    fn blow_up_detected() {
        let g = build_grid(8).unwrap();
        let b = bc(1.0, 1.0, 0.0, 1.0, 1.0);
        let op = assemble_diffusion(&g, &b).unwrap();
        let gl = make_ginzburg_landau(-1.0, 1.0).unwrap();
        let u = Field::from_fn(&g, 0.0, |_| 1e120).unwrap();
        let err = step_imex(&u, 0.0, 0.1, &op, &gl, &DisturbanceSignal::Zero).unwrap_err();
        assert!(matches!(err, IssError::BlowUp { time } if (time - 0.1).abs() < 1e-15));
    }
}
