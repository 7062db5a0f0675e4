use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};
use crate::grid::build_grid;
use crate::solver::{simulate, Scenario};

/// Closed-form solutions usable as convergence references.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ManufacturedSolution {
    /// `exp(-mu pi^2 t / 4) cos(pi x / 2)`: heat equation, Neumann at 0,
    /// Dirichlet at 1.
    HeatCosine,
    Zero,
}

impl ManufacturedSolution {
    pub fn value(self, t: f64, x: f64, mu: f64) -> f64 {
        match self {
            Self::HeatCosine => (-mu * PI * PI * t / 4.0).exp() * (0.5 * PI * x).cos(),
            Self::Zero => 0.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ConvergenceRow {
    pub n_cells: usize,
    /// Max-norm error at `t_end`.
    pub error: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConvergenceReport {
    pub rows: Vec<ConvergenceRow>,
    /// Mean of `log2(e_i / e_{i+1})`; `None` when some error is zero.
    pub order: Option<f64>,
    pub degenerate: bool,
}

/// Runs `template` on each grid and compares the final state with `exact(t, x)`.
/// Grids must double successively and there must be at least three.
pub fn convergence_study(
    template: &Scenario,
    exact: impl Fn(f64, f64) -> f64,
    grids: &[usize],
) -> Result<ConvergenceReport> {
    if grids.len() < 3 {
        return invalid(format!("need at least 3 grids, got {}", grids.len()));
    }
    if let Some(w) = grids.windows(2).find(|w| w[1] != 2 * w[0]) {
        return invalid(format!("grids must double: {} -> {}", w[0], w[1]));
    }
    let mut rows = Vec::with_capacity(grids.len());
    for &n in grids {
        let grid = build_grid(n)?;
        let s = Scenario {
            grid: grid.clone(),
            output_stride: usize::MAX,
            store_fields: true,
            ..template.clone()
        };
        let trace = simulate(&s)?;
        let last = trace.last_field().expect("fields stored");
        let error = grid
            .nodes()
            .iter()
            .zip(&last.values)
            .map(|(&x, v)| (v - exact(last.time, x)).abs())
            .fold(0.0, f64::max);
        rows.push(ConvergenceRow { n_cells: n, error });
    }
    let degenerate = rows.iter().any(|r| !(r.error > 0.0));
    let order = (!degenerate).then(|| {
        let logs: Vec<f64> = rows
            .windows(2)
            .map(|w| (w[0].error / w[1].error).log2())
            .collect();
        logs.iter().sum::<f64>() / logs.len() as f64
    });
    Ok(ConvergenceReport {
        rows,
        order,
        degenerate,
    })
}
