//! Uniform grids on [0, 1] and sampled fields.

use serde::{Deserialize, Serialize};

use crate::error::{invalid, IssError, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Grid {
    n_cells: usize,
    h: f64,
    nodes: Vec<f64>,
}

impl Grid {
    pub fn n_cells(&self) -> usize {
        self.n_cells
    }

    pub fn n_nodes(&self) -> usize {
        self.n_cells + 1
    }

    pub fn h(&self) -> f64 {
        self.h
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }
}

/// Uniform grid with `n_cells` intervals. Nodes are computed as `i / n` so
/// both endpoints are exact.
pub fn build_grid(n_cells: usize) -> Result<Grid> {
    if n_cells < 2 {
        return invalid(format!("n_cells must be at least 2, got {n_cells}"));
    }
    let n = n_cells as f64;
    let nodes = (0..=n_cells).map(|i| i as f64 / n).collect();
    Ok(Grid {
        n_cells,
        h: 1.0 / n,
        nodes,
    })
}

/// Samples `u(t, x_i)` of a solution at one time.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Field {
    pub time: f64,
    pub values: Vec<f64>,
}

impl Field {
    pub fn new(time: f64, values: Vec<f64>) -> Result<Self> {
        if let Some(i) = values.iter().position(|v| !v.is_finite()) {
            return invalid(format!("field sample {i} is not finite"));
        }
        Ok(Self { time, values })
    }

    pub fn zeros(grid: &Grid) -> Self {
        Self {
            time: 0.0,
            values: vec![0.0; grid.n_nodes()],
        }
    }

    pub fn from_fn(grid: &Grid, time: f64, f: impl Fn(f64) -> f64) -> Result<Self> {
        Self::new(time, grid.nodes().iter().map(|&x| f(x)).collect())
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn max_abs_diff(&self, other: &Field) -> f64 {
        self.values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }

    pub(crate) fn check_grid(&self, grid: &Grid) -> Result<()> {
        if self.values.len() != grid.n_nodes() {
            return Err(IssError::InvalidArgument(format!(
                "field has {} samples but grid has {} nodes",
                self.values.len(),
                grid.n_nodes()
            )));
        }
        Ok(())
    }
}

/// Composite trapezoid approximation of `int_0^1 u^2 dx`.
pub fn l2_norm_sq(field: &Field, grid: &Grid) -> Result<f64> {
    field.check_grid(grid)?;
    Ok(crate::quadrature::trapezoid_uniform(
        field.values.iter().map(|v| v * v),
        grid.h(),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_nodes() {
        let g = build_grid(4).unwrap();
        assert_eq!(g.nodes(), &[0.0, 0.25, 0.5, 0.75, 1.0]);
        assert_eq!(g.h(), 0.25);
        assert_eq!(build_grid(2).unwrap().nodes(), &[0.0, 0.5, 1.0]);
        assert!(matches!(build_grid(1), Err(IssError::InvalidArgument(_))));
        for n in [2usize, 4, 32, 64, 128, 256, 1024] {
            let g = build_grid(n).unwrap();
            assert_eq!(g.h() * n as f64, 1.0);
        }
    }

    #[test]
    fn norm_examples() {
        let g = build_grid(7).unwrap();
        let one = Field::from_fn(&g, 0.0, |_| 1.0).unwrap();
        assert!((l2_norm_sq(&one, &g).unwrap() - 1.0).abs() < 1e-15);
        assert_eq!(l2_norm_sq(&Field::zeros(&g), &g).unwrap(), 0.0);

        let g = build_grid(100).unwrap();
        let lin = Field::from_fn(&g, 0.0, |x| x).unwrap();
        assert!((l2_norm_sq(&lin, &g).unwrap() - 1.0 / 3.0).abs() < 1e-4);
    }

    #[test]
    fn norm_rejects_mismatch() {
        let g = build_grid(4).unwrap();
        let f = Field::new(0.0, vec![0.0; 3]).unwrap();
        assert!(l2_norm_sq(&f, &g).is_err());
        assert!(Field::new(0.0, vec![f64::NAN]).is_err());
    }

    #[test]
    fn linear_samples_match_piecewise_formula() {
        // trapezoid of u^2 for u linear: each panel contributes h (u_i^2 + u_{i+1}^2) / 2
        for n in [2usize, 5, 16, 33] {
            let g = build_grid(n).unwrap();
            let (s, c) = (-1.7, 0.4);
            let f = Field::from_fn(&g, 0.0, |x| s * x + c).unwrap();
            let closed: f64 = (0..n)
                .map(|i| {
                    let (l, r) = (f.values[i], f.values[i + 1]);
                    g.h() * (l * l + r * r) / 2.0
                })
                .sum();
            assert!((l2_norm_sq(&f, &g).unwrap() - closed).abs() < 1e-12);
        }
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #[test]
            fn norm_is_two_homogeneous(
                vals in proptest::collection::vec(-10.0f64..10.0, 9),
                alpha in -5.0f64..5.0,
            ) {
                let g = build_grid(8).unwrap();
                let f = Field::new(0.0, vals.clone()).unwrap();
                let scaled = Field::new(0.0, vals.iter().map(|v| alpha * v).collect()).unwrap();
                let base = l2_norm_sq(&f, &g).unwrap();
                let got = l2_norm_sq(&scaled, &g).unwrap();
                prop_assert!(base >= 0.0);
                prop_assert!((got - alpha * alpha * base).abs() <= 1e-12 * (1.0 + got.abs()));
            }
        }
    }
}
