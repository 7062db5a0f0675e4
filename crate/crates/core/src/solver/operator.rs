use crate::error::{IssError, Result};
use crate::grid::{Field, Grid};
use crate::params::BoundaryParams;

/// Tridiagonal discretization of `mu u_xx` with the boundary closures folded
/// in, so that `u_t = L u + s(t) e_0 + f`.
#[derive(Debug, Clone, PartialEq)]
pub struct DiffusionOperator {
    bc: BoundaryParams,
    grid: Grid,
    lower: Vec<f64>,
    diag: Vec<f64>,
    upper: Vec<f64>,
    source_coeff: f64,
}

impl DiffusionOperator {
    pub fn bc(&self) -> &BoundaryParams {
        &self.bc
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    /// `lower[i]` couples row `i` to `u[i-1]`; `lower[0] = 0`.
    pub fn lower(&self) -> &[f64] {
        &self.lower
    }

    pub fn diag(&self) -> &[f64] {
        &self.diag
    }

    /// `upper[i]` couples row `i` to `u[i+1]`; the last entry is 0.
    pub fn upper(&self) -> &[f64] {
        &self.upper
    }

    /// Row `N` is pinned to zero (`a2 = 0`).
    pub fn dirichlet_right(&self) -> bool {
        self.bc.dirichlet_right()
    }

    /// Source at node 0 for boundary input `d1`: `-2 mu d1 / (h b2)`.
    pub fn boundary_source(&self, d1: f64) -> f64 {
        self.source_coeff * d1
    }

    pub fn apply(&self, u: &[f64]) -> Vec<f64> {
        let n = self.diag.len();
        (0..n)
            .map(|i| {
                let mut v = self.diag[i] * u[i];
                if i > 0 {
                    v += self.lower[i] * u[i - 1];
                }
                if i + 1 < n {
                    v += self.upper[i] * u[i + 1];
                }
                v
            })
            .collect()
    }

    pub fn apply_field(&self, field: &Field) -> Result<Field> {
        field.check_grid(&self.grid)?;
        Ok(Field {
            time: field.time,
            values: self.apply(&field.values),
        })
    }
}

pub fn assemble_diffusion(grid: &Grid, bc: &BoundaryParams) -> Result<DiffusionOperator> {
    bc.validate()?;
    let left = bc.left_ratio()?;
    let n = grid.n_nodes();
    let h = grid.h();
    let k = bc.mu / (h * h);
    let mut lower = vec![k; n];
    let mut diag = vec![-2.0 * k; n];
    let mut upper = vec![k; n];
    lower[0] = 0.0;
    upper[n - 1] = 0.0;

    // ghost u_{-1} = u_1 - 2h (d1 - b1 u_0) / b2
    upper[0] = 2.0 * k;
    diag[0] = -2.0 * k + 2.0 * h * left * k;

    match bc.right_ratio() {
        // ghost u_{N+1} = u_{N-1} - 2h (a1/a2) u_N
        Some(right) => {
            lower[n - 1] = 2.0 * k;
            diag[n - 1] = -2.0 * k - 2.0 * h * right * k;
        }
        None => {
            lower[n - 1] = 0.0;
            diag[n - 1] = 0.0;
        }
    }
    Ok(DiffusionOperator {
        bc: *bc,
        grid: grid.clone(),
        lower,
        diag,
        upper,
        source_coeff: -2.0 * bc.mu / (h * bc.b2),
    })
}

/// LU factors of `I - theta L` for repeated Thomas solves. With a Dirichlet
/// right end the last row is the identity.
#[derive(Debug, Clone)]
pub(crate) struct ImplicitFactor {
    sub: Vec<f64>,
    inv_pivot: Vec<f64>,
    sup_scaled: Vec<f64>,
}

impl ImplicitFactor {
    pub fn new(op: &DiffusionOperator, theta: f64) -> Result<Self> {
        let n = op.diag.len();
        let mut sub = vec![0.0; n];
        let mut diag = vec![0.0; n];
        let mut sup = vec![0.0; n];
        for i in 0..n {
            sub[i] = -theta * op.lower[i];
            diag[i] = 1.0 - theta * op.diag[i];
            sup[i] = -theta * op.upper[i];
        }
        if op.dirichlet_right() {
            sub[n - 1] = 0.0;
            diag[n - 1] = 1.0;
        }
        let mut inv_pivot = vec![0.0; n];
        let mut sup_scaled = vec![0.0; n];
        let mut prev = 0.0;
        for i in 0..n {
            let pivot = diag[i] - sub[i] * prev;
            let scale = diag[i].abs() + sub[i].abs() + sup[i].abs();
            if !pivot.is_finite() || pivot.abs() <= 1e3 * f64::EPSILON * scale {
                return Err(IssError::NumericalFailure(format!(
                    "tridiagonal solve broke down at row {i}: pivot {pivot:e} (row scale {scale:e}); \
                     boundary coefficients b1/b2 = {:.6e} make I - dt/2 L singular or indefinite",
                    op.bc.b1 / op.bc.b2
                )));
            }
            inv_pivot[i] = 1.0 / pivot;
            sup_scaled[i] = sup[i] * inv_pivot[i];
            prev = sup_scaled[i];
        }
        Ok(Self {
            sub,
            inv_pivot,
            sup_scaled,
        })
    }

    /// Solves in place.
    pub fn solve(&self, rhs: &mut [f64]) {
        let n = rhs.len();
        let mut prev = 0.0;
        for i in 0..n {
            rhs[i] = (rhs[i] - self.sub[i] * prev) * self.inv_pivot[i];
            prev = rhs[i];
        }
        for i in (0..n.saturating_sub(1)).rev() {
            rhs[i] -= self.sup_scaled[i] * rhs[i + 1];
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::build_grid;

    fn bc(a1: f64, a2: f64, b1: f64, b2: f64, mu: f64) -> BoundaryParams {
        BoundaryParams::new(a1, a2, b1, b2, mu).unwrap()
    }

    #[test]
    fn left_row_example() {
        let g = build_grid(4).unwrap();
        let op = assemble_diffusion(&g, &bc(1.0, 1.0, 0.0, 1.0, 1.0)).unwrap();
        assert_eq!(op.diag()[0], -32.0);
        assert_eq!(op.upper()[0], 32.0);
        assert_eq!(op.boundary_source(1.0), -8.0);
        assert_eq!(op.boundary_source(0.0), 0.0);
        let ones = op.apply(&[1.0; 5]);
        assert!(ones[..4].iter().all(|v| *v == 0.0));
        let sq: Vec<f64> = g.nodes().iter().map(|x| x * x).collect();
        let l = op.apply(&sq);
        for v in &l[..4] {
            assert!((v - 2.0).abs() < 1e-12, "{l:?}");
        }
    }

    #[test]
    fn neumann_kernel() {
        let g = build_grid(16).unwrap();
        let op = assemble_diffusion(&g, &bc(0.0, 1.0, 0.0, 1.0, 2.5)).unwrap();
        assert!(op.apply(&[3.0; 17]).iter().all(|v| v.abs() < 1e-12));
    }

    #[test]
    fn robin_rows() {
        let g = build_grid(4).unwrap();
        let op = assemble_diffusion(&g, &bc(1.5, 1.0, 0.5, 2.0, 1.0)).unwrap();
        // mu (2 u1 - 2 u0 + 2h (b1/b2) u0) / h^2
        assert!((op.diag()[0] - 16.0 * (-2.0 + 0.5 * 0.25)).abs() < 1e-12);
        assert!((op.diag()[4] - 16.0 * (-2.0 - 0.5 * 1.5)).abs() < 1e-12);
        assert_eq!(op.lower()[4], 32.0);
        assert_eq!(op.boundary_source(1.0), -4.0);
    }

    #[test]
    fn dirichlet_right_row() {
        let g = build_grid(4).unwrap();
        let op = assemble_diffusion(&g, &bc(1.0, 0.0, 0.0, 1.0, 1.0)).unwrap();
        assert!(op.dirichlet_right());
        assert_eq!((op.lower()[4], op.diag()[4]), (0.0, 0.0));
    }

    #[test]
    fn dirichlet_left_rejected() {
        let g = build_grid(4).unwrap();
        let b = bc(1.0, 1.0, 1.0, 0.0, 1.0);
        assert!(matches!(
            assemble_diffusion(&g, &b),
            Err(IssError::UnsupportedBoundary(_))
        ));
    }

    #[test]
    fn thomas_matches_dense() {
        let g = build_grid(6).unwrap();
        let op = assemble_diffusion(&g, &bc(0.7, 1.0, -0.3, 1.0, 0.8)).unwrap();
        let theta = 0.01;
        let f = ImplicitFactor::new(&op, theta).unwrap();
        let x: Vec<f64> = (0..7).map(|i| (i as f64 * 0.9).sin()).collect();
        let lx = op.apply(&x);
        let mut b: Vec<f64> = x.iter().zip(&lx).map(|(a, l)| a - theta * l).collect();
        f.solve(&mut b);
        for (a, b) in x.iter().zip(&b) {
            assert!((a - b).abs() < 1e-13);
        }
    }

    #[test]
    fn singular_system_reported() {
        let g = build_grid(4).unwrap();
        // diag[0] = 16 (-2 + 0.5 r); pick theta so that 1 - theta diag[0] = 0
        let op = assemble_diffusion(&g, &bc(1.0, 1.0, 8.0, 1.0, 1.0)).unwrap();
        let theta = 1.0 / op.diag()[0];
        assert!(matches!(
            ImplicitFactor::new(&op, theta),
            Err(IssError::NumericalFailure(_))
        ));
    }
}
