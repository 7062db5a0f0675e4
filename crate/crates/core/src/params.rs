use serde::{Deserialize, Serialize};

use crate::error::{invalid, IssError, Result};

/// Robin coefficients and diffusion:
///
/// ```text
/// a1 u(t,1) + a2 u_x(t,1) = 0
/// b1 u(t,0) + b2 u_x(t,0) = d1(t)
/// ```
///
/// Coefficients may be signed; each certificate path checks its own
/// inequalities on the ratios `a1/a2` and `b1/b2`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BoundaryParams {
    pub a1: f64,
    pub a2: f64,
    pub b1: f64,
    pub b2: f64,
    pub mu: f64,
}

impl BoundaryParams {
    pub fn new(a1: f64, a2: f64, b1: f64, b2: f64, mu: f64) -> Result<Self> {
        let bc = Self { a1, a2, b1, b2, mu };
        bc.validate()?;
        Ok(bc)
    }

    pub fn validate(&self) -> Result<()> {
        let all = [self.a1, self.a2, self.b1, self.b2, self.mu];
        if all.iter().any(|v| !v.is_finite()) {
            return invalid("boundary coefficients must be finite");
        }
        if !(self.mu > 0.0) {
            return invalid(format!("mu must be positive, got {}", self.mu));
        }
        if self.a1 * self.a1 + self.a2 * self.a2 == 0.0 {
            return invalid("a1 and a2 cannot both vanish");
        }
        if self.b1 * self.b1 + self.b2 * self.b2 == 0.0 {
            return invalid("b1 and b2 cannot both vanish");
        }
        Ok(())
    }

    /// `u(t,1) = 0` (a2 = 0).
    pub fn dirichlet_right(&self) -> bool {
        self.a2 == 0.0
    }

    /// `b1 / b2`; errors when b2 = 0 (Dirichlet disturbance, not handled).
    pub fn left_ratio(&self) -> Result<f64> {
        self.require_robin_left()?;
        Ok(self.b1 / self.b2)
    }

    /// `a1 / a2`, or `None` for the Dirichlet case a2 = 0.
    pub fn right_ratio(&self) -> Option<f64> {
        (self.a2 != 0.0).then(|| self.a1 / self.a2)
    }

    pub fn require_robin_left(&self) -> Result<()> {
        if self.b2 == 0.0 {
            return Err(IssError::UnsupportedBoundary(
                "b2 = 0 puts the disturbance in a Dirichlet condition".into(),
            ));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn validation() {
        assert!(BoundaryParams::new(1.0, 0.0, 0.0, 1.0, 1.0).is_ok());
        assert!(BoundaryParams::new(1.0, 0.0, 0.0, 1.0, 0.0).is_err());
        assert!(BoundaryParams::new(0.0, 0.0, 0.0, 1.0, 1.0).is_err());
        assert!(BoundaryParams::new(1.0, 0.0, 0.0, 0.0, 1.0).is_err());
        assert!(BoundaryParams::new(-1.5, 1.0, -2.0, 1.0, 1.0).is_ok());
    }

    #[test]
    fn ratios() {
        let bc = BoundaryParams::new(1.5, 1.0, 0.5, 2.0, 1.0).unwrap();
        assert_eq!(bc.right_ratio(), Some(1.5));
        assert_eq!(bc.left_ratio().unwrap(), 0.25);
        let d = BoundaryParams::new(1.0, 0.0, 1.0, 0.0, 1.0).unwrap();
        assert!(d.dirichlet_right());
        assert_eq!(d.right_ratio(), None);
        assert!(matches!(
            d.left_ratio(),
            Err(IssError::UnsupportedBoundary(_))
        ));
    }
}
