//! Boundary homogenization: normalizing the Robin data at x = 0 and the cubic
//! lifting `g` that carries the boundary disturbance into the interior.

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};
use crate::params::BoundaryParams;
use crate::signal::DisturbanceSignal;

const NORMALIZED_TOL: f64 = 1e-12;

/// `g(x) = b1 + b2 x + c1 x^2 + c2 x^3` with
/// `a1 g(1) + a2 g'(1) = 0` and `b1 g(0) + b2 g'(0) = b1^2 + b2^2 = 1`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LiftingPolynomial {
    pub b1: f64,
    pub b2: f64,
    pub c1: f64,
    pub c2: f64,
    /// Sup-norm bounds of `g`, `g'`, `g''` on [0, 1].
    pub g0: f64,
    pub g1: f64,
    pub g2: f64,
}

impl LiftingPolynomial {
    pub fn value(&self, x: f64) -> f64 {
        self.b1 + x * (self.b2 + x * (self.c1 + x * self.c2))
    }

    pub fn derivative(&self, x: f64) -> f64 {
        self.b2 + x * (2.0 * self.c1 + 3.0 * x * self.c2)
    }

    pub fn second_derivative(&self, x: f64) -> f64 {
        2.0 * self.c1 + 6.0 * self.c2 * x
    }

    /// Residuals of the two boundary identities for `bc`.
    pub fn residuals(&self, bc: &BoundaryParams) -> (f64, f64) {
        let right = bc.a1 * self.value(1.0) + bc.a2 * self.derivative(1.0);
        let left = bc.b1 * self.value(0.0) + bc.b2 * self.derivative(0.0) - 1.0;
        (right, left)
    }
}

/// Solves `(a1 + 2 a2) c1 + (a1 + 3 a2) c2 = -a1 b1 - (a1 + a2) b2`.
///
/// The quadratic lifting (`c2 = 0`) is used unless its pivot `a1 + 2 a2` is
/// small against `a1 + 3 a2`, in which case `c1 = 0`.
pub fn lifting_polynomial(bc: &BoundaryParams) -> Result<LiftingPolynomial> {
    let (a1, a2, b1, b2) = (bc.a1, bc.a2, bc.b1, bc.b2);
    if ((b1 * b1 + b2 * b2) - 1.0).abs() > NORMALIZED_TOL {
        return invalid("lifting needs b1^2 + b2^2 = 1; call normalize_robin first");
    }
    if a1 * a1 + a2 * a2 == 0.0 {
        return invalid("a1 and a2 cannot both vanish");
    }
    let rhs = -a1 * b1 - (a1 + a2) * b2;
    let quad = a1 + 2.0 * a2;
    let cubic = a1 + 3.0 * a2;
    let (c1, c2) = if quad.abs() >= 0.5 * cubic.abs() {
        (rhs / quad, 0.0)
    } else {
        (0.0, rhs / cubic)
    };
    let g = LiftingPolynomial {
        b1,
        b2,
        c1,
        c2,
        g0: b1.abs() + b2.abs() + c1.abs() + c2.abs(),
        g1: b2.abs() + 2.0 * c1.abs() + 3.0 * c2.abs(),
        g2: 2.0 * c1.abs() + 6.0 * c2.abs(),
    };
    let (right, left) = g.residuals(bc);
    let scale = 1.0 + a1.abs() + a2.abs();
    if right.abs() > 1e-12 * scale || left.abs() > 1e-12 {
        return Err(crate::error::IssError::NumericalFailure(format!(
            "lifting residuals too large: {right:e}, {left:e}"
        )));
    }
    Ok(g)
}

#[derive(Debug, Clone, PartialEq)]
pub struct NormalizedRobin {
    pub bc: BoundaryParams,
    /// `1 / sqrt(b1^2 + b2^2)`, applied to `d1`.
    pub scale: f64,
    pub d1: DisturbanceSignal,
}

/// Rescales `b1 u(0) + b2 u_x(0) = d1` so that `b1^2 + b2^2 = 1`.
pub fn normalize_robin(bc: &BoundaryParams, d1: &DisturbanceSignal) -> Result<NormalizedRobin> {
    let norm = (bc.b1 * bc.b1 + bc.b2 * bc.b2).sqrt();
    if !(norm > 0.0) {
        return invalid("b1 and b2 cannot both vanish");
    }
    let scale = 1.0 / norm;
    let out = BoundaryParams {
        b1: bc.b1 / norm,
        b2: bc.b2 / norm,
        ..*bc
    };
    Ok(NormalizedRobin {
        bc: out,
        scale,
        d1: if scale == 1.0 {
            d1.clone()
        } else {
            d1.scaled(scale)
        },
    })
}
