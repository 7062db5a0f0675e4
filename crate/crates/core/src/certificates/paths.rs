use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};
use crate::models::ReactionForm;
use crate::params::BoundaryParams;

use super::Eps;

/// Tolerance on `sum(splits) = mu`, relative to `max(1, mu)`.
pub const SUM_TOL: f64 = 1e-12;

/// Default margin for strict inequalities.
pub fn default_strictness(mu: f64) -> f64 {
    1e-9 * mu
}

/// Which assumption set the certificate follows.
///
/// | path   | a2     | reaction form | splits         |
/// |--------|--------|---------------|----------------|
/// | `A1_1` | `!= 0` | general bound | `A'1 A'2 A'3`  |
/// | `A1_2` | `!= 0` | general bound | `B'1 B'2 B'3`  |
/// | `A2_1` | `= 0`  | general bound | `A'1 A'2 A'3`  |
/// | `A3a`  | `!= 0` | linear form   | `A'1 A'2`      |
/// | `A3b`  | `!= 0` | linear form   | `B'1 B'2`      |
/// | `A3c`  | `= 0`  | linear form   | `A'1 A'2`      |
#[allow(non_camel_case_types)]
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum AssumptionPath {
    A1_1,
    A1_2,
    A2_1,
    A3a,
    A3b,
    A3c,
}

impl AssumptionPath {
    pub const ALL: [AssumptionPath; 6] = [
        Self::A1_1,
        Self::A1_2,
        Self::A2_1,
        Self::A3a,
        Self::A3b,
        Self::A3c,
    ];

    pub fn form(self) -> ReactionForm {
        match self {
            Self::A1_1 | Self::A1_2 | Self::A2_1 => ReactionForm::GeneralBound,
            Self::A3a | Self::A3b | Self::A3c => ReactionForm::LinearForm,
        }
    }

    pub fn requires_robin_right(self) -> bool {
        !matches!(self, Self::A2_1 | Self::A3c)
    }

    pub fn split_len(self) -> usize {
        match self.form() {
            ReactionForm::GeneralBound => 3,
            ReactionForm::LinearForm => 2,
        }
    }

    /// `B'` paths put the weight on `||u||^2 - 2 u^2(0)` instead of
    /// `||u||^2 - 2 u^2(1)`.
    fn b_variant(self) -> bool {
        matches!(self, Self::A1_2 | Self::A3b)
    }

    /// Candidate paths for a boundary/form combination, in preference order.
    pub fn candidates(dirichlet_right: bool, form: ReactionForm) -> &'static [AssumptionPath] {
        match (dirichlet_right, form) {
            (false, ReactionForm::GeneralBound) => &[Self::A1_1, Self::A1_2],
            (true, ReactionForm::GeneralBound) => &[Self::A2_1],
            (false, ReactionForm::LinearForm) => &[Self::A3a, Self::A3b],
            (true, ReactionForm::LinearForm) => &[Self::A3c],
        }
    }
}

impl fmt::Display for AssumptionPath {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Self::A1_1 => "A1_1",
            Self::A1_2 => "A1_2",
            Self::A2_1 => "A2_1",
            Self::A3a => "A3a",
            Self::A3b => "A3b",
            Self::A3c => "A3c",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Slack {
    pub name: &'static str,
    /// `rhs - lhs` for `<=`, `rhs - lhs - strictness_delta` for `<`.
    pub slack: f64,
    pub strict: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AssumptionReport {
    pub path: AssumptionPath,
    pub pass: bool,
    pub slacks: Vec<Slack>,
}

impl AssumptionReport {
    pub fn slack(&self, name: &str) -> Option<f64> {
        self.slacks.iter().find(|s| s.name == name).map(|s| s.slack)
    }

    pub fn first_failure(&self) -> Option<&Slack> {
        self.slacks.iter().find(|s| !(s.slack >= 0.0))
    }
}

/// One inequality `lhs <= rhs` (or `<` when strict).
#[derive(Debug, Clone, Copy)]
pub(crate) struct Constraint {
    pub name: &'static str,
    pub lhs: f64,
    pub rhs: f64,
    pub strict: bool,
}

impl Constraint {
    pub fn slack(&self, delta: f64) -> f64 {
        let s = self.rhs - self.lhs;
        if self.strict {
            s - delta
        } else {
            s
        }
    }
}

/// Formulas of one path at fixed boundary data, growth constants and splits.
#[derive(Debug, Clone, Copy)]
pub(crate) struct PathEval {
    pub path: AssumptionPath,
    pub mu: f64,
    /// `b1 / b2`
    pub left: f64,
    /// `a1 / a2`; unused on the Dirichlet paths.
    pub right: f64,
    pub m1: f64,
    pub m2: f64,
    pub s1: f64,
    pub s2: f64,
    /// Gradient weight `A'3` / `B'3`; zero on the linear-form paths.
    pub s3: f64,
}

impl PathEval {
    /// `A'2 - 2 A'1` or `B'1 - 2 B'2`.
    pub fn decay_budget(&self) -> f64 {
        if self.path.b_variant() {
            self.s1 - 2.0 * self.s2
        } else {
            self.s2 - 2.0 * self.s1
        }
    }

    /// Right-hand side of the boundary absorption at x = 0: `A'1` or `-2 B'1`.
    pub fn left_budget(&self) -> f64 {
        if self.path.b_variant() {
            -2.0 * self.s1
        } else {
            self.s1
        }
    }

    fn general(&self) -> bool {
        self.path.form() == ReactionForm::GeneralBound
    }

    /// Coefficient of `u^2(0)` once `eps1` has been spent on `d1 u(0)`.
    pub fn absorb_lhs(&self, eps1: f64) -> f64 {
        if self.general() {
            (self.left + eps1 / 2.0) * self.mu
        } else {
            self.left * self.mu - self.m2 / 2.0 + eps1 * self.mu / 2.0
        }
    }

    /// `eps2/2 + M1 + eps3 M2/2` (general) or `eps2/2 + M1` (linear).
    pub fn decay_loss(&self, eps0: Option<f64>, eps2: f64) -> f64 {
        match (self.general(), eps0) {
            (true, Some(e0)) => eps2 / 2.0 + self.m1 + e0 * self.m2 / 2.0,
            _ => eps2 / 2.0 + self.m1,
        }
    }

    pub fn decay_rate(&self, eps0: Option<f64>, eps2: f64) -> f64 {
        self.decay_budget() - self.decay_loss(eps0, eps2)
    }

    pub fn gradient_lhs(&self, eps0: f64) -> f64 {
        self.m2 / (2.0 * eps0)
    }

    /// Path inequalities in declaration order. The epsilon-dependent
    /// conditions appear only when that epsilon is given.
    pub fn constraints(&self, eps: &Eps) -> Vec<Constraint> {
        use AssumptionPath::*;
        let c = |name, lhs, rhs, strict| Constraint {
            name,
            lhs,
            rhs,
            strict,
        };
        let mu = self.mu;
        let mut out = Vec::with_capacity(8);
        match self.path {
            A1_1 => {
                out.push(c("boundary_right", 2.0 * self.s2, self.right * mu, false));
                out.push(c("boundary_left", self.left * mu, self.s1, true));
            }
            A1_2 => {
                out.push(c("boundary_right", -self.s2, self.right * mu, false));
                out.push(c("boundary_left", self.left * mu, -2.0 * self.s1, true));
            }
            A2_1 => {
                out.push(c("left_ratio", self.left, 0.5, true));
                out.push(c("boundary_left", self.left * mu, self.s1, true));
            }
            A3a => {
                out.push(c(
                    "boundary_right",
                    -self.right * mu + self.m2 / 2.0,
                    -2.0 * self.s2,
                    false,
                ));
                out.push(c(
                    "boundary_left",
                    self.left * mu - self.m2 / 2.0,
                    self.s1,
                    true,
                ));
            }
            A3b => {
                out.push(c(
                    "boundary_right",
                    -self.right * mu + self.m2 / 2.0,
                    self.s2,
                    false,
                ));
                out.push(c(
                    "boundary_left",
                    self.left * mu - self.m2 / 2.0,
                    -2.0 * self.s1,
                    true,
                ));
            }
            A3c => {
                out.push(c(
                    "boundary_left",
                    self.left * mu - self.m2 / 2.0,
                    self.s1,
                    true,
                ));
            }
        }
        if self.general() {
            let e0 = eps.eps0.unwrap_or(f64::NAN);
            out.push(c(
                "decay",
                self.m1 + e0 * self.m2 / 2.0,
                self.decay_budget(),
                true,
            ));
            out.push(c("gradient", self.gradient_lhs(e0), self.s3, false));
        } else {
            out.push(c("decay", self.m1, self.decay_budget(), true));
        }
        if let Some(e1) = eps.eps1 {
            out.push(c(
                "boundary_absorb",
                self.absorb_lhs(e1),
                self.left_budget(),
                false,
            ));
        }
        if let Some(e2) = eps.eps2 {
            out.push(c(
                "decay_margin",
                self.decay_loss(eps.eps0, e2),
                self.decay_budget(),
                true,
            ));
        }
        out
    }
}

pub(crate) fn decay_rate(
    path: AssumptionPath,
    splits: &[f64],
    m1: f64,
    m2: f64,
    eps0: Option<f64>,
    eps2: f64,
) -> f64 {
    let ev = PathEval {
        path,
        mu: f64::NAN,
        left: f64::NAN,
        right: f64::NAN,
        m1,
        m2,
        s1: splits[0],
        s2: splits[1],
        s3: splits.get(2).copied().unwrap_or(0.0),
    };
    ev.decay_rate(eps0, eps2)
}

pub(crate) fn path_eval(
    path: AssumptionPath,
    bc: &BoundaryParams,
    m1: f64,
    m2: f64,
    splits: &[f64],
) -> Result<PathEval> {
    bc.validate()?;
    let left = bc.left_ratio()?;
    let right = match (path.requires_robin_right(), bc.right_ratio()) {
        (true, Some(r)) => r,
        (true, None) => return invalid(format!("path {path} needs a2 != 0")),
        (false, None) => f64::NAN,
        (false, Some(_)) => return invalid(format!("path {path} needs a2 = 0")),
    };
    if !m1.is_finite() || !m2.is_finite() {
        return invalid("growth coefficients must be finite");
    }
    if path.form() == ReactionForm::GeneralBound && m2 < 0.0 {
        return invalid(format!("path {path} needs M2 >= 0"));
    }
    if splits.len() != path.split_len() {
        return invalid(format!(
            "path {path} takes {} split weights, got {}",
            path.split_len(),
            splits.len()
        ));
    }
    if splits.iter().any(|s| !(*s >= 0.0) || !s.is_finite()) {
        return invalid("split weights must be finite and nonnegative");
    }
    let sum: f64 = splits.iter().sum();
    if (sum - bc.mu).abs() > SUM_TOL * bc.mu.max(1.0) {
        return invalid(format!(
            "split weights sum to {sum}, expected mu = {}",
            bc.mu
        ));
    }
    Ok(PathEval {
        path,
        mu: bc.mu,
        left,
        right,
        m1,
        m2,
        s1: splits[0],
        s2: splits[1],
        s3: splits.get(2).copied().unwrap_or(0.0),
    })
}

/// [`check_assumption_with`] using the default strictness margin `1e-9 mu`.
pub fn check_assumption(
    path: AssumptionPath,
    bc: &BoundaryParams,
    m1: f64,
    m2: f64,
    splits: &[f64],
    eps: &Eps,
) -> Result<AssumptionReport> {
    check_assumption_with(path, bc, m1, m2, splits, eps, default_strictness(bc.mu))
}

/// Evaluates every inequality of `path` at the given split weights and
/// epsilons.
pub fn check_assumption_with(
    path: AssumptionPath,
    bc: &BoundaryParams,
    m1: f64,
    m2: f64,
    splits: &[f64],
    eps: &Eps,
    strictness_delta: f64,
) -> Result<AssumptionReport> {
    let ev = path_eval(path, bc, m1, m2, splits)?;
    eps.validate()?;
    match (path.form(), eps.eps0) {
        (ReactionForm::GeneralBound, None) => {
            return invalid(format!("path {path} needs eps0"));
        }
        (ReactionForm::LinearForm, Some(_)) => {
            return invalid(format!("path {path} takes no eps0"));
        }
        _ => {}
    }
    if !(strictness_delta > 0.0) {
        return invalid("strictness_delta must be positive");
    }
    let slacks: Vec<Slack> = ev
        .constraints(eps)
        .iter()
        .map(|c| Slack {
            name: c.name,
            slack: c.slack(strictness_delta),
            strict: c.strict,
        })
        .collect();
    let pass = slacks.iter().all(|s| s.slack >= 0.0);
    Ok(AssumptionReport { path, pass, slacks })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::error::IssError;

    fn bc(a1: f64, a2: f64, b1: f64, b2: f64, mu: f64) -> BoundaryParams {
        BoundaryParams::new(a1, a2, b1, b2, mu).unwrap()
    }

    #[test]
    fn ginzburg_landau_split() {
        let b = bc(1.0, 0.0, 0.0, 1.0, 1.0);
        let r = check_assumption(
            AssumptionPath::A2_1,
            &b,
            -1.0,
            0.0,
            &[1.0 / 3.0, 2.0 / 3.0, 0.0],
            &Eps::general(1.0),
        )
        .unwrap();
        assert!(r.pass, "{r:?}");
        assert!((r.slack("decay").unwrap() - (1.0 - 1e-9)).abs() < 1e-15);
        assert_eq!(r.slack("gradient").unwrap(), 0.0);
    }

    #[test]
    fn generalized_split() {
        let b = bc(1.0, 0.0, 0.0, 1.0, 1.0);
        let r = check_assumption(
            AssumptionPath::A2_1,
            &b,
            -2.0,
            1.0,
            &[0.25, 0.5, 0.25],
            &Eps::general(2.0),
        )
        .unwrap();
        assert!(r.pass, "{r:?}");
        assert_eq!(r.slack("gradient").unwrap(), 0.0);
    }

    #[test]
    fn transport_split() {
        let b = bc(1.5, 1.0, 0.0, 1.0, 1.0);
        let r = check_assumption(
            AssumptionPath::A3a,
            &b,
            -1.0,
            0.0,
            &[1.0 / 3.0, 2.0 / 3.0],
            &Eps::none(),
        )
        .unwrap();
        assert!(r.pass, "{r:?}");
        // -1.5 <= -4/3
        assert!((r.slack("boundary_right").unwrap() - (1.5 - 4.0 / 3.0)).abs() < 1e-15);
    }

    #[test]
    fn large_m1_is_infeasible() {
        let b = bc(2.0, 1.0, 0.0, 1.0, 1.0);
        for splits in [[0.0, 1.0, 0.0], [0.1, 0.8, 0.1], [0.0, 0.0, 1.0]] {
            let r = check_assumption(
                AssumptionPath::A1_1,
                &b,
                10.0,
                0.0,
                &splits,
                &Eps::general(1.0),
            )
            .unwrap();
            assert!(!r.pass);
            assert!(r.slack("decay").unwrap() < 0.0);
        }
    }

    #[test]
    fn gating() {
        let dir = bc(1.0, 0.0, 0.0, 1.0, 1.0);
        let rob = bc(1.0, 1.0, 0.0, 1.0, 1.0);
        let s3 = [0.2, 0.6, 0.2];
        let s2 = [0.3, 0.7];
        let e = Eps::general(1.0);
        for p in [AssumptionPath::A1_1, AssumptionPath::A1_2] {
            assert!(check_assumption(p, &dir, 0.0, 0.0, &s3, &e).is_err());
        }
        for p in [AssumptionPath::A3a, AssumptionPath::A3b] {
            assert!(check_assumption(p, &dir, 0.0, 0.0, &s2, &Eps::none()).is_err());
        }
        assert!(check_assumption(AssumptionPath::A2_1, &rob, 0.0, 0.0, &s3, &e).is_err());
        assert!(check_assumption(AssumptionPath::A3c, &rob, 0.0, 0.0, &s2, &Eps::none()).is_err());
        // b2 = 0
        let dl = BoundaryParams::new(1.0, 1.0, 1.0, 0.0, 1.0).unwrap();
        assert!(matches!(
            check_assumption(AssumptionPath::A1_1, &dl, 0.0, 0.0, &s3, &e),
            Err(IssError::UnsupportedBoundary(_))
        ));
    }

    #[test]
    fn shape_mismatch() {
        let rob = bc(1.0, 1.0, 0.0, 1.0, 1.0);
        let e = Eps::general(1.0);
        assert!(check_assumption(AssumptionPath::A1_1, &rob, 0.0, 0.0, &[0.5, 0.5], &e).is_err());
        assert!(check_assumption(AssumptionPath::A3a, &rob, 0.0, 0.0, &[0.5, 0.5], &e).is_err());
        assert!(check_assumption(
            AssumptionPath::A1_1,
            &rob,
            0.0,
            0.0,
            &[0.2, 0.6, 0.2],
            &Eps::none()
        )
        .is_err());
        assert!(check_assumption(
            AssumptionPath::A3a,
            &rob,
            0.0,
            0.0,
            &[0.5, 0.6],
            &Eps::none()
        )
        .is_err());
        assert!(check_assumption(
            AssumptionPath::A3a,
            &rob,
            0.0,
            0.0,
            &[-0.1, 1.1],
            &Eps::none()
        )
        .is_err());
    }

    #[test]
    fn eps_conditions_are_added() {
        let b = bc(1.5, 1.0, 0.0, 1.0, 1.0);
        let eps = Eps {
            eps0: None,
            eps1: Some(0.5),
            eps2: Some(0.01),
        };
        let r = check_assumption(AssumptionPath::A3a, &b, -1.0, 0.0, &[0.25, 0.75], &eps).unwrap();
        assert!(r.pass);
        assert_eq!(r.slack("boundary_absorb").unwrap(), 0.0);
        assert!((r.slack("decay_margin").unwrap() - (1.25 - 0.005 - 1e-9)).abs() < 1e-14);
        let eps = Eps {
            eps1: Some(0.6),
            ..eps
        };
        let r = check_assumption(AssumptionPath::A3a, &b, -1.0, 0.0, &[0.25, 0.75], &eps).unwrap();
        assert!(!r.pass);
        assert_eq!(r.first_failure().unwrap().name, "boundary_absorb");
    }

    #[test]
    fn b_variant_formulas() {
        // a1/a2 >= -1/3, b1/b2 < -4/3 with B' = (2/3, 1/3)
        let b = bc(-1.0 / 3.0, 1.0, -1.5, 1.0, 1.0);
        let r = check_assumption(
            AssumptionPath::A3b,
            &b,
            -1.0,
            0.0,
            &[2.0 / 3.0, 1.0 / 3.0],
            &Eps::none(),
        )
        .unwrap();
        assert!(r.pass, "{r:?}");
        let r = check_assumption(
            AssumptionPath::A1_2,
            &b,
            -1.0,
            0.0,
            &[2.0 / 3.0, 1.0 / 3.0, 0.0],
            &Eps::general(1.0),
        )
        .unwrap();
        assert!(r.pass, "{r:?}");
        assert!((r.slack("boundary_left").unwrap() - (-4.0 / 3.0 + 1.5 - 1e-9)).abs() < 1e-14);
    }
}
