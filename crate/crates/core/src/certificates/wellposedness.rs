use serde::Serialize;

use crate::params::BoundaryParams;

/// Resolution of the 1-D split scan: `A1 = i / WELLPOSEDNESS_GRID`.
pub const WELLPOSEDNESS_GRID: usize = 1000;

/// First and last feasible split on the scan grid, as `(A1, A2)` or `(B1, B2)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SplitRange {
    pub first: [f64; 2],
    pub last: [f64; 2],
}

/// Standing conditions for existence and uniqueness of solutions.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WellPosednessReport {
    /// `(a1 + a2) b1 != a1 b2`
    pub neq_condition: bool,
    /// `a1/a2 >= -1/2`, checked when `a2 != 0` and `b2 = 0`.
    pub sign_condition_right: Option<bool>,
    /// `b1/b2 <= 1/2`, checked when `a2 = 0` and `b2 != 0`.
    pub sign_condition_left: Option<bool>,
    /// Checked when `a2 b2 != 0`; `None` inside means no grid point works.
    pub split_plus_ab1: Option<Option<SplitRange>>,
    pub split_plus_ab2: Option<Option<SplitRange>>,
}

impl WellPosednessReport {
    /// All applicable conditions hold.
    pub fn pass(&self) -> bool {
        let splits = match (self.split_plus_ab1, self.split_plus_ab2) {
            (Some(a), Some(b)) => a.is_some() || b.is_some(),
            _ => true,
        };
        self.neq_condition
            && self.sign_condition_right.unwrap_or(true)
            && self.sign_condition_left.unwrap_or(true)
            && splits
    }
}

/// Slacks of `a1/a2 >= 2 A2`, `b1/b2 <= A1`, `A2 - 2 A1 >= 0`.
pub fn plus_ab1_slacks(bc: &BoundaryParams, a1: f64, a2: f64) -> [f64; 3] {
    let (ra, rb) = (bc.a1 / bc.a2, bc.b1 / bc.b2);
    [ra - 2.0 * a2, a1 - rb, a2 - 2.0 * a1]
}

/// Slacks of `a1/a2 >= -B2`, `b1/b2 <= -2 B1`, `B1 - 2 B2 >= 0`.
pub fn plus_ab2_slacks(bc: &BoundaryParams, b1: f64, b2: f64) -> [f64; 3] {
    let (ra, rb) = (bc.a1 / bc.a2, bc.b1 / bc.b2);
    [ra + b2, -2.0 * b1 - rb, b1 - 2.0 * b2]
}

fn scan(slacks: impl Fn(f64, f64) -> [f64; 3]) -> Option<SplitRange> {
    let n = WELLPOSEDNESS_GRID;
    let mut found: Option<SplitRange> = None;
    for i in 0..=n {
        let s1 = i as f64 / n as f64;
        let s2 = (n - i) as f64 / n as f64;
        if slacks(s1, s2).iter().all(|s| *s >= 0.0) {
            let p = [s1, s2];
            match &mut found {
                Some(r) => r.last = p,
                None => found = Some(SplitRange { first: p, last: p }),
            }
        }
    }
    found
}

pub fn check_wellposedness_params(bc: &BoundaryParams) -> WellPosednessReport {
    let neq_condition = (bc.a1 + bc.a2) * bc.b1 != bc.a1 * bc.b2;
    let robin_right = bc.a2 != 0.0;
    let robin_left = bc.b2 != 0.0;
    let sign_condition_right = (robin_right && !robin_left).then(|| bc.a1 / bc.a2 >= -0.5);
    let sign_condition_left = (!robin_right && robin_left).then(|| bc.b1 / bc.b2 <= 0.5);
    let both = robin_right && robin_left;
    WellPosednessReport {
        neq_condition,
        sign_condition_right,
        sign_condition_left,
        split_plus_ab1: both.then(|| scan(|x, y| plus_ab1_slacks(bc, x, y))),
        split_plus_ab2: both.then(|| scan(|x, y| plus_ab2_slacks(bc, x, y))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bc(a1: f64, a2: f64, b1: f64, b2: f64) -> BoundaryParams {
        BoundaryParams::new(a1, a2, b1, b2, 1.0).unwrap()
    }

    #[test]
    fn transport_boundary_has_ab1_split() {
        let b = bc(1.5, 1.0, 0.0, 1.0);
        let r = check_wellposedness_params(&b);
        assert!(r.neq_condition);
        let range = r.split_plus_ab1.unwrap().unwrap();
        // A2 <= 3/4 and A2 >= 2 A1 bracket A1 in [1/4, 1/3].
        assert_eq!(range.first, [0.25, 0.75]);
        assert_eq!(range.last, [0.333, 0.667]);
        let s = plus_ab1_slacks(&b, 1.0 / 3.0, 2.0 / 3.0);
        assert!(s.iter().all(|v| *v >= 0.0), "{s:?}");
        assert_eq!(r.split_plus_ab2, Some(None));
        assert!(r.pass());
        for p in [range.first, range.last] {
            assert!(plus_ab1_slacks(&b, p[0], p[1]).iter().all(|v| *v >= 0.0));
        }
    }

    #[test]
    fn ab2_example() {
        let b = bc(0.0, 1.0, -1.5, 1.0);
        let r = check_wellposedness_params(&b);
        // B1 in [2/3, 3/4]
        let range = r.split_plus_ab2.unwrap().unwrap();
        assert_eq!(range.first[0], 0.667);
        assert_eq!(range.last[0], 0.75);
        assert_eq!(r.split_plus_ab1, Some(None));
    }

    #[test]
    fn dirichlet_sign_condition() {
        let r = check_wellposedness_params(&bc(1.0, 0.0, 0.0, 1.0));
        assert_eq!(r.sign_condition_left, Some(true));
        assert_eq!(r.sign_condition_right, None);
        assert_eq!(r.split_plus_ab1, None);
        assert!(r.pass());
        let r = check_wellposedness_params(&bc(1.0, 0.0, 0.6, 1.0));
        assert_eq!(r.sign_condition_left, Some(false));
        let r = check_wellposedness_params(&bc(-1.0, 1.0, 1.0, 0.0));
        assert_eq!(r.sign_condition_right, Some(false));
    }

    #[test]
    fn degenerate_neq() {
        let r = check_wellposedness_params(&bc(1.0, 1.0, 1.0, 2.0));
        assert!(!r.neq_condition);
        assert!(!r.pass());
    }
}
