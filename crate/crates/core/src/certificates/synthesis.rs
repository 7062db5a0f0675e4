use std::cmp::Ordering;
use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};
use crate::models::ReactionForm;
use crate::params::BoundaryParams;

use super::paths::{default_strictness, path_eval, AssumptionPath, PathEval};
use super::{Certificate, CertificateEps, Eps};

const CAP_BOUNDARY: &str = "gain_boundary_cap";
const CAP_DISTRIBUTED: &str = "gain_distributed_cap";

fn default_cap() -> f64 {
    100.0
}
fn default_split_steps() -> usize {
    200
}
fn default_eps_points() -> usize {
    181
}
fn default_eps_min() -> f64 {
    1e-6
}
fn default_eps_max() -> f64 {
    1e3
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SynthesisOptions {
    #[serde(default = "default_cap")]
    pub gain_cap_boundary: f64,
    #[serde(default = "default_cap")]
    pub gain_cap_distributed: f64,
    /// Margin for strict inequalities; `1e-9 mu` when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub strictness_delta: Option<f64>,
    /// The simplex step is `mu / split_steps`.
    #[serde(default = "default_split_steps")]
    pub split_steps: usize,
    #[serde(default = "default_eps_points")]
    pub eps_points: usize,
    #[serde(default = "default_eps_min")]
    pub eps_min: f64,
    #[serde(default = "default_eps_max")]
    pub eps_max: f64,
}

impl Default for SynthesisOptions {
    fn default() -> Self {
        Self {
            gain_cap_boundary: default_cap(),
            gain_cap_distributed: default_cap(),
            strictness_delta: None,
            split_steps: default_split_steps(),
            eps_points: default_eps_points(),
            eps_min: default_eps_min(),
            eps_max: default_eps_max(),
        }
    }
}

impl SynthesisOptions {
    pub fn validate(&self) -> Result<()> {
        for (name, v) in [
            ("gain_cap_boundary", self.gain_cap_boundary),
            ("gain_cap_distributed", self.gain_cap_distributed),
        ] {
            if !(v > 0.0) {
                return invalid(format!("{name} must be positive, got {v}"));
            }
        }
        if let Some(d) = self.strictness_delta {
            if !(d > 0.0) || !d.is_finite() {
                return invalid(format!("strictness_delta must be positive, got {d}"));
            }
        }
        if self.split_steps == 0 {
            return invalid("split_steps must be at least 1");
        }
        if self.eps_points < 2 {
            return invalid("eps_points must be at least 2");
        }
        if !(self.eps_min > 0.0) || !(self.eps_max > self.eps_min) || !self.eps_max.is_finite() {
            return invalid("eps grid needs 0 < eps_min < eps_max < inf");
        }
        Ok(())
    }

    pub fn strictness(&self, mu: f64) -> f64 {
        self.strictness_delta
            .unwrap_or_else(|| default_strictness(mu))
    }
}

/// The constraint that blocks a path, with its largest slack over the grid.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BindingConstraint {
    pub path: AssumptionPath,
    pub constraint: String,
    pub best_slack: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Infeasible {
    pub reason: String,
    /// One entry per candidate path.
    pub binding: Vec<BindingConstraint>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Synthesis {
    Feasible(Certificate),
    Infeasible(Infeasible),
}

impl Synthesis {
    pub fn certificate(&self) -> Option<&Certificate> {
        match self {
            Self::Feasible(c) => Some(c),
            Self::Infeasible(_) => None,
        }
    }

    pub fn into_certificate(self) -> Option<Certificate> {
        match self {
            Self::Feasible(c) => Some(c),
            Self::Infeasible(_) => None,
        }
    }
}

pub(crate) fn gain_boundary(mu: f64, eps1: f64, b2: f64) -> f64 {
    mu / (2.0 * eps1 * b2 * b2)
}

pub(crate) fn gain_distributed(eps2: f64) -> f64 {
    1.0 / (2.0 * eps2)
}

/// `eps_points` values spaced evenly in `log10` over `[eps_min, eps_max]`.
pub fn eps_grid(opts: &SynthesisOptions) -> Vec<f64> {
    let (lo, hi) = (opts.eps_min.log10(), opts.eps_max.log10());
    let n = opts.eps_points;
    (0..n)
        .map(|k| 10f64.powf(lo + k as f64 * (hi - lo) / (n - 1) as f64))
        .collect()
}

/// Grid points of `{s >= 0, sum s = mu}` with step `mu / steps`, in
/// lexicographic order of the integer coordinates.
pub fn simplex_points(dim: usize, steps: usize, mu: f64) -> Vec<Vec<f64>> {
    let w = |k: usize| k as f64 * mu / steps as f64;
    let mut out = Vec::new();
    match dim {
        2 => {
            for i in 0..=steps {
                out.push(vec![w(i), w(steps - i)]);
            }
        }
        3 => {
            for i in 0..=steps {
                for j in 0..=steps - i {
                    out.push(vec![w(i), w(j), w(steps - i - j)]);
                }
            }
        }
        _ => panic!("simplex_points supports 2 or 3 weights"),
    }
    out
}

#[derive(Debug, Clone)]
struct Candidate {
    path: AssumptionPath,
    splits: Vec<f64>,
    eps: Eps,
    c_decay: f64,
    c1: f64,
    c2: f64,
}

/// Larger decay first, then smaller gains, then smaller splits.
fn rank(a: &Candidate, b: &Candidate) -> Ordering {
    let total = |x: f64, y: f64| x.partial_cmp(&y).unwrap_or(Ordering::Equal);
    total(b.c_decay, a.c_decay)
        .then(total(a.c1, b.c1))
        .then(total(a.c2, b.c2))
        .then_with(|| {
            for (x, y) in a.splits.iter().zip(&b.splits) {
                match total(*x, *y) {
                    Ordering::Equal => continue,
                    o => return o,
                }
            }
            Ordering::Equal
        })
}

struct PathOutcome {
    best: Option<Candidate>,
    /// Best slack of every constraint over the grid, in declaration order.
    best_slacks: Vec<(&'static str, f64)>,
}

struct Search<'a> {
    bc: &'a BoundaryParams,
    m1: f64,
    m2: f64,
    opts: &'a SynthesisOptions,
    delta: f64,
    grid: Vec<f64>,
}

impl Search<'_> {
    fn point_eps(&self, ev: &PathEval, eps2: f64) -> Option<Eps> {
        let general = ev.path.form() == ReactionForm::GeneralBound;
        let eps0 = if general {
            Some(*self.grid.iter().find(|&&g| ev.gradient_lhs(g) <= ev.s3)?)
        } else {
            None
        };
        let budget = ev.left_budget();
        let eps1 = *self
            .grid
            .iter()
            .rev()
            .find(|&&g| ev.absorb_lhs(g) <= budget)?;
        Some(Eps {
            eps0,
            eps1: Some(eps1),
            eps2: Some(eps2),
        })
    }

    fn run(&self, path: AssumptionPath) -> Result<PathOutcome> {
        let general = path.form() == ReactionForm::GeneralBound;
        let mu = self.bc.mu;
        let (lo, hi) = (self.grid[0], *self.grid.last().unwrap());
        let corner = |g: f64| Eps {
            eps0: general.then_some(g),
            eps1: Some(g),
            eps2: Some(g),
        };
        let (eps_lo, eps_hi) = (corner(lo), corner(hi));
        let cap1 = self.opts.gain_cap_boundary;
        let cap2 = self.opts.gain_cap_distributed;
        let eps2 = self
            .grid
            .iter()
            .copied()
            .find(|&g| gain_distributed(g) <= cap2);

        let mut best: Option<Candidate> = None;
        let mut best_slacks: Vec<(&'static str, f64)> = Vec::new();
        for splits in simplex_points(path.split_len(), self.opts.split_steps, mu) {
            let ev = path_eval(path, self.bc, self.m1, self.m2, &splits)?;
            let at_lo = ev.constraints(&eps_lo);
            let at_hi = ev.constraints(&eps_hi);
            if best_slacks.is_empty() {
                best_slacks = at_lo.iter().map(|c| (c.name, f64::NEG_INFINITY)).collect();
            }
            for ((slot, a), b) in best_slacks.iter_mut().zip(&at_lo).zip(&at_hi) {
                slot.1 = slot.1.max(a.slack(self.delta)).max(b.slack(self.delta));
            }

            let Some(eps2) = eps2 else { continue };
            let Some(eps) = self.point_eps(&ev, eps2) else {
                continue;
            };
            let eps1 = eps.eps1.unwrap();
            let c1 = gain_boundary(mu, eps1, self.bc.b2);
            if c1 > cap1 {
                continue;
            }
            if ev
                .constraints(&eps)
                .iter()
                .any(|c| c.slack(self.delta) < 0.0)
            {
                continue;
            }
            let cand = Candidate {
                path,
                c_decay: ev.decay_rate(eps.eps0, eps2),
                c1,
                c2: gain_distributed(eps2),
                splits,
                eps,
            };
            if best
                .as_ref()
                .is_none_or(|b| rank(&cand, b) == Ordering::Less)
            {
                best = Some(cand);
            }
        }
        best_slacks.push((CAP_BOUNDARY, cap1 - gain_boundary(mu, hi, self.bc.b2)));
        best_slacks.push((CAP_DISTRIBUTED, cap2 - gain_distributed(hi)));
        Ok(PathOutcome { best, best_slacks })
    }

    fn certificate(&self, c: Candidate) -> Result<Certificate> {
        let ev = path_eval(c.path, self.bc, self.m1, self.m2, &c.splits)?;
        let mut slacks: BTreeMap<String, f64> = ev
            .constraints(&c.eps)
            .iter()
            .map(|k| (k.name.to_string(), k.slack(self.delta)))
            .collect();
        slacks.insert(CAP_BOUNDARY.into(), self.opts.gain_cap_boundary - c.c1);
        slacks.insert(
            CAP_DISTRIBUTED.into(),
            self.opts.gain_cap_distributed - c.c2,
        );
        Ok(Certificate {
            path: c.path,
            splits: c.splits,
            eps: CertificateEps {
                eps0: c.eps.eps0,
                eps1: c.eps.eps1.unwrap(),
                eps2: c.eps.eps2.unwrap(),
                eps3: c.eps.eps0,
            },
            c_decay: c.c_decay,
            c_gain_boundary: c.c1,
            c_gain_distributed: c.c2,
            slacks,
            options: self.opts.clone(),
        })
    }
}

/// Epsilon conditions and gain caps only matter once the assumption
/// inequalities themselves can be met.
fn secondary(name: &str) -> bool {
    matches!(
        name,
        "boundary_absorb" | "decay_margin" | CAP_BOUNDARY | CAP_DISTRIBUTED
    )
}

/// The individually infeasible assumption inequality with the smallest best
/// slack; failing that the same among the secondary conditions, and the
/// smallest best slack overall when each one can be met on its own.
fn binding(path: AssumptionPath, best_slacks: &[(&'static str, f64)]) -> BindingConstraint {
    let min = |keep: &dyn Fn(&str, f64) -> bool| {
        best_slacks.iter().filter(|(n, s)| keep(n, *s)).fold(
            None::<(&'static str, f64)>,
            |acc, &(n, s)| match acc {
                Some((_, b)) if b <= s => acc,
                _ => Some((n, s)),
            },
        )
    };
    let (name, slack) = min(&|n, s| s < 0.0 && !secondary(n))
        .or_else(|| min(&|_, s| s < 0.0))
        .or_else(|| min(&|_, _| true))
        .expect("every path has constraints");
    BindingConstraint {
        path,
        constraint: name.to_string(),
        best_slack: slack,
    }
}

/// Grid search over split weights and epsilons for the certificate with the
/// largest decay rate whose gains respect the caps in `opts`.
pub fn synthesize_certificate(
    bc: &BoundaryParams,
    m1: f64,
    m2: f64,
    form: ReactionForm,
    opts: &SynthesisOptions,
) -> Result<Synthesis> {
    bc.validate()?;
    bc.require_robin_left()?;
    opts.validate()?;
    let search = Search {
        bc,
        m1,
        m2,
        opts,
        delta: opts.strictness(bc.mu),
        grid: eps_grid(opts),
    };
    let mut winner: Option<Candidate> = None;
    let mut blocked = Vec::new();
    for &path in AssumptionPath::candidates(bc.dirichlet_right(), form) {
        let out = search.run(path)?;
        match out.best {
            Some(c) => {
                if winner
                    .as_ref()
                    .is_none_or(|w| rank(&c, w) == Ordering::Less)
                {
                    winner = Some(c);
                }
            }
            None => blocked.push(binding(path, &out.best_slacks)),
        }
    }
    if let Some(c) = winner {
        return Ok(Synthesis::Feasible(search.certificate(c)?));
    }
    let first = &blocked[0];
    let reason = format!(
        "no grid point satisfies path {}: '{}' is binding (best slack {:.6e})",
        first.path, first.constraint, first.best_slack
    );
    Ok(Synthesis::Infeasible(Infeasible {
        reason,
        binding: blocked,
    }))
}
