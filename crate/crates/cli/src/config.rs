//! Run configuration: a TOML document with named sections. Unknown keys are
//! rejected everywhere.
//!
//! ```toml
//! [model]
//! name = "transport"
//! m = 2.0
//! n = 0.0
//! a = 1.5
//! b = 0.0
//!
//! [bc]
//! mu = 1.0
//!
//! [disturbances]
//! d1 = { kind = "sinusoid", amp = 0.1, freq = 2.0 }
//!
//! [initial]
//! kind = "polynomial"
//! coeffs = [1.0]
//!
//! [numerics]
//! n_cells = 256
//! dt = 1e-4
//! t_end = 10.0
//! output_stride = 10
//!
//! [certificate]
//! gain_cap_boundary = 100.0
//! gain_cap_distributed = 100.0
//!
//! [validation]
//! rel_tol = 0.01
//! abs_tol = 1e-6
//! ```

use std::path::{Path, PathBuf};

use anyhow::{anyhow, bail, Context, Result};
use serde::Deserialize;

use pde_iss_core::certificates::SynthesisOptions;
use pde_iss_core::solver::default_dt;
use pde_iss_core::validation::ManufacturedSolution;
use pde_iss_core::{
    build_grid, make_generalized_gl, make_ginzburg_landau, make_transport, BoundForm,
    BoundaryParams, DistributedDisturbance, DisturbanceSignal, InitialCondition, ReactionForm,
    ReactionTerm, Scenario, SpatialShape,
};

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub model: ModelConfig,
    pub bc: BcConfig,
    #[serde(default)]
    pub disturbances: DisturbanceConfig,
    #[serde(default)]
    pub initial: InitialCondition,
    #[serde(default)]
    pub numerics: NumericsConfig,
    pub certificate: Option<CertificateConfig>,
    #[serde(default)]
    pub validation: ValidationConfig,
    pub convergence: Option<ConvergenceConfig>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(tag = "name", rename_all = "snake_case", deny_unknown_fields)]
pub enum ModelConfig {
    /// `f = alpha u - beta u^3`
    GinzburgLandau { alpha: f64, beta: f64 },
    /// `f = alpha u - beta u^3 - gamma_c u^5 + lambda u_x`
    GeneralizedGl {
        alpha: f64,
        beta: f64,
        gamma_c: f64,
        lambda: f64,
    },
    /// `u_t = mu u_xx - m u_x - n u`, simulated in the drift-free variable
    /// `w = exp(-m x / (2 mu)) u`. `[initial]` and the trace refer to `w`.
    Transport { m: f64, n: f64, a: f64, b: f64 },
    /// `f = d2(t) phi(x) + m1 u + m2 u_x`
    LinearForm { m1: f64, m2: f64 },
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BcConfig {
    pub a1: Option<f64>,
    pub a2: Option<f64>,
    pub b1: Option<f64>,
    pub b2: Option<f64>,
    pub mu: f64,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DisturbanceConfig {
    #[serde(default)]
    pub d1: DisturbanceSignal,
    #[serde(default)]
    pub d2: DisturbanceSignal,
    #[serde(default)]
    pub d2_shape: Option<SpatialShape>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NumericsConfig {
    #[serde(default = "default_cells")]
    pub n_cells: usize,
    pub dt: Option<f64>,
    #[serde(default = "default_t_end")]
    pub t_end: f64,
    #[serde(default = "default_stride")]
    pub output_stride: usize,
}

fn default_cells() -> usize {
    128
}
fn default_t_end() -> f64 {
    1.0
}
fn default_stride() -> usize {
    1
}

impl Default for NumericsConfig {
    fn default() -> Self {
        Self {
            n_cells: default_cells(),
            dt: None,
            t_end: default_t_end(),
            output_stride: default_stride(),
        }
    }
}

/// Synthesis overrides; absent keys keep the [`SynthesisOptions`] defaults.
#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CertificateConfig {
    /// Load this certificate JSON instead of synthesizing one. Relative
    /// paths resolve against the config file's directory.
    pub file: Option<PathBuf>,
    pub gain_cap_boundary: Option<f64>,
    pub gain_cap_distributed: Option<f64>,
    pub strictness_delta: Option<f64>,
    pub split_steps: Option<usize>,
    pub eps_points: Option<usize>,
    pub eps_min: Option<f64>,
    pub eps_max: Option<f64>,
}

impl CertificateConfig {
    pub fn options(&self) -> SynthesisOptions {
        let d = SynthesisOptions::default();
        SynthesisOptions {
            gain_cap_boundary: self.gain_cap_boundary.unwrap_or(d.gain_cap_boundary),
            gain_cap_distributed: self.gain_cap_distributed.unwrap_or(d.gain_cap_distributed),
            strictness_delta: self.strictness_delta.or(d.strictness_delta),
            split_steps: self.split_steps.unwrap_or(d.split_steps),
            eps_points: self.eps_points.unwrap_or(d.eps_points),
            eps_min: self.eps_min.unwrap_or(d.eps_min),
            eps_max: self.eps_max.unwrap_or(d.eps_max),
        }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ValidationConfig {
    #[serde(default = "default_rel_tol")]
    pub rel_tol: f64,
    #[serde(default = "default_abs_tol")]
    pub abs_tol: f64,
    /// Check one form only; both when absent.
    pub form: Option<BoundForm>,
}

fn default_rel_tol() -> f64 {
    0.01
}
fn default_abs_tol() -> f64 {
    1e-6
}

impl ValidationConfig {
    pub fn forms(&self) -> Vec<BoundForm> {
        match self.form {
            Some(f) => vec![f],
            None => vec![BoundForm::Eiiss, BoundForm::Eiss],
        }
    }
}

impl Default for ValidationConfig {
    fn default() -> Self {
        Self {
            rel_tol: default_rel_tol(),
            abs_tol: default_abs_tol(),
            form: None,
        }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConvergenceConfig {
    pub grids: Vec<usize>,
    pub solution: ManufacturedSolution,
}

/// Everything the commands need, resolved from a [`RunConfig`].
#[derive(Debug, Clone)]
pub struct Problem {
    pub bc: BoundaryParams,
    pub term: ReactionTerm,
    pub form: ReactionForm,
    pub m1: f64,
    pub m2: f64,
    pub d1: DisturbanceSignal,
    pub d2: DisturbanceSignal,
}

impl RunConfig {
    pub fn parse(text: &str) -> Result<Self> {
        let cfg: Self = toml::from_str(text).map_err(|e| anyhow!("invalid config: {e}"))?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<(Self, String)> {
        let text = std::fs::read_to_string(path)
            .with_context(|| format!("cannot read config {}", path.display()))?;
        Ok((Self::parse(&text)?, text))
    }

    pub fn problem(&self) -> Result<Problem> {
        let mu = self.bc.mu;
        let fixed = |name: &str, v: Option<f64>| {
            v.ok_or_else(|| anyhow!("[bc] needs '{name}' for model '{}'", self.model_name()))
        };
        let robin = || -> Result<BoundaryParams> {
            Ok(BoundaryParams::new(
                fixed("a1", self.bc.a1)?,
                fixed("a2", self.bc.a2)?,
                fixed("b1", self.bc.b1)?,
                fixed("b2", self.bc.b2)?,
                mu,
            )?)
        };
        let dist = &self.disturbances;
        if !matches!(self.model, ModelConfig::LinearForm { .. })
            && (!dist.d2.is_zero() || dist.d2_shape.is_some())
        {
            bail!("[disturbances] d2 is only supported by the linear_form model");
        }
        dist.d1.validate()?;
        let (bc, term) = match &self.model {
            ModelConfig::GinzburgLandau { alpha, beta } => {
                (robin()?, make_ginzburg_landau(*alpha, *beta)?)
            }
            ModelConfig::GeneralizedGl {
                alpha,
                beta,
                gamma_c,
                lambda,
            } => (
                robin()?,
                make_generalized_gl(*alpha, *beta, *gamma_c, *lambda)?,
            ),
            ModelConfig::Transport { m, n, a, b } => {
                if self.bc.a1.is_some()
                    || self.bc.a2.is_some()
                    || self.bc.b1.is_some()
                    || self.bc.b2.is_some()
                {
                    bail!("model 'transport' takes its boundary data from model.a and model.b; [bc] holds only mu");
                }
                let t = make_transport(*m, *n, mu)?;
                (t.boundary_params(*a, *b)?, t.term)
            }
            ModelConfig::LinearForm { m1, m2 } => {
                let d = (!dist.d2.is_zero()).then(|| {
                    DistributedDisturbance::new(
                        dist.d2.clone(),
                        dist.d2_shape.unwrap_or(SpatialShape::Uniform),
                    )
                });
                (robin()?, ReactionTerm::linear_form(*m1, *m2, d)?)
            }
        };
        Ok(Problem {
            bc,
            form: term.form(),
            m1: term.m1(),
            m2: term.m2(),
            d1: dist.d1.clone(),
            d2: term.d2().clone(),
            term,
        })
    }

    pub fn model_name(&self) -> &'static str {
        match self.model {
            ModelConfig::GinzburgLandau { .. } => "ginzburg_landau",
            ModelConfig::GeneralizedGl { .. } => "generalized_gl",
            ModelConfig::Transport { .. } => "transport",
            ModelConfig::LinearForm { .. } => "linear_form",
        }
    }

    pub fn scenario(&self, problem: &Problem) -> Result<Scenario> {
        let num = &self.numerics;
        let dt = num.dt.unwrap_or_else(|| default_dt(num.t_end));
        let s = Scenario::new(
            problem.bc,
            problem.term.clone(),
            problem.d1.clone(),
            self.initial.clone(),
            build_grid(num.n_cells)?,
            num.t_end,
            dt,
        )?
        .with_output_stride(num.output_stride);
        s.validate()?;
        Ok(s)
    }
}
