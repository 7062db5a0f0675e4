//! Disturbance signals `d1(t)`, `d2(t)` and separable distributed
//! disturbances `d(t, x) = s(t) phi(x)`.
//!
//! Time is dimensionless. Signals form a closed set so that runs are
//! reproducible and every signal can be written to a config file.

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
#[derive(Default)]
pub enum DisturbanceSignal {
    #[default]
    Zero,
    Constant {
        value: f64,
    },
    /// `amp * sin(freq * t + phase)`, `freq` in radians per unit time.
    Sinusoid {
        amp: f64,
        freq: f64,
        #[serde(default)]
        phase: f64,
    },
    /// `amp * exp(-rate * t)`
    DecayingExp {
        amp: f64,
        rate: f64,
    },
    /// Piecewise-linear through `(times[i], values[i])`, clamped outside.
    Table {
        times: Vec<f64>,
        values: Vec<f64>,
    },
}

impl DisturbanceSignal {
    pub fn table(times: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        let sig = Self::Table { times, values };
        sig.validate()?;
        Ok(sig)
    }

    pub fn validate(&self) -> Result<()> {
        let finite = |xs: &[f64]| xs.iter().all(|v| v.is_finite());
        match self {
            Self::Zero => Ok(()),
            Self::Constant { value } if value.is_finite() => Ok(()),
            Self::Sinusoid { amp, freq, phase } if finite(&[*amp, *freq, *phase]) => Ok(()),
            Self::DecayingExp { amp, rate } if finite(&[*amp, *rate]) => Ok(()),
            Self::Table { times, values } => {
                if times.is_empty() || times.len() != values.len() {
                    return invalid("table needs equally many (>= 1) times and values");
                }
                if !finite(times) || !finite(values) {
                    return invalid("table entries must be finite");
                }
                if times.windows(2).any(|w| w[1] <= w[0]) {
                    return invalid("table times must be strictly increasing");
                }
                Ok(())
            }
            _ => invalid("signal parameters must be finite"),
        }
    }

    pub fn eval(&self, t: f64) -> Result<f64> {
        if !(t >= 0.0) {
            return invalid(format!("signals are defined for t >= 0, got {t}"));
        }
        Ok(self.value(t))
    }

    /// Evaluation without the `t >= 0` check.
    pub(crate) fn value(&self, t: f64) -> f64 {
        match self {
            Self::Zero => 0.0,
            Self::Constant { value } => *value,
            Self::Sinusoid { amp, freq, phase } => amp * (freq * t + phase).sin(),
            Self::DecayingExp { amp, rate } => amp * (-rate * t).exp(),
            Self::Table { times, values } => interpolate(times, values, t),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Self::Zero => true,
            Self::Constant { value } => *value == 0.0,
            Self::Sinusoid { amp, .. } | Self::DecayingExp { amp, .. } => *amp == 0.0,
            Self::Table { values, .. } => values.iter().all(|v| *v == 0.0),
        }
    }

    /// The same signal multiplied by `k`.
    pub fn scaled(&self, k: f64) -> Self {
        match self {
            Self::Zero => Self::Zero,
            Self::Constant { value } => Self::Constant { value: k * value },
            Self::Sinusoid { amp, freq, phase } => Self::Sinusoid {
                amp: k * amp,
                freq: *freq,
                phase: *phase,
            },
            Self::DecayingExp { amp, rate } => Self::DecayingExp {
                amp: k * amp,
                rate: *rate,
            },
            Self::Table { times, values } => Self::Table {
                times: times.clone(),
                values: values.iter().map(|v| k * v).collect(),
            },
        }
    }
}

fn interpolate(times: &[f64], values: &[f64], t: f64) -> f64 {
    let last = times.len() - 1;
    if t <= times[0] {
        return values[0];
    }
    if t >= times[last] {
        return values[last];
    }
    // first index with times[i] > t; 1 <= i <= last here
    let i = times.partition_point(|&s| s <= t);
    let (t0, t1) = (times[i - 1], times[i]);
    let w = (t - t0) / (t1 - t0);
    values[i - 1] + w * (values[i] - values[i - 1])
}

/// Spatial profile `phi(x)` with `sup |phi| <= 1` on [0, 1].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum SpatialShape {
    Uniform,
    /// `sin(mode * pi * x)`
    Sine {
        mode: u32,
    },
    /// `cos(mode * pi * x)`
    Cosine {
        mode: u32,
    },
}

impl SpatialShape {
    pub fn eval(&self, x: f64) -> f64 {
        use std::f64::consts::PI;
        match *self {
            Self::Uniform => 1.0,
            Self::Sine { mode } => (mode as f64 * PI * x).sin(),
            Self::Cosine { mode } => (mode as f64 * PI * x).cos(),
        }
    }
}

/// `d(t, x) = s(t) phi(x)`; `|d(t, x)| <= |s(t)|` since `|phi| <= 1`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DistributedDisturbance {
    pub signal: DisturbanceSignal,
    pub shape: SpatialShape,
}

impl DistributedDisturbance {
    pub fn new(signal: DisturbanceSignal, shape: SpatialShape) -> Self {
        Self { signal, shape }
    }

    pub fn eval(&self, t: f64, x: f64) -> f64 {
        self.signal.value(t) * self.shape.eval(x)
    }
}
