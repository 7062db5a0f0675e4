use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};
use crate::quadrature::trapezoid_uniform;
use crate::series::{FourierSeries, Polynomial, MAX_FOURIER_ORDER, MAX_POLY_DEGREE};

/// Panels of the trapezoid rule behind `||u||^2` and `||u_x||^2`.
pub const LEMMA_PANELS: usize = 2048;
/// Oracle budget for quadrature error.
pub const LEMMA_SLACK_TOL: f64 = -1e-8;
/// `|u(c0)|` allowed in the vanishing mode.
pub const VANISHING_TOL: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum TestKind {
    /// Half-range series in `s = (x - a) / (b - a)`.
    Fourier(FourierSeries),
    /// Polynomial in `x`.
    Polynomial(Polynomial),
}

/// A `C^1` function on `[a, b]` with exact derivative, minus a constant.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TestFunction {
    pub kind: TestKind,
    pub a: f64,
    pub b: f64,
    #[serde(default)]
    pub shift: f64,
}

impl TestFunction {
    pub fn fourier(series: FourierSeries, a: f64, b: f64) -> Result<Self> {
        series.validate()?;
        Self::build(TestKind::Fourier(series), a, b)
    }

    pub fn polynomial(coeffs: Vec<f64>, a: f64, b: f64) -> Result<Self> {
        Self::build(TestKind::Polynomial(Polynomial::new(coeffs)?), a, b)
    }

    fn build(kind: TestKind, a: f64, b: f64) -> Result<Self> {
        let f = Self {
            kind,
            a,
            b,
            shift: 0.0,
        };
        f.validate()?;
        Ok(f)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.a < self.b) || !self.a.is_finite() || !self.b.is_finite() {
            return invalid(format!("need a < b, got [{}, {}]", self.a, self.b));
        }
        if !self.shift.is_finite() {
            return invalid("shift must be finite");
        }
        match &self.kind {
            TestKind::Fourier(s) => s.validate(),
            TestKind::Polynomial(p) => p.validate(),
        }
    }

    /// The same function moved to another interval (Fourier series keep
    /// their shape in `s`, polynomials keep their coefficients).
    pub fn on_interval(&self, a: f64, b: f64) -> Result<Self> {
        let f = Self {
            a,
            b,
            ..self.clone()
        };
        f.validate()?;
        Ok(f)
    }

    /// `u - u(c0)`, which vanishes at `c0`.
    pub fn vanishing_at(&self, c0: f64) -> Result<Self> {
        self.check_point(c0)?;
        let base = self.value(c0) + self.shift;
        Ok(Self {
            shift: base,
            ..self.clone()
        })
    }

    pub fn value(&self, x: f64) -> f64 {
        let v = match &self.kind {
            TestKind::Fourier(s) => s.value(x, self.a, self.b),
            TestKind::Polynomial(p) => p.value(x),
        };
        v - self.shift
    }

    pub fn derivative(&self, x: f64) -> f64 {
        match &self.kind {
            TestKind::Fourier(s) => s.derivative(x, self.a, self.b),
            TestKind::Polynomial(p) => p.derivative(x),
        }
    }

    fn check_point(&self, c: f64) -> Result<()> {
        if !(c >= self.a && c <= self.b) {
            return invalid(format!("point {c} outside [{}, {}]", self.a, self.b));
        }
        Ok(())
    }

    /// `(||u||^2, ||u_x||^2)` on `[a, b]`.
    pub fn norms(&self) -> (f64, f64) {
        let n = LEMMA_PANELS;
        let h = (self.b - self.a) / n as f64;
        let x = |i: usize| {
            if i == n {
                self.b
            } else {
                self.a + i as f64 * h
            }
        };
        let u2 = trapezoid_uniform((0..=n).map(|i| self.value(x(i)).powi(2)), h);
        let p2 = trapezoid_uniform((0..=n).map(|i| self.derivative(x(i)).powi(2)), h);
        (u2, p2)
    }
}

/// `(2/(b-a)) ||u||^2 + (b-a) ||u_x||^2 - u(c)^2`
pub fn lemma3_check(f: &TestFunction, c: f64) -> Result<f64> {
    f.validate()?;
    f.check_point(c)?;
    let (u2, p2) = f.norms();
    let l = f.b - f.a;
    Ok(2.0 / l * u2 + l * p2 - f.value(c).powi(2))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Lemma2Mode {
    /// `u(c0) = 0`: `||u||^2 <= ((b-a)^2 / 2) ||u_x||^2`.
    Vanishing(f64),
    /// `||u||^2 <= 2 u(c)^2 (b-a) + (b-a)^2 ||u_x||^2`.
    General(f64),
}

pub fn lemma2_check(f: &TestFunction, mode: Lemma2Mode) -> Result<f64> {
    f.validate()?;
    let l = f.b - f.a;
    let (u2, p2) = f.norms();
    match mode {
        Lemma2Mode::Vanishing(c0) => {
            f.check_point(c0)?;
            let v = f.value(c0);
            if v.abs() > VANISHING_TOL {
                return invalid(format!("u({c0}) = {v:e} does not vanish"));
            }
            Ok(0.5 * l * l * p2 - u2)
        }
        Lemma2Mode::General(c) => {
            f.check_point(c)?;
            Ok(2.0 * f.value(c).powi(2) * l + l * l * p2 - u2)
        }
    }
}

/// Slacks of `||u_x||^2 >= u(0)^2 - 2 ||u||^2` and
/// `||u_x||^2 >= ||u||^2 - 2 u(1)^2` on `[0, 1]`.
pub fn boundary_gradient_bounds_check(f: &TestFunction) -> Result<[f64; 2]> {
    f.validate()?;
    if f.a != 0.0 || f.b != 1.0 {
        return invalid(format!(
            "boundary bounds need [0, 1], got [{}, {}]",
            f.a, f.b
        ));
    }
    let (u2, p2) = f.norms();
    let (u0, u1) = (f.value(0.0), f.value(1.0));
    Ok([p2 - (u0 * u0 - 2.0 * u2), p2 - (u2 - 2.0 * u1 * u1)])
}

/// Smallest slack seen per inequality and where it occurred.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LemmaStat {
    pub check: &'static str,
    pub min_slack: f64,
    pub worst_sample: usize,
    pub failures: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LemmaSuiteReport {
    pub samples: usize,
    pub seed: u64,
    pub pass: bool,
    pub stats: Vec<LemmaStat>,
}

/// Random function with coefficients in `[-2, 2]` on an interval inside
/// `[-2, 2]` of length at least 0.1, plus the evaluation points `c` and `c0`.
pub fn random_test_function(rng: &mut impl Rng) -> (TestFunction, f64, f64) {
    fn coeffs(rng: &mut impl Rng, n: usize) -> Vec<f64> {
        (0..n).map(|_| rng.random_range(-2.0..=2.0)).collect()
    }
    let fourier = rng.random_bool(0.5);
    let kind = if fourier {
        let nc = rng.random_range(1..=MAX_FOURIER_ORDER + 1);
        let ns = rng.random_range(0..=MAX_FOURIER_ORDER);
        let cos = coeffs(rng, nc);
        let sin = coeffs(rng, ns);
        TestKind::Fourier(FourierSeries { cos, sin })
    } else {
        let deg = rng.random_range(0..=MAX_POLY_DEGREE);
        TestKind::Polynomial(Polynomial {
            coeffs: coeffs(rng, deg + 1),
        })
    };
    let a = rng.random_range(-2.0..=1.9);
    let b = rng.random_range(a + 0.1..=2.0);
    let c = rng.random_range(a..=b);
    let c0 = rng.random_range(a..=b);
    (
        TestFunction {
            kind,
            a,
            b,
            shift: 0.0,
        },
        c,
        c0,
    )
}

/// Runs every inequality on `n` random functions. Sample `i` draws from a
/// ChaCha8 stream `i` seeded with `seed`, so results do not depend on
/// evaluation order.
pub fn run_lemma_suite(n: usize, seed: u64) -> Result<LemmaSuiteReport> {
    const NAMES: [&str; 5] = [
        "lemma3",
        "lemma2_vanishing",
        "lemma2_general",
        "boundary_left",
        "boundary_right",
    ];
    let mut stats: Vec<LemmaStat> = NAMES
        .iter()
        .map(|&check| LemmaStat {
            check,
            min_slack: f64::INFINITY,
            worst_sample: 0,
            failures: 0,
        })
        .collect();
    for i in 0..n {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(i as u64);
        let (f, c, c0) = random_test_function(&mut rng);
        let unit = f.on_interval(0.0, 1.0)?;
        let [bl, br] = boundary_gradient_bounds_check(&unit)?;
        let slacks = [
            lemma3_check(&f, c)?,
            lemma2_check(&f.vanishing_at(c0)?, Lemma2Mode::Vanishing(c0))?,
            lemma2_check(&f, Lemma2Mode::General(c))?,
            bl,
            br,
        ];
        for (st, s) in stats.iter_mut().zip(slacks) {
            if s < st.min_slack {
                st.min_slack = s;
                st.worst_sample = i;
            }
            if !(s >= LEMMA_SLACK_TOL) {
                st.failures += 1;
            }
        }
    }
    let pass = stats.iter().all(|s| s.failures == 0);
    Ok(LemmaSuiteReport {
        samples: n,
        seed,
        pass,
        stats,
    })
}
