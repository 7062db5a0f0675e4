//! Closed-form function families with exact derivatives, shared by initial
//! conditions and the inequality test functions.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};

pub const MAX_FOURIER_ORDER: usize = 8;
pub const MAX_POLY_DEGREE: usize = 6;

/// Half-range trigonometric series on `[a, b]`:
///
/// ```text
/// u(x) = sum_{k=0}^{8} cos[k] cos(k pi s / 2) + sum_{k=1}^{8} sin[k-1] sin(k pi s / 2),
/// s = (x - a) / (b - a)
/// ```
///
/// On [0, 1], `cos = [0, 1]` is `cos(pi x / 2)` and `sin = [0, 1]` is `sin(pi x)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FourierSeries {
    #[serde(default)]
    pub cos: Vec<f64>,
    #[serde(default)]
    pub sin: Vec<f64>,
}

impl FourierSeries {
    pub fn new(cos: Vec<f64>, sin: Vec<f64>) -> Result<Self> {
        let s = Self { cos, sin };
        s.validate()?;
        Ok(s)
    }

    pub fn validate(&self) -> Result<()> {
        if self.cos.len() > MAX_FOURIER_ORDER + 1 || self.sin.len() > MAX_FOURIER_ORDER {
            return invalid(format!(
                "fourier series limited to order {MAX_FOURIER_ORDER}"
            ));
        }
        if self.cos.iter().chain(&self.sin).any(|c| !c.is_finite()) {
            return invalid("fourier coefficients must be finite");
        }
        Ok(())
    }

    pub fn value(&self, x: f64, a: f64, b: f64) -> f64 {
        let theta = 0.5 * PI * (x - a) / (b - a);
        let c: f64 = self
            .cos
            .iter()
            .enumerate()
            .map(|(k, ak)| ak * (k as f64 * theta).cos())
            .sum();
        let s: f64 = self
            .sin
            .iter()
            .enumerate()
            .map(|(k, bk)| bk * ((k + 1) as f64 * theta).sin())
            .sum();
        c + s
    }

    pub fn derivative(&self, x: f64, a: f64, b: f64) -> f64 {
        let w = 0.5 * PI / (b - a);
        let theta = w * (x - a);
        let c: f64 = self
            .cos
            .iter()
            .enumerate()
            .map(|(k, ak)| -ak * k as f64 * (k as f64 * theta).sin())
            .sum();
        let s: f64 = self
            .sin
            .iter()
            .enumerate()
            .map(|(k, bk)| {
                let k = (k + 1) as f64;
                bk * k * (k * theta).cos()
            })
            .sum();
        w * (c + s)
    }
}

/// `sum_k coeffs[k] x^k`, degree at most 6.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Polynomial {
    pub coeffs: Vec<f64>,
}

impl Polynomial {
    pub fn new(coeffs: Vec<f64>) -> Result<Self> {
        let p = Self { coeffs };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        if self.coeffs.len() > MAX_POLY_DEGREE + 1 {
            return invalid(format!("polynomial degree limited to {MAX_POLY_DEGREE}"));
        }
        if self.coeffs.iter().any(|c| !c.is_finite()) {
            return invalid("polynomial coefficients must be finite");
        }
        Ok(())
    }

    pub fn value(&self, x: f64) -> f64 {
        self.coeffs.iter().rev().fold(0.0, |acc, c| acc * x + c)
    }

    pub fn derivative(&self, x: f64) -> f64 {
        self.coeffs
            .iter()
            .enumerate()
            .skip(1)
            .rev()
            .fold(0.0, |acc, (k, c)| acc * x + k as f64 * c)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn basis_examples() {
        let c = FourierSeries::new(vec![0.0, 1.0], vec![]).unwrap();
        let s = FourierSeries::new(vec![], vec![0.0, 1.0]).unwrap();
        for x in [0.0, 0.3, 0.5, 1.0] {
            assert!((c.value(x, 0.0, 1.0) - (PI * x / 2.0).cos()).abs() < 1e-15);
            assert!((s.value(x, 0.0, 1.0) - (PI * x).sin()).abs() < 1e-15);
            assert!((s.derivative(x, 0.0, 1.0) - PI * (PI * x).cos()).abs() < 1e-14);
        }
        assert!(FourierSeries::new(vec![0.0; 10], vec![]).is_err());
    }

    #[test]
    fn derivatives_match_finite_differences() {
        let f = FourierSeries::new(
            vec![0.3, -1.2, 0.5, 0.1, 0.0, 0.2, -0.4, 0.9, 1.1],
            vec![0.7, -0.3, 0.2, 1.5, -0.6, 0.0, 0.8, -1.9],
        )
        .unwrap();
        let p = Polynomial::new(vec![1.0, -2.0, 0.5, 3.0, -1.0, 0.25, 0.1]).unwrap();
        let h = 1e-6;
        for i in 0..=10 {
            let x = -1.3 + 0.25 * i as f64;
            let fd = (f.value(x + h, -1.3, 1.2) - f.value(x - h, -1.3, 1.2)) / (2.0 * h);
            assert!((fd - f.derivative(x, -1.3, 1.2)).abs() < 1e-6);
            let fd = (p.value(x + h) - p.value(x - h)) / (2.0 * h);
            assert!((fd - p.derivative(x)).abs() < 1e-6);
        }
    }

    #[test]
    fn polynomial_eval() {
        let p = Polynomial::new(vec![1.0, 2.0, 3.0]).unwrap();
        assert_eq!(p.value(2.0), 17.0);
        assert_eq!(p.derivative(2.0), 14.0);
        assert_eq!(Polynomial::new(vec![]).unwrap().value(3.0), 0.0);
        assert!(Polynomial::new(vec![0.0; 8]).is_err());
    }
}
