//! Named analytic test functions: `poly:c0,c1,...`, `ml:alpha`, `sin`, `exp`.

use super::power::PowerSeries;
use crate::error::{FvcError, Result};
use crate::grid::{Interval, UniformGrid1D};
use crate::special::ln_gamma;
use serde::{Deserialize, Serialize};
use std::fmt;
use std::str::FromStr;

/// A registry function of one variable.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum Func1D {
    /// `Σ c_i x^i`.
    Poly(Vec<f64>),
    /// `E_α(x^α)` for `x >= 0`.
    Ml(f64),
    Sin,
    Exp,
}

// Truncation target for the series representations.
const SERIES_TOL: f64 = 1e-18;

fn ml_coeff(alpha: f64, k: usize) -> f64 {
    let arg = alpha * k as f64 + 1.0;
    (-ln_gamma(arg).expect("positive argument")).exp()
}

impl Func1D {
    pub fn poly(coeffs: &[f64]) -> Self {
        Func1D::Poly(coeffs.to_vec())
    }

    pub fn eval(&self, x: f64) -> f64 {
        match self {
            Func1D::Poly(c) => c.iter().rev().fold(0.0, |acc, &ci| acc * x + ci),
            Func1D::Sin => x.sin(),
            Func1D::Exp => x.exp(),
            Func1D::Ml(alpha) => {
                if x < 0.0 {
                    return f64::NAN;
                }
                if x == 0.0 {
                    return 1.0;
                }
                let lx = alpha * x.ln();
                let mut sum = 1.0;
                let mut k = 1;
                loop {
                    let t = (k as f64 * lx - ln_gamma(alpha * k as f64 + 1.0).expect("positive argument")).exp();
                    sum += t;
                    if t <= SERIES_TOL * sum && (alpha * k as f64) > x + 1.0 || k > 100_000 {
                        break;
                    }
                    k += 1;
                }
                sum
            }
        }
    }

    /// Classical first derivative.
    pub fn derivative(&self, x: f64) -> f64 {
        match self {
            Func1D::Poly(c) => c.iter().enumerate().skip(1).rev().fold(0.0, |acc, (i, &ci)| acc * x + i as f64 * ci),
            Func1D::Sin => x.cos(),
            Func1D::Exp => x.exp(),
            Func1D::Ml(_) => {
                let s = self.series(0.0, x.max(1e-300)).expect("ml series at 0");
                s.terms.iter().filter(|(_, e)| *e > 0.0).map(|&(c, e)| c * e * x.powf(e - 1.0)).sum()
            }
        }
    }

    /// Generalised power series about `a`, accurate on `[a, b]`.
    pub fn series(&self, a: f64, b: f64) -> Result<PowerSeries> {
        let r = (b - a).abs().max(1e-300);
        let terms = match self {
            Func1D::Poly(c) => {
                // re-expand Σ c_i x^i about a
                let mut d = vec![0.0; c.len()];
                for (i, &ci) in c.iter().enumerate() {
                    let mut binom = 1.0;
                    for (j, dj) in d.iter_mut().enumerate().take(i + 1) {
                        *dj += ci * binom * a.powi((i - j) as i32);
                        binom = binom * (i - j) as f64 / (j + 1) as f64;
                    }
                }
                d.into_iter().enumerate().map(|(j, dj)| (dj, j as f64)).collect()
            }
            Func1D::Sin | Func1D::Exp => {
                let (sa, ca, ea) = (a.sin(), a.cos(), a.exp());
                let mut out = Vec::new();
                let mut fact = 1.0;
                let mut k = 0usize;
                loop {
                    if k > 0 {
                        fact *= k as f64;
                    }
                    let deriv = match self {
                        Func1D::Sin => [sa, ca, -sa, -ca][k % 4],
                        _ => ea,
                    };
                    out.push((deriv / fact, k as f64));
                    if r.powi(k as i32) / fact < SERIES_TOL && k as f64 > r {
                        break;
                    }
                    k += 1;
                }
                out
            }
            Func1D::Ml(alpha) => {
                if a != 0.0 {
                    return Err(FvcError::Parameter(format!("ml:{alpha} is expanded about 0, not {a}")));
                }
                let mut out = vec![(1.0, 0.0)];
                let lr = r.ln();
                let mut k = 1usize;
                loop {
                    let c = ml_coeff(*alpha, k);
                    out.push((c, alpha * k as f64));
                    let mag = (k as f64 * alpha * lr).exp() * c;
                    if mag < SERIES_TOL && (alpha * k as f64) > r + 1.0 || k > 100_000 {
                        break;
                    }
                    k += 1;
                }
                out
            }
        };
        Ok(PowerSeries { base_offset: a, terms })
    }

    pub fn sample(&self, interval: Interval, m: usize) -> Result<UniformGrid1D> {
        UniformGrid1D::from_fn(interval, m, |x| self.eval(x))
    }

    /// Polynomial degree, `None` for transcendental functions.
    pub fn degree(&self) -> Option<usize> {
        match self {
            Func1D::Poly(c) => Some(c.iter().rposition(|&v| v != 0.0).unwrap_or(0)),
            _ => None,
        }
    }
}

impl FromStr for Func1D {
    type Err = FvcError;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let miss = || FvcError::RegistryMiss(s.to_string());
        if let Some(rest) = s.strip_prefix("poly:") {
            let c: std::result::Result<Vec<f64>, _> = rest.split(',').map(|t| t.trim().parse::<f64>()).collect();
            let c = c.map_err(|_| miss())?;
            if c.is_empty() || c.iter().any(|v| !v.is_finite()) {
                return Err(miss());
            }
            return Ok(Func1D::Poly(c));
        }
        if let Some(rest) = s.strip_prefix("ml:") {
            let alpha: f64 = rest.trim().parse().map_err(|_| miss())?;
            if !(alpha > 0.0) || !alpha.is_finite() {
                return Err(miss());
            }
            return Ok(Func1D::Ml(alpha));
        }
        match s {
            "sin" => Ok(Func1D::Sin),
            "exp" => Ok(Func1D::Exp),
            _ => Err(miss()),
        }
    }
}

impl fmt::Display for Func1D {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Func1D::Poly(c) => {
                let parts: Vec<String> = c.iter().map(|v| v.to_string()).collect();
                write!(f, "poly:{}", parts.join(","))
            }
            Func1D::Ml(a) => write!(f, "ml:{a}"),
            Func1D::Sin => write!(f, "sin"),
            Func1D::Exp => write!(f, "exp"),
        }
    }
}
