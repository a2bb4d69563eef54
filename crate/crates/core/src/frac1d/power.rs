//! Closed-form fractional integrals and derivatives of power functions.

use crate::error::{FvcError, Result};
use crate::grid::FracOrder;
use crate::special::{gamma, gamma_ratio, rgamma};
use serde::{Deserialize, Serialize};

/// `coefficient * (x - base_offset)^beta` with `beta > -1`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PowerFunction {
    pub base_offset: f64,
    pub beta: f64,
    pub coefficient: f64,
}

impl PowerFunction {
    pub fn new(base_offset: f64, beta: f64, coefficient: f64) -> Result<Self> {
        if !(beta > -1.0) || !beta.is_finite() {
            return Err(FvcError::Parameter(format!("power exponent must exceed -1, got {beta}")));
        }
        Ok(PowerFunction { base_offset, beta, coefficient })
    }

    pub fn eval(&self, x: f64) -> f64 {
        let t = x - self.base_offset;
        if self.beta == 0.0 {
            self.coefficient
        } else {
            self.coefficient * t.powf(self.beta)
        }
    }
}

fn is_integer(v: f64) -> bool {
    v == v.round()
}

/// Γ(p) / Γ(q) with `p > 0`; `q` may be negative or a pole (ratio 0).
fn ratio(p: f64, q: f64) -> Result<f64> {
    if q > 0.0 {
        gamma_ratio(p, q)
    } else {
        Ok(gamma(p)? * rgamma(q))
    }
}

fn offset(p: &PowerFunction, x: f64) -> Result<f64> {
    let t = x - p.base_offset;
    if t < 0.0 {
        return Err(FvcError::BelowBase { x, a: p.base_offset });
    }
    Ok(t)
}

// c * t^e with the convention 0^0 = 1 and a precondition error for 0^(negative)
fn scaled_power(c: f64, t: f64, e: f64, x: f64, a: f64) -> Result<f64> {
    if c == 0.0 {
        return Ok(0.0);
    }
    if t == 0.0 {
        return if e > 0.0 {
            Ok(0.0)
        } else if e == 0.0 {
            Ok(c)
        } else {
            Err(FvcError::Precondition(format!("result is singular at x = {x} = a = {a}")))
        };
    }
    Ok(c * t.powf(e))
}

/// `_aI^α_x` of `c (x-a)^β`: `c Γ(β+1)/Γ(β+α+1) (x-a)^(β+α)`.
pub fn power_rule_integral(p: &PowerFunction, ord: FracOrder, x: f64) -> Result<f64> {
    let t = offset(p, x)?;
    let alpha = ord.alpha();
    let c = p.coefficient * gamma_ratio(p.beta + 1.0, p.beta + alpha + 1.0)?;
    scaled_power(c, t, p.beta + alpha, x, p.base_offset)
}

/// Caputo derivative of `c (x-a)^β`. Integer powers below `n` vanish; other
/// exponents must exceed `n - 1`.
pub fn power_rule_caputo(p: &PowerFunction, ord: FracOrder, x: f64) -> Result<f64> {
    let t = offset(p, x)?;
    let n = ord.n() as f64;
    let alpha = ord.alpha();
    if is_integer(p.beta) && p.beta <= n - 1.0 {
        return Ok(0.0);
    }
    if p.beta <= n - 1.0 {
        return Err(FvcError::UnsupportedExponent { beta: p.beta, alpha });
    }
    let c = p.coefficient * ratio(p.beta + 1.0, p.beta + 1.0 - alpha)?;
    scaled_power(c, t, p.beta - alpha, x, p.base_offset)
}

/// Riemann-Liouville derivative of `c (x-a)^β` for any `β > -1`.
pub fn power_rule_rl_derivative(p: &PowerFunction, ord: FracOrder, x: f64) -> Result<f64> {
    let t = offset(p, x)?;
    let alpha = ord.alpha();
    let c = p.coefficient * ratio(p.beta + 1.0, p.beta + 1.0 - alpha)?;
    scaled_power(c, t, p.beta - alpha, x, p.base_offset)
}

/// A finite sum of power functions sharing one base point.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PowerSeries {
    pub base_offset: f64,
    /// `(coefficient, exponent)` pairs.
    pub terms: Vec<(f64, f64)>,
}

impl PowerSeries {
    fn each<F: Fn(&PowerFunction) -> Result<f64>>(&self, f: F) -> Result<f64> {
        let mut acc = 0.0;
        for &(c, beta) in &self.terms {
            acc += f(&PowerFunction::new(self.base_offset, beta, c)?)?;
        }
        Ok(acc)
    }

    pub fn eval(&self, x: f64) -> Result<f64> {
        offset(&PowerFunction { base_offset: self.base_offset, beta: 0.0, coefficient: 0.0 }, x)?;
        self.each(|p| Ok(p.eval(x)))
    }

    pub fn rl_integral(&self, ord: FracOrder, x: f64) -> Result<f64> {
        self.each(|p| power_rule_integral(p, ord, x))
    }

    pub fn caputo(&self, ord: FracOrder, x: f64) -> Result<f64> {
        self.each(|p| power_rule_caputo(p, ord, x))
    }

    pub fn rl_derivative(&self, ord: FracOrder, x: f64) -> Result<f64> {
        self.each(|p| power_rule_rl_derivative(p, ord, x))
    }

    /// Termwise product, used for exact products of registry functions.
    pub fn product(&self, other: &PowerSeries) -> Result<PowerSeries> {
        if self.base_offset != other.base_offset {
            return Err(FvcError::DomainMismatch);
        }
        let mut terms = Vec::with_capacity(self.terms.len() * other.terms.len());
        for &(c1, e1) in &self.terms {
            for &(c2, e2) in &other.terms {
                terms.push((c1 * c2, e1 + e2));
            }
        }
        Ok(PowerSeries { base_offset: self.base_offset, terms })
    }
}
