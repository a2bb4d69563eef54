use crate::error::{FvcError, Result};
use serde::{Deserialize, Serialize};

/// Smallest node count accepted by the operators.
pub const MIN_NODES: usize = 8;

/// Value reported at `x = a` where an RL derivative is genuinely singular.
pub const SINGULAR: f64 = f64::INFINITY;

/// A closed interval `[a, b]` with `a < b`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Interval {
    pub a: f64,
    pub b: f64,
}

impl Interval {
    pub fn new(a: f64, b: f64) -> Result<Self> {
        if !(a.is_finite() && b.is_finite() && a < b) {
            return Err(FvcError::Interval { lo: a, hi: b });
        }
        Ok(Interval { a, b })
    }

    pub fn unit() -> Self {
        Interval { a: 0.0, b: 1.0 }
    }

    pub fn len(&self) -> f64 {
        self.b - self.a
    }

    pub fn contains(&self, x: f64) -> bool {
        self.a <= x && x <= self.b
    }

    pub fn step(&self, m: usize) -> f64 {
        (self.b - self.a) / (m - 1) as f64
    }

    pub fn node(&self, m: usize, i: usize) -> f64 {
        if i == m - 1 {
            self.b
        } else {
            self.a + i as f64 * self.step(m)
        }
    }
}

/// A fractional order α > 0 together with n = ⌈α⌉.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FracOrder {
    alpha: f64,
    n: u32,
}

impl FracOrder {
    pub fn new(alpha: f64) -> Result<Self> {
        if !(alpha > 0.0) || !alpha.is_finite() {
            return Err(FvcError::OrderOutOfRange { alpha, range: "(0, inf)" });
        }
        Ok(FracOrder { alpha, n: alpha.ceil() as u32 })
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn is_integer(&self) -> bool {
        self.alpha == self.n as f64
    }

    /// Checks `lo < α <= hi`.
    pub(crate) fn require(&self, lo: f64, hi: f64, range: &'static str) -> Result<()> {
        if self.alpha > lo && self.alpha <= hi {
            Ok(())
        } else {
            Err(FvcError::OrderOutOfRange { alpha: self.alpha, range })
        }
    }
}

/// Samples of a function at `m` equispaced nodes of `[a, b]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct UniformGrid1D {
    interval: Interval,
    values: Vec<f64>,
}

impl UniformGrid1D {
    pub fn new(interval: Interval, values: Vec<f64>) -> Result<Self> {
        if values.len() < MIN_NODES {
            return Err(FvcError::GridTooSmall { got: values.len(), min: MIN_NODES });
        }
        if let Some(i) = values.iter().position(|v| !v.is_finite()) {
            return Err(FvcError::Parameter(format!("non-finite sample at node {i}")));
        }
        Ok(UniformGrid1D { interval, values })
    }

    /// Output grids of the operators; node 0 may carry [`SINGULAR`].
    pub(crate) fn from_raw(interval: Interval, values: Vec<f64>) -> Self {
        UniformGrid1D { interval, values }
    }

    pub fn from_fn<F: Fn(f64) -> f64>(interval: Interval, m: usize, f: F) -> Result<Self> {
        if m < MIN_NODES {
            return Err(FvcError::GridTooSmall { got: m, min: MIN_NODES });
        }
        let values = (0..m).map(|i| f(interval.node(m, i))).collect();
        Self::new(interval, values)
    }

    pub fn interval(&self) -> Interval {
        self.interval
    }

    pub fn a(&self) -> f64 {
        self.interval.a
    }

    pub fn b(&self) -> f64 {
        self.interval.b
    }

    pub fn m(&self) -> usize {
        self.values.len()
    }

    pub fn h(&self) -> f64 {
        self.interval.step(self.m())
    }

    pub fn x(&self, i: usize) -> f64 {
        self.interval.node(self.m(), i)
    }

    pub fn nodes(&self) -> Vec<f64> {
        (0..self.m()).map(|i| self.x(i)).collect()
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn first(&self) -> f64 {
        self.values[0]
    }

    pub fn last(&self) -> f64 {
        self.values[self.m() - 1]
    }

    pub fn with_values(&self, values: Vec<f64>) -> Self {
        debug_assert_eq!(values.len(), self.m());
        UniformGrid1D { interval: self.interval, values }
    }

    pub fn map<F: Fn(f64, f64) -> f64>(&self, f: F) -> Self {
        let values = (0..self.m()).map(|i| f(self.x(i), self.values[i])).collect();
        self.with_values(values)
    }

    pub fn zip_with<F: Fn(f64, f64) -> f64>(&self, other: &UniformGrid1D, f: F) -> Result<Self> {
        if self.interval != other.interval || self.m() != other.m() {
            return Err(FvcError::DomainMismatch);
        }
        let values = self.values.iter().zip(&other.values).map(|(&p, &q)| f(p, q)).collect();
        Ok(self.with_values(values))
    }

    /// Max of `|v|` over interior nodes `1..m-1`.
    pub fn interior_max_abs(&self) -> f64 {
        interior_max_abs(&self.values)
    }
}

/// Max of `|v|` over `v[1..len-1]`.
pub fn interior_max_abs(v: &[f64]) -> f64 {
    v[1..v.len() - 1].iter().fold(0.0, |m, x| m.max(x.abs()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn order_ceiling() {
        assert_eq!(FracOrder::new(0.3).unwrap().n(), 1);
        assert_eq!(FracOrder::new(1.0).unwrap().n(), 1);
        assert_eq!(FracOrder::new(1.5).unwrap().n(), 2);
        assert!(FracOrder::new(0.0).is_err());
        assert!(FracOrder::new(f64::NAN).is_err());
    }

    #[test]
    fn grid_validation() {
        let i = Interval::new(0.0, 2.0).unwrap();
        assert!(matches!(UniformGrid1D::new(i, vec![0.0; 7]), Err(FvcError::GridTooSmall { got: 7, min: 8 })));
        assert!(UniformGrid1D::new(i, vec![f64::NAN; 8]).is_err());
        let g = UniformGrid1D::from_fn(i, 9, |x| x).unwrap();
        assert_eq!(g.h(), 0.25);
        assert_eq!(g.x(8), 2.0);
        assert!(Interval::new(1.0, 1.0).is_err());
    }
}
