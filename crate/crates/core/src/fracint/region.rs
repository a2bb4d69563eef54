use super::integrals::rect_double_integral;
use super::theorems::RectRegion2D;
use crate::error::{FvcError, Result};
use crate::frac1d::{rl_integral_end_slice, Func1D};
use crate::fracvec3d::ScalarFieldSpec;
use crate::grid::{FracOrder, Interval, MIN_NODES};
use ndarray::Array2;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

/// `{(x, y): x ∈ [a, b], φ₁(x) <= y <= φ₂(x)}` sampled with `resolution`
/// nodes along `x` and along every inner `y` segment.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ElementaryRegion2D {
    pub interval: Interval,
    pub lower: Func1D,
    pub upper: Func1D,
    pub resolution: usize,
}

impl ElementaryRegion2D {
    pub fn new(interval: Interval, lower: Func1D, upper: Func1D, resolution: usize) -> Result<Self> {
        if resolution < MIN_NODES {
            return Err(FvcError::GridTooSmall { got: resolution, min: MIN_NODES });
        }
        Ok(ElementaryRegion2D { interval, lower, upper, resolution })
    }
}

/// `_aI^α_b[x] ( _{φ₁(x)}I^α_{φ₂(x)}[y] f(x, y) )` with the inner integral
/// re-sampled on a fresh uniform grid at every outer node. `f` is evaluated
/// in the plane `z = 0`.
pub fn elementary_region_integral(f: &ScalarFieldSpec, region: &ElementaryRegion2D, ord: FracOrder) -> Result<f64> {
    let m = region.resolution;
    let iv = region.interval;
    let alpha = ord.alpha();
    let inner: Result<Vec<f64>> = (0..m)
        .into_par_iter()
        .map(|i| {
            let x = iv.node(m, i);
            let (lo, hi) = (region.lower.eval(x), region.upper.eval(x));
            if !(lo <= hi) {
                return Err(FvcError::RegionOrientation(x));
            }
            if lo == hi {
                return Ok(0.0);
            }
            let h = (hi - lo) / (m - 1) as f64;
            let ys: Vec<f64> =
                (0..m).map(|j| f.eval(x, if j == m - 1 { hi } else { lo + j as f64 * h }, 0.0)).collect();
            Ok(rl_integral_end_slice(&ys, h, alpha))
        })
        .collect();
    Ok(rl_integral_end_slice(&inner?, iv.step(m), alpha))
}

/// Double RL integral over the rectangle of `f · 1_R`, evaluated at the
/// upper corner. The indicator makes the integrand discontinuous, so
/// convergence is first order at best.
pub fn indicator_embedding<P>(f: &ScalarFieldSpec, rect: &RectRegion2D, member: P, ord: FracOrder) -> Result<f64>
where
    P: Fn(f64, f64) -> bool,
{
    let [mx, my] = rect.resolution;
    let mut v = Array2::zeros((mx, my));
    for ((i, j), o) in v.indexed_iter_mut() {
        let (x, y) = (rect.node(0, i), rect.node(1, j));
        if member(x, y) {
            *o = f.eval(x, y, 0.0);
        }
    }
    Ok(rect_double_integral(&v, [rect.step(0), rect.step(1)], ord))
}
