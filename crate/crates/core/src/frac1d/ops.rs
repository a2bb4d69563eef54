use super::weights::{l1_weights, rl_weights};
use crate::error::{FvcError, Result};
use crate::grid::{FracOrder, UniformGrid1D, MIN_NODES, SINGULAR};
use crate::special::rgamma;
use rayon::prelude::*;

// Below this size the O(m^2) sums are cheaper than spawning tasks.
const PAR_MIN: usize = 512;

fn check_len(m: usize) -> Result<()> {
    if m < MIN_NODES {
        Err(FvcError::GridTooSmall { got: m, min: MIN_NODES })
    } else {
        Ok(())
    }
}

fn fill<F: Fn(usize) -> f64 + Sync>(out: &mut [f64], f: F) {
    if out.len() >= PAR_MIN {
        out.par_iter_mut().enumerate().for_each(|(j, o)| *o = f(j));
    } else {
        out.iter_mut().enumerate().for_each(|(j, o)| *o = f(j));
    }
}

/// RL integral of order `alpha` of equispaced samples `f` with step `h`.
pub(crate) fn rl_integral_slice(f: &[f64], h: f64, alpha: f64, out: &mut [f64]) {
    let m = f.len();
    let w = rl_weights(m, alpha);
    let s = w.scale(h);
    fill(out, |j| {
        if j == 0 {
            return 0.0;
        }
        let mut acc = w.end[j] * f[0] + f[j];
        for k in 1..j {
            acc += w.inner[j - k] * f[k];
        }
        s * acc
    });
}

/// Value of the RL integral at the last node only, in O(m).
pub(crate) fn rl_integral_end_slice(f: &[f64], h: f64, alpha: f64) -> f64 {
    let m = f.len();
    let j = m - 1;
    let w = rl_weights(m, alpha);
    let mut acc = w.end[j] * f[0] + f[j];
    for k in 1..j {
        acc += w.inner[j - k] * f[k];
    }
    w.scale(h) * acc
}

/// Far-endpoint weights: `I^α f (b) = Σ_k v[k] f_k`.
pub(crate) fn rl_end_weights(m: usize, h: f64, alpha: f64) -> Vec<f64> {
    let w = rl_weights(m, alpha);
    let s = w.scale(h);
    let j = m - 1;
    let mut v = vec![0.0; m];
    v[0] = s * w.end[j];
    for (k, vk) in v.iter_mut().enumerate().take(j).skip(1) {
        *vk = s * w.inner[j - k];
    }
    v[j] = s;
    v
}

pub(crate) fn first_derivative(f: &[f64], h: f64, out: &mut [f64]) {
    let m = f.len();
    let c = 0.5 / h;
    // written in differences so constants give exact zeros
    out[0] = c * (3.0 * (f[1] - f[0]) - (f[2] - f[1]));
    for i in 1..m - 1 {
        out[i] = c * (f[i + 1] - f[i - 1]);
    }
    out[m - 1] = c * (3.0 * (f[m - 1] - f[m - 2]) - (f[m - 2] - f[m - 3]));
}

pub(crate) fn second_derivative(f: &[f64], h: f64, out: &mut [f64]) {
    let m = f.len();
    let c = 1.0 / (h * h);
    let d = |i: usize| f[i + 1] - f[i];
    out[0] = c * (-2.0 * d(0) + 3.0 * d(1) - d(2));
    for i in 1..m - 1 {
        out[i] = c * (d(i) - d(i - 1));
    }
    out[m - 1] = c * (2.0 * d(m - 2) - 3.0 * d(m - 3) + d(m - 4));
}

/// One-sided estimate of `f^(j)(a)` for `j <= 1`.
pub(crate) fn left_derivative(f: &[f64], h: f64, j: u32) -> f64 {
    match j {
        0 => f[0],
        1 => (-11.0 * f[0] + 18.0 * f[1] - 9.0 * f[2] + 2.0 * f[3]) / (6.0 * h),
        _ => (2.0 * f[0] - 5.0 * f[1] + 4.0 * f[2] - f[3]) / (h * h),
    }
}

/// Caputo derivative of order `0 < α <= 2` on equispaced samples.
pub(crate) fn caputo_slice(f: &[f64], h: f64, ord: FracOrder, out: &mut [f64]) -> Result<()> {
    check_len(f.len())?;
    ord.require(0.0, 2.0, "(0, 2]")?;
    let alpha = ord.alpha();
    if alpha == 1.0 {
        first_derivative(f, h, out);
    } else if alpha == 2.0 {
        second_derivative(f, h, out);
    } else if alpha < 1.0 {
        let w = l1_weights(f.len(), alpha);
        let s = w.scale(h);
        fill(out, |j| {
            let mut acc = 0.0;
            for k in 0..j {
                acc += w.b[j - k - 1] * (f[k + 1] - f[k]);
            }
            s * acc
        });
    } else {
        let mut d2 = vec![0.0; f.len()];
        second_derivative(f, h, &mut d2);
        rl_integral_slice(&d2, h, 2.0 - alpha, out);
    }
    Ok(())
}

/// `Σ_{j<n} (x-a)^(j-α) / Γ(j-α+1) f^(j)(a)`, the RL minus Caputo boundary terms.
/// Node 0 holds [`SINGULAR`] when a nonzero term blows up there.
pub(crate) fn rl_correction_slice(f: &[f64], h: f64, ord: FracOrder, out: &mut [f64]) {
    let alpha = ord.alpha();
    out.iter_mut().for_each(|o| *o = 0.0);
    for j in 0..ord.n() {
        let e = j as f64 - alpha;
        let c = rgamma(e + 1.0) * left_derivative(f, h, j);
        if c == 0.0 {
            continue;
        }
        for (i, o) in out.iter_mut().enumerate() {
            if i == 0 {
                if e < 0.0 {
                    *o = SINGULAR;
                } else if e == 0.0 && o.is_finite() {
                    *o += c;
                }
            } else if o.is_finite() {
                *o += c * (i as f64 * h).powf(e);
            }
        }
    }
}

/// Riemann-Liouville integral `_aI^α_x f` at every node, by product-trapezoid quadrature.
pub fn rl_integral(f: &UniformGrid1D, ord: FracOrder) -> Result<UniformGrid1D> {
    check_len(f.m())?;
    let mut out = vec![0.0; f.m()];
    rl_integral_slice(f.values(), f.h(), ord.alpha(), &mut out);
    Ok(UniformGrid1D::from_raw(f.interval(), out))
}

/// Caputo derivative `^C_aD^α_x f` for `0 < α <= 2`: L1 scheme below 1,
/// product trapezoid of order `2 - α` on second differences above 1, plain
/// finite differences at α = 1, 2.
pub fn caputo_derivative(f: &UniformGrid1D, ord: FracOrder) -> Result<UniformGrid1D> {
    let mut out = vec![0.0; f.m()];
    caputo_slice(f.values(), f.h(), ord, &mut out)?;
    Ok(UniformGrid1D::from_raw(f.interval(), out))
}

/// The boundary terms separating the RL and Caputo derivatives.
pub fn rl_correction(f: &UniformGrid1D, ord: FracOrder) -> Result<UniformGrid1D> {
    check_len(f.m())?;
    ord.require(0.0, 2.0, "(0, 2]")?;
    let mut out = vec![0.0; f.m()];
    rl_correction_slice(f.values(), f.h(), ord, &mut out);
    Ok(UniformGrid1D::from_raw(f.interval(), out))
}

/// Riemann-Liouville derivative `_aD^α_x f`, Caputo plus boundary terms.
/// Node 0 is [`SINGULAR`] when the derivative blows up at `a`.
pub fn rl_derivative(f: &UniformGrid1D, ord: FracOrder) -> Result<UniformGrid1D> {
    let c = caputo_derivative(f, ord)?;
    let corr = rl_correction(f, ord)?;
    let values = c.values().iter().zip(corr.values()).map(|(p, q)| p + q).collect();
    Ok(UniformGrid1D::from_raw(f.interval(), values))
}

/// `D^s f` for any real `s <= 2`: RL integral of order `-s` when `s < 0`,
/// identity at zero, RL derivative otherwise.
pub fn rl_differintegral(f: &UniformGrid1D, s: f64) -> Result<UniformGrid1D> {
    if s < 0.0 {
        rl_integral(f, FracOrder::new(-s)?)
    } else if s == 0.0 {
        Ok(f.clone())
    } else {
        rl_derivative(f, FracOrder::new(s)?)
    }
}
