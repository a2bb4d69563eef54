//! Residual checks for the fundamental theorem, the semigroup laws and the
//! fractional product rule.

use super::ops::{caputo_derivative, left_derivative, rl_differintegral, rl_integral, rl_integral_end_slice};
use crate::error::{FvcError, Result};
use crate::grid::{interior_max_abs, FracOrder, Interval, UniformGrid1D, SINGULAR};
use crate::special::rgamma;

fn diff_max(p: &UniformGrid1D, q: &UniformGrid1D) -> f64 {
    let d: Vec<f64> = p.values().iter().zip(q.values()).map(|(a, b)| a - b).collect();
    interior_max_abs(&d)
}

/// `max |^C D^α (I^α f) - f|` over interior nodes.
pub fn ftfc_left_inverse_residual(f: &UniformGrid1D, ord: FracOrder) -> Result<f64> {
    ord.require(0.0, 2.0, "(0, 2]")?;
    let i = rl_integral(f, ord)?;
    let c = caputo_derivative(&i, ord)?;
    Ok(diff_max(&c, f))
}

/// `I^α_b (^C D^α F)` evaluated at the right endpoint.
fn integral_of_caputo(f: &UniformGrid1D, ord: FracOrder) -> Result<f64> {
    let c = caputo_derivative(f, ord)?;
    Ok(rl_integral_end_slice(c.values(), f.h(), ord.alpha()))
}

/// `|I^α_b (^C D^α F) - (F(b) - F(a))|` for `0 < α <= 1`.
pub fn newton_leibniz_residual(f: &UniformGrid1D, ord: FracOrder) -> Result<f64> {
    ord.require(0.0, 1.0, "(0, 1]")?;
    let lhs = integral_of_caputo(f, ord)?;
    Ok((lhs - (f.last() - f.first())).abs())
}

/// `|F(b) - F(a) - I^α_b (^C D^α F) - (b - a) F'(a)|` for `1 < α <= 2`.
pub fn ftfc_higher_residual(f: &UniformGrid1D, ord: FracOrder) -> Result<f64> {
    ord.require(1.0, 2.0, "(1, 2]")?;
    let lhs = integral_of_caputo(f, ord)?;
    let slope = left_derivative(f.values(), f.h(), 1);
    Ok((f.last() - f.first() - lhs - (f.b() - f.a()) * slope).abs())
}

/// `(lhs, rhs)` with `lhs = I^α_b (D^α f)` for the RL derivative and
/// `rhs = f(b) - (b-a)^(α-1)/Γ(α) (I^(1-α) f)(b)`, for `0 < α < 1`.
///
/// The singular boundary term of `D^α f` is integrated in closed form:
/// `I^α [(x-a)^(-α)/Γ(1-α)] = 1`, so `lhs = I^α_b(^C D^α f) + f(a)`.
pub fn rl_newton_leibniz_correction(f: &UniformGrid1D, ord: FracOrder) -> Result<(f64, f64)> {
    ord.require(0.0, 1.0 - f64::EPSILON, "(0, 1)")?;
    let alpha = ord.alpha();
    let lhs = integral_of_caputo(f, ord)? + f.first();
    let i1 = rl_integral_end_slice(f.values(), f.h(), 1.0 - alpha);
    let rhs = f.last() - (f.b() - f.a()).powf(alpha - 1.0) * rgamma(alpha) * i1;
    Ok((lhs, rhs))
}

/// Right-hand side with the memory term taken at the lower limit,
/// `f(b) - (x-a)^(α-1)/Γ(α) (I^(1-α) f)(a+)`, which equals `f(b)` for bounded `f`.
pub fn rl_newton_leibniz_lower_limit_rhs(f: &UniformGrid1D, ord: FracOrder) -> Result<f64> {
    ord.require(0.0, 1.0 - f64::EPSILON, "(0, 1)")?;
    let i1 = rl_integral(f, FracOrder::new(1.0 - ord.alpha())?)?;
    // the discrete integral vanishes at node 0, matching the bounded-f limit
    Ok(f.last() - i1.first())
}

/// `max |I^α1 (I^α2 f) - I^(α1+α2) f|` over interior nodes.
pub fn integral_semigroup_residual(f: &UniformGrid1D, a1: FracOrder, a2: FracOrder) -> Result<f64> {
    let inner = rl_integral(f, a2)?;
    let nested = rl_integral(&inner, a1)?;
    let direct = rl_integral(f, FracOrder::new(a1.alpha() + a2.alpha())?)?;
    Ok(diff_max(&nested, &direct))
}

/// `(^C D^α (^C D^α f), ^C D^(2α) f)`.
pub fn caputo_semigroup_pair(f: &UniformGrid1D, ord: FracOrder) -> Result<(UniformGrid1D, UniformGrid1D)> {
    let once = caputo_derivative(f, ord)?;
    let twice = caputo_derivative(&once, ord)?;
    let double = caputo_derivative(f, FracOrder::new(2.0 * ord.alpha())?)?;
    Ok((twice, double))
}

/// The semigroup counterexample `f(x) = x` on `[0, 1]` with `m` nodes.
pub fn caputo_semigroup_counterexample(ord: FracOrder, m: usize) -> Result<(UniformGrid1D, UniformGrid1D)> {
    ord.require(0.0, 1.0, "(0, 1]")?;
    let f = UniformGrid1D::from_fn(Interval::unit(), m, |x| x)?;
    caputo_semigroup_pair(&f, ord)
}

/// Output of [`leibniz_series`].
#[derive(Debug, Clone)]
pub struct LeibnizSeries {
    pub values: UniformGrid1D,
    /// True when `g` is not a polynomial of degree `<= terms`, so the series was cut short.
    pub truncated: bool,
}

/// Fornberg weights for the `k`-th derivative at `x0` from nodes `xs`.
fn fornberg(xs: &[f64], x0: f64, k: usize) -> Vec<f64> {
    let n = xs.len();
    let mut c = vec![vec![0.0; k + 1]; n];
    let mut c1 = 1.0;
    let mut c4 = xs[0] - x0;
    c[0][0] = 1.0;
    for i in 1..n {
        let mn = i.min(k);
        let mut c2 = 1.0;
        let c5 = c4;
        c4 = xs[i] - x0;
        for j in 0..i {
            let c3 = xs[i] - xs[j];
            c2 *= c3;
            if j == i - 1 {
                for s in (1..=mn).rev() {
                    c[i][s] = c1 * (s as f64 * c[i - 1][s - 1] - c5 * c[i - 1][s]) / c2;
                }
                c[i][0] = -c1 * c5 * c[i - 1][0] / c2;
            }
            for s in (1..=mn).rev() {
                c[j][s] = (c4 * c[j][s] - s as f64 * c[j][s - 1]) / c3;
            }
            c[j][0] = c4 * c[j][0] / c3;
        }
        c1 = c2;
    }
    c.into_iter().map(|row| row[k]).collect()
}

/// `k`-th derivative at every node from a `(q+1)`-point window, exact for
/// polynomials of degree `<= q`.
fn derivative_by_stencil(g: &UniformGrid1D, k: usize, q: usize) -> Vec<f64> {
    let m = g.m();
    let width = (q + 1).min(m);
    let nodes = g.nodes();
    (0..m)
        .map(|i| {
            let start = i.saturating_sub(width / 2).min(m - width);
            let xs = &nodes[start..start + width];
            let w = fornberg(xs, nodes[i], k);
            w.iter().zip(&g.values()[start..start + width]).map(|(a, b)| a * b).sum()
        })
        .collect()
}

/// True if the `(terms+1)`-th differences of `g` on a coarse stride vanish to roundoff.
fn is_polynomial_up_to(g: &UniformGrid1D, terms: usize) -> bool {
    let k = terms + 1;
    let m = g.m();
    let stride = ((m - 1) / (k + 2)).max(1);
    let coarse: Vec<f64> = g.values().iter().step_by(stride).copied().collect();
    if coarse.len() <= k {
        return false;
    }
    let scale = g.values().iter().fold(0.0f64, |s, v| s.max(v.abs())).max(f64::MIN_POSITIVE);
    let mut d = coarse;
    for _ in 0..k {
        d = d.windows(2).map(|w| w[1] - w[0]).collect();
    }
    let noise = 2f64.powi(k as i32) * 1e-12 * scale;
    d.iter().all(|v| v.abs() <= noise)
}

/// Truncated product rule `Σ_{j=0}^{terms} C(α,j) (D^(α-j) f)(D^j g)` with
/// RL operators; exact when `g` is a polynomial of degree `<= terms`.
pub fn leibniz_series(f: &UniformGrid1D, g: &UniformGrid1D, ord: FracOrder, terms: usize) -> Result<LeibnizSeries> {
    if f.interval() != g.interval() || f.m() != g.m() {
        return Err(FvcError::DomainMismatch);
    }
    ord.require(0.0, 2.0 - f64::EPSILON, "(0, 2)")?;
    let alpha = ord.alpha();
    let truncated = !is_polynomial_up_to(g, terms);
    if truncated {
        log::warn!("leibniz_series: g is not a polynomial of degree <= {terms}; the series is truncated");
    }
    let m = f.m();
    let mut out = vec![0.0; m];
    let mut binom = 1.0;
    for j in 0..=terms {
        let dj = if j == 0 { g.values().to_vec() } else { derivative_by_stencil(g, j, terms.max(j) + 1) };
        let fj = rl_differintegral(f, alpha - j as f64)?;
        for i in 0..m {
            let t = fj.values()[i] * dj[i];
            if fj.values()[i] == SINGULAR {
                // the boundary singularity only survives if the factor is nonzero there
                if dj[i] != 0.0 {
                    out[i] = SINGULAR;
                }
            } else if out[i] != SINGULAR {
                out[i] += binom * t;
            }
        }
        binom *= (alpha - j as f64) / (j as f64 + 1.0);
    }
    Ok(LeibnizSeries { values: UniformGrid1D::from_raw(f.interval(), out), truncated })
}
