//! Power series with log-magnitude coefficients, summed in double-double.
//!
//! Coefficients are stored as `sign * exp(ln)` so that neither `z^k` nor
//! `c_k` has to be representable on its own; the running power of `z` is
//! renormalised by exact powers of two and the scale is pushed into the
//! coefficient factor.

use crate::dd::{CDD, DD, LN2};

#[derive(Debug, Clone)]
pub(crate) struct Coeffs {
    sign: Vec<f64>,
    ln: Vec<DD>,
    // ratio[k] = c_k / c_{k-1}; zero when c_{k-1} vanishes
    ratio: Vec<DD>,
}

#[derive(Debug, Clone, Copy)]
pub(crate) struct SeriesSum {
    pub value: CDD,
    pub abs_sum: f64,
    pub bound: f64,
    pub terms: usize,
    pub converged: bool,
}

impl Coeffs {
    /// Builds coefficients until `k ln(smax) + ln c_k` has fallen ~130 e-folds
    /// below its peak, or `kmax` terms.
    pub fn build<F: Fn(usize) -> (f64, DD)>(coef: F, smax: f64, kmax: usize) -> Coeffs {
        let lns = if smax > 0.0 { smax.ln() } else { -700.0 };
        let mut sign = Vec::new();
        let mut ln = Vec::new();
        let mut ratio = Vec::new();
        let mut peak = f64::NEG_INFINITY;
        let mut last = f64::NEG_INFINITY;
        let mut falling = 0usize;
        let mut complete = false;
        let mut extra = 0usize;
        for k in 0..kmax {
            let (s, l) = coef(k);
            let r = match sign.last() {
                Some(&ps) if ps != 0.0 && s != 0.0 => {
                    let pl: DD = *ln.last().unwrap();
                    let v = (l - pl).exp();
                    if s * ps < 0.0 {
                        -v
                    } else {
                        v
                    }
                }
                _ => DD::ZERO,
            };
            sign.push(s);
            ln.push(l);
            ratio.push(r);
            if complete {
                extra += 1;
                if extra == 2 {
                    break;
                }
                continue;
            }
            if s != 0.0 {
                let lt = k as f64 * lns + l.to_f64();
                peak = peak.max(lt);
                falling = if lt < last { falling + 1 } else { 0 };
                last = lt;
                if k >= 2 && falling >= 2 && lt < peak - 130.0 {
                    complete = true;
                }
            }
        }
        Coeffs { sign, ln, ratio }
    }

    pub fn len(&self) -> usize {
        self.sign.len()
    }

    fn direct(&self, k: usize, e: i32) -> DD {
        if self.sign[k] == 0.0 {
            return DD::ZERO;
        }
        let v = (self.ln[k] + LN2.mul_f64(e as f64)).exp();
        if self.sign[k] < 0.0 {
            -v
        } else {
            v
        }
    }

    /// Sums `Σ c_k z^k` for `|z| = s`. Stops once the terms are past their peak
    /// and negligible against the partial sum.
    pub fn sum(&self, z: CDD, s: f64) -> SeriesSum {
        let n = self.len();
        let mut w = CDD::from_f64(1.0, 0.0);
        let mut e = 0i32;
        let mut d = self.direct(0, 0);
        let mut acc = w.scale(d);
        let mut abs_sum = d.to_f64().abs();
        if s == 0.0 {
            return SeriesSum { value: acc, abs_sum, bound: 0.0, terms: 1, converged: true };
        }
        for k in 1..n {
            w = w * z;
            let m = w.norm_f64();
            let mut sh = 0i32;
            if m > 2.0 || (m < 0.5 && m > 0.0) {
                sh = m.log2().round() as i32;
                let f = 2f64.powi(-sh);
                w = CDD::new(w.re.mul_f64(f), w.im.mul_f64(f));
                e += sh;
            }
            d = if self.sign[k - 1] != 0.0 && d.hi != 0.0 {
                (d * self.ratio[k]).mul_f64(2f64.powi(sh))
            } else {
                self.direct(k, e)
            };
            let term = w.scale(d);
            acc = acc + term;
            let tm = term.norm_f64();
            abs_sum += tm;
            let next_ratio = if k + 1 < n { self.ratio[k + 1].to_f64().abs() * s } else { f64::INFINITY };
            let sum_mag = acc.norm_f64();
            // the second test stops at the double-double rounding floor of an ill-conditioned sum
            let negligible = tm <= 1e-34 * sum_mag || tm <= 1e-36 * abs_sum;
            if self.sign[k] != 0.0 && negligible && next_ratio < 1.0 {
                let first = tm * next_ratio;
                let q = if k + 2 < n { self.ratio[k + 2].to_f64().abs() * s } else { 1.0 };
                let bound = if q < 1.0 { first / (1.0 - q) } else { f64::INFINITY };
                return SeriesSum { value: acc, abs_sum, bound, terms: k + 1, converged: true };
            }
        }
        SeriesSum { value: acc, abs_sum, bound: f64::INFINITY, terms: n, converged: false }
    }
}
