//! Double-double arithmetic.
//!
//! A value is stored as an unevaluated sum `hi + lo` with `|lo| <= ulp(hi)/2`,
//! giving roughly 32 significant digits. Only the operations needed by the
//! special-function series are provided: the four field operations, `exp`,
//! `ln`, `sin(pi x)` and a log-gamma.

use std::cmp::Ordering;
use std::ops::{Add, Div, Mul, Neg, Sub};

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct DD {
    pub hi: f64,
    pub lo: f64,
}

#[inline]
fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    let e = (a - (s - bb)) + (b - bb);
    (s, e)
}

#[inline]
fn quick_two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let e = b - (s - a);
    (s, e)
}

#[inline]
fn two_prod(a: f64, b: f64) -> (f64, f64) {
    let p = a * b;
    let e = a.mul_add(b, -p);
    (p, e)
}

pub const PI: DD = DD { hi: std::f64::consts::PI, lo: 1.2246467991473532e-16 };
pub const LN2: DD = DD { hi: std::f64::consts::LN_2, lo: 2.3190468138462996e-17 };
pub const HALF_LN_2PI: DD = DD { hi: 0.9189385332046728, lo: -3.8782941580672414e-17 };

impl DD {
    pub const ZERO: DD = DD { hi: 0.0, lo: 0.0 };
    pub const ONE: DD = DD { hi: 1.0, lo: 0.0 };

    #[inline]
    pub const fn new(x: f64) -> Self {
        DD { hi: x, lo: 0.0 }
    }

    #[inline]
    pub fn from_parts(hi: f64, lo: f64) -> Self {
        let (h, l) = two_sum(hi, lo);
        DD { hi: h, lo: l }
    }

    #[inline]
    pub fn to_f64(self) -> f64 {
        self.hi + self.lo
    }

    #[inline]
    pub fn abs(self) -> Self {
        if self.hi < 0.0 || (self.hi == 0.0 && self.lo < 0.0) {
            -self
        } else {
            self
        }
    }

    #[inline]
    pub fn is_finite(self) -> bool {
        self.hi.is_finite() && self.lo.is_finite()
    }

    #[inline]
    pub fn mul_f64(self, b: f64) -> Self {
        let (p, e) = two_prod(self.hi, b);
        let e = e + self.lo * b;
        let (h, l) = quick_two_sum(p, e);
        DD { hi: h, lo: l }
    }

    #[inline]
    pub fn add_f64(self, b: f64) -> Self {
        let (s, e) = two_sum(self.hi, b);
        let e = e + self.lo;
        let (h, l) = quick_two_sum(s, e);
        DD { hi: h, lo: l }
    }

    pub fn recip(self) -> Self {
        DD::ONE / self
    }

    /// Nearest integer (ties away from zero), exact.
    pub fn round(self) -> Self {
        let hi = self.hi.round();
        if hi == self.hi {
            // hi already integral; the fractional part sits in lo
            let lo = self.lo.round();
            DD::from_parts(hi, lo)
        } else if (hi - self.hi).abs() == 0.5 {
            // a tie on hi is decided by the sign of lo
            let adj = if self.lo > 0.0 && hi < self.hi {
                hi + 1.0
            } else if self.lo < 0.0 && hi > self.hi {
                hi - 1.0
            } else {
                hi
            };
            DD::new(adj)
        } else {
            DD::new(hi)
        }
    }

    /// `exp` to double-double accuracy.
    pub fn exp(self) -> Self {
        if self.hi > 709.78 {
            return DD::new(f64::INFINITY);
        }
        if self.hi < -745.0 {
            return DD::ZERO;
        }
        // x = k ln2 + r, then r is scaled by 2^-10 so the Taylor series converges fast
        let k = (self.hi / LN2.hi).round();
        let r = self - LN2.mul_f64(k);
        let r = r.mul_f64(1.0 / 1024.0);
        let mut term = r;
        let mut sum = r;
        let mut i = 2.0;
        loop {
            term = (term * r) / DD::new(i);
            sum = sum + term;
            if term.hi.abs() < 1e-36 * sum.hi.abs().max(1e-300) || i > 30.0 {
                break;
            }
            i += 1.0;
        }
        // expm1 squaring: (1 + s)^2 - 1 = 2s + s^2 keeps the small part exact
        for _ in 0..10 {
            sum = sum.mul_f64(2.0) + sum * sum;
        }
        let res = sum.add_f64(1.0);
        let scale = 2f64.powi(k as i32);
        DD { hi: res.hi * scale, lo: res.lo * scale }
    }

    /// Natural logarithm; `self` must be positive.
    pub fn ln(self) -> Self {
        if self.hi <= 0.0 {
            return DD::new(f64::NAN);
        }
        let y0 = DD::new(self.hi.ln());
        // one Newton step on exp(y) = x doubles the accuracy of the f64 guess
        y0 + self * (-y0).exp() - DD::ONE
    }

    /// `sin(pi * t)` for any finite `t`, with exact argument reduction.
    pub fn sin_pi(self) -> Self {
        let n = self.round();
        let t = self - n;
        let u = PI * t;
        let u2 = u * u;
        let mut term = u;
        let mut sum = u;
        let mut k = 1.0;
        while term.hi.abs() > 1e-36 * sum.hi.abs().max(1e-300) && k < 60.0 {
            term = -(term * u2) / DD::new((2.0 * k) * (2.0 * k + 1.0));
            sum = sum + term;
            k += 1.0;
        }
        let parity = (n.hi.rem_euclid(2.0) + n.lo.rem_euclid(2.0)).rem_euclid(2.0);
        if parity == 1.0 {
            -sum
        } else {
            sum
        }
    }

    /// `sqrt` via one Newton correction of the f64 root.
    pub fn sqrt(self) -> Self {
        if self.hi <= 0.0 {
            return DD::ZERO;
        }
        let s = self.hi.sqrt();
        let (p, e) = two_prod(s, s);
        let diff = (self.hi - p - e + self.lo) / (2.0 * s);
        DD::from_parts(s, diff)
    }
}

impl From<f64> for DD {
    fn from(x: f64) -> Self {
        DD::new(x)
    }
}

impl Neg for DD {
    type Output = DD;
    #[inline]
    fn neg(self) -> DD {
        DD { hi: -self.hi, lo: -self.lo }
    }
}

impl Add for DD {
    type Output = DD;
    #[inline]
    fn add(self, b: DD) -> DD {
        let (s, e) = two_sum(self.hi, b.hi);
        let (t, f) = two_sum(self.lo, b.lo);
        let e = e + t;
        let (s, e) = quick_two_sum(s, e);
        let e = e + f;
        let (h, l) = quick_two_sum(s, e);
        DD { hi: h, lo: l }
    }
}

impl Sub for DD {
    type Output = DD;
    #[inline]
    fn sub(self, b: DD) -> DD {
        self + (-b)
    }
}

impl Mul for DD {
    type Output = DD;
    #[inline]
    fn mul(self, b: DD) -> DD {
        let (p, e) = two_prod(self.hi, b.hi);
        let e = e + (self.hi * b.lo + self.lo * b.hi);
        let (h, l) = quick_two_sum(p, e);
        DD { hi: h, lo: l }
    }
}

impl Div for DD {
    type Output = DD;
    fn div(self, b: DD) -> DD {
        let q1 = self.hi / b.hi;
        let r = self - b.mul_f64(q1);
        let q2 = r.hi / b.hi;
        let r = r - b.mul_f64(q2);
        let q3 = r.hi / b.hi;
        let (h, l) = quick_two_sum(q1, q2);
        DD { hi: h, lo: l }.add_f64(q3)
    }
}

impl PartialOrd for DD {
    fn partial_cmp(&self, other: &DD) -> Option<Ordering> {
        match self.hi.partial_cmp(&other.hi) {
            Some(Ordering::Equal) => self.lo.partial_cmp(&other.lo),
            o => o,
        }
    }
}

/// Complex double-double, only what the Mittag-Leffler series needs.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct CDD {
    pub re: DD,
    pub im: DD,
}

impl CDD {
    pub fn new(re: DD, im: DD) -> Self {
        CDD { re, im }
    }

    pub fn from_f64(re: f64, im: f64) -> Self {
        CDD { re: DD::new(re), im: DD::new(im) }
    }

    pub fn scale(self, s: DD) -> Self {
        CDD { re: self.re * s, im: self.im * s }
    }

    pub fn norm_f64(self) -> f64 {
        self.re.to_f64().hypot(self.im.to_f64())
    }
}

impl Add for CDD {
    type Output = CDD;
    fn add(self, b: CDD) -> CDD {
        CDD { re: self.re + b.re, im: self.im + b.im }
    }
}

impl Mul for CDD {
    type Output = CDD;
    fn mul(self, b: CDD) -> CDD {
        CDD { re: self.re * b.re - self.im * b.im, im: self.re * b.im + self.im * b.re }
    }
}

// Stirling coefficients B_{2k} / (2k (2k - 1)), k = 1..=12, split into hi + lo.
const STIRLING: [(f64, f64); 12] = [
    (0.08333333333333333, 4.625929269271485e-18),
    (-0.002777777777777778, 1.0601087908747154e-19),
    (0.0007936507936507937, 6.883823317368282e-22),
    (-0.0005952380952380953, 5.36938218754726e-20),
    (0.0008417508417508417, 3.6870174889237694e-20),
    (-0.0019175269175269176, 1.0675702776872475e-19),
    (0.00641025641025641, 2.2240044563805217e-19),
    (-0.029550653594771242, 4.861760957508855e-19),
    (0.17964437236883057, -6.401600482710946e-19),
    (-1.3924322169059011, 1.5837056989230303e-17),
    (13.402864044168393, -6.154114101993966e-16),
    (-156.84828462600203, 9.391823141715389e-15),
];

const STIRLING_MIN: f64 = 40.0;

/// `ln Γ(x)` for `x >= 0.5`.
fn ln_gamma_pos(x: DD) -> DD {
    let mut y = x;
    let mut shift = DD::ONE;
    let mut have_shift = false;
    while y.hi < STIRLING_MIN {
        shift = shift * y;
        y = y.add_f64(1.0);
        have_shift = true;
    }
    let lny = y.ln();
    let mut s = (y.add_f64(-0.5)) * lny - y + HALF_LN_2PI;
    let inv = y.recip();
    let inv2 = inv * inv;
    let mut p = inv;
    for &(h, l) in STIRLING.iter() {
        s = s + p * DD { hi: h, lo: l };
        p = p * inv2;
    }
    if have_shift {
        s - shift.ln()
    } else {
        s
    }
}

/// `(sign, ln|1/Γ(x)|)` for any real `x`. At the poles the sign is 0.
pub fn ln_rgamma_signed(x: DD) -> (f64, DD) {
    if x.hi >= 0.5 {
        return (1.0, -ln_gamma_pos(x));
    }
    let r = x.round();
    if r == x {
        return (0.0, DD::new(f64::NEG_INFINITY));
    }
    // 1/Γ(x) = Γ(1 - x) sin(pi x) / pi
    let s = x.sin_pi();
    let sign = if s.hi < 0.0 { -1.0 } else { 1.0 };
    let lg = ln_gamma_pos(DD::ONE - x);
    (sign, lg + s.abs().ln() - PI.ln())
}

/// `1/Γ(x)` in double-double; zero at the poles, may overflow to infinity.
pub fn rgamma(x: DD) -> DD {
    let (sign, l) = ln_rgamma_signed(x);
    if sign == 0.0 {
        return DD::ZERO;
    }
    let v = l.exp();
    if sign < 0.0 {
        -v
    } else {
        v
    }
}
