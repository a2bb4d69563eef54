//! Quadrature weights for the RL integral and the L1 Caputo scheme.
//!
//! Both weight families depend only on the node count and the order, so
//! they are built once and shared through a read-mostly cache.

use crate::special::gamma;
use std::collections::HashMap;
use std::sync::{Arc, OnceLock, RwLock};

/// Product-trapezoid weights of order α on `m` nodes.
///
/// `(I^α f)(x_j) = scale(h) * (end[j] f_0 + Σ_{k=1}^{j-1} inner[j-k] f_k + f_j)`.
#[derive(Debug)]
pub(crate) struct RlWeights {
    pub inner: Vec<f64>,
    pub end: Vec<f64>,
    pub norm: f64,
    alpha: f64,
}

impl RlWeights {
    pub fn scale(&self, h: f64) -> f64 {
        h.powf(self.alpha) * self.norm
    }
}

/// L1 weights `b_l = (l+1)^(1-α) - l^(1-α)` with `h^(-α)/Γ(2-α)` factored out.
#[derive(Debug)]
pub(crate) struct L1Weights {
    pub b: Vec<f64>,
    pub norm: f64,
    alpha: f64,
}

impl L1Weights {
    pub fn scale(&self, h: f64) -> f64 {
        h.powf(-self.alpha) * self.norm
    }
}

type Key = (usize, u64);

fn rl_cache() -> &'static RwLock<HashMap<Key, Arc<RlWeights>>> {
    static C: OnceLock<RwLock<HashMap<Key, Arc<RlWeights>>>> = OnceLock::new();
    C.get_or_init(|| RwLock::new(HashMap::new()))
}

fn l1_cache() -> &'static RwLock<HashMap<Key, Arc<L1Weights>>> {
    static C: OnceLock<RwLock<HashMap<Key, Arc<L1Weights>>>> = OnceLock::new();
    C.get_or_init(|| RwLock::new(HashMap::new()))
}

fn cached<W, F: FnOnce() -> W>(cache: &RwLock<HashMap<Key, Arc<W>>>, key: Key, build: F) -> Arc<W> {
    if let Some(w) = cache.read().expect("weight cache poisoned").get(&key) {
        return Arc::clone(w);
    }
    let w = Arc::new(build());
    let mut guard = cache.write().expect("weight cache poisoned");
    Arc::clone(guard.entry(key).or_insert(w))
}

pub(crate) fn rl_weights(m: usize, alpha: f64) -> Arc<RlWeights> {
    cached(rl_cache(), (m, alpha.to_bits()), || build_rl(m, alpha))
}

pub(crate) fn l1_weights(m: usize, alpha: f64) -> Arc<L1Weights> {
    cached(l1_cache(), (m, alpha.to_bits()), || build_l1(m, alpha))
}

/// Σ_{k>=2} C(p,k) u^k, the tail of (1+u)^p after its linear part.
fn binomial_tail(p: f64, u: f64) -> f64 {
    let mut c = p * (p - 1.0) / 2.0;
    let mut uk = u * u;
    let mut sum = c * uk;
    let mut k = 2.0;
    loop {
        c *= (p - k) / (k + 1.0);
        uk *= u;
        let t = c * uk;
        sum += t;
        k += 1.0;
        if t.abs() <= 1e-18 * sum.abs() || k > 200.0 {
            break;
        }
    }
    sum
}

fn build_rl(m: usize, alpha: f64) -> RlWeights {
    let p = alpha + 1.0;
    let mut inner = vec![0.0; m];
    let mut end = vec![0.0; m];
    for l in 1..m {
        let lf = l as f64;
        // (l+1)^p - 2 l^p + (l-1)^p, cancellation-free for large l
        inner[l] = if l < 4 {
            (lf + 1.0).powf(p) - 2.0 * lf.powf(p) + (lf - 1.0).powf(p)
        } else {
            let u = 1.0 / lf;
            lf.powf(p) * (binomial_tail(p, u) + binomial_tail(p, -u))
        };
        // (l-1)^p - (l-1-α) l^α
        end[l] = if l < 4 {
            (lf - 1.0).powf(p) - (lf - 1.0 - alpha) * lf.powf(alpha)
        } else {
            lf.powf(p) * binomial_tail(p, -1.0 / lf)
        };
    }
    let norm = 1.0 / gamma(alpha + 2.0).expect("alpha + 2 is a regular point of gamma");
    RlWeights { inner, end, norm, alpha }
}

fn build_l1(m: usize, alpha: f64) -> L1Weights {
    let q = 1.0 - alpha;
    let mut b = vec![0.0; m];
    b[0] = 1.0;
    for (l, w) in b.iter_mut().enumerate().skip(1) {
        let lf = l as f64;
        *w = lf.powf(q) * (q * (1.0 / lf).ln_1p()).exp_m1();
    }
    let norm = 1.0 / gamma(2.0 - alpha).expect("2 - alpha is a regular point of gamma");
    L1Weights { b, norm, alpha }
}
