use super::series::Coeffs;
use crate::dd::{ln_rgamma_signed, CDD, DD};
use crate::error::{FvcError, Result};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

/// Support cap on `|z|` for [`mittag_leffler`].
pub const Z_MAX: f64 = 30.0;
// Largest |z|^(1/alpha) kept: the peak term is about exp(|z|^(1/alpha)).
const SCALED_MAX: f64 = 700.0;
// Largest sum(|terms|)/|sum| accepted; double-double rounding then stays near 1e-10.
const CONDITION_MAX: f64 = 1e20;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MLParams {
    pub alpha: f64,
    pub beta: f64,
}

impl MLParams {
    pub fn new(alpha: f64, beta: f64) -> Result<Self> {
        if !(alpha > 0.0) || !alpha.is_finite() || !beta.is_finite() {
            return Err(FvcError::Parameter(format!("Mittag-Leffler needs alpha > 0, got ({alpha}, {beta})")));
        }
        Ok(MLParams { alpha, beta })
    }
}

/// Value of E_{α,β}(z) with its diagnostics.
#[derive(Debug, Clone, Copy)]
pub struct MlEval {
    pub value: Complex64,
    /// Upper bound on the magnitude of the discarded tail.
    pub truncation_bound: f64,
    pub terms: usize,
    /// `Σ|c_k z^k| / |E|`, the cancellation factor.
    pub condition: f64,
}

/// E_{α,β} with coefficients prepared for all `|z| <= zmax`.
#[derive(Debug, Clone)]
pub struct MittagLeffler {
    params: MLParams,
    zmax: f64,
    coeffs: Coeffs,
}

/// The effective cap on `|z|` for order `alpha`.
pub fn support_radius(alpha: f64) -> f64 {
    Z_MAX.min(SCALED_MAX.powf(alpha))
}

impl MittagLeffler {
    pub fn new(params: MLParams, zmax: f64) -> Result<Self> {
        let params = MLParams::new(params.alpha, params.beta)?;
        let cap = support_radius(params.alpha);
        if !(zmax <= cap) {
            return Err(FvcError::Domain { modulus: zmax, cap });
        }
        let MLParams { alpha, beta } = params;
        let coeffs = Coeffs::build(|k| ln_rgamma_signed(DD::new(alpha).mul_f64(k as f64).add_f64(beta)), zmax, 20_000);
        Ok(MittagLeffler { params, zmax, coeffs })
    }

    pub fn params(&self) -> MLParams {
        self.params
    }

    pub fn eval(&self, z: Complex64) -> Result<Complex64> {
        self.eval_detailed(z).map(|e| e.value)
    }

    pub fn eval_detailed(&self, z: Complex64) -> Result<MlEval> {
        let s = z.norm();
        if !s.is_finite() {
            return Err(FvcError::Parameter("non-finite Mittag-Leffler argument".into()));
        }
        if s > self.zmax {
            return Err(FvcError::Domain { modulus: s, cap: self.zmax });
        }
        let r = self.coeffs.sum(CDD::from_f64(z.re, z.im), s);
        if !r.converged {
            return Err(FvcError::PrecisionLoss { condition: f64::INFINITY });
        }
        let value = Complex64::new(r.value.re.to_f64(), r.value.im.to_f64());
        let mag = value.norm();
        if !value.re.is_finite() || !value.im.is_finite() {
            return Err(FvcError::Overflow(s));
        }
        let condition = if mag > 0.0 { r.abs_sum / mag } else { f64::INFINITY };
        if condition > CONDITION_MAX {
            return Err(FvcError::PrecisionLoss { condition });
        }
        Ok(MlEval { value, truncation_bound: r.bound, terms: r.terms, condition })
    }
}

/// E_{α,β}(z) = Σ z^k / Γ(αk + β) for `|z| <= min(Z_MAX, 700^α)`.
pub fn mittag_leffler(p: MLParams, z: Complex64) -> Result<Complex64> {
    MittagLeffler::new(p, z.norm())?.eval(z)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: Complex64, b: Complex64, tol: f64) -> bool {
        (a - b).norm() <= tol * b.norm()
    }

    #[test]
    fn reference_values() {
        // mpmath series with 60 digits
        let cases = [
            (2.0, 1.0, Complex64::new(-1.0, 0.0), Complex64::new(0.5403023058681397174, 0.0)),
            (0.5, 1.0, Complex64::new(0.0, -1.0), Complex64::new(0.3678794411714423216, -0.60715770584139372912)),
            (0.5, 1.0, Complex64::new(0.0, 1.0), Complex64::new(0.3678794411714423216, 0.60715770584139372912)),
            (0.5, 1.0, Complex64::new(1.0, 0.0), Complex64::new(5.0089800807622834663, 0.0)),
            (0.7, 1.3, Complex64::new(2.0, -3.0), Complex64::new(1.882459538836225732, 1.0574397364820723143)),
            (1.5, 0.5, Complex64::new(-10.0, 0.0), Complex64::new(0.10530163581091526914, 0.0)),
            (0.8, 1.0, Complex64::new(-5.0, 1.0), Complex64::new(0.05415306093632531715, 0.013989773669751308381)),
        ];
        for (a, b, z, want) in cases {
            let got = mittag_leffler(MLParams::new(a, b).unwrap(), z).unwrap();
            assert!(close(got, want, 1e-12), "E_({a},{b})({z}) = {got}, want {want}");
        }
    }

    #[test]
    fn exponential_and_zero() {
        let e = mittag_leffler(MLParams::new(1.0, 1.0).unwrap(), Complex64::new(1.0, 0.0)).unwrap();
        assert!((e.re - std::f64::consts::E).abs() < 1e-15);
        let p = MLParams::new(0.6, 2.5).unwrap();
        let v = mittag_leffler(p, Complex64::new(0.0, 0.0)).unwrap();
        assert!((v.re * crate::special::gamma(2.5).unwrap() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn domain_cap_and_precision_loss() {
        let p = MLParams::new(1.0, 1.0).unwrap();
        assert!(matches!(mittag_leffler(p, Complex64::new(31.0, 0.0)), Err(FvcError::Domain { .. })));
        // exp(-20) sums with a cancellation factor of e^40, exp(-30) would need e^60
        let v = mittag_leffler(p, Complex64::new(-20.0, 0.0)).unwrap();
        assert!((v.re / (-20f64).exp() - 1.0).abs() < 1e-9);
        assert!(matches!(mittag_leffler(p, Complex64::new(-30.0, 0.0)), Err(FvcError::PrecisionLoss { .. })));
        // |z|^(1/α) = 900 is past the scaled cap
        let p = MLParams::new(0.5, 1.0).unwrap();
        assert!(matches!(mittag_leffler(p, Complex64::new(30.0, 0.0)), Err(FvcError::Domain { .. })));
        // alternating series with cancellation far beyond double-double
        assert!(matches!(mittag_leffler(p, Complex64::new(-25.0, 0.0)), Err(FvcError::PrecisionLoss { .. })));
    }

    #[test]
    fn truncation_bound_dominates_next_term() {
        let p = MLParams::new(0.9, 1.1).unwrap();
        let ml = MittagLeffler::new(p, 5.0).unwrap();
        let z = Complex64::new(3.0, -4.0);
        let r = ml.eval_detailed(z).unwrap();
        let k = r.terms as f64;
        let next = z.norm().powf(k) * crate::special::rgamma(0.9 * k + 1.1).abs();
        assert!(r.truncation_bound >= next);
    }

    #[test]
    fn rejects_bad_alpha() {
        assert!(MLParams::new(0.0, 1.0).is_err());
        assert!(MLParams::new(-1.0, 1.0).is_err());
    }
}
