use super::series::Coeffs;
use crate::dd::{ln_rgamma_signed, CDD, DD};
use crate::error::{FvcError, Result};
use crate::quad::integrate;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

// Series results with a larger cancellation factor are replaced by the contour integral.
const SERIES_CONDITION_MAX: f64 = 1e14;
const MAX_TERMS: usize = 4000;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WrightParams {
    pub rho: f64,
    pub mu: f64,
}

impl WrightParams {
    pub fn new(rho: f64, mu: f64) -> Result<Self> {
        if !(rho > -1.0) || !rho.is_finite() || !mu.is_finite() {
            return Err(FvcError::Parameter(format!("Wright function needs rho > -1, got rho = {rho}")));
        }
        Ok(WrightParams { rho, mu })
    }
}

/// φ(ρ, μ; ·) with coefficients prepared for `|z| <= zmax`.
#[derive(Debug, Clone)]
pub struct Wright {
    params: WrightParams,
    zmax: f64,
    coeffs: Coeffs,
}

impl Wright {
    pub fn new(params: WrightParams, zmax: f64) -> Result<Self> {
        let WrightParams { rho, mu } = WrightParams::new(params.rho, params.mu)?;
        if !zmax.is_finite() || zmax < 0.0 {
            return Err(FvcError::Parameter(format!("invalid Wright argument bound {zmax}")));
        }
        let coeffs = Coeffs::build(
            |k| {
                let kd = k as f64;
                let (s, l) = ln_rgamma_signed(DD::new(rho).mul_f64(kd).add_f64(mu));
                let (_, lf) = ln_rgamma_signed(DD::new(kd + 1.0));
                (s, l + lf)
            },
            zmax,
            MAX_TERMS,
        );
        Ok(Wright { params, zmax, coeffs })
    }

    pub fn params(&self) -> WrightParams {
        self.params
    }

    pub fn eval(&self, z: f64) -> Result<f64> {
        if !z.is_finite() {
            return Err(FvcError::Parameter("non-finite Wright argument".into()));
        }
        if z.abs() > self.zmax {
            return Err(FvcError::Domain { modulus: z.abs(), cap: self.zmax });
        }
        let r = self.coeffs.sum(CDD::from_f64(z, 0.0), z.abs());
        let v = r.value.re.to_f64();
        let condition = if v != 0.0 { r.abs_sum / v.abs() } else { f64::INFINITY };
        if r.converged && condition <= SERIES_CONDITION_MAX {
            return Ok(v);
        }
        if self.params.rho < 0.0 {
            let h = hankel(self.params, z);
            if h.is_finite() {
                return Ok(h);
            }
            return Err(FvcError::Overflow(z));
        }
        if r.converged && condition <= 1e20 {
            return Ok(v);
        }
        Err(FvcError::PrecisionLoss { condition })
    }
}

/// φ(ρ, μ; z) = Σ z^k / (k! Γ(ρk + μ)).
pub fn wright(p: WrightParams, z: f64) -> Result<f64> {
    Wright::new(p, z.abs())?.eval(z)
}

/// φ(ρ,μ;z) = (1/2πi) ∫_Ha exp(σ + z σ^(-ρ)) σ^(-μ) dσ for -1 < ρ < 0.
///
/// The contour is the arc |σ| = R, |arg σ| <= θ0, closed by two rays at
/// ±θ0. For z < 0 the arc passes through the saddle point and the rays
/// follow directions where both exponentials decay.
fn hankel(p: WrightParams, z: f64) -> f64 {
    let nu = -p.rho;
    let mu = p.mu;
    let (r, theta0) = if z < 0.0 {
        let saddle = (-z * nu).powf(1.0 / (1.0 - nu));
        (saddle.max(1.0), PI / (1.0 + nu))
    } else {
        (1.0, PI)
    };
    // h(σ) = σ + z σ^ν - μ ln σ; the integrand is exp(h) dσ
    let h = |rad: f64, th: f64| -> Complex64 {
        let ln_sigma = Complex64::new(rad.ln(), th);
        let sigma = Complex64::from_polar(rad, th);
        sigma + z * (nu * ln_sigma).exp() - mu * ln_sigma
    };
    let href = h(r, 0.0).re;
    if href < -745.0 {
        return 0.0;
    }
    let arc = |th: f64| -> f64 {
        let e = (h(r, th) - href).exp();
        // dσ = i σ dθ
        (e * Complex64::new(0.0, 1.0) * Complex64::from_polar(r, th)).im
    };
    let dir = Complex64::from_polar(1.0, theta0);
    let ray = |t: f64| -> f64 { ((h(t, theta0) - href).exp() * dir).im };
    let mut total = integrate(arc, 0.0, theta0, 1e-300, 1e-14).value;
    let decay = (-theta0.cos()).max(0.05);
    let step = 6.0 / decay;
    let t_min =
        if z > 0.0 && (nu * PI).cos() > 0.0 { (z * nu * (nu * PI).cos()).powf(1.0 / (1.0 - nu)) * 2.0 } else { r };
    let mut a = r;
    for _ in 0..20_000 {
        let piece = integrate(ray, a, a + step, 1e-300, 1e-14).value;
        total += piece;
        a += step;
        if a > t_min && piece.abs() <= 1e-17 * total.abs() {
            break;
        }
    }
    total / PI * href.exp()
}
