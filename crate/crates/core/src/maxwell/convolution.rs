use crate::error::{FvcError, Result};
use crate::frac1d::{caputo_derivative, first_derivative, rl_integral};
use crate::grid::{FracOrder, UniformGrid1D};
use serde::{Deserialize, Serialize};

/// Power-law response kernel `e(x - x') = (x - x')^{-α} / Γ(1 - α)`
/// restricted to `0 < x' < x`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KernelSpec {
    alpha: FracOrder,
}

impl KernelSpec {
    pub fn new(alpha: FracOrder) -> Result<Self> {
        if !(alpha.alpha() < 1.0) {
            return Err(FvcError::OrderOutOfRange { alpha: alpha.alpha(), range: "(0, 1)" });
        }
        Ok(KernelSpec { alpha })
    }

    pub fn alpha(&self) -> FracOrder {
        self.alpha
    }
}

/// `(∫_0^x e(x - x') E'(x') dx', ^CD^α E)`: the convolution with `E'` taken
/// by central differences and integrated with the product-trapezoid
/// weights of `I^{1-α}`, next to the direct L1 Caputo derivative.
pub fn caputo_from_convolution(e: &UniformGrid1D, k: KernelSpec) -> Result<(UniformGrid1D, UniformGrid1D)> {
    let alpha = k.alpha.alpha();
    let mut de = vec![0.0; e.m()];
    first_derivative(e.values(), e.h(), &mut de);
    let conv = rl_integral(&e.with_values(de), FracOrder::new(1.0 - alpha)?)?;
    Ok((conv, caputo_derivative(e, k.alpha)?))
}

/// Max-norm gap between the two halves of [`caputo_from_convolution`].
pub fn convolution_gap(e: &UniformGrid1D, k: KernelSpec) -> Result<f64> {
    let (a, b) = caputo_from_convolution(e, k)?;
    Ok(a.values().iter().zip(b.values()).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::Interval;
    use crate::special::gamma_ratio;

    fn kernel(a: f64) -> KernelSpec {
        KernelSpec::new(FracOrder::new(a).unwrap()).unwrap()
    }

    #[test]
    fn square_matches_power_rule() {
        let e = UniformGrid1D::from_fn(Interval::unit(), 257, |x| x * x).unwrap();
        let (conv, cap) = caputo_from_convolution(&e, kernel(0.5)).unwrap();
        let c = gamma_ratio(3.0, 2.5).unwrap();
        for i in [64, 128, 256] {
            let want = c * e.x(i).powf(1.5);
            assert!((conv.values()[i] - want).abs() < 1e-12, "{i}");
            assert!((cap.values()[i] - want).abs() < 2e-3, "{i}");
        }
    }

    #[test]
    fn constant_gives_zero() {
        let e = UniformGrid1D::from_fn(Interval::unit(), 64, |_| 3.5).unwrap();
        let (conv, cap) = caputo_from_convolution(&e, kernel(0.3)).unwrap();
        assert!(conv.values().iter().chain(cap.values()).all(|&v| v == 0.0));
    }

    #[test]
    fn near_one_approaches_first_derivative() {
        let e = UniformGrid1D::from_fn(Interval::unit(), 513, |x| x.sin()).unwrap();
        let (conv, cap) = caputo_from_convolution(&e, kernel(0.99)).unwrap();
        for i in [128, 256, 512] {
            let d = e.x(i).cos();
            assert!((conv.values()[i] - d).abs() < 0.05 * d && (cap.values()[i] - d).abs() < 0.05 * d);
        }
    }

    #[test]
    fn gap_shrinks_under_refinement() {
        let gaps: Vec<f64> = [128, 256, 512, 1024]
            .iter()
            .map(|&m| {
                convolution_gap(&UniformGrid1D::from_fn(Interval::unit(), m, |x| (2.0 * x).exp()).unwrap(), kernel(0.6))
                    .unwrap()
            })
            .collect();
        assert!(gaps.windows(2).all(|w| w[1] < w[0]), "{gaps:?}");
    }

    #[test]
    fn order_one_is_rejected() {
        assert!(KernelSpec::new(FracOrder::new(1.0).unwrap()).is_err());
    }
}
