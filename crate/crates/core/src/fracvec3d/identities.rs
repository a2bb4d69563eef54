//! Residuals of the fractional vector identities.
//!
//! The fully discrete residuals apply the discrete operators twice. Discrete
//! axis derivatives act on separate array axes and commute exactly, so these
//! sit at rounding level for any field. The semi-discrete variants take the
//! inner operator exactly from a registry field and only the outer one
//! discretely; they carry the scheme error and shrink under refinement.

use super::field::{BoxDomain, ScalarField3D, VectorField3D};
use super::ops::{caputo_axis, curl_alpha, div_alpha, grad_alpha, nabla_square, vector_order};
use super::registry::{ScalarFieldSpec, VectorFieldSpec};
use crate::error::Result;
use crate::frac1d::{caputo_semigroup_pair, Func1D};
use crate::grid::{FracOrder, Interval, UniformGrid1D};

/// Interior max of `Curl^α Grad^α f`.
pub fn curl_grad_residual(f: &ScalarField3D, ord: FracOrder) -> Result<f64> {
    Ok(curl_alpha(&grad_alpha(f, ord)?, ord)?.interior_max_abs())
}

/// Interior max of `Div^α Curl^α F`.
pub fn div_curl_residual(field: &VectorField3D, ord: FracOrder) -> Result<f64> {
    Ok(div_alpha(&curl_alpha(field, ord)?, ord)?.interior_max_abs())
}

/// Interior max of `Curl^α Curl^α F - Grad^α Div^α F + (^CD^α_W)^2 F`.
pub fn double_curl_residual(field: &VectorField3D, ord: FracOrder) -> Result<f64> {
    let cc = curl_alpha(&curl_alpha(field, ord)?, ord)?;
    let gd = grad_alpha(&div_alpha(field, ord)?, ord)?;
    let sq = nabla_square(field, ord)?;
    Ok(cc.sub(&gd)?.add(&sq)?.interior_max_abs())
}

/// [`curl_grad_residual`] with the inner gradient exact.
pub fn curl_grad_semidiscrete(spec: &ScalarFieldSpec, domain: BoxDomain, ord: FracOrder) -> Result<f64> {
    vector_order(ord)?;
    Ok(curl_alpha(&spec.grad_exact(domain, ord)?, ord)?.interior_max_abs())
}

/// [`div_curl_residual`] with the inner curl exact.
pub fn div_curl_semidiscrete(spec: &VectorFieldSpec, domain: BoxDomain, ord: FracOrder) -> Result<f64> {
    vector_order(ord)?;
    Ok(div_alpha(&spec.curl_exact(domain, ord)?, ord)?.interior_max_abs())
}

/// [`double_curl_residual`] with every inner derivative exact.
pub fn double_curl_semidiscrete(spec: &VectorFieldSpec, domain: BoxDomain, ord: FracOrder) -> Result<f64> {
    vector_order(ord)?;
    let cc = curl_alpha(&spec.curl_exact(domain, ord)?, ord)?;
    let gd = grad_alpha(&spec.div_exact(domain, ord)?, ord)?;
    let mut sq = VectorField3D::zeros(domain);
    for l in 0..3 {
        let inner = spec.caputo_axis(domain, l, ord)?;
        let outer = VectorField3D::new(
            caputo_axis(inner.component(0), l, ord)?,
            caputo_axis(inner.component(1), l, ord)?,
            caputo_axis(inner.component(2), l, ord)?,
        )?;
        sq = sq.add(&outer)?;
    }
    Ok(cc.sub(&gd)?.add(&sq)?.interior_max_abs())
}

/// `((^CD^α)^2 f, ^CD^(2α) f)` for a registry function on `[0, 1]` with `m` nodes.
pub fn caputo_square_vs_double_order(f: &Func1D, ord: FracOrder, m: usize) -> Result<(UniformGrid1D, UniformGrid1D)> {
    ord.require(0.0, 1.0, "(0, 1)")?;
    caputo_semigroup_pair(&f.sample(Interval::unit(), m)?, ord)
}

/// Max over all nodes of `|Grad^α(fg) - (Grad^α f) g - f Grad^α g|`.
///
/// Faces are included: the violation is largest far from the lower bounds,
/// where the scheme has no endpoint loss.
pub fn leibniz_violation_gap(f: &ScalarField3D, g: &ScalarField3D, ord: FracOrder) -> Result<f64> {
    let lhs = grad_alpha(&f.mul(g)?, ord)?;
    let (gf, gg) = (grad_alpha(f, ord)?, grad_alpha(g, ord)?);
    let mut gap: f64 = 0.0;
    for l in 0..3 {
        let rhs = gf.component(l).mul(g)?.add(&gg.component(l).mul(f)?)?;
        gap = gap.max(lhs.component(l).sub(&rhs)?.max_abs());
    }
    Ok(gap)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fracvec3d::classical;

    fn ord(a: f64) -> FracOrder {
        FracOrder::new(a).unwrap()
    }

    fn vspec() -> VectorFieldSpec {
        "x=poly:0,0,1*y=poly:1,1 ; y=sin*z=poly:0,1 + x=poly:0,0,0,1 ; x=exp*y=poly:0,0,1".parse().unwrap()
    }

    #[test]
    fn discrete_identities_hold_to_rounding() {
        let d = BoxDomain::unit_cube(12).unwrap();
        let f: ScalarFieldSpec = "x=sin*y=poly:0,0,1 + z=exp*x=poly:1,1".parse().unwrap();
        let v = vspec().sample(d).unwrap();
        for a in [0.3, 0.5, 1.0] {
            assert!(curl_grad_residual(&f.sample(d).unwrap(), ord(a)).unwrap() < 1e-11);
            assert!(div_curl_residual(&v, ord(a)).unwrap() < 1e-11);
            assert!(double_curl_residual(&v, ord(a)).unwrap() < 1e-9);
        }
    }

    #[test]
    fn semidiscrete_residuals_decrease() {
        let f: ScalarFieldSpec = "x=sin*y=poly:0,0,1 + z=exp*x=poly:1,1".parse().unwrap();
        for a in [0.5, 1.0] {
            let mut prev = [f64::INFINITY; 3];
            for m in [12, 24] {
                let d = BoxDomain::unit_cube(m).unwrap();
                let r = [
                    curl_grad_semidiscrete(&f, d, ord(a)).unwrap(),
                    div_curl_semidiscrete(&vspec(), d, ord(a)).unwrap(),
                    double_curl_semidiscrete(&vspec(), d, ord(a)).unwrap(),
                ];
                for i in 0..3 {
                    assert!(r[i] < prev[i], "alpha {a} m {m} identity {i}: {r:?} vs {prev:?}");
                }
                prev = r;
            }
        }
    }

    #[test]
    fn alpha_one_matches_classical() {
        let d = BoxDomain::unit_cube(12).unwrap();
        let f: ScalarFieldSpec = "x=sin*y=poly:0,0,1 + z=exp*x=poly:1,1".parse().unwrap();
        let ours = curl_grad_semidiscrete(&f, d, ord(1.0)).unwrap();
        let theirs = classical::curl_grad_semidiscrete(&f, d).unwrap();
        assert!((ours - theirs).abs() <= 1e-12 + 1e-9 * theirs, "{ours} {theirs}");
        let ours = double_curl_semidiscrete(&vspec(), d, ord(1.0)).unwrap();
        let theirs = classical::double_curl_semidiscrete(&vspec(), d).unwrap();
        assert!((ours - theirs).abs() <= 1e-12 + 1e-9 * theirs, "{ours} {theirs}");
    }

    #[test]
    fn leibniz_gap_for_x_times_x() {
        let d = BoxDomain::unit_cube(129).unwrap();
        let x = ScalarField3D::from_fn(d, |x, _, _| x).unwrap();
        let gap = leibniz_violation_gap(&x, &x, ord(0.5)).unwrap();
        // |Γ(3)/Γ(2.5) - 2/Γ(1.5)| at x = 1
        assert!((gap - 0.75225277806367504925).abs() < 5e-3, "{gap}");
        assert!(leibniz_violation_gap(&x, &x, ord(1.0)).unwrap() < 1e-12);
        let one = ScalarField3D::from_fn(d, |_, _, _| 1.0).unwrap();
        assert_eq!(leibniz_violation_gap(&one, &one, ord(0.5)).unwrap(), 0.0);
    }

    #[test]
    fn double_order_counterexample() {
        let (sq, dbl) = caputo_square_vs_double_order(&Func1D::poly(&[0.0, 1.0]), ord(0.7), 1025).unwrap();
        assert!((sq.values()[512] - dbl.values()[512]).abs() >= 0.5);
    }
}
