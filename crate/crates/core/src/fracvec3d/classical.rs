//! Integer-order finite-difference vector calculus, the reference for α = 1.
//!
//! Written with explicit index loops so it shares no code with the lane-mapped
//! fractional operators it is compared against.

use super::field::{ScalarField3D, VectorField3D};
use super::registry::{ScalarFieldSpec, VectorFieldSpec};
use crate::error::Result;
use crate::fracvec3d::BoxDomain;
use ndarray::Array3;

/// Second-order central differences, second-order one-sided at the faces.
pub fn partial(f: &ScalarField3D, axis: usize) -> ScalarField3D {
    let v = f.values();
    let d = *f.domain();
    let n = d.resolution[axis];
    let h = d.step(axis);
    let mut out = Array3::zeros(v.raw_dim());
    for ((i, j, k), o) in out.indexed_iter_mut() {
        let idx = [i, j, k];
        let at = |s: usize| {
            let mut p = idx;
            p[axis] = s;
            v[p]
        };
        let c = idx[axis];
        *o = if c == 0 {
            (-3.0 * at(0) + 4.0 * at(1) - at(2)) / (2.0 * h)
        } else if c == n - 1 {
            (3.0 * at(n - 1) - 4.0 * at(n - 2) + at(n - 3)) / (2.0 * h)
        } else {
            (at(c + 1) - at(c - 1)) / (2.0 * h)
        };
    }
    ScalarField3D::from_raw(d, out)
}

pub fn grad(f: &ScalarField3D) -> Result<VectorField3D> {
    VectorField3D::new(partial(f, 0), partial(f, 1), partial(f, 2))
}

pub fn div(field: &VectorField3D) -> Result<ScalarField3D> {
    partial(field.component(0), 0).add(&partial(field.component(1), 1))?.add(&partial(field.component(2), 2))
}

pub fn curl(field: &VectorField3D) -> Result<VectorField3D> {
    let (fx, fy, fz) = (field.component(0), field.component(1), field.component(2));
    VectorField3D::new(
        partial(fz, 1).sub(&partial(fy, 2))?,
        partial(fx, 2).sub(&partial(fz, 0))?,
        partial(fy, 0).sub(&partial(fx, 1))?,
    )
}

fn laplacian_like(field: &VectorField3D) -> Result<VectorField3D> {
    let comp = |c: &ScalarField3D| -> Result<ScalarField3D> {
        partial(&partial(c, 0), 0).add(&partial(&partial(c, 1), 1))?.add(&partial(&partial(c, 2), 2))
    };
    VectorField3D::new(comp(field.component(0))?, comp(field.component(1))?, comp(field.component(2))?)
}

/// Interior max of `curl(∇f)` with the inner gradient taken exactly.
pub fn curl_grad_semidiscrete(spec: &ScalarFieldSpec, domain: BoxDomain) -> Result<f64> {
    let g = VectorField3D::from_fn(domain, |x, y, z| exact_grad(spec, x, y, z))?;
    Ok(curl(&g)?.interior_max_abs())
}

/// Interior max of `div(curl F)` with the inner curl taken exactly.
pub fn div_curl_semidiscrete(spec: &VectorFieldSpec, domain: BoxDomain) -> Result<f64> {
    let jac = |x: f64, y: f64, z: f64| exact_jacobian(spec, x, y, z);
    let c = VectorField3D::from_fn(domain, |x, y, z| {
        let j = jac(x, y, z);
        [j[2][1] - j[1][2], j[0][2] - j[2][0], j[1][0] - j[0][1]]
    })?;
    Ok(div(&c)?.interior_max_abs())
}

/// Interior max of `curl curl F - ∇ div F + ΣD_l D_l F` with exact inner derivatives.
pub fn double_curl_semidiscrete(spec: &VectorFieldSpec, domain: BoxDomain) -> Result<f64> {
    let jac = |x: f64, y: f64, z: f64| exact_jacobian(spec, x, y, z);
    let c = VectorField3D::from_fn(domain, |x, y, z| {
        let j = jac(x, y, z);
        [j[2][1] - j[1][2], j[0][2] - j[2][0], j[1][0] - j[0][1]]
    })?;
    let dv = ScalarField3D::from_fn(domain, |x, y, z| {
        let j = jac(x, y, z);
        j[0][0] + j[1][1] + j[2][2]
    })?;
    let mut lap = VectorField3D::zeros(domain);
    for l in 0..3 {
        let dl = VectorField3D::from_fn(domain, |x, y, z| {
            let j = jac(x, y, z);
            [j[0][l], j[1][l], j[2][l]]
        })?;
        let outer =
            VectorField3D::new(partial(dl.component(0), l), partial(dl.component(1), l), partial(dl.component(2), l))?;
        lap = lap.add(&outer)?;
    }
    Ok(curl(&c)?.sub(&grad(&dv)?)?.add(&lap)?.interior_max_abs())
}

/// Fully discrete `curl curl F - ∇ div F + ΣD_l D_l F`.
pub fn double_curl_residual(field: &VectorField3D) -> Result<f64> {
    Ok(curl(&curl(field)?)?.sub(&grad(&div(field)?)?)?.add(&laplacian_like(field)?)?.interior_max_abs())
}

fn exact_grad(spec: &ScalarFieldSpec, x: f64, y: f64, z: f64) -> [f64; 3] {
    let p = [x, y, z];
    let mut g = [0.0; 3];
    for t in &spec.terms {
        for (l, gl) in g.iter_mut().enumerate() {
            let mut prod = t.coefficient * t.factors[l].derivative(p[l]);
            for m in 0..3 {
                if m != l {
                    prod *= t.factors[m].eval(p[m]);
                }
            }
            *gl += prod;
        }
    }
    g
}

// j[c][l] = ∂F_c / ∂x_l
fn exact_jacobian(spec: &VectorFieldSpec, x: f64, y: f64, z: f64) -> [[f64; 3]; 3] {
    [0, 1, 2].map(|c| exact_grad(&spec.components[c], x, y, z))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quadratics_are_differentiated_exactly() {
        let d = BoxDomain::unit_cube(10).unwrap();
        let f = ScalarField3D::from_fn(d, |x, y, z| x * x + x * y - z * z).unwrap();
        let g = grad(&f).unwrap();
        for ((i, j, k), &v) in g.component(0).values().indexed_iter() {
            let (x, y) = (d.node(0, i), d.node(1, j));
            let _ = k;
            assert!((v - (2.0 * x + y)).abs() < 1e-12);
        }
    }
}
