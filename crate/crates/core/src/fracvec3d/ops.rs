use super::field::{ScalarField3D, VectorField3D};
use crate::error::Result;
use crate::frac1d::caputo_slice;
use crate::grid::FracOrder;
use ndarray::{Array3, ArrayView1, Axis, Zip};

/// Applies a 1-D kernel `(input, output)` to every grid line along `axis`.
fn map_lanes<F>(src: &Array3<f64>, axis: usize, kernel: F) -> Array3<f64>
where
    F: Fn(&[f64], &mut [f64]) + Sync,
{
    let mut out = Array3::zeros(src.raw_dim());
    Zip::from(out.lanes_mut(Axis(axis))).and(src.lanes(Axis(axis))).par_for_each(|mut o, s| {
        let input = s.to_vec();
        let mut buf = vec![0.0; input.len()];
        kernel(&input, &mut buf);
        o.assign(&ArrayView1::from(&buf[..]));
    });
    out
}

pub(crate) fn vector_order(ord: FracOrder) -> Result<()> {
    ord.require(0.0, 1.0, "(0, 1]")
}

/// Caputo derivative of order `ord` along one axis, from that axis's lower bound.
pub fn caputo_axis(f: &ScalarField3D, axis: usize, ord: FracOrder) -> Result<ScalarField3D> {
    let d = *f.domain();
    let h = d.step(axis);
    // validates the order and line length once so the parallel kernel cannot fail
    caputo_slice(&vec![0.0; d.resolution[axis]], h, ord, &mut vec![0.0; d.resolution[axis]])?;
    let out = map_lanes(f.values(), axis, |s, o| {
        caputo_slice(s, h, ord, o).expect("validated above");
    });
    Ok(ScalarField3D::from_raw(d, out))
}

/// `Grad^α f = e_l ^CD^α_W[x_l] f`.
pub fn grad_alpha(f: &ScalarField3D, ord: FracOrder) -> Result<VectorField3D> {
    vector_order(ord)?;
    VectorField3D::new(caputo_axis(f, 0, ord)?, caputo_axis(f, 1, ord)?, caputo_axis(f, 2, ord)?)
}

/// `Div^α F = Σ_l ^CD^α_W[x_l] F_l`.
pub fn div_alpha(field: &VectorField3D, ord: FracOrder) -> Result<ScalarField3D> {
    vector_order(ord)?;
    let mut acc = caputo_axis(field.component(0), 0, ord)?;
    for l in 1..3 {
        acc = acc.add(&caputo_axis(field.component(l), l, ord)?)?;
    }
    Ok(acc)
}

/// `Curl^α F = e_l ε_lmk ^CD^α_W[x_m] F_k`.
pub fn curl_alpha(field: &VectorField3D, ord: FracOrder) -> Result<VectorField3D> {
    vector_order(ord)?;
    let comp = |l: usize| -> Result<ScalarField3D> {
        let (m, k) = ((l + 1) % 3, (l + 2) % 3);
        caputo_axis(field.component(k), m, ord)?.sub(&caputo_axis(field.component(m), k, ord)?)
    };
    VectorField3D::new(comp(0)?, comp(1)?, comp(2)?)
}

/// `(^CD^α_W)^2 F`: each component gets `Σ_l ^CD^α_W[x_l] ^CD^α_W[x_l]`.
pub fn nabla_square(field: &VectorField3D, ord: FracOrder) -> Result<VectorField3D> {
    vector_order(ord)?;
    let comp = |c: &ScalarField3D| -> Result<ScalarField3D> {
        let mut acc = ScalarField3D::zeros(*c.domain());
        for l in 0..3 {
            acc = acc.add(&caputo_axis(&caputo_axis(c, l, ord)?, l, ord)?)?;
        }
        Ok(acc)
    };
    VectorField3D::new(comp(field.component(0))?, comp(field.component(1))?, comp(field.component(2))?)
}
