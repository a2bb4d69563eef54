use crate::error::{FvcError, Result};
use crate::frac1d::{rl_end_weights, rl_integral_end_slice};
use crate::fracvec3d::{BoxDomain, ScalarField3D, VectorField3D};
use crate::grid::{FracOrder, MIN_NODES};
use ndarray::{Array2, ArrayView2, Axis};
use serde::{Deserialize, Serialize};

/// A straight path between two grid nodes.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Segment {
    pub start: [f64; 3],
    pub end: [f64; 3],
}

impl Segment {
    pub fn new(start: [f64; 3], end: [f64; 3]) -> Self {
        Segment { start, end }
    }

    pub fn reversed(&self) -> Self {
        Segment { start: self.end, end: self.start }
    }

    /// The single axis along which the endpoints differ.
    pub fn axis(&self) -> Result<usize> {
        let moving: Vec<usize> = (0..3).filter(|&l| self.start[l] != self.end[l]).collect();
        match moving[..] {
            [l] => Ok(l),
            _ => Err(FvcError::UnsupportedPath),
        }
    }
}

fn node_of(domain: &BoxDomain, p: [f64; 3]) -> Result<[usize; 3]> {
    let mut idx = [0; 3];
    for l in 0..3 {
        idx[l] = domain
            .node_index(l, p[l])
            .ok_or_else(|| FvcError::Precondition(format!("segment endpoint {p:?} is not a grid node")))?;
    }
    Ok(idx)
}

/// Fractional circulation: `I^α` of the tangential component along the
/// segment, lower limit at `start`, evaluated at `end`. A segment running
/// against its axis gives the negated value of its reverse.
pub fn circulation_alpha(field: &VectorField3D, segment: &Segment, ord: FracOrder) -> Result<f64> {
    let axis = segment.axis()?;
    if segment.end[axis] < segment.start[axis] {
        return Ok(-circulation_alpha(field, &segment.reversed(), ord)?);
    }
    let domain = field.domain();
    let (i0, i1) = (node_of(domain, segment.start)?, node_of(domain, segment.end)?);
    let n = i1[axis] - i0[axis] + 1;
    if n < MIN_NODES {
        return Err(FvcError::GridTooSmall { got: n, min: MIN_NODES });
    }
    let others: Vec<usize> = (0..3).filter(|&l| l != axis).collect();
    let full = field.component(axis).line(axis, [i0[others[0]], i0[others[1]]]);
    Ok(rl_integral_end_slice(&full[i0[axis]..=i1[axis]], domain.step(axis), ord.alpha()))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Side {
    Lower,
    Upper,
}

/// A face of the box with normal `+e_axis` when `positive`, `-e_axis` otherwise.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Face {
    pub axis: usize,
    pub side: Side,
    pub positive: bool,
}

impl Face {
    /// Face with normal `+e_axis`.
    pub fn new(axis: usize, side: Side) -> Self {
        Face { axis, side, positive: true }
    }

    pub fn outward(axis: usize, side: Side) -> Self {
        Face { axis, side, positive: side == Side::Upper }
    }

    pub fn reversed(&self) -> Self {
        Face { positive: !self.positive, ..*self }
    }

    fn sign(&self) -> f64 {
        if self.positive {
            1.0
        } else {
            -1.0
        }
    }
}

/// `Σ_ij w_u[i] w_v[j] f[i,j]` for the two in-plane axes `(u, v)` in increasing order.
fn plane_double_integral(plane: ArrayView2<f64>, domain: &BoxDomain, normal: usize, ord: FracOrder) -> f64 {
    let (u, v) = match normal {
        0 => (1, 2),
        1 => (0, 2),
        _ => (0, 1),
    };
    let wu = rl_end_weights(domain.resolution[u], domain.step(u), ord.alpha());
    let wv = rl_end_weights(domain.resolution[v], domain.step(v), ord.alpha());
    plane.axis_iter(Axis(0)).zip(&wu).map(|(row, &a)| a * row.iter().zip(&wv).map(|(f, b)| f * b).sum::<f64>()).sum()
}

pub(crate) fn plane_flux(component: &ScalarField3D, normal: usize, idx: usize, ord: FracOrder) -> f64 {
    plane_double_integral(component.values().index_axis(Axis(normal), idx), component.domain(), normal, ord)
}

/// Fractional flux through a box face: the double RL integral of the normal
/// component over the two in-face axes, evaluated at their upper bounds.
pub fn flux_alpha(field: &VectorField3D, face: Face, ord: FracOrder) -> Result<f64> {
    if face.axis > 2 {
        return Err(FvcError::UnsupportedSurface);
    }
    let m = field.domain().resolution[face.axis];
    let idx = if face.side == Side::Upper { m - 1 } else { 0 };
    Ok(face.sign() * plane_flux(field.component(face.axis), face.axis, idx, ord))
}

/// `I^α_x I^α_y I^α_z f` evaluated at the upper corner.
pub fn volume_alpha(f: &ScalarField3D, ord: FracOrder) -> f64 {
    let d = f.domain();
    let w: Vec<Vec<f64>> = (0..3).map(|l| rl_end_weights(d.resolution[l], d.step(l), ord.alpha())).collect();
    let v = f.values();
    let mut acc = 0.0;
    for (i, plane) in v.axis_iter(Axis(0)).enumerate() {
        let mut p = 0.0;
        for (j, row) in plane.axis_iter(Axis(0)).enumerate() {
            p += w[1][j] * row.iter().zip(&w[2]).map(|(f, c)| f * c).sum::<f64>();
        }
        acc += w[0][i] * p;
    }
    acc
}

/// Double RL integral over a rectangle evaluated at its upper corner.
pub(crate) fn rect_double_integral(values: &Array2<f64>, steps: [f64; 2], ord: FracOrder) -> f64 {
    let (mx, my) = values.dim();
    let wx = rl_end_weights(mx, steps[0], ord.alpha());
    let wy = rl_end_weights(my, steps[1], ord.alpha());
    values.axis_iter(Axis(0)).zip(&wx).map(|(row, &a)| a * row.iter().zip(&wy).map(|(f, b)| f * b).sum::<f64>()).sum()
}
