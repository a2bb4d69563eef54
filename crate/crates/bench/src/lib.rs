//! Shared inputs for the criterion benches.

use fracvec::fracvec3d::{BoxDomain, VectorField3D, VectorFieldSpec};
use fracvec::maxwell::EMState;
use fracvec::{Interval, UniformGrid1D};

/// `sin` sampled on `[0, 1]` with `m` nodes.
pub fn line(m: usize) -> UniformGrid1D {
    UniformGrid1D::from_fn(Interval::unit(), m, f64::sin).expect("m >= 8")
}

/// A smooth field with every component depending on all three coordinates.
pub fn field(m: usize) -> VectorField3D {
    let spec: VectorFieldSpec =
        "x=poly:0,0,1*y=sin*z=exp; x=poly:1,1*y=exp*z=poly:0,1; x=sin*y=poly:0,0,1*z=exp".parse().expect("valid spec");
    spec.sample(BoxDomain::unit_cube(m).expect("m >= 8")).expect("finite samples")
}

/// Travelling-wave start: `E_y = B_z = sin x`.
pub fn em_state(m: usize) -> EMState {
    let d = BoxDomain::unit_cube(m).expect("m >= 8");
    let mut s = EMState::zeros(d);
    s.e = VectorField3D::from_fn(d, |x, _, _| [0.0, x.sin(), 0.0]).expect("finite");
    s.b = VectorField3D::from_fn(d, |x, _, _| [0.0, 0.0, x.sin()]).expect("finite");
    s
}
