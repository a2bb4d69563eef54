//! Fractional gradient, divergence and curl on a box, built from axis-wise
//! Caputo derivatives taken from each axis's lower bound.

pub mod classical;
mod field;
mod identities;
mod ops;
mod registry;

pub use field::{BoxDomain, ScalarField3D, VectorField3D};
pub use identities::{
    caputo_square_vs_double_order, curl_grad_residual, curl_grad_semidiscrete, div_curl_residual,
    div_curl_semidiscrete, double_curl_residual, double_curl_semidiscrete, leibniz_violation_gap,
};
pub use ops::{caputo_axis, curl_alpha, div_alpha, grad_alpha, nabla_square};
pub use registry::{ScalarFieldSpec, Term, VectorFieldSpec};
