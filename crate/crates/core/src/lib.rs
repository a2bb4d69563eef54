//! Fractional vector calculus on boxes: Riemann-Liouville and Caputo
//! operators, fractional vector identities and integral theorems, special
//! functions, and nonlocal Maxwell diagnostics.

// coefficient tables and oracle values keep every digit of their source;
// `!(x > 0.0)` style guards are there to reject NaN
#![allow(
    clippy::excessive_precision,
    clippy::approx_constant,
    clippy::neg_cmp_op_on_partial_ord,
    clippy::needless_range_loop
)]

pub mod dd;
pub mod error;
pub mod frac1d;
pub mod fracint;
pub mod fracvec3d;
pub mod grid;
pub mod maxwell;
pub mod quad;
pub mod special;
pub mod table;

pub use error::{FvcError, Result};
pub use grid::{FracOrder, Interval, UniformGrid1D, SINGULAR};
pub use table::{convergence_order, emit, Cell, Format, ResultTable};
