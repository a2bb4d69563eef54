//! Fractional Maxwell system on a box, charge diagnostics, the
//! constitutive convolution and 1-D fractional wave solutions.

mod convolution;
mod snapshot;
mod system;
mod wave;

pub use convolution::{caputo_from_convolution, convolution_gap, KernelSpec};
pub use snapshot::{load_snapshot, read_snapshot, save_snapshot, write_snapshot};
pub use system::{
    calibrate_dt, charge_conservation_residual, gauss_constraint_residuals, integral_charge_balance, maxwell_rhs,
    maxwell_step, DtCalibration, EMState, MaxwellParams,
};
pub use wave::{
    dalembert_mode, wave_1d_marching, wave_1d_wright_solution, wave_residual, wright_kernel, wright_kernel_index,
};
