//! Gamma, Mittag-Leffler and Wright functions.

mod gamma;
mod mittag_leffler;
mod series;
mod wright;

pub use gamma::{gamma, gamma_ratio, ln_gamma, rgamma, sin_pi, GAMMA_MAX_ARG};
pub use mittag_leffler::{mittag_leffler, support_radius, MLParams, MittagLeffler, MlEval, Z_MAX};
pub use wright::{wright, Wright, WrightParams};
