//! One-dimensional Riemann-Liouville and Caputo operators on uniform grids,
//! closed-form power rules, and the residual checks built from them.

mod ops;
mod power;
mod registry;
mod verify;
mod weights;

pub use ops::{caputo_derivative, rl_correction, rl_derivative, rl_differintegral, rl_integral};
pub(crate) use ops::{caputo_slice, first_derivative, rl_end_weights, rl_integral_end_slice};
pub use power::{power_rule_caputo, power_rule_integral, power_rule_rl_derivative, PowerFunction, PowerSeries};
pub use registry::Func1D;
pub use verify::{
    caputo_semigroup_counterexample, caputo_semigroup_pair, ftfc_higher_residual, ftfc_left_inverse_residual,
    integral_semigroup_residual, leibniz_series, newton_leibniz_residual, rl_newton_leibniz_correction,
    rl_newton_leibniz_lower_limit_rhs, LeibnizSeries,
};
