//! Configurable-precision scalars with error bounds and the special functions
//! built on them.
//!
//! Every [`BigReal`] carries a nonnegative bound on its absolute error; the
//! arithmetic operators propagate those bounds and charge rounding, so a
//! value computed from exact inputs encloses the true result.

mod bernoulli;
mod complex;
mod context;
mod elementary;
mod gamma;
mod real;
mod series;
mod zeta;

pub use bernoulli::{bernoulli, bernoulli_upto};
pub use complex::{elementary, BigComplex, Elementary};
pub use context::PrecisionContext;
pub use gamma::{gamma, gamma_real};
pub use real::{best_rational, rational, sum, BigReal};
pub use series::{ps_coeff, ps_exp, ps_mul, ps_recip, ps_scale_arg, PowerSeries};
pub use zeta::{eta, zeta_at, zeta_bar, zeta_bar_at, zeta_int, zeta_int_series};
