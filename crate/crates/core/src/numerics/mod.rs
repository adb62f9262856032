//! Log-domain arithmetic and the special functions behind every probability
//! computation in this crate.

mod erlang;
mod irwin_hall;
mod logreal;
mod precision;
pub mod quad;
mod special;

pub use erlang::{erlang_cdf, erlang_ln_cdf, erlang_ln_pdf, erlang_pdf};
pub use irwin_hall::{irwin_hall_cdf, irwin_hall_ln_cdf, irwin_hall_ln_pdf, irwin_hall_pdf};
pub use logreal::{log_sum_exp, SignedLogReal};
pub use precision::PrecisionConfig;
pub use special::{gamma_fn, ln_gamma, ln_reg_gamma_lower, log_binomial, log_factorial};
