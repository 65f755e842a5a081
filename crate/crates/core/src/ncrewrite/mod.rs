//! Normal ordering for quadratic noncommutative rewrite systems.
//!
//! A [`RewriteSystem`] fixes a total order on generators and one rule per
//! out-of-order adjacent pair. [`RewriteSystem::normal_form`] applies rules until every
//! word is sorted; the builtins are the `q`-oscillator (`Y < X`), the Weyl pair and the
//! symmetric presentation of the Askey–Wilson algebra (`Y < Z < X`).
//!
//! ```
//! use quasilin::ncrewrite::{NcExpression, RewriteSystem};
//! use quasilin::poly::RationalComplex;
//!
//! let q = RationalComplex::from_ratio(1, 2);
//! let sys = RewriteSystem::q_oscillator(q);
//! let x = NcExpression::generator("X");
//! // ad_Y X = (1 - q) Y X - 1
//! let ad = sys.ad_power_nf("Y", &x, 1).unwrap();
//! assert_eq!(ad.to_string(), "1/2*Y*X - 1");
//! ```

mod expr;
mod system;

use thiserror::Error;

pub use expr::{NcExpression, Word};
pub use system::{RewriteSystem, Strategy, DEFAULT_STEP_BUDGET};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RewriteError {
    #[error("unknown generator '{0}'")]
    UnknownGenerator(String),
    #[error("invalid rule: {0}")]
    InvalidRule(String),
    #[error("no rule for the inversion at position {0}")]
    MissingRule(usize),
    #[error("rewrite step budget of {0} exceeded")]
    StepBudget(usize),
    #[error("parameter {0} must be nonzero")]
    ZeroParameter(&'static str),
}
