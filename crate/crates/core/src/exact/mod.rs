//! Exact rational arithmetic, sparse multivariate polynomials and the
//! matrix routines built on them.

mod local;
mod matrix;
mod poly;
mod rational;
mod roots;

pub use local::{invariant_factor_t_valuations, local_smith, mul_trunc, t_valuation, to_series, LocalSmith, TSeries};
pub use matrix::{bareiss_det, kernel_q, rank_q, solve_in_span, Matrix};
pub use poly::{Mono, Poly, Var, NSYM, SYMBOLS};
pub use rational::{parse_rational, q, qi, Rational};
