//! Exact intersection theory, cohomology and monad bookkeeping for rank-2
//! instanton bundles on `P^1 x P^2` and on the blow-up of `P^3` along a line.

pub mod bundle;
pub mod chow;
pub mod cotangent;
pub mod error;
pub mod line_cohomology;
pub mod moduli;
pub mod monad;
pub mod serde_big;
pub mod selftest;
pub mod serre;
pub mod stability;

pub use chow::{line_slope, parse_expr, slope, Basis, ChowClass, Divisor, Threefold};
pub use error::{Error, Result};
