//! Simulation of SDEs driven by Levy processes time-changed by inverses of
//! stable-subordinator mixtures, together with solvers for the associated
//! time-fractional and distributed-order Kolmogorov equations, and a harness
//! that cross-validates the stochastic and analytic sides.

pub mod error;
pub mod fracpde;
pub mod harness;
pub mod levy;
pub mod metrics;
pub mod numerics;
pub mod rng;
pub mod sde;
pub mod specfun;
pub mod subordination;

pub use error::{Error, Result};
pub use specfun::StableIndex;
pub use subordination::MixtureSpec;
