//! Six-vertex model with domain wall boundary conditions on the critical line
//! `a = 1 - x, b = 1 + x, c = 2`: exact partition functions, brute-force
//! oracles, and numerical checks of the large-N asymptotics.

pub mod airy;
pub mod asymptotics;
pub mod bigmath;
pub mod equilibrium;
pub mod error;
pub mod exact;
pub mod oracle;
pub mod param;
pub mod phase;
pub mod quadrature;
pub mod rhp;
pub mod theta;

pub use error::{Error, Result};
pub use exact::{HankelChain, PartitionValue};
pub use param::RationalParameter;

pub const VERSION: &str = env!("CARGO_PKG_VERSION");
