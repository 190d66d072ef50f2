//! Exact computation with invariants of the basic actions of the additive
//! group on `ℚ^{n+1}`: polynomial arithmetic over `ℚ`, the Weitzenböck
//! derivation, the separating set `E_n`, transvectants, a brute-force kernel
//! oracle and point-separation tooling.

pub mod combinat;
pub mod derivation;
pub mod error;
mod json;
pub mod oracle;
pub mod poly;
pub mod rational;
pub mod separating;
pub mod separation;
pub mod transvectant;
pub mod wz;

pub use derivation::{derive, flow_point, DerivationKind, Nilpotency};
pub use error::{Error, Result};
pub use poly::{Monomial, Polynomial, RationalPoint, RingDescriptor};
pub use rational::Rational;
pub use separating::{build_e, Element, Label, SeparatingSet};
