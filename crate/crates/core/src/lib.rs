//! Exact and numerical computations for central extensions `C ×_θ A` of
//! abelian groups: logarithmic exponents under naive and fibered cyclotomic
//! actions, tuple counts for the conductor parametrization, and the
//! associated Euler-product constants.

pub mod analytic;
pub mod arith;
pub mod error;
pub mod exponents;
pub mod families;
pub mod fibered;
pub mod group;
pub mod numtheory;
pub mod orbit;
pub mod rational;
pub mod sieve;

pub use error::{Error, Result};
pub use group::{AbelianSpec, CocycleGroup, CocyclePairing, GroupDescriptor, GroupElement, PairingSummand};
pub use rational::ExactRational;

/// Default bound on the number of group elements enumerated eagerly.
pub const DEFAULT_ELEMENT_CAP: u64 = 10_000_000;
