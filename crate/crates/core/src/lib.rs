//! Signless Stirling numbers of the first kind modulo prime powers.
//!
//! - [`modring`]: residues in `Z/NZ`, multiplicative orders, cyclotomic
//!   polynomials, and root-factorization checks
//! - [`binomial`]: binomial coefficients mod `p^r` and Kummer's carry count
//! - [`polyring`]: dense polynomials over `Z/NZ` and `P_n(t) = ∏ (1 + kt)`
//! - [`stirling`]: exact values, closed-form residues mod `p^r` and mod `n`,
//!   and valuations
//! - [`chern`]: Chern classes of permutation representations of `C_n`

pub mod binomial;
pub mod chern;
pub mod error;
pub mod modring;
pub mod polyring;
pub mod stirling;

pub use error::{Error, Result};
pub use modring::{Modulus, PrimePower, Residue};
pub use polyring::DensePoly;
pub use stirling::{Branch, StirlingResult};
