//! Exact Gaussian-integer arithmetic, quartic residue symbols, normalized
//! binary-quadratic-form representations, and a verification engine for a
//! family of quartic/octic residuacity criteria.
//!
//! The core question the `verify` module addresses: given a prime
//! `p = c^2 + d^2 = x^2 + q y^2` (suitably normalized), express
//! `q^((p-1)/8)` or `q^((p-5)/8) mod p` in closed form in terms of
//! `c, d, x, y` and small residue symbols, and check those closed forms
//! numerically against direct modular exponentiation.
//!
//! Modules:
//!
//! * [`gaussian`] -- exact arithmetic in Z\[i\]: division with remainder,
//!   gcd, canonical associates, trial-division factorization.
//! * [`symbols`] -- quadratic and quartic Jacobi symbols, with independent
//!   oracle implementations for cross-checking.
//! * [`modular`] -- rational modular arithmetic and Lucas sequences.
//! * [`represent`] -- the normalized representations `p = c^2 + d^2` and
//!   `p = x^2 + q y^2`.
//! * [`sieve`] -- prime enumeration for scans.
//! * [`verify`] -- the criteria themselves, as named, individually runnable
//!   checks producing structured records.

pub mod gaussian;
pub mod modular;
pub mod represent;
pub mod sieve;
pub mod symbols;
pub mod verify;
