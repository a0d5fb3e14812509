//! Exact computations with the quaternionic braid representation.
//!
//! The algebra Q_n on anticommuting quaternion-like generators hosts the
//! (3,6)-quotient of the Hecke algebra via the elements s_i. This crate
//! implements Q_n over the cyclotomic field Q(ζ), verifies the Hecke and
//! Markov-trace structure, enumerates the finite braid-group image through
//! its signed-permutation conjugation action, evaluates the associated link
//! invariant on braid closures, and cross-checks it against the Z₂-homology
//! of triple cyclic branched covers.

pub mod algebra;
pub mod braid;
pub mod cover;
pub mod diagrams;
pub mod error;
pub mod f2;
pub mod group;
pub mod hecke;
pub mod linalg;
pub mod links;
pub mod report;
pub mod scalar;

pub use algebra::{Element, Word};
pub use error::{Error, Result};
pub use scalar::Scalar;
