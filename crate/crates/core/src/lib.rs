//! Admissible monomial bases for the hit problem of the mod 2 Steenrod algebra.
//!
//! The polynomial algebra `P_s = F_2[x_1, ..., x_s]` is an unstable module over the
//! Steenrod algebra. This crate computes the quotient `QP_s = P_s / A^+ P_s` degree by
//! degree: the admissible monomial basis, its splitting by weight vector, the Kameko
//! homomorphism, the maps between `P_{s-1}` and `P_s` used to build bases inductively,
//! and invariants under the symmetric and general linear groups.

pub mod golden;
pub mod gf2;
pub mod invariants;
pub mod maps;
pub mod monomial;
pub mod polynomial;
pub mod quotient;
pub mod steenrod;

mod error;

pub use error::{Error, Result};
pub use monomial::{Monomial, WeightVector, MAX_VARS};
pub use polynomial::Polynomial;
