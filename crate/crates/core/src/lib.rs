//! Exact computations in `⟨x_1, …, x_m | x_i^{n_i} = 0⟩` over a field of
//! characteristic other than two: graded dimensions of the Lie derived
//! powers `A^[i]`, nilpotency of the quotients `A / id(A^[k])`, and
//! certificates that `A^[i]` is generated, as a Lie algebra, by its
//! components of degree at most `2n - 2`.
//!
//! All results are truncated: they hold in degrees `1..=D`.

pub mod algebra;
pub mod certify;
pub mod cli;
pub mod error;
pub mod linalg;
pub mod scalar;
pub mod words;

pub use algebra::{derived_power, Algebra, DerivedTower, Vector};
pub use error::{Error, Result};
pub use linalg::{GradedSubspace, GradedVector};
pub use scalar::{Field, FieldSpec, PrimeField, Rationals};
pub use words::{AlgebraSpec, Word, WordBasis};
