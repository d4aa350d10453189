//! Exact scalars and linear algebra over prime fields and the rationals.

pub mod echelon;
pub mod field;
pub mod matrix;
pub mod subspace;
pub mod upoly;

pub use echelon::{Echelon, SparseRow};
pub use field::{is_prime, scalar_inv, Field, FieldSpec, PrimeField, Rationals};
pub use matrix::{kernel, kernel_of_rows, rref, Matrix};
pub use subspace::{QuotientMap, Subspace};
