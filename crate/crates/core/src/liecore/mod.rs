//! Structure-constant Lie algebras: brackets, Jacobi validation, center,
//! derived algebra, ideals, quotients and simplicity certificates.

mod algebra;
pub mod json;
mod simple;

pub use algebra::{normalize_row, Element, JacobiReport, LieAlgebra};
pub use json::{AlgebraFile, AnyAlgebra};
pub use simple::{is_simple, SimplicityCertificate, SimplicityMethod, Verdict, NORTON_ATTEMPTS};

#[cfg(test)]
mod tests;
