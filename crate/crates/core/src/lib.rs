//! Exact computations with finite-dimensional Lie algebras given by structure
//! constants: derivation algebras, Chevalley–Eilenberg cohomology in low degree,
//! universal central extensions, modular Cartan-type constructions and windowed
//! graded algebras in characteristic zero.

pub mod error;
pub mod exact;

pub use error::{Error, Result};
pub mod catalog;
pub mod liecore;
pub mod derivations;
pub mod cohomology;
pub mod extensions;
pub mod formsengine;
pub mod report;
pub mod verify;
