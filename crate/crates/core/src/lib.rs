//! Cell theory of finite-dimensional positively based algebras.
//!
//! A *positively based algebra* is a finite-dimensional algebra over the
//! rationals together with a distinguished basis whose structure constants
//! are all nonnegative. Group algebras and monoid algebras in their standard
//! bases are examples, as are group algebras of Weyl groups in the
//! Kazhdan-Lusztig basis.
//!
//! This crate computes the combinatorial and spectral invariants attached to
//! such an algebra:
//!
//! * left / right / two-sided cells and the partial orders between them
//!   ([`cells`]),
//! * cell modules, quotient algebras and related based modules
//!   ([`based_modules`]),
//! * Perron-Frobenius eigendata of positive action matrices and the limit
//!   idempotent of an idempotent two-sided cell ([`spectral`]),
//! * the radical, generated submodules, simple tops and characters
//!   ([`structure`]),
//! * apexes and the classification of special simple modules ([`special`]).
//!
//! Generators for group algebras, transformation-monoid algebras and
//! Kazhdan-Lusztig bases of small Weyl groups live in [`constructors`] and
//! [`kl`]. All combinatorial computations are exact over arbitrary-precision
//! rationals; only spectral limits use floating point.

#![allow(clippy::needless_range_loop)]

pub mod algebra;
pub mod based_modules;
pub mod cells;
pub mod constructors;
pub mod io;
pub mod kl;
pub mod linalg;
pub mod scalar;
pub mod special;
pub mod spectral;
pub mod structure;
pub mod util;
pub mod verify;

pub use algebra::{ElementVector, PBAlgebra, ValidationReport};
pub use based_modules::BasedModule;
pub use cells::{CellDecomposition, CellKind};
pub use scalar::Rat;
pub use special::SpecialReport;
pub use spectral::{IdempotentData, PFData, SpectralConfig};
pub use structure::SimpleCharacter;
