//! Team semantics for first-order logic extended with dependence,
//! independence, inclusion, exclusion and equiangularity atoms.
//!
//! The crate is `no_std` (it needs `alloc`). File formats and the command
//! line live in the companion `teamlogic` crate.

#![no_std]
#![forbid(unsafe_code)]

extern crate alloc;

pub mod dbdeps;
pub mod games;
pub mod model;
pub mod semantics;
pub mod syntax;
pub mod tarski;
pub mod translate;

pub use model::{Assignment, Elem, Model, ModelError, Team};
pub use semantics::{satisfies, satisfies_sentence, Budget, Mode, SemanticsError, Verdict};
pub use syntax::{parse_formula, parse_formula_lenient, Formula, Literal, Signature, Term};
