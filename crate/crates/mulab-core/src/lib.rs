//! Core engine of the `mulab` workbench.
//!
//! Everything in this crate is a pure function over small finite structures:
//! ground sets of at most 64 labelled elements, set families stored as sorted
//! bit masks, choice functions as per-member tables, preferential structures
//! as copy lists with an arbitrary binary relation. The crate is `no_std`
//! (alloc only); IO, JSON and threading live in the companion CLI crate.
//!
//! Module map:
//! - [`sets`]: ground sets, subsets as bit masks, named families, closure
//!   predicates and the intersection-closure operator, choice functions.
//! - [`preferential`]: structures with copies, the minimal-element function
//!   `mu`, smoothness and relation properties.
//! - [`conditions`]: checkers for the algebraic conditions on choice
//!   functions, including the parameterized cumulativity ladder.
//! - [`construction`]: builders for the two reference instances used by the
//!   `verify` command, plus the claim verifier.
//! - [`logic`]: finite propositional semantics; theories as model sets and
//!   the logical-rule checkers paired with the algebraic ones.
//! - [`plausibility`]: connective-free sequent saturation and its
//!   preferential model semantics.
//! - [`search`]: exhaustive enumeration of small instances and the
//!   implication catalog runner.

#![no_std]
#![deny(unsafe_code)]

extern crate alloc;

pub mod conditions;
pub mod construction;
pub mod logic;
pub mod plausibility;
pub mod preferential;
pub mod search;
pub mod sets;

pub use sets::{ChoiceFunction, GroundSet, Mask, SetFamily};
