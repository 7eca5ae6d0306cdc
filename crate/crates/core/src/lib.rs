//! Termgraph rewriting and the modal logic of graph modifiers.
//!
//! The crate has four parts:
//!
//! * [`termgraph`] — rooted termgraphs, a linear-notation DSL, elementary
//!   actions (node definition, local and global redirection), homomorphism
//!   matching, rewrite rules and normal-form computation.
//! * [`logic`] — formulas and modifier actions (edge traversal, universal
//!   jump, node creation, label assignment, edge bundle addition/deletion,
//!   tests and regular operators), their transition semantics over rooted
//!   termgraphs, and a bounded explicit-state model checker.
//! * [`reduction`] — the validity equivalences as a formula rewriter,
//!   update elimination for the star-free local-assignment-free fragment,
//!   and a tableau decision procedure for validity in that fragment.
//! * [`encodings`] — constructive bridges between the two worlds:
//!   homomorphism encodings, modal versions of the elementary actions,
//!   rule translation, normal-form and invariant formulas, a shape-formula
//!   catalogue, and a hybrid-logic translation.

pub mod encodings;
pub mod logic;
pub mod reduction;
pub mod sym;
pub mod termgraph;

pub use sym::Sym;
