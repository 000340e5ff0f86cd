//! Core of the idrt toolkit: LF with intensional dependent record types.
//!
//! * [`syntax`]: terms, kinds, contexts (locally nameless).
//! * [`parse`] / [`print`]: concrete syntax.
//! * [`reduction`]: untyped one-step, parallel and multi-step reduction.
//! * [`tos`]: the typed operational semantics evaluator.
//! * [`checker`]: algorithmic type checking built on the evaluator.
//! * [`declarative`]: derivation trees for the declarative rules, their checker,
//!   a script format and automatic derivation construction.

pub mod checker;
pub mod declarative;
pub mod parse;
pub mod print;
pub mod reduction;
pub mod syntax;
pub mod tos;

pub use syntax::{Context, Hint, Kind, Label, LabelSet, Name, Term};
