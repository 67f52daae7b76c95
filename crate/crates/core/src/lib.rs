//! Finite-model toolkit for variable-inclusion logics.
//!
//! Formulas and languages live in [`syntax`], truth-table semantics in
//! [`matrix`]. The remaining modules build on those two.

pub mod catalog;
pub mod classes;
pub mod companions;
pub mod experiments;
pub mod hilbert;
pub mod matrix;
pub mod plonka;
pub mod probes;
pub mod repro;
pub mod syntax;
