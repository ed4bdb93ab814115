//! A workbench for propositional defeasible logics: theories and their text
//! format, a fixpoint evaluator for seven proof tags, theory
//! transformations between logics, and randomized differential checks.

pub mod cli;
pub mod engine;
pub mod fixtures;
pub mod sim;
pub mod syntax;
pub mod text;
pub mod transform;
