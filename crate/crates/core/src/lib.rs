//! Exact computations in free groups, free Milnor groups and the 2-Engel
//! quotient, together with word-level models of links and Kirby diagrams.

pub mod cli;
pub mod decomp;
pub mod engel;
pub mod error;
pub mod links;
pub mod magnus;
pub mod milnor;
pub mod reproduce;
pub mod slides;
pub mod words;
pub mod zlattice;

pub use error::{Error, Result};
pub use words::{GenId, GeneratorContext, Letter, Word};
