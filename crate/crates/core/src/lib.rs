//! Finite relational structures: monomorphy, chaining linear orders,
//! quantifier-free order definitions and first-order model checking.

pub mod chaining;
pub mod classes;
pub mod cli;
pub mod definability;
pub mod error;
pub mod generate;
pub mod iso;
pub mod logic;
pub mod monomorphy;
pub mod order;
pub mod structure;

pub use error::{Error, Result};
pub use iso::{age, canonical_code, find_isomorphism, Bijection, CanonicalCode};
pub use structure::{induced_substructure, parse_structure, Signature, Structure};
