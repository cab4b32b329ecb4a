//! Systolic complexes and biautomatic structures for Artin groups of almost
//! large type with labels in `{2, 3, 4, ∞}`.
//!
//! The pipeline: parse a Coxeter matrix ([`coxeter`]), solve the word problem
//! ([`oracle`]), build a finite fragment of the systolic complex
//! ([`complex`]), compute directed geodesics ([`geodesics`]), choose orbit
//! representatives and alphabets ([`labels`]), then synthesize and verify the
//! word acceptor and multiplier automata ([`biauto`], [`fsa`]).

pub mod coxeter;
pub mod error;
pub mod oracle;

pub use error::{Error, Result};
pub mod complex;
pub mod geodesics;
pub mod labels;
pub mod fsa;
pub mod biauto;
pub mod cli;
