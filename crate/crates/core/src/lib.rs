//! Exact computation of Arf invariants and of the hyperquadratic L-groups of
//! Z and Z[x] through explicit normal forms.

#![allow(non_snake_case)]

pub mod arf;
pub mod cli;
pub mod error;
pub mod forms;
pub mod gen;
pub mod json;
pub mod linking;
pub mod matrix;
pub mod oracle;
pub mod qnormal;
pub mod ring;
pub mod witt;

pub use error::{Error, Result};
