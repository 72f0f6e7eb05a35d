//! Base sizes of Sym(ab) and Alt(ab) acting on (a,b)-regular partitions:
//! closed forms, explicit minimal bases, and an exact verifier.

pub mod certificate;
pub mod cli;
pub mod constructions;
pub mod domain;
pub mod error;
pub mod formulas;
pub mod search;
pub mod verifier;

pub use error::{Error, Result};
