//! Generalized Hamming weights of linear codes built from defining sets over
//! finite fields.
//!
//! The pipeline is: pick a defining set D (three structured families or a
//! custom list), build the trace code C_D, then compute its weight hierarchy
//! by exhaustive subcode search, by the dual-intersection characterization,
//! and by closed form, and check that all three agree.

pub mod code;
pub mod defining;
pub mod enumerate;
mod error;
pub mod field;
pub mod ghw;
pub mod linalg;
mod poly;
pub mod sweep;

pub use error::{Error, Result};
