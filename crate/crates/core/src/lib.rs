//! Time operators of the one-dimensional harmonic oscillator, built over an
//! exact scalar tower and verified through sesquilinear-form identities.

pub mod acceptance;
pub mod cli;
pub mod error;
pub mod forms;
pub mod gauss;
pub mod povm;
pub mod scalar;
pub mod symrep;
pub mod table;

pub use error::{Error, Result};
