//! Rigorous numerical and modular verification of conjectured series identities.

pub mod ball;
pub mod cli;
pub mod congruence;
pub mod constants;
pub mod error;
pub mod exact;
pub mod parse;
pub mod registry;
pub mod report;
pub mod serde_big;
pub mod series;
pub mod taylor;
pub mod verify;

pub use error::{Error, Result};
