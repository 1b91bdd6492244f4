//! Concrete scenarios and their closed-form oracles.

pub mod synthetic;
pub mod tripod;
pub mod two_level;
