//! Geometric phases and non-Abelian holonomies of time-dependent bases for
//! open (Lindblad) and closed quantum systems.
//!
//! The basis is built from the eigenstates of a dynamical invariant. The
//! holonomy follows from the parallel-transport condition alone, as
//! `O(t, 0) = U(t, 0) V(t)`, where `U` is the unitary part of the frame
//! overlap and `V` is the time-ordered exponential of the connection.

pub mod acceptance;
pub mod cli;
pub mod dynamics;
pub mod error;
pub mod frames;
pub mod holonomy;
pub mod matlib;
pub mod models;
pub mod scenario;

pub use error::{Error, Result};
