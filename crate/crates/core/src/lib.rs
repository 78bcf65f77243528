//! Quantum double sector systems of α-induced systems, computed from Verlinde
//! fusion data and conformal-inclusion descriptors.

#![allow(clippy::needless_range_loop)]

pub mod analysis;
pub mod data;
pub mod double;
pub mod error;
pub mod fusion;
pub mod graph;
pub mod inclusion;
pub mod modular;
pub mod tolerance;
pub mod verify;

pub use error::{Error, Result};

/// Version tag carried by every JSON document this crate reads or writes.
pub const SCHEMA: &str = "v1";
