//! Isomorphism of cyclic Haar graphs of valency four.
//!
//! The crate builds Haar graphs `H(Z_n, S)` and Cayley digraphs over `Z_n`,
//! decides isomorphism of connected 4-valent Haar graphs arithmetically,
//! and checks every such verdict against an independent search-based
//! isomorphism oracle.

pub mod auto;
pub mod bicyclic;
pub mod census;
pub mod error;
pub mod haar;
pub mod perm;
pub mod theorem;
pub mod zn;

pub use error::{Error, Result};
pub use perm::{Partition, Perm, PermGroup};
pub use zn::{AffineWitness, ZnSet};
