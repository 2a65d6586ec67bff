//! Exact computations with restricted Lie algebras and their modules over
//! finite fields: character clusters, hypercentral modules, and a harness
//! replaying the transfer of hypercentrality along character clusters.

pub mod charcluster;
pub mod error;
pub mod formations;
pub mod gf;
pub mod liealg;
pub mod linalg;
pub mod repmod;
pub mod schema;
pub mod theorem;

pub use error::{Error, Result};
