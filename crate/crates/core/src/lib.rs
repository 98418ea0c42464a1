//! Weakly separated collections over the cyclic ground set `[n]`.
//!
//! The crate is layered bottom-up: [`ground`] holds the subset type and the
//! separation predicates, [`cliques`] turns a domain plus a predicate into
//! maximal collections, and the remaining modules build the specific domains,
//! necklaces, square-move dynamics and lattice counts on top of those two.

pub mod cliques;
pub mod domains;
pub mod error;
pub mod ground;
pub mod mutations;
pub mod necklaces;
pub mod octahedron;

pub use cliques::{Collection, CompatGraph, PurityMode, PurityReport, Relation};
pub use error::{Error, Result};
pub use ground::{cyclic_interval, gale_leq, CyclicOrder, Subset, Transform};
