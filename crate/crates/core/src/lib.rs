//! Computational group theory with exact integer arithmetic: permutations,
//! stabilizer chains, finite fields, semilinear and affine constructions,
//! and subgroup enumeration up to conjugacy.

pub mod classify;
pub mod conjugacy;
pub mod error;
pub mod field;
pub mod group;
pub mod index;
pub mod linear;
pub mod perm;
pub mod subgroups;
pub mod zoo;

pub use classify::{classify, order_profile, GroupFlags};
pub use error::{Error, Result};
pub use group::{PermutationGroup, StabilizerChain};
pub use perm::{CycleStats, Permutation, Point};
