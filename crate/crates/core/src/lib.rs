//! Exact computations in Sp(4, Z/n): subgroup closure, boundary-stratum
//! combinatorics of level-n compactifications, ramification invariants and
//! index-bound experiments, three-dimensional toric quotient singularities,
//! fixed loci on the Igusa quartic, and congruence-level bookkeeping.

#![allow(clippy::needless_range_loop)]

pub mod atlas;
pub mod chain;
pub mod cli;
pub mod congruence;
pub mod cyclotomic;
pub mod error;
pub mod howell;
pub mod io;
pub mod modular;
pub mod perm;
pub mod pfloor;
pub mod quartic;
pub mod ramification;
pub mod rational;
pub mod symplectic;
pub mod toric;

pub use chain::{index, Chain, Subgroup};
pub use error::{Error, Result};
pub use pfloor::{p_floor, PPowerFloor};
pub use symplectic::{is_symplectic, skew_form, transvection, GroupElement, PGroupElement, Residue, Vector4};
