//! Closure-chain complexes of Bialynicki-Birula decompositions, their positive coefficients,
//! and the resulting Duistermaat-Heckman measures, all in exact rational arithmetic.
//!
//! Fixed points of every model are indexed in increasing order of the one-parameter subgroup's
//! moment map, so a closure chain is just a sorted list of indices.

pub mod coefficients;
pub mod complexes;
pub mod lattice;
pub mod localization;
pub mod measures;
pub mod models;
mod util;

pub use util::{factorial, indices_of, mask_of, subsets_of_size};
