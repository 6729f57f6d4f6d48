//! Exact engine for Weyl groupoids of diagonal bicharacters: decides whether
//! `(chi, E)` gives an arithmetic root system, enumerates roots, objects, the
//! diagram graph and the group `W^B`, and checks the rank-2 and rank-3
//! classification tables.

pub mod bicharacter;
pub mod catalog;
pub mod coxeter;
pub mod diagram;
pub mod equivalence;
pub mod error;
pub mod exponents;
pub mod groupoid;
pub mod lattice;
pub mod subsystems;

pub use bicharacter::{Basis, Bicharacter, CartanVerdict};
pub use catalog::Catalog;
pub use diagram::DynkinDiagram;
pub use error::{Error, Result};
pub use exponents::{solve_min_exponent, GroupContext, GroupElement, Order};
