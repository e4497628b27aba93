//! Exact linear algebra over ℚ: sparse matrices, echelon forms, chain
//! complexes, homology and coinvariants of finite group actions.

mod complex;
pub mod echelon;
mod group;
pub mod io;
mod matrix;
mod subspace;
mod vector;

pub use complex::{chain_map_check, Betti, ChainComplex, ChainMap, Direction};
pub use echelon::{image_basis, kernel_basis, kernel_matrix, rank, solve, Echelon, Insertion};
pub use group::{
    averaged_dims, coinvariants, homology_action, CoinvariantMethod, Coinvariants, GroupAction, GroupElement,
    DEFAULT_ORDER_CAP,
};
pub use matrix::QMatrix;
pub use subspace::{q, Subquotient, Subspace};
pub use vector::SparseVec;

/// Exact rational scalar.
pub type Q = num_rational::BigRational;

pub use complex::sign;
