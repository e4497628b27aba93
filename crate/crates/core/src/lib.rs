//! Verification workbench for homological stability of symmetric
//! complements: partition collapse combinatorics, stability ranges, exact
//! spectral sequences of filtrations, stratification data, transfer maps and
//! orientation sign calculus.

pub mod error;
pub mod exactlin;
pub mod monodromy;
pub mod partitions;
pub mod perm;
pub mod random;
pub mod ranges;
pub mod spectral;
pub mod strata;
pub mod transfer;

pub use error::{Error, Result};
pub use exactlin::{ChainComplex, ChainMap, Direction, GroupAction, QMatrix, SparseVec, Q};
pub use partitions::Partition;
pub use perm::Permutation;
pub use ranges::{ManifoldClass, RangeCase};
pub use spectral::{FilteredComplex, SpectralPages};
pub use strata::{BettiOracle, E1Table};
pub use transfer::{ConfigurationModel, DoldSystem};
pub use monodromy::{LoopDatum, Sign};
