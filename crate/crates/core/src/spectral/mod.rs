//! Spectral sequences of finite filtrations, computed exactly.

mod compare;
mod couple;
mod filtered;
mod flag;
mod les;
mod pages;
mod semisimplicial;

pub use compare::{compare_pages, CellMap, CompareJson, CompareReport, PageMap, Verdict, Window};
pub use couple::couple_dimensions;
pub use filtered::{FilteredComplex, FilteredJson};
pub use flag::{flag_set_check, FlagData, FlagReport, DEFAULT_SIMPLEX_CAP};
pub use les::{two_step_les, LesDegree, LesReport};
pub use pages::{compute_pages, compute_pages_checked, Convention, Page, PageChecks, PageEngine, SpectralPages};
pub use semisimplicial::{AugmentationJson, SemisimplicialComplex, SemisimplicialJson, Totalization};

#[cfg(test)]
mod tests;
