//! Transfer maps built from coset sums and particle deletion, and
//! verification of the algebra of stabilization/transfer systems.

mod cosets;
mod dold;
mod model;

pub use cosets::{
    coset_representatives, iota, iota_with, is_transversal, reselect, small_generators, Iota, DEFAULT_COSET_CAP,
};
pub use dold::{dold_conclusions, dold_verify, CheckItem, DoldConclusions, DoldJson, DoldReport, DoldSystem, ThetaIso};
pub use model::{ConfigurationModel, SiteKind};
