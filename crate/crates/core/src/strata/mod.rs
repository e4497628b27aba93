//! Stratification of symmetric complements: filtration layers, first-page
//! assembly from stratum Betti data, duality bookkeeping, the range
//! arithmetic certificate and a built-in cell model for the plane.

mod certificate;
mod e1;
mod oracle;
pub mod salvetti;

pub use certificate::{
    case_valid_for, duality_degree, range_certificate, window_is_tight, CertificateCell, DualDegree,
    RangeCertificate, StratumDescriptor,
};
pub use e1::{
    assemble_e1, euler_consistency, filtration_report, strata_of, total_strata_euler, E1Cell, E1Table,
    EulerReport, FiltrationReport, Layer,
};
pub use oracle::{
    hexagon_quotient_homology, plane_configuration_homology, plane_oracle, BettiOracle, OracleEntry, Provenance,
    DEFAULT_PLANE_CAP,
};
