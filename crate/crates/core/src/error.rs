use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("invalid partition: {0}")]
    InvalidPartition(String),

    #[error("invalid manifold class: {0}")]
    InvalidManifoldClass(String),

    #[error("resource cap exceeded: {what} = {value} > cap {cap}")]
    CapExceeded {
        what: &'static str,
        value: usize,
        cap: usize,
    },

    #[error("shape mismatch: {0}")]
    Shape(String),

    #[error("invalid chain complex: {0}")]
    InvalidComplex(String),

    #[error("invalid group action: {0}")]
    InvalidAction(String),

    #[error("invalid filtration: {0}")]
    InvalidFiltration(String),

    #[error("not a filtered chain map: {0}")]
    NotFilteredMap(String),

    #[error("invalid semisimplicial object: {0}")]
    InvalidSemisimplicial(String),

    #[error("invalid flag data: {0}")]
    InvalidFlag(String),

    #[error("degree {degree} outside [0, {dimension}]")]
    DegreeOutOfRange { degree: i64, dimension: i64 },

    #[error("duality requires an orientable even-dimensional class or twisted coefficients")]
    DualityUnavailable,

    #[error("invalid loop datum: {0}")]
    InvalidLoop(String),

    #[error("invalid Dold system: {0}")]
    InvalidDold(String),

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
