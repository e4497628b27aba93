use num_rational::Rational64;
use num_traits::ToPrimitive;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::partitions::Partition;
use crate::ranges::{ManifoldClass, RangeCase};

/// A stratum `S_{λ'}(M)` with its dimension `d · |λ'|`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct StratumDescriptor {
    pub lambda: Partition,
    pub class: ManifoldClass,
    pub dimension: i64,
}

impl StratumDescriptor {
    pub fn new(lambda: Partition, class: ManifoldClass) -> Self {
        let dimension = class.dim as i64 * lambda.cardinality() as i64;
        StratumDescriptor { lambda, class, dimension }
    }
}

/// Homological degree dual to compactly supported degree `i`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct DualDegree {
    pub degree: i64,
    /// Duality holds only with orientation-twisted coefficients.
    pub twisted: bool,
}

/// `dimension − i`. Untwisted duality needs an orientable class of even
/// dimension; otherwise `twisted` must be requested.
pub fn duality_degree(sd: &StratumDescriptor, i: i64, twisted: bool) -> Result<DualDegree> {
    let untwisted_ok = sd.class.orientable && sd.class.dim.is_multiple_of(2);
    if !untwisted_ok && !twisted {
        return Err(Error::DualityUnavailable);
    }
    if i < 0 || i > sd.dimension {
        return Err(Error::DegreeOutOfRange { degree: i, dimension: sd.dimension });
    }
    Ok(DualDegree { degree: sd.dimension - i, twisted: !untwisted_ok })
}

/// One checked cell of the range certificate.
#[derive(Debug, Clone, Serialize, PartialEq, Eq)]
pub struct CertificateCell {
    pub p: i64,
    pub q: i64,
    /// `d(j+k+1−p) − (p+q)`.
    pub dual_degree: i64,
    /// Human-readable inequality instance, e.g. `3 <= 5`.
    pub inequality: String,
    pub holds: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct RangeCertificate {
    pub d: u32,
    pub k: u32,
    pub j: u32,
    pub case: RangeCase,
    pub f: String,
    /// Lower end of the window in total degree: `⌈d(j+k+1) − f⌉ − slack`.
    pub threshold: i64,
    pub slack: i64,
    pub cells: Vec<CertificateCell>,
    pub first_failure: Option<CertificateCell>,
    pub passed: bool,
}

/// Whether `case` can describe a manifold of dimension `d`.
pub fn case_valid_for(d: u32, case: &RangeCase) -> bool {
    match case {
        RangeCase::HighDimension => d > 2,
        RangeCase::OrientableSurface | RangeCase::NonOrientableSurface => d == 2,
        RangeCase::Connectivity { a } => *a >= 1 && a + 1 < d,
    }
}

/// Checks that every cell `(p, q)` with `0 ≤ p ≤ k+j`, `q ≥ 0` and
/// `p + q ≥ d(j+k+1) − f − slack` has dual degree `h = d(j+k+1−p) − (p+q)`
/// inside the stratum stability range for `case`, with `m = k + j − 2p`:
/// `h ≤ m` (dimension above 2, non-orientable surfaces), `h < m` (orientable
/// surfaces), `h < (a+1)m` (connectivity).
pub fn range_certificate(d: u32, k: u32, j: u32, case: RangeCase, slack: i64) -> Result<RangeCertificate> {
    if d < 2 {
        return Err(Error::InvalidManifoldClass(format!("dimension {d} < 2")));
    }
    if !case_valid_for(d, &case) {
        return Err(Error::InvalidManifoldClass(format!("case {case:?} does not apply in dimension {d}")));
    }
    let f = case.value(d, k as u64, j as u64);
    let (d_, k_, j_) = (d as i64, k as i64, j as i64);
    let top = d_ * (j_ + k_ + 1);
    let threshold = (Rational64::from_integer(top) - f).ceil().to_i64().expect("small") - slack;
    let mut cells = Vec::new();
    for p in 0..=(k_ + j_) {
        let dim = d_ * (j_ + k_ + 1 - p);
        for total in threshold.max(p)..=dim {
            let q = total - p;
            let h = dim - total;
            let m = k_ + j_ - 2 * p;
            let (holds, inequality) = match case {
                RangeCase::HighDimension | RangeCase::NonOrientableSurface => (h <= m, format!("{h} <= {m}")),
                RangeCase::OrientableSurface => (h < m, format!("{h} < {m}")),
                RangeCase::Connectivity { a } => {
                    let bound = (a as i64 + 1) * m;
                    (h < bound, format!("{h} < {bound}"))
                }
            };
            cells.push(CertificateCell { p, q, dual_degree: h, inequality, holds });
        }
    }
    let first_failure = cells.iter().find(|c| !c.holds).cloned();
    Ok(RangeCertificate {
        d,
        k,
        j,
        case,
        f: f.to_string(),
        threshold,
        slack,
        passed: first_failure.is_none(),
        cells,
        first_failure,
    })
}

/// Whether `f` attains its bound, so that widening the window by one degree
/// must expose a failing cell. Only `j + k = 0` and the connectivity case
/// with `dim/2 < a + 1` leave room.
pub fn window_is_tight(d: u32, k: u32, j: u32, case: &RangeCase) -> bool {
    if j + k == 0 {
        return false;
    }
    match case {
        RangeCase::Connectivity { a } => 2 * (*a as u64 + 1) <= d as u64,
        _ => true,
    }
}
