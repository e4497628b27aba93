//! Manifold descriptors and stability ranges.
//!
//! [`stability_range`] evaluates the range function `f_{M,k}(j)`: the
//! stabilization map on `H_i(W_{1^j λ}(M); ℚ)` is an isomorphism for
//! `i < f` and a surjection for `i = f`. The cases are not exclusive; the
//! maximum over every applicable case is returned, as an exact rational
//! because the connectivity case involves `dim/2`.

use num_rational::Rational64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ManifoldClass {
    pub dim: u32,
    pub orientable: bool,
    /// `M` is the interior of a manifold with non-empty boundary.
    pub open_interior: bool,
    /// Declared `a` with `H̃_i(M; ℚ) = 0` for `i ≤ a`.
    pub connectivity: u32,
    #[serde(default)]
    pub punctures: u32,
}

impl ManifoldClass {
    /// The plane ℝ².
    pub fn plane() -> Self {
        ManifoldClass { dim: 2, orientable: true, open_interior: true, connectivity: 0, punctures: 0 }
    }

    pub fn euclidean(dim: u32) -> Self {
        ManifoldClass { dim, orientable: true, open_interior: true, connectivity: 0, punctures: 0 }
    }

    pub fn validate(&self) -> Result<()> {
        if self.dim < 2 {
            return Err(Error::InvalidManifoldClass(format!("dimension {} < 2", self.dim)));
        }
        if self.connectivity + 1 >= self.dim {
            return Err(Error::InvalidManifoldClass(format!(
                "connectivity a = {} must be < dim - 1 = {}",
                self.connectivity,
                self.dim - 1
            )));
        }
        Ok(())
    }

    /// Whether the connectivity case of the range formula applies:
    /// orientable with `a ≥ 1`.
    pub fn satisfies_connectivity_case(&self) -> bool {
        self.orientable && self.connectivity >= 1
    }

    /// Stabilization maps exist only for interiors of manifolds with boundary.
    pub fn has_stabilization_map(&self) -> bool {
        self.open_interior
    }
}

/// One line of the range formula.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "case", rename_all = "snake_case")]
pub enum RangeCase {
    /// `dim > 2`: `j + k`.
    HighDimension,
    /// `dim = 2`, orientable: `j + k - 1`.
    OrientableSurface,
    /// `dim = 2`, non-orientable: `j + k`.
    NonOrientableSurface,
    /// Orientable with `H̃_{≤a} = 0`, `a ≥ 1`: `min(a+1, dim/2)(j+k) - 1`.
    Connectivity { a: u32 },
}

impl RangeCase {
    pub fn value(&self, dim: u32, k: u64, j: u64) -> Rational64 {
        let n = (j + k) as i64;
        match *self {
            RangeCase::HighDimension | RangeCase::NonOrientableSurface => Rational64::from_integer(n),
            RangeCase::OrientableSurface => Rational64::from_integer(n - 1),
            RangeCase::Connectivity { a } => {
                let c = Rational64::from_integer(a as i64 + 1).min(Rational64::new(dim as i64, 2));
                c * n - 1
            }
        }
    }

    /// Every case that applies to `mc`.
    pub fn applicable(mc: &ManifoldClass) -> Vec<RangeCase> {
        let mut out = Vec::new();
        if mc.dim > 2 {
            out.push(RangeCase::HighDimension);
        }
        if mc.dim == 2 {
            out.push(if mc.orientable { RangeCase::OrientableSurface } else { RangeCase::NonOrientableSurface });
        }
        if mc.satisfies_connectivity_case() {
            out.push(RangeCase::Connectivity { a: mc.connectivity });
        }
        out
    }

    /// All cases valid in dimension `d`, one per admissible `a`.
    pub fn all_for_dimension(d: u32) -> Vec<RangeCase> {
        if d == 2 {
            return vec![RangeCase::OrientableSurface, RangeCase::NonOrientableSurface];
        }
        let mut out = vec![RangeCase::HighDimension];
        out.extend((1..d.saturating_sub(1)).map(|a| RangeCase::Connectivity { a }));
        out
    }
}

/// `f_{M,k}(j)`, the maximum over every applicable case.
pub fn stability_range(mc: &ManifoldClass, k: u64, j: u64) -> Result<Rational64> {
    mc.validate()?;
    if k == 0 {
        return Err(Error::InvalidPartition("stability range needs k ≥ 1".into()));
    }
    RangeCase::applicable(mc)
        .iter()
        .map(|c| c.value(mc.dim, k, j))
        .max()
        .ok_or_else(|| Error::InvalidManifoldClass("no applicable range case".into()))
}

/// The uniform range `j + k - 1` valid for every connected manifold of
/// dimension at least 2.
pub fn theorem_range(k: i64, j: i64) -> i64 {
    j + k - 1
}

/// The integral range `(j + k)/2` for open surfaces.
pub fn integral_surface_range(k: i64, j: i64) -> Rational64 {
    Rational64::new(j + k, 2)
}

/// Removes `r` points: the result is open, keeps dimension, orientability
/// and connectivity.
pub fn puncture(mc: &ManifoldClass, r: u32) -> ManifoldClass {
    ManifoldClass { open_interior: true, punctures: mc.punctures + r, ..*mc }
}

/// Caveats on integral coefficients attached to every range report.
///
/// Rational coefficients are essential away from open surfaces: for the
/// 2-sphere, `H_1(W_{1^j 2}(ℂP¹); ℤ) ≅ ℤ/(2j+2)` is torsion (so rationally
/// zero) and changes with `j`. No integral stability is claimed for closed
/// surfaces; the integral range `(j+k)/2` is reported only for open ones.
pub fn integral_caveats(mc: &ManifoldClass) -> Vec<String> {
    let mut out = vec![
        "ranges are for rational homology; integral statements are not implied".to_string(),
        "closed surfaces: H_1(W_{1^j 2}(CP^1); Z) = Z/(2j+2)Z is torsion, hence zero rationally; \
         integral homological stability fails for closed manifolds"
            .to_string(),
    ];
    if mc.dim == 2 && mc.open_interior {
        out.push("open surface: integral range (j+k)/2 applies".to_string());
    } else if mc.dim == 2 {
        out.push("closed surface: the integral range (j+k)/2 does not apply".to_string());
    }
    if !mc.open_interior {
        out.push("closed manifold: no stabilization map; the range is realized by the transfer map".to_string());
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i64) -> Rational64 {
        Rational64::from_integer(n)
    }

    #[test]
    fn worked_values() {
        let m3 = ManifoldClass { dim: 3, orientable: true, open_interior: true, connectivity: 0, punctures: 0 };
        assert_eq!(stability_range(&m3, 2, 5).unwrap(), r(7));
        assert_eq!(stability_range(&ManifoldClass::plane(), 2, 5).unwrap(), r(6));
        let m6 = ManifoldClass { dim: 6, orientable: true, open_interior: true, connectivity: 2, punctures: 0 };
        assert_eq!(stability_range(&m6, 2, 3).unwrap(), r(14));
    }

    #[test]
    fn odd_dimension_half_integral_case() {
        // d = 5, a = 3: min(4, 5/2) = 5/2; (5/2)·4 - 1 = 9 beats j + k = 4.
        let m = ManifoldClass { dim: 5, orientable: true, open_interior: true, connectivity: 3, punctures: 0 };
        assert_eq!(stability_range(&m, 1, 3).unwrap(), r(9));
        // d = 5, a = 3, j + k = 3: 15/2 - 1 = 13/2
        assert_eq!(stability_range(&m, 1, 2).unwrap(), Rational64::new(13, 2));
    }

    #[test]
    fn non_orientable_connectivity_not_applied() {
        let m = ManifoldClass { dim: 4, orientable: false, open_interior: true, connectivity: 2, punctures: 0 };
        assert_eq!(stability_range(&m, 2, 3).unwrap(), r(5));
    }

    #[test]
    fn validation() {
        let bad = ManifoldClass { dim: 2, orientable: true, open_interior: true, connectivity: 1, punctures: 0 };
        assert!(stability_range(&bad, 1, 1).is_err());
        let bad = ManifoldClass { dim: 1, ..ManifoldClass::plane() };
        assert!(bad.validate().is_err());
    }

    #[test]
    fn theorem_and_integral_ranges() {
        assert_eq!(theorem_range(2, 0), 1);
        assert_eq!(theorem_range(1, 0), 0);
        assert_eq!(theorem_range(4, 3), 6);
        assert_eq!(integral_surface_range(2, 4), r(3));
        assert_eq!(integral_surface_range(1, 0), Rational64::new(1, 2));
        assert_eq!(integral_surface_range(3, 3), r(3));
    }

    #[test]
    fn puncture_bookkeeping() {
        let closed = ManifoldClass { dim: 4, orientable: true, open_interior: false, connectivity: 2, punctures: 0 };
        let p = puncture(&closed, 1);
        assert!(p.open_interior && p.dim == 4 && p.orientable && p.connectivity == 2 && p.punctures == 1);
        assert_eq!(puncture(&puncture(&closed, 1), 1), puncture(&closed, 2));
        for k in 1..5 {
            for j in 0..6 {
                assert_eq!(stability_range(&closed, k, j).unwrap(), stability_range(&p, k, j).unwrap());
            }
        }
    }

    #[test]
    fn caveats_mention_torsion_and_open_surfaces() {
        let c = integral_caveats(&ManifoldClass::plane()).join("\n");
        assert!(c.contains("Z/(2j+2)Z") && c.contains("(j+k)/2 applies"));
        let sphere = ManifoldClass { open_interior: false, ..ManifoldClass::plane() };
        assert!(integral_caveats(&sphere).join("\n").contains("does not apply"));
    }
}
