use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactlin::io::ComplexJson;
use crate::exactlin::{ChainComplex, QMatrix, Subspace};

/// A chain complex with an increasing filtration by coordinate
/// subcomplexes `U_start ⊆ … ⊆ U_end`, the last being everything.
///
/// Basis elements are addressed by global index: degrees are concatenated
/// from `lo` upwards. Filtration labels are kept as given, so repeated steps
/// simply produce empty columns.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FilteredComplex {
    ambient: ChainComplex,
    start: i64,
    steps: Vec<BTreeSet<usize>>,
    level: Vec<i64>,
}

impl FilteredComplex {
    pub fn new(ambient: ChainComplex, start: i64, steps: Vec<BTreeSet<usize>>) -> Result<Self> {
        let total = ambient.total_dim();
        if steps.is_empty() {
            return Err(Error::InvalidFiltration("filtration has no steps".into()));
        }
        for w in steps.windows(2) {
            if !w[0].is_subset(&w[1]) {
                return Err(Error::InvalidFiltration("filtration is not increasing".into()));
            }
        }
        if let Some(bad) = steps.iter().flatten().find(|&&g| g >= total) {
            return Err(Error::InvalidFiltration(format!("basis index {bad} out of range {total}")));
        }
        if steps.last().unwrap().len() != total {
            return Err(Error::InvalidFiltration("last filtration step is not the whole complex".into()));
        }
        let mut level = vec![i64::MAX; total];
        for (i, s) in steps.iter().enumerate().rev() {
            for &g in s {
                level[g] = start + i as i64;
            }
        }
        let fc = FilteredComplex { ambient, start, steps, level };
        let d = fc.ambient.total_differential();
        for (r, c, _) in d.triplets() {
            if fc.level[r] > fc.level[c] {
                return Err(Error::InvalidFiltration(format!(
                    "differential of basis element {c} leaves filtration step {}",
                    fc.level[c]
                )));
            }
        }
        Ok(fc)
    }

    /// One-step filtration.
    pub fn trivial(ambient: ChainComplex) -> Self {
        let all = (0..ambient.total_dim()).collect();
        Self::new(ambient, 0, vec![all]).expect("trivial filtration is valid")
    }

    /// Filtration given by a level per global basis index.
    pub fn from_levels(ambient: ChainComplex, levels: &[i64]) -> Result<Self> {
        if levels.len() != ambient.total_dim() {
            return Err(Error::InvalidFiltration("one level per basis element required".into()));
        }
        let (Some(&lo), Some(&hi)) = (levels.iter().min(), levels.iter().max()) else {
            return Self::new(ambient, 0, vec![BTreeSet::new()]);
        };
        let steps =
            (lo..=hi).map(|p| levels.iter().enumerate().filter(|(_, &l)| l <= p).map(|(g, _)| g).collect()).collect();
        Self::new(ambient, lo, steps)
    }

    pub fn ambient(&self) -> &ChainComplex {
        &self.ambient
    }

    pub fn start(&self) -> i64 {
        self.start
    }

    pub fn end(&self) -> i64 {
        self.start + self.steps.len() as i64 - 1
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ambient.total_dim() == 0
    }

    pub fn steps(&self) -> &[BTreeSet<usize>] {
        &self.steps
    }

    pub fn level_of(&self, global: usize) -> i64 {
        self.level[global]
    }

    /// Level of local basis element `i` in degree `n`.
    pub fn local_level(&self, n: i64, i: usize) -> i64 {
        self.level[self.ambient.offset(n) + i]
    }

    /// Local indices in degree `n` lying in `F_p`.
    pub fn coords(&self, n: i64, p: i64) -> Vec<usize> {
        let off = self.ambient.offset(n);
        (0..self.ambient.dim(n)).filter(|&i| self.level[off + i] <= p).collect()
    }

    /// Local indices in degree `n` outside `F_p`.
    pub fn outside(&self, n: i64, p: i64) -> Vec<usize> {
        let off = self.ambient.offset(n);
        (0..self.ambient.dim(n)).filter(|&i| self.level[off + i] > p).collect()
    }

    pub fn step_subspace(&self, n: i64, p: i64) -> Subspace {
        Subspace::coordinate(self.ambient.dim(n), self.coords(n, p))
    }

    /// `{x ∈ F_p C^n : d x ∈ F_t}`.
    pub fn cycles_to(&self, n: i64, p: i64, t: i64) -> Subspace {
        let d = self.ambient.d(n);
        let cols = self.coords(n, p);
        let rows = self.outside(n + self.ambient.direction().step(), t);
        let restricted = d.select(&rows, &cols);
        let dim = self.ambient.dim(n);
        Subspace::span(
            dim,
            crate::exactlin::kernel_basis(&restricted).into_iter().map(|k| {
                crate::exactlin::SparseVec::from_pairs(k.into_pairs().into_iter().map(|(i, x)| (cols[i], x)))
            }),
        )
    }

    /// `F_p C^n ∩ d(F_s C^{n∓1})`.
    pub fn boundaries_from(&self, n: i64, p: i64, s: i64) -> Subspace {
        let src = n - self.ambient.direction().step();
        let pre = self.cycles_to(src, s, p);
        Subspace::image_of(&self.ambient.d(src), &pre)
    }

    /// Restricts a per-degree map's support check: true iff `f` sends
    /// `F_p` of `self` into `F_p` of `other` in every degree.
    pub fn map_preserves(&self, other: &FilteredComplex, n: i64, f: &QMatrix) -> bool {
        f.triplets().all(|(r, c, _)| other.local_level(n, r) <= self.local_level(n, c))
    }
}

/// Serialized filtered complex.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FilteredJson {
    pub complex: ComplexJson,
    pub filtration: Vec<Vec<usize>>,
    #[serde(default)]
    pub start: i64,
}

impl FilteredJson {
    pub fn to_filtered(&self) -> Result<FilteredComplex> {
        let c = self.complex.to_complex()?;
        FilteredComplex::new(c, self.start, self.filtration.iter().map(|s| s.iter().copied().collect()).collect())
    }

    pub fn from_filtered(fc: &FilteredComplex) -> Self {
        FilteredJson {
            complex: ComplexJson::from_complex(fc.ambient()),
            filtration: fc.steps().iter().map(|s| s.iter().copied().collect()).collect(),
            start: fc.start(),
        }
    }
}
