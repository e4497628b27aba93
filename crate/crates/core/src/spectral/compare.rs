use std::collections::BTreeSet;

use serde::Serialize;

use super::filtered::{FilteredComplex, FilteredJson};
use super::pages::{Convention, PageEngine};
use crate::error::{Error, Result};
use crate::exactlin::io::{chain_map_from_json, chain_map_to_json, MapJson};
use crate::exactlin::{chain_map_check, ChainMap};

/// Induced map on one cell of one page.
#[derive(Debug, Clone, Serialize, PartialEq, Eq)]
pub struct CellMap {
    pub p: i64,
    pub q: i64,
    pub source_dim: usize,
    pub target_dim: usize,
    pub rank: usize,
}

impl CellMap {
    pub fn injective(&self) -> bool {
        self.rank == self.source_dim
    }

    pub fn surjective(&self) -> bool {
        self.rank == self.target_dim
    }

    pub fn bijective(&self) -> bool {
        self.injective() && self.surjective()
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct PageMap {
    pub r: usize,
    pub cells: Vec<CellMap>,
}

/// Which total degrees must be isomorphisms and which surjections.
#[derive(Debug, Clone, Copy, Serialize, PartialEq, Eq)]
pub struct Window {
    pub threshold: i64,
    pub convention: Convention,
}

impl Window {
    /// Cohomological: iso for `n ≥ s`. Homological: iso for `n ≤ s`.
    pub fn wants_iso(&self, n: i64) -> bool {
        match self.convention {
            Convention::Cohomological => n >= self.threshold,
            Convention::Homological => n <= self.threshold,
        }
    }

    /// The single degree where only surjectivity is asked for: `s − 1`
    /// cohomologically, `s + 1` homologically.
    pub fn surj_degree(&self) -> i64 {
        match self.convention {
            Convention::Cohomological => self.threshold - 1,
            Convention::Homological => self.threshold + 1,
        }
    }

    pub fn holds(&self, cells: &[CellMap]) -> bool {
        cells.iter().all(|c| {
            let n = c.p + c.q;
            if self.wants_iso(n) {
                c.bijective()
            } else if n == self.surj_degree() {
                c.surjective()
            } else {
                true
            }
        })
    }
}

#[derive(Debug, Clone, Copy, Serialize, PartialEq, Eq)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    /// The first-page hypothesis does not hold; nothing is claimed.
    HypothesisFails,
    /// Hypothesis holds and the limit page satisfies the conclusion.
    Confirmed,
    /// Hypothesis holds but the limit page violates the conclusion.
    Contradicted,
}

#[derive(Debug, Clone, Serialize)]
pub struct CompareReport {
    pub window: Window,
    pub pages: Vec<PageMap>,
    pub hypothesis: bool,
    pub conclusion: bool,
    /// The map on ambient homology satisfies the same window.
    pub abutment: bool,
    pub verdict: Verdict,
}

/// Maps induced by a filtration-preserving chain map on every page, and the
/// comparison verdict at threshold `s`.
pub fn compare_pages(f: &ChainMap, src: &FilteredComplex, dst: &FilteredComplex, s: i64) -> Result<CompareReport> {
    let (c1, c2) = (src.ambient(), dst.ambient());
    if !chain_map_check(f, c1, c2)? {
        return Err(Error::NotFilteredMap("map does not commute with the differentials".into()));
    }
    for n in c1.degrees() {
        if !src.map_preserves(dst, n, &f.at(n, c1, c2)) {
            return Err(Error::NotFilteredMap(format!("map does not preserve the filtration in degree {n}")));
        }
    }
    let convention = Convention::of(c1.direction());
    let window = Window { threshold: s, convention };
    let mut e1 = PageEngine::new(src);
    let mut e2 = PageEngine::new(dst);
    let last = e1.last_page().max(e2.last_page());
    let lo = c1.lo().min(c2.lo());
    let hi = c1.hi().max(c2.hi());
    let p_lo = src.start().min(dst.start());
    let p_hi = src.end().max(dst.end());
    let mut pages = Vec::new();
    for r in 1..=last {
        let mut cells = Vec::new();
        for n in lo..=hi {
            let fm = f.at(n, c1, c2);
            for p in p_lo..=p_hi {
                let a = e1.term(r.min(e1.last_page()), p, n).clone();
                let b = e2.term(r.min(e2.last_page()), p, n);
                if a.dim() == 0 && b.dim() == 0 {
                    continue;
                }
                let m = a.induced(&fm, b).expect("filtered chain map induces page maps");
                cells.push(CellMap { p, q: n - p, source_dim: a.dim(), target_dim: b.dim(), rank: m.rank() });
            }
        }
        pages.push(PageMap { r, cells });
    }
    let hypothesis = window.holds(&pages[0].cells);
    let conclusion = window.holds(&pages.last().unwrap().cells);
    let mut abutment_cells = Vec::new();
    let degrees: BTreeSet<i64> = (lo..=hi).collect();
    for n in degrees {
        let m = f.on_homology(n, c1, c2)?;
        abutment_cells.push(CellMap { p: 0, q: n, source_dim: m.cols(), target_dim: m.rows(), rank: m.rank() });
    }
    let abutment = window.holds(&abutment_cells);
    let verdict = match (hypothesis, conclusion) {
        (false, _) => Verdict::HypothesisFails,
        (true, true) => Verdict::Confirmed,
        (true, false) => Verdict::Contradicted,
    };
    Ok(CompareReport { window, pages, hypothesis, conclusion, abutment, verdict })
}

/// Serialized comparison: two filtered complexes, a map and a threshold.
#[derive(Debug, Clone, serde::Serialize, serde::Deserialize)]
pub struct CompareJson {
    pub source: FilteredJson,
    pub target: FilteredJson,
    pub map: MapJson,
    pub threshold: i64,
}

impl CompareJson {
    pub fn to_parts(&self) -> Result<(ChainMap, FilteredComplex, FilteredComplex)> {
        let src = self.source.to_filtered()?;
        let dst = self.target.to_filtered()?;
        let f = chain_map_from_json(&self.map, src.ambient(), dst.ambient())?;
        Ok((f, src, dst))
    }

    pub fn from_parts(f: &ChainMap, src: &FilteredComplex, dst: &FilteredComplex, threshold: i64) -> Self {
        CompareJson {
            source: FilteredJson::from_filtered(src),
            target: FilteredJson::from_filtered(dst),
            map: chain_map_to_json(f, src.ambient(), dst.ambient()),
            threshold,
        }
    }
}
