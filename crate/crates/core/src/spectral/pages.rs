use std::collections::{BTreeMap, HashMap};
use std::fmt::Write as _;

use serde::Serialize;

use super::filtered::FilteredComplex;
use crate::error::{Error, Result};
use crate::exactlin::{Betti, Direction, QMatrix, Subquotient};

/// Bigrading convention of a spectral sequence. Both place `E_{p,q}` in total
/// degree `p+q` with `d_r` lowering `p` by `r`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Convention {
    /// Cochain differential: `d_r` has bidegree `(−r, r+1)`.
    Cohomological,
    /// Chain differential: `d_r` has bidegree `(−r, r−1)`.
    Homological,
}

impl Convention {
    pub fn of(direction: Direction) -> Self {
        match direction {
            Direction::Cochain => Convention::Cohomological,
            Direction::Chain => Convention::Homological,
        }
    }

    /// Bidegree of `d_r`.
    pub fn bidegree(self, r: usize) -> (i64, i64) {
        let r = r as i64;
        match self {
            Convention::Cohomological => (-r, r + 1),
            Convention::Homological => (-r, r - 1),
        }
    }
}

/// One page: nonzero cell dimensions and the differentials leaving cells.
#[derive(Debug, Clone, Serialize)]
pub struct Page {
    pub r: usize,
    /// `(p, q)` → dimension, nonzero cells only. Serialized as
    /// `[p, q, dim]` triples.
    #[serde(serialize_with = "cells_as_triples")]
    pub cells: BTreeMap<(i64, i64), usize>,
    /// Nonzero differentials keyed by source cell.
    #[serde(skip)]
    pub differentials: BTreeMap<(i64, i64), QMatrix>,
}

fn cells_as_triples<S: serde::Serializer>(cells: &BTreeMap<(i64, i64), usize>, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(cells.iter().map(|(&(p, q), &d)| (p, q, d)))
}

impl Page {
    pub fn dim(&self, p: i64, q: i64) -> usize {
        self.cells.get(&(p, q)).copied().unwrap_or(0)
    }

    /// Total dimension along `p + q = n`.
    pub fn total(&self, n: i64) -> usize {
        self.cells.iter().filter(|((p, q), _)| p + q == n).map(|(_, d)| d).sum()
    }
}

/// Outcome of the internal consistency checks run alongside the pages.
#[derive(Debug, Clone, Copy, Serialize, PartialEq, Eq)]
pub struct PageChecks {
    /// `d_r ∘ d_r = 0` everywhere.
    pub dd_zero: bool,
    /// `E^{r+1}` has the dimensions of the homology of `(E^r, d_r)`.
    pub next_is_homology: bool,
    /// Limit page sums to the ambient Betti numbers.
    pub converges: bool,
    /// Dimensions agree with the iterated derived exact couple.
    pub couple_agrees: bool,
}

impl PageChecks {
    pub fn all(&self) -> bool {
        self.dd_zero && self.next_is_homology && self.converges && self.couple_agrees
    }
}

/// All pages `E^1 … E^{L+1}` of a filtration of length `L`; the last is the
/// limit page.
#[derive(Debug, Clone, Serialize)]
pub struct SpectralPages {
    pub convention: Convention,
    pub start: i64,
    pub end: i64,
    pub pages: Vec<Page>,
    /// Ambient Betti numbers, the convergence target.
    pub target: Betti,
    pub checks: PageChecks,
}

impl SpectralPages {
    pub fn page(&self, r: usize) -> &Page {
        let idx = r.clamp(1, self.pages.len()) - 1;
        &self.pages[idx]
    }

    pub fn infinity(&self) -> &Page {
        self.pages.last().expect("at least one page")
    }

    /// `r,p,q,dim` rows; the limit page is labelled `inf`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("r,p,q,dim\n");
        for page in &self.pages {
            for ((p, q), d) in &page.cells {
                let _ = writeln!(out, "{},{p},{q},{d}", page.r);
            }
        }
        for ((p, q), d) in &self.infinity().cells {
            let _ = writeln!(out, "inf,{p},{q},{d}");
        }
        out
    }
}

/// Lazily computes `E^r_{p}` in total degree `n` as a subquotient of the
/// degree-`n` cochains:
/// `Z^r_p / (Z^{r−1}_{p−1} + F_p ∩ d F_{p+r−1})`, with
/// `Z^r_p = {x ∈ F_p : dx ∈ F_{p−r}}`.
pub struct PageEngine<'a> {
    fc: &'a FilteredComplex,
    cache: HashMap<(usize, i64, i64), Subquotient>,
}

impl<'a> PageEngine<'a> {
    pub fn new(fc: &'a FilteredComplex) -> Self {
        PageEngine { fc, cache: HashMap::new() }
    }

    pub fn filtered(&self) -> &FilteredComplex {
        self.fc
    }

    /// Index beyond which pages no longer change.
    pub fn last_page(&self) -> usize {
        self.fc.len() + 1
    }

    pub fn term(&mut self, r: usize, p: i64, n: i64) -> &Subquotient {
        let fc = self.fc;
        self.cache.entry((r, p, n)).or_insert_with(|| {
            let r_ = r as i64;
            let num = fc.cycles_to(n, p, p - r_);
            let lower = fc.cycles_to(n, p - 1, p - r_);
            let bnd = fc.boundaries_from(n, p, p + r_ - 1);
            Subquotient::new(&num, &lower.sum(&bnd))
        })
    }

    /// Matrix of `d_r` from cell `(p, n)` to `(p − r, n ± 1)`.
    pub fn differential(&mut self, r: usize, p: i64, n: i64) -> QMatrix {
        let step = self.fc.ambient().direction().step();
        let d = self.fc.ambient().d(n);
        let target = self.term(r, p - r as i64, n + step).clone();
        let source = self.term(r, p, n);
        source.induced(&d, &target).expect("differential lands in the target page")
    }
}

/// Computes every page, the limit page, and the consistency checks.
pub fn compute_pages(fc: &FilteredComplex) -> Result<SpectralPages> {
    let c = fc.ambient();
    let convention = Convention::of(c.direction());
    let step = c.direction().step();
    let mut engine = PageEngine::new(fc);
    let last = engine.last_page();
    let degrees: Vec<i64> = c.degrees().collect();
    let ps: Vec<i64> = (fc.start()..=fc.end()).collect();
    let mut pages = Vec::with_capacity(last);
    let mut dd_zero = true;
    for r in 1..=last {
        let mut cells = BTreeMap::new();
        let mut differentials = BTreeMap::new();
        for &n in &degrees {
            for &p in &ps {
                let dim = engine.term(r, p, n).dim();
                if dim == 0 {
                    continue;
                }
                cells.insert((p, n - p), dim);
                let tgt_p = p - r as i64;
                if engine.term(r, tgt_p, n + step).dim() == 0 {
                    continue;
                }
                let m = engine.differential(r, p, n);
                if !m.is_zero() {
                    differentials.insert((p, n - p), m);
                }
            }
        }
        for ((p, q), m) in &differentials {
            let (dp, dq) = convention.bidegree(r);
            if let Some(next) = differentials.get(&(p + dp, q + dq)) {
                if !next.mul(m).is_zero() {
                    dd_zero = false;
                }
            }
        }
        pages.push(Page { r, cells, differentials });
    }
    let mut next_is_homology = true;
    for w in pages.windows(2) {
        let (cur, next) = (&w[0], &w[1]);
        let (dp, dq) = convention.bidegree(cur.r);
        let mut keys: Vec<(i64, i64)> = cur.cells.keys().copied().collect();
        keys.extend(next.cells.keys().copied());
        keys.sort();
        keys.dedup();
        for (p, q) in keys {
            let out_rank = cur.differentials.get(&(p, q)).map_or(0, QMatrix::rank);
            let in_rank = cur.differentials.get(&(p - dp, q - dq)).map_or(0, QMatrix::rank);
            if cur.dim(p, q) < out_rank + in_rank || next.dim(p, q) != cur.dim(p, q) - out_rank - in_rank {
                next_is_homology = false;
            }
        }
    }
    let target = c.homology();
    let limit = pages.last().expect("at least one page");
    let converges = degrees.iter().all(|&n| limit.total(n) == target[&n]);
    let couple_agrees = super::couple::couple_dimensions(fc, last)?
        .iter()
        .all(|(&(r, p, n), &d)| pages[r - 1].dim(p, n - p) == d);
    Ok(SpectralPages {
        convention,
        start: fc.start(),
        end: fc.end(),
        pages,
        target,
        checks: PageChecks { dd_zero, next_is_homology, converges, couple_agrees },
    })
}

/// Fails with an error if any internal check did not hold.
pub fn compute_pages_checked(fc: &FilteredComplex) -> Result<SpectralPages> {
    let pages = compute_pages(fc)?;
    if !pages.checks.all() {
        return Err(Error::InvalidFiltration(format!("spectral sequence checks failed: {:?}", pages.checks)));
    }
    Ok(pages)
}
