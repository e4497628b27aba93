use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::subspace::Subquotient;
use super::{QMatrix, Subspace};
use crate::error::{Error, Result};

/// Whether differentials lower (`Chain`) or raise (`Cochain`) degree.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Direction {
    #[default]
    Chain,
    Cochain,
}

impl Direction {
    /// Degree change of the differential.
    pub fn step(self) -> i64 {
        match self {
            Direction::Chain => -1,
            Direction::Cochain => 1,
        }
    }
}

/// Betti numbers keyed by degree.
pub type Betti = BTreeMap<i64, usize>;

/// Finite graded ℚ-vector spaces in degrees `lo..lo+dims.len()` with a
/// differential of degree ±1.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChainComplex {
    lo: i64,
    dims: Vec<usize>,
    direction: Direction,
    // diffs[i] leaves degree lo+i; target rows are 0 when the target degree
    // is outside the range.
    diffs: Vec<QMatrix>,
}

impl ChainComplex {
    /// Builds and validates a complex. Missing differentials are zero.
    pub fn new(lo: i64, dims: Vec<usize>, direction: Direction, diffs: BTreeMap<i64, QMatrix>) -> Result<Self> {
        let hi = lo + dims.len() as i64 - 1;
        let dim_at = |n: i64| if n < lo || n > hi { 0 } else { dims[(n - lo) as usize] };
        let mut out = Vec::with_capacity(dims.len());
        for (n, m) in &diffs {
            if (*n < lo || *n > hi)
                && !m.is_zero() {
                    return Err(Error::InvalidComplex(format!("differential given at degree {n} outside range")));
                }
        }
        for (i, &d) in dims.iter().enumerate() {
            let n = lo + i as i64;
            let target = dim_at(n + direction.step());
            let m = match diffs.get(&n) {
                Some(m) => {
                    if m.shape() != (target, d) {
                        return Err(Error::Shape(format!(
                            "differential at degree {n} is {}x{}, expected {target}x{d}",
                            m.rows(),
                            m.cols()
                        )));
                    }
                    m.clone()
                }
                None => QMatrix::zeros(target, d),
            };
            out.push(m);
        }
        let c = ChainComplex { lo, dims, direction, diffs: out };
        for n in c.degrees() {
            let next = n + direction.step();
            if c.in_range(next) && !c.d(next).mul(&c.d(n)).is_zero() {
                return Err(Error::InvalidComplex(format!("d∘d ≠ 0 starting in degree {n}")));
            }
        }
        Ok(c)
    }

    /// Complex with all differentials zero.
    pub fn zero_differential(lo: i64, dims: Vec<usize>, direction: Direction) -> Self {
        Self::new(lo, dims, direction, BTreeMap::new()).expect("zero differentials are valid")
    }

    pub fn lo(&self) -> i64 {
        self.lo
    }

    pub fn hi(&self) -> i64 {
        self.lo + self.dims.len() as i64 - 1
    }

    pub fn direction(&self) -> Direction {
        self.direction
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn degrees(&self) -> impl Iterator<Item = i64> {
        self.lo..=self.hi()
    }

    pub fn in_range(&self, n: i64) -> bool {
        n >= self.lo && n <= self.hi()
    }

    pub fn dim(&self, n: i64) -> usize {
        if self.in_range(n) {
            self.dims[(n - self.lo) as usize]
        } else {
            0
        }
    }

    pub fn total_dim(&self) -> usize {
        self.dims.iter().sum()
    }

    /// Position of the first basis element of degree `n` in the concatenated
    /// basis of all degrees.
    pub fn offset(&self, n: i64) -> usize {
        self.degrees().take_while(|&m| m < n).map(|m| self.dim(m)).sum()
    }

    /// Degree and local index of a global basis index.
    pub fn locate(&self, global: usize) -> Option<(i64, usize)> {
        let mut start = 0;
        for n in self.degrees() {
            let d = self.dim(n);
            if global < start + d {
                return Some((n, global - start));
            }
            start += d;
        }
        None
    }

    /// Differential leaving degree `n` (zero outside the range).
    pub fn d(&self, n: i64) -> QMatrix {
        if self.in_range(n) {
            self.diffs[(n - self.lo) as usize].clone()
        } else {
            QMatrix::zeros(self.dim(n + self.direction.step()), self.dim(n))
        }
    }

    pub fn d_ref(&self, n: i64) -> Option<&QMatrix> {
        self.in_range(n).then(|| &self.diffs[(n - self.lo) as usize])
    }

    /// Differential of the whole complex on the concatenated basis.
    pub fn total_differential(&self) -> QMatrix {
        let n = self.total_dim();
        let mut trips = Vec::new();
        for deg in self.degrees() {
            let tgt = deg + self.direction.step();
            if !self.in_range(tgt) {
                continue;
            }
            let (ro, co) = (self.offset(tgt), self.offset(deg));
            for (r, c, v) in self.diffs[(deg - self.lo) as usize].triplets() {
                trips.push((ro + r, co + c, v.clone()));
            }
        }
        QMatrix::from_triplets(n, n, trips).expect("offsets in range")
    }

    fn rank_out(&self, n: i64) -> usize {
        self.d_ref(n).map_or(0, QMatrix::rank)
    }

    pub fn homology(&self) -> Betti {
        let ranks: BTreeMap<i64, usize> = self.degrees().map(|n| (n, self.rank_out(n))).collect();
        self.degrees()
            .map(|n| {
                let incoming = ranks.get(&(n - self.direction.step())).copied().unwrap_or(0);
                (n, self.dim(n) - ranks[&n] - incoming)
            })
            .collect()
    }

    pub fn cycles(&self, n: i64) -> Subspace {
        Subspace::kernel(&self.d(n))
    }

    pub fn boundaries(&self, n: i64) -> Subspace {
        let src = n - self.direction.step();
        if self.in_range(src) {
            Subspace::image(&self.d(src))
        } else {
            Subspace::zero(self.dim(n))
        }
    }

    /// Homology in degree `n` as cycles modulo boundaries.
    pub fn homology_space(&self, n: i64) -> Subquotient {
        Subquotient::new(&self.cycles(n), &self.boundaries(n))
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.degrees().map(|n| sign(n) * self.dim(n) as i64).sum()
    }

    /// Degreewise direct sum; both must share direction.
    pub fn direct_sum(&self, other: &ChainComplex) -> Result<ChainComplex> {
        if self.direction != other.direction {
            return Err(Error::Shape("direct sum of complexes with different directions".into()));
        }
        if self.dims.is_empty() {
            return Ok(other.clone());
        }
        if other.dims.is_empty() {
            return Ok(self.clone());
        }
        let lo = self.lo.min(other.lo);
        let hi = self.hi().max(other.hi());
        let dims = (lo..=hi).map(|n| self.dim(n) + other.dim(n)).collect();
        let diffs = (lo..=hi)
            .map(|n| {
                let a = self.d(n);
                let b = other.d(n);
                (n, a.direct_sum(&b))
            })
            .collect();
        ChainComplex::new(lo, dims, self.direction, diffs)
    }
}

/// `(-1)^n`.
pub fn sign(n: i64) -> i64 {
    if n.rem_euclid(2) == 0 {
        1
    } else {
        -1
    }
}

/// Per-degree linear maps between two complexes; absent degrees are zero.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ChainMap {
    pub maps: BTreeMap<i64, QMatrix>,
}

impl ChainMap {
    pub fn new(maps: BTreeMap<i64, QMatrix>) -> Self {
        ChainMap { maps }
    }

    pub fn identity(c: &ChainComplex) -> Self {
        ChainMap { maps: c.degrees().map(|n| (n, QMatrix::identity(c.dim(n)))).collect() }
    }

    pub fn zero(src: &ChainComplex, dst: &ChainComplex) -> Self {
        let lo = src.lo().min(dst.lo());
        let hi = src.hi().max(dst.hi());
        ChainMap { maps: (lo..=hi).map(|n| (n, QMatrix::zeros(dst.dim(n), src.dim(n)))).collect() }
    }

    /// Component in degree `n`, shaped `dst.dim(n) × src.dim(n)`.
    pub fn at(&self, n: i64, src: &ChainComplex, dst: &ChainComplex) -> QMatrix {
        self.maps.get(&n).cloned().unwrap_or_else(|| QMatrix::zeros(dst.dim(n), src.dim(n)))
    }

    pub fn compose(&self, after: &ChainMap, src: &ChainComplex, mid: &ChainComplex, dst: &ChainComplex) -> ChainMap {
        let lo = src.lo().min(dst.lo());
        let hi = src.hi().max(dst.hi());
        ChainMap {
            maps: (lo..=hi).map(|n| (n, after.at(n, mid, dst).mul(&self.at(n, src, mid)))).collect(),
        }
    }

    fn check_shapes(&self, src: &ChainComplex, dst: &ChainComplex) -> Result<()> {
        for (n, m) in &self.maps {
            if m.shape() != (dst.dim(*n), src.dim(*n)) {
                return Err(Error::Shape(format!(
                    "map in degree {n} is {}x{}, expected {}x{}",
                    m.rows(),
                    m.cols(),
                    dst.dim(*n),
                    src.dim(*n)
                )));
            }
        }
        Ok(())
    }

    /// Map induced on homology in degree `n`.
    pub fn on_homology(&self, n: i64, src: &ChainComplex, dst: &ChainComplex) -> Result<QMatrix> {
        self.check_shapes(src, dst)?;
        src.homology_space(n)
            .induced(&self.at(n, src, dst), &dst.homology_space(n))
            .ok_or_else(|| Error::InvalidComplex(format!("map does not send cycles to cycles in degree {n}")))
    }
}

/// Whether `f` commutes with the differentials of `c1` and `c2`.
pub fn chain_map_check(f: &ChainMap, c1: &ChainComplex, c2: &ChainComplex) -> Result<bool> {
    if c1.direction() != c2.direction() {
        return Err(Error::Shape("complexes have different directions".into()));
    }
    f.check_shapes(c1, c2)?;
    let step = c1.direction().step();
    let lo = c1.lo().min(c2.lo());
    let hi = c1.hi().max(c2.hi());
    for n in lo..=hi {
        let left = f.at(n + step, c1, c2).mul(&c1.d(n));
        let right = c2.d(n).mul(&f.at(n, c1, c2));
        if left != right {
            return Ok(false);
        }
    }
    Ok(true)
}
