use num_traits::{One, Zero};

use super::Q;

/// Sparse vector over ℚ: `(index, value)` pairs, strictly increasing
/// indices, no stored zeros.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct SparseVec {
    entries: Vec<(usize, Q)>,
}

impl SparseVec {
    pub fn new() -> Self {
        SparseVec { entries: Vec::new() }
    }

    pub fn unit(i: usize) -> Self {
        SparseVec { entries: vec![(i, Q::one())] }
    }

    /// Builds from unsorted pairs, summing duplicates and dropping zeros.
    pub fn from_pairs<I: IntoIterator<Item = (usize, Q)>>(pairs: I) -> Self {
        let mut v: Vec<(usize, Q)> = pairs.into_iter().collect();
        v.sort_by_key(|(i, _)| *i);
        let mut entries: Vec<(usize, Q)> = Vec::with_capacity(v.len());
        for (i, x) in v {
            match entries.last_mut() {
                Some((j, y)) if *j == i => *y += x,
                _ => entries.push((i, x)),
            }
        }
        entries.retain(|(_, x)| !x.is_zero());
        SparseVec { entries }
    }

    pub fn from_dense(values: &[Q]) -> Self {
        SparseVec {
            entries: values
                .iter()
                .enumerate()
                .filter(|(_, x)| !x.is_zero())
                .map(|(i, x)| (i, x.clone()))
                .collect(),
        }
    }

    pub fn to_dense(&self, len: usize) -> Vec<Q> {
        let mut out = vec![Q::zero(); len];
        for (i, x) in &self.entries {
            out[*i] = x.clone();
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn nnz(&self) -> usize {
        self.entries.len()
    }

    pub fn iter(&self) -> impl Iterator<Item = &(usize, Q)> {
        self.entries.iter()
    }

    pub fn lead(&self) -> Option<(usize, &Q)> {
        self.entries.first().map(|(i, x)| (*i, x))
    }

    pub fn max_index(&self) -> Option<usize> {
        self.entries.last().map(|(i, _)| *i)
    }

    pub fn get(&self, i: usize) -> Q {
        match self.entries.binary_search_by_key(&i, |(j, _)| *j) {
            Ok(pos) => self.entries[pos].1.clone(),
            Err(_) => Q::zero(),
        }
    }

    /// `self += a · other`.
    pub fn axpy(&mut self, a: &Q, other: &SparseVec) {
        if a.is_zero() || other.is_zero() {
            return;
        }
        let mut out = Vec::with_capacity(self.entries.len() + other.entries.len());
        let mut xs = std::mem::take(&mut self.entries).into_iter().peekable();
        let mut ys = other.entries.iter().peekable();
        loop {
            match (xs.peek(), ys.peek()) {
                (Some((i, _)), Some((j, _))) if i < j => out.push(xs.next().unwrap()),
                (Some((i, _)), Some((j, _))) if i > j => {
                    let (j, y) = ys.next().unwrap();
                    out.push((*j, a * y));
                }
                (Some(_), Some(_)) => {
                    let (i, x) = xs.next().unwrap();
                    let (_, y) = ys.next().unwrap();
                    let s = x + a * y;
                    if !s.is_zero() {
                        out.push((i, s));
                    }
                }
                (Some(_), None) => out.push(xs.next().unwrap()),
                (None, Some(_)) => {
                    let (j, y) = ys.next().unwrap();
                    out.push((*j, a * y));
                }
                (None, None) => break,
            }
        }
        self.entries = out;
    }

    pub fn scale(&mut self, a: &Q) {
        if a.is_zero() {
            self.entries.clear();
        } else {
            for (_, x) in &mut self.entries {
                *x *= a;
            }
        }
    }

    pub fn scaled(&self, a: &Q) -> SparseVec {
        let mut v = self.clone();
        v.scale(a);
        v
    }

    pub fn dot(&self, other: &SparseVec) -> Q {
        let mut acc = Q::zero();
        let (mut a, mut b) = (0, 0);
        while a < self.entries.len() && b < other.entries.len() {
            let (i, x) = &self.entries[a];
            let (j, y) = &other.entries[b];
            if i < j {
                a += 1;
            } else if i > j {
                b += 1;
            } else {
                acc += x * y;
                a += 1;
                b += 1;
            }
        }
        acc
    }

    /// Shifts every index by `offset`.
    pub fn shifted(&self, offset: usize) -> SparseVec {
        SparseVec { entries: self.entries.iter().map(|(i, x)| (i + offset, x.clone())).collect() }
    }

    /// Keeps indices in `range`, re-based to start at `range.start`.
    pub fn slice(&self, range: std::ops::Range<usize>) -> SparseVec {
        SparseVec {
            entries: self
                .entries
                .iter()
                .filter(|(i, _)| range.contains(i))
                .map(|(i, x)| (i - range.start, x.clone()))
                .collect(),
        }
    }

    pub fn retain_indices(&mut self, keep: impl Fn(usize) -> bool) {
        self.entries.retain(|(i, _)| keep(*i));
    }

    pub fn into_pairs(self) -> Vec<(usize, Q)> {
        self.entries
    }
}

impl std::ops::Neg for SparseVec {
    type Output = SparseVec;
    fn neg(mut self) -> SparseVec {
        for (_, x) in &mut self.entries {
            *x = -x.clone();
        }
        self
    }
}
