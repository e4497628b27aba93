//! Permutations of `{0, .., n-1}` in one-line notation.
//!
//! `p.apply(i)` is the image of `i`. Composition `p.compose(&q)` is `p ∘ q`,
//! i.e. first `q`, then `p`. Acting on tuples, `p` moves the entry in slot
//! `i` to slot `p(i)`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<usize>", into = "Vec<usize>")]
pub struct Permutation(Vec<usize>);

impl Permutation {
    pub fn identity(n: usize) -> Self {
        Permutation((0..n).collect())
    }

    pub fn new(images: Vec<usize>) -> Result<Self> {
        let n = images.len();
        let mut seen = vec![false; n];
        for &i in &images {
            if i >= n || seen[i] {
                return Err(Error::Parse(format!("not a permutation: {images:?}")));
            }
            seen[i] = true;
        }
        Ok(Permutation(images))
    }

    /// Parses 1-based one-line notation, e.g. `[2,1,3]`.
    pub fn from_one_based(images: &[usize]) -> Result<Self> {
        if images.contains(&0) {
            return Err(Error::Parse(format!("1-based permutation contains 0: {images:?}")));
        }
        Self::new(images.iter().map(|i| i - 1).collect())
    }

    pub fn transposition(n: usize, a: usize, b: usize) -> Self {
        let mut v: Vec<usize> = (0..n).collect();
        v.swap(a, b);
        Permutation(v)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn apply(&self, i: usize) -> usize {
        self.0[i]
    }

    pub fn images(&self) -> &[usize] {
        &self.0
    }

    pub fn is_identity(&self) -> bool {
        self.0.iter().enumerate().all(|(i, &p)| i == p)
    }

    pub fn compose(&self, other: &Permutation) -> Permutation {
        assert_eq!(self.len(), other.len(), "composing permutations of different degree");
        Permutation(other.0.iter().map(|&i| self.0[i]).collect())
    }

    pub fn inverse(&self) -> Permutation {
        let mut inv = vec![0; self.len()];
        for (i, &p) in self.0.iter().enumerate() {
            inv[p] = i;
        }
        Permutation(inv)
    }

    /// +1 for even, -1 for odd.
    pub fn sign(&self) -> i32 {
        let mut seen = vec![false; self.len()];
        let mut transpositions = 0;
        for start in 0..self.len() {
            if seen[start] {
                continue;
            }
            let mut len = 0;
            let mut i = start;
            while !seen[i] {
                seen[i] = true;
                i = self.0[i];
                len += 1;
            }
            transpositions += len - 1;
        }
        if transpositions % 2 == 0 {
            1
        } else {
            -1
        }
    }

    /// Embeds into `S_m` (m ≥ n) fixing the letters `n..m`.
    pub fn extend(&self, m: usize) -> Permutation {
        let mut v = self.0.clone();
        v.extend(self.len()..m);
        Permutation(v)
    }

    /// Moves the entry of slot `i` to slot `self(i)`.
    pub fn act_on_tuple<T: Clone>(&self, tuple: &[T]) -> Vec<T> {
        let mut out = tuple.to_vec();
        for (i, x) in tuple.iter().enumerate() {
            out[self.0[i]] = x.clone();
        }
        out
    }

    /// All permutations of `{0..n-1}` in lexicographic order.
    pub fn all(n: usize) -> Vec<Permutation> {
        let mut out = Vec::new();
        let mut cur: Vec<usize> = (0..n).collect();
        loop {
            out.push(Permutation(cur.clone()));
            // next lexicographic permutation
            let Some(i) = (1..n).rev().find(|&i| cur[i - 1] < cur[i]) else {
                break;
            };
            let j = (i..n).rev().find(|&j| cur[j] > cur[i - 1]).unwrap();
            cur.swap(i - 1, j);
            cur[i..].reverse();
        }
        out
    }
}

impl TryFrom<Vec<usize>> for Permutation {
    type Error = Error;
    fn try_from(v: Vec<usize>) -> Result<Self> {
        Permutation::new(v)
    }
}

impl From<Permutation> for Vec<usize> {
    fn from(p: Permutation) -> Vec<usize> {
        p.0
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sign_of_transposition_and_cycle() {
        assert_eq!(Permutation::transposition(3, 0, 1).sign(), -1);
        assert_eq!(Permutation::new(vec![1, 2, 0]).unwrap().sign(), 1);
        assert_eq!(Permutation::identity(4).sign(), 1);
    }

    #[test]
    fn all_has_factorial_size_and_sign_is_multiplicative() {
        let all = Permutation::all(4);
        assert_eq!(all.len(), 24);
        for p in &all {
            for q in &all {
                assert_eq!(p.compose(q).sign(), p.sign() * q.sign());
            }
        }
    }

    #[test]
    fn tuple_action_is_left_action() {
        let p = Permutation::new(vec![1, 2, 0]).unwrap();
        let q = Permutation::transposition(3, 0, 2);
        let t = ['a', 'b', 'c'];
        assert_eq!(p.compose(&q).act_on_tuple(&t), p.act_on_tuple(&q.act_on_tuple(&t)));
        assert_eq!(p.act_on_tuple(&t), vec!['c', 'a', 'b']);
    }

    #[test]
    fn rejects_non_permutations() {
        assert!(Permutation::new(vec![0, 0]).is_err());
        assert!(Permutation::from_one_based(&[0, 1]).is_err());
        assert_eq!(Permutation::from_one_based(&[2, 1]).unwrap(), Permutation::transposition(2, 0, 1));
    }
}
