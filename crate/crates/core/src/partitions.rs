//! Integer partitions and the collapse order.
//!
//! A partition is stored as its weakly increasing list of parts. An
//! *elementary collapse* merges two parts into their sum; `λ' ≤ λ` means
//! `λ'` is reachable from `λ` by a (possibly empty) sequence of elementary
//! collapses. `col(λ, p)` collects the partitions of `|λ|` with exactly
//! `|λ| - p` parts that are *not* collapses of `λ`; these index the layers
//! of the stratification filtration of a symmetric complement.

use std::collections::{BTreeMap, BTreeSet, HashSet};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Default cap on the weight accepted by [`enumerate_partitions`].
pub const DEFAULT_MAX_WEIGHT: usize = 40;

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<i64>", into = "Vec<u32>")]
pub struct Partition {
    parts: Vec<u32>,
}

impl Partition {
    /// Sorts `raw` into canonical order. Parts must be at least 1.
    pub fn normalize<I: IntoIterator<Item = i64>>(raw: I) -> Result<Self> {
        let mut parts = Vec::new();
        for p in raw {
            if p < 1 {
                return Err(Error::InvalidPartition(format!("part {p} is not positive")));
            }
            let p = u32::try_from(p)
                .map_err(|_| Error::InvalidPartition(format!("part {p} too large")))?;
            parts.push(p);
        }
        parts.sort_unstable();
        Ok(Partition { parts })
    }

    pub fn empty() -> Self {
        Partition { parts: Vec::new() }
    }

    /// `1^n`, the partition with `n` ones.
    pub fn ones(n: usize) -> Self {
        Partition { parts: vec![1; n] }
    }

    /// The single-part partition `(k)`.
    pub fn single(k: u32) -> Self {
        assert!(k >= 1);
        Partition { parts: vec![k] }
    }

    fn from_sorted(parts: Vec<u32>) -> Self {
        debug_assert!(parts.windows(2).all(|w| w[0] <= w[1]) && parts.iter().all(|&p| p >= 1));
        Partition { parts }
    }

    pub fn parts(&self) -> &[u32] {
        &self.parts
    }

    pub fn weight(&self) -> usize {
        self.parts.iter().map(|&p| p as usize).sum()
    }

    pub fn cardinality(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    pub fn count_ones(&self) -> usize {
        self.parts.iter().take_while(|&&p| p == 1).count()
    }

    /// Number of parts of each size, keyed by increasing part size.
    pub fn multiplicities(&self) -> BTreeMap<u32, usize> {
        let mut m = BTreeMap::new();
        for &p in &self.parts {
            *m.entry(p).or_insert(0) += 1;
        }
        m
    }

    /// `1^j λ`: prepend `j` ones.
    pub fn add_ones(&self, j: usize) -> Partition {
        let mut parts = vec![1; j];
        parts.extend_from_slice(&self.parts);
        Partition::from_sorted(parts)
    }

    /// All partitions obtained by merging one unordered pair of parts.
    pub fn elementary_collapses(&self) -> BTreeSet<Partition> {
        let mut out = BTreeSet::new();
        let n = self.parts.len();
        for a in 0..n {
            for b in (a + 1)..n {
                // equal values at different positions give the same result
                if a > 0 && self.parts[a] == self.parts[a - 1] {
                    continue;
                }
                if b > a + 1 && self.parts[b] == self.parts[b - 1] {
                    continue;
                }
                let mut parts: Vec<u32> = self
                    .parts
                    .iter()
                    .enumerate()
                    .filter(|&(i, _)| i != a && i != b)
                    .map(|(_, &p)| p)
                    .collect();
                parts.push(self.parts[a] + self.parts[b]);
                parts.sort_unstable();
                out.insert(Partition::from_sorted(parts));
            }
        }
        out
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.parts.is_empty() {
            return f.write_str("∅");
        }
        let strs: Vec<String> = self.parts.iter().map(u32::to_string).collect();
        f.write_str(&strs.join("+"))
    }
}

impl FromStr for Partition {
    type Err = Error;

    /// Accepts `"1+1+2"`, `"1,1,2"` or `"1 1 2"`; `""` and `"∅"` give the
    /// empty partition.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.is_empty() || s == "∅" {
            return Ok(Partition::empty());
        }
        let parts = s
            .split(|c: char| c == '+' || c == ',' || c.is_whitespace())
            .filter(|t| !t.is_empty())
            .map(|t| {
                t.parse::<i64>()
                    .map_err(|_| Error::Parse(format!("bad part {t:?} in partition {s:?}")))
            })
            .collect::<Result<Vec<_>>>()?;
        Partition::normalize(parts)
    }
}

impl TryFrom<Vec<i64>> for Partition {
    type Error = Error;
    fn try_from(v: Vec<i64>) -> Result<Self> {
        Partition::normalize(v)
    }
}

impl From<Partition> for Vec<u32> {
    fn from(p: Partition) -> Vec<u32> {
        p.parts
    }
}

/// Whether `finer` can be grouped into blocks whose sums are the parts of
/// `coarser`, i.e. `coarser ≤ finer` in the collapse order.
///
/// Partitions of different weight are never comparable.
pub fn is_collapse(coarser: &Partition, finer: &Partition) -> bool {
    if coarser.weight() != finer.weight() || coarser.cardinality() > finer.cardinality() {
        return false;
    }
    if coarser == finer {
        return true;
    }
    // Distinct part values of `finer`, descending, with counts.
    let mult = finer.multiplicities();
    let values: Vec<u32> = mult.keys().rev().copied().collect();
    let counts: Vec<usize> = values.iter().map(|v| mult[v]).collect();
    let mut targets: Vec<u32> = coarser.parts.clone();
    targets.sort_unstable_by(|a, b| b.cmp(a));
    let mut failed = HashSet::new();
    let mut counts = counts;
    group_blocks(&values, &mut counts, &targets, 0, &mut failed)
}

fn group_blocks(
    values: &[u32],
    counts: &mut Vec<usize>,
    targets: &[u32],
    idx: usize,
    failed: &mut HashSet<(Vec<usize>, usize)>,
) -> bool {
    if idx == targets.len() {
        return counts.iter().all(|&c| c == 0);
    }
    if failed.contains(&(counts.clone(), idx)) {
        return false;
    }
    let ok = fill_block(values, counts, targets, idx, 0, targets[idx], false, failed);
    if !ok {
        failed.insert((counts.clone(), idx));
    }
    ok
}

/// Chooses how many copies of `values[vi..]` go into the current block.
#[allow(clippy::too_many_arguments)]
fn fill_block(
    values: &[u32],
    counts: &mut Vec<usize>,
    targets: &[u32],
    idx: usize,
    vi: usize,
    remaining: u32,
    used_any: bool,
    failed: &mut HashSet<(Vec<usize>, usize)>,
) -> bool {
    if remaining == 0 {
        return used_any && group_blocks(values, counts, targets, idx + 1, failed);
    }
    if vi == values.len() {
        return false;
    }
    let v = values[vi];
    let max_take = counts[vi].min((remaining / v) as usize);
    for take in (0..=max_take).rev() {
        counts[vi] -= take;
        let ok = fill_block(
            values,
            counts,
            targets,
            idx,
            vi + 1,
            remaining - v * take as u32,
            used_any || take > 0,
            failed,
        );
        counts[vi] += take;
        if ok {
            return true;
        }
    }
    false
}

/// All partitions of `k` in lexicographic order of their part sequences.
pub fn enumerate_partitions(k: usize) -> Result<Vec<Partition>> {
    enumerate_partitions_capped(k, DEFAULT_MAX_WEIGHT)
}

pub fn enumerate_partitions_capped(k: usize, cap: usize) -> Result<Vec<Partition>> {
    if k > cap {
        return Err(Error::CapExceeded { what: "partition weight", value: k, cap });
    }
    let mut out = Vec::new();
    let mut cur = Vec::new();
    gen_partitions(k, 1, None, &mut cur, &mut out);
    Ok(out)
}

/// Partitions of `k` with exactly `parts` parts, lexicographic order.
pub fn partitions_with_cardinality(k: usize, parts: usize) -> Result<Vec<Partition>> {
    if k > DEFAULT_MAX_WEIGHT {
        return Err(Error::CapExceeded { what: "partition weight", value: k, cap: DEFAULT_MAX_WEIGHT });
    }
    let mut out = Vec::new();
    let mut cur = Vec::new();
    gen_partitions(k, 1, Some(parts), &mut cur, &mut out);
    Ok(out)
}

fn gen_partitions(
    remaining: usize,
    min_part: usize,
    parts_left: Option<usize>,
    cur: &mut Vec<u32>,
    out: &mut Vec<Partition>,
) {
    if remaining == 0 {
        if parts_left.is_none_or(|n| n == 0) {
            out.push(Partition::from_sorted(cur.clone()));
        }
        return;
    }
    if parts_left == Some(0) {
        return;
    }
    for part in min_part..=remaining {
        let rest = remaining - part;
        if rest != 0 && rest < part {
            continue;
        }
        if let Some(n) = parts_left {
            // the remaining n-1 parts are each ≥ part
            if rest < (n - 1) * part || (n == 1 && rest != 0) {
                continue;
            }
        }
        cur.push(part as u32);
        gen_partitions(rest, part, parts_left.map(|n| n - 1), cur, out);
        cur.pop();
    }
}

/// `col_p(λ)`: partitions of `|λ|` with `|λ| - p` parts that are not
/// collapses of `λ`.
pub fn col(lambda: &Partition, p: usize) -> Result<BTreeSet<Partition>> {
    let k = lambda.weight();
    if p > k {
        return Ok(BTreeSet::new());
    }
    Ok(partitions_with_cardinality(k, k - p)?
        .into_iter()
        .filter(|mu| !is_collapse(mu, lambda))
        .collect())
}

/// How `λ' ↦ 1λ'` maps `col_p(1^j λ)` into `col_p(1^{j+1} λ)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct StabCollapseReport {
    pub lambda: Partition,
    pub j: usize,
    pub p: usize,
    pub source: Vec<Partition>,
    pub target: Vec<Partition>,
    /// Image of every source element; each must land in `target`.
    pub image: Vec<Partition>,
    pub well_defined: bool,
    pub injective: bool,
    pub surjective: bool,
    /// Target elements outside the image.
    pub missed: Vec<Partition>,
    /// Every missed element has no part equal to 1.
    pub missed_are_one_free: bool,
    /// `2p ≤ j + k`, the window in which the map is a bijection.
    pub within_window: bool,
}

impl StabCollapseReport {
    pub fn bijective(&self) -> bool {
        self.well_defined && self.injective && self.surjective
    }
}

pub fn stab_collapse_map(lambda: &Partition, j: usize, p: usize) -> Result<StabCollapseReport> {
    let k = lambda.weight();
    let source: Vec<Partition> = col(&lambda.add_ones(j), p)?.into_iter().collect();
    let target_set = col(&lambda.add_ones(j + 1), p)?;
    let image: Vec<Partition> = source.iter().map(|mu| mu.add_ones(1)).collect();
    let well_defined = image.iter().all(|mu| target_set.contains(mu));
    let image_set: BTreeSet<&Partition> = image.iter().collect();
    let injective = image_set.len() == image.len();
    let missed: Vec<Partition> = target_set
        .iter()
        .filter(|mu| !image_set.contains(mu))
        .cloned()
        .collect();
    Ok(StabCollapseReport {
        lambda: lambda.clone(),
        j,
        p,
        missed_are_one_free: missed.iter().all(|mu| mu.count_ones() == 0),
        surjective: missed.is_empty(),
        within_window: 2 * p <= j + k,
        target: target_set.into_iter().collect(),
        source,
        image,
        well_defined,
        injective,
        missed,
    })
}

/// For every partition of `k`, the set of lengths of elementary-collapse
/// chains from `1^k` to it, found by exhaustive search over the collapse
/// graph.
pub fn collapse_chain_lengths(k: usize) -> Result<BTreeMap<Partition, BTreeSet<usize>>> {
    if k > DEFAULT_MAX_WEIGHT {
        return Err(Error::CapExceeded { what: "partition weight", value: k, cap: DEFAULT_MAX_WEIGHT });
    }
    let mut lengths: BTreeMap<Partition, BTreeSet<usize>> = BTreeMap::new();
    let start = Partition::ones(k);
    lengths.insert(start.clone(), BTreeSet::from([0]));
    // Process in order of decreasing cardinality; no chain assumption is
    // made about lengths, only that the frontier is explored completely.
    let mut frontier: BTreeSet<Partition> = BTreeSet::from([start]);
    while !frontier.is_empty() {
        let mut next = BTreeSet::new();
        for mu in &frontier {
            let here = lengths[mu].clone();
            for nu in mu.elementary_collapses() {
                let entry = lengths.entry(nu.clone()).or_default();
                for &l in &here {
                    entry.insert(l + 1);
                }
                next.insert(nu);
            }
        }
        frontier = next;
    }
    Ok(lengths)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> Partition {
        s.parse().unwrap()
    }

    #[test]
    fn normalize_sorts_and_rejects_zero() {
        assert_eq!(Partition::normalize([3, 1]).unwrap().parts(), &[1, 3]);
        assert_eq!(Partition::normalize([1, 1, 2]).unwrap(), p("1+1+2"));
        assert!(matches!(Partition::normalize([0, 2]), Err(Error::InvalidPartition(_))));
        assert!(Partition::normalize([-1]).is_err());
    }

    #[test]
    fn add_ones_prepends() {
        assert_eq!(p("1+3").add_ones(2), p("1+1+1+3"));
        assert_eq!(p("1+3").add_ones(0), p("1+3"));
        assert_eq!(p("2").add_ones(1), p("1+2"));
        assert_eq!(Partition::empty().add_ones(3), Partition::ones(3));
    }

    #[test]
    fn elementary_collapses_examples() {
        let got: Vec<_> = p("1+1+2").elementary_collapses().into_iter().collect();
        assert_eq!(got, vec![p("1+3"), p("2+2")]);
        assert_eq!(p("1+3").elementary_collapses(), BTreeSet::from([p("4")]));
        assert!(p("4").elementary_collapses().is_empty());
    }

    #[test]
    fn is_collapse_examples() {
        assert!(is_collapse(&p("1+2+2+4"), &p("1+1+1+2+4")));
        assert!(is_collapse(&p("1+3"), &p("1+3")));
        assert!(!is_collapse(&p("1+1+1+1"), &p("1+3")));
        assert!(!is_collapse(&p("2+2"), &p("1+3")));
        assert!(!is_collapse(&p("1+2"), &p("1+1+1+1")));
    }

    #[test]
    fn col_matches_worked_example() {
        let l = p("1+3");
        assert_eq!(col(&l, 0).unwrap(), BTreeSet::from([p("1+1+1+1")]));
        assert_eq!(col(&l, 1).unwrap(), BTreeSet::from([p("1+1+2")]));
        assert_eq!(col(&l, 2).unwrap(), BTreeSet::from([p("2+2")]));
        assert!(!col(&l, 2).unwrap().contains(&l));
        for q in 3..8 {
            assert!(col(&l, q).unwrap().is_empty());
        }
    }

    #[test]
    fn enumeration_counts_and_order() {
        let four = enumerate_partitions(4).unwrap();
        let strs: Vec<String> = four.iter().map(|x| x.to_string()).collect();
        assert_eq!(strs, ["1+1+1+1", "1+1+2", "1+3", "2+2", "4"]);
        assert_eq!(enumerate_partitions(1).unwrap(), vec![p("1")]);
        assert_eq!(enumerate_partitions(0).unwrap(), vec![Partition::empty()]);
        assert!(matches!(enumerate_partitions(41), Err(Error::CapExceeded { .. })));
    }

    #[test]
    fn stab_map_examples() {
        let r = stab_collapse_map(&p("1+3"), 0, 1).unwrap();
        assert_eq!(r.source, vec![p("1+1+2")]);
        assert_eq!(r.image, vec![p("1+1+1+2")]);
        assert!(r.target.contains(&p("1+1+1+2")));
        assert!(r.bijective());

        let r = stab_collapse_map(&p("3"), 0, 2).unwrap();
        assert!(r.source.is_empty());
        assert_eq!(r.target, vec![p("2+2")]);
        assert!(!r.surjective && r.missed_are_one_free && !r.within_window);

        let r = stab_collapse_map(&p("2+2"), 1, 0).unwrap();
        assert_eq!(r.image, vec![Partition::ones(6)]);
        assert!(r.bijective());
    }

    #[test]
    fn display_roundtrip() {
        assert_eq!(p("2+1+1").to_string(), "1+1+2");
        assert_eq!(Partition::empty().to_string(), "∅");
        assert_eq!(p("∅"), Partition::empty());
        assert_eq!(serde_json::to_string(&p("1+1+2")).unwrap(), "[1,1,2]");
        let back: Partition = serde_json::from_str("[2,1,1]").unwrap();
        assert_eq!(back, p("1+1+2"));
        assert!(serde_json::from_str::<Partition>("[0]").is_err());
    }
}
