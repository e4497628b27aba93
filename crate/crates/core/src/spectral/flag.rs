use std::collections::{BTreeMap, BTreeSet, HashMap};

use serde::Serialize;

use super::semisimplicial::SemisimplicialComplex;
use crate::error::{Error, Result};
use crate::exactlin::{q, ChainComplex, ChainMap, Direction, QMatrix};

/// Largest number of simplices built across all levels.
pub const DEFAULT_SIMPLEX_CAP: usize = 200_000;

/// Largest vertex count for which the domination condition is enumerated.
const DOMINATION_VERTEX_CAP: usize = 16;

/// A finite symmetric relation on vertices `0..n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FlagData {
    vertices: usize,
    related: BTreeSet<(usize, usize)>,
}

impl FlagData {
    /// Relation given as ordered pairs; it must be symmetric and loop-free.
    pub fn new(vertices: usize, pairs: &[(usize, usize)]) -> Result<Self> {
        let related: BTreeSet<(usize, usize)> = pairs.iter().copied().collect();
        for &(a, b) in &related {
            if a >= vertices || b >= vertices {
                return Err(Error::InvalidFlag(format!("pair ({a},{b}) names a vertex outside 0..{vertices}")));
            }
            if a == b {
                return Err(Error::InvalidFlag(format!("vertex {a} is related to itself")));
            }
            if !related.contains(&(b, a)) {
                return Err(Error::InvalidFlag(format!("relation is not symmetric: ({a},{b}) without ({b},{a})")));
            }
        }
        Ok(FlagData { vertices, related })
    }

    /// Symmetric closure of unordered edges.
    pub fn from_edges(vertices: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let pairs: Vec<(usize, usize)> = edges.iter().flat_map(|&(a, b)| [(a, b), (b, a)]).collect();
        Self::new(vertices, &pairs)
    }

    pub fn complete(vertices: usize) -> Self {
        let pairs: Vec<_> = (0..vertices).flat_map(|a| (0..vertices).filter(move |&b| b != a).map(move |b| (a, b))).collect();
        Self::new(vertices, &pairs).expect("complete relation is symmetric")
    }

    pub fn star(leaves: usize) -> Self {
        let edges: Vec<_> = (1..=leaves).map(|l| (0, l)).collect();
        Self::from_edges(leaves + 1, &edges).expect("star is symmetric")
    }

    pub fn vertices(&self) -> usize {
        self.vertices
    }

    pub fn related(&self, a: usize, b: usize) -> bool {
        self.related.contains(&(a, b))
    }

    /// Vertices related to every other vertex.
    pub fn hubs(&self) -> Vec<usize> {
        (0..self.vertices).filter(|&v| (0..self.vertices).all(|w| w == v || self.related(v, w))).collect()
    }

    /// Restriction to the vertices other than `v`, renumbered in order.
    pub fn without(&self, v: usize) -> FlagData {
        let map = |x: usize| if x > v { x - 1 } else { x };
        let related = self.related.iter().filter(|(a, b)| *a != v && *b != v).map(|&(a, b)| (map(a), map(b))).collect();
        FlagData { vertices: self.vertices - 1, related }
    }

    /// Ordered tuples of `p + 1` distinct, pairwise related vertices for
    /// `p = 0..=top`.
    pub fn simplices(&self, top: usize, cap: usize) -> Result<Vec<Vec<Vec<usize>>>> {
        let mut levels: Vec<Vec<Vec<usize>>> = vec![(0..self.vertices).map(|v| vec![v]).collect()];
        let mut total = self.vertices;
        for _ in 0..top {
            let prev = levels.last().unwrap();
            let mut next = Vec::new();
            for t in prev {
                for v in 0..self.vertices {
                    if t.iter().all(|&w| self.related(w, v)) {
                        let mut u = t.clone();
                        u.push(v);
                        next.push(u);
                    }
                }
            }
            total += next.len();
            if total > cap {
                return Err(Error::CapExceeded { what: "flag simplices", value: total, cap });
            }
            levels.push(next);
        }
        Ok(levels)
    }

    /// Semisimplicial object of the flag set up to level `top`, each level a
    /// complex concentrated in degree 0, augmented to a point.
    pub fn semisimplicial(&self, top: usize, cap: usize) -> Result<(SemisimplicialComplex, Vec<Vec<Vec<usize>>>)> {
        let simplices = self.simplices(top, cap)?;
        let levels: Vec<ChainComplex> =
            simplices.iter().map(|s| ChainComplex::zero_differential(0, vec![s.len()], Direction::Chain)).collect();
        let mut faces = vec![Vec::new()];
        for p in 1..simplices.len() {
            let index: HashMap<&[usize], usize> =
                simplices[p - 1].iter().enumerate().map(|(i, t)| (t.as_slice(), i)).collect();
            let mut fs = Vec::new();
            for i in 0..=p {
                let trips = simplices[p].iter().enumerate().map(|(c, t)| {
                    let mut f = t.clone();
                    f.remove(i);
                    (index[f.as_slice()], c, q(1))
                });
                let m = QMatrix::from_triplets(simplices[p - 1].len(), simplices[p].len(), trips)?;
                fs.push(ChainMap::new(BTreeMap::from([(0, m)])));
            }
            faces.push(fs);
        }
        let base = ChainComplex::zero_differential(0, vec![1], Direction::Chain);
        let eps = QMatrix::from_triplets(1, simplices[0].len(), (0..simplices[0].len()).map(|c| (0, c, q(1))))?;
        let ss = SemisimplicialComplex::new(levels, faces, Some((base, ChainMap::new(BTreeMap::from([(0, eps)])))))?;
        Ok((ss, simplices))
    }
}

/// What a truncated flag-set computation established.
#[derive(Debug, Clone, Serialize)]
pub struct FlagReport {
    pub vertices: usize,
    pub truncation: usize,
    pub simplices_per_level: Vec<usize>,
    /// Betti numbers of the realization through degree `truncation − 1`.
    pub betti: Vec<usize>,
    /// Reduced Betti numbers through degree `truncation − 1`.
    pub reduced_betti: Vec<usize>,
    /// Largest `m` with reduced homology zero in all degrees `≤ m`, or −1.
    pub vanishes_through: i64,
    /// For collection sizes `m`: every `m` vertices have a common related
    /// vertex outside the collection. Empty when too many vertices.
    pub domination: Vec<(usize, bool)>,
    pub hubs: Vec<usize>,
    /// For the first hub `v`: the flag set on the other vertices maps to
    /// zero in reduced homology through degree `truncation − 1`.
    pub hub_inclusion_null: Option<bool>,
}

/// Builds the flag set of `data` through level `truncation` and reports its
/// homology through degree `truncation − 1`.
pub fn flag_set_check(data: &FlagData, truncation: usize, cap: usize) -> Result<FlagReport> {
    let (ss, simplices) = data.semisimplicial(truncation, cap)?;
    let unreduced = ss.totalize(false)?.complex;
    let reduced = ss.totalize(true)?.complex;
    let (hb, hr) = (unreduced.homology(), reduced.homology());
    let through = truncation as i64 - 1;
    let betti: Vec<usize> = (0..=through).map(|n| hb.get(&n).copied().unwrap_or(0)).collect();
    let reduced_betti: Vec<usize> = (0..=through).map(|n| hr.get(&n).copied().unwrap_or(0)).collect();
    let vanishes_through = reduced_betti.iter().take_while(|&&b| b == 0).count() as i64 - 1;
    let domination = if data.vertices() <= DOMINATION_VERTEX_CAP {
        (1..=truncation + 1).map(|m| (m, dominated(data, m))).collect()
    } else {
        Vec::new()
    };
    let hubs = data.hubs();
    let hub_inclusion_null = match hubs.first() {
        Some(&v) if data.vertices() > 1 => Some(hub_inclusion_is_null(data, v, truncation, cap, &reduced)?),
        _ => None,
    };
    Ok(FlagReport {
        vertices: data.vertices(),
        truncation,
        simplices_per_level: simplices.iter().map(Vec::len).collect(),
        betti,
        reduced_betti,
        vanishes_through,
        domination,
        hubs,
        hub_inclusion_null,
    })
}

fn dominated(data: &FlagData, m: usize) -> bool {
    let n = data.vertices();
    if m > n {
        return true;
    }
    let mut subset: Vec<usize> = (0..m).collect();
    loop {
        let ok = (0..n).any(|v| !subset.contains(&v) && subset.iter().all(|&w| data.related(w, v)));
        if !ok {
            return false;
        }
        // Next m-subset in lexicographic order.
        let mut i = m;
        loop {
            if i == 0 {
                return true;
            }
            i -= 1;
            if subset[i] < n - m + i {
                subset[i] += 1;
                for k in i + 1..m {
                    subset[k] = subset[k - 1] + 1;
                }
                break;
            }
        }
    }
}

fn hub_inclusion_is_null(data: &FlagData, v: usize, truncation: usize, cap: usize, full: &ChainComplex) -> Result<bool> {
    let rest = data.without(v);
    let (ss_rest, simp_rest) = rest.semisimplicial(truncation, cap)?;
    let sub = ss_rest.totalize(true)?.complex;
    let (_, simp_full) = data.semisimplicial(truncation, cap)?;
    let unmap = |x: usize| if x >= v { x + 1 } else { x };
    // Augmented totals: degree −1 is the point, degree p the p-simplices.
    let mut maps = BTreeMap::new();
    maps.insert(-1, QMatrix::identity(1));
    for (p, level) in simp_rest.iter().enumerate() {
        let index: HashMap<Vec<usize>, usize> = simp_full[p].iter().cloned().enumerate().map(|(i, t)| (t, i)).collect();
        let trips = level.iter().enumerate().map(|(c, t)| {
            let image: Vec<usize> = t.iter().map(|&x| unmap(x)).collect();
            (index[&image], c, q(1))
        });
        maps.insert(p as i64, QMatrix::from_triplets(simp_full[p].len(), level.len(), trips)?);
    }
    let f = ChainMap::new(maps);
    for n in -1..truncation as i64 {
        if f.on_homology(n, &sub, full)?.rank() != 0 {
            return Ok(false);
        }
    }
    Ok(true)
}
