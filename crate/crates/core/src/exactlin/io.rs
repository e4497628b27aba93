use std::collections::BTreeMap;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::complex::{ChainComplex, ChainMap, Direction};
use super::group::GroupAction;
use super::{QMatrix, Q};
use crate::error::{Error, Result};
use crate::perm::Permutation;

/// A rational entry written as `"p/q"`, `"p"`, or a bare JSON integer.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum RationalText {
    Int(i64),
    Text(String),
}

impl RationalText {
    pub fn parse(&self) -> Result<Q> {
        match self {
            RationalText::Int(n) => Ok(Q::from_integer((*n).into())),
            RationalText::Text(s) => {
                let t = s.trim();
                if t.contains('/') && t.ends_with("/0") {
                    return Err(Error::Parse(format!("zero denominator in {s:?}")));
                }
                Q::from_str(t).map_err(|e| Error::Parse(format!("bad rational {s:?}: {e}")))
            }
        }
    }

    pub fn from_q(q: &Q) -> Self {
        RationalText::Text(q.to_string())
    }
}

/// Sparse matrix entry `[row, col, value]`.
pub type Triplet = (usize, usize, RationalText);

pub fn matrix_from_triplets(rows: usize, cols: usize, entries: &[Triplet]) -> Result<QMatrix> {
    let parsed: Result<Vec<(usize, usize, Q)>> =
        entries.iter().map(|(r, c, v)| Ok((*r, *c, v.parse()?))).collect();
    QMatrix::from_triplets(rows, cols, parsed?)
}

pub fn matrix_to_triplets(m: &QMatrix) -> Vec<Triplet> {
    m.triplets().map(|(r, c, v)| (r, c, RationalText::from_q(v))).collect()
}

/// Serialized group action: permutation labels (1-based images) and, per
/// generator, triplet lists keyed by degree.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ActionJson {
    pub generators: Vec<Vec<usize>>,
    pub matrices: Vec<BTreeMap<String, Vec<Triplet>>>,
}

/// Serialized chain complex.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ComplexJson {
    #[serde(default)]
    pub lo: i64,
    #[serde(default)]
    pub direction: Direction,
    pub dims: Vec<usize>,
    #[serde(default, alias = "differentials")]
    pub boundaries: BTreeMap<String, Vec<Triplet>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub action: Option<ActionJson>,
}

fn parse_degree(key: &str) -> Result<i64> {
    key.trim().parse().map_err(|_| Error::Parse(format!("degree key {key:?} is not an integer")))
}

impl ComplexJson {
    pub fn to_complex(&self) -> Result<ChainComplex> {
        let dims = &self.dims;
        let lo = self.lo;
        let dim_at = |n: i64| {
            let i = n - lo;
            if i < 0 || i as usize >= dims.len() {
                0
            } else {
                dims[i as usize]
            }
        };
        let step = self.direction.step();
        let mut diffs = BTreeMap::new();
        for (key, entries) in &self.boundaries {
            let n = parse_degree(key)?;
            diffs.insert(n, matrix_from_triplets(dim_at(n + step), dim_at(n), entries)?);
        }
        ChainComplex::new(lo, dims.clone(), self.direction, diffs)
    }

    pub fn to_action(&self, c: &ChainComplex) -> Result<Option<GroupAction>> {
        let Some(a) = &self.action else { return Ok(None) };
        let gens: Result<Vec<Permutation>> = a.generators.iter().map(|g| Permutation::from_one_based(g)).collect();
        let mut mats = Vec::new();
        for fam in &a.matrices {
            let mut m = BTreeMap::new();
            for (key, entries) in fam {
                let n = parse_degree(key)?;
                m.insert(n, matrix_from_triplets(c.dim(n), c.dim(n), entries)?);
            }
            mats.push(m);
        }
        GroupAction::new(gens?, mats).map(Some)
    }

    pub fn from_complex(c: &ChainComplex) -> Self {
        let boundaries = c
            .degrees()
            .filter_map(|n| {
                let m = c.d(n);
                (!m.is_zero()).then(|| (n.to_string(), matrix_to_triplets(&m)))
            })
            .collect();
        ComplexJson { lo: c.lo(), direction: c.direction(), dims: c.dims().to_vec(), boundaries, action: None }
    }
}

pub fn complex_from_json(text: &str) -> Result<ChainComplex> {
    let parsed: ComplexJson = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
    parsed.to_complex()
}

pub fn complex_to_json(c: &ChainComplex) -> String {
    serde_json::to_string(&ComplexJson::from_complex(c)).expect("complex serializes")
}

/// Serialized chain map: triplet lists keyed by degree; missing degrees
/// are zero.
pub type MapJson = BTreeMap<String, Vec<Triplet>>;

pub fn chain_map_from_json(m: &MapJson, src: &ChainComplex, dst: &ChainComplex) -> Result<ChainMap> {
    let mut maps = BTreeMap::new();
    for (key, entries) in m {
        let n = parse_degree(key)?;
        maps.insert(n, matrix_from_triplets(dst.dim(n), src.dim(n), entries)?);
    }
    Ok(ChainMap::new(maps))
}

pub fn chain_map_to_json(f: &ChainMap, src: &ChainComplex, dst: &ChainComplex) -> MapJson {
    let degrees: std::collections::BTreeSet<i64> = src.degrees().chain(dst.degrees()).collect();
    degrees
        .into_iter()
        .map(|n| (n.to_string(), matrix_to_triplets(&f.at(n, src, dst))))
        .filter(|(_, t)| !t.is_empty())
        .collect()
}
