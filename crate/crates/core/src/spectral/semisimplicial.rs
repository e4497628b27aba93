use std::collections::BTreeMap;

use super::filtered::FilteredComplex;
use super::pages::{compute_pages, SpectralPages};
use crate::error::{Error, Result};
use crate::exactlin::io::{chain_map_from_json, chain_map_to_json, ComplexJson, MapJson};
use crate::exactlin::{chain_map_check, sign, ChainComplex, ChainMap, Direction, QMatrix};

/// Levels `A_0 … A_N` of chain complexes with face maps
/// `d_i : A_p → A_{p−1}` (`0 ≤ i ≤ p`) and an optional augmentation
/// `A_0 → A_{−1}`.
#[derive(Debug, Clone)]
pub struct SemisimplicialComplex {
    levels: Vec<ChainComplex>,
    faces: Vec<Vec<ChainMap>>,
    augmentation: Option<(ChainComplex, ChainMap)>,
}

/// Total complex with the simplicial level of each basis element.
#[derive(Debug, Clone)]
pub struct Totalization {
    pub complex: ChainComplex,
    pub levels: Vec<i64>,
}

impl Totalization {
    /// Filtration by simplicial level.
    pub fn filtered(&self) -> Result<FilteredComplex> {
        FilteredComplex::from_levels(self.complex.clone(), &self.levels)
    }
}

impl SemisimplicialComplex {
    /// `faces[p]` lists `d_0 … d_p` out of level `p`; `faces[0]` is empty.
    pub fn new(
        levels: Vec<ChainComplex>,
        faces: Vec<Vec<ChainMap>>,
        augmentation: Option<(ChainComplex, ChainMap)>,
    ) -> Result<Self> {
        if levels.is_empty() {
            return Err(Error::InvalidSemisimplicial("no levels".into()));
        }
        if faces.len() != levels.len() {
            return Err(Error::InvalidSemisimplicial("one face list per level required".into()));
        }
        if levels.iter().any(|c| c.direction() != Direction::Chain) {
            return Err(Error::InvalidSemisimplicial("levels must be chain complexes".into()));
        }
        for (p, fs) in faces.iter().enumerate() {
            let expected = if p == 0 { 0 } else { p + 1 };
            if fs.len() != expected {
                return Err(Error::InvalidSemisimplicial(format!("level {p} needs {expected} face maps")));
            }
            for (i, f) in fs.iter().enumerate() {
                if !chain_map_check(f, &levels[p], &levels[p - 1])? {
                    return Err(Error::InvalidSemisimplicial(format!("face d_{i} on level {p} is not a chain map")));
                }
            }
        }
        for p in 2..levels.len() {
            for j in 1..=p {
                for i in 0..j {
                    let lhs = faces[p][j].compose(&faces[p - 1][i], &levels[p], &levels[p - 1], &levels[p - 2]);
                    let rhs = faces[p][i].compose(&faces[p - 1][j - 1], &levels[p], &levels[p - 1], &levels[p - 2]);
                    if !same_map(&lhs, &rhs, &levels[p], &levels[p - 2]) {
                        return Err(Error::InvalidSemisimplicial(format!(
                            "face identity d_{i} d_{j} = d_{} d_{i} fails on level {p}",
                            j - 1
                        )));
                    }
                }
            }
        }
        if let Some((base, eps)) = &augmentation {
            if base.direction() != Direction::Chain || !chain_map_check(eps, &levels[0], base)? {
                return Err(Error::InvalidSemisimplicial("augmentation is not a chain map".into()));
            }
            if levels.len() > 1 {
                let a = faces[1][0].compose(eps, &levels[1], &levels[0], base);
                let b = faces[1][1].compose(eps, &levels[1], &levels[0], base);
                if !same_map(&a, &b, &levels[1], base) {
                    return Err(Error::InvalidSemisimplicial("augmentation does not equalize d_0 and d_1".into()));
                }
            }
        }
        Ok(SemisimplicialComplex { levels, faces, augmentation })
    }

    /// Constant object: the same complex at every level with identity faces.
    pub fn constant(c: &ChainComplex, top: usize) -> Result<Self> {
        let levels = vec![c.clone(); top + 1];
        let faces = (0..=top).map(|p| if p == 0 { Vec::new() } else { vec![ChainMap::identity(c); p + 1] }).collect();
        Self::new(levels, faces, None)
    }

    pub fn top(&self) -> usize {
        self.levels.len() - 1
    }

    pub fn level(&self, p: usize) -> &ChainComplex {
        &self.levels[p]
    }

    pub fn face(&self, p: usize, i: usize) -> &ChainMap {
        &self.faces[p][i]
    }

    pub fn augmentation(&self) -> Option<&(ChainComplex, ChainMap)> {
        self.augmentation.as_ref()
    }

    /// Levels in order, with the augmentation base at `p = −1` if requested.
    fn slots(&self, augmented: bool) -> Vec<(i64, &ChainComplex)> {
        let mut out = Vec::new();
        if augmented {
            if let Some((base, _)) = &self.augmentation {
                out.push((-1, base));
            }
        }
        out.extend(self.levels.iter().enumerate().map(|(p, c)| (p as i64, c)));
        out
    }

    /// Faces out of level `p` (augmentation counts as `d_0` on level 0).
    fn faces_from(&self, p: i64, augmented: bool) -> Vec<&ChainMap> {
        match p {
            -1 => Vec::new(),
            0 if augmented => self.augmentation.iter().map(|(_, e)| e).collect(),
            0 => Vec::new(),
            _ => self.faces[p as usize].iter().collect(),
        }
    }

    /// Total complex: on `A_{p,q}` the differential is
    /// `Σ (−1)^i d_i + (−1)^p ∂`.
    pub fn totalize(&self, augmented: bool) -> Result<Totalization> {
        if augmented && self.augmentation.is_none() {
            return Err(Error::InvalidSemisimplicial("no augmentation to totalize with".into()));
        }
        let slots = self.slots(augmented);
        let nonempty = slots.iter().filter(|(_, c)| c.total_dim() > 0);
        let lo = nonempty.clone().map(|(p, c)| p + c.lo()).min().unwrap_or(0);
        let hi = nonempty.map(|(p, c)| p + c.hi()).max().unwrap_or(0);
        // offset of block (p, q) inside total degree p + q.
        let mut block: BTreeMap<(i64, i64), usize> = BTreeMap::new();
        let mut dims = Vec::new();
        let mut levels = Vec::new();
        for n in lo..=hi {
            let mut acc = 0;
            for (p, c) in &slots {
                let q = n - p;
                block.insert((*p, q), acc);
                acc += c.dim(q);
                levels.extend(std::iter::repeat_n(*p, c.dim(q)));
            }
            dims.push(acc);
        }
        let by_p: BTreeMap<i64, &ChainComplex> = slots.iter().copied().collect();
        let mut diffs = BTreeMap::new();
        for n in lo..=hi {
            let mut trips = Vec::new();
            for (p, c) in &slots {
                let q = n - p;
                if c.dim(q) == 0 {
                    continue;
                }
                let src_off = block[&(*p, q)];
                // Internal differential.
                if c.dim(q - 1) > 0 {
                    let tgt_off = block[&(*p, q - 1)];
                    let s = crate::exactlin::q(sign(*p));
                    for (r, col, v) in c.d(q).triplets() {
                        trips.push((tgt_off + r, src_off + col, &s * v));
                    }
                }
                // Alternating face sum.
                if let Some(below) = by_p.get(&(p - 1)).filter(|b| b.dim(q) > 0) {
                    let tgt_off = block[&(p - 1, q)];
                    for (i, f) in self.faces_from(*p, augmented).into_iter().enumerate() {
                        let s = crate::exactlin::q(sign(i as i64));
                        for (r, col, v) in f.at(q, c, below).triplets() {
                            trips.push((tgt_off + r, src_off + col, &s * v));
                        }
                    }
                }
            }
            if n > lo {
                let rows = dims[(n - 1 - lo) as usize];
                let cols = dims[(n - lo) as usize];
                diffs.insert(n, QMatrix::from_triplets(rows, cols, trips)?);
            }
        }
        let complex = ChainComplex::new(lo, dims, Direction::Chain, diffs)
            .map_err(|e| Error::InvalidSemisimplicial(format!("total differential: {e}")))?;
        Ok(Totalization { complex, levels })
    }

    /// Spectral sequence of the filtration by simplicial level, with
    /// `E^1_{p,q} = H_q(A_p)`.
    pub fn realization_ss(&self, augmented: bool) -> Result<SpectralPages> {
        compute_pages(&self.totalize(augmented)?.filtered()?)
    }
}

fn same_map(a: &ChainMap, b: &ChainMap, src: &ChainComplex, dst: &ChainComplex) -> bool {
    let lo = src.lo().min(dst.lo());
    let hi = src.hi().max(dst.hi());
    (lo..=hi).all(|n| a.at(n, src, dst) == b.at(n, src, dst))
}

/// Serialized semisimplicial object: `faces[p][i]` is `d_i` out of level
/// `p` (`faces[0]` empty or omitted).
#[derive(Debug, Clone, serde::Serialize, serde::Deserialize)]
pub struct SemisimplicialJson {
    pub levels: Vec<ComplexJson>,
    #[serde(default)]
    pub faces: Vec<Vec<MapJson>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub augmentation: Option<AugmentationJson>,
}

#[derive(Debug, Clone, serde::Serialize, serde::Deserialize)]
pub struct AugmentationJson {
    pub complex: ComplexJson,
    pub map: MapJson,
}

impl SemisimplicialJson {
    pub fn to_semisimplicial(&self) -> Result<SemisimplicialComplex> {
        let levels: Vec<ChainComplex> = self.levels.iter().map(ComplexJson::to_complex).collect::<Result<_>>()?;
        let mut faces = vec![Vec::new()];
        for p in 1..levels.len() {
            let given = self.faces.get(p).ok_or_else(|| Error::InvalidSemisimplicial(format!("faces of level {p} missing")))?;
            faces.push(
                given
                    .iter()
                    .map(|m| chain_map_from_json(m, &levels[p], &levels[p - 1]))
                    .collect::<Result<Vec<_>>>()?,
            );
        }
        let augmentation = match &self.augmentation {
            None => None,
            Some(a) => {
                let c = a.complex.to_complex()?;
                let f = chain_map_from_json(&a.map, &levels[0], &c)?;
                Some((c, f))
            }
        };
        SemisimplicialComplex::new(levels, faces, augmentation)
    }

    pub fn from_semisimplicial(s: &SemisimplicialComplex) -> Self {
        let levels: Vec<ComplexJson> = s.levels.iter().map(ComplexJson::from_complex).collect();
        let faces = (0..s.levels.len())
            .map(|p| {
                s.faces[p].iter().map(|f| chain_map_to_json(f, &s.levels[p], &s.levels[p - 1])).collect()
            })
            .collect();
        let augmentation = s.augmentation.as_ref().map(|(c, f)| AugmentationJson {
            complex: ComplexJson::from_complex(c),
            map: chain_map_to_json(f, &s.levels[0], c),
        });
        SemisimplicialJson { levels, faces, augmentation }
    }
}
