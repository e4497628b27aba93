use std::collections::BTreeMap;
use std::sync::{Arc, Mutex};

use serde::{Deserialize, Serialize};

use super::salvetti::Salvetti;
use crate::error::{Error, Result};
use crate::exactlin::{coinvariants, ChainComplex, Direction, DEFAULT_ORDER_CAP};
use crate::partitions::Partition;
use crate::perm::Permutation;
use crate::ranges::ManifoldClass;

/// Largest weight the built-in plane model accepts.
pub const DEFAULT_PLANE_CAP: usize = 5;

/// Where a Betti vector came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Provenance {
    Builtin,
    User,
    Unknown,
}

/// Compactly supported Betti numbers of one stratum, indexed by degree.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OracleEntry {
    pub partition: Partition,
    pub class: ManifoldClass,
    pub betti: Vec<usize>,
    pub provenance: Provenance,
    /// Degrees were converted with twisted coefficients.
    #[serde(default)]
    pub twisted: bool,
}

impl OracleEntry {
    pub fn get(&self, degree: i64) -> usize {
        if degree < 0 {
            0
        } else {
            self.betti.get(degree as usize).copied().unwrap_or(0)
        }
    }

    /// `Σ (−1)^i b_c^i`.
    pub fn euler_characteristic(&self) -> i64 {
        self.betti.iter().enumerate().map(|(i, &b)| crate::exactlin::sign(i as i64) * b as i64).sum()
    }
}

/// Homology of the configuration space of `λ'` in the plane: ordered
/// configurations of `|λ'|` points, modulo permutations of points carrying
/// equal parts. Returns `b_0 … b_{n−1}`.
pub fn plane_configuration_homology(lambda: &Partition) -> Result<Vec<usize>> {
    let n = lambda.cardinality();
    if n == 0 {
        return Ok(vec![1]);
    }
    let model = Salvetti::new(n)?;
    let complex = model.chain_complex()?;
    let parts = lambda.parts();
    let gens: Vec<Permutation> =
        (0..n - 1).filter(|&i| parts[i] == parts[i + 1]).map(|i| Permutation::transposition(n, i, i + 1)).collect();
    let reduced: ChainComplex = if gens.is_empty() {
        complex
    } else {
        coinvariants(&complex, &model.action(&gens)?, DEFAULT_ORDER_CAP)?.complex
    };
    let h = reduced.homology();
    Ok((0..n as i64).map(|d| h.get(&d).copied().unwrap_or(0)).collect())
}

/// `H_c^*` of `S_{λ'}(ℝ²)`: the stratum is an orientable manifold of
/// dimension `2|λ'|`, so `b_c^i = b_{2|λ'| − i}`.
pub fn plane_oracle(lambda: &Partition, cap: usize) -> Result<Vec<usize>> {
    if lambda.weight() > cap {
        return Err(Error::CapExceeded { what: "plane oracle weight", value: lambda.weight(), cap });
    }
    let h = plane_configuration_homology(lambda)?;
    let top = 2 * lambda.cardinality();
    Ok((0..=top).map(|i| h.get(top - i).copied().unwrap_or(0)).collect())
}

/// Betti data for strata, from user entries and optionally the built-in
/// plane model.
#[derive(Debug, Clone)]
pub struct BettiOracle {
    entries: BTreeMap<(Partition, ManifoldClass), OracleEntry>,
    plane_cap: Option<usize>,
    cache: Arc<Mutex<BTreeMap<Partition, Vec<usize>>>>,
}

impl BettiOracle {
    /// Oracle with no data.
    pub fn empty() -> Self {
        BettiOracle { entries: BTreeMap::new(), plane_cap: None, cache: Arc::default() }
    }

    /// Built-in plane model up to weight `cap`.
    pub fn builtin(cap: usize) -> Self {
        BettiOracle { plane_cap: Some(cap), ..Self::empty() }
    }

    pub fn with_entries(mut self, entries: Vec<OracleEntry>) -> Self {
        for e in entries {
            self.entries.insert((e.partition.clone(), e.class), e);
        }
        self
    }

    pub fn insert(&mut self, e: OracleEntry) {
        self.entries.insert((e.partition.clone(), e.class), e);
    }

    /// User entries take precedence over the built-in model. Returns `None`
    /// when nothing is known.
    pub fn lookup(&self, lambda: &Partition, mc: &ManifoldClass) -> Result<Option<OracleEntry>> {
        if let Some(e) = self.entries.get(&(lambda.clone(), *mc)) {
            return Ok(Some(e.clone()));
        }
        let Some(cap) = self.plane_cap else { return Ok(None) };
        if *mc != ManifoldClass::plane() || lambda.weight() > cap {
            return Ok(None);
        }
        let cached = self.cache.lock().expect("oracle cache").get(lambda).cloned();
        let betti = match cached {
            Some(b) => b,
            None => {
                let b = plane_oracle(lambda, cap)?;
                self.cache.lock().expect("oracle cache").insert(lambda.clone(), b.clone());
                b
            }
        };
        Ok(Some(OracleEntry {
            partition: lambda.clone(),
            class: *mc,
            betti,
            provenance: Provenance::Builtin,
            twisted: false,
        }))
    }

    pub fn entries(&self) -> impl Iterator<Item = &OracleEntry> {
        self.entries.values()
    }
}

/// Homology of the antipodal quotient of a hexagon, used as an independent
/// model of two unordered points in the plane (which deformation retract to
/// a circle modulo the antipodal map).
pub fn hexagon_quotient_homology() -> Result<Vec<usize>> {
    use crate::exactlin::{q, GroupAction, QMatrix};
    let d1 = QMatrix::from_triplets(6, 6, (0..6).flat_map(|e| [(e, e, q(-1)), ((e + 1) % 6, e, q(1))]))?;
    let c = ChainComplex::new(0, vec![6, 6], Direction::Chain, BTreeMap::from([(1, d1)]))?;
    let rot = |i: usize| (i + 3) % 6;
    let m = QMatrix::from_triplets(6, 6, (0..6).map(|i| (rot(i), i, q(1))))?;
    let g = GroupAction::new(vec![Permutation::transposition(2, 0, 1)], vec![BTreeMap::from([(0, m.clone()), (1, m)])])?;
    let h = coinvariants(&c, &g, DEFAULT_ORDER_CAP)?.complex.homology();
    Ok(vec![h[&0], h[&1]])
}
