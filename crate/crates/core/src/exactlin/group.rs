use std::collections::{BTreeMap, HashMap, VecDeque};

use super::complex::{ChainComplex, ChainMap};
use super::echelon::Echelon;
use super::{QMatrix, SparseVec, Q};
use crate::error::{Error, Result};
use crate::perm::Permutation;

/// Largest group order expanded element by element.
pub const DEFAULT_ORDER_CAP: usize = 3_628_800;

/// A permutation group acting degreewise on a complex. Each generator is a
/// permutation label plus one matrix per degree.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroupAction {
    generators: Vec<Permutation>,
    matrices: Vec<BTreeMap<i64, QMatrix>>,
}

/// One expanded group element.
#[derive(Debug, Clone)]
pub struct GroupElement {
    pub perm: Permutation,
    pub matrices: BTreeMap<i64, QMatrix>,
}

impl GroupAction {
    pub fn new(generators: Vec<Permutation>, matrices: Vec<BTreeMap<i64, QMatrix>>) -> Result<Self> {
        if generators.len() != matrices.len() {
            return Err(Error::InvalidAction("one matrix family per generator required".into()));
        }
        if let Some(first) = generators.first() {
            if generators.iter().any(|g| g.len() != first.len()) {
                return Err(Error::InvalidAction("generators permute sets of different sizes".into()));
            }
        }
        Ok(GroupAction { generators, matrices })
    }

    /// Trivial group acting by the identity.
    pub fn trivial() -> Self {
        GroupAction { generators: Vec::new(), matrices: Vec::new() }
    }

    pub fn generators(&self) -> &[Permutation] {
        &self.generators
    }

    pub fn generator_matrix(&self, g: usize, n: i64, c: &ChainComplex) -> QMatrix {
        self.matrices[g].get(&n).cloned().unwrap_or_else(|| QMatrix::identity(c.dim(n)))
    }

    /// Checks entries, invertibility and compatibility with the differential.
    pub fn validate_generators(&self, c: &ChainComplex) -> Result<()> {
        for (gi, fam) in self.matrices.iter().enumerate() {
            for (n, m) in fam {
                if m.shape() != (c.dim(*n), c.dim(*n)) {
                    return Err(Error::Shape(format!("generator {gi} in degree {n} has wrong shape")));
                }
                if !m.is_signed_01() {
                    return Err(Error::InvalidAction(format!("generator {gi} in degree {n} has entries outside 0, ±1")));
                }
                if m.rank() != m.rows() {
                    return Err(Error::InvalidAction(format!("generator {gi} in degree {n} is not invertible")));
                }
            }
            let step = c.direction().step();
            for n in c.degrees() {
                let left = self.generator_matrix(gi, n + step, c).mul(&c.d(n));
                let right = c.d(n).mul(&self.generator_matrix(gi, n, c));
                if left != right {
                    return Err(Error::InvalidAction(format!(
                        "generator {gi} does not commute with the differential in degree {n}"
                    )));
                }
            }
        }
        Ok(())
    }

    /// Order of the permutation group generated by the labels, or `None`
    /// once it exceeds `cap`.
    pub fn label_order(&self, cap: usize) -> Option<usize> {
        let n = self.generators.first().map_or(0, Permutation::len);
        let mut seen: std::collections::HashSet<Permutation> = std::collections::HashSet::new();
        let mut queue = VecDeque::from([Permutation::identity(n)]);
        seen.insert(Permutation::identity(n));
        while let Some(g) = queue.pop_front() {
            for s in &self.generators {
                let h = s.compose(&g);
                if seen.insert(h.clone()) {
                    if seen.len() > cap {
                        return None;
                    }
                    queue.push_back(h);
                }
            }
        }
        Some(seen.len())
    }

    /// All group elements with their matrices. Verifies that the matrices
    /// respect every relation among the labels: whenever two words give the
    /// same permutation they must give the same matrices.
    pub fn expand(&self, c: &ChainComplex, cap: usize) -> Result<Vec<GroupElement>> {
        let n = self.generators.first().map_or(0, Permutation::len);
        let id = GroupElement {
            perm: Permutation::identity(n),
            matrices: c.degrees().map(|d| (d, QMatrix::identity(c.dim(d)))).collect(),
        };
        let mut index: HashMap<Permutation, usize> = HashMap::new();
        index.insert(id.perm.clone(), 0);
        let mut elements = vec![id];
        let mut cursor = 0;
        while cursor < elements.len() {
            for (si, s) in self.generators.iter().enumerate() {
                let g = &elements[cursor];
                let perm = s.compose(&g.perm);
                let matrices: BTreeMap<i64, QMatrix> =
                    g.matrices.iter().map(|(d, m)| (*d, self.generator_matrix(si, *d, c).mul(m))).collect();
                match index.get(&perm) {
                    Some(&k) => {
                        if elements[k].matrices != matrices {
                            return Err(Error::InvalidAction(format!(
                                "matrices violate a relation of the group at element {:?}",
                                perm.images()
                            )));
                        }
                    }
                    None => {
                        if elements.len() >= cap {
                            return Err(Error::CapExceeded { what: "group order", value: elements.len() + 1, cap });
                        }
                        index.insert(perm.clone(), elements.len());
                        elements.push(GroupElement { perm, matrices });
                    }
                }
            }
            cursor += 1;
        }
        Ok(elements)
    }
}

/// How coinvariants were computed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CoinvariantMethod {
    /// Averaging idempotent over an explicitly expanded group of this order.
    Averaging { order: usize },
    /// Quotient by the span of `s·x − x` over generators `s`.
    GeneratorDifferences,
}

/// Coinvariant complex with the quotient map onto it and a section.
#[derive(Debug, Clone)]
pub struct Coinvariants {
    pub complex: ChainComplex,
    pub quotient: ChainMap,
    pub section: ChainMap,
    pub method: CoinvariantMethod,
}

/// Quotient map and section from a spanning set of relations, taking the
/// non-pivot coordinates of the normal form as quotient coordinates.
fn quotient_by_relations(dim: usize, relations: &[SparseVec]) -> (QMatrix, QMatrix) {
    let mut ech = Echelon::default();
    for r in relations {
        ech.insert(r);
    }
    let free: Vec<usize> = (0..dim).filter(|c| !ech.is_pivot(*c)).collect();
    let mut pos = vec![usize::MAX; dim];
    for (i, &c) in free.iter().enumerate() {
        pos[c] = i;
    }
    let cols: Vec<SparseVec> = (0..dim)
        .map(|x| {
            let nf = ech.normal_form(&SparseVec::unit(x));
            SparseVec::from_pairs(nf.into_pairs().into_iter().map(|(c, v)| (pos[c], v)))
        })
        .collect();
    let q = QMatrix::from_columns(free.len(), &cols);
    let s = QMatrix::from_columns(dim, &free.iter().map(|&c| SparseVec::unit(c)).collect::<Vec<_>>());
    (q, s)
}

/// Quotient map and section from an idempotent `p`: the fully reduced rows
/// of `p` form the quotient map and unit vectors on their pivots a section.
fn quotient_by_idempotent(dim: usize, p: &QMatrix) -> (QMatrix, QMatrix) {
    let mut ech = Echelon::default();
    for r in p.row_vecs() {
        ech.insert(r);
    }
    let rows = ech.rref_rows();
    let q = QMatrix::from_rows(dim, rows.iter().map(|(_, r)| r.clone()).collect());
    let s = QMatrix::from_columns(dim, &rows.iter().map(|(c, _)| SparseVec::unit(*c)).collect::<Vec<_>>());
    (q, s)
}

/// Coinvariants `C_G` of an equivariant complex, with the induced
/// differential `Q_{n±1} ∘ d_n ∘ S_n`.
pub fn coinvariants(c: &ChainComplex, g: &GroupAction, order_cap: usize) -> Result<Coinvariants> {
    g.validate_generators(c)?;
    let order = g.label_order(order_cap);
    let mut quotient = BTreeMap::new();
    let mut section = BTreeMap::new();
    let method = match order {
        Some(_) => {
            let elements = g.expand(c, order_cap)?;
            let inv = Q::new(1.into(), elements.len().into());
            for n in c.degrees() {
                let dim = c.dim(n);
                let mut sum = QMatrix::zeros(dim, dim);
                for e in &elements {
                    sum = sum.add(&e.matrices[&n]);
                }
                sum.scale(&inv);
                let (qm, sm) = quotient_by_idempotent(dim, &sum);
                quotient.insert(n, qm);
                section.insert(n, sm);
            }
            CoinvariantMethod::Averaging { order: elements.len() }
        }
        None => {
            for n in c.degrees() {
                let dim = c.dim(n);
                let mut rels = Vec::new();
                for gi in 0..g.generators().len() {
                    let diff = g.generator_matrix(gi, n, c).sub(&QMatrix::identity(dim));
                    rels.extend(diff.columns().into_iter().filter(|v| !v.is_zero()));
                }
                let (qm, sm) = quotient_by_relations(dim, &rels);
                quotient.insert(n, qm);
                section.insert(n, sm);
            }
            CoinvariantMethod::GeneratorDifferences
        }
    };
    let dims: Vec<usize> = c.degrees().map(|n| quotient[&n].rows()).collect();
    let step = c.direction().step();
    let diffs = c
        .degrees()
        .filter(|n| c.in_range(n + step))
        .map(|n| (n, quotient[&(n + step)].mul(&c.d(n)).mul(&section[&n])))
        .collect();
    let complex = ChainComplex::new(c.lo(), dims, c.direction(), diffs)?;
    Ok(Coinvariants { complex, quotient: ChainMap::new(quotient), section: ChainMap::new(section), method })
}

impl Coinvariants {
    /// The action induced on the coinvariant complex; trivial by construction.
    pub fn residual_action(&self, g: &GroupAction, c: &ChainComplex) -> Result<GroupAction> {
        let mats = (0..g.generators().len())
            .map(|gi| {
                c.degrees()
                    .map(|n| {
                        let qn = self.quotient.at(n, c, &self.complex);
                        let sn = self.section.at(n, &self.complex, c);
                        (n, qn.mul(&g.generator_matrix(gi, n, c)).mul(&sn))
                    })
                    .collect()
            })
            .collect();
        GroupAction::new(g.generators().to_vec(), mats)
    }
}

/// Homology of `c` as a complex with zero differential, with the action
/// induced on it.
pub fn homology_action(c: &ChainComplex, g: &GroupAction) -> Result<(ChainComplex, GroupAction)> {
    g.validate_generators(c)?;
    let spaces: BTreeMap<i64, _> = c.degrees().map(|n| (n, c.homology_space(n))).collect();
    let dims = c.degrees().map(|n| spaces[&n].dim()).collect();
    let h = ChainComplex::zero_differential(c.lo(), dims, c.direction());
    let mut mats = Vec::new();
    for gi in 0..g.generators().len() {
        let mut fam = BTreeMap::new();
        for n in c.degrees() {
            let m = spaces[&n]
                .induced(&g.generator_matrix(gi, n, c), &spaces[&n])
                .ok_or_else(|| Error::InvalidAction("action does not preserve cycles".into()))?;
            fam.insert(n, m);
        }
        mats.push(fam);
    }
    // Induced matrices need not have entries in {0, ±1}; build directly.
    Ok((h, GroupAction { generators: g.generators().to_vec(), matrices: mats }))
}

/// Dimensions of coinvariants of a finite group action given by arbitrary
/// invertible matrices on a complex with zero differential, via the rank of
/// the averaging idempotent.
pub fn averaged_dims(c: &ChainComplex, g: &GroupAction, order_cap: usize) -> Result<BTreeMap<i64, usize>> {
    let elements = g.expand(c, order_cap)?;
    let inv = Q::new(1.into(), elements.len().into());
    Ok(c.degrees()
        .map(|n| {
            let dim = c.dim(n);
            let mut sum = QMatrix::zeros(dim, dim);
            for e in &elements {
                sum = sum.add(&e.matrices[&n]);
            }
            sum.scale(&inv);
            (n, if sum.is_zero() { 0 } else { sum.rank() })
        })
        .collect())
}
