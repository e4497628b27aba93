//! Signs of the orientation local systems on a stratum along a loop.
//!
//! A loop is recorded by what the formulas consume: for each multiplicity
//! `m` the permutation it induces on the `n_m` particles of multiplicity
//! `m`, and for each particle the sign of the orientation character of `M`
//! along its path. Particles are ordered canonically: by multiplicity, then
//! by position within the multiplicity block.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::partitions::Partition;
use crate::perm::Permutation;

/// A sign `±1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(into = "i8", try_from = "i8")]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn from_parity(odd: bool) -> Sign {
        if odd {
            Sign::Minus
        } else {
            Sign::Plus
        }
    }

    pub fn value(self) -> i8 {
        match self {
            Sign::Plus => 1,
            Sign::Minus => -1,
        }
    }

    pub fn pow(self, e: u64) -> Sign {
        if self == Sign::Minus && e % 2 == 1 {
            Sign::Minus
        } else {
            Sign::Plus
        }
    }
}

impl std::ops::Mul for Sign {
    type Output = Sign;
    fn mul(self, rhs: Sign) -> Sign {
        Sign::from_parity((self == Sign::Minus) != (rhs == Sign::Minus))
    }
}

impl From<Sign> for i8 {
    fn from(s: Sign) -> i8 {
        s.value()
    }
}

impl TryFrom<i8> for Sign {
    type Error = String;
    fn try_from(v: i8) -> std::result::Result<Sign, String> {
        match v {
            1 => Ok(Sign::Plus),
            -1 => Ok(Sign::Minus),
            _ => Err(format!("sign must be 1 or -1, got {v}")),
        }
    }
}

fn perm_sign(p: &Permutation) -> Sign {
    Sign::from_parity(p.sign() < 0)
}

/// The data of a loop in `S_λ(M)` seen by the orientation systems.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LoopDatum {
    lambda: Partition,
    perms: BTreeMap<u32, Permutation>,
    u: Vec<Sign>,
    d: u32,
}

impl LoopDatum {
    /// Missing multiplicities get the identity permutation.
    pub fn new(lambda: Partition, perms: BTreeMap<u32, Permutation>, u: Vec<Sign>, d: u32) -> Result<Self> {
        let counts = lambda.multiplicities();
        if u.len() != lambda.cardinality() {
            return Err(Error::InvalidLoop(format!("{} signs for {} particles", u.len(), lambda.cardinality())));
        }
        if let Some(m) = perms.keys().find(|m| !counts.contains_key(m)) {
            return Err(Error::InvalidLoop(format!("no parts equal to {m}")));
        }
        let mut full = BTreeMap::new();
        for (&m, &n) in &counts {
            let p = perms.get(&m).cloned().unwrap_or_else(|| Permutation::identity(n));
            if p.len() != n {
                return Err(Error::InvalidLoop(format!("permutation for multiplicity {m} has {} letters, expected {n}", p.len())));
            }
            full.insert(m, p);
        }
        Ok(LoopDatum { lambda, perms: full, u, d })
    }

    /// The constant loop.
    pub fn identity(lambda: Partition, d: u32) -> Self {
        let u = vec![Sign::Plus; lambda.cardinality()];
        LoopDatum::new(lambda, BTreeMap::new(), u, d).expect("identity datum")
    }

    pub fn lambda(&self) -> &Partition {
        &self.lambda
    }

    pub fn perm(&self, m: u32) -> &Permutation {
        &self.perms[&m]
    }

    pub fn signs(&self) -> &[Sign] {
        &self.u
    }

    pub fn dim(&self) -> u32 {
        self.d
    }

    /// Multiplicity of each particle in canonical order.
    pub fn particle_multiplicities(&self) -> Vec<u32> {
        self.lambda.parts().to_vec()
    }

    /// Concatenation: `self` then `other`. Permutations compose, signs
    /// multiply.
    pub fn then(&self, other: &LoopDatum) -> Result<LoopDatum> {
        if self.lambda != other.lambda || self.d != other.d {
            return Err(Error::InvalidLoop("loops live on different strata".into()));
        }
        let perms = self.perms.iter().map(|(m, p)| (*m, other.perms[m].compose(p))).collect();
        let u = self.u.iter().zip(&other.u).map(|(a, b)| *a * *b).collect();
        LoopDatum::new(self.lambda.clone(), perms, u, self.d)
    }

    /// Relabels particles of each multiplicity by `relabel[m]`: permutations
    /// are conjugated and signs move with their particles.
    pub fn relabel(&self, relabel: &BTreeMap<u32, Permutation>) -> Result<LoopDatum> {
        let mut perms = BTreeMap::new();
        let mut u = self.u.clone();
        let mut start = 0;
        for (&m, p) in &self.perms {
            let n = p.len();
            let r = relabel.get(&m).cloned().unwrap_or_else(|| Permutation::identity(n));
            if r.len() != n {
                return Err(Error::InvalidLoop(format!("relabelling for multiplicity {m} has wrong size")));
            }
            perms.insert(m, r.compose(p).compose(&r.inverse()));
            let moved = r.act_on_tuple(&self.u[start..start + n]);
            u[start..start + n].copy_from_slice(&moved);
            start += n;
        }
        LoopDatum::new(self.lambda.clone(), perms, u, self.d)
    }
}

/// `s₁ = ∏_m ε(π_m)^m`.
pub fn s1(ld: &LoopDatum) -> Sign {
    ld.perms.iter().fold(Sign::Plus, |acc, (&m, p)| acc * perm_sign(p).pow(m as u64))
}

/// `s₂ = ∏_m ε(π_m)`.
pub fn s2(ld: &LoopDatum) -> Sign {
    ld.perms.values().fold(Sign::Plus, |acc, p| acc * perm_sign(p))
}

/// `(o₁, o₂)`: the orientation character of `M` on the loop class that
/// remembers multiplicities, and on the one that does not.
pub fn orientation_chars(ld: &LoopDatum) -> (Sign, Sign) {
    let mults = ld.particle_multiplicities();
    let o1 = ld.u.iter().zip(&mults).fold(Sign::Plus, |acc, (s, &m)| acc * s.pow(m as u64));
    let o2 = ld.u.iter().fold(Sign::Plus, |acc, s| acc * *s);
    (o1, o2)
}

/// Values of the orientation system of the stratum, of the system that
/// forgets multiplicities, and of their tensor product.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct MonodromyPair {
    pub weighted: Sign,
    pub unweighted: Sign,
    pub tensor: Sign,
}

/// `o₁ s₁^d`, `o₂ s₂^d` and their product.
pub fn monodromy_pair(ld: &LoopDatum) -> MonodromyPair {
    let (o1, o2) = orientation_chars(ld);
    let weighted = o1 * s1(ld).pow(ld.d as u64);
    let unweighted = o2 * s2(ld).pow(ld.d as u64);
    MonodromyPair { weighted, unweighted, tensor: weighted * unweighted }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Agreement {
    Agree,
    Disagree,
    /// Some particle of even multiplicity moves or has a nontrivial sign.
    NotApplicable,
}

/// Whether only odd-multiplicity particles move (identity permutation and
/// trivial sign on every even-multiplicity particle), and if so whether the
/// two systems agree.
pub fn odd_move_agreement(ld: &LoopDatum) -> Agreement {
    let mults = ld.particle_multiplicities();
    let even_still = ld.perms.iter().all(|(&m, p)| m % 2 == 1 || p.is_identity())
        && ld.u.iter().zip(&mults).all(|(s, &m)| m % 2 == 1 || *s == Sign::Plus);
    if !even_still {
        return Agreement::NotApplicable;
    }
    let pair = monodromy_pair(ld);
    if pair.weighted == pair.unweighted {
        Agreement::Agree
    } else {
        Agreement::Disagree
    }
}

/// All four signs for one datum.
#[derive(Debug, Clone, Serialize)]
pub struct MonodromyReport {
    pub s1: Sign,
    pub s2: Sign,
    pub o1: Sign,
    pub o2: Sign,
    pub pair: MonodromyPair,
    pub agreement: Agreement,
}

pub fn monodromy_report(ld: &LoopDatum) -> MonodromyReport {
    let (o1, o2) = orientation_chars(ld);
    MonodromyReport { s1: s1(ld), s2: s2(ld), o1, o2, pair: monodromy_pair(ld), agreement: odd_move_agreement(ld) }
}

/// JSON form, with 1-based permutations keyed by multiplicity.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct LoopJson {
    pub lambda: Vec<i64>,
    #[serde(default)]
    pub perms: BTreeMap<String, Vec<usize>>,
    pub u: Vec<i8>,
    pub d: u32,
}

impl LoopJson {
    pub fn to_datum(&self) -> Result<LoopDatum> {
        let lambda = Partition::normalize(self.lambda.iter().copied())?;
        let mut perms = BTreeMap::new();
        for (k, v) in &self.perms {
            let m: u32 = k.parse().map_err(|_| Error::Parse(format!("multiplicity key {k}")))?;
            perms.insert(m, Permutation::from_one_based(v)?);
        }
        let u = self.u.iter().map(|&x| Sign::try_from(x).map_err(Error::InvalidLoop)).collect::<Result<Vec<_>>>()?;
        LoopDatum::new(lambda, perms, u, self.d)
    }

    pub fn from_datum(ld: &LoopDatum) -> Self {
        LoopJson {
            lambda: ld.lambda.parts().iter().map(|&p| p as i64).collect(),
            perms: ld.perms.iter().map(|(m, p)| (m.to_string(), p.images().iter().map(|x| x + 1).collect())).collect(),
            u: ld.u.iter().map(|s| s.value()).collect(),
            d: ld.d,
        }
    }
}

/// Every datum on `λ` in dimension `d`: all permutation tuples and all
/// sign vectors.
pub fn all_data(lambda: &Partition, d: u32) -> Vec<LoopDatum> {
    let counts: Vec<(u32, usize)> = lambda.multiplicities().into_iter().collect();
    let mut perm_choices: Vec<BTreeMap<u32, Permutation>> = vec![BTreeMap::new()];
    for &(m, n) in &counts {
        let mut next = Vec::new();
        for base in &perm_choices {
            for p in Permutation::all(n) {
                let mut b = base.clone();
                b.insert(m, p);
                next.push(b);
            }
        }
        perm_choices = next;
    }
    let n = lambda.cardinality();
    let mut out = Vec::new();
    for perms in &perm_choices {
        for mask in 0..(1u32 << n) {
            let u = (0..n).map(|i| Sign::from_parity(mask & (1 << i) != 0)).collect();
            out.push(LoopDatum::new(lambda.clone(), perms.clone(), u, d).expect("enumerated datum"));
        }
    }
    out
}
