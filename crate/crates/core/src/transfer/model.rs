use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use super::cosets::{coset_representatives, small_generators, DEFAULT_COSET_CAP};
use crate::error::{Error, Result};
use crate::exactlin::{q, ChainComplex, Direction, GroupAction, QMatrix};

/// A site holds at most one particle (`Point`) or any number (`Component`,
/// a copy of `ℝ^d` with `d ≥ 2`, whose ordered configuration spaces are
/// connected).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SiteKind {
    Point,
    Component,
}

/// Discrete model of configurations on a finite set of sites. `H_0` of the
/// ordered configurations of `n` particles has one basis vector per
/// assignment of particles to sites; its `𝔖_n`-coinvariants have one per
/// occupation vector. `k` is the number of particles always present.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConfigurationModel {
    pub sites: Vec<SiteKind>,
    pub k: usize,
    /// Largest particle count for coset enumeration.
    pub cap: usize,
}

impl ConfigurationModel {
    /// Sites that each hold at most one particle.
    pub fn distinct(sites: usize, k: usize) -> Self {
        ConfigurationModel { sites: vec![SiteKind::Point; sites], k, cap: DEFAULT_COSET_CAP }
    }

    /// Sites that are components of unbounded capacity.
    pub fn components(sites: usize, k: usize) -> Self {
        ConfigurationModel { sites: vec![SiteKind::Component; sites], k, cap: DEFAULT_COSET_CAP }
    }

    /// Site 0 a component, followed by `points` point sites.
    pub fn mixed(points: usize, k: usize) -> Self {
        let mut sites = vec![SiteKind::Component];
        sites.extend(std::iter::repeat_n(SiteKind::Point, points));
        ConfigurationModel { sites, k, cap: DEFAULT_COSET_CAP }
    }

    /// First component site, where stabilization adds a particle.
    pub fn stabilization_site(&self) -> Option<usize> {
        self.sites.iter().position(|s| *s == SiteKind::Component)
    }

    fn check(&self, n: usize) -> Result<()> {
        if n > self.cap {
            return Err(Error::CapExceeded { what: "particle count", value: n, cap: self.cap });
        }
        Ok(())
    }

    /// Assignments of `n` particles to sites, lexicographic.
    pub fn ordered_basis(&self, n: usize) -> Result<Vec<Vec<usize>>> {
        self.check(n)?;
        let mut out = Vec::new();
        let mut cur = Vec::new();
        self.assign(n, &mut cur, &mut out);
        Ok(out)
    }

    fn assign(&self, n: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == n {
            out.push(cur.clone());
            return;
        }
        for (s, kind) in self.sites.iter().enumerate() {
            if *kind == SiteKind::Point && cur.contains(&s) {
                continue;
            }
            cur.push(s);
            self.assign(n, cur, out);
            cur.pop();
        }
    }

    /// Occupation vectors with `n` particles, lexicographic.
    pub fn unordered_basis(&self, n: usize) -> Result<Vec<Vec<usize>>> {
        self.check(n)?;
        let mut out = Vec::new();
        let mut cur = Vec::new();
        self.occupy(n, &mut cur, &mut out);
        Ok(out)
    }

    fn occupy(&self, left: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        let s = cur.len();
        if s == self.sites.len() {
            if left == 0 {
                out.push(cur.clone());
            }
            return;
        }
        let max = match self.sites[s] {
            SiteKind::Point => left.min(1),
            SiteKind::Component => left,
        };
        for c in 0..=max {
            cur.push(c);
            self.occupy(left - c, cur, out);
            cur.pop();
        }
    }

    pub fn occupation(&self, tuple: &[usize]) -> Vec<usize> {
        let mut occ = vec![0; self.sites.len()];
        for &s in tuple {
            occ[s] += 1;
        }
        occ
    }

    /// The assignment listing particles site by site.
    pub fn sorted_tuple(occ: &[usize]) -> Vec<usize> {
        occ.iter().enumerate().flat_map(|(s, &c)| std::iter::repeat_n(s, c)).collect()
    }

    /// Ordered `H_0` in degree 0 with the `𝔖_n` action permuting particles.
    pub fn ordered_complex(&self, n: usize) -> Result<(ChainComplex, GroupAction)> {
        let basis = self.ordered_basis(n)?;
        let index: HashMap<&Vec<usize>, usize> = basis.iter().enumerate().map(|(i, t)| (t, i)).collect();
        let c = ChainComplex::zero_differential(0, vec![basis.len()], Direction::Chain);
        let gens = small_generators(n, n);
        let mats = gens
            .iter()
            .map(|g| {
                let m = QMatrix::from_triplets(
                    basis.len(),
                    basis.len(),
                    basis.iter().enumerate().map(|(i, t)| (index[&g.act_on_tuple(t)], i, q(1))),
                )?;
                Ok([(0i64, m)].into_iter().collect())
            })
            .collect::<Result<Vec<_>>>()?;
        Ok((c, GroupAction::new(gens, mats)?))
    }

    /// Forgets the last `big − small` particles: ordered basis of `big`
    /// particles to ordered basis of `small` particles.
    pub fn deletion(&self, small: usize, big: usize) -> Result<QMatrix> {
        let src = self.ordered_basis(big)?;
        let dst = self.ordered_basis(small)?;
        let index: HashMap<&[usize], usize> = dst.iter().enumerate().map(|(i, t)| (t.as_slice(), i)).collect();
        QMatrix::from_triplets(dst.len(), src.len(), src.iter().enumerate().map(|(i, t)| (index[&t[..small]], i, q(1))))
    }

    /// Stabilization on coinvariants: one more particle at the stabilization
    /// site, from `n − 1` to `n` particles.
    pub fn stabilization(&self, n: usize) -> Result<QMatrix> {
        let site = self
            .stabilization_site()
            .ok_or_else(|| Error::InvalidDold("model has no component site to stabilize into".into()))?;
        let dst = self.unordered_basis(n)?;
        if n == 0 {
            return Ok(QMatrix::zeros(dst.len(), 0));
        }
        let src = self.unordered_basis(n - 1)?;
        let index: HashMap<&Vec<usize>, usize> = dst.iter().enumerate().map(|(i, t)| (t, i)).collect();
        QMatrix::from_triplets(
            dst.len(),
            src.len(),
            src.iter().enumerate().map(|(i, occ)| {
                let mut o = occ.clone();
                o[site] += 1;
                (index[&o], i, q(1))
            }),
        )
    }

    /// Transfer `τ_{i,j}` on coinvariant homology, from `j + k` to `i + k`
    /// particles: sum over coset representatives, then delete, in the bases
    /// of occupation vectors.
    pub fn transfer_map(&self, i: usize, j: usize) -> Result<QMatrix> {
        self.transfer_particles(i + self.k, j + self.k)
    }

    /// `transfer_map` indexed by total particle counts.
    pub fn transfer_particles(&self, small: usize, big: usize) -> Result<QMatrix> {
        self.check(big)?;
        let reps = coset_representatives(small, big, self.cap)?;
        let src = self.unordered_basis(big)?;
        let dst = self.unordered_basis(small)?;
        let index: HashMap<&Vec<usize>, usize> = dst.iter().enumerate().map(|(i, t)| (t, i)).collect();
        let mut entries = Vec::new();
        for (col, occ) in src.iter().enumerate() {
            let t = Self::sorted_tuple(occ);
            for g in &reps {
                let moved = g.act_on_tuple(&t);
                entries.push((index[&self.occupation(&moved[..small])], col, q(1)));
            }
        }
        QMatrix::from_triplets(dst.len(), src.len(), entries)
    }

    /// Quotient matrix sending each ordered basis vector to its occupation
    /// vector.
    pub fn orbit_projection(&self, n: usize) -> Result<QMatrix> {
        let src = self.ordered_basis(n)?;
        let dst = self.unordered_basis(n)?;
        let index: HashMap<&Vec<usize>, usize> = dst.iter().enumerate().map(|(i, t)| (t, i)).collect();
        QMatrix::from_triplets(dst.len(), src.len(), src.iter().enumerate().map(|(i, t)| (index[&self.occupation(t)], i, q(1))))
    }

    /// Restriction along the inclusion of the first `sites` sites.
    pub fn restrict(&self, sites: usize) -> ConfigurationModel {
        ConfigurationModel { sites: self.sites[..sites].to_vec(), k: self.k, cap: self.cap }
    }

    /// Pushforward of occupation vectors along the inclusion of a
    /// restricted model.
    pub fn inclusion_from(&self, sub: &ConfigurationModel, n: usize) -> Result<QMatrix> {
        let src = sub.unordered_basis(n)?;
        let dst = self.unordered_basis(n)?;
        let index: HashMap<&Vec<usize>, usize> = dst.iter().enumerate().map(|(i, t)| (t, i)).collect();
        QMatrix::from_triplets(
            dst.len(),
            src.len(),
            src.iter().enumerate().map(|(i, occ)| {
                let mut o = occ.clone();
                o.resize(self.sites.len(), 0);
                (index[&o], i, q(1))
            }),
        )
    }
}
