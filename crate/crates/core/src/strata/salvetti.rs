//! Salvetti complex of the braid arrangement: a regular CW model of the
//! ordered configuration space of `n` points in the plane.
//!
//! A cell pairs a chamber (a total order of the points) with a face it
//! contains (an ordered set partition it refines). Since the chamber lists
//! each block consecutively, a cell is a permutation `w` together with a
//! composition of `n` cutting `w` into blocks. The cell has dimension
//! `n − #blocks`. Facets split one block `B` into an ordered pair
//! `(S, B∖S)`, keeping the relative order of `w` inside each piece.

use std::collections::{BTreeMap, HashMap};

use crate::error::{Error, Result};
use crate::exactlin::{q, ChainComplex, Direction, GroupAction, QMatrix};
use crate::perm::Permutation;

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Cell {
    /// Points in chamber order.
    pub order: Vec<u8>,
    /// Block sizes, summing to `n`.
    pub blocks: Vec<u8>,
}

impl Cell {
    pub fn dim(&self) -> usize {
        self.order.len() - self.blocks.len()
    }

    /// Facets of the cell, in a fixed order.
    pub fn facets(&self) -> Vec<Cell> {
        let mut out = Vec::new();
        let mut start = 0usize;
        for (bi, &size) in self.blocks.iter().enumerate() {
            let size = size as usize;
            let seg = &self.order[start..start + size];
            for mask in 1..(1u32 << size) - 1 {
                let first: Vec<u8> = (0..size).filter(|i| mask & (1 << i) != 0).map(|i| seg[i]).collect();
                let second: Vec<u8> = (0..size).filter(|i| mask & (1 << i) == 0).map(|i| seg[i]).collect();
                let mut order = self.order[..start].to_vec();
                order.extend(&first);
                order.extend(&second);
                order.extend(&self.order[start + size..]);
                let mut blocks = self.blocks[..bi].to_vec();
                blocks.push(first.len() as u8);
                blocks.push(second.len() as u8);
                blocks.extend(&self.blocks[bi + 1..]);
                out.push(Cell { order, blocks });
            }
            start += size;
        }
        out
    }

    /// Relabels points by `g`.
    pub fn act(&self, g: &Permutation) -> Cell {
        Cell { order: self.order.iter().map(|&x| g.apply(x as usize) as u8).collect(), blocks: self.blocks.clone() }
    }
}

fn compositions(n: usize, parts: usize) -> Vec<Vec<u8>> {
    if parts == 0 {
        return if n == 0 { vec![Vec::new()] } else { Vec::new() };
    }
    let mut out = Vec::new();
    for first in 1..=n.saturating_sub(parts - 1) {
        for mut rest in compositions(n - first, parts - 1) {
            rest.insert(0, first as u8);
            out.push(rest);
        }
    }
    out
}

/// The complex with its cells, incidence signs and the `𝔖_n` action.
#[derive(Debug, Clone)]
pub struct Salvetti {
    pub n: usize,
    /// Cells per dimension in a fixed order.
    pub cells: Vec<Vec<Cell>>,
    index: Vec<HashMap<Cell, usize>>,
    /// Incidence `[σ : τ]` per dimension `d ≥ 1`: `(σ, τ) → ±1`.
    incidence: Vec<BTreeMap<(usize, usize), i64>>,
}

impl Salvetti {
    pub fn new(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::Shape("the cell model needs at least one point".into()));
        }
        let perms = Permutation::all(n);
        let mut cells: Vec<Vec<Cell>> = vec![Vec::new(); n];
        for parts in 1..=n {
            let dim = n - parts;
            for blocks in compositions(n, parts) {
                for w in &perms {
                    cells[dim].push(Cell { order: w.images().iter().map(|&x| x as u8).collect(), blocks: blocks.clone() });
                }
            }
        }
        for level in &mut cells {
            level.sort();
        }
        let index: Vec<HashMap<Cell, usize>> =
            cells.iter().map(|l| l.iter().cloned().enumerate().map(|(i, c)| (c, i)).collect()).collect();
        let mut s = Salvetti { n, cells, index, incidence: vec![BTreeMap::new(); n] };
        s.orient()?;
        Ok(s)
    }

    pub fn index_of(&self, c: &Cell) -> usize {
        self.index[c.dim()][c]
    }

    fn facet_indices(&self, d: usize, i: usize) -> Vec<usize> {
        self.cells[d][i].facets().iter().map(|f| self.index[d - 1][f]).collect()
    }

    /// Chooses incidence signs so that `∂∂ = 0`: in each cell of dimension
    /// at least 2, every codimension-2 face lies in exactly two facets, and
    /// their signs are propagated so the two contributions cancel.
    fn orient(&mut self) -> Result<()> {
        if self.n < 2 {
            return Ok(());
        }
        for i in 0..self.cells[1].len() {
            let f = self.facet_indices(1, i);
            if f.len() != 2 {
                return Err(Error::InvalidComplex("edge without two endpoints".into()));
            }
            self.incidence[1].insert((i, f[0]), -1);
            self.incidence[1].insert((i, f[1]), 1);
        }
        for d in 2..self.n {
            for i in 0..self.cells[d].len() {
                let facets = self.facet_indices(d, i);
                let mut by_ridge: HashMap<usize, Vec<(usize, i64)>> = HashMap::new();
                for &t in &facets {
                    for r in self.facet_indices(d - 1, t) {
                        by_ridge.entry(r).or_default().push((t, self.incidence[d - 1][&(t, r)]));
                    }
                }
                if by_ridge.values().any(|v| v.len() != 2) {
                    return Err(Error::InvalidComplex("cell boundary is not a manifold".into()));
                }
                let mut sign: HashMap<usize, i64> = HashMap::from([(facets[0], 1)]);
                let mut stack = vec![facets[0]];
                while let Some(t) = stack.pop() {
                    for r in self.facet_indices(d - 1, t) {
                        let pair = &by_ridge[&r];
                        let (mine, other) = if pair[0].0 == t { (pair[0], pair[1]) } else { (pair[1], pair[0]) };
                        let want = -sign[&t] * mine.1 * other.1;
                        match sign.get(&other.0) {
                            Some(&s) if s != want => {
                                return Err(Error::InvalidComplex("cell is not orientable".into()));
                            }
                            Some(_) => {}
                            None => {
                                sign.insert(other.0, want);
                                stack.push(other.0);
                            }
                        }
                    }
                }
                if sign.len() != facets.len() {
                    return Err(Error::InvalidComplex("facets of a cell are disconnected".into()));
                }
                for (t, s) in sign {
                    self.incidence[d].insert((i, t), s);
                }
            }
        }
        Ok(())
    }

    /// Cellular chain complex; `∂∂ = 0` is verified on construction.
    pub fn chain_complex(&self) -> Result<ChainComplex> {
        let dims: Vec<usize> = self.cells.iter().map(Vec::len).collect();
        let mut diffs = BTreeMap::new();
        for d in 1..self.n {
            let trips = self.incidence[d].iter().map(|(&(s, t), &v)| (t, s, q(v)));
            diffs.insert(d as i64, QMatrix::from_triplets(dims[d - 1], dims[d], trips)?);
        }
        ChainComplex::new(0, dims, Direction::Chain, diffs)
    }

    /// Orientation sign with which `g` carries each cell to its image,
    /// fixed by compatibility with the boundary.
    fn action_signs(&self, g: &Permutation) -> Vec<Vec<i64>> {
        let mut signs: Vec<Vec<i64>> = vec![vec![1; self.cells[0].len()]];
        for d in 1..self.n {
            let mut level = Vec::with_capacity(self.cells[d].len());
            for (i, c) in self.cells[d].iter().enumerate() {
                let t = self.facet_indices(d, i)[0];
                let gi = self.index_of(&c.act(g));
                let gt = self.index_of(&self.cells[d - 1][t].act(g));
                level.push(self.incidence[d][&(i, t)] * signs[d - 1][t] * self.incidence[d][&(gi, gt)]);
            }
            signs.push(level);
        }
        signs
    }

    /// Matrices of `g` in every degree.
    pub fn action_matrices(&self, g: &Permutation) -> BTreeMap<i64, QMatrix> {
        let signs = self.action_signs(g);
        (0..self.n)
            .map(|d| {
                let len = self.cells[d].len();
                let trips = self.cells[d].iter().enumerate().map(|(i, c)| (self.index_of(&c.act(g)), i, q(signs[d][i])));
                (d as i64, QMatrix::from_triplets(len, len, trips).expect("cells map to cells"))
            })
            .collect()
    }

    /// Action of the subgroup generated by the given permutations.
    pub fn action(&self, generators: &[Permutation]) -> Result<GroupAction> {
        GroupAction::new(generators.to_vec(), generators.iter().map(|g| self.action_matrices(g)).collect())
    }
}
