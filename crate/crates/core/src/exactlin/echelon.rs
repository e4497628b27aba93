use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::{QMatrix, SparseVec, Q};

/// Incremental row echelon form over ℚ.
///
/// Every vector offered to [`Echelon::insert`] gets an attempt index. Rows
/// remember how they were built from attempted vectors, so dependent inputs
/// can be written as combinations of earlier ones.
#[derive(Debug, Clone)]
pub struct Echelon {
    rows: Vec<SparseVec>,
    combos: Vec<SparseVec>,
    pivot_row: BTreeMap<usize, usize>,
    attempts: usize,
    track: bool,
}

/// Outcome of offering a vector to an [`Echelon`].
#[derive(Debug, Clone)]
pub enum Insertion {
    /// The vector was independent; its residual now owns this pivot column.
    Pivot(usize),
    /// The vector lies in the span; coefficients over earlier attempts.
    Dependent(SparseVec),
}

impl Default for Echelon {
    fn default() -> Self {
        Self::new(false)
    }
}

impl Echelon {
    pub fn new(track: bool) -> Self {
        Echelon { rows: Vec::new(), combos: Vec::new(), pivot_row: BTreeMap::new(), attempts: 0, track }
    }

    pub fn tracking() -> Self {
        Self::new(true)
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn pivots(&self) -> impl Iterator<Item = usize> + '_ {
        self.pivot_row.keys().copied()
    }

    pub fn is_pivot(&self, col: usize) -> bool {
        self.pivot_row.contains_key(&col)
    }

    /// Reduces `v` against the stored rows. Returns the residual, which has
    /// no entry in any pivot column, and the multipliers used per row.
    fn reduce_with(&self, v: &SparseVec) -> (SparseVec, Vec<(usize, Q)>) {
        let mut res = v.clone();
        let mut used = Vec::new();
        let mut cursor = 0usize;
        loop {
            let hit = res
                .iter()
                .filter(|(c, _)| *c >= cursor)
                .find_map(|(c, x)| self.pivot_row.get(c).map(|&r| (*c, r, x.clone())));
            let Some((col, r, x)) = hit else { break };
            res.axpy(&-x.clone(), &self.rows[r]);
            used.push((r, x));
            cursor = col + 1;
        }
        (res, used)
    }

    /// Canonical representative of `v` modulo the span.
    pub fn normal_form(&self, v: &SparseVec) -> SparseVec {
        self.reduce_with(v).0
    }

    pub fn contains(&self, v: &SparseVec) -> bool {
        self.normal_form(v).is_zero()
    }

    fn combo_of(&self, used: &[(usize, Q)]) -> SparseVec {
        let mut acc = SparseVec::new();
        for (r, x) in used {
            acc.axpy(x, &self.combos[*r]);
        }
        acc
    }

    /// Offers `v`; returns whether it enlarged the span.
    pub fn insert(&mut self, v: &SparseVec) -> Insertion {
        let t = self.attempts;
        self.attempts += 1;
        let (res, used) = self.reduce_with(v);
        if res.is_zero() {
            let combo = if self.track { self.combo_of(&used) } else { SparseVec::new() };
            return Insertion::Dependent(combo);
        }
        let (lead, lv) = res.lead().map(|(c, x)| (c, x.clone())).unwrap();
        let inv = lv.recip();
        if self.track {
            let mut combo = SparseVec::unit(t);
            combo.axpy(&-Q::one(), &self.combo_of(&used));
            combo.scale(&inv);
            self.combos.push(combo);
        }
        self.rows.push(res.scaled(&inv));
        self.pivot_row.insert(lead, self.rows.len() - 1);
        Insertion::Pivot(lead)
    }

    /// Coefficients over attempted vectors expressing `v`, if it lies in the
    /// span. Requires tracking.
    pub fn express(&self, v: &SparseVec) -> Option<SparseVec> {
        assert!(self.track, "express requires a tracking echelon");
        let (res, used) = self.reduce_with(v);
        res.is_zero().then(|| self.combo_of(&used))
    }

    /// Fully reduced rows keyed by pivot column, in increasing pivot order.
    pub fn rref_rows(&self) -> Vec<(usize, SparseVec)> {
        let mut done: Vec<(usize, SparseVec)> = Vec::with_capacity(self.rows.len());
        // Later pivots first: each row is cleaned against rows already reduced.
        for (&col, &r) in self.pivot_row.iter().rev() {
            let mut row = self.rows[r].clone();
            for (pc, prow) in &done {
                let x = row.get(*pc);
                if !x.is_zero() {
                    row.axpy(&-x, prow);
                }
            }
            done.push((col, row));
        }
        done.reverse();
        done
    }
}

/// Rank over ℚ by fraction-free elimination on integer rows.
///
/// Each row is scaled to a primitive integer vector; a new row `r` is reduced
/// against a pivot row `p` via `p_lead · r − r_c · p`, then divided by its
/// content, which keeps entries bounded by the minors involved.
pub fn rank(m: &QMatrix) -> usize {
    let vecs: Vec<&SparseVec> = m.row_vecs().iter().filter(|r| !r.is_zero()).collect();
    if vecs.is_empty() {
        return 0;
    }
    let mut pivots: BTreeMap<usize, Vec<(usize, BigInt)>> = BTreeMap::new();
    for v in vecs {
        let mut row = primitive_integer_row(v);
        loop {
            let Some((lead, _)) = row.first() else { break };
            let Some(p) = pivots.get(lead) else { break };
            row = eliminate(&row, p);
        }
        if let Some((lead, _)) = row.first() {
            pivots.insert(*lead, row);
        }
        if pivots.len() == m.rows().min(m.cols()) {
            break;
        }
    }
    pivots.len()
}

fn primitive_integer_row(v: &SparseVec) -> Vec<(usize, BigInt)> {
    let mut lcm = BigInt::one();
    for (_, x) in v.iter() {
        lcm = lcm.lcm(x.denom());
    }
    let row: Vec<(usize, BigInt)> =
        v.iter().map(|(c, x)| (*c, x.numer() * (&lcm / x.denom()))).collect();
    make_primitive(row)
}

fn make_primitive(mut row: Vec<(usize, BigInt)>) -> Vec<(usize, BigInt)> {
    let mut g = BigInt::zero();
    for (_, x) in &row {
        g = g.gcd(x);
        if g.is_one() {
            break;
        }
    }
    if !g.is_zero() && !g.is_one() {
        for (_, x) in &mut row {
            *x /= &g;
        }
    }
    if row.first().is_some_and(|(_, x)| x.is_negative()) {
        for (_, x) in &mut row {
            *x = -std::mem::take(x);
        }
    }
    row
}

/// `p_lead · row − row_lead · p`, which cancels the shared leading column.
fn eliminate(row: &[(usize, BigInt)], p: &[(usize, BigInt)]) -> Vec<(usize, BigInt)> {
    let a = &p[0].1;
    let b = &row[0].1;
    let g = a.gcd(b);
    let (a, b) = (a / &g, b / &g);
    let mut out = Vec::with_capacity(row.len() + p.len());
    let (mut i, mut j) = (1, 1);
    while i < row.len() || j < p.len() {
        let ci = row.get(i).map(|(c, _)| *c);
        let cj = p.get(j).map(|(c, _)| *c);
        let (c, v) = match (ci, cj) {
            (Some(x), Some(y)) if x == y => {
                let v = &a * &row[i].1 - &b * &p[j].1;
                i += 1;
                j += 1;
                (x, v)
            }
            (Some(x), Some(y)) if x < y => {
                i += 1;
                (x, &a * &row[i - 1].1)
            }
            (Some(x), None) => {
                i += 1;
                (x, &a * &row[i - 1].1)
            }
            (_, Some(y)) => {
                j += 1;
                (y, -(&b * &p[j - 1].1))
            }
            (None, None) => unreachable!(),
        };
        if !v.is_zero() {
            out.push((c, v));
        }
    }
    make_primitive(out)
}

/// Basis of the null space `{x : m x = 0}`.
pub fn kernel_basis(m: &QMatrix) -> Vec<SparseVec> {
    let mut ech = Echelon::tracking();
    let mut out = Vec::new();
    for (j, col) in m.columns().iter().enumerate() {
        if let Insertion::Dependent(combo) = ech.insert(col) {
            let mut k = SparseVec::unit(j);
            k.axpy(&-Q::one(), &combo);
            out.push(k);
        }
    }
    out
}

/// Kernel basis packed as the columns of a `cols × nullity` matrix.
pub fn kernel_matrix(m: &QMatrix) -> QMatrix {
    QMatrix::from_columns(m.cols(), &kernel_basis(m))
}

/// Independent columns spanning the column space.
pub fn image_basis(m: &QMatrix) -> Vec<SparseVec> {
    let mut ech = Echelon::default();
    m.columns().into_iter().filter(|c| matches!(ech.insert(c), Insertion::Pivot(_))).collect()
}

/// Some `x` with `m x = b`, if one exists.
pub fn solve(m: &QMatrix, b: &SparseVec) -> Option<SparseVec> {
    let mut ech = Echelon::tracking();
    for col in m.columns() {
        ech.insert(&col);
    }
    ech.express(b)
}
