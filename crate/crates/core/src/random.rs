//! Seeded generators of random test instances.

use std::collections::BTreeMap;

use rand::seq::SliceRandom;
use rand::Rng;

use crate::error::Result;
use crate::exactlin::{
    q, solve, ChainComplex, ChainMap, Direction, GroupAction, QMatrix, SparseVec, Subspace, Q,
};
use crate::perm::Permutation;
use crate::spectral::FilteredComplex;

/// Size limits for [`random_filtered_complex`].
#[derive(Debug, Clone, Copy)]
pub struct FilteredParams {
    pub max_basis: usize,
    pub max_steps: usize,
    pub max_degrees: usize,
    pub direction: Direction,
}

impl Default for FilteredParams {
    fn default() -> Self {
        FilteredParams { max_basis: 40, max_steps: 5, max_degrees: 4, direction: Direction::Cochain }
    }
}

/// A random filtered complex `d = T N T⁻¹`: `N` pairs basis elements into
/// `x ↦ y` with `y` no higher in the filtration, and `T` is a unitriangular
/// integer change of basis that never raises filtration level.
pub fn random_filtered_complex<R: Rng>(rng: &mut R, params: FilteredParams) -> FilteredComplex {
    let steps = rng.gen_range(1..=params.max_steps.max(1)) as i64;
    let ndeg = rng.gen_range(1..=params.max_degrees.max(1));
    let total = rng.gen_range(1..=params.max_basis.max(1));
    let mut deg_of: Vec<usize> = (0..total).map(|_| rng.gen_range(0..ndeg)).collect();
    deg_of.sort();
    let mut dims = vec![0usize; ndeg];
    for &d in &deg_of {
        dims[d] += 1;
    }
    let levels: Vec<i64> = (0..total).map(|_| rng.gen_range(0..steps)).collect();
    let c0 = ChainComplex::zero_differential(0, dims.clone(), params.direction);
    let offset = |n: usize| c0.offset(n as i64);
    let step = params.direction.step();
    let lvl = |n: usize, i: usize| levels[offset(n) + i];

    // Pairing differential N.
    let mut used = vec![false; total];
    let mut order: Vec<usize> = (0..total).collect();
    order.shuffle(rng);
    let mut pairs: Vec<(usize, usize)> = Vec::new();
    for g in order {
        if used[g] || !rng.gen_bool(0.65) {
            continue;
        }
        let n = deg_of[g] as i64;
        let tgt_deg = n + step;
        if tgt_deg < 0 || tgt_deg >= ndeg as i64 {
            continue;
        }
        let cands: Vec<usize> = (0..total)
            .filter(|&h| !used[h] && deg_of[h] as i64 == tgt_deg && levels[h] <= levels[g])
            .collect();
        if let Some(&h) = cands.choose(rng) {
            used[g] = true;
            used[h] = true;
            pairs.push((g, h));
        }
    }
    // Unitriangular changes of basis per degree.
    let mut t: Vec<QMatrix> = Vec::new();
    let mut t_inv: Vec<QMatrix> = Vec::new();
    for n in 0..ndeg {
        let dim = dims[n];
        let mut order: Vec<usize> = (0..dim).collect();
        order.sort_by_key(|&i| (lvl(n, i), i));
        let mut m = QMatrix::identity(dim);
        for b in 0..dim {
            for a in 0..b {
                if rng.gen_bool(0.25) {
                    m.set(order[a], order[b], q(rng.gen_range(-2..=2)));
                }
            }
        }
        let inv_cols: Vec<SparseVec> = (0..dim).map(|j| solve(&m, &SparseVec::unit(j)).expect("unitriangular")).collect();
        t_inv.push(QMatrix::from_columns(dim, &inv_cols));
        t.push(m);
    }
    let mut diffs = BTreeMap::new();
    for n in 0..ndeg {
        let tgt = n as i64 + step;
        if tgt < 0 || tgt >= ndeg as i64 {
            continue;
        }
        let tgt = tgt as usize;
        let trips = pairs
            .iter()
            .filter(|(g, _)| deg_of[*g] == n)
            .map(|&(g, h)| (h - offset(tgt), g - offset(n), q(1)));
        let nm = QMatrix::from_triplets(dims[tgt], dims[n], trips).expect("pair indices in range");
        diffs.insert(n as i64, t[tgt].mul(&nm).mul(&t_inv[n]));
    }
    let c = ChainComplex::new(0, dims, params.direction, diffs).expect("conjugated pairing squares to zero");
    FilteredComplex::from_levels(c, &levels).expect("conjugation preserves the filtration")
}

/// A signed permutation module of `𝔖_n`: basis the injective `r`-tuples in
/// `{0..n-1}`, optionally twisted by the sign character.
#[derive(Debug, Clone)]
pub struct TupleModule {
    pub n: usize,
    pub r: usize,
    pub twisted: bool,
    tuples: Vec<Vec<usize>>,
}

impl TupleModule {
    pub fn new(n: usize, r: usize, twisted: bool) -> Self {
        let mut tuples = vec![Vec::new()];
        for _ in 0..r {
            let mut next = Vec::new();
            for t in &tuples {
                for x in (0..n).filter(|x| !t.contains(x)) {
                    let mut u = t.clone();
                    u.push(x);
                    next.push(u);
                }
            }
            tuples = next;
        }
        TupleModule { n, r, twisted, tuples }
    }

    pub fn dim(&self) -> usize {
        self.tuples.len()
    }

    /// Matrix of `g`: `e_t ↦ ε(g)^{twist} e_{g∘t}`.
    pub fn matrix(&self, g: &Permutation) -> QMatrix {
        let index: BTreeMap<&[usize], usize> = self.tuples.iter().enumerate().map(|(i, t)| (t.as_slice(), i)).collect();
        let s = if self.twisted { g.sign() as i64 } else { 1 };
        let trips = self.tuples.iter().enumerate().map(|(c, t)| {
            let image: Vec<usize> = t.iter().map(|&x| g.apply(x)).collect();
            (index[image.as_slice()], c, q(s))
        });
        QMatrix::from_triplets(self.dim(), self.dim(), trips).expect("tuple images are tuples")
    }
}

/// A direct sum of tuple modules.
#[derive(Debug, Clone)]
pub struct SumModule(pub Vec<TupleModule>);

impl SumModule {
    pub fn dim(&self) -> usize {
        self.0.iter().map(TupleModule::dim).sum()
    }

    pub fn matrix(&self, g: &Permutation) -> QMatrix {
        self.0.iter().fold(QMatrix::zeros(0, 0), |acc, m| acc.direct_sum(&m.matrix(g)))
    }
}

/// A random `𝔖_n`-equivariant chain complex with its action, built from
/// averaged random maps, each composed with the orthogonal projection onto
/// the kernel of the next differential so that `d∘d = 0`.
pub fn random_equivariant_complex<R: Rng>(rng: &mut R, n: usize, degrees: usize) -> Result<(ChainComplex, GroupAction)> {
    let modules: Vec<SumModule> = (0..degrees)
        .map(|_| {
            let count = rng.gen_range(1..=2);
            SumModule(
                (0..count)
                    .map(|_| TupleModule::new(n, rng.gen_range(0..=n.min(2)), rng.gen_bool(0.3)))
                    .collect(),
            )
        })
        .collect();
    let elements = Permutation::all(n);
    let inv_order = Q::new(1.into(), elements.len().into());
    let average = |rng: &mut R, src: &SumModule, dst: &SumModule| {
        let a = QMatrix::from_triplets(
            dst.dim(),
            src.dim(),
            (0..dst.dim())
                .flat_map(|r| (0..src.dim()).map(move |c| (r, c)))
                .filter_map(|(r, c)| rng.gen_bool(0.15).then(|| (r, c, q(rng.gen_range(-2..=2)))))
                .collect::<Vec<_>>(),
        )
        .expect("indices in range");
        let mut sum = QMatrix::zeros(dst.dim(), src.dim());
        for g in &elements {
            let g_inv = g.inverse();
            sum = sum.add(&dst.matrix(g).mul(&a).mul(&src.matrix(&g_inv)));
        }
        sum.scaled(&inv_order)
    };
    let mut diffs = BTreeMap::new();
    let mut prev: Option<QMatrix> = None;
    for deg in 1..degrees {
        let mut d = average(rng, &modules[deg], &modules[deg - 1]);
        if let Some(p) = &prev {
            d = orthogonal_kernel_projection(p).mul(&d);
        }
        prev = Some(d.clone());
        diffs.insert(deg as i64, d);
    }
    let dims = modules.iter().map(SumModule::dim).collect();
    let c = ChainComplex::new(0, dims, Direction::Chain, diffs)?;
    let gens: Vec<Permutation> = (0..n.saturating_sub(1)).map(|i| Permutation::transposition(n, i, i + 1)).collect();
    let mats = gens
        .iter()
        .map(|g| modules.iter().enumerate().map(|(deg, m)| (deg as i64, m.matrix(g))).collect())
        .collect();
    Ok((c, GroupAction::new(gens, mats)?))
}

/// Orthogonal projection onto `ker m`: `K (KᵀK)⁻¹ Kᵀ`.
fn orthogonal_kernel_projection(m: &QMatrix) -> QMatrix {
    let k = Subspace::kernel(m).as_matrix();
    let kt = k.transpose();
    let gram = kt.mul(&k);
    let cols: Vec<SparseVec> = kt.columns().iter().map(|c| solve(&gram, c).expect("Gram matrix invertible")).collect();
    k.mul(&QMatrix::from_columns(gram.rows(), &cols))
}

/// How an engineered comparison instance was built.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ComparisonKind {
    /// Inclusion of the part of `C` in degrees `≥ s − 1`.
    Truncation,
    /// Projection `C ⊕ A → C` with `A` concentrated below `s − 1`.
    Projection,
    /// Inclusion `C → C ⊕ A` with `A` concentrated below `s − 1`.
    Inclusion,
}

/// A filtered cochain map whose first-page map is an isomorphism in total
/// degrees `≥ s` and onto in degree `s − 1`, by construction.
#[derive(Debug, Clone)]
pub struct ComparisonInstance {
    pub kind: ComparisonKind,
    pub map: ChainMap,
    pub source: FilteredComplex,
    pub target: FilteredComplex,
    pub threshold: i64,
}


/// Shifts a complex so that its top degree is `top`.
fn shifted_to(c: &ChainComplex, top: i64) -> Result<ChainComplex> {
    let shift = top - c.hi();
    let diffs = c.degrees().map(|n| (n + shift, c.d(n))).collect();
    ChainComplex::new(c.lo() + shift, c.dims().to_vec(), c.direction(), diffs)
}

/// Random instance of a comparison whose hypothesis holds at its threshold.
pub fn engineered_comparison<R: Rng>(rng: &mut R) -> Result<ComparisonInstance> {
    let params = FilteredParams { max_basis: 24, ..FilteredParams::default() };
    let fc = random_filtered_complex(rng, params);
    let c = fc.ambient().clone();
    let s = rng.gen_range(c.lo()..=c.hi() + 1);
    let kind = match rng.gen_range(0..3) {
        0 => ComparisonKind::Truncation,
        1 => ComparisonKind::Projection,
        _ => ComparisonKind::Inclusion,
    };
    if kind == ComparisonKind::Truncation {
        let keep: Vec<i64> = c.degrees().filter(|&n| n >= s - 1).collect();
        let lo = keep.first().copied().unwrap_or(c.hi() + 1);
        let dims: Vec<usize> = keep.iter().map(|&n| c.dim(n)).collect();
        let diffs = keep.iter().map(|&n| (n, c.d(n))).collect();
        let k = ChainComplex::new(lo, dims, c.direction(), diffs)?;
        let levels: Vec<i64> =
            keep.iter().flat_map(|&n| (0..c.dim(n)).map(move |i| (n, i))).map(|(n, i)| fc.local_level(n, i)).collect();
        let source = FilteredComplex::from_levels(k, &levels)?;
        let map = ChainMap::new(keep.iter().map(|&n| (n, QMatrix::identity(c.dim(n)))).collect());
        return Ok(ComparisonInstance { kind, map, source, target: fc, threshold: s });
    }
    let small = FilteredParams { max_basis: 10, max_degrees: 3, ..params };
    let fa = random_filtered_complex(rng, small);
    let a = shifted_to(fa.ambient(), s - 2)?;
    let sum = c.direct_sum(&a)?;
    let mut sum_levels = Vec::new();
    for n in sum.degrees() {
        sum_levels.extend((0..c.dim(n)).map(|i| if c.in_range(n) { fc.local_level(n, i) } else { 0 }));
        sum_levels.extend((0..a.dim(n)).map(|i| fa.local_level(n - (a.lo() - fa.ambient().lo()), i)));
    }
    let fs = FilteredComplex::from_levels(sum.clone(), &sum_levels)?;
    let mut maps = BTreeMap::new();
    for n in sum.degrees() {
        let (cn, an) = (c.dim(n), a.dim(n));
        let m = QMatrix::identity(cn).hstack(&QMatrix::zeros(cn, an));
        maps.insert(n, if kind == ComparisonKind::Projection { m } else { m.transpose() });
    }
    let map = ChainMap::new(maps);
    let (source, target) = if kind == ComparisonKind::Projection { (fs, fc) } else { (fc, fs) };
    Ok(ComparisonInstance { kind, map, source, target, threshold: s })
}
