use std::collections::{BTreeMap, BTreeSet, HashMap};

use rand::Rng;

use crate::error::{Error, Result};
use crate::exactlin::{coinvariants, ChainComplex, ChainMap, Coinvariants, GroupAction, QMatrix, DEFAULT_ORDER_CAP};
use crate::perm::Permutation;

/// Largest symmetric group whose cosets are enumerated explicitly.
pub const DEFAULT_COSET_CAP: usize = 8;

/// Adjacent transpositions generating `𝔖_small ⊂ 𝔖_big`, the subgroup
/// fixing the last `big − small` letters.
pub fn small_generators(small: usize, big: usize) -> Vec<Permutation> {
    (0..small.saturating_sub(1)).map(|i| Permutation::transposition(big, i, i + 1)).collect()
}

/// The coset of `g` in `𝔖_small \ 𝔖_big`: where `g⁻¹` sends the last letters.
fn coset_key(g: &Permutation, small: usize) -> Vec<usize> {
    let inv = g.inverse();
    (small..g.len()).map(|x| inv.apply(x)).collect()
}

/// One representative per coset `𝔖_small · g`. The representative moves
/// the last `big − small` letters into place and keeps the remaining
/// letters in order. Sums over these are well defined from
/// `𝔖_big`-coinvariants to `𝔖_small`-coinvariants.
pub fn coset_representatives(small: usize, big: usize, cap: usize) -> Result<Vec<Permutation>> {
    if small > big {
        return Err(Error::Shape(format!("subgroup 𝔖_{small} is larger than 𝔖_{big}")));
    }
    if big > cap {
        return Err(Error::CapExceeded { what: "symmetric group size", value: big, cap });
    }
    let mut out = Vec::new();
    let mut chosen = Vec::new();
    injections(big, big - small, &mut chosen, &mut out, small);
    Ok(out)
}

fn injections(big: usize, len: usize, chosen: &mut Vec<usize>, out: &mut Vec<Permutation>, small: usize) {
    if chosen.len() == len {
        // g⁻¹(small + i) = chosen[i]; the other letters go in order.
        let used: BTreeSet<usize> = chosen.iter().copied().collect();
        let mut inv: Vec<usize> = (0..big).filter(|x| !used.contains(x)).collect();
        debug_assert_eq!(inv.len(), small);
        inv.extend(chosen.iter());
        out.push(Permutation::new(inv).expect("bijection").inverse());
        return;
    }
    for x in 0..big {
        if !chosen.contains(&x) {
            chosen.push(x);
            injections(big, len, chosen, out, small);
            chosen.pop();
        }
    }
}

/// Whether `reps` contains exactly one element of each coset.
pub fn is_transversal(reps: &[Permutation], small: usize, big: usize) -> bool {
    let keys: BTreeSet<Vec<usize>> = reps.iter().map(|g| coset_key(g, small)).collect();
    let expected: usize = (small + 1..=big).product();
    reps.iter().all(|g| g.len() == big) && keys.len() == reps.len() && reps.len() == expected
}

/// Replaces every representative `g` by `s·g` for a random `s ∈ 𝔖_small`.
pub fn reselect<R: Rng + ?Sized>(reps: &[Permutation], small: usize, rng: &mut R) -> Vec<Permutation> {
    reps.iter()
        .map(|g| {
            let mut images: Vec<usize> = (0..small).collect();
            for i in (1..small).rev() {
                images.swap(i, rng.gen_range(0..=i));
            }
            Permutation::new(images).expect("shuffle").extend(g.len()).compose(g)
        })
        .collect()
}

/// The map `x ↦ Σ g·x` from `𝔖_big`-coinvariants to `𝔖_small`-coinvariants.
#[derive(Debug, Clone)]
pub struct Iota {
    pub source: Coinvariants,
    pub target: Coinvariants,
    pub map: ChainMap,
    pub representatives: Vec<Permutation>,
}

/// `iota` with the default representatives.
pub fn iota(c: &ChainComplex, action: &GroupAction, small: usize, big: usize, cap: usize) -> Result<Iota> {
    let reps = coset_representatives(small, big, cap)?;
    iota_with(c, action, small, big, &reps)
}

/// `iota` for an explicit transversal. The action's generators must act on
/// `big` letters and generate all of `𝔖_big`.
pub fn iota_with(c: &ChainComplex, action: &GroupAction, small: usize, big: usize, reps: &[Permutation]) -> Result<Iota> {
    action.validate_generators(c)?;
    if action.generators().iter().any(|g| g.len() != big) {
        return Err(Error::InvalidAction(format!("generators do not act on {big} letters")));
    }
    if !is_transversal(reps, small, big) {
        return Err(Error::InvalidAction(format!("not a transversal of 𝔖_{small} in 𝔖_{big}")));
    }
    let elements = action.expand(c, DEFAULT_ORDER_CAP)?;
    let index: HashMap<&Permutation, usize> = elements.iter().enumerate().map(|(i, e)| (&e.perm, i)).collect();
    let lookup = |g: &Permutation| {
        if g.is_identity() {
            return Ok(0);
        }
        index.get(g).copied().ok_or_else(|| {
            Error::InvalidAction(format!("permutation {:?} is not generated by the action", g.images()))
        })
    };
    let gens = small_generators(small, big);
    let mut gen_mats = Vec::new();
    for g in &gens {
        gen_mats.push(elements[lookup(g)?].matrices.clone());
    }
    let restricted = GroupAction::new(gens, gen_mats)?;
    let source = coinvariants(c, action, DEFAULT_ORDER_CAP)?;
    let target = coinvariants(c, &restricted, DEFAULT_ORDER_CAP)?;
    let mut maps = BTreeMap::new();
    for n in c.degrees() {
        let dim = c.dim(n);
        let mut sum = QMatrix::zeros(dim, dim);
        for g in reps {
            sum = sum.add(&elements[lookup(g)?].matrices[&n]);
        }
        let q = target.quotient.at(n, c, &target.complex);
        let s = source.section.at(n, &source.complex, c);
        maps.insert(n, q.mul(&sum).mul(&s));
    }
    Ok(Iota { source, target, map: ChainMap::new(maps), representatives: reps.to_vec() })
}
