use std::collections::BTreeMap;

use serde::Serialize;

use super::filtered::FilteredComplex;
use crate::error::{Error, Result};
use crate::exactlin::{QMatrix, Subquotient};

/// Ranks and exactness of `H(U) → H(X) → H(X/U) → H(U)[±1]` in one degree.
#[derive(Debug, Clone, Serialize, PartialEq, Eq)]
pub struct LesDegree {
    pub degree: i64,
    pub dim_sub: usize,
    pub dim_total: usize,
    pub dim_quotient: usize,
    /// Rank of `H(U) → H(X)`.
    pub rank_restriction: usize,
    /// Rank of `H(X) → H(X/U)`.
    pub rank_projection: usize,
    /// Rank of the connecting map out of `H(X/U)` in this degree.
    pub rank_connecting: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct LesReport {
    pub degrees: Vec<LesDegree>,
    /// Consecutive maps compose to zero.
    pub composites_vanish: bool,
    /// Kernel equals image at every spot.
    pub exact: bool,
}

/// The long exact sequence of a filtration with two steps `U ⊆ X`.
pub fn two_step_les(fc: &FilteredComplex) -> Result<LesReport> {
    if fc.len() != 2 {
        return Err(Error::InvalidFiltration(format!("expected two filtration steps, found {}", fc.len())));
    }
    let c = fc.ambient();
    let step = c.direction().step();
    let u = fc.start();
    let x = fc.end();
    let h_sub = |n: i64| Subquotient::new(&fc.cycles_to(n, u, u - 1), &fc.boundaries_from(n, x, u));
    let h_tot = |n: i64| c.homology_space(n);
    let h_quo = |n: i64| {
        let num = fc.cycles_to(n, x, u);
        let den = fc.step_subspace(n, u).sum(&fc.boundaries_from(n, x, x));
        Subquotient::new(&num, &den)
    };
    let ident = |n: i64| QMatrix::identity(c.dim(n));
    let mut rows = Vec::new();
    let mut maps: BTreeMap<i64, [QMatrix; 3]> = BTreeMap::new();
    for n in c.degrees() {
        let (hs, ht, hq) = (h_sub(n), h_tot(n), h_quo(n));
        let alpha = hs.induced(&ident(n), &ht).expect("subcomplex cycles are cycles");
        let beta = ht.induced(&ident(n), &hq).expect("cycles are relative cycles");
        let gamma = hq.induced(&c.d(n), &h_sub(n + step)).expect("boundary of a relative cycle lies in U");
        rows.push(LesDegree {
            degree: n,
            dim_sub: hs.dim(),
            dim_total: ht.dim(),
            dim_quotient: hq.dim(),
            rank_restriction: alpha.rank(),
            rank_projection: beta.rank(),
            rank_connecting: gamma.rank(),
        });
        maps.insert(n, [alpha, beta, gamma]);
    }
    let mut composites_vanish = true;
    for (n, [alpha, beta, gamma]) in &maps {
        composites_vanish &= beta.mul(alpha).is_zero() && gamma.mul(beta).is_zero();
        if let Some([next_alpha, _, _]) = maps.get(&(n + step)) {
            composites_vanish &= next_alpha.mul(gamma).is_zero();
        }
    }
    let by_deg: BTreeMap<i64, &LesDegree> = rows.iter().map(|r| (r.degree, r)).collect();
    let mut exact = true;
    for r in &rows {
        let prev_conn = by_deg.get(&(r.degree - step)).map_or(0, |p| p.rank_connecting);
        // At H(U): ker α = im γ from the previous degree.
        exact &= r.dim_sub - r.rank_restriction == prev_conn;
        // At H(X): ker β = im α.
        exact &= r.dim_total - r.rank_projection == r.rank_restriction;
        // At H(X/U): ker γ = im β.
        exact &= r.dim_quotient - r.rank_connecting == r.rank_projection;
    }
    Ok(LesReport { degrees: rows, composites_vanish, exact })
}
