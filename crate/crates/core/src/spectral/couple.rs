use std::collections::BTreeMap;

use super::filtered::FilteredComplex;
use crate::error::Result;
use crate::exactlin::{Subquotient, Subspace};

/// Page dimensions from the iterated derived couple of
/// `A_p = H(F_p)`, `E_p = H(F_p / F_{p−1})` with maps `i`, `j`, `k`:
/// `E^{r+1}_p = k^{−1}(im i^r) / j(ker i^r)`.
///
/// Returns `(r, p, n) → dim` for `1 ≤ r ≤ last`.
pub fn couple_dimensions(fc: &FilteredComplex, last: usize) -> Result<BTreeMap<(usize, i64, i64), usize>> {
    let c = fc.ambient();
    let step = c.direction().step();
    let mut out = BTreeMap::new();
    for n in c.degrees() {
        let d = c.d(n);
        for p in fc.start()..=fc.end() {
            // E_p as a subquotient of C^n.
            let num = fc.cycles_to(n, p, p - 1);
            let den = fc.step_subspace(n, p - 1).sum(&fc.boundaries_from(n, p, p));
            for r in 1..=last {
                let s = r as i64 - 1;
                // k^{-1}(im i^{r-1}): dx ∈ Z(F_{p-r}) + d(F_{p-1}).
                let allowed = cycles_in(fc, n + step, p - 1 - s).sum(&boundaries_of_step(fc, n + step, p - 1));
                let pre = Subspace::preimage(&d, &allowed).intersection(&num).sum(&den);
                // j(ker i^{r-1}): F_p ∩ d(F_{p+r-1}).
                let kill = fc.boundaries_from(n, p, p + s).sum(&den);
                let dim = Subquotient::new(&pre, &kill).dim();
                out.insert((r, p, n), dim);
            }
        }
    }
    Ok(out)
}

/// Cycles of `F_p` in degree `n`.
fn cycles_in(fc: &FilteredComplex, n: i64, p: i64) -> Subspace {
    fc.cycles_to(n, p, fc.start() - 1)
}

/// `d(F_p)` landing in degree `n`.
fn boundaries_of_step(fc: &FilteredComplex, n: i64, p: i64) -> Subspace {
    fc.boundaries_from(n, fc.end(), p)
}
