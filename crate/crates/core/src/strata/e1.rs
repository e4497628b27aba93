use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

use serde::Serialize;

use super::oracle::{BettiOracle, OracleEntry};
use crate::error::Result;
use crate::exactlin::sign;
use crate::partitions::{col, enumerate_partitions, Partition};
use crate::ranges::ManifoldClass;

/// One nonempty layer `𝒮_λ[p] = ⋃_{λ' ∈ col_p(λ)} S_{λ'}`.
#[derive(Debug, Clone, Serialize, PartialEq, Eq)]
pub struct Layer {
    pub p: usize,
    pub members: Vec<Partition>,
}

/// The stratification filtration `U_p = ⋃_{q ≤ p} 𝒮_λ[q]` of `W_λ`.
#[derive(Debug, Clone, Serialize)]
pub struct FiltrationReport {
    pub lambda: Partition,
    pub layers: Vec<Layer>,
    /// Layer 0 is exactly `{1^k}` (or the filtration is empty).
    pub finest_first: bool,
    /// All layers have index at most `k − 1`.
    pub bounded: bool,
}

impl FiltrationReport {
    pub fn is_empty(&self) -> bool {
        self.layers.is_empty()
    }
}

pub fn filtration_report(lambda: &Partition) -> Result<FiltrationReport> {
    let k = lambda.weight();
    let mut layers = Vec::new();
    for p in 0..=k {
        let members: Vec<Partition> = col(lambda, p)?.into_iter().collect();
        if !members.is_empty() {
            layers.push(Layer { p, members });
        }
    }
    let finest_first = match layers.first() {
        None => true,
        Some(l) => l.p == 0 && l.members == vec![Partition::ones(k)],
    };
    let bounded = layers.iter().all(|l| l.p < k.max(1));
    Ok(FiltrationReport { lambda: lambda.clone(), layers, finest_first, bounded })
}

/// One cell `E^1_{p,q}` and its decomposition over strata.
#[derive(Debug, Clone, Serialize, PartialEq, Eq)]
pub struct E1Cell {
    pub p: usize,
    pub q: i64,
    /// Sum over known components.
    pub dim: usize,
    pub components: Vec<(Partition, usize)>,
    /// Strata in this column without oracle data.
    pub unknown: Vec<Partition>,
}

/// `E^1_{p,q} = Σ_{λ' ∈ col_p(λ)} b_c^{p+q}(S_{λ'})`.
#[derive(Debug, Clone, Serialize)]
pub struct E1Table {
    pub lambda: Partition,
    pub class: ManifoldClass,
    pub cells: Vec<E1Cell>,
    pub columns: Vec<usize>,
    /// Some stratum lacked oracle data.
    pub incomplete: bool,
    pub missing: Vec<Partition>,
}

impl E1Table {
    pub fn dim(&self, p: usize, q: i64) -> usize {
        self.cells.iter().find(|c| c.p == p && c.q == q).map_or(0, |c| c.dim)
    }

    /// Alternating sum `Σ (−1)^{p+q} dim E^1_{p,q}`; `None` if incomplete.
    pub fn euler_characteristic(&self) -> Option<i64> {
        (!self.incomplete).then(|| self.cells.iter().map(|c| sign(c.p as i64 + c.q) * c.dim as i64).sum())
    }

    /// Upper bounds `dim H_c^n(W_λ) ≤ Σ_{p+q=n} dim E^1_{p,q}`.
    pub fn total_bounds(&self) -> BTreeMap<i64, usize> {
        let mut out = BTreeMap::new();
        for c in &self.cells {
            *out.entry(c.p as i64 + c.q).or_insert(0) += c.dim;
        }
        out
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("p,q,dim,components\n");
        for c in &self.cells {
            let comps: Vec<String> = c.components.iter().map(|(l, d)| format!("{l}:{d}")).collect();
            let _ = writeln!(out, "{},{},{},{}", c.p, c.q, c.dim, comps.join(" "));
        }
        out
    }
}

pub fn assemble_e1(lambda: &Partition, mc: &ManifoldClass, oracle: &BettiOracle) -> Result<E1Table> {
    let report = filtration_report(lambda)?;
    let mut cells: BTreeMap<(usize, i64), E1Cell> = BTreeMap::new();
    let mut missing = Vec::new();
    let mut columns = Vec::new();
    for layer in &report.layers {
        columns.push(layer.p);
        let mut unknown = Vec::new();
        for member in &layer.members {
            match oracle.lookup(member, mc)? {
                Some(entry) => add_entry(&mut cells, layer.p, member, &entry),
                None => unknown.push(member.clone()),
            }
        }
        if !unknown.is_empty() {
            for c in cells.values_mut().filter(|c| c.p == layer.p) {
                c.unknown = unknown.clone();
            }
            missing.extend(unknown);
        }
    }
    Ok(E1Table {
        lambda: lambda.clone(),
        class: *mc,
        cells: cells.into_values().collect(),
        columns,
        incomplete: !missing.is_empty(),
        missing,
    })
}

fn add_entry(cells: &mut BTreeMap<(usize, i64), E1Cell>, p: usize, member: &Partition, entry: &OracleEntry) {
    for (i, &b) in entry.betti.iter().enumerate() {
        if b == 0 {
            continue;
        }
        let q = i as i64 - p as i64;
        let cell = cells.entry((p, q)).or_insert_with(|| E1Cell { p, q, dim: 0, components: Vec::new(), unknown: Vec::new() });
        cell.dim += b;
        cell.components.push((member.clone(), b));
    }
}

/// Comparison of compactly supported Euler characteristics.
#[derive(Debug, Clone, Serialize)]
pub struct EulerReport {
    pub lambda: Partition,
    /// `Σ_p Σ_{λ' ∈ col_p} χ_c(S_{λ'})`.
    pub strata_sum: Option<i64>,
    /// Alternating sum over the assembled first page.
    pub e1_sum: Option<i64>,
    pub reference: Option<i64>,
    /// Strata sum, first-page sum and reference (if given) agree; `None`
    /// when stratum data was missing.
    pub consistent: Option<bool>,
    pub notes: Vec<String>,
}

/// Checks `Σ χ_c(strata) = χ_c(reference)`; `reference` is a vector of
/// compactly supported Betti numbers of `W_λ` or a space identified with it.
pub fn euler_consistency(
    lambda: &Partition,
    mc: &ManifoldClass,
    oracle: &BettiOracle,
    reference: Option<&[usize]>,
) -> Result<EulerReport> {
    let report = filtration_report(lambda)?;
    let mut notes = Vec::new();
    let mut sum = Some(0i64);
    for layer in &report.layers {
        for member in &layer.members {
            match oracle.lookup(member, mc)? {
                Some(e) => {
                    if let Some(s) = sum.as_mut() {
                        *s += e.euler_characteristic();
                    }
                }
                None => {
                    notes.push(format!("no data for stratum {member}"));
                    sum = None;
                }
            }
        }
    }
    let e1_sum = assemble_e1(lambda, mc, oracle)?.euler_characteristic();
    let reference =
        reference.map(|b| b.iter().enumerate().map(|(i, &x)| sign(i as i64) * x as i64).sum::<i64>());
    if reference.is_none() {
        notes.push("no reference supplied".into());
    }
    if report.is_empty() {
        notes.push(format!("{lambda} has an empty filtration: W is empty"));
    }
    let consistent = match (sum, e1_sum) {
        (Some(s), Some(e)) => Some(s == e && reference.is_none_or(|r| r == s)),
        _ => None,
    };
    Ok(EulerReport { lambda: lambda.clone(), strata_sum: sum, e1_sum, reference, consistent, notes })
}

/// `Σ_{λ' ⊢ k} χ_c(S_{λ'})`, which must equal `χ_c(Sym_k M)`; for the
/// plane that is `χ_c(ℝ^{2k}) = 1`.
pub fn total_strata_euler(k: usize, mc: &ManifoldClass, oracle: &BettiOracle) -> Result<Option<i64>> {
    let mut total = 0;
    for lambda in enumerate_partitions(k)? {
        match oracle.lookup(&lambda, mc)? {
            Some(e) => total += e.euler_characteristic(),
            None => return Ok(None),
        }
    }
    Ok(Some(total))
}

/// Partitions appearing in some layer of `λ`'s filtration.
pub fn strata_of(lambda: &Partition) -> Result<BTreeSet<Partition>> {
    Ok(filtration_report(lambda)?.layers.into_iter().flat_map(|l| l.members).collect())
}
