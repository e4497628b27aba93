//! Seeded property battery. Every item draws from its own ChaCha stream of
//! the suite seed, so items can run concurrently and any one of them can be
//! replayed from `(seed, stream)` alone.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;
use std::time::Instant;

use anyhow::Result;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use symcomp_core::exactlin::{averaged_dims, coinvariants, homology_action, DEFAULT_ORDER_CAP};
use symcomp_core::monodromy::{monodromy_pair, odd_move_agreement, orientation_chars, s1, s2, Agreement, LoopDatum, Sign};
use symcomp_core::partitions::{
    col, collapse_chain_lengths, enumerate_partitions, is_collapse, stab_collapse_map, Partition,
};
use symcomp_core::random::{engineered_comparison, random_equivariant_complex, random_filtered_complex, FilteredParams};
use symcomp_core::ranges::{integral_caveats, puncture, stability_range, theorem_range, ManifoldClass, RangeCase};
use symcomp_core::spectral::{compare_pages, compute_pages_checked, Verdict};
use symcomp_core::strata::{
    assemble_e1, euler_consistency, filtration_report, range_certificate, window_is_tight, BettiOracle,
    DEFAULT_PLANE_CAP,
};
use symcomp_core::transfer::{
    dold_conclusions, dold_verify, iota, iota_with, is_transversal, reselect, ConfigurationModel, DoldSystem,
};
use symcomp_core::Permutation;

use crate::commands::Failures;
use crate::output::{Emitter, Format};

type Check = fn(&mut ChaCha8Rng) -> Result<String, String>;

struct Property {
    id: &'static str,
    description: &'static str,
    check: Check,
}

#[derive(Debug, Serialize)]
pub struct ItemReport {
    pub id: &'static str,
    pub description: &'static str,
    pub stream: u64,
    pub passed: bool,
    pub detail: String,
}

#[derive(Debug, Serialize)]
pub struct SuiteReport {
    pub seed: u64,
    pub passed: bool,
    pub items: Vec<ItemReport>,
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn random_partition(rng: &mut ChaCha8Rng, lo: usize, hi: usize) -> Partition {
    let k = rng.gen_range(lo..=hi);
    let all = enumerate_partitions(k).expect("small weight");
    all.choose(rng).expect("partitions of k exist").clone()
}

fn random_perm(rng: &mut ChaCha8Rng, n: usize) -> Permutation {
    let mut images: Vec<usize> = (0..n).collect();
    images.shuffle(rng);
    Permutation::new(images).expect("shuffle is a bijection")
}

fn random_class(rng: &mut ChaCha8Rng) -> ManifoldClass {
    let dim = rng.gen_range(2..=7u32);
    let orientable = rng.gen_bool(0.7);
    let connectivity = if dim > 2 && orientable { rng.gen_range(0..dim - 1) } else { 0 };
    ManifoldClass { dim, orientable, open_interior: rng.gen_bool(0.5), connectivity, punctures: 0 }
}

fn collapse_layers(rng: &mut ChaCha8Rng) -> Result<String, String> {
    for _ in 0..30 {
        let lambda = random_partition(rng, 1, 8);
        let k = lambda.weight();
        let report = filtration_report(&lambda).map_err(|e| e.to_string())?;
        ensure(report.finest_first && report.bounded, || format!("{lambda}: layer shape"))?;
        let mut seen = BTreeSet::new();
        for layer in &report.layers {
            for mu in &layer.members {
                ensure(mu.cardinality() + layer.p == k, || format!("{lambda}: {mu} in layer {}", layer.p))?;
                ensure(seen.insert(mu.clone()), || format!("{lambda}: {mu} repeated"))?;
            }
        }
        let want: BTreeSet<Partition> =
            enumerate_partitions(k).unwrap().into_iter().filter(|mu| !is_collapse(mu, &lambda)).collect();
        ensure(seen == want, || format!("{lambda}: layers miss strata"))?;
    }
    Ok("30 partitions, layers disjoint and exhaustive".into())
}

fn chain_lengths(rng: &mut ChaCha8Rng) -> Result<String, String> {
    let k = rng.gen_range(1..=7);
    let lengths = collapse_chain_lengths(k).map_err(|e| e.to_string())?;
    for (lambda, ls) in &lengths {
        ensure(*ls == BTreeSet::from([k - lambda.cardinality()]), || format!("{lambda}: {ls:?}"))?;
    }
    Ok(format!("k = {k}, {} partitions", lengths.len()))
}

fn stabilization_window(rng: &mut ChaCha8Rng) -> Result<String, String> {
    for _ in 0..40 {
        let lambda = random_partition(rng, 1, 6);
        let j = rng.gen_range(0..=6);
        let p = rng.gen_range(0..=j + lambda.weight());
        let r = stab_collapse_map(&lambda, j, p).map_err(|e| e.to_string())?;
        ensure(r.well_defined && r.injective, || format!("{lambda} j={j} p={p}: not an injection"))?;
        if r.within_window {
            ensure(r.bijective(), || format!("{lambda} j={j} p={p}: missed {:?}", r.missed))?;
        } else {
            ensure(r.missed_are_one_free, || format!("{lambda} j={j} p={p}: missed element has a 1"))?;
        }
    }
    Ok("40 triples".into())
}

fn range_formula(rng: &mut ChaCha8Rng) -> Result<String, String> {
    for _ in 0..50 {
        let mc = random_class(rng);
        let k = rng.gen_range(1..=6u64);
        let j = rng.gen_range(0..=10u64);
        let f = stability_range(&mc, k, j).map_err(|e| e.to_string())?;
        let floor = theorem_range(k as i64, j as i64);
        ensure(f >= floor.into(), || format!("{mc:?} k={k} j={j}: {f} < {floor}"))?;
        let r = rng.gen_range(1..=3);
        let g = stability_range(&puncture(&mc, r), k, j).map_err(|e| e.to_string())?;
        ensure(f == g, || format!("{mc:?}: {r} punctures changed {f} to {g}"))?;
    }
    Ok("50 classes, f ≥ j+k−1 and puncture invariant".into())
}

fn spectral_convergence(rng: &mut ChaCha8Rng) -> Result<String, String> {
    for i in 0..25 {
        let fc = random_filtered_complex(rng, FilteredParams { max_basis: 24, ..FilteredParams::default() });
        let pages = compute_pages_checked(&fc).map_err(|e| e.to_string())?;
        ensure(pages.checks.all(), || format!("instance {i}: {:?}", pages.checks))?;
    }
    Ok("25 filtrations".into())
}

fn comparison(rng: &mut ChaCha8Rng) -> Result<String, String> {
    for i in 0..15 {
        let inst = engineered_comparison(rng).map_err(|e| e.to_string())?;
        let rep = compare_pages(&inst.map, &inst.source, &inst.target, inst.threshold).map_err(|e| e.to_string())?;
        ensure(rep.verdict == Verdict::Confirmed && rep.abutment, || format!("instance {i} ({:?}): {:?}", inst.kind, rep.verdict))?;
    }
    Ok("15 engineered maps confirmed".into())
}

fn certificates(rng: &mut ChaCha8Rng) -> Result<String, String> {
    let mut caught = 0;
    for _ in 0..40 {
        let d = rng.gen_range(2..=6u32);
        let case = *RangeCase::all_for_dimension(d).choose(rng).unwrap();
        let (k, j) = (rng.gen_range(0..=4u32), rng.gen_range(0..=6u32));
        let c = range_certificate(d, k, j, case, 0).map_err(|e| e.to_string())?;
        ensure(c.passed, || format!("d={d} k={k} j={j} {case:?}: {:?}", c.first_failure))?;
        if window_is_tight(d, k, j, &case) {
            let weak = range_certificate(d, k, j, case, 1).unwrap();
            ensure(!weak.passed, || format!("d={d} k={k} j={j} {case:?}: weakened window passed"))?;
            caught += 1;
        }
    }
    Ok(format!("40 certificates, {caught} weakened windows caught"))
}

fn dold_relations(rng: &mut ChaCha8Rng) -> Result<String, String> {
    let top = rng.gen_range(0..=8);
    let sys = DoldSystem::binomial(top);
    let rep = dold_verify(&sys);
    ensure(rep.passed, || format!("binomial P={top}: {:?}", rep.failures().next()))?;
    let sites = rng.gen_range(1..=4);
    let model = if rng.gen_bool(0.5) {
        ConfigurationModel::components(sites, 0)
    } else {
        ConfigurationModel::mixed(sites - 1, 0)
    };
    let sys = DoldSystem::from_model(&model, 4).map_err(|e| e.to_string())?;
    let rep = dold_verify(&sys);
    ensure(rep.passed, || format!("{:?}: {:?}", model.sites, rep.failures().next()))?;
    let c = dold_conclusions(&sys, &rep).map_err(|e| e.to_string())?;
    ensure(c.passed, || format!("{:?}: rank conclusions", model.sites))?;
    Ok(format!("binomial P={top}, model {:?}", model.sites))
}

fn transfer_representatives(rng: &mut ChaCha8Rng) -> Result<String, String> {
    let model = ConfigurationModel::components(rng.gen_range(1..=3), 0);
    let big = rng.gen_range(1..=4);
    let (c, a) = model.ordered_complex(big).map_err(|e| e.to_string())?;
    for small in 0..=big {
        let base = iota(&c, &a, small, big, 8).map_err(|e| e.to_string())?;
        for _ in 0..3 {
            let reps = reselect(&base.representatives, small, rng);
            ensure(is_transversal(&reps, small, big), || format!("{small} < {big}: not a transversal"))?;
            let other = iota_with(&c, &a, small, big, &reps).map_err(|e| e.to_string())?;
            ensure(other.map == base.map, || format!("{small} < {big}: map depends on representatives"))?;
        }
    }
    Ok(format!("{} sites, {big} particles", model.sites.len()))
}

fn coinvariants_commute(rng: &mut ChaCha8Rng) -> Result<String, String> {
    for i in 0..15 {
        let n = rng.gen_range(2..=4);
        let (c, g) = random_equivariant_complex(rng, n, 3).map_err(|e| e.to_string())?;
        let h_co = coinvariants(&c, &g, DEFAULT_ORDER_CAP).map_err(|e| e.to_string())?.complex.homology();
        let (hc, hg) = homology_action(&c, &g).map_err(|e| e.to_string())?;
        let co_h = averaged_dims(&hc, &hg, DEFAULT_ORDER_CAP).map_err(|e| e.to_string())?;
        for d in c.degrees() {
            let (x, y) = (h_co.get(&d).copied().unwrap_or(0), co_h.get(&d).copied().unwrap_or(0));
            ensure(x == y, || format!("instance {i} degree {d}: {x} vs {y}"))?;
        }
    }
    Ok("15 complexes".into())
}

fn random_loop(rng: &mut ChaCha8Rng, lambda: &Partition, d: u32) -> LoopDatum {
    let perms: BTreeMap<u32, Permutation> =
        lambda.multiplicities().into_iter().map(|(m, n)| (m, random_perm(rng, n))).collect();
    let u = (0..lambda.cardinality()).map(|_| if rng.gen_bool(0.5) { Sign::Minus } else { Sign::Plus }).collect();
    LoopDatum::new(lambda.clone(), perms, u, d).expect("shapes match")
}

fn monodromy_signs(rng: &mut ChaCha8Rng) -> Result<String, String> {
    let mut agree = 0;
    for _ in 0..200 {
        let lambda = random_partition(rng, 1, 10);
        let d = rng.gen_range(2..=5);
        let (a, b) = (random_loop(rng, &lambda, d), random_loop(rng, &lambda, d));
        let ab = a.then(&b).map_err(|e| e.to_string())?;
        ensure(s1(&ab) == s1(&a) * s1(&b) && s2(&ab) == s2(&a) * s2(&b), || format!("{lambda}: signs not multiplicative"))?;
        let (oa, ob, oab) = (orientation_chars(&a), orientation_chars(&b), orientation_chars(&ab));
        ensure(oab.0 == oa.0 * ob.0 && oab.1 == oa.1 * ob.1, || format!("{lambda}: characters not multiplicative"))?;
        let (pa, pb, pab) = (monodromy_pair(&a), monodromy_pair(&b), monodromy_pair(&ab));
        ensure(pab.weighted == pa.weighted * pb.weighted, || format!("{lambda}: weighted system not multiplicative"))?;
        match odd_move_agreement(&a) {
            Agreement::Disagree => return Err(format!("{lambda} d={d}: odd-move loop disagrees")),
            Agreement::Agree => agree += 1,
            Agreement::NotApplicable => {}
        }
    }
    Ok(format!("200 loop pairs, {agree} odd-move loops agree"))
}

fn plane_assembly(rng: &mut ChaCha8Rng) -> Result<String, String> {
    let oracle = BettiOracle::builtin(DEFAULT_PLANE_CAP);
    let plane = ManifoldClass::plane();
    for _ in 0..4 {
        let lambda = random_partition(rng, 2, 4);
        let t = assemble_e1(&lambda, &plane, &oracle).map_err(|e| e.to_string())?;
        let want: Vec<usize> = (0..=lambda.weight()).filter(|&p| !col(&lambda, p).unwrap().is_empty()).collect();
        ensure(t.columns == want && !t.incomplete, || format!("{lambda}: columns {:?}", t.columns))?;
        let e = euler_consistency(&lambda, &plane, &oracle, None).map_err(|e| e.to_string())?;
        ensure(e.consistent == Some(true), || format!("{lambda}: {e:?}"))?;
    }
    Ok("4 partitions on the plane".into())
}

fn caveats(rng: &mut ChaCha8Rng) -> Result<String, String> {
    for _ in 0..20 {
        let mc = random_class(rng);
        let text = integral_caveats(&mc).join("\n");
        ensure(text.contains("torsion"), || format!("{mc:?}: torsion caveat missing"))?;
        if mc.dim == 2 {
            let open = text.contains("(j+k)/2 applies");
            ensure(open == mc.open_interior, || format!("{mc:?}: integral surface range misreported"))?;
        }
    }
    Ok("20 classes".into())
}

fn properties() -> Vec<Property> {
    vec![
        Property { id: "collapse-layers", description: "stratification layers partition the non-collapses", check: collapse_layers },
        Property { id: "collapse-chain-length", description: "collapse chains from 1^k have length k − |λ|", check: chain_lengths },
        Property { id: "stabilization-window", description: "adding a 1 is a bijection on col_p for 2p ≤ j + k", check: stabilization_window },
        Property { id: "range-formula", description: "f ≥ j + k − 1 and is unchanged by punctures", check: range_formula },
        Property { id: "spectral-convergence", description: "pages are homologies and converge to the ambient homology", check: spectral_convergence },
        Property { id: "page-comparison", description: "a first-page window propagates to the limit", check: comparison },
        Property { id: "range-certificate", description: "certificates pass and weakened tight windows fail", check: certificates },
        Property { id: "dold-relations", description: "stabilization/transfer relations and rank conclusions", check: dold_relations },
        Property { id: "transfer-representatives", description: "the transfer does not depend on coset representatives", check: transfer_representatives },
        Property { id: "coinvariants-commute", description: "coinvariants commute with rational homology", check: coinvariants_commute },
        Property { id: "orientation-signs", description: "sign characters are multiplicative; odd moves agree", check: monodromy_signs },
        Property { id: "plane-first-page", description: "plane first page has the col_p columns and consistent Euler sums", check: plane_assembly },
        Property { id: "integral-caveats", description: "integral-coefficient caveats accompany every class", check: caveats },
    ]
}

pub fn run(seed: u64, verbose: u8, out: &Emitter) -> Result<Failures> {
    let props = properties();
    let items: Vec<ItemReport> = props
        .par_iter()
        .enumerate()
        .map(|(i, prop)| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(i as u64);
            let start = Instant::now();
            let outcome = (prop.check)(&mut rng);
            if verbose > 0 {
                eprintln!("{:<26} {:.2?}", prop.id, start.elapsed());
            }
            let (passed, detail) = match outcome {
                Ok(d) => (true, d),
                Err(e) => (false, e),
            };
            ItemReport { id: prop.id, description: prop.description, stream: i as u64, passed, detail }
        })
        .collect();
    let failures: Failures = items
        .iter()
        .filter(|it| !it.passed)
        .map(|it| format!("{} (seed {seed}, stream {}): {}", it.id, it.stream, it.detail))
        .collect();
    let report = SuiteReport { seed, passed: failures.is_empty(), items };
    let csv = || {
        let mut s = String::from("id,stream,passed,detail\n");
        for it in &report.items {
            let _ = writeln!(s, "{},{},{},\"{}\"", it.id, it.stream, it.passed, it.detail.replace('"', "\"\""));
        }
        s
    };
    out.emit(vec![out.table("suite", &report, Format::Json, csv)?])?;
    Ok(failures)
}
