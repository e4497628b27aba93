//! Acceptance battery. Prints one PASS/FAIL line per criterion with its
//! elapsed time against a fixed budget, and exits nonzero on any failure.

use std::collections::{BTreeMap, BTreeSet};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use symcomp_core::exactlin::{averaged_dims, coinvariants, homology_action, rank, DEFAULT_ORDER_CAP};
use symcomp_core::monodromy::{all_data, monodromy_pair, odd_move_agreement, Agreement, LoopDatum, Sign};
use symcomp_core::partitions::{col, collapse_chain_lengths, enumerate_partitions, stab_collapse_map, Partition};
use symcomp_core::random::{engineered_comparison, random_equivariant_complex, random_filtered_complex, FilteredParams};
use symcomp_core::ranges::{integral_caveats, puncture, stability_range, ManifoldClass, RangeCase};
use symcomp_core::spectral::{compare_pages, compute_pages, Verdict};
use symcomp_core::strata::{
    assemble_e1, euler_consistency, plane_oracle, range_certificate, window_is_tight, BettiOracle, DEFAULT_PLANE_CAP,
};
use symcomp_core::transfer::{dold_conclusions, dold_verify, ConfigurationModel, DoldSystem};
use symcomp_core::{Permutation, Q};

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn part(s: &str) -> Partition {
    s.parse().expect("partition literal")
}

fn c01_col_table() -> Outcome {
    let lambda = part("1+3");
    let expected: [&[&str]; 3] = [&["1+1+1+1"], &["1+1+2"], &["2+2"]];
    for (p, want) in expected.iter().enumerate() {
        let got: BTreeSet<Partition> = col(&lambda, p).map_err(|e| e.to_string())?;
        let want: BTreeSet<Partition> = want.iter().map(|s| part(s)).collect();
        ensure(got == want, || format!("col_{p}(1+3) = {got:?}"))?;
    }
    for p in 3..=6 {
        ensure(col(&lambda, p).unwrap().is_empty(), || format!("col_{p}(1+3) nonempty"))?;
    }
    ensure(!col(&lambda, 2).unwrap().contains(&lambda), || "1+3 in col_2".into())?;
    Ok("col_0..col_2 match, col_{≥3} empty".into())
}

fn c02_chain_lengths() -> Outcome {
    let mut count = 0;
    for k in 1..=8 {
        let lengths = collapse_chain_lengths(k).map_err(|e| e.to_string())?;
        let all = enumerate_partitions(k).unwrap();
        ensure(lengths.len() == all.len(), || format!("k={k}: {} reachable of {}", lengths.len(), all.len()))?;
        for (lambda, ls) in &lengths {
            let want = BTreeSet::from([k - lambda.cardinality()]);
            ensure(*ls == want, || format!("{lambda}: chain lengths {ls:?}"))?;
            count += 1;
        }
    }
    Ok(format!("{count} partitions, all chains of length k − |λ|"))
}

fn c03_stabilization_window() -> Outcome {
    let mut checked = 0;
    let mut witnesses = 0;
    for k in 1..=6 {
        for lambda in enumerate_partitions(k).unwrap() {
            for j in 0..=6 {
                for p in 0..=(j + k) {
                    let r = stab_collapse_map(&lambda, j, p).map_err(|e| e.to_string())?;
                    ensure(r.well_defined && r.injective, || format!("{lambda} j={j} p={p}: not an injection"))?;
                    if 2 * p <= j + k {
                        ensure(r.bijective(), || format!("{lambda} j={j} p={p}: missed {:?}", r.missed))?;
                        checked += 1;
                    } else if !r.surjective {
                        ensure(r.missed_are_one_free, || format!("{lambda} j={j} p={p}: missed element has a 1"))?;
                        witnesses += 1;
                    }
                }
            }
        }
    }
    let r = stab_collapse_map(&part("3"), 0, 2).unwrap();
    ensure(r.missed == vec![part("2+2")], || format!("λ=3 j=0 p=2 missed {:?}", r.missed))?;
    ensure(witnesses > 0, || "no non-surjective witness outside the window".into())?;
    Ok(format!("{checked} bijections in window, {witnesses} one-free witnesses outside"))
}

fn c04_range_formula() -> Outcome {
    let sphere3 = ManifoldClass { dim: 3, orientable: true, open_interior: false, connectivity: 0, punctures: 0 };
    let torus = ManifoldClass { dim: 2, orientable: true, open_interior: false, connectivity: 0, punctures: 0 };
    let mobius = ManifoldClass { dim: 2, orientable: false, open_interior: true, connectivity: 0, punctures: 0 };
    let conn5 = ManifoldClass { dim: 5, orientable: true, open_interior: true, connectivity: 2, punctures: 0 };
    let r = |n: i64, d: i64| Q::new(n.into(), d.into());
    // hand substitution of each line of the formula, taking the max
    let cases: Vec<(ManifoldClass, Box<dyn Fn(i64) -> Q>)> = vec![
        (sphere3, Box::new(move |n| r(n, 1))),
        (torus, Box::new(move |n| r(n - 1, 1))),
        (mobius, Box::new(move |n| r(n, 1))),
        // min(a+1, d/2) = min(3, 5/2) = 5/2
        (conn5, Box::new(move |n| std::cmp::max(r(n, 1), r(5 * n - 2, 2)))),
    ];
    let mut cells = 0;
    for (mc, hand) in &cases {
        for k in 1..=4u64 {
            for j in 0..=8u64 {
                let n = (j + k) as i64;
                let f = stability_range(mc, k, j).map_err(|e| e.to_string())?;
                let f = Q::new((*f.numer()).into(), (*f.denom()).into());
                ensure(f == hand(n), || format!("{mc:?} k={k} j={j}: {f} vs {}", hand(n)))?;
                ensure(f >= r(n - 1, 1), || format!("{mc:?} k={k} j={j}: below j+k−1"))?;
                for punct in 1..=3 {
                    let g = stability_range(&puncture(mc, punct), k, j).unwrap();
                    ensure(g == stability_range(mc, k, j).unwrap(), || format!("{mc:?}: puncture changed f"))?;
                }
                cells += 1;
            }
        }
    }
    Ok(format!("{cells} grid cells match hand values"))
}

fn ambient_betti_by_integer_rank(c: &symcomp_core::ChainComplex) -> BTreeMap<i64, usize> {
    let step = c.direction().step();
    c.degrees()
        .map(|n| {
            let out = rank(&c.d(n));
            let inc = if c.in_range(n - step) { rank(&c.d(n - step)) } else { 0 };
            (n, c.dim(n) - out - inc)
        })
        .collect()
}

fn c05_spectral_soundness() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let mut max_pages = 0;
    for i in 0..100 {
        let fc = random_filtered_complex(&mut rng, FilteredParams::default());
        ensure(fc.ambient().total_dim() <= 40 && fc.len() <= 5, || format!("instance {i} too large"))?;
        let pages = compute_pages(&fc).map_err(|e| e.to_string())?;
        ensure(pages.checks.dd_zero, || format!("instance {i}: d∘d ≠ 0"))?;
        ensure(pages.checks.next_is_homology, || format!("instance {i}: page is not homology of previous"))?;
        let betti = ambient_betti_by_integer_rank(fc.ambient());
        for (&n, &b) in &betti {
            ensure(pages.infinity().total(n) == b, || {
                format!("instance {i} degree {n}: E∞ total {} vs b = {b}", pages.infinity().total(n))
            })?;
        }
        max_pages = max_pages.max(pages.pages.len());
    }
    Ok(format!("100 instances converge, up to {max_pages} pages"))
}

fn c06_comparison() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    let mut kinds = BTreeMap::new();
    for i in 0..50 {
        let inst = engineered_comparison(&mut rng).map_err(|e| e.to_string())?;
        let rep = compare_pages(&inst.map, &inst.source, &inst.target, inst.threshold).map_err(|e| e.to_string())?;
        ensure(rep.hypothesis, || format!("instance {i} ({:?}): hypothesis fails", inst.kind))?;
        ensure(rep.verdict == Verdict::Confirmed, || format!("instance {i} ({:?}): {:?}", inst.kind, rep.verdict))?;
        ensure(rep.abutment, || format!("instance {i}: ambient homology map outside window"))?;
        *kinds.entry(format!("{:?}", inst.kind)).or_insert(0) += 1;
    }
    Ok(format!("50 instances confirmed {kinds:?}"))
}

fn c07_range_certificate() -> Outcome {
    let (mut passed, mut detected, mut loose) = (0, 0, 0);
    for d in [2u32, 3, 4, 6] {
        for case in RangeCase::all_for_dimension(d) {
            for k in 0..=4 {
                for j in 0..=6 {
                    let c = range_certificate(d, k, j, case, 0).map_err(|e| e.to_string())?;
                    ensure(c.passed, || format!("d={d} k={k} j={j} {case:?}: {:?}", c.first_failure))?;
                    passed += 1;
                    let weak = range_certificate(d, k, j, case, 1).unwrap();
                    if window_is_tight(d, k, j, &case) {
                        ensure(!weak.passed, || format!("d={d} k={k} j={j} {case:?}: weakened window passed"))?;
                        detected += 1;
                    } else {
                        loose += 1;
                    }
                }
            }
        }
    }
    Ok(format!("{passed} certificates; {detected} weakened windows caught, {loose} non-tight skipped"))
}

fn factorial(n: usize) -> i64 {
    (1..=n as i64).product()
}

fn c08_dold() -> Outcome {
    for top in 0..=10 {
        let sys = DoldSystem::binomial(top);
        let rep = dold_verify(&sys);
        ensure(rep.passed, || format!("binomial P={top}: {:?}", rep.failures().next()))?;
        ensure(dold_conclusions(&sys, &rep).unwrap().passed, || format!("binomial P={top}: conclusions"))?;
    }
    let mut models = Vec::new();
    for s in 1..=5 {
        models.push(ConfigurationModel::components(s, 0));
    }
    for r in 1..=4 {
        models.push(ConfigurationModel::mixed(r, 0));
    }
    for model in &models {
        let sys = DoldSystem::from_model(model, 4).map_err(|e| e.to_string())?;
        let rep = dold_verify(&sys);
        ensure(rep.passed, || format!("{:?}: {:?}", model.sites, rep.failures().next()))?;
        for p in 0..=4 {
            for m in 0..=p {
                let mut chain = symcomp_core::QMatrix::identity(sys.dims()[p]);
                for s in (m..p).rev() {
                    chain = sys.theta(s, s + 1).mul(&chain);
                }
                let want = sys.theta(m, p).scaled(&Q::from_integer(factorial(p - m).into()));
                ensure(chain == want, || format!("{:?}: factorial identity m={m} p={p}", model.sites))?;
            }
        }
        let c = dold_conclusions(&sys, &rep).map_err(|e| e.to_string())?;
        ensure(c.sigma_injective.iter().all(|&b| b), || format!("{:?}: σ not injective", model.sites))?;
        ensure(c.theta_sigma_iso.iter().all(|&b| b), || format!("{:?}: θσ not invertible", model.sites))?;
        ensure(c.passed, || format!("{:?}: θ not iso where σ iso", model.sites))?;
    }
    let mixed = DoldSystem::from_model(&ConfigurationModel::mixed(2, 0), 4).unwrap();
    let c = dold_conclusions(&mixed, &dold_verify(&mixed)).unwrap();
    ensure(c.theta_iso.iter().any(|t| t.sigma_iso && t.theta_iso), || "no index with σ iso".into())?;
    Ok(format!("binomial P ≤ 10 and {} models with P = 4", models.len()))
}

fn c09_coinvariants() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(314);
    for i in 0..50 {
        let n = rng.gen_range(2..=5);
        let (c, g) = random_equivariant_complex(&mut rng, n, 3).map_err(|e| e.to_string())?;
        let h_co = coinvariants(&c, &g, DEFAULT_ORDER_CAP).map_err(|e| e.to_string())?.complex.homology();
        let (hc, hg) = homology_action(&c, &g).map_err(|e| e.to_string())?;
        let co_h = averaged_dims(&hc, &hg, DEFAULT_ORDER_CAP).map_err(|e| e.to_string())?;
        for d in c.degrees() {
            let (a, b) = (h_co.get(&d).copied().unwrap_or(0), co_h.get(&d).copied().unwrap_or(0));
            ensure(a == b, || format!("instance {i} (n={n}) degree {d}: {a} vs {b}"))?;
        }
    }
    Ok("50 instances, homology and coinvariants commute".into())
}

fn c10_monodromy() -> Outcome {
    let mut agree = 0;
    for k in 0..=16 {
        for lambda in enumerate_partitions(k).unwrap() {
            if lambda.cardinality() > 4 || lambda.parts().iter().any(|&p| p > 4) {
                continue;
            }
            for d in 2..=5 {
                for ld in all_data(&lambda, d) {
                    match odd_move_agreement(&ld) {
                        Agreement::Agree => agree += 1,
                        Agreement::Disagree => return Err(format!("disagreement on {ld:?}")),
                        Agreement::NotApplicable => {}
                    }
                }
            }
        }
    }
    let swap = LoopDatum::new(
        part("2+2"),
        BTreeMap::from([(2, Permutation::transposition(2, 0, 1))]),
        vec![Sign::Plus; 2],
        3,
    )
    .unwrap();
    let pair = monodromy_pair(&swap);
    ensure(pair.weighted != pair.unweighted, || "even swap with odd d did not disagree".into())?;
    Ok(format!("{agree} odd-move data agree; even swap witnesses disagreement"))
}

fn c11_plane_assembly() -> Outcome {
    let oracle = BettiOracle::builtin(DEFAULT_PLANE_CAP);
    let plane = ManifoldClass::plane();
    for s in ["2", "1+1", "1+2", "1+3", "1+1+2"] {
        let lambda = part(s);
        let t = assemble_e1(&lambda, &plane, &oracle).map_err(|e| e.to_string())?;
        ensure(!t.incomplete, || format!("{s}: incomplete"))?;
        let want: Vec<usize> = (0..=lambda.weight()).filter(|&p| !col(&lambda, p).unwrap().is_empty()).collect();
        let populated: BTreeSet<usize> = t.cells.iter().map(|c| c.p).collect();
        ensure(t.columns == want, || format!("{s}: columns {:?} vs {want:?}", t.columns))?;
        ensure(populated.into_iter().collect::<Vec<_>>() == want, || format!("{s}: populated cells differ"))?;
        let e = euler_consistency(&lambda, &plane, &oracle, None).map_err(|e| e.to_string())?;
        ensure(e.consistent == Some(true), || format!("{s}: {e:?}"))?;
    }
    for j in 0..=2 {
        let lambda = part("2").add_ones(j);
        let reference = plane_oracle(&Partition::ones(j + 2), DEFAULT_PLANE_CAP).map_err(|e| e.to_string())?;
        let e = euler_consistency(&lambda, &plane, &oracle, Some(&reference)).map_err(|e| e.to_string())?;
        ensure(e.consistent == Some(true), || format!("{lambda} vs C_{}: {e:?}", j + 2))?;
    }
    Ok("columns match col_p; Euler characteristics agree, W(1^j 2) = C_{j+2} for j ≤ 2".into())
}

fn c12_caveats() -> Outcome {
    let sphere = ManifoldClass { dim: 2, orientable: true, open_interior: false, connectivity: 0, punctures: 0 };
    let closed = integral_caveats(&sphere).join("\n");
    ensure(closed.contains("Z/(2j+2)Z") && closed.contains("torsion"), || "torsion caveat missing".into())?;
    ensure(closed.contains("does not apply"), || "closed-surface integral caveat missing".into())?;
    let open = integral_caveats(&ManifoldClass::plane()).join("\n");
    ensure(open.contains("(j+k)/2 applies"), || "open-surface integral range missing".into())?;
    ensure(!open.contains("does not apply"), || "open surface wrongly excluded".into())?;
    Ok("caveats emitted for closed and open surfaces".into())
}

fn main() -> ExitCode {
    let criteria: Vec<(&str, u64, fn() -> Outcome)> = vec![
        ("col_p table for 1+3", 1, c01_col_table),
        ("collapse chain lengths, k ≤ 8", 30, c02_chain_lengths),
        ("stabilization of collapse sets", 60, c03_stabilization_window),
        ("range formula grid and punctures", 1, c04_range_formula),
        ("spectral engine on 100 random filtrations", 300, c05_spectral_soundness),
        ("comparison on 50 engineered maps", 300, c06_comparison),
        ("range certificates and weakened windows", 30, c07_range_certificate),
        ("stabilization/transfer algebra", 120, c08_dold),
        ("coinvariants commute with homology", 120, c09_coinvariants),
        ("orientation sign calculus", 60, c10_monodromy),
        ("plane oracle and first-page assembly", 600, c11_plane_assembly),
        ("integral-coefficient caveats", 1, c12_caveats),
    ];
    let mut failures = 0;
    for (i, (name, budget, run)) in criteria.into_iter().enumerate() {
        let start = Instant::now();
        let outcome = run();
        let elapsed = start.elapsed();
        let over = elapsed > Duration::from_secs(budget);
        let (status, detail) = match (&outcome, over) {
            (Ok(d), false) => ("PASS", d.clone()),
            (Ok(d), true) => ("FAIL", format!("{d}; over budget")),
            (Err(e), _) => ("FAIL", e.clone()),
        };
        if status == "FAIL" {
            failures += 1;
        }
        println!("{status} [{:>2}] {name} ({:.2?} / {budget}s): {detail}", i + 1, elapsed);
    }
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        println!("{failures} criteria failed");
        ExitCode::FAILURE
    }
}
