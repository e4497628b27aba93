use std::collections::{BTreeMap, BTreeSet};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::*;
use crate::exactlin::{q, ChainComplex, ChainMap, Direction, QMatrix};
use crate::random::{random_filtered_complex, FilteredParams};

fn circle() -> ChainComplex {
    // Two vertices, two edges.
    let d1 = QMatrix::from_i64_rows(&[vec![-1, -1], vec![1, 1]]);
    ChainComplex::new(0, vec![2, 2], Direction::Chain, BTreeMap::from([(1, d1)])).unwrap()
}

/// Cone of the identity on `a`: degree n holds `a_n ⊕ a_{n−1}` (chain).
fn identity_cone(a: &ChainComplex) -> (ChainComplex, Vec<i64>) {
    let lo = a.lo();
    let hi = a.hi() + 1;
    let dims: Vec<usize> = (lo..=hi).map(|n| a.dim(n) + a.dim(n - 1)).collect();
    let mut diffs = BTreeMap::new();
    for n in lo..=hi {
        let (top, bot) = (a.dim(n), a.dim(n - 1));
        let (ttop, tbot) = (a.dim(n - 1), a.dim(n - 2));
        let mut trips = Vec::new();
        for (r, c, v) in a.d(n).triplets() {
            trips.push((r, c, v.clone()));
        }
        for i in 0..bot {
            trips.push((i, top + i, q(1)));
        }
        for (r, c, v) in a.d(n - 1).triplets() {
            trips.push((ttop + r, top + c, -v.clone()));
        }
        diffs.insert(n, QMatrix::from_triplets(ttop + tbot, top + bot, trips).unwrap());
    }
    let c = ChainComplex::new(lo, dims, Direction::Chain, diffs).unwrap();
    let mut levels = Vec::new();
    for n in lo..=hi {
        levels.extend(std::iter::repeat_n(0, a.dim(n)));
        levels.extend(std::iter::repeat_n(1, a.dim(n - 1)));
    }
    (c, levels)
}

#[test]
fn trivial_filtration_pages_equal_homology() {
    let fc = FilteredComplex::trivial(circle());
    let pages = compute_pages(&fc).unwrap();
    assert!(pages.checks.all());
    assert_eq!(pages.page(1).dim(0, 0), 1);
    assert_eq!(pages.page(1).dim(0, 1), 1);
    assert_eq!(pages.page(1).cells, pages.infinity().cells);
}

#[test]
fn mapping_cone_degenerates_at_second_page() {
    let (c, levels) = identity_cone(&circle());
    let fc = FilteredComplex::from_levels(c, &levels).unwrap();
    let pages = compute_pages(&fc).unwrap();
    assert!(pages.checks.all());
    assert!(pages.page(1).cells.values().sum::<usize>() > 0);
    assert!(pages.page(2).cells.is_empty());
    assert!(pages.infinity().cells.is_empty());
    assert!(pages.target.values().all(|&b| b == 0));
}

#[test]
fn random_filtered_complexes_converge() {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    for i in 0..40 {
        let direction = if i % 2 == 0 { Direction::Cochain } else { Direction::Chain };
        let fc = random_filtered_complex(&mut rng, FilteredParams { direction, ..Default::default() });
        let pages = compute_pages(&fc).unwrap();
        assert!(pages.checks.all(), "instance {i}: {:?}", pages.checks);
        for w in pages.pages.windows(2) {
            for (cell, d) in &w[1].cells {
                assert!(*d <= w[0].cells.get(cell).copied().unwrap_or(0));
            }
        }
    }
}

#[test]
fn higher_differentials_occur() {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let mut seen = false;
    for _ in 0..60 {
        let fc = random_filtered_complex(&mut rng, FilteredParams::default());
        let pages = compute_pages(&fc).unwrap();
        if pages.pages.iter().any(|p| p.r >= 2 && !p.differentials.is_empty()) {
            seen = true;
        }
    }
    assert!(seen, "generator never produced a d_r with r ≥ 2");
}

#[test]
fn cohomological_bidegree() {
    assert_eq!(Convention::Cohomological.bidegree(2), (-2, 3));
    assert_eq!(Convention::Homological.bidegree(2), (-2, 1));
}

#[test]
fn filtration_must_be_closed() {
    let c = circle();
    // Edge 0 in step 0 but its boundary vertices only in step 1.
    let levels = [1, 1, 0, 1];
    assert!(matches!(FilteredComplex::from_levels(c, &levels), Err(crate::Error::InvalidFiltration(_))));
}

#[test]
fn les_extremes() {
    let c = circle();
    let all: BTreeSet<usize> = (0..4).collect();
    let empty = FilteredComplex::new(c.clone(), 0, vec![BTreeSet::new(), all.clone()]).unwrap();
    let r = two_step_les(&empty).unwrap();
    assert!(r.exact && r.composites_vanish);
    assert!(r.degrees.iter().all(|d| d.dim_sub == 0 && d.rank_projection == d.dim_total));
    let full = FilteredComplex::new(c, 0, vec![all.clone(), all]).unwrap();
    let r = two_step_les(&full).unwrap();
    assert!(r.exact && r.degrees.iter().all(|d| d.dim_quotient == 0 && d.rank_restriction == d.dim_total));
}

#[test]
fn les_of_cone_pair() {
    // X = cone on the circle (a disk), U = the boundary circle.
    let d1 = QMatrix::from_i64_rows(&[vec![-1, -1, 1], vec![1, 1, 0], vec![0, 0, -1]]);
    let d2 = QMatrix::from_i64_rows(&[vec![1], vec![-1], vec![0]]);
    // Edges 0,1 between vertices 0,1; edge 2 from apex 2 to vertex 0 … disk
    // glued along e0 − e1.
    let c = ChainComplex::new(0, vec![3, 3, 1], Direction::Chain, BTreeMap::from([(1, d1), (2, d2)])).unwrap();
    let levels = [0, 0, 1, 0, 0, 1, 1];
    let fc = FilteredComplex::from_levels(c, &levels).unwrap();
    let r = two_step_les(&fc).unwrap();
    assert!(r.exact && r.composites_vanish);
    let deg1 = r.degrees.iter().find(|d| d.degree == 1).unwrap();
    assert_eq!(deg1.dim_sub, 1);
    assert_eq!(deg1.dim_total, 0);
}

#[test]
fn les_random_two_step() {
    let mut rng = ChaCha8Rng::seed_from_u64(77);
    for _ in 0..20 {
        let fc = random_filtered_complex(
            &mut rng,
            FilteredParams { max_steps: 2, max_basis: 20, ..Default::default() },
        );
        if fc.len() != 2 {
            continue;
        }
        let r = two_step_les(&fc).unwrap();
        assert!(r.exact && r.composites_vanish);
    }
}

#[test]
fn identity_comparison_confirms_everywhere() {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let fc = random_filtered_complex(&mut rng, FilteredParams::default());
    let id = ChainMap::identity(fc.ambient());
    for s in -1..5 {
        let rep = compare_pages(&id, &fc, &fc, s).unwrap();
        assert_eq!(rep.verdict, Verdict::Confirmed);
        assert!(rep.pages.iter().all(|p| p.cells.iter().all(CellMap::bijective)));
    }
}

#[test]
fn truncation_inclusion_comparison() {
    // K = part of C in degrees ≥ s−1 is a cochain subcomplex; its inclusion
    // satisfies the first-page hypothesis at s.
    let mut rng = ChaCha8Rng::seed_from_u64(31);
    for _ in 0..10 {
        let fc = random_filtered_complex(&mut rng, FilteredParams::default());
        let c = fc.ambient();
        let s = rng.gen_range(c.lo()..=c.hi() + 1);
        let keep: Vec<i64> = c.degrees().filter(|&n| n >= s - 1).collect();
        let lo = keep.first().copied().unwrap_or(c.hi() + 1);
        let dims: Vec<usize> = keep.iter().map(|&n| c.dim(n)).collect();
        let diffs = keep.iter().map(|&n| (n, c.d(n))).collect();
        let k = ChainComplex::new(lo, dims, Direction::Cochain, diffs).unwrap();
        let levels: Vec<i64> = keep
            .iter()
            .flat_map(|&n| (0..c.dim(n)).map(move |i| (n, i)))
            .map(|(n, i)| fc.local_level(n, i))
            .collect();
        let kf = FilteredComplex::from_levels(k.clone(), &levels).unwrap();
        let f = ChainMap::new(keep.iter().map(|&n| (n, QMatrix::identity(c.dim(n)))).collect());
        let rep = compare_pages(&f, &kf, &fc, s).unwrap();
        assert!(rep.hypothesis);
        assert_eq!(rep.verdict, Verdict::Confirmed);
        assert!(rep.abutment);
    }
}

#[test]
fn non_filtered_map_rejected() {
    let (c, levels) = identity_cone(&circle());
    let fc = FilteredComplex::from_levels(c.clone(), &levels).unwrap();
    let flipped: Vec<i64> = levels.iter().map(|l| 1 - l).collect();
    let rev = FilteredComplex::from_levels(c.clone(), &flipped);
    // Either the flipped filtration is not closed or the identity does not
    // preserve it.
    if let Ok(rev) = rev {
        let id = ChainMap::identity(&c);
        assert!(matches!(compare_pages(&id, &fc, &rev, 0), Err(crate::Error::NotFilteredMap(_))));
    }
}

#[test]
fn constant_point_totalizes_to_point() {
    let pt = ChainComplex::zero_differential(0, vec![1], Direction::Chain);
    let ss = SemisimplicialComplex::constant(&pt, 2).unwrap();
    let tot = ss.totalize(false).unwrap();
    let h = tot.complex.homology();
    assert_eq!(h[&0], 1);
    assert_eq!(h[&1] + h[&2], 0);
}

#[test]
fn constant_object_augmentation_is_quasi_iso() {
    let base = circle();
    let top = 4;
    let levels = vec![base.clone(); top + 1];
    let faces = (0..=top).map(|p| if p == 0 { Vec::new() } else { vec![ChainMap::identity(&base); p + 1] }).collect();
    let ss = SemisimplicialComplex::new(levels, faces, Some((base.clone(), ChainMap::identity(&base)))).unwrap();
    let aug = ss.totalize(true).unwrap().complex;
    assert!(aug.homology().values().all(|&b| b == 0));
    let plain = ss.totalize(false).unwrap().complex.homology();
    assert_eq!(plain.get(&0), Some(&1));
    assert_eq!(plain.get(&1), Some(&1));
    assert!(plain.iter().filter(|(n, _)| **n > 1).all(|(_, b)| *b == 0));
}

#[test]
fn one_level_augmented_is_mapping_cone() {
    // A_0 = circle, A_{-1} = point, ε = augmentation on vertices.
    let base = ChainComplex::zero_differential(0, vec![1], Direction::Chain);
    let eps = ChainMap::new(BTreeMap::from([(0, QMatrix::from_i64_rows(&[vec![1, 1]]))]));
    let ss = SemisimplicialComplex::new(vec![circle()], vec![Vec::new()], Some((base.clone(), eps.clone()))).unwrap();
    let tot = ss.totalize(true).unwrap();
    let fc = tot.filtered().unwrap();
    let les = two_step_les(&fc).unwrap();
    assert!(les.exact);
    for row in &les.degrees {
        let n = row.degree;
        let eps_rank = eps.on_homology(n, &circle(), &base).map(|m| m.rank()).unwrap_or(0);
        assert_eq!(row.rank_connecting, eps_rank, "degree {n}");
    }
}

#[test]
fn realization_first_page_is_levelwise_homology() {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    // Semisimplicial set: ordered simplices of a random graph's flag set,
    // tensored with the circle.
    let edges: Vec<(usize, usize)> =
        (0..5).flat_map(|a| (a + 1..5).map(move |b| (a, b))).filter(|_| rng.gen_bool(0.6)).collect();
    let data = FlagData::from_edges(5, &edges).unwrap();
    let (flag_ss, simplices) = data.semisimplicial(2, DEFAULT_SIMPLEX_CAP).unwrap();
    let b = circle();
    let scale = |m: &QMatrix| -> ChainMap {
        // m ⊗ id_b, laid out block by block.
        let mut maps = BTreeMap::new();
        for n in b.degrees() {
            let k = b.dim(n);
            let trips = m.triplets().flat_map(|(r, c, v)| (0..k).map(move |i| (r * k + i, c * k + i, v.clone())));
            maps.insert(n, QMatrix::from_triplets(m.rows() * k, m.cols() * k, trips.collect::<Vec<_>>()).unwrap());
        }
        ChainMap::new(maps)
    };
    let level = |count: usize| {
        let dims: Vec<usize> = b.dims().iter().map(|d| d * count).collect();
        let mut diffs2 = BTreeMap::new();
        for n in b.degrees() {
            let d = b.d(n);
            let (kr, kc) = (d.rows(), d.cols());
            let trips = (0..count)
                .flat_map(|s| d.triplets().map(move |(r, c, v)| (s * kr + r, s * kc + c, v.clone())).collect::<Vec<_>>());
            diffs2.insert(n, QMatrix::from_triplets(kr * count, kc * count, trips.collect::<Vec<_>>()).unwrap());
        }
        ChainComplex::new(0, dims, Direction::Chain, diffs2).unwrap()
    };
    let levels: Vec<ChainComplex> = simplices.iter().map(|s| level(s.len())).collect();
    let faces: Vec<Vec<ChainMap>> = (0..simplices.len())
        .map(|p| {
            if p == 0 {
                Vec::new()
            } else {
                (0..=p).map(|i| scale(&flag_ss.face(p, i).at(0, flag_ss.level(p), flag_ss.level(p - 1)))).collect()
            }
        })
        .collect();
    let ss = SemisimplicialComplex::new(levels.clone(), faces, None).unwrap();
    let pages = ss.realization_ss(false).unwrap();
    assert!(pages.checks.all());
    for (p, a) in levels.iter().enumerate() {
        let h = a.homology();
        for (qd, bq) in h {
            assert_eq!(pages.page(1).dim(p as i64, qd), bq);
        }
    }
}

#[test]
fn face_identity_violation_detected() {
    let pt = ChainComplex::zero_differential(0, vec![1], Direction::Chain);
    let two = ChainComplex::zero_differential(0, vec![2], Direction::Chain);
    let id = ChainMap::identity(&pt);
    let levels = vec![two.clone(), pt.clone(), pt.clone()];
    let proj0 = ChainMap::new(BTreeMap::from([(0, QMatrix::from_i64_rows(&[vec![1], vec![0]]))]));
    let proj1 = ChainMap::new(BTreeMap::from([(0, QMatrix::from_i64_rows(&[vec![0], vec![1]]))]));
    // d_0 d_1 = d_0 d_0 needs proj0 = proj1 on level 2 → fails.
    let faces = vec![Vec::new(), vec![proj0.clone(), proj1.clone()], vec![id.clone(), id.clone(), id]];
    assert!(SemisimplicialComplex::new(levels, faces, None).is_err());
}

#[test]
fn complete_flag_set_is_highly_connected() {
    let rep = flag_set_check(&FlagData::complete(4), 3, DEFAULT_SIMPLEX_CAP).unwrap();
    assert_eq!(rep.simplices_per_level, vec![4, 12, 24, 24]);
    assert_eq!(rep.reduced_betti, vec![0, 0, 0]);
    assert_eq!(rep.vanishes_through, 2);
    assert_eq!(rep.hub_inclusion_null, Some(true));
}

#[test]
fn two_isolated_vertices() {
    let rep = flag_set_check(&FlagData::new(2, &[]).unwrap(), 1, DEFAULT_SIMPLEX_CAP).unwrap();
    assert_eq!(rep.betti, vec![2]);
    assert_eq!(rep.reduced_betti, vec![1]);
    assert!(rep.hubs.is_empty());
}

#[test]
fn star_is_connected_and_hub_inclusion_is_null() {
    let rep = flag_set_check(&FlagData::star(3), 1, DEFAULT_SIMPLEX_CAP).unwrap();
    assert_eq!(rep.vanishes_through, 0);
    assert_eq!(rep.hubs, vec![0]);
    assert_eq!(rep.hub_inclusion_null, Some(true));
    // Ordered tuples: each leaf edge appears in both orders, so loops appear.
    let rep2 = flag_set_check(&FlagData::star(3), 2, DEFAULT_SIMPLEX_CAP).unwrap();
    assert_eq!(rep2.reduced_betti, vec![0, 3]);
    assert_eq!(rep2.hub_inclusion_null, Some(true));
}

#[test]
fn asymmetric_relation_rejected() {
    assert!(matches!(FlagData::new(3, &[(0, 1)]), Err(crate::Error::InvalidFlag(_))));
    assert!(matches!(FlagData::new(3, &[(1, 1)]), Err(crate::Error::InvalidFlag(_))));
}

#[test]
fn domination_report() {
    let rep = flag_set_check(&FlagData::complete(4), 2, DEFAULT_SIMPLEX_CAP).unwrap();
    assert_eq!(rep.domination, vec![(1, true), (2, true), (3, true)]);
    let rep = flag_set_check(&FlagData::star(3), 1, DEFAULT_SIMPLEX_CAP).unwrap();
    assert_eq!(rep.domination, vec![(1, true), (2, false)]);
}

#[test]
fn filtered_json_round_trip() {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let fc = random_filtered_complex(&mut rng, FilteredParams::default());
    let text = serde_json::to_string(&FilteredJson::from_filtered(&fc)).unwrap();
    let back: FilteredJson = serde_json::from_str(&text).unwrap();
    assert_eq!(back.to_filtered().unwrap(), fc);
}

#[test]
fn pages_serialize_cells_as_triples() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let fc = random_filtered_complex(&mut rng, FilteredParams::default());
    let pages = compute_pages(&fc).unwrap();
    let v = serde_json::to_value(&pages).unwrap();
    let first = v["pages"][0]["cells"].as_array().unwrap();
    assert_eq!(first.len(), pages.page(1).cells.len());
    for cell in first {
        let (p, q, d) = (cell[0].as_i64().unwrap(), cell[1].as_i64().unwrap(), cell[2].as_u64().unwrap());
        assert_eq!(pages.page(1).dim(p, q), d as usize);
    }
}

#[test]
fn semisimplicial_json_round_trip() {
    let base = circle();
    let levels = vec![base.clone(); 3];
    let faces = (0..3).map(|p| if p == 0 { Vec::new() } else { vec![ChainMap::identity(&base); p + 1] }).collect();
    let ss = SemisimplicialComplex::new(levels, faces, Some((base.clone(), ChainMap::identity(&base)))).unwrap();
    let text = serde_json::to_string(&SemisimplicialJson::from_semisimplicial(&ss)).unwrap();
    let back: SemisimplicialJson = serde_json::from_str(&text).unwrap();
    let ss2 = back.to_semisimplicial().unwrap();
    assert_eq!(ss2.totalize(true).unwrap().complex.homology(), ss.totalize(true).unwrap().complex.homology());
    let broken = r#"{"levels":[{"dims":[1]},{"dims":[1]}],"faces":[[]]}"#;
    let parsed: SemisimplicialJson = serde_json::from_str(broken).unwrap();
    assert!(parsed.to_semisimplicial().is_err());
}

#[test]
fn compare_json_round_trip() {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let inst = crate::random::engineered_comparison(&mut rng).unwrap();
    let j = CompareJson::from_parts(&inst.map, &inst.source, &inst.target, inst.threshold);
    let back: CompareJson = serde_json::from_str(&serde_json::to_string(&j).unwrap()).unwrap();
    let (f, src, dst) = back.to_parts().unwrap();
    let a = compare_pages(&f, &src, &dst, back.threshold).unwrap();
    let b = compare_pages(&inst.map, &inst.source, &inst.target, inst.threshold).unwrap();
    assert_eq!(a.verdict, b.verdict);
    assert_eq!(a.pages.len(), b.pages.len());
}
