//! Independent brute-force routes checked against the search-based ones.

mod common;

use std::collections::BTreeSet;

use posetsat::cube::{layer_stream, SubsetMask};
use posetsat::search::{find_in_index, HostIndex};
use posetsat::{
    canonical_form, catalog, contains_induced_copy, cube_width, enumerate_posets, exact_sat_oracle, family_order,
    find_cube_embedding, find_induced_copy, greedy_saturated_family, random_poset, shatters, vc_dimension,
    verify_saturated, Poset, SetFamily, VerifyMode,
};
use proptest::prelude::*;

/// Canonical code by exhaustive relabeling, without any invariant prefilter.
fn brute_canonical(p: &Poset) -> Vec<u16> {
    common::permutations(p.size())
        .into_iter()
        .map(|perm| {
            let q = p.permuted(&perm);
            (0..q.size())
                .map(|i| q.up(i).iter().fold(0u16, |acc, j| acc | 1 << j))
                .collect::<Vec<u16>>()
        })
        .min()
        .unwrap()
}

/// Isomorphism classes of all `k x k` strict relation matrices that are partial orders.
fn brute_force_poset_count(k: usize) -> usize {
    let cells: Vec<(usize, usize)> = (0..k)
        .flat_map(|i| (0..k).filter(move |&j| j != i).map(move |j| (i, j)))
        .collect();
    let mut classes = BTreeSet::new();
    for mask in 0u64..1 << cells.len() {
        let lt = |i: usize, j: usize| {
            i != j && {
                let idx = cells.iter().position(|&c| c == (i, j)).unwrap();
                mask >> idx & 1 == 1
            }
        };
        let antisym = (0..k).all(|i| (0..k).all(|j| !(lt(i, j) && lt(j, i))));
        let trans = (0..k).all(|i| (0..k).all(|j| (0..k).all(|l| !(lt(i, j) && lt(j, l)) || lt(i, l))));
        if antisym && trans {
            let p = Poset::from_strict_order(k, lt).unwrap();
            classes.insert(brute_canonical(&p));
        }
    }
    classes.len()
}

#[test]
fn enumeration_matches_brute_force_classes() {
    let expected: Vec<usize> = (1..=4).map(brute_force_poset_count).collect();
    assert_eq!(expected, vec![1, 2, 5, 16]);
    for (k, &want) in (1..=4).zip(&expected) {
        assert_eq!(enumerate_posets(k).unwrap().count(), want);
    }
}

#[test]
fn enumeration_size_five_and_six() {
    // Size 5 by brute force over 2^20 relation matrices.
    assert_eq!(brute_force_poset_count(5), 63);
    assert_eq!(enumerate_posets(5).unwrap().count(), 63);
    // OEIS A000112.
    assert_eq!(enumerate_posets(6).unwrap().count(), 318);
}

#[test]
fn enumerated_posets_are_pairwise_non_isomorphic() {
    for k in 1..=5 {
        let codes: Vec<Vec<u16>> = enumerate_posets(k).unwrap().map(|p| brute_canonical(&p)).collect();
        let distinct: BTreeSet<_> = codes.iter().cloned().collect();
        assert_eq!(distinct.len(), codes.len());
    }
}

fn brute_force_width(p: &Poset) -> usize {
    let k = p.size();
    (0u32..1 << k)
        .filter(|&s| {
            (0..k).all(|i| (0..k).all(|j| i == j || s >> i & 1 == 0 || s >> j & 1 == 0 || !p.comparable(i, j)))
        })
        .map(|s| s.count_ones() as usize)
        .max()
        .unwrap()
}

#[test]
fn width_matches_brute_force_antichains() {
    for (name, p) in common::full_population() {
        if p.size() <= 12 {
            assert_eq!(p.width(), brute_force_width(&p), "{name}");
        }
    }
}

#[test]
fn canonical_form_matches_brute_force() {
    for seed in 0..60 {
        let p = random_poset(1 + (seed % 6) as usize, 0.4, seed).unwrap();
        let q = p.permuted(&common::permutations(p.size())[(seed as usize * 7) % (1..=p.size()).product::<usize>()]);
        assert_eq!(canonical_form(&p).unwrap(), canonical_form(&q).unwrap());
        assert_eq!(brute_canonical(&p), brute_canonical(&q));
    }
}

/// Cube-height and cube-width through the generic matcher on explicit
/// layered-cube hosts, with ground `h * |P|` and no coordinate symmetry
/// breaking.
fn generic_height_width(p: &Poset) -> (usize, usize) {
    let k = p.size();
    let embeds = |h: usize, n: usize| {
        let sets: Vec<SubsetMask> = layer_stream(n, 0..=h.min(n)).unwrap().collect();
        let host = Poset::from_strict_order(sets.len(), |i, j| sets[i].strict_subset_of(sets[j])).unwrap();
        find_induced_copy(p, &host, None).unwrap().is_some()
    };
    let h = (0..k).find(|&h| embeds(h, (h * k).max(1))).unwrap();
    let w = (0..=h * k).find(|&n| n >= h && embeds(h, n)).unwrap();
    (h, w)
}

#[test]
fn cube_width_matches_generic_route_on_small_posets() {
    for k in 1..=5 {
        for p in enumerate_posets(k).unwrap() {
            let hw = cube_width(&p).unwrap();
            let (h, w) = if k == 1 { (0, 0) } else { generic_height_width(&p) };
            assert_eq!((hw.cube_height, hw.cube_width), (h, w), "{}", p.to_dsl());
        }
    }
}

#[test]
fn cube_search_matches_brute_force() {
    for k in 1..=4 {
        for p in enumerate_posets(k).unwrap() {
            for ground in 0..=4 {
                for h in 0..=ground {
                    let fast = find_cube_embedding(&p, h, ground).unwrap();
                    if let Some(e) = &fast {
                        assert!(e.is_valid_for(&p));
                        assert!(e.max_image_size() <= h);
                    }
                    assert_eq!(
                        fast.is_some(),
                        common::brute_force_cube_embeds(&p, h, ground),
                        "{} h={h} ground={ground}",
                        p.to_dsl()
                    );
                }
            }
        }
    }
}

#[test]
fn stacked_pairs_brute_force_small() {
    // t = 1, 2 directly over every family of the cube.
    for t in 1..=2 {
        let p = catalog("stacked2", Some(t)).unwrap();
        assert!(!common::brute_force_cube_embeds(&p, 2 * t - 1, 2 * t - 1));
        assert!(common::brute_force_cube_embeds(&p, 2 * t, 2 * t));
    }
    // t = 3 through the generic matcher on the whole cube Q_5 and Q_6.
    let p3 = catalog("stacked2", Some(3)).unwrap();
    let q5 = catalog("boolean", Some(5)).unwrap();
    assert_eq!(find_induced_copy(&p3, &q5, None).unwrap(), None);
    let q6 = catalog("boolean", Some(6)).unwrap();
    assert!(find_induced_copy(&p3, &q6, None).unwrap().is_some());
}

fn random_family(n: usize, density_percent: u64, seed: &mut u64) -> SetFamily {
    let members: Vec<SubsetMask> = (0u64..1 << n)
        .filter(|_| common::lcg(seed) % 100 < density_percent)
        .map(SubsetMask)
        .collect();
    SetFamily::new(n, members).unwrap()
}

fn brute_force_vc(fam: &SetFamily) -> Option<usize> {
    if fam.is_empty() {
        return None;
    }
    (0u64..1 << fam.ground())
        .map(SubsetMask)
        .filter(|&s| {
            let traces: BTreeSet<u64> = fam.members().iter().map(|m| m.bits() & s.bits()).collect();
            traces.len() == 1 << s.len()
        })
        .map(|s| s.len())
        .max()
}

#[test]
fn vc_dimension_matches_brute_force() {
    let mut seed = 11;
    for round in 0..120 {
        let n = 1 + round % 7;
        let fam = random_family(n, [5, 20, 50, 80][round % 4], &mut seed);
        let report = vc_dimension(&fam).unwrap();
        assert_eq!(report.dimension, brute_force_vc(&fam), "{:?}", fam.to_json_members());
        if let Some(w) = report.witness {
            assert!(shatters(&fam, w));
        }
    }
}

/// Greedy with the full (non-incremental) P-free test after every insertion.
fn naive_greedy(p: &Poset, n: usize) -> SetFamily {
    let h = cube_width(p).unwrap().cube_height;
    let mut fam = SetFamily::new(
        n,
        layer_stream(n, 0..=(h.min(n + 1)).saturating_sub(1)).unwrap().collect(),
    )
    .unwrap();
    if h == 0 {
        fam = SetFamily::empty(n).unwrap();
    }
    for set in layer_stream(n, h.min(n + 1)..=n).unwrap() {
        let mut trial = fam.clone();
        trial.insert(set).unwrap();
        let host = family_order(&trial).unwrap();
        if !common::brute_force_contains(p, &host) {
            fam = trial;
        }
    }
    fam
}

#[test]
fn greedy_matches_naive_greedy() {
    for spec in [
        "chain:2",
        "chain:3",
        "antichain:2",
        "antichain:3",
        "diamond",
        "butterfly",
        "fork",
    ] {
        let p = posetsat::catalog_from_str(spec).unwrap();
        for n in 2..=5 {
            let (fast, _) = greedy_saturated_family(&p, n).unwrap();
            assert_eq!(fast, naive_greedy(&p, n), "{spec} n={n}");
        }
    }
}

/// Saturation decided by brute force over every external set.
fn brute_force_saturated(p: &Poset, fam: &SetFamily) -> bool {
    let free = fam.is_empty() || !common::brute_force_contains(p, &family_order(fam).unwrap());
    free && (0u64..1 << fam.ground())
        .map(SubsetMask)
        .filter(|s| !fam.contains(*s))
        .all(|s| {
            let mut trial = fam.clone();
            trial.insert(s).unwrap();
            common::brute_force_contains(p, &family_order(&trial).unwrap())
        })
}

#[test]
fn verification_matches_brute_force() {
    let mut seed = 5;
    let patterns = ["chain:2", "antichain:2", "fork", "diamond"];
    for round in 0..80 {
        let n = 2 + round % 3;
        let p = posetsat::catalog_from_str(patterns[round % 4]).unwrap();
        let fam = random_family(n, [10, 25, 40][round % 3], &mut seed);
        if fam.is_empty() {
            continue;
        }
        let r = verify_saturated(&p, &fam, VerifyMode::Full).unwrap();
        assert_eq!(r.p_free && r.saturated, brute_force_saturated(&p, &fam));
    }
}

#[test]
fn oracle_minimum_is_a_true_minimum_for_n_two() {
    // Exhaustive over all 16 families of Q_2.
    for spec in ["chain:1", "chain:2", "chain:3", "antichain:2", "fork", "diamond"] {
        let p = posetsat::catalog_from_str(spec).unwrap();
        let best = (0u32..16)
            .filter_map(|bits| {
                let members = (0..4)
                    .filter(|i| bits >> i & 1 == 1)
                    .map(|i| SubsetMask(i as u64))
                    .collect();
                let fam = SetFamily::new(2, members).unwrap();
                brute_force_saturated(&p, &fam).then_some(fam.len())
            })
            .min()
            .unwrap();
        assert_eq!(exact_sat_oracle(&p, 2).unwrap().0, best, "{spec}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(150))]

    #[test]
    fn matcher_agrees_with_brute_force(
        pk in 1usize..=5, pd in 0.0f64..1.0, ps in any::<u64>(),
        hk in 1usize..=9, hd in 0.0f64..1.0, hs in any::<u64>(),
    ) {
        let pattern = random_poset(pk, pd, ps).unwrap();
        let host = random_poset(hk, hd, hs).unwrap();
        let found = find_induced_copy(&pattern, &host, None).unwrap();
        if let Some(image) = &found {
            prop_assert!(posetsat::search::is_induced_copy(&pattern, &host, image));
        }
        prop_assert_eq!(found.is_some(), common::brute_force_contains(&pattern, &host));
    }

    #[test]
    fn family_host_agrees_with_poset_host(n in 2usize..=5, pct in 10u64..70, seed in any::<u64>(), pk in 2usize..=4, ps in any::<u64>()) {
        let mut s = seed;
        let fam = random_family(n, pct, &mut s);
        prop_assume!(!fam.is_empty());
        let p = random_poset(pk, 0.4, ps).unwrap();
        let via_family = contains_induced_copy(&fam, &p).unwrap();
        let via_poset = find_in_index(&p, &HostIndex::from_poset(&family_order(&fam).unwrap()), None).unwrap();
        prop_assert_eq!(via_family.is_some(), via_poset.is_some());
    }
}
