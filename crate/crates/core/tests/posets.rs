use std::collections::BTreeMap;
use std::path::PathBuf;

use proptest::prelude::*;

use ncp::cli_io::{import_decomposition, import_poset};
use ncp::colored_perm::GroupParams;
use ncp::poset_core::*;
use ncp::reflection_order::{build_nc_lattice, DEFAULT_ELEMENT_CAP};
use ncp::sperner_engine::*;
use ncp::{Error, GradedPoset};

fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures").join(format!("{name}.json"))
}

fn poset(name: &str) -> GradedPoset {
    import_poset(&fixture(name)).unwrap().0
}

fn chain(k: usize) -> GradedPoset {
    let covers: Vec<(usize, usize)> = (1..k).map(|i| (i - 1, i)).collect();
    GradedPoset::new((0..k).collect(), &covers, None).unwrap()
}

fn antichain(k: usize) -> GradedPoset {
    GradedPoset::new(vec![0; k], &[], None).unwrap()
}

fn nc(d: usize, n: usize) -> GradedPoset {
    build_nc_lattice(GroupParams::new(d, n).unwrap(), DEFAULT_ELEMENT_CAP).unwrap().to_poset()
}

fn pairs(r: &BitRelation) -> usize {
    (0..r.len()).map(|i| r.above(i).count_ones(..)).sum()
}

#[test]
fn twelve_element_poset() {
    let p = poset("hasse_12");
    assert_eq!(p.len(), 12);
    let profile = rank_profile(&p).unwrap();
    assert_eq!(profile.rank_vector, vec![1, 3, 4, 3, 1]);
    assert_eq!(profile.gamma, Some(vec![1, -1, 0]));
    assert!(poset("hasse_12").len() == poset("sperner_strong").len());
    assert!(is_isomorphic(&p, &poset("sperner_strong")).unwrap());
}

#[test]
fn fixture_decompositions() {
    let p = poset("hasse_12");
    let three = import_decomposition(&fixture("hasse_12_three_parts")).unwrap();
    assert_eq!(three.parts.len(), 3);
    assert!(verify_decomposition(&p, &three, VerifyMode::Plain).unwrap().is_valid());
    assert!(!verify_decomposition(&p, &three, VerifyMode::Symmetric).unwrap().is_valid());
    let sym = import_decomposition(&fixture("hasse_12_symmetric")).unwrap();
    assert!(verify_decomposition(&p, &sym, VerifyMode::Symmetric).unwrap().is_valid());
    let chains = import_decomposition(&fixture("hasse_12_chains")).unwrap();
    assert!(verify_decomposition(&p, &chains, VerifyMode::Chain).unwrap().is_valid());
    assert!(verify_decomposition(&p, &chains, VerifyMode::Symmetric).unwrap().is_valid());

    let q = poset("hasse_25");
    let boolean = import_decomposition(&fixture("hasse_25_boolean")).unwrap();
    assert_eq!(boolean.parts.len(), 4);
    assert!(verify_decomposition(&q, &boolean, VerifyMode::Boolean).unwrap().is_valid());
    assert!(verify_decomposition(&q, &boolean, VerifyMode::Symmetric).unwrap().is_valid());
    assert_eq!(boolean.census(), BTreeMap::from([(1, 1), (4, 2), (16, 1)]));
    assert_eq!(gamma_from_boolean_parts(&q, &boolean).unwrap(), vec![1, 2, 1]);
    assert_eq!(rank_profile(&q).unwrap().gamma, Some(vec![1, 2, 1]));
}

#[test]
fn verifier_rejects_bad_input() {
    let p = poset("hasse_12");
    let mut dec = import_decomposition(&fixture("hasse_12_chains")).unwrap();
    // Declaring a chain as Boolean fails once its size is not a power of two.
    let report = verify_decomposition(&p, &dec, VerifyMode::Boolean).unwrap();
    assert!(!report.is_valid());
    dec.parts[0].elements.pop();
    assert!(verify_decomposition(&p, &dec, VerifyMode::Plain).is_err());
}

#[test]
fn rank_profile_examples() {
    assert_eq!(gamma_vector(&[1, 3, 4, 3, 1]).unwrap(), vec![1, -1, 0]);
    assert_eq!(gamma_vector(&[1, 6, 11, 6, 1]).unwrap(), vec![1, 2, 1]);
    assert_eq!(gamma_vector(&[1, 12, 12, 1]).unwrap(), vec![1, 9]);
    assert!(gamma_vector(&[1, 2, 3]).is_err());
    let bent = GradedPoset::new(vec![0, 1, 0], &[(0, 1)], None).unwrap();
    assert!(rank_profile(&bent).is_err());
}

#[test]
fn products_and_boolean_lattices() {
    assert!(is_isomorphic(&direct_product(&chain(2), &chain(2)), &boolean_lattice(2).unwrap()).unwrap());
    assert!(!is_isomorphic(&boolean_lattice(2).unwrap(), &chain(4)).unwrap());
    let p = direct_product(&chain(2), &nc(3, 2));
    assert_eq!(rank_profile(&p).unwrap().rank_vector, vec![1, 4, 4, 1]);
    let nc3 = build_nc_lattice(GroupParams::symmetric(3).unwrap(), 64).unwrap().to_poset();
    assert_eq!(direct_product(&nc3, &nc3).len(), 25);
    assert_eq!(boolean_lattice(0).unwrap().len(), 1);
    assert!(is_isomorphic(&boolean_lattice(1).unwrap(), &chain(2)).unwrap());
    assert_eq!(rank_profile(&boolean_lattice(3).unwrap()).unwrap().rank_vector, vec![1, 3, 3, 1]);
    for k in 0..=6 {
        let b = boolean_lattice(k).unwrap();
        let whole = ncp::Decomposition { parts: vec![Part::new((0..b.len()).collect(), PartType::BooleanOfRank(k))] };
        assert!(verify_decomposition(&b, &whole, VerifyMode::Boolean).unwrap().is_valid());
    }
    assert!(!is_isomorphic(&poset("two_sperner_not_sperner"), &boolean_lattice(3).unwrap()).unwrap());
    assert!(matches!(is_isomorphic(&boolean_lattice(7).unwrap(), &boolean_lattice(7).unwrap()), Err(Error::ResourceCap(_))));
}

#[test]
fn product_rank_polynomials_multiply() {
    let shapes = [chain(3), nc(3, 2), nc(2, 3), boolean_lattice(2).unwrap(), poset("hasse_12")];
    for a in &shapes {
        for b in &shapes {
            let (ra, rb) = (rank_profile(a).unwrap().rank_vector, rank_profile(b).unwrap().rank_vector);
            let mut want = vec![0u64; ra.len() + rb.len() - 1];
            for (i, x) in ra.iter().enumerate() {
                for (j, y) in rb.iter().enumerate() {
                    want[i + j] += x * y;
                }
            }
            let prof = rank_profile(&direct_product(a, b)).unwrap();
            assert_eq!(prof.rank_vector, want);
            let nonneg = |v: &[u64]| gamma_vector(v).unwrap().iter().all(|&g| g >= 0);
            if nonneg(&ra) && nonneg(&rb) {
                assert!(nonneg(&prof.rank_vector));
            }
        }
    }
}

#[test]
fn closure_examples() {
    assert_eq!(pairs(&transitive_closure(&chain(3))), 3);
    assert_eq!(pairs(&transitive_closure(&antichain(4))), 0);
    assert_eq!(pairs(&transitive_closure(&boolean_lattice(2).unwrap())), 5);
}

#[test]
fn width_examples() {
    assert_eq!(width(&chain(5)), 1);
    assert_eq!(width(&poset("two_sperner_not_sperner")), 4);
    assert_eq!(width(&nc(5, 3)), 12);
    assert_eq!(min_chain_cover(&nc(5, 3)).len(), 12);
}

#[test]
fn shade_examples() {
    let b2 = boolean_lattice(2).unwrap();
    assert!(shade(&b2, &[]).unwrap().is_empty());
    assert_eq!(shade(&b2, &[1]).unwrap(), vec![3]);
    assert_eq!(shade(&b2, &[1, 2]).unwrap(), vec![3]);
    assert!(matches!(shade(&b2, &[0, 1]), Err(Error::Precondition(_))));
    let l = nc(3, 3);
    for r in 0..3 {
        assert_eq!(shade(&l, &l.rank_level(r)).unwrap(), l.rank_level(r + 1));
    }
}

#[test]
fn truncation_examples() {
    let b = poset("sperner_not_2sperner");
    let c = poset("two_sperner_not_sperner");
    for tie in [TieBreak::SmallestIndex, TieBreak::LargestIndex] {
        assert!(is_isomorphic(&truncate(&b, tie).unwrap().poset, &c).unwrap());
    }
    assert!(truncate(&antichain(5), TieBreak::SmallestIndex).unwrap().poset.is_empty());
    let t = truncate(&boolean_lattice(2).unwrap(), TieBreak::SmallestIndex).unwrap();
    assert_eq!(t.removed_rank, 1);
    assert!(is_isomorphic(&t.poset, &chain(2)).unwrap());
    assert!(truncate(&antichain(0), TieBreak::SmallestIndex).is_err());
}

#[test]
fn sperner_fixture_verdicts() {
    let a = poset("sperner_strong");
    let b = poset("sperner_not_2sperner");
    let c = poset("two_sperner_not_sperner");
    for tie in [TieBreak::SmallestIndex, TieBreak::LargestIndex] {
        assert!(is_strongly_sperner(&a, tie).strongly_sperner);
        assert!(!is_strongly_sperner(&b, tie).strongly_sperner);
    }
    assert!(is_sperner(&a) && strongly_sperner_bruteforce(&a).unwrap());
    assert!(is_sperner(&b));
    assert_eq!(max_k_family_bruteforce(&b, 2).unwrap(), 8);
    assert_eq!(top_k_ranks(&b, 2), 7);
    assert!(!is_k_sperner_bruteforce(&b, 2).unwrap());
    assert!(!is_sperner(&c));
    assert_eq!(rank_profile(&c).unwrap().rank_vector.iter().max(), Some(&3));
    assert!(is_k_sperner_bruteforce(&c, 2).unwrap());
    assert!(is_strongly_sperner(&antichain(4), TieBreak::SmallestIndex).strongly_sperner);
    assert!(is_sperner(&boolean_lattice(4).unwrap()));
}

#[test]
fn k_family_examples() {
    assert_eq!(max_k_family_bruteforce(&boolean_lattice(3).unwrap(), 2).unwrap(), 6);
    assert_eq!(max_k_family_bruteforce(&chain(5), 2).unwrap(), 2);
    assert!(matches!(max_k_family_bruteforce(&nc(5, 3), 1), Err(Error::ResourceCap(_))));
}

#[test]
fn normalized_matching_examples() {
    for k in 0..=5 {
        let b = boolean_lattice(k).unwrap();
        assert!(normalized_matching(&b).holds);
        assert!(griggs_scd_exists(&b).unwrap());
    }
    let c = poset("two_sperner_not_sperner");
    let report = normalized_matching(&c);
    assert!(!report.holds && report.first_failure.is_some());
    assert!(!normalized_matching_exhaustive(&c).unwrap());
    assert!(!griggs_scd_exists(&c).unwrap());
    assert!(normalized_matching(&nc(5, 3)).holds);
    for (d, n) in [(2, 2), (3, 3), (4, 3), (2, 4), (3, 4), (4, 4)] {
        assert!(griggs_scd_exists(&nc(d, n)).unwrap(), "G({d},{d},{n})");
    }
}

/// Random graded poset: every non-bottom element has a lower cover and every
/// non-top element an upper cover.
fn graded_poset() -> impl Strategy<Value = GradedPoset> {
    prop::collection::vec(1usize..=5, 1..=5)
        .prop_filter("at most 20 elements", |sizes| sizes.iter().sum::<usize>() <= 20)
        .prop_flat_map(|sizes| {
            let edges: usize = sizes.windows(2).map(|w| w[0] * w[1]).sum();
            (Just(sizes), prop::collection::vec(any::<bool>(), edges), prop::collection::vec(any::<u16>(), 2 * 20))
        })
        .prop_map(|(sizes, bits, picks)| {
            let mut ranks = Vec::new();
            let mut levels: Vec<Vec<usize>> = Vec::new();
            for (r, &s) in sizes.iter().enumerate() {
                levels.push((ranks.len()..ranks.len() + s).collect());
                ranks.extend(std::iter::repeat_n(r, s));
            }
            let mut covers = std::collections::BTreeSet::new();
            let mut bit = bits.into_iter();
            for w in levels.windows(2) {
                for &x in &w[0] {
                    for &y in &w[1] {
                        if bit.next().unwrap() {
                            covers.insert((x, y));
                        }
                    }
                }
            }
            let mut pick = picks.into_iter().cycle();
            for r in 0..levels.len().saturating_sub(1) {
                for &x in &levels[r] {
                    if !covers.iter().any(|&(a, _)| a == x) {
                        let up = &levels[r + 1];
                        covers.insert((x, up[pick.next().unwrap() as usize % up.len()]));
                    }
                }
                for &y in &levels[r + 1] {
                    if !covers.iter().any(|&(_, b)| b == y) {
                        let down = &levels[r];
                        covers.insert((down[pick.next().unwrap() as usize % down.len()], y));
                    }
                }
            }
            GradedPoset::new(ranks, &covers.into_iter().collect::<Vec<_>>(), None).unwrap()
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn rank_removal_matches_bruteforce(p in graded_poset()) {
        let direct = strongly_sperner_bruteforce(&p).unwrap();
        for tie in [TieBreak::SmallestIndex, TieBreak::LargestIndex] {
            prop_assert_eq!(is_strongly_sperner(&p, tie).strongly_sperner, direct);
        }
    }

    #[test]
    fn width_is_dilworth(p in graded_poset()) {
        let w = width(&p);
        prop_assert_eq!(w, max_k_family_bruteforce(&p, 1).unwrap());
        let cover = min_chain_cover(&p);
        prop_assert_eq!(cover.len(), w);
        let closure = transitive_closure(&p);
        let mut seen = vec![false; p.len()];
        for c in &cover {
            for pair in c.windows(2) {
                prop_assert!(closure.lt(pair[0], pair[1]));
            }
            for &x in c {
                prop_assert!(!seen[x]);
                seen[x] = true;
            }
        }
        prop_assert!(seen.into_iter().all(|s| s));
    }

    #[test]
    fn flow_matches_subset_enumeration(p in graded_poset()) {
        prop_assert_eq!(normalized_matching(&p).holds, normalized_matching_exhaustive(&p).unwrap());
    }

    #[test]
    fn isomorphism_is_label_blind(p in graded_poset(), seed in any::<u64>()) {
        use rand::seq::SliceRandom;
        use rand::SeedableRng;
        let mut order: Vec<usize> = (0..p.len()).collect();
        order.shuffle(&mut rand_chacha::ChaCha8Rng::seed_from_u64(seed));
        let pos: Vec<usize> = { let mut v = vec![0; p.len()]; for (i, &o) in order.iter().enumerate() { v[o] = i; } v };
        let covers: Vec<(usize, usize)> = p.covers().into_iter().map(|(a, b)| (pos[a], pos[b])).collect();
        let q = GradedPoset::new(order.iter().map(|&o| p.rank(o)).collect(), &covers, None).unwrap();
        prop_assert!(is_isomorphic(&p, &q).unwrap());
    }
}

#[test]
fn fixtures_agree_with_bruteforce() {
    for name in ["hasse_12", "sperner_not_2sperner", "two_sperner_not_sperner"] {
        let p = poset(name);
        let direct = strongly_sperner_bruteforce(&p).unwrap();
        for tie in [TieBreak::SmallestIndex, TieBreak::LargestIndex] {
            assert_eq!(is_strongly_sperner(&p, tie).strongly_sperner, direct, "{name}");
        }
        assert_eq!(normalized_matching(&p).holds, normalized_matching_exhaustive(&p).unwrap());
    }
}
