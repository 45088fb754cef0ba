//! Algebraic properties of colored permutations, checked against independent oracles:
//! monomial matrices over C for the fixed space, breadth-first search on the Cayley
//! graph for reflection length.

use std::collections::{HashMap, VecDeque};

use num_complex::Complex64;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use ncp::colored_perm::{parse_cycles, ColoredPermutation, GroupParams};
use ncp::reflection_order::{reflection_length, LengthOracle};

fn params() -> impl Strategy<Value = GroupParams> {
    prop_oneof![
        (1usize..=7).prop_map(|n| GroupParams::symmetric(n).unwrap()),
        (2usize..=6, 2usize..=6).prop_map(|(d, n)| GroupParams::new(d, n).unwrap()),
    ]
}

fn element(p: GroupParams) -> impl Strategy<Value = ColoredPermutation> {
    any::<u64>().prop_map(move |seed| ColoredPermutation::random(p, &mut ChaCha8Rng::seed_from_u64(seed)))
}

fn with_elements(k: usize) -> impl Strategy<Value = (GroupParams, Vec<ColoredPermutation>)> {
    params().prop_flat_map(move |p| (Just(p), prop::collection::vec(element(p), k)))
}

/// `dim ker(M - I)` for the monomial matrix of `u`, by Gaussian elimination over C.
fn fixed_space_dim(u: &ColoredPermutation) -> usize {
    let GroupParams { d, n } = u.params();
    let mut m = vec![vec![Complex64::new(0.0, 0.0); n]; n];
    for k in 1..=n {
        let angle = 2.0 * std::f64::consts::PI * u.shift(k) as f64 / d as f64;
        m[u.target(k) - 1][k - 1] += Complex64::from_polar(1.0, angle);
        m[k - 1][k - 1] -= Complex64::new(1.0, 0.0);
    }
    let mut rank = 0;
    for col in 0..n {
        let Some(pivot) = (rank..n).max_by(|&a, &b| m[a][col].norm().total_cmp(&m[b][col].norm())) else { break };
        if m[pivot][col].norm() < 1e-9 {
            continue;
        }
        m.swap(rank, pivot);
        for r in 0..n {
            if r != rank {
                let f = m[r][col] / m[rank][col];
                let row = m[rank].clone();
                for (x, y) in m[r].iter_mut().zip(row) {
                    *x -= f * y;
                }
            }
        }
        rank += 1;
    }
    n - rank
}

/// Exact reflection length of every group element.
fn bfs_lengths(p: GroupParams) -> HashMap<ColoredPermutation, usize> {
    let refl: Vec<_> = ColoredPermutation::reflections(p).iter().map(|r| r.to_permutation(p)).collect();
    let mut dist = HashMap::from([(ColoredPermutation::identity(p), 0)]);
    let mut queue = VecDeque::from([ColoredPermutation::identity(p)]);
    while let Some(u) = queue.pop_front() {
        let du = dist[&u];
        for t in &refl {
            let v = &u * t;
            if !dist.contains_key(&v) {
                dist.insert(v.clone(), du + 1);
                queue.push_back(v);
            }
        }
    }
    dist
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn composition_is_associative((_, e) in with_elements(3)) {
        prop_assert_eq!(&(&e[0] * &e[1]) * &e[2], &e[0] * &(&e[1] * &e[2]));
    }

    #[test]
    fn inverse_cancels((p, e) in with_elements(1)) {
        let id = ColoredPermutation::identity(p);
        prop_assert_eq!(&e[0] * &e[0].inverse(), id.clone());
        prop_assert_eq!(&e[0].inverse() * &e[0], id);
    }

    #[test]
    fn text_round_trip((p, e) in with_elements(1)) {
        let text = e[0].to_string();
        prop_assert_eq!(ColoredPermutation::parse(p, &text).unwrap(), e[0].clone());
        prop_assert!(parse_cycles(&text).is_ok());
    }

    #[test]
    fn cycles_round_trip((p, e) in with_elements(1)) {
        let cycles = e[0].cycle_decomposition();
        prop_assert_eq!(cycles.iter().map(|c| c.len()).sum::<usize>(), p.n);
        prop_assert_eq!(ColoredPermutation::from_cycles(p, &cycles).unwrap(), e[0].clone());
    }

    #[test]
    fn fix_dim_matches_linear_algebra((_, e) in with_elements(1)) {
        prop_assert_eq!(e[0].fix_dim(), fixed_space_dim(&e[0]));
    }

    #[test]
    fn fix_dim_is_conjugation_invariant((_, e) in with_elements(2)) {
        let conj = &(&e[1] * &e[0]) * &e[1].inverse();
        prop_assert_eq!(conj.fix_dim(), e[0].fix_dim());
    }

    #[test]
    fn reflection_moves_fix_dim_by_at_most_one((p, e) in with_elements(1), pick in any::<prop::sample::Index>()) {
        let refl = ColoredPermutation::reflections(p);
        prop_assume!(!refl.is_empty());
        let t = refl[pick.index(refl.len())].to_permutation(p);
        let (before, after) = (e[0].fix_dim() as i64, (&t * &e[0]).fix_dim() as i64);
        prop_assert!((before - after).abs() <= 1);
    }

    #[test]
    fn products_stay_in_the_group((p, e) in with_elements(2)) {
        for u in [&e[0] * &e[1], e[0].inverse()] {
            prop_assert_eq!((1..=p.n).map(|k| u.shift(k)).sum::<usize>() % p.d, 0);
        }
    }

    #[test]
    fn canonical_key_is_injective((_, e) in with_elements(2)) {
        prop_assert_eq!(e[0].canonical_key() == e[1].canonical_key(), e[0] == e[1]);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn length_bounds(
        p in (2usize..=3, 2usize..=4).prop_map(|(d, n)| GroupParams::new(d, n).unwrap()),
        seeds in prop::collection::vec(any::<u64>(), 2),
    ) {
        let u = ColoredPermutation::random(p, &mut ChaCha8Rng::seed_from_u64(seeds[0]));
        let v = ColoredPermutation::random(p, &mut ChaCha8Rng::seed_from_u64(seeds[1]));
        let mut oracle = LengthOracle::new(p);
        let lu = oracle.length(&u).unwrap();
        prop_assert!(lu >= u.codim());
        prop_assert_eq!(oracle.length(&u.inverse()).unwrap(), lu);
        prop_assert!(oracle.length(&(&u * &v)).unwrap() <= lu + oracle.length(&v).unwrap());
    }
}

#[test]
fn reflection_length_matches_cayley_bfs() {
    for (d, n) in [(1, 4), (1, 5), (2, 3), (3, 3), (2, 4), (4, 3), (3, 4)] {
        let p = if d == 1 { GroupParams::symmetric(n) } else { GroupParams::new(d, n) }.unwrap();
        let lengths = bfs_lengths(p);
        let order = (1..=n).product::<usize>() * d.pow(n as u32 - 1);
        assert_eq!(lengths.len(), order, "{p}");
        let mut oracle = LengthOracle::new(p);
        for (u, &l) in &lengths {
            assert_eq!(oracle.length(u).unwrap(), l, "{p}: {u}");
        }
    }
}

#[test]
fn length_exceeds_codim_off_the_interval() {
    // Three balanced 1-cycles: trivial fixed space, yet more than three reflections.
    let p = GroupParams::new(3, 3).unwrap();
    let u = ColoredPermutation::parse(p, "[1^0]_1 [2^0]_1 [3^0]_1").unwrap();
    assert_eq!(u.codim(), 3);
    assert_eq!(reflection_length(&u), bfs_lengths(p)[&u]);
    assert!(reflection_length(&u) > u.codim());
}

#[test]
fn coxeter_element_has_order_h() {
    for (d, n) in [(2, 2), (2, 3), (3, 3), (5, 3), (2, 4), (4, 4), (3, 5)] {
        let p = GroupParams::new(d, n).unwrap();
        let g = ColoredPermutation::coxeter_element(p);
        let h = (n - 1) * d;
        let mut x = g.clone();
        for k in 1..h {
            assert!(!x.is_identity(), "G({d},{d},{n}): order {k} < {h}");
            x = &x * &g;
        }
        assert!(x.is_identity());
        assert_eq!(g.fix_dim(), 0);
    }
    let c = ColoredPermutation::coxeter_element(GroupParams::symmetric(5).unwrap());
    assert_eq!(c.to_string(), "((1^0 2^0 3^0 4^0 5^0))");
}

#[test]
fn g22_coxeter_element() {
    let p = GroupParams::new(2, 2).unwrap();
    let g = ColoredPermutation::coxeter_element(p);
    assert_eq!((g.target(1), g.target(2)), (1, 2));
    assert_eq!((g.shift(1), g.shift(2)), (1, 1));
    assert_eq!(g.fix_dim(), 0);
    // The swap with shifts (1,1) has order 2 as well but is the reflection ((1 2))^1:
    // it fixes a line, so it is not regular and its interval is too small.
    let swap = ColoredPermutation::from_images(p, &[2, 1], &[1, 1]).unwrap();
    assert_eq!(swap, ColoredPermutation::parse(p, "((1^0 2^1))").unwrap());
    assert_eq!(fixed_space_dim(&swap), 1);
    let below = ncp::reflection_order::build_nc_lattice_with_coxeter(&swap, 64).unwrap();
    let full = ncp::reflection_order::build_nc_lattice(p, 64).unwrap();
    assert_eq!((below.len(), full.len()), (2, 4));
}
