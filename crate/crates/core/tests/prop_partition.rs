mod common;

use std::collections::BTreeSet;

use chainpoly::graph::{chromatic_poly, is_chordal, SimpleGraph};
use chainpoly::partition::{
    falling_basis_expansion, g_graph, g_graph_definitional, partition_shelling_check, FallingVariant, PartitionComplex,
    SetPartition,
};
use chainpoly::poly::{is_real_rooted_in, Bound};
use chainpoly::poset::chain_polynomial_poset;
use proptest::prelude::*;
use rand::Rng;

#[test]
fn chordal_graphs_expand_nonnegatively() {
    let mut rng = common::rng(0x5eed);
    for i in 0..200 {
        let n = rng.gen_range(1..=10);
        let g = common::random_chordal(&mut rng, n);
        assert!(is_chordal(&g).chordal, "instance {i}");
        let chi = chromatic_poly(&g).unwrap();
        let h = falling_basis_expansion(&chi, n, FallingVariant::K).unwrap();
        assert!(h.is_nonnegative(), "instance {i}: {g:?} gives {:?}", h.values);
    }
}

/// Canonical code of a graph on at most 7 vertices: the smallest adjacency
/// bit string over all vertex orders.
fn canonical(n: usize, adj: &[u8]) -> u32 {
    fn code(n: usize, adj: &[u8], perm: &[usize]) -> u32 {
        let mut c = 0u32;
        for i in 0..n {
            for j in i + 1..n {
                c = (c << 1) | ((adj[perm[i]] >> perm[j]) & 1) as u32;
            }
        }
        c
    }
    fn rec(n: usize, adj: &[u8], perm: &mut Vec<usize>, used: u8, best: &mut u32) {
        if perm.len() == n {
            *best = (*best).min(code(n, adj, perm));
            return;
        }
        for v in 0..n {
            if used & (1 << v) == 0 {
                perm.push(v);
                rec(n, adj, perm, used | (1 << v), best);
                perm.pop();
            }
        }
    }
    let mut best = u32::MAX;
    rec(n, adj, &mut Vec::with_capacity(n), 0, &mut best);
    best
}

fn decode(n: usize, code: u32) -> Vec<u8> {
    let mut adj = vec![0u8; n];
    let mut bit = n * (n - 1) / 2;
    for i in 0..n {
        for j in i + 1..n {
            bit -= 1;
            if (code >> bit) & 1 == 1 {
                adj[i] |= 1 << j;
                adj[j] |= 1 << i;
            }
        }
    }
    adj
}

/// All graphs on `n` vertices up to isomorphism, by vertex augmentation.
fn graphs_up_to_iso(n: usize) -> Vec<Vec<u8>> {
    let mut level: BTreeSet<u32> = BTreeSet::from([0]);
    for k in 1..n {
        let mut next = BTreeSet::new();
        for &c in &level {
            let adj = decode(k, c);
            for nb in 0u8..(1 << k) {
                let mut a = adj.clone();
                for (v, row) in a.iter_mut().enumerate() {
                    if nb & (1 << v) != 0 {
                        *row |= 1 << k;
                    }
                }
                a.push(nb);
                next.insert(canonical(k + 1, &a));
            }
        }
        level = next;
    }
    level.into_iter().map(|c| decode(n, c)).collect()
}

fn is_connected(n: usize, adj: &[u8]) -> bool {
    let mut seen = 1u8;
    let mut stack = vec![0];
    while let Some(v) = stack.pop() {
        for w in 0..n {
            if adj[v] & (1 << w) != 0 && seen & (1 << w) == 0 {
                seen |= 1 << w;
                stack.push(w);
            }
        }
    }
    seen.count_ones() as usize == n
}

#[test]
fn small_connected_graphs_expand_nonnegatively() {
    let expected_counts = [1, 1, 2, 6, 21, 112, 853];
    let mut violations = Vec::new();
    for n in 1..=7 {
        let connected: Vec<Vec<u8>> = graphs_up_to_iso(n).into_iter().filter(|a| is_connected(n, a)).collect();
        assert_eq!(connected.len(), expected_counts[n - 1], "connected graphs on {n} vertices");
        for adj in connected {
            let edges = (0..n).flat_map(|a| (a + 1..n).map(move |b| (a, b))).filter(|&(a, b)| adj[a] & (1 << b) != 0);
            let g = SimpleGraph::new(n, edges.collect()).unwrap();
            let chi = chromatic_poly(&g).unwrap();
            let h = falling_basis_expansion(&chi, n - 1, FallingVariant::KPlusOne).unwrap();
            if !h.is_nonnegative() {
                violations.push((g, h.values));
            }
        }
    }
    for (g, h) in &violations {
        println!("negative expansion: {g:?} -> {h:?}");
    }
    assert!(violations.is_empty(), "{} graphs with a negative expansion", violations.len());
}

#[test]
fn g_graph_closed_form_matches_definition() {
    for n in 1..=6 {
        for k in 1..=n {
            for pi in SetPartition::all_with_blocks(n, k) {
                assert_eq!(g_graph(&pi), g_graph_definitional(&pi).unwrap(), "{pi:?}");
            }
        }
    }
}

#[test]
fn lex_order_shells_partition_posets() {
    for n in 1..=6 {
        for k in 1..=n {
            let p = PartitionComplex::lex(n, k).unwrap();
            let order: Vec<usize> = (0..p.facets().len()).collect();
            let s = partition_shelling_check(&p, &order).unwrap();
            assert!(s.is_shelling, "n = {n}, k = {k}: fails at {:?}", s.failing_step);
            assert!(s.steps.iter().all(|st| st.increment_matches && st.chordal));
            assert!(s.h.unwrap().is_nonnegative());
            let c = chain_polynomial_poset(&p.to_poset().unwrap());
            assert!(is_real_rooted_in(&c, &Bound::from(-1), &Bound::from(0)), "n = {n}, k = {k}");
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn shellings_have_nonnegative_h(
        (n, k) in (2usize..=5).prop_flat_map(|n| (Just(n), 1..=n)),
        picks in proptest::collection::vec(any::<prop::sample::Index>(), 1..=6),
    ) {
        let all = SetPartition::all_with_blocks(n, k);
        let facets: BTreeSet<SetPartition> = picks.iter().map(|i| all[i.index(all.len())].clone()).collect();
        let p = PartitionComplex::new(facets.into_iter().collect()).unwrap();
        let order: Vec<usize> = (0..p.facets().len()).collect();
        let s = partition_shelling_check(&p, &order).unwrap();
        if s.is_shelling {
            prop_assert!(s.steps.iter().all(|st| st.increment_matches));
            prop_assert!(s.h.unwrap().is_nonnegative());
            let c = chain_polynomial_poset(&p.to_poset().unwrap());
            prop_assert!(is_real_rooted_in(&c, &Bound::from(-1), &Bound::from(0)));
        }
    }
}
