#![allow(dead_code)]

use chainpoly::exact;
use chainpoly::tnmat::{self, LowerTriMatrix, ResolutionCertificate};
use chainpoly::{Polynomial, Rational};
use proptest::prelude::*;
use rand::rngs::StdRng;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use std::collections::BTreeSet;
use chainpoly::graph::SimpleGraph;

pub fn rng(seed: u64) -> StdRng {
    StdRng::seed_from_u64(seed)
}

pub fn rats(xs: &[i64]) -> Vec<Rational> {
    xs.iter().map(|&x| exact::int(x)).collect()
}

/// A triangular `λ` array with `order` rows and entries drawn from `0..=max`.
pub fn lambda_strategy(order: usize, max: i64) -> impl Strategy<Value = Vec<Vec<Rational>>> {
    let rows: Vec<_> = (0..order).map(|n| proptest::collection::vec(0..=max, n + 1)).collect();
    rows.prop_map(|rows| rows.into_iter().map(|r| rats(&r)).collect())
}

/// A TN matrix reconstructed from nonnegative weights.
pub fn tn_from_lambda(lambda: Vec<Vec<Rational>>) -> LowerTriMatrix {
    let cert = ResolutionCertificate::from_lambda(lambda).unwrap();
    tnmat::reconstruct(&cert).unwrap()
}

pub fn random_lambda(rng: &mut StdRng, order: usize, max: i64) -> Vec<Vec<Rational>> {
    (0..order)
        .map(|n| {
            (0..=n)
                .map(|_| {
                    // sprinkle zeros so degenerate patterns appear
                    if rng.gen_bool(0.2) {
                        exact::int(0)
                    } else {
                        exact::ratio(rng.gen_range(0..=max * 2), 2)
                    }
                })
                .collect()
        })
        .collect()
}

/// Unit lower-triangular with independent entries in `lo..=hi`.
pub fn random_unit_matrix(rng: &mut StdRng, order: usize, lo: i64, hi: i64) -> LowerTriMatrix {
    LowerTriMatrix::from_fn(order, |n, k| if n == k { exact::int(1) } else { exact::int(rng.gen_range(lo..=hi)) })
}

/// A matrix strategy with entries in `lo..=hi` below the diagonal.
pub fn unit_matrix_strategy(max_order: usize, lo: i64, hi: i64) -> impl Strategy<Value = LowerTriMatrix> {
    (1..=max_order).prop_flat_map(move |order| {
        proptest::collection::vec(lo..=hi, order * (order + 1) / 2).prop_map(move |vals| {
            let mut it = vals.into_iter();
            LowerTriMatrix::from_fn(order, |n, k| if n == k { exact::int(1) } else { exact::int(it.next().unwrap()) })
        })
    })
}

/// `∏ (t + r_i)` times `c`.
pub fn from_neg_roots(c: i64, roots: &[i64]) -> Polynomial {
    roots.iter().fold(Polynomial::constant(exact::int(c)), |acc, &r| &acc * &Polynomial::from_ints(&[r, 1]))
}

pub fn poly_strategy(max_deg: usize, lo: i64, hi: i64) -> impl Strategy<Value = Polynomial> {
    proptest::collection::vec(lo..=hi, 1..=max_deg + 1).prop_map(|c| Polynomial::from_ints(&c))
}

/// A chordal graph built by attaching each new vertex to a clique of the
/// current graph, then relabelled at random.
pub fn random_chordal(rng: &mut StdRng, n: usize) -> SimpleGraph {
    let mut adj = vec![BTreeSet::new(); n];
    for v in 1..n {
        if rng.gen_bool(0.15) {
            continue;
        }
        let anchor = rng.gen_range(0..v);
        let mut clique = vec![anchor];
        let mut candidates: Vec<usize> = adj[anchor].iter().copied().collect();
        candidates.shuffle(rng);
        for c in candidates {
            if rng.gen_bool(0.6) && clique.iter().all(|&x| adj[x].contains(&c)) {
                clique.push(c);
            }
        }
        for &c in &clique {
            adj[v].insert(c);
            adj[c].insert(v);
        }
    }
    let mut perm: Vec<usize> = (0..n).collect();
    perm.shuffle(rng);
    let edges = (0..n).flat_map(|a| adj[a].iter().filter(move |&&b| a < b).map(move |&b| (a, b)));
    SimpleGraph::new(n, edges.map(|(a, b)| (perm[a], perm[b])).collect()).unwrap()
}
