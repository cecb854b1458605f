mod common;

use chainpoly::exact;
use chainpoly::poly::{
    self, falling_transform, interlaces, is_interlacing_sequence, is_real_rooted_in, moebius_substitute,
    moebius_unsubstitute, sturm_count, Bound, Direction,
};
use chainpoly::{chain, Polynomial};
use common::{from_neg_roots, lambda_strategy, poly_strategy, tn_from_lambda};
use proptest::prelude::*;

/// An interlacing sequence `f_0 ≺ ⋯ ≺ f_n` of degree `d` with roots in `[-1, 0]`:
/// sorted grid points are dealt out round-robin, so the roots of `f_j` sit
/// just right of those of `f_{j-1}`.
fn family_strategy() -> impl Strategy<Value = (Vec<Polynomial>, usize)> {
    (1usize..=5, 1usize..=5).prop_flat_map(|(d, n)| {
        (proptest::collection::vec(0i64..=12, d * (n + 1)), proptest::collection::vec(1i64..=4, n + 1)).prop_map(
            move |(mut grid, leads)| {
                grid.sort_unstable_by(|a, b| b.cmp(a));
                let fam = (0..=n)
                    .map(|j| {
                        (0..d).fold(Polynomial::constant(exact::int(leads[j])), |acc, i| {
                            &acc * &Polynomial::linear(exact::ratio(grid[i * (n + 1) + j], 12))
                        })
                    })
                    .collect();
                (fam, d)
            },
        )
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn sturm_count_detects_real_rootedness(
        roots in proptest::collection::vec(-6i64..=6, 0..=6),
        quad in proptest::collection::vec(1i64..=5, 0..=2),
        lead in 1i64..=3,
    ) {
        let mut f = from_neg_roots(lead, &roots);
        for c in &quad {
            f = &f * &Polynomial::from_ints(&[*c, 0, 1]);
        }
        let full = sturm_count(&f, &Bound::NegInf, &Bound::PosInf).unwrap();
        let sqf_deg = f.squarefree().degree().unwrap();
        let real = is_real_rooted_in(&f, &Bound::NegInf, &Bound::PosInf);
        prop_assert_eq!(full == sqf_deg, real);
        prop_assert_eq!(real, quad.is_empty());
    }

    #[test]
    fn falling_transform_round_trip(f in poly_strategy(12, -9, 9)) {
        let there = falling_transform(&f, Direction::Forward);
        prop_assert_eq!(falling_transform(&there, Direction::Inverse), f.clone());
        let back = falling_transform(&f, Direction::Inverse);
        prop_assert_eq!(falling_transform(&back, Direction::Forward), f);
    }

    #[test]
    fn moebius_maps_are_inverse(f in poly_strategy(10, -9, 9), extra in 0usize..=2) {
        let d = f.degree().unwrap_or(0) + extra;
        let h = moebius_substitute(&f, d).unwrap();
        prop_assert_eq!(moebius_unsubstitute(&h, d).unwrap(), f.clone());
        prop_assert_eq!(moebius_substitute(&moebius_unsubstitute(&f, d).unwrap(), d).unwrap(), f);
    }

    #[test]
    fn nonnegative_combination_sits_between_ends(
        lambda in (1usize..=5).prop_flat_map(|n| lambda_strategy(n, 3)),
        weights in proptest::collection::vec(0i64..=5, 7),
    ) {
        let r = tn_from_lambda(lambda);
        let n = r.order();
        let cert = chain::interlacing_certificate(&r, n).unwrap();
        let fs = &cert.polys;
        prop_assert!(is_interlacing_sequence(fs).unwrap());
        let combo: Polynomial = fs.iter().zip(&weights).map(|(f, &w)| f.scale(&exact::int(w))).sum();
        if !fs[0].is_zero() && !fs[n].is_zero() {
            prop_assert!(interlaces(&fs[0], &combo).unwrap());
            prop_assert!(interlaces(&combo, &fs[n]).unwrap());
        }
    }

    #[test]
    fn derived_sequence_keeps_interlacing((fs, d) in family_strategy()) {
        prop_assert!(is_interlacing_sequence(&fs).unwrap());
        let lo = Bound::from(-1);
        let hi = Bound::from(0);
        for f in &fs {
            prop_assert_eq!(f.degree(), Some(d));
            prop_assert!(is_real_rooted_in(f, &lo, &hi));
        }
        let n = fs.len() - 1;
        let t = Polynomial::t();
        let one_t = Polynomial::from_ints(&[1, 1]);
        let gs: Vec<Polynomial> = (0..=n + 1)
            .map(|k| {
                let left: Polynomial = fs[..k].iter().cloned().sum();
                let right: Polynomial = fs[k..].iter().cloned().sum();
                &(&t * &left) + &(&one_t * &right)
            })
            .collect();
        prop_assert!(is_interlacing_sequence(&gs).unwrap());
        for g in &gs {
            prop_assert!(poly::is_real_rooted_in(g, &lo, &hi));
        }
    }
}
