use chainpoly::cubical::{adin_equivalence_check, adin_equivalence_from_f, adin_h, cubical_shelling_check, CubicalComplex};
use chainpoly::exact;
use chainpoly::families::{family_rnk, FamilyKind, FamilySpec};
use chainpoly::poly::{is_real_rooted_in, Bound};
use chainpoly::poset::chain_polynomial_poset;
use proptest::prelude::*;

/// The chart of the slice `x_axis = value` of the grid `[r]^3`.
fn slice_chart(r: u64, axis: usize, value: u64) -> Vec<u64> {
    let free: Vec<usize> = (0..3).filter(|&c| c != axis).collect();
    let mut chart = Vec::new();
    for u in 0..r {
        for v in 0..r {
            let mut x = [0u64; 3];
            x[axis] = value;
            x[free[0]] = u;
            x[free[1]] = v;
            chart.push(x[0] * r * r + x[1] * r + x[2]);
        }
    }
    chart
}

/// Up to six axis-parallel 2-dimensional slices of `[r]^3`, in a random order.
fn slice_complex() -> impl Strategy<Value = CubicalComplex> {
    (2u64..=3).prop_flat_map(|r| {
        let all: Vec<(usize, u64)> = (0..3).flat_map(|a| (0..r).map(move |v| (a, v))).collect();
        proptest::sample::subsequence(all.clone(), 1..=6.min(all.len()))
            .prop_shuffle()
            .prop_map(move |chosen| {
                let facets = chosen.iter().map(|&(a, v)| slice_chart(r, a, v)).collect();
                CubicalComplex::new(r as u32, 3, facets).unwrap()
            })
    })
}

/// Up to six r-element edges on a small vertex pool (rank-2 complexes).
fn edge_complex() -> impl Strategy<Value = CubicalComplex> {
    (2u32..=3).prop_flat_map(|r| {
        proptest::collection::btree_set(proptest::sample::subsequence((0u64..7).collect::<Vec<_>>(), r as usize), 1..=6)
            .prop_map(|s| s.into_iter().collect::<Vec<_>>())
            .prop_shuffle()
            .prop_map(move |facets| CubicalComplex::new(r, 2, facets).unwrap())
    })
}

fn check_shelling(cx: &CubicalComplex) -> Result<(), TestCaseError> {
    let order: Vec<usize> = (0..cx.facets().len()).collect();
    let s = cubical_shelling_check(cx, &order).map_err(|e| TestCaseError::fail(e.to_string()))?;
    if s.is_shelling {
        prop_assert!(s.steps.iter().all(|st| st.increment_matches), "{:?}", s.steps);
        prop_assert!(s.h.as_ref().unwrap().is_nonnegative());
        let p = cx.to_poset().unwrap();
        if cx.r() == 2 {
            let adin = adin_h(&p).unwrap();
            prop_assert!(adin.has_nonnegative_coeffs());
            prop_assert!(adin_equivalence_check(&p).unwrap().consistent);
        }
        prop_assert!(is_real_rooted_in(&chain_polynomial_poset(&p), &Bound::from(-1), &Bound::from(0)));
    } else {
        prop_assert!(s.failing_step.is_some());
    }
    Ok(())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn shellings_of_grid_slices(cx in slice_complex()) {
        check_shelling(&cx)?;
    }

    #[test]
    fn shellings_of_edge_complexes(cx in edge_complex()) {
        check_shelling(&cx)?;
    }

    #[test]
    fn adin_matches_two_cubical_h(
        n in 1usize..=8,
        tail in proptest::collection::vec((0i64..=6, 1i64..=3), 8),
    ) {
        // f = Σ h_k R_{n,k} with h_0 = 1 and h ≥ 0
        let spec = FamilySpec::new(FamilyKind::Cubical { r: 2 }, n).unwrap();
        let mut f = family_rnk(&spec, n, 0).unwrap();
        for k in 1..=n {
            let (p, q) = tail[k - 1];
            f = f + family_rnk(&spec, n, k).unwrap().scale(&exact::ratio(p, q));
        }
        prop_assert_eq!(f.coeff(0), exact::int(1));
        let cmp = adin_equivalence_from_f(&f, n).unwrap();
        prop_assert!(cmp.consistent, "{:?}", cmp);
        prop_assert!(cmp.adin.iter().all(exact::is_nonnegative));
    }
}
