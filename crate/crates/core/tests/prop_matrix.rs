mod common;

use chainpoly::exact;
use chainpoly::poly::{is_real_rooted_in, Bound};
use chainpoly::tnmat::{self, is_tn_bruteforce, whitney_reduce, LowerTriMatrix, ResolutionCertificate};
use chainpoly::{chain, Polynomial, Rational};
use common::{lambda_strategy, tn_from_lambda, unit_matrix_strategy};
use num_traits::Zero;
use proptest::prelude::*;

/// `(t + α_1)(t + α_2)⋯(t + α_n) 1` with `α_i t^k = α_{i,k} t^k`.
fn diagonal_operator_product(alpha: &[Vec<Rational>], n: usize) -> Polynomial {
    let mut f = Polynomial::one();
    for i in (1..=n).rev() {
        let diag = Polynomial::new(f.coeffs().iter().enumerate().map(|(k, c)| c * &alpha[i - 1][k]).collect());
        f = &f.shift(1) + &diag;
    }
    f
}

fn tn_or_arbitrary() -> impl Strategy<Value = LowerTriMatrix> {
    prop_oneof![
        (0usize..=6).prop_flat_map(|n| lambda_strategy(n, 3)).prop_map(tn_from_lambda),
        unit_matrix_strategy(6, 0, 4),
        unit_matrix_strategy(4, -1, 3),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn whitney_agrees_with_minors(r in tn_or_arbitrary()) {
        let reduced = whitney_reduce(&r).unwrap();
        prop_assert_eq!(reduced.is_ok(), is_tn_bruteforce(&r, 8).unwrap());
    }

    #[test]
    fn certificate_is_normalized_and_unique(lambda in (0usize..=7).prop_flat_map(|n| lambda_strategy(n, 3))) {
        let r = tn_from_lambda(lambda);
        let cert = whitney_reduce(&r).unwrap().unwrap();
        prop_assert!(cert.is_normalized());
        let again = whitney_reduce(&tnmat::reconstruct(&cert).unwrap()).unwrap().unwrap();
        prop_assert_eq!(&again, &cert);
        prop_assert_eq!(tnmat::reconstruct(&cert).unwrap(), r);
    }

    #[test]
    fn rnk_monic_and_divisible(lambda in (0usize..=7).prop_flat_map(|n| lambda_strategy(n, 4))) {
        let cert = ResolutionCertificate::from_lambda(lambda).unwrap();
        for n in 0..=cert.order() {
            for k in 0..=n {
                let p = cert.r(n, k);
                prop_assert!(p.is_monic());
                prop_assert_eq!(p.degree(), Some(n));
                prop_assert!(p.valuation().unwrap() >= k);
            }
        }
    }

    #[test]
    fn diagonal_operator_factorization(lambda in (0usize..=6).prop_flat_map(|n| lambda_strategy(n, 3))) {
        let r = tn_from_lambda(lambda);
        let cert = whitney_reduce(&r).unwrap().unwrap();
        let alpha = cert.alpha();
        for n in 0..=r.order() {
            prop_assert_eq!(diagonal_operator_product(&alpha, n), r.row_polynomial(n));
        }
    }

    #[test]
    fn chain_recursion_matches_determinant(r in unit_matrix_strategy(8, -3, 3)) {
        let fam = chain::chain_polynomials(&r, r.order()).unwrap();
        for n in 0..=r.order() {
            prop_assert_eq!(&chain::chain_poly_det(&r, n).unwrap(), fam.p(n));
        }
    }

    #[test]
    fn tn_chain_polynomials_interlace(lambda in (1usize..=8).prop_flat_map(|n| lambda_strategy(n, 3))) {
        let r = tn_from_lambda(lambda);
        let certs = chain::interlacing_certificates(&r).unwrap();
        prop_assert!(certs.iter().all(|c| c.passed()));
        let fam = chain::chain_polynomials(&r, r.order()).unwrap();
        for n in 0..=r.order() {
            prop_assert!(is_real_rooted_in(fam.p(n), &Bound::from(-1), &Bound::from(0)));
        }
    }

    #[test]
    fn subdivision_is_self_consistent(r in unit_matrix_strategy(7, -2, 4)) {
        let fam = chain::chain_polynomials(&r, r.order()).unwrap();
        prop_assert!(chain::subdivision_self_check(&fam));
    }

    #[test]
    fn mobius_is_chain_polynomial_at_minus_one(r in unit_matrix_strategy(7, -2, 4)) {
        let fam = chain::chain_polynomials(&r, r.order()).unwrap();
        let all: Vec<usize> = (0..=r.order()).collect();
        for n in 0..=r.order() {
            prop_assert_eq!(chain::mobius_rank_selected(&r, &all, n).unwrap(), fam.p(n).eval_int(-1));
        }
    }

    #[test]
    fn zeta_degree_and_pf(lambda in (1usize..=6).prop_flat_map(|n| lambda_strategy(n, 3))) {
        let r = tn_from_lambda(lambda);
        let positive_subdiagonal = (1..=r.order()).all(|i| !r.get(i, i - 1).is_zero());
        for i in 0..=r.order() {
            for j in 0..=i {
                let z = chain::zeta_polynomial(&r, i, j).unwrap();
                if positive_subdiagonal {
                    prop_assert_eq!(z.degree(), Some(i - j));
                }
                // the value at m counts multichains, so it equals (R^m)_{i,j}
                prop_assert_eq!(z.eval_int(0), if i == j { exact::int(1) } else { exact::int(0) });
            }
            prop_assert!(chain::zeta_is_pf(&r, i).unwrap().0);
        }
    }
}
