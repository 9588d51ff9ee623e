use num_bigint::BigUint;
use proptest::prelude::*;

use waring::construct::{
    build_certificate, find_params, parse_certificate, serialize, SearchWindow,
};
use waring::digits::{expand_base, vaserstein_bound};
use waring::make_field;
use waring::verify_oracle::{
    brute_force_min_powers, check_multivariate_identity, least_degree_with_roots,
    verify_certificate, BruteForce, CheckStatus, DEFAULT_SEED,
};

fn coprime_pair() -> impl Strategy<Value = (u64, u64)> {
    (
        prop_oneof![Just(2u64), Just(3), Just(5), Just(7)],
        2u64..=40,
    )
        .prop_filter("k coprime to p", |(p, k)| k % p != 0)
}

fn exponent_vector() -> impl Strategy<Value = (u64, Vec<u32>)> {
    (2u64..=6).prop_flat_map(|m| {
        proptest::collection::vec(1u32..=m as u32, 1..=4)
            .prop_filter("sum at most M", move |v| v.iter().sum::<u32>() as u64 <= m)
            .prop_map(move |v| (m, v))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn identity_holds_in_larger_fields(
        (m, k_vec) in exponent_vector(),
        p in prop_oneof![Just(2u64), Just(3), Just(5), Just(7)],
        extra in 1usize..=2,
    ) {
        prop_assume!((m - 1) % p != 0);
        let degree = least_degree_with_roots(p, m - 1).unwrap() * extra;
        prop_assume!(degree <= 4);
        let f = make_field(p, degree).unwrap();
        prop_assert!(check_multivariate_identity(m, &k_vec, &f).unwrap());
    }

    #[test]
    fn certificates_survive_text_and_verify((p, k) in coprime_pair(), absorb in any::<bool>()) {
        let params = find_params(p, &BigUint::from(k), &SearchWindow::default()).unwrap();
        let cert = build_certificate(&params, absorb).unwrap();
        let text = serialize(&cert);
        let again = parse_certificate(&text).unwrap();
        prop_assert_eq!(serialize(&again), text);
        let report = verify_certificate(&again, 4, DEFAULT_SEED).unwrap();
        prop_assert!(report.passed(), "{}", report);
        // exact agreement implies every sampled point agrees
        prop_assert!(!report.symbolic || report.trial_passes == report.trials);
        // the dense and sparse expansions agree wherever both run
        if report.dense != CheckStatus::Passed {
            let skipped = matches!(report.dense, CheckStatus::Skipped(_));
            prop_assert!(skipped);
        }
    }

    #[test]
    fn perturbed_scalars_fail_exactly((p, k) in coprime_pair(), which in any::<prop::sample::Index>()) {
        let params = find_params(p, &BigUint::from(k), &SearchWindow::default()).unwrap();
        let mut cert = build_certificate(&params, false).unwrap();
        let i = which.index(cert.len());
        cert.terms[i].scalar = &cert.terms[i].scalar + &params.field.one();
        let report = verify_certificate(&cert, 4, DEFAULT_SEED).unwrap();
        prop_assert!(!report.symbolic);
        prop_assert!(!report.passed());
    }
}

/// The least number of k-th powers found by exhaustive search never exceeds
/// the certificate's count. When M - 1 is below half the digit product, the
/// digit-product bound is at least the count up to the [gamma = M] term:
/// p = 3, k = 2 has digit product 3, bound 2 and a 3-term certificate.
#[test]
fn brute_force_and_digit_product_against_certificates() {
    let mut searched = 0;
    for p in [2u64, 3, 5, 7] {
        for k in 2u64..=40 {
            if k % p == 0 {
                continue;
            }
            let kb = BigUint::from(k);
            let params = find_params(p, &kb, &SearchWindow::default()).unwrap();
            let cert = build_certificate(&params, false).unwrap();
            let count = cert.len();

            let digits = expand_base(&kb, &BigUint::from(p)).unwrap();
            let product: BigUint = digits.terms().iter().map(|t| &t.digit + 1u32).product();
            if BigUint::from(2 * (params.m - 1)) < product {
                let v = vaserstein_bound(&kb, p).unwrap();
                let indicator = u64::from(params.gamma == params.m);
                assert!(v + indicator >= BigUint::from(count), "p={p} k={k}");
            }

            let terms = count.min(3);
            if BigUint::from(p).pow(2 * terms as u32) <= BigUint::from(1u64 << 20) && k <= 12 {
                match brute_force_min_powers(p, k, 1, terms, 1).unwrap() {
                    BruteForce::Found(s) => assert!(s <= count, "p={p} k={k}: {s} > {count}"),
                    BruteForce::NotFound { .. } => {}
                }
                searched += 1;
            }
        }
    }
    assert!(searched > 10);
}
