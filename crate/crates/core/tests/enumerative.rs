use num_bigint::{BigInt, BigUint};
use proptest::prelude::*;
use sosnag_core::enumerative::*;
use sosnag_core::Error;

/// Second implementation: Pascal-triangle binomials in u128, summation
/// over `d2` instead of `d1`.
fn km_oracle(d: usize) -> Vec<u128> {
    let m = 3 * d + 2;
    let mut pascal = vec![vec![0u128; m + 1]; m + 1];
    for n in 0..=m {
        pascal[n][0] = 1;
        for k in 1..=n {
            pascal[n][k] = pascal[n - 1][k - 1] + pascal[n - 1][k];
        }
    }
    let c = |n: i64, k: i64| -> i128 {
        if k < 0 || k > n { 0 } else { pascal[n as usize][k as usize] as i128 }
    };
    let mut n = vec![0i128; d + 1];
    n[1] = 1;
    for dd in 2..=d as i64 {
        let mut acc = 0i128;
        for d2 in (1..dd).rev() {
            let d1 = dd - d2;
            let a = (d1 * d1 * d2 * d2) as i128 * c(3 * dd - 4, 3 * d1 - 2);
            let b = (d1 * d1 * d1 * d2) as i128 * c(3 * dd - 4, 3 * d1 - 1);
            acc += n[d1 as usize] * n[d2 as usize] * (a - b);
        }
        n[dd as usize] = acc;
    }
    n.into_iter().skip(1).map(|v| v as u128).collect()
}

#[test]
fn km_small_degrees() {
    assert_eq!(kontsevich_manin(1), BigInt::from(1));
    assert_eq!(kontsevich_manin(2), BigInt::from(1));
    // d = 3: the split (1, 2) contributes 4 C(5,1) - 2 C(5,2) = 0 and (2, 1)
    // contributes 4 C(5,4) - 8 C(5,5) = 12.
    assert_eq!(kontsevich_manin(3), BigInt::from(12));
}

#[test]
fn km_matches_second_implementation() {
    let oracle = km_oracle(9);
    let table = kontsevich_manin_table(9);
    for (a, b) in table.iter().zip(&oracle) {
        assert_eq!(*a, BigInt::from(*b));
    }
    assert_eq!(oracle[3], 620);
    assert_eq!(oracle[4], 87304);
}

#[test]
fn km_sextic_value() {
    assert_eq!(kontsevich_manin(6), BigInt::from(26_312_976u64));
}

#[test]
fn delta_examples() {
    assert_eq!(delta_exponent(2, 1, 3), Rational::new(9, 4));
    assert_eq!(delta_exponent(4, 1, 4), Rational::new(2, 1));
    assert_eq!(delta_exponent(2, 1, 0), Rational::new(0, 1));
}

#[test]
fn nl_bookkeeping() {
    assert_eq!(boundary_degree_from_nl(&NLData::for_case(NlCase::Sextic)).unwrap(), 83200);
    assert_eq!(boundary_degree_from_nl(&NLData::for_case(NlCase::Quartic)).unwrap(), 38475);
}

#[test]
fn nl_guards() {
    let mut bad = NLData::for_case(NlCase::Sextic);
    bad.divisor = 3;
    assert!(matches!(boundary_degree_from_nl(&bad), Err(Error::NonExactDivision { .. })));
    let mut missing = NLData::for_case(NlCase::Quartic);
    missing.coefficients.retain(|(e, _)| *e != Rational::new(2, 1));
    assert!(matches!(boundary_degree_from_nl(&missing), Err(Error::MissingThetaCoefficient(_))));
}

#[test]
fn discriminant_examples() {
    assert_eq!(discriminant_degree(3, 3), BigUint::from(75u32));
    assert_eq!(discriminant_degree(4, 2), BigUint::from(108u32));
    for d in 1..6 {
        assert_eq!(discriminant_degree(1, d), BigUint::from(1u32));
    }
}

proptest! {
    #[test]
    fn delta_clears_denominator(l in prop::sample::select(vec![2i64, 4]), g in 0i64..6, dot in -10i64..10) {
        let d = delta_exponent(l, g, dot);
        prop_assert_eq!(d * Rational::from_integer(2 * l), Rational::from_integer(dot * dot - l * (2 * g - 2)));
    }

    #[test]
    fn discriminant_by_repeated_multiplication(n in 1u32..8, d in 1u32..8) {
        let mut acc = n as u128;
        for _ in 1..n {
            acc *= (2 * d - 1) as u128;
        }
        prop_assert_eq!(discriminant_degree(n, d), BigUint::from(acc));
    }

    #[test]
    fn binomial_symmetry_and_pascal(n in 1i64..60, k in 0i64..60) {
        prop_assert_eq!(binomial(n, k), binomial(n, n - k));
        prop_assert_eq!(binomial(n, k), binomial(n - 1, k - 1) + binomial(n - 1, k));
    }
}
