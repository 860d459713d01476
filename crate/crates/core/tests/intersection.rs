use num_bigint::BigInt;
use num_traits::{One, Zero};
use proptest::prelude::*;

use psiehrhart::arith::{double_factorial, factorial, multinomial, pow_bigint};
use psiehrhart::intersection::{genus0_closed_form, IntersectionEngine, PsiKey};
use psiehrhart::{rational, DVector, Rational};

/// All canonical exponent vectors with at most `n` parts and total at most `total`.
fn canonical_vectors(n: usize, total: u32) -> Vec<Vec<u32>> {
    fn go(max: u32, left: u32, parts: usize, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        out.push(cur.clone());
        if parts == 0 {
            return;
        }
        for e in (0..=max.min(left)).rev() {
            cur.push(e);
            go(e, left - e, parts - 1, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(total, total, n, &mut Vec::new(), &mut out);
    out
}

#[test]
fn reduction_routes_agree_on_small_keys() {
    let engine = IntersectionEngine::new();
    let mut checked = 0;
    for d in canonical_vectors(4, 9) {
        let n = d.len() as i64;
        let total: i64 = d.iter().map(|&e| e as i64).sum();
        // the only genus meeting the dimension constraint
        if (total - n + 3) % 3 != 0 {
            continue;
        }
        let g = (total - n + 3) / 3;
        if g < 0 {
            continue;
        }
        let key = PsiKey::new(g as u32, DVector::new(d.clone()));
        let value = engine.psi_intersection(&key);
        for (route, v) in engine.reduction_routes(&key) {
            assert_eq!(v, value, "{key} via {route}");
            checked += 1;
        }
    }
    assert!(checked > 50, "only {checked} routes compared");
}

/// Genus-zero values from the String equation alone, down to `<t0 t0 t0>`.
fn genus0_by_string(d: &[u32]) -> BigInt {
    let n = d.len();
    if n < 3 || d.iter().sum::<u32>() as usize + 3 != n {
        return BigInt::zero();
    }
    if n == 3 {
        return BigInt::one();
    }
    // total is n - 3 < n, so a zero entry exists
    let z = d.iter().position(|&e| e == 0).unwrap();
    let rest: Vec<u32> = d
        .iter()
        .enumerate()
        .filter(|&(i, _)| i != z)
        .map(|(_, &e)| e)
        .collect();
    (0..rest.len())
        .filter(|&i| rest[i] > 0)
        .map(|i| {
            let mut lowered = rest.clone();
            lowered[i] -= 1;
            genus0_by_string(&lowered)
        })
        .sum()
}

#[test]
fn genus_zero_recursion_matches_multinomial() {
    let engine = IntersectionEngine::new();
    for n in 3..=8usize {
        for d in canonical_vectors(n, n as u32 - 3) {
            if d.len() != n || d.iter().sum::<u32>() != n as u32 - 3 {
                continue;
            }
            let key = PsiKey::new(0, DVector::new(d.clone()));
            let parts: Vec<u64> = d.iter().map(|&e| e as u64).collect();
            let expected = Rational::from_integer(multinomial(n as u64 - 3, &parts).unwrap());
            assert_eq!(
                Rational::from_integer(genus0_by_string(&d)),
                expected,
                "{key}"
            );
            for (route, v) in engine.reduction_routes(&key) {
                assert_eq!(v, expected, "{key} via {route}");
            }
        }
    }
}

#[test]
fn one_point_values_through_twenty() {
    let engine = IntersectionEngine::new();
    for g in 1..=20i64 {
        let expected = Rational::new(
            BigInt::one(),
            pow_bigint(24, g as u64) * factorial(g as u64),
        );
        assert_eq!(engine.psi(g, &[3 * g - 2]), expected, "g={g}");
    }
}

#[test]
fn one_point_values_by_virasoro() {
    // the recursion, not the closed form, on the pivot itself
    let engine = IntersectionEngine::new();
    for g in 2..=6u32 {
        let key = PsiKey::new(g, DVector::new(vec![3 * g - 2]));
        let expected = Rational::new(
            BigInt::one(),
            pow_bigint(24, g as u64) * factorial(g as u64),
        );
        assert_eq!(engine.virasoro_step(&key, 0).unwrap(), expected, "g={g}");
    }
}

#[test]
fn known_small_values() {
    let e = IntersectionEngine::new();
    assert_eq!(e.psi(1, &[1]), rational(1, 24));
    assert_eq!(e.psi(2, &[4]), rational(1, 1152));
    assert_eq!(e.psi(2, &[2, 3]), rational(29, 5760));
    assert_eq!(e.psi(2, &[2, 2, 2]), rational(7, 240));
    assert_eq!(e.psi(3, &[7]), rational(1, 82944));
    assert_eq!(e.psi(3, &[2, 6]), rational(77, 414720));
    assert_eq!(e.psi(3, &[3, 5]), rational(503, 1451520));
    assert_eq!(e.psi(3, &[4, 4]), rational(607, 1451520));
}

#[test]
fn normalized_values_are_integers() {
    let e = IntersectionEngine::new();
    for d in canonical_vectors(3, 6) {
        let d = DVector::new(d);
        let n = d.len() as i64;
        let c: BigInt = d
            .iter()
            .map(|x| double_factorial(2 * x as i64 + 1).unwrap())
            .product();
        for g in 0..=5i64 {
            let last = 3 * g - 2 + n - d.total() as i64;
            if last < 0 {
                continue;
            }
            let mut ins: Vec<i64> = d.iter().map(i64::from).collect();
            ins.push(last);
            let v = e.psi(g, &ins)
                * Rational::from_integer(pow_bigint(24, g as u64) * factorial(g as u64) * &c);
            assert!(v.is_integer(), "d={d} g={g}: {v}");
        }
    }
}

#[test]
fn closed_form_off_dimension_is_zero() {
    assert!(genus0_closed_form(&DVector::new(vec![1, 0, 0])).is_zero());
}

proptest! {
    #[test]
    fn permutation_symmetry(g in 0i64..4, mut d in prop::collection::vec(0i64..8, 1..5), seed in any::<u64>()) {
        let e = IntersectionEngine::new();
        let sorted = e.psi(g, &d);
        // deterministic shuffle from the seed
        let mut s = seed;
        for i in (1..d.len()).rev() {
            s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            d.swap(i, (s >> 33) as usize % (i + 1));
        }
        prop_assert_eq!(e.psi(g, &d), sorted);
    }

    #[test]
    fn dimension_vanishing(g in 0i64..5, d in prop::collection::vec(0i64..12, 1..6)) {
        let total: i64 = d.iter().sum();
        prop_assume!(total != 3 * g - 3 + d.len() as i64);
        prop_assert!(IntersectionEngine::new().psi(g, &d).is_zero());
    }

    #[test]
    fn negative_inputs_vanish(g in -3i64..4, d in prop::collection::vec(-2i64..6, 1..5)) {
        prop_assume!(g < 0 || d.iter().any(|&x| x < 0));
        prop_assert!(IntersectionEngine::new().psi(g, &d).is_zero());
    }
}
