//! Integer helpers shared by the recursions: double factorials, multinomials
//! and binomials over arbitrary-precision integers.

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{domain, Result};

/// Exact rational number, always in lowest terms with positive denominator.
pub type Rational = num_rational::BigRational;

pub fn rational(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

pub fn rational_int(n: impl Into<BigInt>) -> Rational {
    Rational::from_integer(n.into())
}

/// `k!!` with the empty-product convention `(-1)!! = 0!! = 1`.
pub fn double_factorial(k: i64) -> Result<BigInt> {
    if k < -1 {
        return Err(domain(format!("double factorial undefined for {k}")));
    }
    let mut acc = BigInt::one();
    let mut i = k;
    while i > 1 {
        acc *= i;
        i -= 2;
    }
    Ok(acc)
}

/// `(2d+1)!!` for `d >= -1`; the factor attached to a single insertion.
pub(crate) fn odd_double_factorial(d: i64) -> BigInt {
    double_factorial(2 * d + 1).expect("2d+1 >= -1 for d >= -1")
}

pub fn factorial(n: u64) -> BigInt {
    (2..=n).fold(BigInt::one(), |acc, k| acc * k)
}

/// `total! / prod(parts_i!)`.
pub fn multinomial(total: u64, parts: &[u64]) -> Result<BigInt> {
    let sum: u64 = parts.iter().sum();
    if sum != total {
        return Err(domain(format!(
            "multinomial parts sum to {sum}, expected {total}"
        )));
    }
    // Built as a product of binomials so intermediates stay small.
    let mut acc = BigInt::one();
    let mut placed = 0u64;
    for &p in parts {
        placed += p;
        acc *= binomial(placed, p);
    }
    Ok(acc)
}

/// `C(n, k)` for nonnegative arguments; zero when `k > n`.
pub fn binomial(n: u64, k: u64) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * (n - i) / (i + 1);
    }
    acc
}

pub fn pow_bigint(base: u64, exp: u64) -> BigInt {
    num_traits::pow(BigInt::from(base), exp as usize)
}
