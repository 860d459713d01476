//! Univariate polynomials over the rationals, stored by monomial
//! coefficients, with the binomial-basis (`f*`) view used for Ehrhart
//! polynomials: `p(g) = sum_k f*_k C(g-1, k)`.

use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::arith::{rational_int, Rational};
use crate::error::{Error, Result};

/// Exact polynomial in the variable `g`. Index `k` of the coefficient
/// vector is the coefficient of `g^k`; trailing zeros are never stored.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct IVPoly {
    coeffs: Vec<Rational>,
}

impl IVPoly {
    pub fn zero() -> Self {
        Self { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(Rational::one())
    }

    pub fn constant(c: Rational) -> Self {
        Self::from_coeffs(vec![c])
    }

    /// The polynomial `slope * g + intercept`.
    pub fn linear(slope: impl Into<BigInt>, intercept: impl Into<BigInt>) -> Self {
        Self::from_coeffs(vec![rational_int(intercept), rational_int(slope)])
    }

    /// The polynomial `g`.
    pub fn var() -> Self {
        Self::linear(1, 0)
    }

    pub fn from_coeffs(mut coeffs: Vec<Rational>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    /// Integer monomial coefficients, lowest degree first.
    pub fn from_ints(coeffs: &[i64]) -> Self {
        Self::from_coeffs(coeffs.iter().map(|&c| rational_int(c)).collect())
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree; the zero polynomial reports degree 0.
    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn leading_coefficient(&self) -> Rational {
        self.coeffs.last().cloned().unwrap_or_else(Rational::zero)
    }

    pub fn coeff(&self, k: usize) -> Rational {
        self.coeffs.get(k).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn scale(&self, factor: &Rational) -> Self {
        if factor.is_zero() {
            return Self::zero();
        }
        Self::from_coeffs(self.coeffs.iter().map(|c| c * factor).collect())
    }

    pub fn scale_int(&self, factor: impl Into<BigInt>) -> Self {
        self.scale(&rational_int(factor))
    }

    pub fn eval(&self, x: &Rational) -> Rational {
        self.coeffs
            .iter()
            .rev()
            .fold(Rational::zero(), |acc, c| acc * x + c)
    }

    pub fn eval_int(&self, x: i64) -> Rational {
        self.eval(&rational_int(x))
    }

    /// The polynomial `g -> p(g + k)`.
    pub fn shift(&self, k: i64) -> Self {
        if k == 0 {
            return self.clone();
        }
        let step = Self::linear(1, k);
        self.coeffs.iter().rev().fold(Self::zero(), |acc, c| {
            &(&acc * &step) + &Self::constant(c.clone())
        })
    }

    /// Binomial-basis coefficients `f*_k = (Delta^k p)(1)` as rationals.
    /// Integral exactly when `p` is integer-valued.
    pub fn fstar_rational(&self) -> Vec<Rational> {
        let d = self.degree();
        let mut row: Vec<Rational> = (1..=d as i64 + 1).map(|g| self.eval_int(g)).collect();
        forward_differences(&mut row);
        row
    }

    /// The `f*`-vector; fails if any forward difference at `g = 1` is not an integer.
    pub fn to_fstar(&self) -> Result<FStarVector> {
        let entries = self
            .fstar_rational()
            .into_iter()
            .enumerate()
            .map(|(index, v)| {
                if v.is_integer() {
                    Ok(v.to_integer())
                } else {
                    Err(Error::NotIntegerValued {
                        index,
                        value: v.to_string(),
                    })
                }
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(FStarVector(entries))
    }

    pub fn is_integer_valued(&self) -> bool {
        self.fstar_rational().iter().all(Rational::is_integer)
    }

    /// Inverse of [`IVPoly::fstar_rational`].
    pub fn from_binomial_basis(fstar: &[Rational]) -> Self {
        fstar.iter().enumerate().fold(Self::zero(), |acc, (k, f)| {
            &acc + &binomial_poly(-1, k as u64).scale(f)
        })
    }
}

/// Replaces `values` (samples at consecutive points) by the leading entries
/// of its forward-difference table.
pub(crate) fn forward_differences(values: &mut [Rational]) {
    let n = values.len();
    for level in 1..n {
        for i in (level..n).rev() {
            let prev = values[i - 1].clone();
            values[i] -= prev;
        }
    }
}

/// The degree-`k` polynomial `g -> C(g + shift, k)`.
pub fn binomial_poly(shift: i64, k: u64) -> IVPoly {
    let mut acc = IVPoly::one();
    for i in 0..k as i64 {
        acc = &acc * &IVPoly::linear(1, shift - i);
    }
    let k_fact = crate::arith::factorial(k);
    acc.scale(&Rational::new(BigInt::one(), k_fact))
}

impl Add for &IVPoly {
    type Output = IVPoly;

    fn add(self, rhs: &IVPoly) -> IVPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        IVPoly::from_coeffs((0..n).map(|k| self.coeff(k) + rhs.coeff(k)).collect())
    }
}

impl AddAssign<&IVPoly> for IVPoly {
    fn add_assign(&mut self, rhs: &IVPoly) {
        *self = &*self + rhs;
    }
}

impl Sub for &IVPoly {
    type Output = IVPoly;

    fn sub(self, rhs: &IVPoly) -> IVPoly {
        self + &(-rhs)
    }
}

impl Neg for &IVPoly {
    type Output = IVPoly;

    fn neg(self) -> IVPoly {
        IVPoly::from_coeffs(self.coeffs.iter().map(|c| -c).collect())
    }
}

impl Mul for &IVPoly {
    type Output = IVPoly;

    fn mul(self, rhs: &IVPoly) -> IVPoly {
        if self.is_zero() || rhs.is_zero() {
            return IVPoly::zero();
        }
        let mut out = vec![Rational::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        IVPoly::from_coeffs(out)
    }
}

impl fmt::Display for IVPoly {
    /// Renders as `36*g^2 - 36*g + 15`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let negative = c.is_negative();
            let magnitude = c.abs();
            match (first, negative) {
                (true, true) => f.write_str("-")?,
                (true, false) => {}
                (false, true) => f.write_str(" - ")?,
                (false, false) => f.write_str(" + ")?,
            }
            first = false;
            let unit = magnitude.is_one();
            match k {
                0 => write!(f, "{magnitude}")?,
                1 if unit => f.write_str("g")?,
                1 => write!(f, "{magnitude}*g")?,
                _ if unit => write!(f, "g^{k}")?,
                _ => write!(f, "{magnitude}*g^{k}")?,
            }
        }
        Ok(())
    }
}

/// Integer coefficients of a polynomial in the basis `C(g-1, k)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FStarVector(pub Vec<BigInt>);

impl FStarVector {
    pub fn from_ints(entries: &[i64]) -> Self {
        Self(entries.iter().map(|&e| BigInt::from(e)).collect())
    }

    pub fn entries(&self) -> &[BigInt] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Index of the first negative entry, if any.
    pub fn first_negative(&self) -> Option<usize> {
        self.0.iter().position(Signed::is_negative)
    }

    pub fn is_nonnegative(&self) -> bool {
        self.first_negative().is_none()
    }

    /// `gcd` of all entries (0 for the all-zero vector).
    pub fn gcd(&self) -> BigInt {
        self.0.iter().fold(BigInt::zero(), |acc, e| acc.gcd(e))
    }

    pub fn to_poly(&self) -> IVPoly {
        let rat: Vec<Rational> = self.0.iter().cloned().map(rational_int).collect();
        IVPoly::from_binomial_basis(&rat)
    }

    /// Inverse of [`IVPoly::to_fstar`].
    pub fn from_poly(p: &IVPoly) -> Result<Self> {
        p.to_fstar()
    }
}

/// Free-function form of [`FStarVector::to_poly`].
pub fn from_fstar(f: &FStarVector) -> IVPoly {
    f.to_poly()
}

/// Free-function form of [`IVPoly::to_fstar`].
pub fn to_fstar(p: &IVPoly) -> Result<FStarVector> {
    p.to_fstar()
}

impl fmt::Display for FStarVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (i, e) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{e}")?;
        }
        f.write_str(")")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rational;
    use proptest::prelude::*;

    #[test]
    fn arithmetic_examples() {
        let p = IVPoly::linear(6, -3);
        assert_eq!(&p + &IVPoly::from_ints(&[3]), IVPoly::linear(6, 0));
        assert_eq!(&p * &IVPoly::linear(6, 0), IVPoly::from_ints(&[0, -18, 36]));
        assert_eq!(p.scale(&rational(1, 3)), IVPoly::linear(2, -1));
        assert_eq!(p.scale(&Rational::zero()), IVPoly::zero());
        assert_eq!((&p - &p), IVPoly::zero());
    }

    #[test]
    fn product_degree_is_sum_of_degrees() {
        let p = IVPoly::from_ints(&[1, 2, 3]);
        let q = IVPoly::from_ints(&[-1, 0, 0, 5]);
        assert_eq!((&p * &q).degree(), 5);
    }

    #[test]
    fn shift_examples() {
        assert_eq!(IVPoly::linear(6, -3).shift(1), IVPoly::linear(6, 3));
        let q = IVPoly::from_ints(&[15, -36, 36]);
        assert_eq!(q.shift(0), q);
        assert_eq!(
            IVPoly::from_ints(&[0, 0, 1]).shift(-1),
            IVPoly::from_ints(&[1, -2, 1])
        );
    }

    #[test]
    fn binomial_poly_examples() {
        assert_eq!(binomial_poly(0, 1), IVPoly::var());
        // C(g-1, 2) = (g-1)(g-2)/2
        let expected = IVPoly::from_ints(&[2, -3, 1]).scale(&rational(1, 2));
        assert_eq!(binomial_poly(0, 2).shift(-1), expected);
        assert_eq!(binomial_poly(-1, 2), expected);
        assert_eq!(
            binomial_poly(0, 2),
            IVPoly::from_ints(&[0, -1, 1]).scale(&rational(1, 2))
        );
        assert_eq!(binomial_poly(7, 0), IVPoly::one());
    }

    #[test]
    fn fstar_examples() {
        assert_eq!(
            IVPoly::linear(6, -3).to_fstar().unwrap(),
            FStarVector::from_ints(&[3, 6])
        );
        assert_eq!(
            IVPoly::from_ints(&[15, -36, 36]).to_fstar().unwrap(),
            FStarVector::from_ints(&[15, 72, 72])
        );
        assert_eq!(
            IVPoly::from_ints(&[0, 0, 1]).to_fstar().unwrap(),
            FStarVector::from_ints(&[1, 3, 2])
        );
        assert_eq!(
            IVPoly::zero().to_fstar().unwrap(),
            FStarVector::from_ints(&[0])
        );
    }

    #[test]
    fn from_fstar_examples() {
        assert_eq!(FStarVector::from_ints(&[1]).to_poly(), IVPoly::one());
        assert_eq!(
            FStarVector::from_ints(&[3, 6]).to_poly(),
            IVPoly::linear(6, -3)
        );
        assert_eq!(
            from_fstar(&FStarVector::from_ints(&[18, 90, 72])),
            IVPoly::from_ints(&[0, -18, 36])
        );
    }

    #[test]
    fn non_integer_valued_is_rejected() {
        let half_g2 = IVPoly::from_ints(&[0, 0, 1]).scale(&rational(1, 2));
        assert!(matches!(
            half_g2.to_fstar(),
            Err(Error::NotIntegerValued { index: 0, .. })
        ));
        // g(g-1)/2 is integer-valued despite rational coefficients.
        assert!(binomial_poly(0, 2).is_integer_valued());
    }

    #[test]
    fn display_forms() {
        assert_eq!(
            IVPoly::from_ints(&[15, -36, 36]).to_string(),
            "36*g^2 - 36*g + 15"
        );
        assert_eq!(IVPoly::linear(6, -3).to_string(), "6*g - 3");
        assert_eq!(IVPoly::from_ints(&[1, -2, 1]).to_string(), "g^2 - 2*g + 1");
        assert_eq!(IVPoly::linear(-1, 1).to_string(), "-g + 1");
        assert_eq!(IVPoly::zero().to_string(), "0");
        let p = IVPoly::from_coeffs(vec![rational(1, 1), rational(3, 2), rational(1, 2)]);
        assert_eq!(p.to_string(), "1/2*g^2 + 3/2*g + 1");
    }

    #[test]
    fn pascal_identity_as_polynomials() {
        // C(g, k) = C(g-1, k) + C(g-1, k-1)
        for k in 1..=10u64 {
            let lhs = binomial_poly(0, k);
            let rhs = &binomial_poly(-1, k) + &binomial_poly(-1, k - 1);
            assert_eq!(lhs, rhs, "k = {k}");
        }
    }

    fn nonneg_fstar(max_len: usize) -> impl Strategy<Value = FStarVector> {
        prop::collection::vec(0i64..50, 1..=max_len).prop_map(|v| FStarVector::from_ints(&v))
    }

    proptest! {
        #[test]
        fn fstar_round_trip(entries in prop::collection::vec(-40i64..40, 1..=7)) {
            // Any integer f*-vector yields an integer-valued polynomial of degree <= 6.
            let f = FStarVector::from_ints(&entries);
            let p = f.to_poly();
            let back = p.to_fstar().unwrap();
            prop_assert_eq!(back.to_poly(), p.clone());
            // Entries beyond the true degree vanish, so compare the prefix.
            prop_assert_eq!(&f.0[..back.len()], &back.0[..]);
        }

        #[test]
        fn product_keeps_fstar_nonnegative(f in nonneg_fstar(5), h in nonneg_fstar(5)) {
            let prod = &f.to_poly() * &h.to_poly();
            prop_assert!(prod.to_fstar().unwrap().is_nonnegative());
        }

        #[test]
        fn forward_shift_keeps_fstar_nonnegative(f in nonneg_fstar(5), k in 0i64..5) {
            let shifted = f.to_poly().shift(k);
            prop_assert!(shifted.to_fstar().unwrap().is_nonnegative());
        }

        #[test]
        fn shift_composes(c in prop::collection::vec(-20i64..20, 0..6), a in -5i64..5, b in -5i64..5) {
            let p = IVPoly::from_ints(&c);
            prop_assert_eq!(p.shift(a).shift(b), p.shift(a + b));
            prop_assert_eq!(p.shift(a).eval_int(3), p.eval_int(3 + a));
        }
    }
}
