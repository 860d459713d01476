//! The normalized family `L_d(g) = 24^g g! C(d) <τ_d τ_{3g-2+n-|d|}>_g`,
//! built directly as an integer-valued polynomial in `g` by running the
//! String, Dilaton and Virasoro recursions at the polynomial level, together
//! with its shifted `f*`-vector and the invariant scan that compares it to
//! the numeric correlators.

use std::collections::HashMap;
use std::fmt;
use std::sync::RwLock;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::arith::{factorial, odd_double_factorial, pow_bigint, rational_int, Rational};
use crate::dvector::DVector;
use crate::error::{domain, Result};
use crate::intersection::{IntersectionEngine, PsiKey};
use crate::poly::{binomial_poly, FStarVector, IVPoly};

/// `m(d) = ceil((2 - n + |d|) / 3) - 1`; negative for many zero entries.
pub fn m_shift(d: &DVector) -> i64 {
    let num = 2 - d.len() as i64 + d.total() as i64;
    Integer::div_ceil(&num, &3) - 1
}

/// `C(d) = prod (2 d_i + 1)!!`, with `C(∅) = 1`.
pub fn c_normalizer(d: &DVector) -> BigInt {
    d.iter()
        .map(|e| odd_double_factorial(i64::from(e)))
        .fold(BigInt::one(), |acc, x| acc * x)
}

/// Exponent of the completing insertion, `3g - 2 + n - |d|`.
pub fn last_exponent(d: &DVector, g: i64) -> i64 {
    3 * g - 2 + d.len() as i64 - d.total() as i64
}

/// `L_d(g)` computed from correlators; `None` for negative genus.
pub fn numeric_l_value(engine: &IntersectionEngine, d: &DVector, g: i64) -> Option<Rational> {
    if g < 0 {
        return None;
    }
    let last = last_exponent(d, g);
    let Ok(last) = u32::try_from(last) else {
        return Some(Rational::zero());
    };
    let key = PsiKey::new(g as u32, d.with(last));
    let scale = pow_bigint(24, g as u64) * factorial(g as u64) * c_normalizer(d);
    Some(rational_int(scale) * engine.psi_intersection(&key))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LPolyRecord {
    pub d: DVector,
    /// `L_d(g)` in the variable `g`.
    pub poly: IVPoly,
    pub shift_m: i64,
    /// `f*` of `L_d(g + m(d))`.
    pub fstar: FStarVector,
    pub normalizer: BigInt,
}

impl LPolyRecord {
    pub fn shifted(&self) -> IVPoly {
        self.poly.shift(self.shift_m)
    }
}

/// Memoizing builder of `L_d` polynomials keyed by canonical `d`.
#[derive(Debug, Default)]
pub struct LPolyEngine {
    memo: RwLock<HashMap<DVector, IVPoly>>,
}

impl LPolyEngine {
    pub fn new() -> Self {
        Self::default()
    }

    /// `L_d(g)` as a polynomial.
    pub fn l_poly(&self, d: &DVector) -> IVPoly {
        if let Some(p) = self.memo.read().expect("memo lock").get(d) {
            return p.clone();
        }
        let p = self.compute(d);
        self.memo
            .write()
            .expect("memo lock")
            .insert(d.clone(), p.clone());
        p
    }

    fn compute(&self, d: &DVector) -> IVPoly {
        if d.is_empty() {
            return IVPoly::one();
        }
        if let Some(rest) = d.without(0) {
            return self.string_form(&rest);
        }
        if let Some(rest) = d.without(1) {
            let n = rest.len() as i64;
            return &IVPoly::linear(6, 3 * n - 3) * &self.l_poly(&rest);
        }
        self.virasoro_form(d)
    }

    /// `L_{d ∪ {0}} = sum_i (2 d_i + 1) L_{d with d_i - 1} + L_d`; entries
    /// that would become `-1` contribute nothing.
    fn string_form(&self, rest: &DVector) -> IVPoly {
        let mut acc = self.l_poly(rest);
        let entries = rest.entries();
        for i in 0..entries.len() {
            if entries[i] == 0 {
                continue;
            }
            let mut lowered = entries.to_vec();
            lowered[i] -= 1;
            let term = self.l_poly(&DVector::new(lowered));
            acc += &term.scale_int(2 * i64::from(entries[i]) + 1);
        }
        acc
    }

    /// Virasoro recursion with the largest entry `d_1 >= 2` as pivot.
    fn virasoro_form(&self, d: &DVector) -> IVPoly {
        let d1 = d.largest().expect("nonempty");
        debug_assert!(d1 >= 2);
        let rest = d.without(d1).expect("largest entry present");
        let n = d.len() as i64;
        let total = d.total() as i64;
        let r = rest.entries();
        let mut acc = IVPoly::zero();

        // Shift terms: d_i -> d_i + d_1 - 1.
        for i in 0..r.len() {
            let mut merged = r.to_vec();
            merged[i] += d1 - 1;
            let term = self.l_poly(&DVector::new(merged));
            acc += &term.scale_int(2 * i64::from(r[i]) + 1);
        }

        // The completing insertion absorbs the pivot.
        let mut product = IVPoly::one();
        for k in 1..=i64::from(d1) {
            product = &product * &IVPoly::linear(6, -4 + 2 * n - 2 * total + 2 * k - 1);
        }
        acc += &(&product * &self.l_poly(&rest));

        // Genus drop.
        let mut drop_sum = IVPoly::zero();
        for a in 0..=d1 - 2 {
            let b = d1 - 2 - a;
            drop_sum += &self.l_poly(&rest.with(a).with(b)).shift(-1);
        }
        acc += &(&IVPoly::linear(12, 0) * &drop_sum);

        // Splitting: the genus g1 of the τ_a side is a constant fixed by (I, a).
        for a in 0..=d1 - 2 {
            let b = d1 - 2 - a;
            let coef = odd_double_factorial(i64::from(a));
            for mask in 0u64..(1u64 << r.len()) {
                let (mut left, mut right) = (Vec::new(), vec![b]);
                for (i, &e) in r.iter().enumerate() {
                    if mask & (1 << i) != 0 {
                        left.push(e);
                    } else {
                        right.push(e);
                    }
                }
                let left_total: i64 = left.iter().map(|&e| i64::from(e)).sum();
                let three_g1 = i64::from(a) + left_total + 2 - left.len() as i64;
                if three_g1 < 0 || three_g1 % 3 != 0 {
                    continue;
                }
                let g1 = three_g1 / 3;
                // Left factor lives on M̄_{g1, |I|+1}.
                let n_left = left.len() as i64 + 1;
                if 2 * g1 - 2 + n_left <= 0 {
                    continue;
                }
                let left_d = DVector::new(left);
                let left_value = self.l_poly(&left_d).eval_int(g1);
                if left_value.is_zero() {
                    continue;
                }
                let right_poly = self.l_poly(&DVector::new(right)).shift(-g1);
                let term = &right_poly * &binomial_poly(0, g1 as u64);
                acc += &term.scale(&(left_value * rational_int(coef.clone())));
            }
        }
        acc
    }

    /// Full record for `d`: polynomial, shift, `f*` of the shifted polynomial, `C(d)`.
    pub fn l_polynomial(&self, d: &DVector) -> Result<LPolyRecord> {
        let poly = self.l_poly(d);
        let shift_m = m_shift(d);
        let fstar = poly.shift(shift_m).to_fstar()?;
        Ok(LPolyRecord {
            d: d.clone(),
            poly,
            shift_m,
            fstar,
            normalizer: c_normalizer(d),
        })
    }

    pub fn fstar_of_shifted(&self, d: &DVector) -> Result<FStarVector> {
        self.l_poly(d).shift(m_shift(d)).to_fstar()
    }

    pub fn len(&self) -> usize {
        self.memo.read().expect("memo lock").len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn memo_entries(&self) -> Vec<(DVector, IVPoly)> {
        let mut v: Vec<_> = self
            .memo
            .read()
            .expect("memo lock")
            .iter()
            .map(|(k, v)| (k.clone(), v.clone()))
            .collect();
        v.sort_by(|a, b| a.0.cmp(&b.0));
        v
    }

    pub fn seed(&self, entries: impl IntoIterator<Item = (DVector, IVPoly)>) {
        self.memo.write().expect("memo lock").extend(entries);
    }
}

/// Classification of an integer-valued polynomial by the sign of its `f*`-vector.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BreuerVerdict {
    EhrhartOfPartialComplex,
    NotIntegerValued,
    NegativeFStar(usize),
}

impl fmt::Display for BreuerVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::EhrhartOfPartialComplex => f.write_str("ehrhart-of-partial-complex"),
            Self::NotIntegerValued => f.write_str("not-integer-valued"),
            Self::NegativeFStar(i) => write!(f, "negative-fstar({i})"),
        }
    }
}

pub fn breuer_check(p: &IVPoly) -> BreuerVerdict {
    match p.to_fstar() {
        Err(_) => BreuerVerdict::NotIntegerValued,
        Ok(f) => match f.first_negative() {
            Some(i) => BreuerVerdict::NegativeFStar(i),
            None => BreuerVerdict::EhrhartOfPartialComplex,
        },
    }
}

fn require_all_at_least_two(d: &DVector) -> Result<()> {
    if d.is_empty() || d.iter().any(|e| e < 2) {
        return Err(domain(format!(
            "linear product needs a nonempty d with all entries >= 2, got {}",
            d.paren()
        )));
    }
    Ok(())
}

/// The factor `6(g + m) - 4 + 2n - 2|d| + (2k - 1)`, `1 <= k <= d_1`.
pub fn linear_factor(d: &DVector, k: u32) -> Result<IVPoly> {
    require_all_at_least_two(d)?;
    let d1 = d.largest().expect("nonempty");
    if k == 0 || k > d1 {
        return Err(domain(format!("factor index {k} outside 1..={d1}")));
    }
    let n = d.len() as i64;
    let total = d.total() as i64;
    let m = m_shift(d);
    Ok(IVPoly::linear(
        6,
        6 * m - 4 + 2 * n - 2 * total + 2 * i64::from(k) - 1,
    ))
}

/// `f*` of the product of all linear factors (the completing-insertion term).
pub fn linear_product_fstar(d: &DVector) -> Result<FStarVector> {
    require_all_at_least_two(d)?;
    let d1 = d.largest().expect("nonempty");
    let mut product = IVPoly::one();
    for k in 1..=d1 {
        product = &product * &linear_factor(d, k)?;
    }
    product.to_fstar()
}

/// All canonical `d` with `|d| <= max_total` and `n <= max_parts`, ordered
/// by length, then total, then entries.
pub fn enumerate_dvectors(max_total: u32, max_parts: usize) -> Vec<DVector> {
    fn extend(prefix: &mut Vec<u32>, cap: u32, remaining: u32, len: usize, out: &mut Vec<DVector>) {
        if prefix.len() == len {
            out.push(DVector::new(prefix.clone()));
            return;
        }
        for e in 0..=cap.min(remaining) {
            prefix.push(e);
            extend(prefix, e, remaining - e, len, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    for len in 0..=max_parts {
        let mut group = Vec::new();
        extend(&mut Vec::new(), max_total, max_total, len, &mut group);
        group.sort_by(|a, b| {
            a.total()
                .cmp(&b.total())
                .then_with(|| a.entries().cmp(b.entries()))
        });
        out.extend(group);
    }
    out
}

/// Invariant violation found by [`scan`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Violation {
    pub d: DVector,
    pub message: String,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "d={}: {}", self.d.paren(), self.message)
    }
}

impl std::error::Error for Violation {}

/// Genera at which the polynomial is compared against the correlators.
pub fn oracle_genera(d: &DVector) -> std::ops::RangeInclusive<i64> {
    let m = m_shift(d);
    (m + 1).max(0)..=m + d.total() as i64 + 2
}

/// Checks every invariant of one record, returning the first violation.
pub fn check_record(
    record: &LPolyRecord,
    psi: &IntersectionEngine,
) -> std::result::Result<(), Violation> {
    let d = &record.d;
    let fail = |message: String| Violation {
        d: d.clone(),
        message,
    };
    let total = d.total();
    if record.poly.degree() as u64 != total {
        return Err(fail(format!(
            "degree {} != |d| = {total}",
            record.poly.degree()
        )));
    }
    let lead = rational_int(pow_bigint(6, total));
    if record.poly.leading_coefficient() != lead {
        return Err(fail(format!(
            "leading coefficient {} != 6^{total}",
            record.poly.leading_coefficient()
        )));
    }
    if let Some(i) = record.fstar.first_negative() {
        return Err(fail(format!("f*_{i} is negative in {}", record.fstar)));
    }
    for g in oracle_genera(d) {
        let numeric = numeric_l_value(psi, d, g).expect("g >= 0");
        let poly = record.poly.eval_int(g);
        if numeric != poly {
            return Err(fail(format!(
                "at g={g}: polynomial gives {poly}, correlators give {numeric}"
            )));
        }
    }
    if let Some(d1) = d.largest().filter(|&x| x >= 2) {
        let m = record.shift_m;
        let rest = d.without(d1).expect("present");
        for (i, &e) in rest.entries().iter().enumerate() {
            let mut merged = rest.entries().to_vec();
            merged[i] = e + d1 - 1;
            if m_shift(&DVector::new(merged)) != m {
                return Err(fail("m(d(i)) != m(d)".into()));
            }
        }
        for a in 0..=d1 - 2 {
            if m_shift(&rest.with(a).with(d1 - 2 - a)) != m - 1 {
                return Err(fail("m(d \\ {d1} ∪ {a,b}) != m(d) - 1".into()));
            }
        }
    }
    Ok(())
}

/// Builds and checks the record of every `d` in range, aborting on the
/// first violation.
pub fn scan(
    lpoly: &LPolyEngine,
    psi: &IntersectionEngine,
    max_total: u32,
    max_parts: usize,
) -> std::result::Result<Vec<LPolyRecord>, Violation> {
    enumerate_dvectors(max_total, max_parts)
        .into_iter()
        .map(|d| {
            let record = lpoly.l_polynomial(&d).map_err(|e| Violation {
                d: d.clone(),
                message: e.to_string(),
            })?;
            check_record(&record, psi)?;
            Ok(record)
        })
        .collect()
}
