//! ψ-class intersection numbers `<τ_{d_1} ... τ_{d_n}>_g` on the moduli space
//! of stable curves, evaluated exactly by memoized recursion (genus-zero
//! multinomials, String, Dilaton, the one-point formula and the Virasoro
//! constraints), plus elimination of κ-classes in favour of ψ-classes.

use std::collections::HashMap;
use std::fmt;
use std::sync::RwLock;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::arith::{
    factorial, multinomial, odd_double_factorial, pow_bigint, rational_int, Rational,
};
use crate::dvector::DVector;
use crate::error::{domain, Result};

/// Canonical key of a correlator: genus plus sorted exponent multiset.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PsiKey {
    genus: u32,
    exponents: DVector,
}

impl PsiKey {
    pub fn new(genus: u32, exponents: impl Into<DVector>) -> Self {
        Self {
            genus,
            exponents: exponents.into(),
        }
    }

    pub fn genus(&self) -> u32 {
        self.genus
    }

    pub fn exponents(&self) -> &DVector {
        &self.exponents
    }

    pub fn n(&self) -> usize {
        self.exponents.len()
    }

    /// `2g - 2 + n > 0`.
    pub fn is_stable(&self) -> bool {
        2 * i64::from(self.genus) - 2 + self.n() as i64 > 0
    }

    /// `sum d_i = 3g - 3 + n`.
    pub fn has_matching_dimension(&self) -> bool {
        self.exponents.total() as i64 == 3 * i64::from(self.genus) - 3 + self.n() as i64
    }
}

impl fmt::Display for PsiKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "<")?;
        for (i, d) in self.exponents.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            write!(f, "t{d}")?;
        }
        write!(f, ">_{}", self.genus)
    }
}

/// `<τ_{d_1} ... τ_{d_n}>_0 = (n-3)! / prod d_i!`, zero off the dimension.
pub fn genus0_closed_form(d: &DVector) -> Rational {
    let n = d.len() as u64;
    if n < 3 || d.total() != n - 3 {
        return Rational::zero();
    }
    let parts: Vec<u64> = d.iter().map(u64::from).collect();
    rational_int(multinomial(n - 3, &parts).expect("parts sum checked"))
}

/// `<τ_{3g-3+n} τ_0^{n-1}>_g = 1 / (24^g g!)`.
pub fn one_point_closed_form(g: u32, n: u32) -> Result<Rational> {
    if g == 0 {
        return Err(domain("one-point formula needs genus >= 1"));
    }
    if n == 0 {
        return Err(domain("one-point formula needs n >= 1"));
    }
    let den = pow_bigint(24, u64::from(g)) * factorial(u64::from(g));
    Ok(Rational::new(BigInt::one(), den))
}

/// Memoizing evaluator. The memo table is the only shared state; lookups
/// take a read lock and inserts a write lock, never held across recursion.
#[derive(Debug, Default)]
pub struct IntersectionEngine {
    memo: RwLock<HashMap<PsiKey, Rational>>,
}

impl IntersectionEngine {
    pub fn new() -> Self {
        Self::default()
    }

    /// Correlator for a literal insertion list; negative exponents or genus give 0.
    pub fn psi(&self, genus: i64, exponents: &[i64]) -> Rational {
        let Ok(genus) = u32::try_from(genus) else {
            return Rational::zero();
        };
        match DVector::from_signed(exponents) {
            Some(d) => self.psi_intersection(&PsiKey::new(genus, d)),
            None => Rational::zero(),
        }
    }

    pub fn psi_intersection(&self, key: &PsiKey) -> Rational {
        if !key.is_stable() || !key.has_matching_dimension() {
            return Rational::zero();
        }
        if let Some(v) = self.memo.read().expect("memo lock").get(key) {
            return v.clone();
        }
        let value = self.compute(key);
        self.memo
            .write()
            .expect("memo lock")
            .insert(key.clone(), value.clone());
        value
    }

    fn compute(&self, key: &PsiKey) -> Rational {
        let d = key.exponents();
        if key.genus == 0 {
            return genus0_closed_form(d);
        }
        if d.contains(0) {
            return self.string_step(key).expect("stable target in genus >= 1");
        }
        if key.n() == 1 {
            return one_point_closed_form(key.genus, 1).expect("genus >= 1");
        }
        if d.contains(1) {
            return self.dilaton_step(key).expect("n >= 2 in genus >= 1");
        }
        self.virasoro_step(key, 0)
            .expect("largest exponent is >= 2")
    }

    /// String equation: removes one `τ_0`.
    pub fn string_step(&self, key: &PsiKey) -> Result<Rational> {
        let rest = key
            .exponents()
            .without(0)
            .ok_or_else(|| domain(format!("{key} has no τ_0 insertion")))?;
        let target = PsiKey::new(key.genus, rest.clone());
        if !target.is_stable() {
            return Err(domain(format!(
                "String equation on {key} has unstable target"
            )));
        }
        let entries = rest.entries();
        let mut sum = Rational::zero();
        for i in 0..entries.len() {
            if entries[i] == 0 {
                continue;
            }
            let mut lowered = entries.to_vec();
            lowered[i] -= 1;
            sum += self.psi_intersection(&PsiKey::new(key.genus, lowered));
        }
        Ok(sum)
    }

    /// Dilaton equation: removes one `τ_1` at the cost of `2g - 2 + n`.
    pub fn dilaton_step(&self, key: &PsiKey) -> Result<Rational> {
        let rest = key
            .exponents()
            .without(1)
            .ok_or_else(|| domain(format!("{key} has no τ_1 insertion")))?;
        let target = PsiKey::new(key.genus, rest);
        if !target.is_stable() {
            return Err(domain(format!(
                "Dilaton equation on {key} has unstable target"
            )));
        }
        let factor = 2 * i64::from(key.genus) - 2 + target.n() as i64;
        Ok(rational_int(factor) * self.psi_intersection(&target))
    }

    /// One application of the Virasoro constraint with `τ_{m+1}` taken from
    /// position `pivot` of the canonical exponent list (`m >= 1`).
    pub fn virasoro_step(&self, key: &PsiKey, pivot: usize) -> Result<Rational> {
        let entries = key.exponents().entries();
        let pivot_exp = *entries
            .get(pivot)
            .ok_or_else(|| domain(format!("pivot {pivot} out of range for {key}")))?;
        if pivot_exp < 2 {
            return Err(domain(format!(
                "Virasoro pivot τ_{pivot_exp} in {key} needs exponent >= 2"
            )));
        }
        let g = i64::from(key.genus);
        let m = i64::from(pivot_exp) - 1;
        let rest: Vec<i64> = entries
            .iter()
            .enumerate()
            .filter(|&(i, _)| i != pivot)
            .map(|(_, &e)| i64::from(e))
            .collect();

        let mut total = Rational::zero();

        // Shift terms: τ_{d_i} -> τ_{d_i + m}.
        for i in 0..rest.len() {
            let coef = odd_double_factorial(rest[i] + m) / odd_double_factorial(rest[i] - 1);
            let mut shifted = rest.clone();
            shifted[i] += m;
            total += rational_int(coef) * self.psi(g, &shifted);
        }

        let half = Rational::new(BigInt::one(), BigInt::from(2));

        // Genus-drop terms.
        if g >= 1 {
            let mut sum = Rational::zero();
            for a in 0..m {
                let b = m - 1 - a;
                let mut ext = rest.clone();
                ext.push(a);
                ext.push(b);
                let coef = odd_double_factorial(a) * odd_double_factorial(b);
                sum += rational_int(coef) * self.psi(g - 1, &ext);
            }
            total += &half * sum;
        }

        // Splitting terms; the genus g1 of the τ_a side is fixed by dimension.
        let mut sum = Rational::zero();
        let r = rest.len();
        for a in 0..m {
            let b = m - 1 - a;
            let coef = rational_int(odd_double_factorial(a) * odd_double_factorial(b));
            for mask in 0u64..(1u64 << r) {
                let mut left = vec![a];
                let mut right = vec![b];
                for (i, &e) in rest.iter().enumerate() {
                    if mask & (1 << i) != 0 {
                        left.push(e);
                    } else {
                        right.push(e);
                    }
                }
                let three_g1 = left.iter().sum::<i64>() + 3 - left.len() as i64;
                if three_g1 % 3 != 0 {
                    continue;
                }
                let g1 = three_g1 / 3;
                if g1 < 0 || g1 > g {
                    continue;
                }
                let lv = self.psi(g1, &left);
                if lv.is_zero() {
                    continue;
                }
                sum += &coef * lv * self.psi(g - g1, &right);
            }
        }
        total += half * sum;

        Ok(total / rational_int(odd_double_factorial(m + 1)))
    }

    /// Reduces an integral of κ- and ψ-classes to pure ψ-correlators by
    /// eliminating one κ factor per step.
    pub fn kappa_reduce(&self, mono: &KappaPsiMonomial) -> Rational {
        let n = mono.psi.len() as i64;
        let g = i64::from(mono.genus);
        let degree: u64 = mono.kappas.iter().map(|&k| u64::from(k)).sum::<u64>() + mono.psi.total();
        if 2 * g - 2 + n <= 0 || degree as i64 != 3 * g - 3 + n {
            return Rational::zero();
        }
        let Some((&m, others)) = mono.kappas.split_first() else {
            return self.psi_intersection(&PsiKey::new(mono.genus, mono.psi.clone()));
        };
        let mut total = Rational::zero();
        for mask in 0u64..(1u64 << others.len()) {
            let mut kept = Vec::new();
            let mut extra = 0u32;
            let mut sign_negative = false;
            for (i, &k) in others.iter().enumerate() {
                if mask & (1 << i) != 0 {
                    extra += k;
                    sign_negative = !sign_negative;
                } else {
                    kept.push(k);
                }
            }
            let next = KappaPsiMonomial {
                genus: mono.genus,
                kappas: kept,
                psi: mono.psi.with(m + 1 + extra),
            };
            let v = self.kappa_reduce(&next);
            if sign_negative {
                total -= v;
            } else {
                total += v;
            }
        }
        total
    }

    /// Every applicable first reduction of `key`, each finished by the
    /// default dispatch. On a consistent implementation all values agree.
    pub fn reduction_routes(&self, key: &PsiKey) -> Vec<(String, Rational)> {
        let mut out = Vec::new();
        if key.genus == 0 && key.has_matching_dimension() && key.n() >= 3 {
            out.push(("genus0".to_string(), genus0_closed_form(key.exponents())));
        }
        if key.n() == 1 && key.genus >= 1 && key.has_matching_dimension() {
            if let Ok(v) = one_point_closed_form(key.genus, 1) {
                out.push(("one-point".to_string(), v));
            }
        }
        if let Ok(v) = self.string_step(key) {
            out.push(("string".to_string(), v));
        }
        if let Ok(v) = self.dilaton_step(key) {
            out.push(("dilaton".to_string(), v));
        }
        let entries = key.exponents().entries();
        for (i, &e) in entries.iter().enumerate() {
            if e >= 2 && (i == 0 || entries[i - 1] != e) {
                if let Ok(v) = self.virasoro_step(key, i) {
                    out.push((format!("virasoro(τ_{e})"), v));
                }
            }
        }
        out
    }

    pub fn len(&self) -> usize {
        self.memo.read().expect("memo lock").len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Snapshot of the memo table, sorted by key.
    pub fn memo_entries(&self) -> Vec<(PsiKey, Rational)> {
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

    /// Preloads memo entries (e.g. from a cache file).
    pub fn seed(&self, entries: impl IntoIterator<Item = (PsiKey, Rational)>) {
        let mut memo = self.memo.write().expect("memo lock");
        memo.extend(entries);
    }
}

/// Integrand `κ_{m_1} ... κ_{m_r} ψ_1^{d_1} ... ψ_n^{d_n}` on `M̄_{g,n}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KappaPsiMonomial {
    genus: u32,
    kappas: Vec<u32>,
    psi: DVector,
}

impl KappaPsiMonomial {
    /// κ_0 is rejected; substitute `κ_0 = 2g - 2 + n` before calling.
    pub fn new(genus: u32, mut kappas: Vec<u32>, psi: impl Into<DVector>) -> Result<Self> {
        if kappas.contains(&0) {
            return Err(domain(
                "κ_0 factors are not supported; replace κ_0 by the scalar 2g - 2 + n",
            ));
        }
        kappas.sort_unstable_by(|a, b| b.cmp(a));
        Ok(Self {
            genus,
            kappas,
            psi: psi.into(),
        })
    }

    pub fn genus(&self) -> u32 {
        self.genus
    }

    pub fn kappas(&self) -> &[u32] {
        &self.kappas
    }

    pub fn psi(&self) -> &DVector {
        &self.psi
    }
}
