//! Polytopes in H-representation, hyperplane arrangements and lattice
//! counting of their dilates.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

use crate::arith::{rational_int, Rational};
use crate::error::{domain, Error, Result};

/// The half-space `normal · x <= offset`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Inequality {
    pub normal: Vec<i64>,
    pub offset: i64,
}

impl Inequality {
    pub fn new(normal: Vec<i64>, offset: i64) -> Self {
        Inequality { normal, offset }
    }

    fn value(&self, x: &[i64]) -> i128 {
        dot(&self.normal, x)
    }
}

/// The locus `normal · x = offset`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Hyperplane {
    pub normal: Vec<i64>,
    pub offset: i64,
}

impl Hyperplane {
    pub fn new(normal: Vec<i64>, offset: i64) -> Result<Self> {
        if normal.iter().all(|&a| a == 0) {
            return Err(domain("hyperplane normal must be nonzero"));
        }
        Ok(Hyperplane { normal, offset })
    }

    /// The coordinate hyperplane `x_axis = offset`.
    pub fn axis(dim: usize, axis: usize, offset: i64) -> Self {
        let mut normal = vec![0; dim];
        normal[axis] = 1;
        Hyperplane { normal, offset }
    }

    /// Sign of `normal · x - scale * offset`.
    pub fn side(&self, x: &[i64], scale: i64) -> std::cmp::Ordering {
        dot(&self.normal, x).cmp(&(scale as i128 * self.offset as i128))
    }
}

fn dot(a: &[i64], x: &[i64]) -> i128 {
    a.iter().zip(x).map(|(&a, &x)| a as i128 * x as i128).sum()
}

/// A bounded polytope `{x : normal_i · x <= offset_i}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HPolytope {
    dim: usize,
    inequalities: Vec<Inequality>,
    /// Rational bounding box, `None` when the polytope is empty.
    bounds: Option<Vec<(Rational, Rational)>>,
}

impl HPolytope {
    pub fn new(dim: usize, inequalities: Vec<Inequality>) -> Result<Self> {
        if dim == 0 {
            return Err(domain("polytope dimension must be at least 1"));
        }
        if let Some(bad) = inequalities.iter().find(|h| h.normal.len() != dim) {
            return Err(domain(format!(
                "inequality normal has length {}, expected {dim}",
                bad.normal.len()
            )));
        }
        let bounds = bounding_box(dim, &inequalities)?;
        Ok(HPolytope {
            dim,
            inequalities,
            bounds,
        })
    }

    /// The box `Π [lo_i, hi_i]`.
    pub fn cuboid(ranges: &[(i64, i64)]) -> Result<Self> {
        let dim = ranges.len();
        let mut ineqs = Vec::with_capacity(2 * dim);
        for (i, &(lo, hi)) in ranges.iter().enumerate() {
            let mut up = vec![0; dim];
            up[i] = 1;
            let mut down = vec![0; dim];
            down[i] = -1;
            ineqs.push(Inequality::new(up, hi));
            ineqs.push(Inequality::new(down, -lo));
        }
        HPolytope::new(dim, ineqs)
    }

    /// `{x >= 0, x_1 + ... + x_dim <= 1}`.
    pub fn standard_simplex(dim: usize) -> Result<Self> {
        let mut ineqs = Vec::with_capacity(dim + 1);
        for i in 0..dim {
            let mut n = vec![0; dim];
            n[i] = -1;
            ineqs.push(Inequality::new(n, 0));
        }
        ineqs.push(Inequality::new(vec![1; dim], 1));
        HPolytope::new(dim, ineqs)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn inequalities(&self) -> &[Inequality] {
        &self.inequalities
    }

    pub fn bounds(&self) -> Option<&[(Rational, Rational)]> {
        self.bounds.as_deref()
    }

    /// Integer ranges `(lo, hi)` when the polytope is an axis-parallel box
    /// with integer corners.
    pub fn as_box(&self) -> Option<Vec<(i64, i64)>> {
        let axis_aligned = self.inequalities.iter().all(|h| {
            h.normal.iter().filter(|&&a| a != 0).count() == 1
                && h.normal.iter().all(|&a| (-1..=1).contains(&a))
        });
        if !axis_aligned {
            return None;
        }
        self.bounds
            .as_ref()?
            .iter()
            .map(|(lo, hi)| {
                (lo.is_integer() && hi.is_integer())
                    .then(|| (to_i64(&lo.to_integer()), to_i64(&hi.to_integer())))
            })
            .collect()
    }

    /// Euclidean volume when the polytope is a box.
    pub fn box_volume(&self) -> Option<BigInt> {
        let ranges = self.as_box()?;
        Some(
            ranges
                .iter()
                .map(|&(lo, hi)| BigInt::from(hi - lo))
                .product(),
        )
    }
}

fn to_i64(x: &BigInt) -> i64 {
    i64::try_from(x).expect("coordinate bound exceeds i64")
}

/// Bounding box by Fourier-Motzkin elimination of every other coordinate.
fn bounding_box(dim: usize, ineqs: &[Inequality]) -> Result<Option<Vec<(Rational, Rational)>>> {
    let system: Vec<(Vec<Rational>, Rational)> = ineqs
        .iter()
        .map(|h| {
            (
                h.normal.iter().map(|&a| rational_int(a)).collect(),
                rational_int(h.offset),
            )
        })
        .collect();
    let mut out = Vec::with_capacity(dim);
    let mut empty = false;
    for keep in 0..dim {
        let mut cur = system.clone();
        for elim in (0..dim).filter(|&j| j != keep) {
            cur = eliminate(cur, elim);
        }
        let mut lo: Option<Rational> = None;
        let mut hi: Option<Rational> = None;
        for (a, b) in &cur {
            let c = &a[keep];
            if c.is_zero() {
                if b.is_negative() {
                    empty = true;
                }
            } else if c.is_positive() {
                let v = b / c;
                hi = Some(hi.map_or(v.clone(), |h| h.min(v)));
            } else {
                let v = b / c;
                lo = Some(lo.map_or(v.clone(), |l| l.max(v)));
            }
        }
        if let (Some(l), Some(h)) = (&lo, &hi) {
            if l > h {
                empty = true;
            }
        }
        if empty {
            return Ok(None);
        }
        match (lo, hi) {
            (Some(l), Some(h)) => out.push((l, h)),
            _ => return Err(Error::Unbounded(keep)),
        }
    }
    Ok(Some(out))
}

fn eliminate(system: Vec<(Vec<Rational>, Rational)>, j: usize) -> Vec<(Vec<Rational>, Rational)> {
    let (mut pos, mut neg, mut rest) = (Vec::new(), Vec::new(), Vec::new());
    for (a, b) in system {
        if a[j].is_zero() {
            rest.push((a, b));
        } else {
            // normalise so the coefficient of x_j is +1 or -1
            let s = a[j].abs();
            let a: Vec<Rational> = a.iter().map(|x| x / &s).collect();
            let b = b / &s;
            if a[j].is_positive() {
                pos.push((a, b));
            } else {
                neg.push((a, b));
            }
        }
    }
    let mut seen: BTreeSet<(Vec<Rational>, Rational)> = rest.iter().cloned().collect();
    for (pa, pb) in &pos {
        for (na, nb) in &neg {
            let a: Vec<Rational> = pa.iter().zip(na).map(|(x, y)| x + y).collect();
            let b = pb + nb;
            if seen.insert((a.clone(), b.clone())) {
                rest.push((a, b));
            }
        }
    }
    rest
}

/// A polytope with some facets removed and a hyperplane arrangement cut out.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InsideOutPolytope {
    polytope: HPolytope,
    arrangement: Vec<Hyperplane>,
    boundary_excluded: Vec<usize>,
}

impl InsideOutPolytope {
    pub fn new(
        polytope: HPolytope,
        arrangement: Vec<Hyperplane>,
        mut boundary_excluded: Vec<usize>,
    ) -> Result<Self> {
        let dim = polytope.dim();
        if let Some(h) = arrangement.iter().find(|h| h.normal.len() != dim) {
            return Err(domain(format!(
                "hyperplane normal has length {}, expected {dim}",
                h.normal.len()
            )));
        }
        boundary_excluded.sort_unstable();
        boundary_excluded.dedup();
        if let Some(&i) = boundary_excluded
            .iter()
            .find(|&&i| i >= polytope.inequalities.len())
        {
            return Err(domain(format!("excluded facet index {i} out of range")));
        }
        Ok(InsideOutPolytope {
            polytope,
            arrangement,
            boundary_excluded,
        })
    }

    /// A closed polytope with nothing removed.
    pub fn closed(polytope: HPolytope) -> Self {
        InsideOutPolytope {
            polytope,
            arrangement: Vec::new(),
            boundary_excluded: Vec::new(),
        }
    }

    pub fn dim(&self) -> usize {
        self.polytope.dim()
    }

    pub fn polytope(&self) -> &HPolytope {
        &self.polytope
    }

    pub fn arrangement(&self) -> &[Hyperplane] {
        &self.arrangement
    }

    pub fn boundary_excluded(&self) -> &[usize] {
        &self.boundary_excluded
    }

    /// Whether the integer point `x` lies in the dilate `g P`. Equivalently,
    /// whether the rational point `x / g` lies in `P`.
    pub fn contains(&self, x: &[i64], g: i64) -> bool {
        let g = g as i128;
        let facets_ok = self.polytope.inequalities.iter().enumerate().all(|(i, h)| {
            let lhs = h.value(x);
            let rhs = g * h.offset as i128;
            if self.boundary_excluded.binary_search(&i).is_ok() {
                lhs < rhs
            } else {
                lhs <= rhs
            }
        });
        facets_ok
            && self
                .arrangement
                .iter()
                .all(|h| dot(&h.normal, x) != g * h.offset as i128)
    }

    /// Integer bounding box of the dilate `g P`; `None` if empty.
    pub fn integer_box(&self, g: i64) -> Option<Vec<(i64, i64)>> {
        let bounds = self.polytope.bounds()?;
        let g = BigInt::from(g);
        let mut out = Vec::with_capacity(bounds.len());
        for (lo, hi) in bounds {
            let lo = lo * &g;
            let hi = hi * &g;
            let l = to_i64(&ceil(&lo));
            let h = to_i64(&hi.floor().to_integer());
            if l > h {
                return None;
            }
            out.push((l, h));
        }
        Some(out)
    }

    /// Lattice points of `g P` in lexicographic order.
    pub fn points(&self, g: i64) -> Result<Vec<Vec<i64>>> {
        check_dilate(g)?;
        let mut out = Vec::new();
        if let Some(ranges) = self.integer_box(g) {
            for_each_point(&ranges, |x| {
                if self.contains(x, g) {
                    out.push(x.to_vec());
                }
            });
        }
        Ok(out)
    }

    /// Cartesian product; removed pieces of either factor stay removed.
    pub fn product(&self, other: &InsideOutPolytope) -> Result<InsideOutPolytope> {
        let (d1, d2) = (self.dim(), other.dim());
        let pad = |n: &[i64], left: bool| -> Vec<i64> {
            let mut v = vec![0; d1 + d2];
            if left {
                v[..d1].copy_from_slice(n);
            } else {
                v[d1..].copy_from_slice(n);
            }
            v
        };
        let mut ineqs = Vec::new();
        for h in self.polytope.inequalities() {
            ineqs.push(Inequality::new(pad(&h.normal, true), h.offset));
        }
        for h in other.polytope.inequalities() {
            ineqs.push(Inequality::new(pad(&h.normal, false), h.offset));
        }
        let mut arr = Vec::new();
        for h in &self.arrangement {
            arr.push(Hyperplane {
                normal: pad(&h.normal, true),
                offset: h.offset,
            });
        }
        for h in &other.arrangement {
            arr.push(Hyperplane {
                normal: pad(&h.normal, false),
                offset: h.offset,
            });
        }
        let shift = self.polytope.inequalities().len();
        let excluded = self
            .boundary_excluded
            .iter()
            .copied()
            .chain(other.boundary_excluded.iter().map(|i| i + shift))
            .collect();
        InsideOutPolytope::new(HPolytope::new(d1 + d2, ineqs)?, arr, excluded)
    }
}

fn ceil(x: &Rational) -> BigInt {
    let (q, r) = x.numer().div_mod_floor(x.denom());
    if r.is_zero() {
        q
    } else {
        q + 1
    }
}

pub(crate) fn check_dilate(g: i64) -> Result<()> {
    if g < 1 {
        return Err(domain(format!("dilate must be at least 1, got {g}")));
    }
    Ok(())
}

/// Visits every integer point of the box in lexicographic order.
pub(crate) fn for_each_point(ranges: &[(i64, i64)], mut f: impl FnMut(&[i64])) {
    if ranges.iter().any(|&(lo, hi)| lo > hi) {
        return;
    }
    let mut x: Vec<i64> = ranges.iter().map(|r| r.0).collect();
    loop {
        f(&x);
        let mut i = ranges.len();
        loop {
            if i == 0 {
                return;
            }
            i -= 1;
            if x[i] < ranges[i].1 {
                x[i] += 1;
                for (xj, r) in x[i + 1..].iter_mut().zip(&ranges[i + 1..]) {
                    *xj = r.0;
                }
                break;
            }
        }
    }
}

/// Number of lattice points in the dilate `g P`.
pub fn lattice_count_insideout(p: &InsideOutPolytope, g: i64) -> Result<BigInt> {
    check_dilate(g)?;
    let mut count: u64 = 0;
    if let Some(ranges) = p.integer_box(g) {
        for_each_point(&ranges, |x| {
            if p.contains(x, g) {
                count += 1;
            }
        });
    }
    Ok(BigInt::from(count))
}
