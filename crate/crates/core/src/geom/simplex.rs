//! Open lattice simplices, their disjoint unions, and checking such a union
//! against an inside-out polytope.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use super::linalg::{combinations, det, inverse, rank};
use super::polytope::{check_dilate, for_each_point, lattice_count_insideout, InsideOutPolytope};
use crate::arith::{rational_int, Rational};
use crate::error::{domain, Result};
use crate::poly::FStarVector;

/// Relative interior of the convex hull of affinely independent lattice
/// points.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct OpenSimplex {
    vertices: Vec<Vec<i64>>,
}

impl OpenSimplex {
    pub fn new(vertices: Vec<Vec<i64>>) -> Result<Self> {
        let Some(first) = vertices.first() else {
            return Err(domain("a simplex needs at least one vertex"));
        };
        let dim = first.len();
        if dim == 0 || vertices.iter().any(|v| v.len() != dim) {
            return Err(domain(
                "simplex vertices must share a positive ambient dimension",
            ));
        }
        if vertices.len() > dim + 1 || rank(&edge_rows(&vertices)) != vertices.len() - 1 {
            return Err(domain("simplex vertices are affinely dependent"));
        }
        Ok(OpenSimplex { vertices })
    }

    pub fn vertices(&self) -> &[Vec<i64>] {
        &self.vertices
    }

    /// Dimension `k` of the simplex, one less than the vertex count.
    pub fn dim(&self) -> usize {
        self.vertices.len() - 1
    }

    pub fn ambient_dim(&self) -> usize {
        self.vertices[0].len()
    }

    /// Vertex set in sorted order, for comparing simplices as sets.
    pub fn canonical(&self) -> OpenSimplex {
        let mut v = self.vertices.clone();
        v.sort();
        OpenSimplex { vertices: v }
    }

    /// Integer points of the open dilate `g S`, lexicographic.
    pub fn points(&self, g: i64) -> Result<Vec<Vec<i64>>> {
        check_dilate(g)?;
        let loc = Locator::new(self);
        let ranges: Vec<(i64, i64)> = (0..self.ambient_dim())
            .map(|i| {
                let lo = self.vertices.iter().map(|v| v[i]).min().unwrap_or(0);
                let hi = self.vertices.iter().map(|v| v[i]).max().unwrap_or(0);
                (g * lo, g * hi)
            })
            .collect();
        let mut out = Vec::new();
        for_each_point(&ranges, |x| {
            if loc.inside(x, g) {
                out.push(x.to_vec());
            }
        });
        Ok(out)
    }
}

impl fmt::Display for OpenSimplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .vertices
            .iter()
            .map(|v| {
                let c: Vec<String> = v.iter().map(i64::to_string).collect();
                format!("({})", c.join(","))
            })
            .collect();
        write!(f, "open[{}]", parts.join(" "))
    }
}

/// Rows of the ambient_dim × k matrix whose columns are `v_i - v_0`.
fn edge_rows(vertices: &[Vec<i64>]) -> Vec<Vec<Rational>> {
    let v0 = &vertices[0];
    (0..v0.len())
        .map(|r| {
            vertices[1..]
                .iter()
                .map(|v| rational_int(v[r] - v0[r]))
                .collect()
        })
        .collect()
}

/// Exact barycentric membership test for one simplex, in integers: with `M`
/// an invertible k × k block of the edge matrix, `adj = det(M) M^{-1}`.
struct Locator<'a> {
    simplex: &'a OpenSimplex,
    rows: Vec<usize>,
    adj: Vec<Vec<i128>>,
    det: i128,
    edges: Vec<Vec<i128>>,
}

impl<'a> Locator<'a> {
    fn new(simplex: &'a OpenSimplex) -> Self {
        let edges = edge_rows(&simplex.vertices);
        let k = simplex.dim();
        let int = |x: &Rational| -> i128 {
            assert!(x.is_integer(), "adjugate entries are integers");
            i128::try_from(x.to_integer()).expect("small coordinates")
        };
        let (rows, adj, d) = combinations(edges.len(), k)
            .into_iter()
            .find_map(|rows| {
                let block: Vec<Vec<Rational>> = rows.iter().map(|&r| edges[r].clone()).collect();
                let d = det(&block);
                let inv = inverse(&block)?;
                let adj = inv
                    .iter()
                    .map(|row| row.iter().map(|x| int(&(x * &d))).collect())
                    .collect();
                Some((rows, adj, int(&d)))
            })
            .expect("affinely independent");
        let edges = edges
            .iter()
            .map(|row| row.iter().map(int).collect())
            .collect();
        Locator {
            simplex,
            rows,
            adj,
            det: d,
            edges,
        }
    }

    /// Whether `x` is in the relative interior of `g S`.
    fn inside(&self, x: &[i64], g: i64) -> bool {
        let v0 = &self.simplex.vertices[0];
        let rel: Vec<i128> = x
            .iter()
            .zip(v0)
            .map(|(&x, &v)| x as i128 - g as i128 * v as i128)
            .collect();
        let k = self.simplex.dim();
        if k == 0 {
            return rel.iter().all(|&r| r == 0);
        }
        // lam = det * (coordinates of rel in the edge basis)
        let lam: Vec<i128> = self
            .adj
            .iter()
            .map(|row| row.iter().zip(&self.rows).map(|(a, &r)| a * rel[r]).sum())
            .collect();
        let in_hull = self.edges.iter().zip(&rel).all(|(row, &r)| {
            row.iter().zip(&lam).map(|(a, l)| a * l).sum::<i128>() == self.det * r
        });
        if !in_hull {
            return false;
        }
        let sign = self.det.signum();
        let total: i128 = lam.iter().sum();
        lam.iter().all(|&l| sign * l > 0) && sign * total < self.det.abs() * g as i128
    }
}

/// Whether the simplex is lattice-equivalent to a standard simplex: the gcd
/// of the maximal minors of its edge matrix is 1.
pub fn unimodular_check(s: &OpenSimplex) -> Result<bool> {
    let edges = edge_rows(&s.vertices);
    let k = s.dim();
    if k == 0 {
        return Ok(true);
    }
    let mut g = BigInt::zero();
    for rows in combinations(edges.len(), k) {
        let block: Vec<Vec<Rational>> = rows.iter().map(|&r| edges[r].clone()).collect();
        g = g.gcd(&det(&block).to_integer());
    }
    if g.is_zero() {
        return Err(domain("simplex vertices are affinely dependent"));
    }
    Ok(g.is_one())
}

/// A finite family of open simplices meant to be pairwise disjoint.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct OpenSimplexComplex {
    simplices: Vec<OpenSimplex>,
}

impl OpenSimplexComplex {
    pub fn new(simplices: Vec<OpenSimplex>) -> Self {
        OpenSimplexComplex { simplices }
    }

    pub fn simplices(&self) -> &[OpenSimplex] {
        &self.simplices
    }

    pub fn len(&self) -> usize {
        self.simplices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.simplices.is_empty()
    }

    /// Number of simplices of each dimension.
    pub fn fstar(&self) -> FStarVector {
        let top = self.simplices.iter().map(OpenSimplex::dim).max();
        let mut counts = vec![BigInt::zero(); top.map_or(0, |t| t + 1)];
        for s in &self.simplices {
            counts[s.dim()] += 1;
        }
        FStarVector(counts)
    }

    pub fn product(&self, other: &OpenSimplexComplex) -> Result<OpenSimplexComplex> {
        // only joins of points with simplices are simplices; general products
        // need a triangulation of a prism
        let mut out = Vec::new();
        for a in &self.simplices {
            for b in &other.simplices {
                if a.dim() != 0 && b.dim() != 0 {
                    return Err(domain(
                        "product of two positive-dimensional simplices is not a simplex",
                    ));
                }
                let verts = if a.dim() == 0 {
                    b.vertices
                        .iter()
                        .map(|v| [a.vertices[0].clone(), v.clone()].concat())
                        .collect()
                } else {
                    a.vertices
                        .iter()
                        .map(|v| [v.clone(), b.vertices[0].clone()].concat())
                        .collect()
                };
                out.push(OpenSimplex::new(verts)?);
            }
        }
        Ok(OpenSimplexComplex::new(out))
    }
}

/// Total number of lattice points over all open simplices at dilate `g`.
pub fn lattice_count_complex(c: &OpenSimplexComplex, g: i64) -> Result<BigInt> {
    let mut total = BigInt::zero();
    for s in &c.simplices {
        total += s.points(g)?.len();
    }
    Ok(total)
}

/// Outcome of a successful triangulation check.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TriangulationReport {
    pub fstar: FStarVector,
    /// Dilates `1..=verified_dilates` were compared point by point.
    pub verified_dilates: i64,
}

impl fmt::Display for TriangulationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "fstar={} ; verified g=1..{} (finite check, not a proof of disjointness beyond)",
            self.fstar, self.verified_dilates
        )
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum MismatchKind {
    NotUnimodular {
        simplex: usize,
    },
    /// A point lies in two simplices.
    Overlap {
        first: usize,
        second: usize,
    },
    /// A point of the polytope is covered by no simplex.
    Uncovered,
    /// A point of a simplex lies outside the polytope.
    Outside {
        simplex: usize,
    },
}

/// Why a family of simplices fails to triangulate a polytope.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TriangulationMismatch {
    pub g: i64,
    pub point: Option<Vec<i64>>,
    pub kind: MismatchKind,
}

impl fmt::Display for TriangulationMismatch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let at = |p: &Option<Vec<i64>>| p.as_ref().map(|p| format!("{p:?}")).unwrap_or_default();
        match &self.kind {
            MismatchKind::NotUnimodular { simplex } => {
                write!(f, "simplex {simplex} is not unimodular")
            }
            MismatchKind::Overlap { first, second } => write!(
                f,
                "g={}: point {} lies in simplices {first} and {second}",
                self.g,
                at(&self.point)
            ),
            MismatchKind::Uncovered => {
                write!(
                    f,
                    "g={}: point {} of the polytope is not covered",
                    self.g,
                    at(&self.point)
                )
            }
            MismatchKind::Outside { simplex } => write!(
                f,
                "g={}: point {} of simplex {simplex} is outside the polytope",
                self.g,
                at(&self.point)
            ),
        }
    }
}

impl std::error::Error for TriangulationMismatch {}

/// Checks that `c` is a unimodular triangulation of `p` by comparing point
/// sets at every dilate up to `g_max`.
pub fn verify_triangulation(
    c: &OpenSimplexComplex,
    p: &InsideOutPolytope,
    g_max: i64,
) -> Result<Result<TriangulationReport, TriangulationMismatch>> {
    for (i, s) in c.simplices.iter().enumerate() {
        if s.ambient_dim() != p.dim() {
            return Err(domain(format!("simplex {i} lives in the wrong dimension")));
        }
        if !unimodular_check(s)? {
            return Ok(Err(TriangulationMismatch {
                g: 0,
                point: None,
                kind: MismatchKind::NotUnimodular { simplex: i },
            }));
        }
    }
    for g in 1..=g_max {
        let mut owner: BTreeMap<Vec<i64>, usize> = BTreeMap::new();
        for (i, s) in c.simplices.iter().enumerate() {
            for x in s.points(g)? {
                if !p.contains(&x, g) {
                    return Ok(Err(TriangulationMismatch {
                        g,
                        point: Some(x),
                        kind: MismatchKind::Outside { simplex: i },
                    }));
                }
                if let Some(&first) = owner.get(&x) {
                    return Ok(Err(TriangulationMismatch {
                        g,
                        point: Some(x),
                        kind: MismatchKind::Overlap { first, second: i },
                    }));
                }
                owner.insert(x, i);
            }
        }
        // every simplex point is in p, so equal counts mean equal sets
        if BigInt::from(owner.len()) != lattice_count_insideout(p, g)? {
            let missing = p.points(g)?.into_iter().find(|x| !owner.contains_key(x));
            return Ok(Err(TriangulationMismatch {
                g,
                point: missing,
                kind: MismatchKind::Uncovered,
            }));
        }
    }
    Ok(Ok(TriangulationReport {
        fstar: c.fstar(),
        verified_dilates: g_max.max(0),
    }))
}
