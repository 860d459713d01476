//! The inside-out polytopes whose lattice counts realise `L_(1)`, `L_(1,1)`
//! and `L_(2)`, together with unimodular triangulations of each.
//!
//! Every fixture is an axis-parallel box minus an arrangement. Faces on the
//! removed hyperplanes are encoded by the arrangement alone, so no facet
//! index appears in `boundary_excluded`.
//!
//! `P11t` is `[0,2] x [0,1]` minus the lines `x_2 = 1`, `x_1 = 1` and
//! `x_1 = 2`. It keeps the corner `(0,0)` and the bottom and left edges up to
//! those lines, and loses the other three corners and `(1,0)`.
//!
//! `P2t` uses `x_1 = ±3, x_2 = ±1, x_1 ± x_2 = ±3`. With the coordinates
//! of the first two lines swapped the count at `g = 1` would be 9, not 5.

use std::fmt::Write as _;

use super::polytope::{HPolytope, Hyperplane, Inequality, InsideOutPolytope};
use super::simplex::{OpenSimplex, OpenSimplexComplex};
use crate::dvector::DVector;
use crate::error::{domain, Error, Result};

pub const FIXTURE_NAMES: [&str; 6] = ["P1", "P1t", "P11", "P11t", "P2", "P2t"];

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Fixture {
    pub name: &'static str,
    pub d: DVector,
    pub polytope: InsideOutPolytope,
    pub triangulation: Option<OpenSimplexComplex>,
    /// `multiplier * count(g) = L_d(g + m(d))`.
    pub multiplier: u64,
}

/// Which diagonal splits a grid cell with no arrangement line through it.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Diagonal {
    /// From `(i, j)` to `(i+1, j+1)`.
    Main,
    /// From `(i, j+1)` to `(i+1, j)`.
    Anti,
}

pub fn builtin_fixture(name: &str) -> Result<Fixture> {
    let line = |n: [i64; 2], c: i64| Hyperplane {
        normal: n.to_vec(),
        offset: c,
    };
    let (name, d, ranges, arrangement, diagonal, multiplier): (
        _,
        &[u32],
        Vec<(i64, i64)>,
        Vec<Hyperplane>,
        _,
        _,
    ) = match name {
        "P1" => (
            "P1",
            &[1],
            vec![(-3, 3)],
            [-3, -2, 2, 3]
                .iter()
                .map(|&c| Hyperplane::axis(1, 0, c))
                .collect(),
            Diagonal::Main,
            1,
        ),
        "P1t" => (
            "P1t",
            &[1],
            vec![(-1, 1)],
            vec![Hyperplane::axis(1, 0, -1), Hyperplane::axis(1, 0, 1)],
            Diagonal::Main,
            3,
        ),
        "P11" => (
            "P11",
            &[1, 1],
            vec![(-3, 3), (-3, 3)],
            vec![
                line([0, 1], 3),
                line([0, 1], 2),
                line([0, 1], 1),
                line([0, 1], 0),
                line([1, 0], 3),
            ],
            Diagonal::Main,
            1,
        ),
        "P11t" => (
            "P11t",
            &[1, 1],
            vec![(0, 2), (0, 1)],
            vec![line([0, 1], 1), line([1, 0], 1), line([1, 0], 2)],
            Diagonal::Main,
            18,
        ),
        "P2" => {
            let mut arr = Vec::new();
            for c in [-3, 3] {
                arr.push(line([1, 0], c));
                arr.push(line([0, 1], c));
            }
            arr.push(line([0, 1], -2));
            arr.push(line([0, 1], 2));
            for c in [-5, -4, 4, 5] {
                arr.push(line([1, 1], c));
                arr.push(line([1, -1], c));
            }
            ("P2", &[2], vec![(-3, 3), (-3, 3)], arr, Diagonal::Main, 1)
        }
        "P2t" => {
            let mut arr = vec![
                line([1, 0], -3),
                line([1, 0], 3),
                line([0, 1], -1),
                line([0, 1], 1),
            ];
            for c in [-3, 3] {
                arr.push(line([1, 1], c));
                arr.push(line([1, -1], c));
            }
            ("P2t", &[2], vec![(-3, 3), (-1, 1)], arr, Diagonal::Anti, 3)
        }
        other => return Err(Error::UnknownFixture(other.to_string())),
    };
    let polytope = InsideOutPolytope::new(HPolytope::cuboid(&ranges)?, arrangement, vec![])?;
    let triangulation = grid_triangulation(&polytope, diagonal)?;
    Ok(Fixture {
        name,
        d: DVector::from(d),
        polytope,
        triangulation: Some(triangulation),
        multiplier,
    })
}

/// Triangulates a box with integer corners in dimension 1 or 2 by the unit
/// grid, one diagonal per cell, and keeps the open faces whose barycenter
/// lies in `p`. A cell crossed by an arrangement line must be cut along one
/// of its diagonals, which then overrides `default`.
pub fn grid_triangulation(p: &InsideOutPolytope, default: Diagonal) -> Result<OpenSimplexComplex> {
    let ranges = p
        .polytope()
        .as_box()
        .ok_or_else(|| domain("grid triangulation needs an integral box"))?;
    let mut faces: Vec<Vec<Vec<i64>>> = Vec::new();
    match *ranges.as_slice() {
        [(lo, hi)] => {
            for x in lo..=hi {
                faces.push(vec![vec![x]]);
                if x < hi {
                    faces.push(vec![vec![x], vec![x + 1]]);
                }
            }
        }
        [(x0, x1), (y0, y1)] => {
            for i in x0..=x1 {
                for j in y0..=y1 {
                    faces.push(vec![vec![i, j]]);
                    if i < x1 {
                        faces.push(vec![vec![i, j], vec![i + 1, j]]);
                    }
                    if j < y1 {
                        faces.push(vec![vec![i, j], vec![i, j + 1]]);
                    }
                    if i < x1 && j < y1 {
                        let (a, b, c, e) = (
                            vec![i, j],
                            vec![i + 1, j],
                            vec![i, j + 1],
                            vec![i + 1, j + 1],
                        );
                        match cell_diagonal(p, i, j, default)? {
                            Diagonal::Main => {
                                faces.push(vec![a.clone(), e.clone()]);
                                faces.push(vec![a.clone(), b, e.clone()]);
                                faces.push(vec![a, c, e]);
                            }
                            Diagonal::Anti => {
                                faces.push(vec![c.clone(), b.clone()]);
                                faces.push(vec![a, b.clone(), c.clone()]);
                                faces.push(vec![b, e, c]);
                            }
                        }
                    }
                }
            }
        }
        _ => return Err(domain("grid triangulation supports dimension 1 and 2 only")),
    }
    let mut kept = Vec::new();
    for f in faces {
        let k = f.len() as i64;
        let sum: Vec<i64> = (0..f[0].len())
            .map(|i| f.iter().map(|v| v[i]).sum())
            .collect();
        // barycenter sum/k lies in p exactly when sum lies in k p
        if p.contains(&sum, k) {
            kept.push(OpenSimplex::new(f)?);
        }
    }
    Ok(OpenSimplexComplex::new(kept))
}

fn cell_diagonal(p: &InsideOutPolytope, i: i64, j: i64, default: Diagonal) -> Result<Diagonal> {
    let corners = [[i, j], [i + 1, j], [i, j + 1], [i + 1, j + 1]];
    let mut forced: Option<Diagonal> = None;
    for h in p.arrangement() {
        let sides: Vec<_> = corners.iter().map(|c| h.side(c, 1)).collect();
        let crosses = sides.contains(&std::cmp::Ordering::Less)
            && sides.contains(&std::cmp::Ordering::Greater);
        if !crosses {
            continue;
        }
        let on = |k: usize| sides[k] == std::cmp::Ordering::Equal;
        let want = if on(0) && on(3) {
            Diagonal::Main
        } else if on(1) && on(2) {
            Diagonal::Anti
        } else {
            return Err(domain(format!(
                "arrangement cuts cell ({i},{j}) off its diagonals"
            )));
        };
        if forced.is_some_and(|f| f != want) {
            return Err(domain(format!(
                "cell ({i},{j}) is cut along both diagonals"
            )));
        }
        forced = Some(want);
    }
    Ok(forced.unwrap_or(default))
}

/// Plain-text form: a header `dim excluded`, where `excluded` is a comma list
/// of facet indices or `-`, then one line per facet `a_1 ... a_dim <= b` and
/// one per arrangement hyperplane `a_1 ... a_dim == b`.
pub fn to_text(p: &InsideOutPolytope) -> String {
    let excluded = if p.boundary_excluded().is_empty() {
        "-".to_string()
    } else {
        p.boundary_excluded()
            .iter()
            .map(usize::to_string)
            .collect::<Vec<_>>()
            .join(",")
    };
    let mut out = format!("{} {}\n", p.dim(), excluded);
    let row = |n: &[i64]| n.iter().map(i64::to_string).collect::<Vec<_>>().join(" ");
    for h in p.polytope().inequalities() {
        let _ = writeln!(out, "{} <= {}", row(&h.normal), h.offset);
    }
    for h in p.arrangement() {
        let _ = writeln!(out, "{} == {}", row(&h.normal), h.offset);
    }
    out
}

/// Inverse of [`to_text`]. Blank lines and lines starting with `#` are
/// skipped.
pub fn parse_text(text: &str) -> Result<InsideOutPolytope> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
    let (hn, header) = lines
        .next()
        .ok_or_else(|| domain("empty polytope description"))?;
    let bad = |n: usize, what: &str| domain(format!("line {n}: {what}"));
    let mut parts = header.split_whitespace();
    let dim: usize = parts
        .next()
        .and_then(|s| s.parse().ok())
        .ok_or_else(|| bad(hn, "header must start with the dimension"))?;
    let excluded: Vec<usize> = match parts.next() {
        None | Some("-") => Vec::new(),
        Some(list) => list
            .split(',')
            .map(|s| s.parse().map_err(|_| bad(hn, "bad excluded index")))
            .collect::<Result<_>>()?,
    };
    if parts.next().is_some() {
        return Err(bad(hn, "trailing tokens in header"));
    }
    let mut ineqs = Vec::new();
    let mut arr = Vec::new();
    for (n, l) in lines {
        let tokens: Vec<&str> = l.split_whitespace().collect();
        if tokens.len() != dim + 2 {
            return Err(bad(
                n,
                &format!("expected {dim} coefficients, a relation and an offset"),
            ));
        }
        let nums = |s: &str| {
            s.parse::<i64>()
                .map_err(|_| bad(n, &format!("not an integer: {s}")))
        };
        let normal: Vec<i64> = tokens[..dim]
            .iter()
            .map(|s| nums(s))
            .collect::<Result<_>>()?;
        let offset = nums(tokens[dim + 1])?;
        match tokens[dim] {
            "<=" => ineqs.push(Inequality::new(normal, offset)),
            "==" => arr.push(Hyperplane::new(normal, offset).map_err(|_| bad(n, "zero normal"))?),
            r => return Err(bad(n, &format!("unknown relation {r}"))),
        }
    }
    InsideOutPolytope::new(HPolytope::new(dim, ineqs)?, arr, excluded)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::polytope::lattice_count_insideout;
    use crate::geom::simplex::lattice_count_complex;
    use crate::poly::FStarVector;
    use num_bigint::BigInt;
    use std::collections::BTreeSet;

    fn as_set(c: &OpenSimplexComplex) -> BTreeSet<OpenSimplex> {
        c.simplices().iter().map(OpenSimplex::canonical).collect()
    }

    fn listed(faces: &[&[&[i64]]]) -> BTreeSet<OpenSimplex> {
        faces
            .iter()
            .map(|f| {
                OpenSimplex::new(f.iter().map(|v| v.to_vec()).collect())
                    .unwrap()
                    .canonical()
            })
            .collect()
    }

    #[test]
    fn p1_matches_listed_triangulation() {
        let f = builtin_fixture("P1").unwrap();
        let expected = listed(&[
            &[&[0]],
            &[&[-1]],
            &[&[1]],
            &[&[-3], &[-2]],
            &[&[-2], &[-1]],
            &[&[-1], &[0]],
            &[&[0], &[1]],
            &[&[1], &[2]],
            &[&[2], &[3]],
        ]);
        assert_eq!(as_set(f.triangulation.as_ref().unwrap()), expected);
    }

    #[test]
    fn p1t_matches_listed_triangulation() {
        let f = builtin_fixture("P1t").unwrap();
        let expected = listed(&[&[&[0]], &[&[-1], &[0]], &[&[0], &[1]]]);
        assert_eq!(as_set(f.triangulation.as_ref().unwrap()), expected);
    }

    #[test]
    fn p11t_matches_listed_triangulation() {
        let f = builtin_fixture("P11t").unwrap();
        let expected = listed(&[
            &[&[0, 0]],
            &[&[0, 0], &[1, 0]],
            &[&[1, 0], &[2, 0]],
            &[&[0, 0], &[0, 1]],
            &[&[0, 0], &[1, 1]],
            &[&[1, 0], &[2, 1]],
            &[&[0, 0], &[1, 0], &[1, 1]],
            &[&[0, 0], &[0, 1], &[1, 1]],
            &[&[1, 0], &[2, 0], &[2, 1]],
            &[&[1, 0], &[1, 1], &[2, 1]],
        ]);
        assert_eq!(as_set(f.triangulation.as_ref().unwrap()), expected);
    }

    #[test]
    fn p2t_matches_listed_skeleton() {
        let f = builtin_fixture("P2t").unwrap();
        let tri = f.triangulation.unwrap();
        let low: BTreeSet<OpenSimplex> = tri
            .simplices()
            .iter()
            .filter(|s| s.dim() <= 1)
            .map(OpenSimplex::canonical)
            .collect();
        let mut faces: Vec<Vec<Vec<i64>>> = (-2..=2).map(|x| vec![vec![x, 0]]).collect();
        for x in -3..3 {
            faces.push(vec![vec![x, 0], vec![x + 1, 0]]);
        }
        for x in -2..=2 {
            faces.push(vec![vec![x, -1], vec![x, 0]]);
            faces.push(vec![vec![x, 0], vec![x, 1]]);
        }
        // slanted edges, cut at lattice points
        for (a, b) in [
            ([-2, 0], [-1, -1]),
            ([1, 1], [2, 0]),
            ([-2, 1], [-1, 0]),
            ([-1, 0], [0, -1]),
            ([-1, 1], [0, 0]),
            ([0, 0], [1, -1]),
            ([0, 1], [1, 0]),
            ([1, 0], [2, -1]),
        ] {
            faces.push(vec![a.to_vec(), b.to_vec()]);
        }
        let expected: BTreeSet<OpenSimplex> = faces
            .into_iter()
            .map(|f| OpenSimplex::new(f).unwrap().canonical())
            .collect();
        assert_eq!(low, expected);
        assert_eq!(tri.simplices().iter().filter(|s| s.dim() == 2).count(), 24);
    }

    #[test]
    fn fixture_fstar_vectors() {
        let cases: [(&str, &[i64]); 6] = [
            ("P1", &[3, 6]),
            ("P1t", &[1, 2]),
            ("P11", &[18, 90, 72]),
            ("P11t", &[1, 5, 4]),
            ("P2", &[15, 72, 72]),
            ("P2t", &[5, 24, 24]),
        ];
        for (name, fstar) in cases {
            let f = builtin_fixture(name).unwrap();
            assert_eq!(
                f.triangulation.unwrap().fstar(),
                FStarVector::from_ints(fstar),
                "{name}"
            );
        }
    }

    #[test]
    fn small_counts() {
        let count =
            |n: &str, g| lattice_count_insideout(&builtin_fixture(n).unwrap().polytope, g).unwrap();
        assert_eq!(count("P1", 1), BigInt::from(3));
        assert_eq!(count("P1t", 1), BigInt::from(1));
        assert_eq!(count("P11t", 1), BigInt::from(1));
        assert_eq!(count("P2", 2), BigInt::from(87));
        assert_eq!(count("P2t", 1), BigInt::from(5));
        let f = builtin_fixture("P2").unwrap();
        assert_eq!(
            lattice_count_complex(f.triangulation.as_ref().unwrap(), 2).unwrap(),
            BigInt::from(87)
        );
    }

    #[test]
    fn unknown_name() {
        assert_eq!(
            builtin_fixture("P3"),
            Err(Error::UnknownFixture("P3".into()))
        );
    }

    #[test]
    fn text_round_trip() {
        for name in FIXTURE_NAMES {
            let p = builtin_fixture(name).unwrap().polytope;
            assert_eq!(parse_text(&to_text(&p)).unwrap(), p, "{name}");
        }
        let half_open =
            InsideOutPolytope::new(HPolytope::cuboid(&[(0, 1)]).unwrap(), vec![], vec![0]).unwrap();
        let text = to_text(&half_open);
        assert_eq!(text, "1 0\n1 <= 1\n-1 <= 0\n");
        assert_eq!(parse_text(&text).unwrap(), half_open);
    }

    #[test]
    fn text_errors_carry_line_numbers() {
        let err = parse_text("2 -\n1 0 <= 1\n1 x <= 2\n").unwrap_err();
        assert!(err.to_string().contains("line 3"), "{err}");
        assert!(parse_text("1 -\n1 < 1\n").is_err());
        assert!(parse_text("").is_err());
    }

    #[test]
    fn crossing_cut_is_rejected() {
        let p = InsideOutPolytope::new(
            HPolytope::cuboid(&[(0, 2), (0, 2)]).unwrap(),
            vec![Hyperplane::new(vec![1, 2], 2).unwrap()],
            vec![],
        )
        .unwrap();
        assert!(grid_triangulation(&p, Diagonal::Main).is_err());
    }
}
