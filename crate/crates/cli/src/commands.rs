use std::fmt::Write as _;
use std::str::FromStr;

use num_bigint::BigInt;
use serde_json::{json, Value};

use psiehrhart::geom::{
    builtin_fixture, ehrhart_interpolate, lattice_count_insideout, to_text, verify_triangulation,
    Fixture,
};
use psiehrhart::lpoly::{breuer_check, check_record, enumerate_dvectors, m_shift, BreuerVerdict};
use psiehrhart::{DVector, Error, FStarVector, IVPoly, KappaPsiMonomial, Rational};

use crate::store::Store;
use crate::Command;

/// What a command prints, in both output modes.
pub struct Report {
    pub plain: String,
    pub json: Value,
    /// Set when a computed identity failed; the process exits 3.
    pub inconsistency: Option<String>,
}

impl Report {
    fn ok(plain: String, json: Value) -> Self {
        Report {
            plain,
            json,
            inconsistency: None,
        }
    }
}

pub enum CliError {
    Usage(String),
    Io(anyhow::Error),
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Usage(e.to_string())
    }
}

fn rational_json(r: &Rational) -> Value {
    Value::String(format!("{}/{}", r.numer(), r.denom()))
}

fn int_json(x: &BigInt) -> Value {
    Value::Number(
        x.to_string()
            .parse()
            .expect("integers are valid JSON numbers"),
    )
}

fn fstar_json(f: &FStarVector) -> Value {
    Value::Array(f.entries().iter().map(int_json).collect())
}

fn poly_json(p: &IVPoly) -> Value {
    Value::Array(p.coeffs().iter().map(rational_json).collect())
}

fn dvector(s: &str) -> Result<DVector, CliError> {
    DVector::from_str(s).map_err(|e| CliError::Usage(format!("bad exponent list `{s}`: {e}")))
}

fn fixture(name: &str) -> Result<Fixture, CliError> {
    Ok(builtin_fixture(name)?)
}

fn positive_dilate(g: i64, what: &str) -> Result<(), CliError> {
    if g < 1 {
        return Err(CliError::Usage(format!(
            "{what} must be at least 1, got {g}"
        )));
    }
    Ok(())
}

/// `L_(1)(g+0)`-style label of the shifted polynomial.
fn shifted_label(d: &DVector) -> String {
    match m_shift(d) {
        0 => format!("L_{}(g)", d.paren()),
        m if m > 0 => format!("L_{}(g+{m})", d.paren()),
        m => format!("L_{}(g{m})", d.paren()),
    }
}

pub fn run(cmd: &Command, store: &Store) -> Result<Report, CliError> {
    match cmd {
        Command::Psi { g, d } => {
            let d = dvector(d)?;
            let v = store
                .psi
                .psi_intersection(&psiehrhart::PsiKey::new(*g, d.clone()));
            Ok(Report::ok(
                v.to_string(),
                json!({ "g": g, "d": d.entries(), "value": rational_json(&v) }),
            ))
        }
        Command::Kappa { g, kappa, d } => {
            let kappas: Vec<u32> = dvector(kappa)?.entries().to_vec();
            let d = dvector(d)?;
            let mono = KappaPsiMonomial::new(*g, kappas.clone(), d.clone())?;
            let v = store.psi.kappa_reduce(&mono);
            Ok(Report::ok(
                v.to_string(),
                json!({ "g": g, "kappa": kappas, "d": d.entries(), "value": rational_json(&v) }),
            ))
        }
        Command::Lpoly { d } => {
            let d = dvector(d)?;
            let rec = store.lpoly.l_polynomial(&d)?;
            let binomial = rec.poly.to_fstar()?;
            let lead = rec.poly.leading_coefficient();
            let plain = format!(
                "{} ; fstar={} ; m={} ; C={} ; lead={}",
                rec.poly, binomial, rec.shift_m, rec.normalizer, lead
            );
            let js = json!({
                "d": d.entries(),
                "poly": rec.poly.to_string(),
                "coefficients": poly_json(&rec.poly),
                "fstar": fstar_json(&binomial),
                "m": rec.shift_m,
                "C": int_json(&rec.normalizer),
                "lead": rational_json(&lead),
            });
            Ok(Report::ok(plain, js))
        }
        Command::Fstar { d } => {
            let d = dvector(d)?;
            let shifted = store.lpoly.l_poly(&d).shift(m_shift(&d));
            let verdict = breuer_check(&shifted);
            let fstar = shifted.to_fstar()?;
            let plain = format!(
                "fstar={} ; shifted={} ; verdict={} ; gcd={}",
                fstar,
                shifted_label(&d),
                verdict,
                fstar.gcd()
            );
            let js = json!({
                "d": d.entries(),
                "m": m_shift(&d),
                "fstar": fstar_json(&fstar),
                "verdict": verdict.to_string(),
                "gcd": int_json(&fstar.gcd()),
            });
            let mut report = Report::ok(plain, js);
            if verdict != BreuerVerdict::EhrhartOfPartialComplex {
                report.inconsistency = Some(format!("d={}: {verdict}", d.paren()));
            }
            Ok(report)
        }
        Command::Scan {
            max_total,
            max_parts,
        } => {
            let mut plain = String::new();
            let mut records = Vec::new();
            let mut violation = None;
            for d in enumerate_dvectors(*max_total, *max_parts) {
                let rec = match store.lpoly.l_polynomial(&d) {
                    Ok(r) => r,
                    Err(e) => {
                        violation = Some(format!("d={}: {e}", d.paren()));
                        break;
                    }
                };
                if let Err(v) = check_record(&rec, &store.psi) {
                    violation = Some(v.to_string());
                    break;
                }
                let _ = writeln!(
                    plain,
                    "d={} ; L={} ; m={} ; fstar={} ; gcd={}",
                    d.paren(),
                    rec.poly,
                    rec.shift_m,
                    rec.fstar,
                    rec.fstar.gcd()
                );
                records.push(json!({
                    "d": d.entries(),
                    "poly": rec.poly.to_string(),
                    "coefficients": poly_json(&rec.poly),
                    "m": rec.shift_m,
                    "fstar": fstar_json(&rec.fstar),
                    "gcd": int_json(&rec.fstar.gcd()),
                }));
            }
            let _ = write!(
                plain,
                "scan: {} records, {} violation{}",
                records.len(),
                usize::from(violation.is_some()),
                if violation.is_some() { "" } else { "s" }
            );
            let js = json!({ "records": records, "violation": violation });
            Ok(Report {
                plain,
                json: js,
                inconsistency: violation,
            })
        }
        Command::Count { fixture: name, g } => {
            positive_dilate(*g, "g")?;
            let f = fixture(name)?;
            let count = lattice_count_insideout(&f.polytope, *g)?;
            let m = m_shift(&f.d);
            let expected = store.lpoly.l_poly(&f.d).eval_int(g + m);
            let scaled = &count * f.multiplier;
            let label = format!("L_{}({})", f.d.paren(), g + m);
            let plain = if f.multiplier == 1 {
                format!("{count} (= {label})")
            } else {
                format!("{count} (x{} = {scaled} = {label})", f.multiplier)
            };
            let js = json!({
                "fixture": f.name,
                "g": g,
                "count": int_json(&count),
                "multiplier": f.multiplier,
                "l_value": rational_json(&expected),
                "matches": Rational::from_integer(scaled.clone()) == expected,
            });
            let mut report = Report::ok(plain, js);
            if Rational::from_integer(scaled.clone()) != expected {
                report.inconsistency = Some(format!("{name}: {scaled} != {label} = {expected}"));
            }
            Ok(report)
        }
        Command::Interpolate { fixture: name } => {
            let f = fixture(name)?;
            let poly = ehrhart_interpolate(
                |g| lattice_count_insideout(&f.polytope, g),
                f.polytope.dim(),
            )
            .map_err(|e| CliError::Io(e.into()))?;
            let shifted = store.lpoly.l_poly(&f.d).shift(m_shift(&f.d));
            let matches = poly.scale_int(f.multiplier) == shifted;
            let fstar = poly.to_fstar()?;
            let plain = format!(
                "{poly} ; fstar={fstar} ; x{} {} {}",
                f.multiplier,
                if matches { "=" } else { "!=" },
                shifted_label(&f.d)
            );
            let js = json!({
                "fixture": f.name,
                "poly": poly.to_string(),
                "coefficients": poly_json(&poly),
                "fstar": fstar_json(&fstar),
                "multiplier": f.multiplier,
                "matches": matches,
            });
            let mut report = Report::ok(plain, js);
            if !matches {
                report.inconsistency =
                    Some(format!("{name}: {} x ({poly}) != {shifted}", f.multiplier));
            }
            Ok(report)
        }
        Command::Verify {
            fixture: name,
            gmax,
        } => {
            positive_dilate(*gmax, "gmax")?;
            let f = fixture(name)?;
            let tri = f
                .triangulation
                .as_ref()
                .ok_or_else(|| CliError::Usage(format!("{name} has no triangulation")))?;
            let shifted = store.lpoly.l_poly(&f.d).shift(m_shift(&f.d));
            let target = shifted.to_fstar()?;
            match verify_triangulation(tri, &f.polytope, *gmax)? {
                Ok(report) => {
                    let scaled = FStarVector(
                        report
                            .fstar
                            .entries()
                            .iter()
                            .map(|x| x * f.multiplier)
                            .collect(),
                    );
                    let matches = scaled == target;
                    let plain = format!(
                        "fstar={} ; verified g=1..{} ; x{} {} fstar of {} = {}",
                        report.fstar,
                        report.verified_dilates,
                        f.multiplier,
                        if matches { "=" } else { "!=" },
                        shifted_label(&f.d),
                        target
                    );
                    let js = json!({
                        "fixture": f.name,
                        "fstar": fstar_json(&report.fstar),
                        "verified_dilates": report.verified_dilates,
                        "multiplier": f.multiplier,
                        "l_fstar": fstar_json(&target),
                        "matches": matches,
                        "counterexample": Value::Null,
                    });
                    let mut out = Report::ok(plain, js);
                    if !matches {
                        out.inconsistency = Some(format!(
                            "{name}: {} x {} != {target}",
                            f.multiplier, report.fstar
                        ));
                    }
                    Ok(out)
                }
                Err(mismatch) => {
                    let js = json!({
                        "fixture": f.name,
                        "matches": false,
                        "counterexample": { "g": mismatch.g, "point": mismatch.point, "reason": mismatch.to_string() },
                    });
                    Ok(Report {
                        plain: format!("triangulation fails: {mismatch}"),
                        json: js,
                        inconsistency: Some(format!("{name}: {mismatch}")),
                    })
                }
            }
        }
        Command::Fixture { fixture: name } => {
            let f = fixture(name)?;
            let text = to_text(&f.polytope);
            let js = json!({
                "fixture": f.name,
                "d": f.d.entries(),
                "multiplier": f.multiplier,
                "text": text,
            });
            Ok(Report::ok(text, js))
        }
    }
}
