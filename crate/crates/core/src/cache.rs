//! Text persistence for the ψ-intersection and L-polynomial memo tables.
//!
//! ```text
//! PSIEHRHART-CACHE v1
//! PSI g=1 d=1 v=1/24
//! LPOLY d=2 m=0 c=15;-36;36
//! ```
//!
//! Keys are canonical (exponents sorted nonincreasing) and unique. Entries
//! are written sorted, so equal tables give byte-identical files.

use std::collections::BTreeMap;
use std::fs::{self, File, OpenOptions};
use std::io;
use std::path::{Path, PathBuf};

use num_bigint::BigInt;
use thiserror::Error;

use crate::arith::Rational;
use crate::dvector::DVector;
use crate::intersection::{IntersectionEngine, PsiKey};
use crate::lpoly::{m_shift, LPolyEngine};
use crate::poly::IVPoly;

pub const CACHE_HEADER: &str = "PSIEHRHART-CACHE v1";

#[derive(Debug, Error)]
pub enum CacheError {
    #[error("cache I/O on {path}: {source}")]
    Io { path: PathBuf, source: io::Error },

    #[error("cache line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("incompatible cache: expected header `{CACHE_HEADER}`, found `{0}`")]
    Incompatible(String),

    #[error("cache {0} is locked by another process")]
    Locked(PathBuf),
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct CacheTable {
    pub psi: BTreeMap<PsiKey, Rational>,
    pub lpoly: BTreeMap<DVector, IVPoly>,
}

impl CacheTable {
    pub fn is_empty(&self) -> bool {
        self.psi.is_empty() && self.lpoly.is_empty()
    }

    pub fn len(&self) -> usize {
        self.psi.len() + self.lpoly.len()
    }

    /// Snapshot of both engines' memo tables.
    pub fn capture(psi: &IntersectionEngine, lpoly: &LPolyEngine) -> Self {
        CacheTable {
            psi: psi.memo_entries().into_iter().collect(),
            lpoly: lpoly.memo_entries().into_iter().collect(),
        }
    }

    pub fn seed(&self, psi: &IntersectionEngine, lpoly: &LPolyEngine) {
        psi.seed(self.psi.iter().map(|(k, v)| (k.clone(), v.clone())));
        lpoly.seed(self.lpoly.iter().map(|(k, v)| (k.clone(), v.clone())));
    }

    pub fn to_text(&self) -> String {
        let mut out = String::with_capacity(32 * (self.len() + 1));
        out.push_str(CACHE_HEADER);
        out.push('\n');
        for (k, v) in &self.psi {
            out.push_str(&format!(
                "PSI g={} d={} v={}/{}\n",
                k.genus(),
                k.exponents(),
                v.numer(),
                v.denom()
            ));
        }
        for (d, p) in &self.lpoly {
            let coeffs: Vec<String> = if p.is_zero() {
                vec!["0".into()]
            } else {
                p.coeffs().iter().map(ToString::to_string).collect()
            };
            out.push_str(&format!(
                "LPOLY d={} m={} c={}\n",
                d,
                m_shift(d),
                coeffs.join(";")
            ));
        }
        out
    }

    pub fn parse(text: &str) -> Result<Self, CacheError> {
        let mut table = CacheTable::default();
        let mut lines = text.split('\n').enumerate();
        match lines.next() {
            None => return Ok(table),
            Some((_, "")) if text.is_empty() => return Ok(table),
            Some((_, h)) if h == CACHE_HEADER => {}
            Some((_, h)) => return Err(CacheError::Incompatible(h.to_string())),
        }
        for (i, line) in lines {
            let n = i + 1;
            if line.is_empty() {
                continue;
            }
            let err = |m: &str| CacheError::Parse {
                line: n,
                message: format!("{m}: `{line}`"),
            };
            if line.ends_with('\r') {
                return Err(err("CR line ending"));
            }
            let mut words = line.split(' ');
            match words.next() {
                Some("PSI") => {
                    let g = field(words.next(), "g").ok_or_else(|| err("expected g=<genus>"))?;
                    let d =
                        field(words.next(), "d").ok_or_else(|| err("expected d=<exponents>"))?;
                    let v =
                        field(words.next(), "v").ok_or_else(|| err("expected v=<num>/<den>"))?;
                    if words.next().is_some() {
                        return Err(err("trailing fields"));
                    }
                    let g: u32 = g.parse().map_err(|_| err("bad genus"))?;
                    let d = parse_canonical(d).ok_or_else(|| err("non-canonical exponents"))?;
                    let (num, den) = v
                        .split_once('/')
                        .ok_or_else(|| err("value must be num/den"))?;
                    let value = parse_ratio(num, den).ok_or_else(|| err("bad rational"))?;
                    if table.psi.insert(PsiKey::new(g, d), value).is_some() {
                        return Err(err("duplicate key"));
                    }
                }
                Some("LPOLY") => {
                    let d =
                        field(words.next(), "d").ok_or_else(|| err("expected d=<exponents>"))?;
                    let m = field(words.next(), "m").ok_or_else(|| err("expected m=<shift>"))?;
                    let c =
                        field(words.next(), "c").ok_or_else(|| err("expected c=<coefficients>"))?;
                    if words.next().is_some() {
                        return Err(err("trailing fields"));
                    }
                    let d = parse_canonical(d).ok_or_else(|| err("non-canonical exponents"))?;
                    let m: i64 = m.parse().map_err(|_| err("bad shift"))?;
                    if m != m_shift(&d) {
                        return Err(err("shift disagrees with the exponent vector"));
                    }
                    let coeffs = c
                        .split(';')
                        .map(|s| match s.split_once('/') {
                            Some((a, b)) => parse_ratio(a, b),
                            None => s.parse::<BigInt>().ok().map(Rational::from_integer),
                        })
                        .collect::<Option<Vec<_>>>()
                        .ok_or_else(|| err("bad coefficient"))?;
                    let poly = IVPoly::from_coeffs(coeffs);
                    if table.lpoly.insert(d, poly).is_some() {
                        return Err(err("duplicate key"));
                    }
                }
                _ => return Err(err("unknown entry")),
            }
        }
        Ok(table)
    }
}

fn field<'a>(word: Option<&'a str>, name: &str) -> Option<&'a str> {
    word?.strip_prefix(name)?.strip_prefix('=')
}

fn parse_canonical(s: &str) -> Option<DVector> {
    if s.is_empty() {
        return Some(DVector::empty());
    }
    let raw: Vec<u32> = s
        .split(',')
        .map(|x| x.parse().ok())
        .collect::<Option<_>>()?;
    raw.windows(2)
        .all(|w| w[0] >= w[1])
        .then(|| DVector::new(raw))
}

fn parse_ratio(num: &str, den: &str) -> Option<Rational> {
    let num: BigInt = num.parse().ok()?;
    let den: BigInt = den.parse().ok()?;
    if den <= BigInt::from(0) {
        return None;
    }
    let r = Rational::new(num.clone(), den.clone());
    // reject non-reduced forms so that every value has one spelling
    (r.numer() == &num && r.denom() == &den).then_some(r)
}

/// Reads a cache file. A missing file is an I/O error; an empty one is an
/// empty table.
pub fn load(path: &Path) -> Result<CacheTable, CacheError> {
    let text = fs::read_to_string(path).map_err(|source| CacheError::Io {
        path: path.into(),
        source,
    })?;
    CacheTable::parse(&text)
}

/// Writes the table through a temporary file and a rename, so readers never
/// see a partial file.
pub fn save(table: &CacheTable, path: &Path) -> Result<(), CacheError> {
    let io_err = |source| CacheError::Io {
        path: path.into(),
        source,
    };
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir).map_err(io_err)?;
    }
    let mut tmp = path.as_os_str().to_owned();
    tmp.push(".tmp");
    let tmp = PathBuf::from(tmp);
    fs::write(&tmp, table.to_text()).map_err(io_err)?;
    fs::rename(&tmp, path).map_err(io_err)
}

/// Exclusive advisory lock on `<path>.lock`, held until the guard drops.
#[derive(Debug)]
pub struct CacheLock {
    _file: File,
}

impl CacheLock {
    /// Fails with [`CacheError::Locked`] instead of waiting.
    pub fn acquire(path: &Path) -> Result<Self, CacheError> {
        let (file, lock_path) = open_lock_file(path)?;
        match file.try_lock() {
            Ok(()) => Ok(CacheLock { _file: file }),
            Err(fs::TryLockError::WouldBlock) => Err(CacheError::Locked(path.into())),
            Err(fs::TryLockError::Error(source)) => Err(CacheError::Io {
                path: lock_path,
                source,
            }),
        }
    }

    /// Blocks until no other process holds the lock.
    pub fn wait(path: &Path) -> Result<Self, CacheError> {
        let (file, lock_path) = open_lock_file(path)?;
        file.lock().map_err(|source| CacheError::Io {
            path: lock_path,
            source,
        })?;
        Ok(CacheLock { _file: file })
    }
}

fn open_lock_file(path: &Path) -> Result<(File, PathBuf), CacheError> {
    let mut lock_path = path.as_os_str().to_owned();
    lock_path.push(".lock");
    let lock_path = PathBuf::from(lock_path);
    if let Some(dir) = lock_path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir).map_err(|source| CacheError::Io {
            path: dir.into(),
            source,
        })?;
    }
    let file = OpenOptions::new()
        .create(true)
        .truncate(false)
        .write(true)
        .open(&lock_path)
        .map_err(|source| CacheError::Io {
            path: lock_path.clone(),
            source,
        })?;
    Ok((file, lock_path))
}
