use std::fmt;
use std::str::FromStr;

use crate::error::{domain, Error};

/// Multiset of nonnegative exponents `(d_1, ..., d_n)`, kept sorted
/// nonincreasing so that symmetric inputs share one canonical key.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct DVector(Vec<u32>);

impl DVector {
    pub fn new(mut entries: Vec<u32>) -> Self {
        entries.sort_unstable_by(|a, b| b.cmp(a));
        Self(entries)
    }

    pub fn empty() -> Self {
        Self(Vec::new())
    }

    /// Builds from signed entries; `None` if any entry is negative.
    pub fn from_signed(entries: &[i64]) -> Option<Self> {
        entries
            .iter()
            .map(|&e| u32::try_from(e).ok())
            .collect::<Option<Vec<_>>>()
            .map(Self::new)
    }

    pub fn entries(&self) -> &[u32] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// `|d|`, the sum of the entries.
    pub fn total(&self) -> u64 {
        self.0.iter().map(|&e| u64::from(e)).sum()
    }

    pub fn largest(&self) -> Option<u32> {
        self.0.first().copied()
    }

    pub fn contains(&self, value: u32) -> bool {
        self.0.contains(&value)
    }

    pub fn with(&self, value: u32) -> Self {
        let mut v = self.0.clone();
        v.push(value);
        Self::new(v)
    }

    /// Removes one occurrence of `value`; `None` if absent.
    pub fn without(&self, value: u32) -> Option<Self> {
        let pos = self.0.iter().position(|&e| e == value)?;
        let mut v = self.0.clone();
        v.remove(pos);
        Some(Self(v))
    }

    pub fn iter(&self) -> impl Iterator<Item = u32> + '_ {
        self.0.iter().copied()
    }

    /// Comma-separated entries wrapped in parentheses, e.g. `(2,1)`.
    pub fn paren(&self) -> String {
        format!("({self})")
    }
}

impl From<Vec<u32>> for DVector {
    fn from(v: Vec<u32>) -> Self {
        Self::new(v)
    }
}

impl From<&[u32]> for DVector {
    fn from(v: &[u32]) -> Self {
        Self::new(v.to_vec())
    }
}

impl fmt::Display for DVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, e) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{e}")?;
        }
        Ok(())
    }
}

impl FromStr for DVector {
    type Err = Error;

    /// Parses comma-separated nonnegative integers; the empty string is `∅`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        if s.is_empty() || s == "-" {
            return Ok(Self::empty());
        }
        s.split(',')
            .map(|part| {
                part.trim()
                    .parse::<u32>()
                    .map_err(|_| domain(format!("invalid exponent `{part}` in `{s}`")))
            })
            .collect::<Result<Vec<_>, _>>()
            .map(Self::new)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_order_and_parsing() {
        let d: DVector = "1, 3,0".parse().unwrap();
        assert_eq!(d.entries(), &[3, 1, 0]);
        assert_eq!(d.to_string(), "3,1,0");
        assert_eq!(d.paren(), "(3,1,0)");
        assert_eq!(d.total(), 4);
        assert_eq!("".parse::<DVector>().unwrap(), DVector::empty());
        assert!("1,-2".parse::<DVector>().is_err());
        assert!("a".parse::<DVector>().is_err());
    }

    #[test]
    fn with_and_without() {
        let d = DVector::new(vec![2, 1]);
        assert_eq!(d.with(3).entries(), &[3, 2, 1]);
        assert_eq!(d.without(2).unwrap().entries(), &[1]);
        assert!(d.without(5).is_none());
        assert!(DVector::from_signed(&[1, -1]).is_none());
    }
}
