use std::fmt;
use std::ops::Index;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::ExtScalar;
use crate::error::{Error, Result};

/// Ordered exponents `(s_1, …, s_m)`; entry `k` governs index level `k`
/// (level 1 outermost).
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ExponentVector(Vec<ExtScalar>);

impl ExponentVector {
    pub fn new(entries: Vec<ExtScalar>) -> Self {
        ExponentVector(entries)
    }

    /// `m` copies of `value`.
    pub fn uniform(value: ExtScalar, m: usize) -> Self {
        ExponentVector(vec![value; m])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn iter(&self) -> std::slice::Iter<'_, ExtScalar> {
        self.0.iter()
    }

    pub fn entries(&self) -> &[ExtScalar] {
        &self.0
    }

    pub fn into_entries(self) -> Vec<ExtScalar> {
        self.0
    }

    pub fn to_f64(&self) -> Vec<f64> {
        self.0.iter().map(ExtScalar::to_f64).collect()
    }

    /// Entrywise `self_k <= other_k`; vectors of different length are never comparable.
    pub fn dominated_by(&self, other: &ExponentVector) -> bool {
        self.len() == other.len() && self.iter().zip(other.iter()).all(|(a, b)| a <= b)
    }

    pub fn require_positive(&self) -> Result<()> {
        self.iter()
            .enumerate()
            .try_for_each(|(k, s)| s.require_positive(&format!("exponent s_{}", k + 1)))
    }
}

impl Index<usize> for ExponentVector {
    type Output = ExtScalar;

    fn index(&self, i: usize) -> &ExtScalar {
        &self.0[i]
    }
}

impl From<Vec<ExtScalar>> for ExponentVector {
    fn from(v: Vec<ExtScalar>) -> Self {
        ExponentVector(v)
    }
}

impl<'a> IntoIterator for &'a ExponentVector {
    type Item = &'a ExtScalar;
    type IntoIter = std::slice::Iter<'a, ExtScalar>;

    fn into_iter(self) -> Self::IntoIter {
        self.0.iter()
    }
}

impl fmt::Display for ExponentVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, s) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{s}")?;
        }
        Ok(())
    }
}

impl FromStr for ExponentVector {
    type Err = Error;

    /// Comma-separated exponents, optionally wrapped in parentheses or brackets:
    /// `inf,3,12/5` or `(inf, 3, 12/5)`.
    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim();
        let inner = t
            .strip_prefix('(')
            .and_then(|r| r.strip_suffix(')'))
            .or_else(|| t.strip_prefix('[').and_then(|r| r.strip_suffix(']')))
            .unwrap_or(t);
        if inner.trim().is_empty() {
            return Err(Error::Parse("empty exponent vector".into()));
        }
        inner
            .split(',')
            .map(str::parse)
            .collect::<Result<Vec<_>>>()
            .map(ExponentVector)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_variants() {
        let v: ExponentVector = "(inf, 3, 12/5)".parse().unwrap();
        assert_eq!(v.to_string(), "inf,3,12/5");
        assert_eq!("[2,2]".parse::<ExponentVector>().unwrap().len(), 2);
        assert!("".parse::<ExponentVector>().is_err());
        assert!("2,,2".parse::<ExponentVector>().is_err());
    }

    #[test]
    fn domination() {
        let a: ExponentVector = "inf,2,4/3".parse().unwrap();
        let b: ExponentVector = "inf,3,12/5".parse().unwrap();
        assert!(a.dominated_by(&b));
        assert!(!b.dominated_by(&a));
        assert!(!a.dominated_by(&"inf,3".parse().unwrap()));
    }
}
