use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// An exact rational number, or positive infinity.
///
/// Finite values are kept in lowest terms with a positive denominator (the
/// invariant of [`BigRational`]). Infinity compares greater than every finite
/// value and its reciprocal is exactly zero.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum ExtScalar {
    Finite(BigRational),
    Infinity,
}

impl ExtScalar {
    pub fn integer(n: i64) -> Self {
        ExtScalar::Finite(BigRational::from_integer(BigInt::from(n)))
    }

    /// `num/den`; a zero denominator is rejected rather than mapped to infinity.
    pub fn ratio(num: i64, den: i64) -> Result<Self> {
        if den == 0 {
            return Err(Error::Domain(format!("zero denominator in {num}/{den}")));
        }
        Ok(ExtScalar::Finite(BigRational::new(num.into(), den.into())))
    }

    pub fn infinity() -> Self {
        ExtScalar::Infinity
    }

    pub fn one() -> Self {
        ExtScalar::Finite(BigRational::one())
    }

    pub fn is_infinite(&self) -> bool {
        matches!(self, ExtScalar::Infinity)
    }

    pub fn finite(&self) -> Option<&BigRational> {
        match self {
            ExtScalar::Finite(v) => Some(v),
            ExtScalar::Infinity => None,
        }
    }

    /// Exact reciprocal as a rational; `1/∞ = 0`, `1/0` is a domain error.
    pub fn recip(&self) -> Result<BigRational> {
        match self {
            ExtScalar::Infinity => Ok(BigRational::zero()),
            ExtScalar::Finite(v) if v.is_zero() => Err(Error::Domain("reciprocal of zero".into())),
            ExtScalar::Finite(v) => Ok(v.recip()),
        }
    }

    /// Inverse of [`ExtScalar::recip`]: a zero reciprocal encodes infinity.
    pub fn from_recip(inv: BigRational) -> Self {
        if inv.is_zero() {
            ExtScalar::Infinity
        } else {
            ExtScalar::Finite(inv.recip())
        }
    }

    pub fn is_positive(&self) -> bool {
        match self {
            ExtScalar::Infinity => true,
            ExtScalar::Finite(v) => v.is_positive(),
        }
    }

    /// Floating value; infinity maps to `f64::INFINITY`.
    pub fn to_f64(&self) -> f64 {
        match self {
            ExtScalar::Infinity => f64::INFINITY,
            ExtScalar::Finite(v) => v.to_f64().unwrap_or(f64::NAN),
        }
    }

    /// Rejects anything that cannot serve as an ℓ-norm order (must be > 0).
    pub fn require_positive(&self, what: &str) -> Result<()> {
        if self.is_positive() {
            Ok(())
        } else {
            Err(Error::Domain(format!("{what} must be > 0, got {self}")))
        }
    }

    pub fn require_at_least_one(&self, what: &str) -> Result<()> {
        if *self >= ExtScalar::one() {
            Ok(())
        } else {
            Err(Error::Domain(format!("{what} must be >= 1, got {self}")))
        }
    }
}

impl From<i64> for ExtScalar {
    fn from(n: i64) -> Self {
        ExtScalar::integer(n)
    }
}

impl From<BigRational> for ExtScalar {
    fn from(v: BigRational) -> Self {
        ExtScalar::Finite(v)
    }
}

impl PartialOrd for ExtScalar {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for ExtScalar {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (ExtScalar::Infinity, ExtScalar::Infinity) => Ordering::Equal,
            (ExtScalar::Infinity, _) => Ordering::Greater,
            (_, ExtScalar::Infinity) => Ordering::Less,
            (ExtScalar::Finite(a), ExtScalar::Finite(b)) => a.cmp(b),
        }
    }
}

impl fmt::Display for ExtScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtScalar::Infinity => f.write_str("inf"),
            ExtScalar::Finite(v) => write!(f, "{v}"),
        }
    }
}

impl FromStr for ExtScalar {
    type Err = Error;

    /// Accepts `inf`/`infinity`/`∞`, integers, `num/den`, and plain decimals
    /// such as `2.5` (converted exactly).
    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim();
        if t.is_empty() {
            return Err(Error::Parse("empty exponent".into()));
        }
        if t == "∞" || t.eq_ignore_ascii_case("inf") || t.eq_ignore_ascii_case("infinity") {
            return Ok(ExtScalar::Infinity);
        }
        if let Some((num, den)) = t.split_once('/') {
            let num = parse_int(num)?;
            let den = parse_int(den)?;
            if den.is_zero() {
                return Err(Error::Parse(format!("zero denominator in '{t}'")));
            }
            return Ok(ExtScalar::Finite(BigRational::new(num, den)));
        }
        if let Some((int, frac)) = t.split_once('.') {
            if frac.is_empty() || !frac.bytes().all(|b| b.is_ascii_digit()) {
                return Err(Error::Parse(format!("bad decimal '{t}'")));
            }
            let negative = int.trim_start().starts_with('-');
            let int_part = if int.is_empty() || int == "-" || int == "+" {
                BigInt::zero()
            } else {
                parse_int(int)?
            };
            let scale = BigInt::from(10u32).pow(frac.len() as u32);
            let frac_part = parse_int(frac)?;
            let mut mag = int_part.abs() * &scale + frac_part;
            if negative {
                mag = -mag;
            }
            return Ok(ExtScalar::Finite(BigRational::new(mag, scale)));
        }
        Ok(ExtScalar::Finite(BigRational::from_integer(parse_int(t)?)))
    }
}

fn parse_int(s: &str) -> Result<BigInt> {
    let t = s.trim();
    let digits = t.strip_prefix(['-', '+']).unwrap_or(t);
    if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
        return Err(Error::Parse(format!("bad integer '{t}'")));
    }
    t.parse::<BigInt>()
        .map_err(|e| Error::Parse(format!("bad integer '{t}': {e}")))
}

impl Serialize for ExtScalar {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for ExtScalar {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_all_forms() {
        assert_eq!("inf".parse::<ExtScalar>().unwrap(), ExtScalar::Infinity);
        assert_eq!("∞".parse::<ExtScalar>().unwrap(), ExtScalar::Infinity);
        assert_eq!(
            "12/5".parse::<ExtScalar>().unwrap(),
            ExtScalar::ratio(12, 5).unwrap()
        );
        assert_eq!(
            "6/4".parse::<ExtScalar>().unwrap(),
            ExtScalar::ratio(3, 2).unwrap()
        );
        assert_eq!(
            "2.5".parse::<ExtScalar>().unwrap(),
            ExtScalar::ratio(5, 2).unwrap()
        );
        assert_eq!(
            "-0.25".parse::<ExtScalar>().unwrap(),
            ExtScalar::ratio(-1, 4).unwrap()
        );
        assert_eq!(" 3 ".parse::<ExtScalar>().unwrap(), ExtScalar::integer(3));
        for bad in ["", "1/0", "x", "1/", "/2", "1.", "1.2.3", "--1", "1/-"] {
            assert!(bad.parse::<ExtScalar>().is_err(), "{bad:?} should fail");
        }
    }

    #[test]
    fn lowest_terms_positive_denominator() {
        let v = ExtScalar::ratio(4, -6).unwrap();
        let r = v.finite().unwrap();
        assert_eq!(r.numer(), &BigInt::from(-2));
        assert_eq!(r.denom(), &BigInt::from(3));
    }

    #[test]
    fn reciprocal_rules() {
        assert!(ExtScalar::Infinity.recip().unwrap().is_zero());
        assert!(ExtScalar::integer(0).recip().is_err());
        assert_eq!(
            ExtScalar::from_recip(BigRational::zero()),
            ExtScalar::Infinity
        );
        assert_eq!(
            ExtScalar::from_recip(ExtScalar::integer(4).recip().unwrap()),
            ExtScalar::integer(4)
        );
    }

    #[test]
    fn infinity_is_largest() {
        assert!(ExtScalar::Infinity > ExtScalar::integer(1_000_000));
        assert!(ExtScalar::ratio(4, 3).unwrap() < ExtScalar::integer(2));
    }

    #[test]
    fn display_round_trips() {
        for s in ["inf", "3", "12/5", "-7/2"] {
            assert_eq!(s.parse::<ExtScalar>().unwrap().to_string(), s);
        }
    }
}
