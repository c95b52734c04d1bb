//! Exact exponent arithmetic for summing inequalities.
//!
//! Every exponent is an [`ExtScalar`]: an exact rational or `∞`. Sums of
//! reciprocals never leave the rationals, so all identities below hold with
//! exact equality. Floating point only appears in [`TheoremConstant::value`].

mod scalar;
mod vector;

use std::fmt;
use std::str::FromStr;

use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use scalar::ExtScalar;
pub use vector::ExponentVector;

/// Which exponent family [`critical_exponents`] returns.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum VariantTag {
    /// `s_k = 2m(m−1)/(k(m−2)+2)`, re-derived through [`inclusion_exponents`].
    Derived,
    /// `s_k = 2m(m−1)/(m+mk−2k)`, the displayed closed form.
    Printed,
    /// `s_k = 2m/k`.
    CorollaryPrinted,
    /// `s_k = 2m/(k−1)`, re-derived through [`inclusion_exponents`].
    CorollaryDerived,
    /// `s_k = m/(k−1)`, the optimality lower bound.
    LowerBound,
}

impl VariantTag {
    pub const ALL: [VariantTag; 5] = [
        VariantTag::Derived,
        VariantTag::Printed,
        VariantTag::CorollaryPrinted,
        VariantTag::CorollaryDerived,
        VariantTag::LowerBound,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            VariantTag::Derived => "derived",
            VariantTag::Printed => "printed",
            VariantTag::CorollaryPrinted => "corollary-printed",
            VariantTag::CorollaryDerived => "corollary-derived",
            VariantTag::LowerBound => "lower-bound",
        }
    }
}

impl fmt::Display for VariantTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for VariantTag {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        VariantTag::ALL
            .into_iter()
            .find(|v| v.as_str() == s.trim())
            .ok_or_else(|| Error::Parse(format!("unknown variant '{s}'")))
    }
}

/// Which power of two multiplies `∥T∥` on the right-hand side.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ConstantChoice {
    /// `2^{(m−2)/2}`.
    #[default]
    Abstract,
    /// `2^{(m−1)/2}`, the larger constant.
    Theorem,
}

impl FromStr for ConstantChoice {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "abstract" => Ok(ConstantChoice::Abstract),
            "theorem" => Ok(ConstantChoice::Theorem),
            other => Err(Error::Parse(format!("unknown constant choice '{other}'"))),
        }
    }
}

/// `base^exponent` kept exactly, with its floating value.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TheoremConstant {
    pub base: u32,
    pub exponent: ExtScalar,
    pub value: f64,
}

/// `p*` with `1/p* = 1 − 1/p`.
pub fn conjugate(p: &ExtScalar) -> Result<ExtScalar> {
    p.require_at_least_one("conjugated exponent")?;
    Ok(ExtScalar::from_recip(BigRational::one() - p.recip()?))
}

/// `|1/p|_{≥k} = 1/p_k + ⋯ + 1/p_m` with `k` one-based.
pub fn tail_sum(p: &ExponentVector, k: usize) -> Result<BigRational> {
    if k == 0 || k > p.len() {
        return Err(Error::Index {
            index: k,
            len: p.len(),
        });
    }
    p.entries()[k - 1..]
        .iter()
        .try_fold(BigRational::zero(), |acc, x| Ok(acc + x.recip()?))
}

/// `1/r − |1/p| + |1/q|`.
pub fn criterion(r: &ExtScalar, p: &ExponentVector, q: &ExponentVector) -> Result<BigRational> {
    check_same_len(p, q)?;
    if p.is_empty() {
        return Err(Error::Shape("empty exponent vectors".into()));
    }
    Ok(r.recip()? - tail_sum(p, 1)? + tail_sum(q, 1)?)
}

/// Which of the two inclusion hypotheses holds.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Applicability {
    /// `q_k ≥ p_k` for all `k` and criterion `> 0`.
    Strict,
    /// `q_k ≥ p_k` for `k ≥ 2`, `q_1 > p_1`, and criterion `≥ 0`.
    Boundary,
}

/// Decides whether the inclusion `Π(r;p) ⊂ Π(s;q)` applies; the error names
/// the failed condition.
pub fn applicability(
    r: &ExtScalar,
    p: &ExponentVector,
    q: &ExponentVector,
) -> Result<Applicability> {
    r.require_at_least_one("r")?;
    check_same_len(p, q)?;
    for (k, (pk, qk)) in p.iter().zip(q.iter()).enumerate() {
        pk.require_at_least_one(&format!("p_{}", k + 1))?;
        qk.require_at_least_one(&format!("q_{}", k + 1))?;
    }
    let crit = criterion(r, p, q)?;
    let tail_ok = p.iter().zip(q.iter()).skip(1).position(|(pk, qk)| qk < pk);
    if let Some(i) = tail_ok {
        return Err(Error::Inapplicable(format!(
            "q_{k} = {} < p_{k} = {}",
            q[i + 1],
            p[i + 1],
            k = i + 2
        )));
    }
    if crit.is_positive() && q[0] >= p[0] {
        return Ok(Applicability::Strict);
    }
    if !crit.is_negative() && q[0] > p[0] {
        return Ok(Applicability::Boundary);
    }
    if crit.is_negative() {
        Err(Error::Inapplicable(format!(
            "criterion 1/r - |1/p| + |1/q| = {crit} < 0"
        )))
    } else if q[0] < p[0] {
        Err(Error::Inapplicable(format!(
            "q_1 = {} < p_1 = {}",
            q[0], p[0]
        )))
    } else {
        Err(Error::Inapplicable(format!(
            "criterion is 0 but q_1 = p_1 = {}; the boundary case needs q_1 > p_1",
            p[0]
        )))
    }
}

/// Target exponents `s` with `1/s_k = 1/r − |1/p|_{≥k} + |1/q|_{≥k}`.
pub fn inclusion_exponents(
    r: &ExtScalar,
    p: &ExponentVector,
    q: &ExponentVector,
) -> Result<ExponentVector> {
    applicability(r, p, q)?;
    let inv_r = r.recip()?;
    let mut out = Vec::with_capacity(p.len());
    for k in 1..=p.len() {
        let inv_s = &inv_r - tail_sum(p, k)? + tail_sum(q, k)?;
        if inv_s.is_negative() {
            return Err(Error::Inconsistent(format!("1/s_{k} = {inv_s} < 0")));
        }
        let s = ExtScalar::from_recip(inv_s.clone());
        assert!(
            s >= ExtScalar::one(),
            "inclusion produced s_{k} = {s} < 1 from an applicable triple"
        );
        debug_assert_eq!(
            s.recip().unwrap() - tail_sum(q, k).unwrap(),
            &inv_r - tail_sum(p, k).unwrap()
        );
        out.push(s);
    }
    Ok(ExponentVector::new(out))
}

/// Exponent families `(s_1, …, s_m)` for the critical case `p = m`; `s_1 = ∞`
/// in every variant.
pub fn critical_exponents(m: usize, variant: VariantTag) -> Result<ExponentVector> {
    if m < 2 {
        return Err(Error::Domain(format!("arity m must be >= 2, got {m}")));
    }
    let mi = m as i64;
    let tail: Vec<ExtScalar> = match variant {
        VariantTag::Derived => {
            // Fix slot 1; the remaining (m−1)-linear form is
            // (2; (2(m−1))*, …)-summing and is lifted to (s; m*, …).
            let r = ExtScalar::integer(2);
            let p = ExponentVector::uniform(conjugate(&ExtScalar::integer(2 * (mi - 1)))?, m - 1);
            let q = ExponentVector::uniform(conjugate(&ExtScalar::integer(mi))?, m - 1);
            inclusion_exponents(&r, &p, &q)?.into_entries()
        }
        VariantTag::CorollaryDerived => {
            let r = ExtScalar::integer(2);
            let p = ExponentVector::uniform(conjugate(&ExtScalar::integer(2 * mi))?, m);
            let q = ExponentVector::uniform(conjugate(&ExtScalar::integer(mi))?, m);
            let s = inclusion_exponents(&r, &p, &q)?;
            debug_assert!(s[0].is_infinite());
            s.into_entries().split_off(1)
        }
        VariantTag::Printed => (2..=mi)
            .map(|k| ExtScalar::ratio(2 * mi * (mi - 1), mi + mi * k - 2 * k))
            .collect::<Result<_>>()?,
        VariantTag::CorollaryPrinted => (2..=mi)
            .map(|k| ExtScalar::ratio(2 * mi, k))
            .collect::<Result<_>>()?,
        VariantTag::LowerBound => (2..=mi)
            .map(|k| ExtScalar::ratio(mi, k - 1))
            .collect::<Result<_>>()?,
    };
    let mut entries = Vec::with_capacity(m);
    entries.push(ExtScalar::Infinity);
    entries.extend(tail);
    Ok(ExponentVector::new(entries))
}

/// `2^{(m−2)/2}` for [`ConstantChoice::Abstract`], `2^{(m−1)/2}` for
/// [`ConstantChoice::Theorem`].
pub fn theorem_constant(m: usize, choice: ConstantChoice) -> Result<TheoremConstant> {
    if m < 2 {
        return Err(Error::Domain(format!("arity m must be >= 2, got {m}")));
    }
    let shift = match choice {
        ConstantChoice::Abstract => 2,
        ConstantChoice::Theorem => 1,
    };
    let exponent = ExtScalar::ratio(m as i64 - shift, 2)?;
    let value = 2f64.powf(exponent.to_f64());
    Ok(TheoremConstant {
        base: 2,
        exponent,
        value,
    })
}

/// The three conditions of the bilinear admissibility test.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum BilinearCondition {
    /// `a ≥ q/(q−1)`.
    InnerThreshold,
    /// `b ≥ pq/(pq−p−q)`.
    OuterThreshold,
    /// `1/a + 1/b ≤ 3/2 − (1/p + 1/q)`.
    ReciprocalSum,
}

impl fmt::Display for BilinearCondition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            BilinearCondition::InnerThreshold => "a >= q/(q-1)",
            BilinearCondition::OuterThreshold => "b >= pq/(pq-p-q)",
            BilinearCondition::ReciprocalSum => "1/a + 1/b <= 3/2 - (1/p + 1/q)",
        })
    }
}

/// Outcome of [`check_admissible_bilinear`] with the failed conditions listed.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Admissibility {
    pub admissible: bool,
    pub failed: Vec<BilinearCondition>,
}

/// Admissibility of `(a, b)` for bilinear forms on `ℓ_p × ℓ_q` off the
/// critical line. Thresholds are compared through reciprocals so `p` or
/// `q = ∞` need no special casing.
pub fn check_admissible_bilinear(
    p: &ExtScalar,
    q: &ExtScalar,
    a: &ExtScalar,
    b: &ExtScalar,
) -> Result<Admissibility> {
    let two = ExtScalar::integer(2);
    if *p < two || *q < two {
        return Err(Error::Domain(format!(
            "p and q must lie in [2, inf], got p={p}, q={q}"
        )));
    }
    a.require_positive("a")?;
    b.require_positive("b")?;
    let (ip, iq, ia, ib) = (p.recip()?, q.recip()?, a.recip()?, b.recip()?);
    let one = BigRational::one();
    let slack = &one - &ip - &iq;
    if !slack.is_positive() {
        return Err(Error::OutOfScope(format!(
            "1/p + 1/q = {} >= 1; admissibility is only characterised below the critical line",
            &ip + &iq
        )));
    }
    let mut failed = Vec::new();
    if ia > &one - &iq {
        failed.push(BilinearCondition::InnerThreshold);
    }
    if ib > slack {
        failed.push(BilinearCondition::OuterThreshold);
    }
    if &ia + &ib > BigRational::new(3.into(), 2.into()) - &ip - &iq {
        failed.push(BilinearCondition::ReciprocalSum);
    }
    Ok(Admissibility {
        admissible: failed.is_empty(),
        failed,
    })
}

pub fn admissible_bilinear(
    p: &ExtScalar,
    q: &ExtScalar,
    a: &ExtScalar,
    b: &ExtScalar,
) -> Result<bool> {
    check_admissible_bilinear(p, q, a, b).map(|r| r.admissible)
}

/// On `ℓ_2 × ℓ_2` the mixed `(b, a)` norm is bounded by `∥U∥` for every `n`
/// exactly when `b = ∞` and `a ≥ 2`.
pub fn critical_bilinear_admissible(a: &ExtScalar, b: &ExtScalar) -> bool {
    b.is_infinite() && *a >= ExtScalar::integer(2)
}

fn check_same_len(p: &ExponentVector, q: &ExponentVector) -> Result<()> {
    if p.len() != q.len() {
        return Err(Error::Shape(format!(
            "exponent vectors differ in length: {} vs {}",
            p.len(),
            q.len()
        )));
    }
    Ok(())
}

/// Floating view of a rational, used by callers that need `f64` bounds.
pub fn rational_to_f64(v: &BigRational) -> f64 {
    v.to_f64().unwrap_or(f64::NAN)
}
