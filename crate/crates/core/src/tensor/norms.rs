use crate::error::{Error, Result};
use crate::exponents::{conjugate, ExponentVector, ExtScalar};
use crate::opnorm::{operator_norm, AscentSettings};
use crate::scalar::Scalar;
use crate::tensor::{MultilinearForm, VectorInLp};

/// `(Σ v_i^p)^{1/p}` over nonnegative values, or `max v_i` for `p = ∞`.
///
/// The largest value is factored out first so large exponents neither
/// overflow nor underflow.
pub fn lp_norm(values: impl Iterator<Item = f64> + Clone, p: f64) -> f64 {
    let top = values.clone().fold(0.0f64, f64::max);
    if top == 0.0 || p.is_infinite() {
        return top;
    }
    let sum: f64 = values.map(|v| (v / top).powf(p)).sum();
    top * sum.powf(1.0 / p)
}

/// Nested mixed norm of the coefficient array: level `m` (innermost index)
/// is reduced first with `s_m`, level 1 last with `s_1`; `∞` levels take a
/// maximum.
pub fn mixed_norm<S: Scalar>(form: &MultilinearForm<S>, s: &ExponentVector) -> Result<f64> {
    if s.len() != form.arity() {
        return Err(Error::Shape(format!(
            "{} exponents for a {}-linear form",
            s.len(),
            form.arity()
        )));
    }
    s.require_positive()?;
    let top = form
        .coeffs()
        .iter()
        .map(|z| z.modulus_f64())
        .fold(0.0f64, f64::max);
    if top == 0.0 {
        return Ok(0.0);
    }
    let mut level: Vec<f64> = form
        .coeffs()
        .iter()
        .map(|z| z.modulus_f64() / top)
        .collect();
    for (k, &n) in form.dims().iter().enumerate().rev() {
        let sk = s[k].to_f64();
        level = level
            .chunks_exact(n)
            .map(|g| lp_norm(g.iter().copied(), sk))
            .collect();
    }
    debug_assert_eq!(level.len(), 1);
    Ok(top * level[0])
}

/// Weak `ℓ_p` norm `sup_{∥φ∥ ≤ 1} (Σ_j |φ(x_j)|^p)^{1/p}` of a sequence in
/// `ℓ_q^n`, computed as the norm of the bilinear form `(φ, y) ↦ Σ φ_i x_{j,i} y_j`
/// on `ℓ_{q*}^n × ℓ_{p*}^N`.
///
/// The result is exact when both exponents are 2 (largest singular value) and
/// an ascent lower bound otherwise.
pub fn weak_norm<S: Scalar>(
    xs: &[VectorInLp<S>],
    p: &ExtScalar,
    settings: &AscentSettings,
) -> Result<f64> {
    p.require_at_least_one("weak-norm exponent")?;
    let first = xs
        .first()
        .ok_or_else(|| Error::Shape("empty sequence".into()))?;
    let n = first.len();
    let q = first.p.clone();
    if let Some(bad) = xs.iter().find(|x| x.len() != n || x.p != q) {
        return Err(Error::Shape(format!(
            "sequence mixes ℓ_{q}^{n} with ℓ_{}^{}",
            bad.p,
            bad.len()
        )));
    }
    let big_n = xs.len();
    let form = MultilinearForm::from_fn(vec![n, big_n], |j| xs[j[1]].entries[j[0]])?
        .with_domain(ExponentVector::new(vec![conjugate(&q)?, conjugate(p)?]))?;
    Ok(operator_norm(&form, settings)?.value)
}

/// Right side minus left side of the mixed-norm Minkowski inequality
/// `(Σ_i (Σ_j a_ij^p)^{q/p})^{1/q} ≤ (Σ_j (Σ_i a_ij^q)^{p/q})^{1/p}` for
/// `0 < p ≤ q ≤ ∞`.
pub fn minkowski_gap<S: Scalar>(
    a: &MultilinearForm<S>,
    p: &ExtScalar,
    q: &ExtScalar,
) -> Result<f64> {
    if a.arity() != 2 {
        return Err(Error::Shape("minkowski_gap needs a matrix".into()));
    }
    p.require_positive("p")?;
    if p > q {
        return Err(Error::Domain(format!("need p <= q, got p={p}, q={q}")));
    }
    let left = mixed_norm(a, &ExponentVector::new(vec![q.clone(), p.clone()]))?;
    let right = mixed_norm(
        &a.transpose()?,
        &ExponentVector::new(vec![p.clone(), q.clone()]),
    )?;
    Ok(right - left)
}
