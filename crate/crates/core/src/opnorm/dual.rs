use crate::error::{Error, Result};
use crate::exponents::ExtScalar;
use crate::scalar::Scalar;
use crate::tensor::lp_norm;

/// Maximizes `Re Σ c_j x_j` over the unit `ℓ_p` ball.
///
/// Returns the maximum `∥c∥_{p*}` and a maximizer. For `p = 1` the maximizer
/// sits on the first coordinate of maximal modulus. A zero `c` yields value 0
/// and `e_1`.
pub fn dual_argmax<S: Scalar>(c: &[S], p: &ExtScalar) -> Result<(f64, Vec<S>)> {
    p.require_at_least_one("ball exponent")?;
    dual_argmax_f64(c, p.to_f64())
}

pub(crate) fn dual_argmax_f64<S: Scalar>(c: &[S], p: f64) -> Result<(f64, Vec<S>)> {
    if c.is_empty() {
        return Err(Error::Shape("empty functional".into()));
    }
    let moduli: Vec<f64> = c.iter().map(|z| z.modulus_f64()).collect();
    let (j_top, top) = moduli
        .iter()
        .copied()
        .enumerate()
        .fold(
            (0, 0.0f64),
            |best, (j, v)| if v > best.1 { (j, v) } else { best },
        );
    if top == 0.0 {
        let mut x = vec![S::zero(); c.len()];
        x[0] = S::one();
        return Ok((0.0, x));
    }
    if p.is_infinite() {
        let x = c.iter().map(|z| z.align_phase()).collect();
        return Ok((moduli.iter().sum(), x));
    }
    if p == 1.0 {
        let mut x = vec![S::zero(); c.len()];
        x[j_top] = c[j_top].align_phase();
        return Ok((top, x));
    }
    let power = 1.0 / (p - 1.0);
    let weights: Vec<f64> = moduli.iter().map(|&v| (v / top).powf(power)).collect();
    let scale = lp_norm(weights.iter().copied(), p);
    let x = c
        .iter()
        .zip(&weights)
        .map(|(z, &w)| z.align_phase().times_real(w / scale))
        .collect();
    let p_star = p / (p - 1.0);
    Ok((lp_norm(moduli.iter().copied(), p_star), x))
}
