//! Operator norms `∥T∥ = sup |T(x¹,…,xᵐ)|` over products of `ℓ_p` unit balls.
//!
//! Bilinear forms on `ℓ_2 × ℓ_2` go through the largest singular value.
//! Everything else uses block-coordinate ascent: each block step replaces one
//! slot by the exact maximizer of the linear functional obtained by
//! contracting the other slots, so the attained value never decreases and is
//! always a feasible (certified lower-bound) value.

mod ascent;
mod dual;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::exponents::ExtScalar;
use crate::scalar::Scalar;
use crate::tensor::{MultilinearForm, VectorInLp};

pub use ascent::{ascend_from, ascent_norm, AscentRun, AscentSettings};
pub use dual::dual_argmax;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum NormMethod {
    ExactSingular,
    Ascent,
    Analytic,
}

/// An operator-norm value with provenance. For ascent and SVD results the
/// maximizer is a feasible point attaining `value`; analytic values carry
/// no maximizer.
#[derive(Clone, Debug)]
pub struct NormEstimate<S: Scalar> {
    pub value: f64,
    pub method: NormMethod,
    pub restarts_used: usize,
    pub iterations: usize,
    pub converged: bool,
    pub maximizer: Vec<VectorInLp<S>>,
}

impl<S: Scalar> NormEstimate<S> {
    pub fn analytic(value: f64) -> Self {
        NormEstimate {
            value,
            method: NormMethod::Analytic,
            restarts_used: 0,
            iterations: 0,
            converged: true,
            maximizer: Vec::new(),
        }
    }
}

/// Largest singular value of a bilinear form, i.e. its norm on `ℓ_2 × ℓ_2`.
/// The domain exponents attached to `form` are not consulted.
pub fn spectral_norm<S: Scalar>(form: &MultilinearForm<S>) -> Result<NormEstimate<S>> {
    if form.arity() != 2 {
        return Err(Error::Shape(format!(
            "spectral norm needs a bilinear form, got arity {}",
            form.arity()
        )));
    }
    let (n1, n2) = (form.dims()[0], form.dims()[1]);
    let two = ExtScalar::integer(2);
    if form.is_zero() {
        return Ok(NormEstimate {
            value: 0.0,
            method: NormMethod::ExactSingular,
            restarts_used: 0,
            iterations: 0,
            converged: true,
            maximizer: vec![
                VectorInLp::basis(n1, 0, two.clone()),
                VectorInLp::basis(n2, 0, two),
            ],
        });
    }
    let a = nalgebra::DMatrix::from_row_slice(n1, n2, form.coeffs());
    let svd = a.svd(true, true);
    let (top, &sigma) = svd
        .singular_values
        .iter()
        .enumerate()
        .max_by(|a, b| a.1.total_cmp(b.1).then(b.0.cmp(&a.0)))
        .expect("nonempty matrix");
    let u = svd.u.as_ref().expect("requested U");
    let v_t = svd.v_t.as_ref().expect("requested V^H");
    // x^T A y = u^H A v = σ for x = conj(u), y = v = conj(row of V^H).
    let x: Vec<S> = u.column(top).iter().map(|z| z.conjugate()).collect();
    let y: Vec<S> = v_t.row(top).iter().map(|z| z.conjugate()).collect();
    Ok(NormEstimate {
        value: sigma,
        method: NormMethod::ExactSingular,
        restarts_used: 0,
        iterations: 0,
        converged: true,
        maximizer: vec![VectorInLp::new(x, two.clone()), VectorInLp::new(y, two)],
    })
}

/// `Σ_J |a_J|`, an upper bound on `∥T∥` for any domain exponents `≥ 1`.
pub fn upper_bound_l1<S: Scalar>(form: &MultilinearForm<S>) -> f64 {
    form.coeffs().iter().map(|z| z.modulus_f64()).sum()
}

/// Dispatches to [`spectral_norm`] for bilinear forms on `ℓ_2 × ℓ_2` and to
/// [`ascent_norm`] otherwise.
pub fn operator_norm<S: Scalar>(
    form: &MultilinearForm<S>,
    settings: &AscentSettings,
) -> Result<NormEstimate<S>> {
    let two = ExtScalar::integer(2);
    if form.arity() == 2 && form.domain_p().iter().all(|p| *p == two) {
        spectral_norm(form)
    } else {
        ascent_norm(form, settings)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::C64;

    fn matrix(n1: usize, n2: usize, f: impl Fn(usize, usize) -> f64) -> MultilinearForm<f64> {
        MultilinearForm::from_fn(vec![n1, n2], |j| f(j[0], j[1])).unwrap()
    }

    #[test]
    fn spectral_examples() {
        let id = matrix(6, 6, |i, j| if i == j { 1.0 } else { 0.0 });
        assert!((spectral_norm(&id).unwrap().value - 1.0).abs() < 1e-12);

        let (u, v) = ([1.0, -2.0, 2.0], [3.0, 4.0]);
        let rank_one = matrix(3, 2, |i, j| u[i] * v[j]);
        assert!((spectral_norm(&rank_one).unwrap().value - 15.0).abs() < 1e-12);

        let t0 = matrix(4, 9, |i, _| if i == 0 { 1.0 } else { 0.0 });
        let est = spectral_norm(&t0).unwrap();
        assert!((est.value - 3.0).abs() < 1e-12);
        assert_eq!(est.method, NormMethod::ExactSingular);
    }

    #[test]
    fn spectral_maximizer_attains_value() {
        let t = MultilinearForm::<C64>::from_fn(vec![3, 5], |j| {
            C64::new(
                (j[0] as f64 - 1.0) * 0.7 + j[1] as f64,
                (j[0] * j[1]) as f64 - 2.0,
            )
        })
        .unwrap();
        let est = spectral_norm(&t).unwrap();
        let val = t.evaluate_lp(&est.maximizer).unwrap();
        assert!((val.norm() - est.value).abs() < 1e-9 * est.value);
        for x in &est.maximizer {
            assert!(x.norm() <= 1.0 + 1e-12);
        }
    }

    #[test]
    fn l1_bound_examples() {
        let id = matrix(5, 5, |i, j| if i == j { 1.0 } else { 0.0 });
        assert_eq!(upper_bound_l1(&id), 5.0);
        assert_eq!(
            upper_bound_l1(&MultilinearForm::<f64>::zeros(vec![2, 3, 2]).unwrap()),
            0.0
        );
    }

    #[test]
    fn spectral_rejects_trilinear() {
        let t = MultilinearForm::<f64>::zeros(vec![2, 2, 2]).unwrap();
        assert!(matches!(spectral_norm(&t), Err(Error::Shape(_))));
    }
}
