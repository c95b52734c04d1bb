use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::dual::dual_argmax_f64;
use super::{NormEstimate, NormMethod};
use crate::error::{Error, Result};
use crate::rng::child_rng;
use crate::scalar::Scalar;
use crate::tensor::{lp_norm, MultilinearForm, VectorInLp};

/// Relative slack allowed for rounding when checking that block steps never
/// decrease the attained value.
const MONOTONE_SLACK: f64 = 1e-10;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AscentSettings {
    pub restarts: usize,
    pub tol: f64,
    pub max_iters: usize,
    pub seed: u64,
}

impl Default for AscentSettings {
    fn default() -> Self {
        AscentSettings {
            restarts: 16,
            tol: 1e-10,
            max_iters: 500,
            seed: 42,
        }
    }
}

impl AscentSettings {
    pub fn with_restarts(mut self, restarts: usize) -> Self {
        self.restarts = restarts;
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }
}

/// One ascent trajectory. `history[0]` is the value at the normalized start,
/// `history[i]` the value after sweep `i`.
#[derive(Clone, Debug)]
pub struct AscentRun<S> {
    pub value: f64,
    pub iterations: usize,
    pub converged: bool,
    pub history: Vec<f64>,
    pub maximizer: Vec<Vec<S>>,
}

/// Runs block-coordinate ascent from `init` (each slot is first rescaled to
/// the unit sphere of its domain). Stops once a sweep improves the value by
/// less than `tol` relative, or after `max_iters` sweeps.
pub fn ascend_from<S: Scalar>(
    form: &MultilinearForm<S>,
    init: Vec<Vec<S>>,
    tol: f64,
    max_iters: usize,
) -> Result<AscentRun<S>> {
    let ps = slot_exponents(form)?;
    if init.len() != form.arity() || init.iter().zip(form.dims()).any(|(x, &n)| x.len() != n) {
        return Err(Error::Shape(
            "initial point does not match the form's dimensions".into(),
        ));
    }
    let mut x: Vec<Vec<S>> = init
        .into_iter()
        .zip(&ps)
        .map(|(v, &p)| normalize(v, p))
        .collect();

    let mut current = form.evaluate(&x)?.modulus_f64();
    let mut history = vec![current];
    let mut converged = false;
    let mut iterations = 0;
    while iterations < max_iters {
        iterations += 1;
        let before = current;
        for (k, &p) in ps.iter().enumerate() {
            let g = form.contract_unchecked(k, &x);
            let (v, xk) = dual_argmax_f64(&g, p)?;
            assert!(
                v >= current * (1.0 - MONOTONE_SLACK),
                "ascent step decreased the value: {current} -> {v}"
            );
            current = v;
            x[k] = xk;
        }
        history.push(current);
        if current - before <= tol * current {
            converged = true;
            break;
        }
    }
    let value = form.evaluate(&x)?.modulus_f64();
    Ok(AscentRun {
        value,
        iterations,
        converged,
        history,
        maximizer: x,
    })
}

/// Best value over `settings.restarts` Gaussian starts; restart `r` draws from
/// the child stream `(settings.seed, r)`, so the result does not depend on
/// thread scheduling.
pub fn ascent_norm<S: Scalar>(
    form: &MultilinearForm<S>,
    settings: &AscentSettings,
) -> Result<NormEstimate<S>> {
    if settings.restarts == 0 {
        return Err(Error::Domain("restarts must be >= 1".into()));
    }
    if settings.tol.is_nan() || settings.tol <= 0.0 {
        return Err(Error::Domain(format!(
            "tol must be > 0, got {}",
            settings.tol
        )));
    }
    slot_exponents(form)?;
    let domain = form.domain_p().entries();
    if form.is_zero() {
        return Ok(NormEstimate {
            value: 0.0,
            method: NormMethod::Ascent,
            restarts_used: 0,
            iterations: 0,
            converged: true,
            maximizer: form
                .dims()
                .iter()
                .zip(domain)
                .map(|(&n, p)| VectorInLp::basis(n, 0, p.clone()))
                .collect(),
        });
    }
    let runs = (0..settings.restarts)
        .into_par_iter()
        .map(|r| {
            let mut rng = child_rng(settings.seed, r as u64);
            let init = form
                .dims()
                .iter()
                .map(|&n| (0..n).map(|_| S::gaussian(&mut rng)).collect())
                .collect();
            ascend_from(form, init, settings.tol, settings.max_iters)
        })
        .collect::<Result<Vec<_>>>()?;
    let best = runs
        .into_iter()
        .reduce(|a, b| if b.value > a.value { b } else { a })
        .expect("at least one restart");
    Ok(NormEstimate {
        value: best.value,
        method: NormMethod::Ascent,
        restarts_used: settings.restarts,
        iterations: best.iterations,
        converged: best.converged,
        maximizer: best
            .maximizer
            .into_iter()
            .zip(domain)
            .map(|(v, p)| VectorInLp::new(v, p.clone()))
            .collect(),
    })
}

fn slot_exponents<S: Scalar>(form: &MultilinearForm<S>) -> Result<Vec<f64>> {
    form.domain_p()
        .iter()
        .enumerate()
        .map(|(k, p)| {
            p.require_at_least_one(&format!("domain exponent of slot {}", k + 1))?;
            Ok(p.to_f64())
        })
        .collect()
}

fn normalize<S: Scalar>(mut v: Vec<S>, p: f64) -> Vec<S> {
    let norm = lp_norm(v.iter().map(|z| z.modulus_f64()), p);
    if norm == 0.0 || !norm.is_finite() {
        v.iter_mut().for_each(|z| *z = S::zero());
        v[0] = S::one();
    } else {
        v.iter_mut().for_each(|z| *z = z.times_real(1.0 / norm));
    }
    v
}
