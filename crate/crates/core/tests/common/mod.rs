#![allow(dead_code)]

use critical_hl::exponents::{applicability, ExponentVector, ExtScalar};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use rand::Rng;

fn rat(a: i64, b: i64) -> BigRational {
    BigRational::new(BigInt::from(a), BigInt::from(b))
}

/// Random exponent in `[1, ∞]` given through a reciprocal `a/b ∈ [0, 1]`.
pub fn random_exponent<R: Rng>(rng: &mut R) -> ExtScalar {
    let b = rng.random_range(1..=12i64);
    let a = rng.random_range(0..=b);
    ExtScalar::from_recip(rat(a, b))
}

/// Random positive exponent in `[1/2, ∞]`, used for mixed (quasi-)norms.
pub fn random_mixed_exponent<R: Rng>(rng: &mut R) -> ExtScalar {
    if rng.random_range(0..6) == 0 {
        return ExtScalar::infinity();
    }
    let b = rng.random_range(1..=8i64);
    let a = rng.random_range(b / 2 + 1..=16i64.max(b));
    ExtScalar::from(rat(a, b))
}

/// Random `(r, p, q)` accepted by `applicability`, mixing strict and boundary
/// cases.
pub fn random_applicable_triple<R: Rng>(
    rng: &mut R,
) -> (ExtScalar, ExponentVector, ExponentVector) {
    loop {
        let m = rng.random_range(1..=5usize);
        let rb = rng.random_range(1..=12i64);
        let inv_r = rat(rng.random_range(1..=rb), rb);
        let p: Vec<ExtScalar> = (0..m).map(|_| random_exponent(rng)).collect();
        let inv_p: Vec<BigRational> = p.iter().map(|x| x.recip().unwrap()).collect();
        let mut d = vec![BigRational::zero(); m];
        for k in 0..m {
            let w = rat(rng.random_range(0..=4), 4 * (m as i64 + 1));
            d[k] = (&w * &inv_r).min(inv_p[k].clone());
        }
        if rng.random_bool(0.3) {
            let rest: BigRational = d[1..]
                .iter()
                .cloned()
                .fold(BigRational::zero(), |a, b| a + b);
            let d1 = &inv_r - rest;
            if d1.is_positive() && d1 <= inv_p[0] {
                d[0] = d1;
            }
        }
        let q: Vec<ExtScalar> = inv_p
            .iter()
            .zip(&d)
            .map(|(ip, dk)| ExtScalar::from_recip(ip - dk))
            .collect();
        let r = ExtScalar::from_recip(inv_r);
        let (p, q) = (ExponentVector::new(p), ExponentVector::new(q));
        if applicability(&r, &p, &q).is_ok() {
            return (r, p, q);
        }
    }
}

pub fn close(a: f64, b: f64, rel: f64) -> bool {
    (a - b).abs() <= rel * a.abs().max(b.abs()) + f64::MIN_POSITIVE
}
