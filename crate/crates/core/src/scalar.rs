//! Real and complex coefficient types.

use nalgebra::{Complex, ComplexField};
use rand::Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

pub type C64 = Complex<f64>;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ScalarField {
    #[default]
    Real,
    Complex,
}

/// Coefficient scalar: `f64` or `Complex<f64>`.
pub trait Scalar: ComplexField<RealField = f64> + Copy + Send + Sync + 'static {
    const FIELD: ScalarField;

    /// `|z|`.
    fn modulus_f64(self) -> f64;

    /// Unit-modulus `u` with `z · u = |z|`; `1` at zero.
    fn align_phase(self) -> Self;

    /// Multiplies by a real factor.
    fn times_real(self, k: f64) -> Self;

    fn real_part(self) -> f64;

    /// Standard Gaussian (independent real and imaginary parts when complex).
    fn gaussian<R: Rng + ?Sized>(rng: &mut R) -> Self;

    /// Uniform `±1` (always real-valued).
    fn random_sign<R: Rng + ?Sized>(rng: &mut R) -> Self {
        <Self as ComplexField>::from_real(if rng.random::<bool>() { 1.0 } else { -1.0 })
    }
}

impl Scalar for f64 {
    const FIELD: ScalarField = ScalarField::Real;

    fn modulus_f64(self) -> f64 {
        self.abs()
    }

    fn align_phase(self) -> Self {
        if self < 0.0 {
            -1.0
        } else {
            1.0
        }
    }

    fn times_real(self, k: f64) -> Self {
        self * k
    }

    fn real_part(self) -> f64 {
        self
    }

    fn gaussian<R: Rng + ?Sized>(rng: &mut R) -> Self {
        StandardNormal.sample(rng)
    }
}

impl Scalar for C64 {
    const FIELD: ScalarField = ScalarField::Complex;

    fn modulus_f64(self) -> f64 {
        self.norm()
    }

    fn align_phase(self) -> Self {
        let r = self.norm();
        if r == 0.0 {
            C64::new(1.0, 0.0)
        } else {
            self.conj() / r
        }
    }

    fn times_real(self, k: f64) -> Self {
        self * k
    }

    fn real_part(self) -> f64 {
        self.re
    }

    fn gaussian<R: Rng + ?Sized>(rng: &mut R) -> Self {
        C64::new(StandardNormal.sample(rng), StandardNormal.sample(rng))
    }
}
