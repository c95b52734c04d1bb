//! Tensor JSON files and a real-or-complex form wrapper.
//!
//! ```json
//! {"m": 2, "dims": [2, 2], "scalar": "real", "coeffs": [1.0, 0.0, 0.0, 1.0]}
//! ```
//!
//! `coeffs` is flat row-major (last index fastest); complex coefficients are
//! `[re, im]` pairs. An optional `domain_p` array of exponent strings
//! overrides the default critical domain `ℓ_m`.

use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exponents::ExponentVector;
use crate::opnorm::{operator_norm, upper_bound_l1, AscentSettings, NormEstimate};
use crate::scalar::{Scalar, ScalarField, C64};
use crate::tensor::{mixed_norm, AnalyticNorm, MultilinearForm};

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct TensorFile {
    m: usize,
    dims: Vec<usize>,
    scalar: ScalarField,
    coeffs: Vec<Coeff>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    domain_p: Option<ExponentVector>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(untagged)]
enum Coeff {
    Real(f64),
    Complex([f64; 2]),
}

/// A form whose scalar field is only known at run time.
#[derive(Clone, Debug, PartialEq)]
pub enum DynForm {
    Real(MultilinearForm<f64>),
    Complex(MultilinearForm<C64>),
}

impl From<MultilinearForm<f64>> for DynForm {
    fn from(f: MultilinearForm<f64>) -> Self {
        DynForm::Real(f)
    }
}

impl From<MultilinearForm<C64>> for DynForm {
    fn from(f: MultilinearForm<C64>) -> Self {
        DynForm::Complex(f)
    }
}

/// Floating summary of a [`NormEstimate`], independent of the scalar field.
#[derive(Clone, Debug, Serialize)]
pub struct NormSummary {
    pub value: f64,
    pub method: crate::opnorm::NormMethod,
    pub restarts_used: usize,
    pub iterations: usize,
    pub converged: bool,
    pub upper_bound_l1: f64,
}

impl NormSummary {
    fn from_estimate<S: Scalar>(est: &NormEstimate<S>, form: &MultilinearForm<S>) -> Self {
        NormSummary {
            value: est.value,
            method: est.method,
            restarts_used: est.restarts_used,
            iterations: est.iterations,
            converged: est.converged,
            upper_bound_l1: upper_bound_l1(form),
        }
    }
}

impl DynForm {
    pub fn field(&self) -> ScalarField {
        match self {
            DynForm::Real(_) => ScalarField::Real,
            DynForm::Complex(_) => ScalarField::Complex,
        }
    }

    pub fn arity(&self) -> usize {
        self.dims().len()
    }

    pub fn dims(&self) -> &[usize] {
        match self {
            DynForm::Real(f) => f.dims(),
            DynForm::Complex(f) => f.dims(),
        }
    }

    pub fn domain_p(&self) -> &ExponentVector {
        match self {
            DynForm::Real(f) => f.domain_p(),
            DynForm::Complex(f) => f.domain_p(),
        }
    }

    pub fn analytic_norm(&self) -> Option<AnalyticNorm> {
        match self {
            DynForm::Real(f) => f.analytic_norm(),
            DynForm::Complex(f) => f.analytic_norm(),
        }
    }

    pub fn with_domain(self, domain: ExponentVector) -> Result<Self> {
        Ok(match self {
            DynForm::Real(f) => DynForm::Real(f.with_domain(domain)?),
            DynForm::Complex(f) => DynForm::Complex(f.with_domain(domain)?),
        })
    }

    pub fn mixed_norm(&self, s: &ExponentVector) -> Result<f64> {
        match self {
            DynForm::Real(f) => mixed_norm(f, s),
            DynForm::Complex(f) => mixed_norm(f, s),
        }
    }

    pub fn operator_norm(&self, settings: &AscentSettings) -> Result<NormSummary> {
        match self {
            DynForm::Real(f) => Ok(NormSummary::from_estimate(&operator_norm(f, settings)?, f)),
            DynForm::Complex(f) => Ok(NormSummary::from_estimate(&operator_norm(f, settings)?, f)),
        }
    }

    pub fn from_json_str(s: &str) -> Result<Self> {
        let file: TensorFile = serde_json::from_str(s)?;
        if file.m != file.dims.len() {
            return Err(Error::Shape(format!(
                "m = {} but dims has {} entries",
                file.m,
                file.dims.len()
            )));
        }
        let size = file
            .dims
            .iter()
            .try_fold(1usize, |acc, &n| acc.checked_mul(n))
            .ok_or_else(|| Error::Shape("dims overflow".into()))?;
        if size != file.coeffs.len() {
            return Err(Error::Shape(format!(
                "dims need {size} coefficients, got {}",
                file.coeffs.len()
            )));
        }
        let form: DynForm = match file.scalar {
            ScalarField::Real => {
                let coeffs = file
                    .coeffs
                    .iter()
                    .map(|c| match c {
                        Coeff::Real(v) => Ok(*v),
                        Coeff::Complex(_) => {
                            Err(Error::Parse("complex coefficient in a real tensor".into()))
                        }
                    })
                    .collect::<Result<Vec<_>>>()?;
                MultilinearForm::new(file.dims, coeffs)?.into()
            }
            ScalarField::Complex => {
                let coeffs = file
                    .coeffs
                    .iter()
                    .map(|c| match c {
                        Coeff::Complex([re, im]) => Ok(C64::new(*re, *im)),
                        Coeff::Real(_) => {
                            Err(Error::Parse("real coefficient in a complex tensor".into()))
                        }
                    })
                    .collect::<Result<Vec<_>>>()?;
                MultilinearForm::new(file.dims, coeffs)?.into()
            }
        };
        match file.domain_p {
            Some(d) => form.with_domain(d),
            None => Ok(form),
        }
    }

    pub fn to_json_string(&self) -> Result<String> {
        let default_domain = ExponentVector::uniform(
            crate::exponents::ExtScalar::integer(self.arity() as i64),
            self.arity(),
        );
        let domain_p = (self.domain_p() != &default_domain).then(|| self.domain_p().clone());
        let coeffs = match self {
            DynForm::Real(f) => f.coeffs().iter().map(|&v| Coeff::Real(v)).collect(),
            DynForm::Complex(f) => f
                .coeffs()
                .iter()
                .map(|z| Coeff::Complex([z.re, z.im]))
                .collect(),
        };
        let file = TensorFile {
            m: self.arity(),
            dims: self.dims().to_vec(),
            scalar: self.field(),
            coeffs,
            domain_p,
        };
        Ok(serde_json::to_string(&file)?)
    }

    pub fn read_json(path: &Path) -> Result<Self> {
        Self::from_json_str(&fs::read_to_string(path)?)
    }

    pub fn write_json(&self, path: &Path) -> Result<()> {
        fs::write(path, self.to_json_string()?)?;
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::witnesses::{make_gaussian_random, make_t0};

    #[test]
    fn reads_documented_example() {
        let f = DynForm::from_json_str(
            r#"{"m":2,"dims":[2,2],"scalar":"real","coeffs":[1.0,0.0,0.0,1.0]}"#,
        )
        .unwrap();
        assert_eq!(f.field(), ScalarField::Real);
        assert_eq!(f.domain_p().to_string(), "2,2");
    }

    #[test]
    fn complex_pairs_and_domain() {
        let s =
            r#"{"m":1,"dims":[2],"scalar":"complex","coeffs":[[1,2],[3,-4]],"domain_p":["inf"]}"#;
        let f = DynForm::from_json_str(s).unwrap();
        match &f {
            DynForm::Complex(t) => {
                assert_eq!(t.coeffs(), &[C64::new(1.0, 2.0), C64::new(3.0, -4.0)]);
                assert_eq!(t.domain_p().to_string(), "inf");
            }
            _ => panic!("expected complex"),
        }
        assert_eq!(
            DynForm::from_json_str(&f.to_json_string().unwrap()).unwrap(),
            f
        );
    }

    #[test]
    fn bit_exact_round_trip() {
        let f: DynForm = make_gaussian_random::<f64>(&[3, 4, 2], 8).unwrap().into();
        let back = DynForm::from_json_str(&f.to_json_string().unwrap()).unwrap();
        assert_eq!(back, f);
        let c: DynForm = make_gaussian_random::<C64>(&[3, 3], 8).unwrap().into();
        assert_eq!(
            DynForm::from_json_str(&c.to_json_string().unwrap()).unwrap(),
            c
        );
    }

    #[test]
    fn rejects_malformed() {
        for bad in [
            r#"{"m":3,"dims":[2,2],"scalar":"real","coeffs":[1,0,0,1]}"#,
            r#"{"m":2,"dims":[2,2],"scalar":"real","coeffs":[1,0,0]}"#,
            r#"{"m":2,"dims":[1,1],"scalar":"real","coeffs":[[1,0]]}"#,
            r#"{"m":2,"dims":[1,1],"scalar":"complex","coeffs":[1]}"#,
            r#"{"m":2,"dims":[1,1],"scalar":"octonion","coeffs":[1]}"#,
            r#"{"m":2,"dims":[18446744073709551615,2],"scalar":"real","coeffs":[]}"#,
            r#"{"m":1,"dims":[1],"scalar":"real","coeffs":[1],"domain_p":["0"]}"#,
            r#"{"m":1,"dims":[1],"scalar":"real","coeffs":[1],"extra":1}"#,
            r#"{"m":0,"dims":[],"scalar":"real","coeffs":[]}"#,
        ] {
            assert!(DynForm::from_json_str(bad).is_err(), "{bad}");
        }
    }

    #[test]
    fn analytic_metadata_is_not_serialized() {
        let f: DynForm = make_t0(2, 4).unwrap().into();
        let back = DynForm::from_json_str(&f.to_json_string().unwrap()).unwrap();
        assert!(back.analytic_norm().is_none());
    }
}
