//! Extremal and random test forms.
//!
//! | kind       | form                                         | norm (analytic)  |
//! |------------|----------------------------------------------|------------------|
//! | `dot`      | `Σ_j x¹_j ⋯ xᵐ_j` on `ℓ_m`                   | `1`              |
//! | `partial`  | first `r` slots pinned to coordinate 1       | `n^{r/m}`        |
//! | `t0`       | `x_1 Σ_j y_j` on `ℓ_2^{n1} × ℓ_2^{n2}`      | `n2^{1/2}`       |
//! | `identity` | `Σ_j x_j y_j` on `ℓ_2 × ℓ_2`                 | `1`              |
//! | `sign`     | i.i.d. uniform `±1` coefficients            | none             |
//! | `gauss`    | i.i.d. standard normal coefficients         | none             |

use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::exponents::{ExponentVector, ExtScalar};
use crate::io::DynForm;
use crate::rng::rng_from_seed;
use crate::scalar::{Scalar, ScalarField, C64};
use crate::tensor::{AnalyticNorm, MultilinearForm};

/// Largest coefficient count a recipe may request.
pub const MAX_COEFFS: usize = 1 << 26;

/// `T_n`: coefficient 1 on the main diagonal, on `ℓ_m^n × ⋯ × ℓ_m^n`.
pub fn make_dot(m: usize, n: usize) -> Result<MultilinearForm<f64>> {
    make_partial_dot(m, n, 0)
}

/// `T_{n−r}(x) = x¹_1 ⋯ xʳ_1 Σ_j x^{r+1}_j ⋯ xᵐ_j` on `ℓ_m^n`, with norm
/// `n^{r/m}` by Hölder. Values for `r > 2` are flagged as derived.
pub fn make_partial_dot(m: usize, n: usize, r: usize) -> Result<MultilinearForm<f64>> {
    if m < 2 || n < 1 {
        return Err(Error::Domain(format!(
            "need m >= 2 and n >= 1, got m={m}, n={n}"
        )));
    }
    if r + 2 > m {
        return Err(Error::Domain(format!(
            "pinned slots r={r} must satisfy r <= m-2 = {}",
            m - 2
        )));
    }
    check_size(&vec![n; m])?;
    let form = MultilinearForm::from_fn(vec![n; m], |j| {
        let pinned = j[..r].iter().all(|&a| a == 0);
        let diag = j[r..].iter().all(|&a| a == j[r]);
        if pinned && diag {
            1.0
        } else {
            0.0
        }
    })?;
    Ok(form.with_analytic_norm(AnalyticNorm {
        value: (n as f64).powf(r as f64 / m as f64),
        derived: r > 2,
    }))
}

/// `T_0(x, y) = x_1 Σ_j y_j` on `ℓ_2^{n1} × ℓ_2^{n2}`, norm `√n2`.
pub fn make_t0(n1: usize, n2: usize) -> Result<MultilinearForm<f64>> {
    if n1 < 1 || n2 < 1 {
        return Err(Error::Domain(format!("need n1, n2 >= 1, got {n1}, {n2}")));
    }
    check_size(&[n1, n2])?;
    let form = MultilinearForm::from_fn(vec![n1, n2], |j| if j[0] == 0 { 1.0 } else { 0.0 })?;
    Ok(form.with_analytic_norm(AnalyticNorm {
        value: (n2 as f64).sqrt(),
        derived: false,
    }))
}

/// `n × n` identity on `ℓ_2 × ℓ_2`.
pub fn make_identity(n: usize) -> Result<MultilinearForm<f64>> {
    let form = make_dot(2, n)?;
    Ok(form.with_analytic_norm(AnalyticNorm {
        value: 1.0,
        derived: false,
    }))
}

/// Independent uniform `±1` coefficients, drawn in row-major order from the
/// seeded stream. No analytic norm is attached.
pub fn make_sign_random(m: usize, n: usize, seed: u64) -> Result<MultilinearForm<f64>> {
    if m < 2 || n < 1 {
        return Err(Error::Domain(format!(
            "need m >= 2 and n >= 1, got m={m}, n={n}"
        )));
    }
    check_size(&vec![n; m])?;
    let mut rng = rng_from_seed(seed);
    MultilinearForm::from_fn(vec![n; m], |_| f64::random_sign(&mut rng))
}

/// Independent standard normal coefficients on the critical domain `ℓ_m`.
pub fn make_gaussian_random<S: Scalar>(dims: &[usize], seed: u64) -> Result<MultilinearForm<S>> {
    check_size(dims)?;
    let mut rng = rng_from_seed(seed);
    MultilinearForm::from_fn(dims.to_vec(), |_| S::gaussian(&mut rng))
}

fn check_size(dims: &[usize]) -> Result<()> {
    if dims.is_empty() {
        return Err(Error::Domain("dims must be nonempty".into()));
    }
    match dims.iter().try_fold(1usize, |acc, &n| acc.checked_mul(n)) {
        Some(size) if size <= MAX_COEFFS => Ok(()),
        _ => Err(Error::Domain(format!(
            "dims {dims:?} exceed {MAX_COEFFS} coefficients"
        ))),
    }
}

/// A form recipe as accepted on the command line, e.g. `partial:m=3,n=8,r=1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum WitnessSpec {
    Dot {
        m: usize,
        n: usize,
    },
    PartialDot {
        m: usize,
        n: usize,
        r: usize,
    },
    T0 {
        n1: usize,
        n2: usize,
    },
    Identity {
        n: usize,
    },
    Sign {
        m: usize,
        n: usize,
        seed: u64,
    },
    Gauss {
        dims: Vec<usize>,
        seed: u64,
        field: ScalarField,
    },
    File(PathBuf),
}

impl WitnessSpec {
    pub fn build(&self) -> Result<DynForm> {
        Ok(match self {
            WitnessSpec::Dot { m, n } => make_dot(*m, *n)?.into(),
            WitnessSpec::PartialDot { m, n, r } => make_partial_dot(*m, *n, *r)?.into(),
            WitnessSpec::T0 { n1, n2 } => make_t0(*n1, *n2)?.into(),
            WitnessSpec::Identity { n } => make_identity(*n)?.into(),
            WitnessSpec::Sign { m, n, seed } => make_sign_random(*m, *n, *seed)?.into(),
            WitnessSpec::Gauss {
                dims,
                seed,
                field: ScalarField::Real,
            } => make_gaussian_random::<f64>(dims, *seed)?.into(),
            WitnessSpec::Gauss {
                dims,
                seed,
                field: ScalarField::Complex,
            } => make_gaussian_random::<C64>(dims, *seed)?.into(),
            WitnessSpec::File(path) => DynForm::read_json(path)?,
        })
    }

    pub fn is_random(&self) -> bool {
        matches!(self, WitnessSpec::Sign { .. } | WitnessSpec::Gauss { .. })
    }

    /// Same recipe with a different seed; deterministic kinds are unchanged.
    pub fn with_seed(&self, seed: u64) -> Self {
        let mut out = self.clone();
        match &mut out {
            WitnessSpec::Sign { seed: s, .. } | WitnessSpec::Gauss { seed: s, .. } => *s = seed,
            _ => {}
        }
        out
    }

    pub fn seed(&self) -> Option<u64> {
        match self {
            WitnessSpec::Sign { seed, .. } | WitnessSpec::Gauss { seed, .. } => Some(*seed),
            _ => None,
        }
    }

    /// Same family at size `n` (for `t0`, `n2 = n`; for `gauss`, every slot).
    pub fn with_size(&self, n: usize) -> Result<Self> {
        let mut out = self.clone();
        match &mut out {
            WitnessSpec::Dot { n: k, .. }
            | WitnessSpec::PartialDot { n: k, .. }
            | WitnessSpec::Identity { n: k }
            | WitnessSpec::Sign { n: k, .. }
            | WitnessSpec::T0 { n2: k, .. } => *k = n,
            WitnessSpec::Gauss { dims, .. } => dims.iter_mut().for_each(|d| *d = n),
            WitnessSpec::File(_) => {
                return Err(Error::Config("a file form cannot be resized".into()))
            }
        }
        Ok(out)
    }

    /// Arity of the form this recipe builds, when known without reading files.
    pub fn arity(&self) -> Option<usize> {
        match self {
            WitnessSpec::Dot { m, .. }
            | WitnessSpec::PartialDot { m, .. }
            | WitnessSpec::Sign { m, .. } => Some(*m),
            WitnessSpec::T0 { .. } | WitnessSpec::Identity { .. } => Some(2),
            WitnessSpec::Gauss { dims, .. } => Some(dims.len()),
            WitnessSpec::File(_) => None,
        }
    }
}

impl fmt::Display for WitnessSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            WitnessSpec::Dot { m, n } => write!(f, "dot:m={m},n={n}"),
            WitnessSpec::PartialDot { m, n, r } => write!(f, "partial:m={m},n={n},r={r}"),
            WitnessSpec::T0 { n1, n2 } => write!(f, "t0:n1={n1},n2={n2}"),
            WitnessSpec::Identity { n } => write!(f, "identity:n={n}"),
            WitnessSpec::Sign { m, n, seed } => write!(f, "sign:m={m},n={n},seed={seed}"),
            WitnessSpec::Gauss { dims, seed, field } => {
                let d: Vec<String> = dims.iter().map(usize::to_string).collect();
                write!(f, "gauss:dims={},seed={seed}", d.join("x"))?;
                if *field == ScalarField::Complex {
                    f.write_str(",field=complex")?;
                }
                Ok(())
            }
            WitnessSpec::File(path) => write!(f, "file:{}", path.display()),
        }
    }
}

struct Params<'a> {
    kind: &'a str,
    pairs: Vec<(&'a str, &'a str)>,
}

impl<'a> Params<'a> {
    fn parse(kind: &'a str, body: &'a str) -> Result<Self> {
        let mut pairs: Vec<(&str, &str)> = Vec::new();
        if !body.trim().is_empty() {
            for item in body.split(',') {
                let (k, v) = item.split_once('=').ok_or_else(|| {
                    Error::Parse(format!("{kind}: expected key=value, got '{item}'"))
                })?;
                let k = k.trim();
                if pairs.iter().any(|(seen, _)| *seen == k) {
                    return Err(Error::Parse(format!("{kind}: duplicate key '{k}'")));
                }
                pairs.push((k, v.trim()));
            }
        }
        Ok(Params { kind, pairs })
    }

    fn raw(&self, key: &str) -> Option<&'a str> {
        self.pairs.iter().find(|(k, _)| *k == key).map(|(_, v)| *v)
    }

    fn get<T: FromStr>(&self, key: &str) -> Result<T> {
        let v = self
            .raw(key)
            .ok_or_else(|| Error::Parse(format!("{}: missing '{key}'", self.kind)))?;
        v.parse()
            .map_err(|_| Error::Parse(format!("{}: bad value '{v}' for '{key}'", self.kind)))
    }

    fn only(&self, allowed: &[&str]) -> Result<()> {
        match self.pairs.iter().find(|(k, _)| !allowed.contains(k)) {
            Some((k, _)) => Err(Error::Parse(format!("{}: unknown key '{k}'", self.kind))),
            None => Ok(()),
        }
    }
}

impl FromStr for WitnessSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (kind, body) = s
            .trim()
            .split_once(':')
            .ok_or_else(|| Error::Parse(format!("form recipe '{s}' lacks 'kind:'")))?;
        let kind = kind.trim();
        if kind == "file" {
            if body.is_empty() {
                return Err(Error::Parse("file: missing path".into()));
            }
            return Ok(WitnessSpec::File(PathBuf::from(body)));
        }
        let p = Params::parse(kind, body)?;
        let spec = match kind {
            "dot" => {
                p.only(&["m", "n"])?;
                WitnessSpec::Dot {
                    m: p.get("m")?,
                    n: p.get("n")?,
                }
            }
            "partial" => {
                p.only(&["m", "n", "r"])?;
                WitnessSpec::PartialDot {
                    m: p.get("m")?,
                    n: p.get("n")?,
                    r: p.get("r")?,
                }
            }
            "t0" => {
                p.only(&["n1", "n2"])?;
                WitnessSpec::T0 {
                    n1: p.get("n1")?,
                    n2: p.get("n2")?,
                }
            }
            "identity" => {
                p.only(&["n"])?;
                WitnessSpec::Identity { n: p.get("n")? }
            }
            "sign" => {
                p.only(&["m", "n", "seed"])?;
                WitnessSpec::Sign {
                    m: p.get("m")?,
                    n: p.get("n")?,
                    seed: p.get("seed")?,
                }
            }
            "gauss" => {
                p.only(&["dims", "seed", "field"])?;
                let raw = p
                    .raw("dims")
                    .ok_or_else(|| Error::Parse("gauss: missing 'dims'".into()))?;
                let dims = raw
                    .split('x')
                    .map(|d| {
                        d.trim()
                            .parse::<usize>()
                            .map_err(|_| Error::Parse(format!("gauss: bad dims '{raw}'")))
                    })
                    .collect::<Result<Vec<_>>>()?;
                let field = match p.raw("field") {
                    None | Some("real") => ScalarField::Real,
                    Some("complex") => ScalarField::Complex,
                    Some(other) => {
                        return Err(Error::Parse(format!("gauss: unknown field '{other}'")))
                    }
                };
                WitnessSpec::Gauss {
                    dims,
                    seed: p.get("seed")?,
                    field,
                }
            }
            other => return Err(Error::Parse(format!("unknown form kind '{other}'"))),
        };
        spec.validate()?;
        Ok(spec)
    }
}

impl WitnessSpec {
    fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::Parse(msg));
        match self {
            WitnessSpec::Dot { m, n } | WitnessSpec::Sign { m, n, .. } if *m < 2 || *n < 1 => {
                bad(format!("need m >= 2 and n >= 1 in '{self}'"))
            }
            WitnessSpec::PartialDot { m, n, r } if *m < 2 || *n < 1 || r + 2 > *m => {
                bad(format!("need m >= 2, n >= 1, r <= m-2 in '{self}'"))
            }
            WitnessSpec::T0 { n1, n2 } if *n1 < 1 || *n2 < 1 => {
                bad(format!("need n1, n2 >= 1 in '{self}'"))
            }
            WitnessSpec::Identity { n } if *n < 1 => bad(format!("need n >= 1 in '{self}'")),
            WitnessSpec::Gauss { dims, .. } if dims.is_empty() || dims.contains(&0) => {
                bad(format!("dims must be positive in '{self}'"))
            }
            _ => Ok(()),
        }
    }
}

/// Exponent vector with every entry equal to `p`.
pub fn uniform_domain(p: i64, m: usize) -> ExponentVector {
    ExponentVector::uniform(ExtScalar::integer(p), m)
}
