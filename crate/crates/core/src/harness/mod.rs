//! Experiment runner: inequality verification, growth-rate sharpness sweeps,
//! the bilinear dimension law, the base summing ingredient, and numerical
//! instances of the summing inclusion.
//!
//! Every run is deterministic given its config: trial `t` builds random forms
//! from the child seed `(form seed, t)` and seeds its ascent restarts from
//! `(config seed, t)`.

mod fit;
mod report;

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::exponents::{
    critical_exponents, inclusion_exponents, theorem_constant, ConstantChoice, ExponentVector,
    ExtScalar, VariantTag,
};
use crate::io::DynForm;
use crate::opnorm::{AscentSettings, NormMethod};
use crate::rng::{child_rng, child_seed};
use crate::scalar::Scalar;
use crate::tensor::{mixed_norm, weak_norm, MultilinearForm, VectorInLp};
use crate::witnesses::WitnessSpec;

pub use fit::{fit_growth, GrowthFit, GrowthReport, TRIM_RESIDUAL};
pub use report::{compensated_sum, round_sig12, ExperimentReport, Summary, TrialRecord};

/// Default relative slack when the denominator is an ascent lower bound.
pub const ASCENT_SLACK: f64 = 0.05;
/// Default relative slack when the denominator is exact or analytic.
pub const EXACT_SLACK: f64 = 1e-9;
/// Default tolerance on fitted slopes in sharpness sweeps.
pub const SLOPE_TOL: f64 = 0.01;
/// Restart multiplier used when re-checking an apparent violation.
pub const RECHECK_FACTOR: usize = 4;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ExperimentKind {
    Verify,
    Sharpness,
    BilinearLaw,
    BaseHl,
    InclusionInstance,
}

/// Exponents given either by family name or explicitly.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ExponentChoice {
    Variant(VariantTag),
    Explicit(ExponentVector),
}

impl ExponentChoice {
    pub fn resolve(&self, m: usize) -> Result<ExponentVector> {
        let s = match self {
            ExponentChoice::Variant(v) => critical_exponents(m, *v)?,
            ExponentChoice::Explicit(s) => s.clone(),
        };
        if s.len() != m {
            return Err(Error::Config(format!(
                "{} exponents for a {m}-linear form",
                s.len()
            )));
        }
        Ok(s)
    }
}

impl Default for ExponentChoice {
    fn default() -> Self {
        ExponentChoice::Variant(VariantTag::Derived)
    }
}

impl FromStr for ExponentChoice {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim();
        let t = t.strip_prefix("variant:").unwrap_or(t);
        match t.parse::<VariantTag>() {
            Ok(v) => Ok(ExponentChoice::Variant(v)),
            Err(_) => t.parse().map(ExponentChoice::Explicit),
        }
    }
}

impl fmt::Display for ExponentChoice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExponentChoice::Variant(v) => write!(f, "{v}"),
            ExponentChoice::Explicit(s) => write!(f, "{s}"),
        }
    }
}

impl Serialize for ExponentChoice {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl Serialize for WitnessSpec {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// Ascent settings without a seed; each trial supplies its own.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct OpnormSettings {
    pub restarts: usize,
    pub tol: f64,
    pub max_iters: usize,
}

impl Default for OpnormSettings {
    fn default() -> Self {
        let d = AscentSettings::default();
        OpnormSettings {
            restarts: d.restarts,
            tol: d.tol,
            max_iters: d.max_iters,
        }
    }
}

impl OpnormSettings {
    pub fn seeded(&self, seed: u64) -> AscentSettings {
        AscentSettings {
            restarts: self.restarts,
            tol: self.tol,
            max_iters: self.max_iters,
            seed,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct VerifyConfig {
    pub form: WitnessSpec,
    pub exponents: ExponentChoice,
    pub constant: ConstantChoice,
    pub trials: usize,
    pub seed: u64,
    pub opnorm: OpnormSettings,
    pub slack: Option<f64>,
}

impl VerifyConfig {
    pub fn new(form: WitnessSpec) -> Self {
        VerifyConfig {
            form,
            exponents: ExponentChoice::default(),
            constant: ConstantChoice::default(),
            trials: 1,
            seed: 42,
            opnorm: OpnormSettings::default(),
            slack: None,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct SharpnessConfig {
    pub family: WitnessSpec,
    pub sweep: Vec<usize>,
    pub exponents: ExponentChoice,
    pub seed: u64,
    pub opnorm: OpnormSettings,
    pub slope_tol: f64,
}

impl SharpnessConfig {
    pub fn new(family: WitnessSpec, sweep: Vec<usize>, exponents: ExponentChoice) -> Self {
        SharpnessConfig {
            family,
            sweep,
            exponents,
            seed: 42,
            opnorm: OpnormSettings::default(),
            slope_tol: SLOPE_TOL,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct BilinearLawConfig {
    pub form: WitnessSpec,
    pub a: ExtScalar,
    pub b: ExtScalar,
    pub trials: usize,
    pub seed: u64,
    pub slack: Option<f64>,
}

impl BilinearLawConfig {
    pub fn new(form: WitnessSpec, a: ExtScalar, b: ExtScalar) -> Self {
        BilinearLawConfig {
            form,
            a,
            b,
            trials: 1,
            seed: 42,
            slack: None,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct BaseHlConfig {
    pub m: usize,
    pub form: WitnessSpec,
    pub trials: usize,
    pub seed: u64,
    pub opnorm: OpnormSettings,
    pub slack: Option<f64>,
}

impl BaseHlConfig {
    pub fn new(m: usize, form: WitnessSpec) -> Self {
        BaseHlConfig {
            m,
            form,
            trials: 1,
            seed: 42,
            opnorm: OpnormSettings::default(),
            slack: None,
        }
    }
}

/// Which test sequences feed the summing quotients.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SequenceMode {
    Canonical,
    Random,
    #[default]
    Both,
}

impl FromStr for SequenceMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "canonical" => Ok(SequenceMode::Canonical),
            "random" => Ok(SequenceMode::Random),
            "both" => Ok(SequenceMode::Both),
            other => Err(Error::Parse(format!("unknown sequence mode '{other}'"))),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct InclusionConfig {
    pub r: ExtScalar,
    pub p: ExponentVector,
    pub q: ExponentVector,
    pub form: WitnessSpec,
    /// Overrides the domain exponents of the built forms.
    pub domain: Option<ExponentVector>,
    pub sequences: SequenceMode,
    /// Random sequence tuples per trial.
    pub samples: usize,
    pub trials: usize,
    pub seed: u64,
    pub opnorm: OpnormSettings,
    pub slack: Option<f64>,
}

impl InclusionConfig {
    pub fn new(r: ExtScalar, p: ExponentVector, q: ExponentVector, form: WitnessSpec) -> Self {
        InclusionConfig {
            r,
            p,
            q,
            form,
            domain: None,
            sequences: SequenceMode::default(),
            samples: 8,
            trials: 1,
            seed: 42,
            opnorm: OpnormSettings::default(),
            slack: None,
        }
    }
}

/// Any harness run.
#[derive(Clone, Debug)]
pub enum ExperimentConfig {
    Verify(VerifyConfig),
    Sharpness(SharpnessConfig),
    BilinearLaw(BilinearLawConfig),
    BaseHl(BaseHlConfig),
    InclusionInstance(InclusionConfig),
}

impl ExperimentConfig {
    pub fn run(&self) -> Result<ExperimentReport> {
        match self {
            ExperimentConfig::Verify(c) => run_verify(c),
            ExperimentConfig::Sharpness(c) => run_sharpness(c),
            ExperimentConfig::BilinearLaw(c) => run_bilinear_law(c),
            ExperimentConfig::BaseHl(c) => run_base_hl(c),
            ExperimentConfig::InclusionInstance(c) => run_inclusion_instance(c),
        }
    }
}

fn require_trials(trials: usize) -> Result<()> {
    if trials == 0 {
        return Err(Error::Config("trials must be >= 1".into()));
    }
    Ok(())
}

/// Recipe for trial `t`: random kinds are reseeded from `(recipe seed, t)`.
fn trial_spec(spec: &WitnessSpec, t: usize) -> WitnessSpec {
    match spec.seed() {
        Some(seed) => spec.with_seed(child_seed(seed, t as u64)),
        None => spec.clone(),
    }
}

fn ratio_of(lhs: f64, denom: f64) -> f64 {
    if lhs == 0.0 {
        0.0
    } else {
        lhs / denom
    }
}

fn default_slack(method: NormMethod) -> f64 {
    match method {
        NormMethod::Ascent => ASCENT_SLACK,
        NormMethod::ExactSingular | NormMethod::Analytic => EXACT_SLACK,
    }
}

fn require_domain(form: &DynForm, p: i64, what: &str) -> Result<()> {
    let want = ExponentVector::uniform(ExtScalar::integer(p), form.arity());
    if form.domain_p() != &want {
        return Err(Error::Config(format!(
            "{what} needs forms on ℓ_{p}, got domain ({})",
            form.domain_p()
        )));
    }
    Ok(())
}

/// `∥T∥`: analytic when attached, otherwise SVD or ascent. Apparent
/// violations computed from an ascent value are re-checked with more restarts.
struct Denominator {
    value: f64,
    method: NormMethod,
}

fn denominator(form: &DynForm, settings: &AscentSettings) -> Result<Denominator> {
    if let Some(a) = form.analytic_norm() {
        return Ok(Denominator {
            value: a.value,
            method: NormMethod::Analytic,
        });
    }
    let est = form.operator_norm(settings)?;
    Ok(Denominator {
        value: est.value,
        method: est.method,
    })
}

fn checked_record(
    form: &DynForm,
    settings: &AscentSettings,
    slack_override: Option<f64>,
    limit: f64,
    build: impl Fn(&Denominator) -> (f64, f64, Option<f64>),
    base: TrialRecord,
) -> Result<TrialRecord> {
    let mut den = denominator(form, settings)?;
    let mut slack = slack_override.unwrap_or_else(|| default_slack(den.method));
    let (mut lhs, mut ratio, mut factor) = build(&den);
    if TrialRecord::violates(ratio, limit, slack) && den.method == NormMethod::Ascent {
        let mut more = settings.clone();
        more.restarts *= RECHECK_FACTOR;
        den = denominator(form, &more)?;
        slack = slack_override.unwrap_or_else(|| default_slack(den.method));
        (lhs, ratio, factor) = build(&den);
    }
    Ok(TrialRecord {
        lhs,
        norm: den.value,
        norm_method: den.method,
        factor,
        ratio,
        limit,
        slack,
        violation: TrialRecord::violates(ratio, limit, slack),
        ..base
    })
}

fn blank_record(trial: usize, form: String, n: usize) -> TrialRecord {
    TrialRecord {
        trial,
        form,
        n,
        lhs: 0.0,
        norm: 0.0,
        norm_method: NormMethod::Analytic,
        factor: None,
        ratio: 0.0,
        limit: f64::NAN,
        slack: 0.0,
        violation: false,
    }
}

fn finish(
    kind: ExperimentKind,
    config: &impl Serialize,
    records: Vec<TrialRecord>,
) -> Result<ExperimentReport> {
    let summary = Summary::from_records(&records);
    Ok(ExperimentReport {
        experiment: kind,
        config: serde_json::to_value(config)?,
        records,
        summary,
        growth: None,
    })
}

/// Checks `mixed_norm(T, s) ≤ C · ∥T∥` trial by trial.
pub fn run_verify(config: &VerifyConfig) -> Result<ExperimentReport> {
    require_trials(config.trials)?;
    let m = config
        .form
        .arity()
        .map_or_else(|| config.form.build().map(|f| f.arity()), Ok)?;
    if m < 2 {
        return Err(Error::Config(format!("verify needs arity >= 2, got {m}")));
    }
    let s = config.exponents.resolve(m)?;
    let c = theorem_constant(m, config.constant)?.value;
    let records = (0..config.trials)
        .into_par_iter()
        .map(|t| {
            let spec = trial_spec(&config.form, t);
            let form = spec.build()?;
            if form.arity() != m {
                return Err(Error::Config(format!("form arity {} != {m}", form.arity())));
            }
            require_domain(&form, m as i64, "verify")?;
            let lhs = form.mixed_norm(&s)?;
            let settings = config.opnorm.seeded(child_seed(config.seed, t as u64));
            checked_record(
                &form,
                &settings,
                config.slack,
                c,
                |d| (lhs, ratio_of(lhs, d.value), None),
                blank_record(t, spec.to_string(), form.dims()[0]),
            )
        })
        .collect::<Result<Vec<_>>>()?;
    finish(ExperimentKind::Verify, config, records)
}

/// Sweeps a witness family over `n` and fits the growth of
/// `mixed_norm / ∥T∥`. A fitted slope above `slope_tol` means the candidate
/// exponents admit no dimension-free constant on this family and is counted
/// as one violation.
pub fn run_sharpness(config: &SharpnessConfig) -> Result<ExperimentReport> {
    if config.sweep.len() < 3 {
        return Err(Error::Config(format!(
            "sharpness needs >= 3 sweep points, got {}",
            config.sweep.len()
        )));
    }
    if config.sweep.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::Config(
            "sweep sizes must be strictly increasing".into(),
        ));
    }
    let records = config
        .sweep
        .par_iter()
        .enumerate()
        .map(|(i, &n)| {
            let spec = config.family.with_size(n)?;
            let form = spec.build()?;
            let s = config.exponents.resolve(form.arity())?;
            let lhs = form.mixed_norm(&s)?;
            let den = denominator(
                &form,
                &config.opnorm.seeded(child_seed(config.seed, i as u64)),
            )?;
            Ok(TrialRecord {
                lhs,
                norm: den.value,
                norm_method: den.method,
                ratio: ratio_of(lhs, den.value),
                ..blank_record(i, spec.to_string(), n)
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let points: Vec<(f64, f64)> = records.iter().map(|r| (r.n as f64, r.ratio)).collect();
    let growth = GrowthReport::from_points(&points)?;
    let mut report = finish(ExperimentKind::Sharpness, config, records)?;
    report.summary.violations = usize::from(growth.preferred().slope > config.slope_tol);
    report.growth = Some(growth);
    Ok(report)
}

/// Checks `mixed_{(b,a)}(U) ≤ n1^{1/b} n2^{1/a − 1/2} ∥U∥` for bilinear forms
/// on `ℓ_2 × ℓ_2`; the ratio column is the attained fraction of the bound.
pub fn run_bilinear_law(config: &BilinearLawConfig) -> Result<ExperimentReport> {
    require_trials(config.trials)?;
    config.a.require_positive("a")?;
    config.b.require_positive("b")?;
    let s = ExponentVector::new(vec![config.b.clone(), config.a.clone()]);
    let (inv_a, inv_b) = (1.0 / config.a.to_f64(), 1.0 / config.b.to_f64());
    let records = (0..config.trials)
        .into_par_iter()
        .map(|t| {
            let spec = trial_spec(&config.form, t);
            let form = spec.build()?;
            if form.arity() != 2 {
                return Err(Error::Config(format!(
                    "bilinear-law needs bilinear forms, got arity {}",
                    form.arity()
                )));
            }
            require_domain(&form, 2, "bilinear-law")?;
            let (n1, n2) = (form.dims()[0] as f64, form.dims()[1] as f64);
            let factor = n1.powf(inv_b) * n2.powf(inv_a - 0.5);
            let lhs = form.mixed_norm(&s)?;
            let settings = AscentSettings::default().with_seed(child_seed(config.seed, t as u64));
            checked_record(
                &form,
                &settings,
                config.slack,
                1.0,
                |d| (lhs, ratio_of(lhs, factor * d.value), Some(factor)),
                blank_record(t, spec.to_string(), form.dims()[1]),
            )
        })
        .collect::<Result<Vec<_>>>()?;
    finish(ExperimentKind::BilinearLaw, config, records)
}

/// Checks `(Σ_J |T(e_J)|²)^{1/2} ≤ 2^{(m−2)/2} ∥T∥` for (m−1)-linear forms on
/// `ℓ_{2(m−1)}`.
pub fn run_base_hl(config: &BaseHlConfig) -> Result<ExperimentReport> {
    require_trials(config.trials)?;
    let m = config.m;
    if m < 3 {
        return Err(Error::Config(format!("base-hl needs m >= 3, got {m}")));
    }
    let arity = m - 1;
    let domain = ExponentVector::uniform(ExtScalar::integer(2 * arity as i64), arity);
    let frobenius = ExponentVector::uniform(ExtScalar::integer(2), arity);
    let c = theorem_constant(m, ConstantChoice::Abstract)?.value;
    let records = (0..config.trials)
        .into_par_iter()
        .map(|t| {
            let spec = trial_spec(&config.form, t);
            let form = spec.build()?;
            if form.arity() != arity {
                return Err(Error::Config(format!(
                    "base-hl with m={m} needs {arity}-linear forms, got arity {}",
                    form.arity()
                )));
            }
            let form = form.with_domain(domain.clone())?;
            let lhs = form.mixed_norm(&frobenius)?;
            let settings = config.opnorm.seeded(child_seed(config.seed, t as u64));
            checked_record(
                &form,
                &settings,
                config.slack,
                c,
                |d| (lhs, ratio_of(lhs, d.value), None),
                blank_record(t, spec.to_string(), form.dims()[0]),
            )
        })
        .collect::<Result<Vec<_>>>()?;
    finish(ExperimentKind::BaseHl, config, records)
}

/// Compares the `(s; q)` summing quotient against the `(r; p)` quotient on
/// the same forms, with `s = inclusion_exponents(r, p, q)`. Each quotient is
/// maximized over the trial's sequence tuples; the ratio column is
/// `max Q_target / max Q_base`.
pub fn run_inclusion_instance(config: &InclusionConfig) -> Result<ExperimentReport> {
    require_trials(config.trials)?;
    let s = inclusion_exponents(&config.r, &config.p, &config.q)
        .map_err(|e| Error::Config(e.to_string()))?;
    let m = config.p.len();
    let r_vec = ExponentVector::uniform(config.r.clone(), m);
    let records = (0..config.trials)
        .into_par_iter()
        .map(|t| {
            let spec = trial_spec(&config.form, t);
            let mut form = spec.build()?;
            if form.arity() != m {
                return Err(Error::Config(format!("form arity {} != {m}", form.arity())));
            }
            if let Some(d) = &config.domain {
                form = form.with_domain(d.clone())?;
            }
            let trial_seed = child_seed(config.seed, t as u64);
            let ctx = QuotientContext {
                r_vec: &r_vec,
                s: &s,
                p: &config.p,
                q: &config.q,
                mode: config.sequences,
                samples: config.samples,
                seed: trial_seed,
                settings: config.opnorm.seeded(trial_seed),
            };
            let (base, target) = match &form {
                DynForm::Real(f) => best_quotients(f, &ctx)?,
                DynForm::Complex(f) => best_quotients(f, &ctx)?,
            };
            let ratio = ratio_of(target, base);
            let slack = config.slack.unwrap_or(ASCENT_SLACK);
            Ok(TrialRecord {
                lhs: target,
                norm: base,
                norm_method: NormMethod::Ascent,
                ratio,
                limit: 1.0,
                slack,
                violation: TrialRecord::violates(ratio, 1.0, slack),
                ..blank_record(t, spec.to_string(), form.dims()[0])
            })
        })
        .collect::<Result<Vec<_>>>()?;
    finish(ExperimentKind::InclusionInstance, config, records)
}

struct QuotientContext<'a> {
    r_vec: &'a ExponentVector,
    s: &'a ExponentVector,
    p: &'a ExponentVector,
    q: &'a ExponentVector,
    mode: SequenceMode,
    samples: usize,
    seed: u64,
    settings: AscentSettings,
}

/// `(max Q_base, max Q_target)` over the sequence tuples of one trial.
fn best_quotients<S: Scalar>(
    form: &MultilinearForm<S>,
    ctx: &QuotientContext<'_>,
) -> Result<(f64, f64)> {
    let domain = form.domain_p().clone();
    let mut tuples: Vec<Vec<Vec<VectorInLp<S>>>> = Vec::new();
    if matches!(ctx.mode, SequenceMode::Canonical | SequenceMode::Both) {
        tuples.push(
            form.dims()
                .iter()
                .zip(domain.iter())
                .map(|(&n, d)| (0..n).map(|j| VectorInLp::basis(n, j, d.clone())).collect())
                .collect(),
        );
    }
    if matches!(ctx.mode, SequenceMode::Random | SequenceMode::Both) {
        for i in 0..ctx.samples {
            let mut rng = child_rng(ctx.seed, i as u64);
            tuples.push(
                form.dims()
                    .iter()
                    .zip(domain.iter())
                    .map(|(&n, d)| {
                        (0..n)
                            .map(|_| {
                                VectorInLp::new(
                                    (0..n).map(|_| S::gaussian(&mut rng)).collect(),
                                    d.clone(),
                                )
                            })
                            .collect()
                    })
                    .collect(),
            );
        }
    }
    if tuples.is_empty() {
        return Err(Error::Config("no sequence tuples to evaluate".into()));
    }
    let mut best = (0.0f64, 0.0f64);
    for tuple in &tuples {
        let mut values = form.clone();
        for (k, seq) in tuple.iter().enumerate() {
            let plain: Vec<Vec<S>> = seq.iter().map(|v| v.entries.clone()).collect();
            values = values.apply_sequence(k, &plain)?;
        }
        let base_num = mixed_norm(&values, ctx.r_vec)?;
        let target_num = mixed_norm(&values, ctx.s)?;
        let mut base_den = 1.0;
        let mut target_den = 1.0;
        for (k, seq) in tuple.iter().enumerate() {
            base_den *= weak_norm(seq, &ctx.p[k], &ctx.settings)?;
            target_den *= weak_norm(seq, &ctx.q[k], &ctx.settings)?;
        }
        best.0 = best.0.max(ratio_of(base_num, base_den));
        best.1 = best.1.max(ratio_of(target_num, target_den));
    }
    Ok(best)
}
