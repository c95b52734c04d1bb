use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use critical_hl::exponents::{
    applicability, check_admissible_bilinear, critical_bilinear_admissible, critical_exponents,
    inclusion_exponents, theorem_constant, ConstantChoice, ExponentVector, ExtScalar, VariantTag,
};
use critical_hl::harness::{
    round_sig12, run_base_hl, run_bilinear_law, run_inclusion_instance, run_sharpness, run_verify,
    BaseHlConfig, BilinearLawConfig, ExperimentReport, ExponentChoice, InclusionConfig,
    OpnormSettings, SequenceMode, SharpnessConfig, VerifyConfig,
};
use critical_hl::opnorm::AscentSettings;
use critical_hl::witnesses::WitnessSpec;
use critical_hl::DynForm;
use serde_json::json;

#[derive(Parser)]
#[command(
    name = "critical-hl",
    version,
    about = "Mixed-norm inequalities for multilinear forms on ℓ_p spaces"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print an exponent family and the constant for arity m.
    Exponents {
        #[arg(long)]
        m: usize,
        #[arg(long, default_value = "derived")]
        variant: VariantTag,
        #[arg(long, default_value = "abstract")]
        constant: ConstantChoice,
        #[arg(long)]
        json: bool,
    },
    /// Target exponents of the inclusion for a triple (r, p, q).
    Inclusion {
        #[arg(long)]
        r: ExtScalar,
        #[arg(long)]
        p: ExponentVector,
        #[arg(long)]
        q: ExponentVector,
    },
    /// Admissibility of (a, b) for bilinear forms on ℓ_p × ℓ_q.
    Admissible {
        #[arg(long)]
        p: ExtScalar,
        #[arg(long)]
        q: ExtScalar,
        #[arg(long)]
        a: ExtScalar,
        #[arg(long)]
        b: ExtScalar,
    },
    /// Norms of a single form.
    #[command(subcommand)]
    Norm(NormCommand),
    /// Write a form recipe out as a tensor JSON file.
    Form {
        #[arg(long)]
        form: WitnessSpec,
        #[arg(long)]
        out: PathBuf,
    },
    /// Check the mixed-norm inequality on random or witness forms.
    Verify(VerifyArgs),
    /// Fit the growth of the mixed-norm ratio across a size sweep.
    Sharpness(SharpnessArgs),
    /// Check the bilinear dimension law on ℓ_2 × ℓ_2.
    BilinearLaw(BilinearArgs),
    /// Check the Frobenius bound for (m−1)-linear forms on ℓ_{2(m−1)}.
    BaseHl(BaseHlArgs),
    /// Compare summing quotients before and after the inclusion.
    InclusionInstance(InclusionArgs),
}

#[derive(Subcommand)]
enum NormCommand {
    /// Nested mixed norm of the coefficients.
    Mixed {
        #[command(flatten)]
        source: FormSource,
        #[arg(long)]
        exponents: ExponentVector,
    },
    /// Operator norm on the form's domain (SVD on ℓ_2 × ℓ_2, ascent otherwise).
    Op {
        #[command(flatten)]
        source: FormSource,
        #[command(flatten)]
        ascent: AscentArgs,
        #[arg(long, default_value_t = 42)]
        seed: u64,
    },
}

#[derive(Args)]
#[group(required = true, multiple = false)]
struct FormSource {
    /// Tensor JSON file.
    #[arg(long)]
    tensor: Option<PathBuf>,
    /// Form recipe such as `dot:m=3,n=8`.
    #[arg(long)]
    form: Option<WitnessSpec>,
}

impl FormSource {
    fn load(&self) -> Result<DynForm> {
        match (&self.tensor, &self.form) {
            (Some(path), _) => {
                DynForm::read_json(path).with_context(|| format!("reading {}", path.display()))
            }
            (None, Some(spec)) => Ok(spec.build()?),
            (None, None) => bail!("give --tensor or --form"),
        }
    }
}

#[derive(Args, Clone)]
struct AscentArgs {
    #[arg(long, default_value_t = 16)]
    restarts: usize,
    #[arg(long, default_value_t = 1e-10)]
    tol: f64,
    #[arg(long, default_value_t = 500)]
    max_iters: usize,
}

impl AscentArgs {
    fn settings(&self) -> OpnormSettings {
        OpnormSettings {
            restarts: self.restarts,
            tol: self.tol,
            max_iters: self.max_iters,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Args)]
struct Output {
    /// Report file; stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "csv")]
    format: Format,
}

#[derive(Args)]
struct Trials {
    #[arg(long, default_value_t = 1)]
    trials: usize,
    #[arg(long, default_value_t = 42)]
    seed: u64,
    /// Relative slack; defaults to 0.05 for ascent norms and 1e-9 otherwise.
    #[arg(long)]
    slack: Option<f64>,
}

#[derive(Args)]
struct Exponents {
    #[arg(long, conflicts_with = "exponents")]
    variant: Option<VariantTag>,
    /// Explicit exponent vector such as `inf,3,12/5`.
    #[arg(long)]
    exponents: Option<ExponentVector>,
}

impl Exponents {
    fn choice(&self) -> ExponentChoice {
        match (&self.exponents, self.variant) {
            (Some(s), _) => ExponentChoice::Explicit(s.clone()),
            (None, Some(v)) => ExponentChoice::Variant(v),
            (None, None) => ExponentChoice::default(),
        }
    }
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long)]
    form: Option<WitnessSpec>,
    /// Arity of the default Gaussian form.
    #[arg(long, default_value_t = 3)]
    m: usize,
    /// Size of the default Gaussian form.
    #[arg(long, default_value_t = 8)]
    n: usize,
    #[command(flatten)]
    exponents: Exponents,
    #[arg(long, default_value = "abstract")]
    constant: ConstantChoice,
    #[command(flatten)]
    trials: Trials,
    #[command(flatten)]
    ascent: AscentArgs,
    #[command(flatten)]
    output: Output,
}

#[derive(Args)]
struct SharpnessArgs {
    /// Witness family; its size parameter is replaced by each sweep value.
    #[arg(long)]
    form: Option<WitnessSpec>,
    #[arg(long, default_value_t = 3)]
    m: usize,
    #[arg(long, value_delimiter = ',', default_value = "4,8,16,32,64")]
    sweep: Vec<usize>,
    #[command(flatten)]
    exponents: Exponents,
    #[arg(long, default_value_t = 0.01)]
    slope_tol: f64,
    #[arg(long, default_value_t = 42)]
    seed: u64,
    #[command(flatten)]
    ascent: AscentArgs,
    #[command(flatten)]
    output: Output,
}

#[derive(Args)]
struct BilinearArgs {
    #[arg(long)]
    form: Option<WitnessSpec>,
    #[arg(long, default_value_t = 32)]
    n: usize,
    #[arg(long)]
    a: ExtScalar,
    #[arg(long)]
    b: ExtScalar,
    #[command(flatten)]
    trials: Trials,
    #[command(flatten)]
    output: Output,
}

#[derive(Args)]
struct BaseHlArgs {
    #[arg(long, default_value_t = 3)]
    m: usize,
    #[arg(long)]
    form: Option<WitnessSpec>,
    #[arg(long, default_value_t = 8)]
    n: usize,
    #[command(flatten)]
    trials: Trials,
    #[command(flatten)]
    ascent: AscentArgs,
    #[command(flatten)]
    output: Output,
}

#[derive(Args)]
struct InclusionArgs {
    #[arg(long)]
    r: ExtScalar,
    #[arg(long)]
    p: ExponentVector,
    #[arg(long)]
    q: ExponentVector,
    #[arg(long)]
    form: Option<WitnessSpec>,
    #[arg(long, default_value_t = 6)]
    n: usize,
    /// Domain exponents of the forms, overriding their default.
    #[arg(long)]
    domain: Option<ExponentVector>,
    #[arg(long, default_value = "both")]
    sequences: SequenceMode,
    #[arg(long, default_value_t = 8)]
    samples: usize,
    #[command(flatten)]
    trials: Trials,
    #[command(flatten)]
    ascent: AscentArgs,
    #[command(flatten)]
    output: Output,
}

fn gauss(m: usize, n: usize, seed: u64) -> Result<WitnessSpec> {
    let dims = vec![n.to_string(); m].join("x");
    Ok(format!("gauss:dims={dims},seed={seed}").parse()?)
}

fn emit(report: &ExperimentReport, output: &Output) -> Result<ExitCode> {
    let text = match output.format {
        Format::Csv => report.to_csv()?,
        Format::Json => report.to_json()? + "\n",
    };
    match &output.out {
        Some(path) => {
            fs::write(path, text).with_context(|| format!("writing {}", path.display()))?
        }
        None => print!("{text}"),
    }
    let s = &report.summary;
    eprintln!(
        "trials={} max_ratio={} mean_ratio={} violations={}",
        s.trials,
        sig(s.max_ratio),
        sig(s.mean_ratio),
        s.violations
    );
    if let Some(g) = &report.growth {
        let f = g.preferred();
        eprintln!(
            "slope={} intercept={} residual={}",
            sig(f.slope),
            sig(f.intercept),
            sig(f.residual)
        );
    }
    Ok(if report.passed() {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    })
}

fn approx(s: &ExponentVector) -> Vec<serde_json::Value> {
    s.to_f64()
        .into_iter()
        .map(|x| {
            if x.is_infinite() {
                json!("inf")
            } else {
                json!(x)
            }
        })
        .collect()
}

/// Twelve significant digits, scientific outside `[1e-4, 1e12)`.
fn sig(x: f64) -> String {
    let r = round_sig12(x);
    if r == 0.0 || !r.is_finite() || (1e-4..1e12).contains(&r.abs()) {
        format!("{r}")
    } else {
        format!("{r:e}")
    }
}

fn print_json(value: &impl serde::Serialize) -> Result<()> {
    println!("{}", serde_json::to_string_pretty(value)?);
    Ok(())
}

fn run(cli: Cli) -> Result<ExitCode> {
    match cli.command {
        Command::Exponents {
            m,
            variant,
            constant,
            json,
        } => {
            let s = critical_exponents(m, variant)?;
            let c = theorem_constant(m, constant)?;
            if json {
                print_json(&json!({
                    "m": m,
                    "variant": variant,
                    "exponents": s,
                    "approx": approx(&s),
                    "constant": c,
                }))?;
            } else {
                println!("s = ({s})");
                println!("C = 2^({}) = {}", c.exponent, c.value);
            }
        }
        Command::Inclusion { r, p, q } => {
            let case = applicability(&r, &p, &q)?;
            let s = inclusion_exponents(&r, &p, &q)?;
            print_json(&json!({ "case": case, "s": s, "approx": approx(&s) }))?;
        }
        Command::Admissible { p, q, a, b } => {
            let two = ExtScalar::integer(2);
            if p == two && q == two {
                let ok = critical_bilinear_admissible(&a, &b);
                print_json(&json!({ "admissible": ok, "regime": "critical" }))?;
            } else {
                print_json(&check_admissible_bilinear(&p, &q, &a, &b)?)?;
            }
        }
        Command::Norm(NormCommand::Mixed { source, exponents }) => {
            let form = source.load()?;
            print_json(&json!({ "exponents": exponents, "value": form.mixed_norm(&exponents)? }))?;
        }
        Command::Norm(NormCommand::Op {
            source,
            ascent,
            seed,
        }) => {
            let form = source.load()?;
            let settings: AscentSettings = ascent.settings().seeded(seed);
            let mut summary = serde_json::to_value(form.operator_norm(&settings)?)?;
            if let Some(a) = form.analytic_norm() {
                summary["analytic"] = json!(a.value);
            }
            print_json(&summary)?;
        }
        Command::Form { form, out } => {
            form.build()?
                .write_json(&out)
                .with_context(|| format!("writing {}", out.display()))?;
        }
        Command::Verify(a) => {
            let form = match a.form {
                Some(f) => f,
                None => gauss(a.m, a.n, a.trials.seed)?,
            };
            let config = VerifyConfig {
                form,
                exponents: a.exponents.choice(),
                constant: a.constant,
                trials: a.trials.trials,
                seed: a.trials.seed,
                opnorm: a.ascent.settings(),
                slack: a.trials.slack,
            };
            return emit(&run_verify(&config)?, &a.output);
        }
        Command::Sharpness(a) => {
            let family = match a.form {
                Some(f) => f,
                None => format!("partial:m={},n=4,r=1", a.m).parse()?,
            };
            let mut config = SharpnessConfig::new(family, a.sweep, a.exponents.choice());
            config.seed = a.seed;
            config.slope_tol = a.slope_tol;
            config.opnorm = a.ascent.settings();
            return emit(&run_sharpness(&config)?, &a.output);
        }
        Command::BilinearLaw(a) => {
            let form = match a.form {
                Some(f) => f,
                None => format!("sign:m=2,n={},seed={}", a.n, a.trials.seed).parse()?,
            };
            let mut config = BilinearLawConfig::new(form, a.a, a.b);
            config.trials = a.trials.trials;
            config.seed = a.trials.seed;
            config.slack = a.trials.slack;
            return emit(&run_bilinear_law(&config)?, &a.output);
        }
        Command::BaseHl(a) => {
            let form = match a.form {
                Some(f) => f,
                None => gauss(a.m.saturating_sub(1).max(1), a.n, a.trials.seed)?,
            };
            let mut config = BaseHlConfig::new(a.m, form);
            config.trials = a.trials.trials;
            config.seed = a.trials.seed;
            config.opnorm = a.ascent.settings();
            config.slack = a.trials.slack;
            return emit(&run_base_hl(&config)?, &a.output);
        }
        Command::InclusionInstance(a) => {
            let form = match a.form {
                Some(f) => f,
                None => gauss(a.p.len(), a.n, a.trials.seed)?,
            };
            let mut config = InclusionConfig::new(a.r, a.p, a.q, form);
            config.domain = a.domain;
            config.sequences = a.sequences;
            config.samples = a.samples;
            config.trials = a.trials.trials;
            config.seed = a.trials.seed;
            config.opnorm = a.ascent.settings();
            config.slack = a.trials.slack;
            return emit(&run_inclusion_instance(&config)?, &a.output);
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
