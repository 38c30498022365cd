use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use cactus_core::barrier::{ceilings, run_campaign, SchemeSource, VerifyOptions};
use cactus_core::exactalg::rank_in;
use cactus_core::rankmethods::{estimate_k, LinearMatrixMap, MethodSpec, RankMethod};
use cactus_core::schemes::{compare_limit, FiniteScheme, PieceMix};
use cactus_core::varieties::VarietyParam;
use cactus_core::Field;
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use crate::files::{load_family, load_scheme, parse_scheme};
use crate::tensor::{Layout, Tensor};
use crate::{CliError, EXIT_PASS, EXIT_USAGE, EXIT_VIOLATION};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Debug, Parser)]
#[command(name = "cactus-barrier", version, about = "Exact checks of rank-method lower bounds against the cactus barrier")]
pub struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    /// Worker threads (defaults to all cores).
    #[arg(long, global = true)]
    pub jobs: Option<usize>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Lower bound ceil(rk M(F)/k) for a tensor or form.
    Bound(BoundArgs),
    /// Randomized check of rk M(F) <= k r over spans of degree-r schemes.
    Verify(VerifyArgs),
    /// Ceiling constants of a variety.
    Ceiling(CeilingArgs),
    /// Compare the span of a flat limit with the limit of spans.
    Limit(LimitArgs),
    /// Largest rank of a method on random points of a variety.
    EstimateK(EstimateArgs),
}

#[derive(Debug, Args)]
pub struct Sampling {
    /// Root seed; per-trial seeds are derived from it.
    #[arg(long, env = "CACTUS_BARRIER_SEED", default_value_t = 0)]
    pub seed: u64,
    /// Coefficient height for random samples.
    #[arg(long, default_value_t = 10)]
    pub bound: u64,
    /// Random points used to estimate k for custom methods.
    #[arg(long, default_value_t = 200)]
    pub k_trials: usize,
}

#[derive(Debug, Args)]
pub struct BoundArgs {
    #[arg(long)]
    pub tensor: PathBuf,
    /// flattening:split=1|23, catalecticant:i=1, koszul:p=1 or custom:file=PATH.
    #[arg(long)]
    pub method: String,
    /// Defaults to the Segre or Veronese variety matching the tensor file.
    #[arg(long)]
    pub variety: Option<String>,
    /// q, or p:P for ranks modulo the prime P.
    #[arg(long, default_value = "q")]
    pub field: Field,
    #[command(flatten)]
    pub sampling: Sampling,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[arg(long)]
    pub variety: String,
    /// random:deg=R[,mix=mixed|reduced|curv|nbhd][,bound=B], a JSON file, or inline JSON.
    #[arg(long)]
    pub scheme: String,
    #[arg(long)]
    pub method: String,
    #[arg(long, default_value_t = 100)]
    pub trials: usize,
    /// p:P screens ranks modulo P and confirms tight or failing cases over q.
    #[arg(long, default_value = "p")]
    pub field: Field,
    /// Also report the dimension of the minimal factor subspace.
    #[arg(long)]
    pub factor: bool,
    #[command(flatten)]
    pub sampling: Sampling,
}

#[derive(Debug, Args)]
pub struct CeilingArgs {
    #[arg(long)]
    pub variety: String,
}

#[derive(Debug, Args)]
pub struct LimitArgs {
    #[arg(long)]
    pub family: PathBuf,
}

#[derive(Debug, Args)]
pub struct EstimateArgs {
    #[arg(long)]
    pub variety: String,
    #[arg(long)]
    pub method: String,
    #[arg(long, default_value_t = 200)]
    pub trials: usize,
    #[command(flatten)]
    pub sampling: Sampling,
}

/// Parses `args`, runs the command and returns the exit status.
pub fn run<I, T>(args: I, out: &mut (dyn Write + Send), err: &mut (dyn Write + Send)) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_PASS };
            let _ = if e.use_stderr() {
                write!(err, "{}", e.render())
            } else {
                write!(out, "{}", e.render())
            };
            return code;
        }
    };
    let pool = match rayon::ThreadPoolBuilder::new().num_threads(cli.jobs.unwrap_or(0)).build() {
        Ok(p) => p,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            return EXIT_USAGE;
        }
    };
    match pool.install(|| dispatch(&cli, out, err)) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            EXIT_USAGE
        }
    }
}

fn dispatch(cli: &Cli, out: &mut (dyn Write + Send), err: &mut (dyn Write + Send)) -> Result<i32, CliError> {
    match &cli.command {
        Command::Bound(a) => cmd_bound(a, cli.format, out),
        Command::Verify(a) => cmd_verify(a, cli.format, out, err),
        Command::Ceiling(a) => cmd_ceiling(a, cli.format, out),
        Command::Limit(a) => cmd_limit(a, cli.format, out),
        Command::EstimateK(a) => cmd_estimate_k(a, cli.format, out),
    }
}

/// Loads a custom coefficient tensor of shape `[dim W, rows, cols]`.
pub fn load_custom_map(path: &Path) -> Result<LinearMatrixMap, CliError> {
    let t = Tensor::load(path)?;
    match &t.layout {
        Layout::General { shape } if shape.len() == 3 => {
            Ok(LinearMatrixMap::from_dense(shape[0], shape[1], shape[2], &t.data)?)
        }
        _ => Err(CliError::Usage(
            "custom methods need a dense or sparse tensor of shape [dim W, rows, cols]".into(),
        )),
    }
}

pub fn load_method(spec: &str, param: &VarietyParam, sampling: &Sampling) -> Result<RankMethod, CliError> {
    let spec: MethodSpec = spec.parse()?;
    match &spec {
        MethodSpec::Custom { path } => Ok(RankMethod::custom(
            load_custom_map(path)?,
            spec.to_string(),
            param,
            sampling.k_trials,
            sampling.bound,
            sampling.seed,
        )?),
        builtin => Ok(builtin.build(param)?),
    }
}

/// Parses the `--scheme` argument.
pub fn parse_scheme_source(s: &str) -> Result<SchemeSource, CliError> {
    let s = s.trim();
    if let Some(body) = s.strip_prefix("random:") {
        let mut degree = None;
        let mut mix = PieceMix::MIXED;
        let mut bound = 5;
        for kv in body.split(',') {
            let (k, v) = kv
                .split_once('=')
                .ok_or_else(|| CliError::Usage(format!("expected key=value in {kv:?}")))?;
            let bad = || CliError::Usage(format!("bad value {v:?} for {k}"));
            match k.trim() {
                "deg" => degree = Some(v.trim().parse().map_err(|_| bad())?),
                "mix" => mix = v.parse()?,
                "bound" => bound = v.trim().parse().map_err(|_| bad())?,
                other => return Err(CliError::Usage(format!("unknown scheme option {other:?}"))),
            }
        }
        let degree = degree.ok_or_else(|| CliError::Usage("random scheme needs deg=R".into()))?;
        return Ok(SchemeSource::Random { degree, mix, bound });
    }
    let scheme: FiniteScheme = if s.starts_with('{') {
        parse_scheme(s)?
    } else {
        load_scheme(Path::new(s))?
    };
    Ok(SchemeSource::Fixed(scheme))
}

fn emit_json(out: &mut (dyn Write + Send), v: &serde_json::Value) -> Result<(), CliError> {
    writeln!(out, "{v}")?;
    Ok(())
}

fn cmd_bound(a: &BoundArgs, format: Format, out: &mut (dyn Write + Send)) -> Result<i32, CliError> {
    let tensor = Tensor::load(&a.tensor)?;
    let param = match &a.variety {
        Some(v) => v.parse()?,
        None => tensor.variety()?,
    };
    if tensor.data.len() != param.dim_w() {
        return Err(CliError::Usage(format!(
            "tensor has {} entries but {param} needs {}",
            tensor.data.len(),
            param.dim_w()
        )));
    }
    let method = load_method(&a.method, &param, &a.sampling)?;
    if method.k == 0 {
        return Err(cactus_core::Error::VacuousMethod.into());
    }
    let rank = rank_in(&method.map.evaluate(&tensor.data)?, a.field)?;
    let bound = rank.div_ceil(method.k);
    let ceiling = ceilings(&param).cactus_ceiling.map(|g| g.value);
    match format {
        Format::Json => emit_json(
            out,
            &json!({
                "variety": param.to_string(),
                "method": method.name,
                "field": a.field.to_string(),
                "rank": rank,
                "k": method.k,
                "k_source": method.k_source,
                "bound": bound,
                "cactus_ceiling": ceiling,
            }),
        )?,
        Format::Text => {
            writeln!(out, "variety: {param}")?;
            writeln!(out, "method: {}", method.name)?;
            writeln!(out, "rank: {rank} over {}", a.field)?;
            writeln!(out, "k: {} ({})", method.k, method.k_source)?;
            writeln!(out, "border rank >= ceil({rank}/{}) = {bound}", method.k)?;
            if let Some(g) = ceiling {
                writeln!(out, "cactus ceiling g = {g}; this method cannot certify border rank > g")?;
            }
        }
    }
    Ok(EXIT_PASS)
}

fn cmd_verify(a: &VerifyArgs, format: Format, out: &mut (dyn Write + Send), err: &mut (dyn Write + Send)) -> Result<i32, CliError> {
    let param: VarietyParam = a.variety.parse()?;
    let source = parse_scheme_source(&a.scheme)?;
    if let SchemeSource::Fixed(s) = &source {
        s.validate(&param)?;
    }
    let method = load_method(&a.method, &param, &a.sampling)?;
    let opts = VerifyOptions {
        verification: a.field.into(),
        bound: a.sampling.bound,
        factorization: a.factor,
    };
    let results = run_campaign(&param, &source, &method, a.trials, &opts, a.sampling.seed);
    let (mut passed, mut failed, mut confirmed, mut screened, mut errors) = (0, 0, 0, 0, 0);
    for (i, res) in results.iter().enumerate() {
        let rep = match res {
            Ok(r) => r,
            Err(e) => {
                errors += 1;
                writeln!(err, "error: trial {i}: {e}")?;
                continue;
            }
        };
        if rep.pass {
            passed += 1;
        } else {
            failed += 1;
        }
        if rep.confirmed_failure() {
            confirmed += 1;
        }
        if !rep.confirmed() {
            screened += 1;
        }
        match format {
            Format::Json => {
                let mut v = serde_json::to_value(rep).expect("plain data");
                v["trial"] = json!(i);
                emit_json(out, &v)?;
            }
            Format::Text => {
                let factor = rep.factor_dim.map(|d| format!(" factor_dim={d}")).unwrap_or_default();
                writeln!(
                    out,
                    "trial {i}: rank {} <= {} (k={}, r={}) {} [{}] span_dim={}{factor} seed={}",
                    rep.rank,
                    rep.bound,
                    rep.k,
                    rep.degree,
                    if rep.pass { "pass" } else { "FAIL" },
                    rep.field,
                    rep.span_dim,
                    rep.seed
                )?;
            }
        }
    }
    match format {
        Format::Json => emit_json(
            out,
            &json!({"summary": {
                "variety": param.to_string(),
                "method": method.to_string(),
                "trials": a.trials,
                "passed": passed,
                "failed": failed,
                "confirmed_failures": confirmed,
                "screened_only": screened,
                "errors": errors,
            }}),
        )?,
        Format::Text => writeln!(
            out,
            "summary: {} on {param}: {passed}/{} passed, {failed} failed ({confirmed} confirmed over Q), \
             {screened} decided by screening, {errors} errors",
            method,
            a.trials
        )?,
    }
    Ok(if confirmed > 0 {
        EXIT_VIOLATION
    } else if errors > 0 {
        EXIT_USAGE
    } else {
        EXIT_PASS
    })
}

fn cmd_ceiling(a: &CeilingArgs, format: Format, out: &mut (dyn Write + Send)) -> Result<i32, CliError> {
    let report = ceilings(&a.variety.parse()?);
    match format {
        Format::Json => emit_json(out, &serde_json::to_value(&report).expect("plain data"))?,
        Format::Text => write!(out, "{report}")?,
    }
    Ok(EXIT_PASS)
}

fn cmd_limit(a: &LimitArgs, format: Format, out: &mut (dyn Write + Send)) -> Result<i32, CliError> {
    let f = load_family(&a.family)?;
    let report = compare_limit(&f.variety, &f.family, &f.limit)?;
    match format {
        Format::Json => {
            let mut v = serde_json::to_value(report).expect("plain data");
            v["strict"] = json!(report.strict());
            emit_json(out, &v)?;
        }
        Format::Text => writeln!(out, "{report}")?,
    }
    Ok(if report.inclusion_holds { EXIT_PASS } else { EXIT_VIOLATION })
}

fn cmd_estimate_k(a: &EstimateArgs, format: Format, out: &mut (dyn Write + Send)) -> Result<i32, CliError> {
    let param: VarietyParam = a.variety.parse()?;
    let method = load_method(&a.method, &param, &a.sampling)?;
    let observed = estimate_k(&method.map, &param, a.trials, a.sampling.bound, a.sampling.seed)?;
    let violated = observed > method.k;
    match format {
        Format::Json => emit_json(
            out,
            &json!({
                "variety": param.to_string(),
                "method": method.name,
                "k": method.k,
                "k_source": method.k_source,
                "observed_max": observed,
                "trials": a.trials,
                "consistent": !violated,
            }),
        )?,
        Format::Text => {
            writeln!(out, "method: {method}")?;
            writeln!(out, "max rank over {} random points of {param}: {observed}", a.trials)?;
            if violated {
                writeln!(out, "declared k = {} is exceeded", method.k)?;
            }
        }
    }
    Ok(if violated { EXIT_VIOLATION } else { EXIT_PASS })
}
