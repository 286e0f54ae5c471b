//! Command-line front end: expansion tables, variables, tableaux, weight
//! projections and the identity checks, as text or JSON.

pub mod config;

use std::fmt::Write as _;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};
use thiserror::Error;

use tsyslab_core::beta::{beta_project, check_beta};
use tsyslab_core::casorati::{run_casorati, CasoratiConfig, Precision};
use tsyslab_core::diffop::d34::check_d34_lemmas;
use tsyslab_core::diffop::{
    build_l, check_duality, check_rewrite_a2, check_tq, check_tq_dualized, check_tt2, extract_t,
};
use tsyslab_core::report::{CheckReport, ReportParams, Status};
use tsyslab_core::screening::{check_hk_annihilation, check_s_functional, check_screening_annihilation};
use tsyslab_core::tsystem::{check_tsystem_symbolic, nnsy_determinant, tableaux, tableaux_sum, TableauRule, YoungData};
use tsyslab_core::variables::{labels, x_count, x_label, z_var};
use tsyslab_core::{AlgebraKind, AlgebraSpec, DiffOperator, Error, Shift, TTable};

use config::ConfigFile;

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

const DEFAULT_CUTOFF: usize = 8;
const DEFAULT_TRIALS: usize = 20;
const DEFAULT_SEED: u64 = 0;
const DEFAULT_TT_M: usize = 6;
const DEFAULT_SYMBOLIC_M: usize = 2;
const DEFAULT_NUMERIC_M: usize = 3;
const SERIES_SCREENING_DEGREE: usize = 6;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),

    #[error("{origin}:{line}: {message}")]
    Config {
        origin: String,
        line: usize,
        message: String,
    },

    #[error("cannot read config file {path}: {source}")]
    ConfigRead { path: String, source: std::io::Error },

    #[error(transparent)]
    Core(#[from] Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) | CliError::Config { .. } | CliError::ConfigRead { .. } => EXIT_USAGE,
            CliError::Core(e) => match e {
                Error::UnknownKind(_)
                | Error::RankOutOfRange { .. }
                | Error::IndexOutOfRange { .. }
                | Error::BadLabel { .. }
                | Error::BadIndices(_)
                | Error::Unsupported { .. }
                | Error::CutoffTooSmall { .. }
                | Error::Parse(_) => EXIT_USAGE,
                _ => EXIT_FAIL,
            },
            CliError::Io(_) => EXIT_FAIL,
        }
    }
}

#[derive(Parser, Debug)]
#[command(
    name = "tsyslab",
    version,
    about = "Verify T-system identities for twisted quantum affine algebras"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    #[command(flatten)]
    common: CommonArgs,
}

#[derive(Args, Debug, Default)]
struct CommonArgs {
    /// a2even, a2odd, d2 or d3_4
    #[arg(long, global = true)]
    algebra: Option<String>,
    /// Rank parameter n (defaults to 2 for d3_4)
    #[arg(long, global = true)]
    n: Option<u32>,
    /// Truncation order for the series operators [default: 8]
    #[arg(long, global = true)]
    cutoff: Option<usize>,
    #[arg(long = "m-max", global = true)]
    m_max: Option<usize>,
    #[arg(long = "a-max", global = true)]
    a_max: Option<u32>,
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Numeric trials [default: 20]
    #[arg(long, global = true)]
    trials: Option<usize>,
    /// double or high
    #[arg(long, global = true)]
    precision: Option<String>,
    /// Collapse the pi*i/hbar lattice direction
    #[arg(long = "theta-zero", global = true)]
    theta_zero: bool,
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Print the T^a table of the L operator
    Expand,
    /// Print the z (and x) variables
    Vars,
    /// Enumerate tableaux for an index set and compare with the determinant
    Tableaux {
        /// Strictly increasing, starting at 0, e.g. 0,1,3,4
        #[arg(long, value_delimiter = ',', required = true, allow_negative_numbers = true)]
        indices: Vec<i64>,
    },
    /// Project T^a to classical weights
    Beta {
        #[arg(long)]
        a: Option<u32>,
    },
    /// Run identity checks
    Check {
        #[arg(value_enum)]
        group: CheckGroup,
    },
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum)]
pub enum Format {
    #[default]
    Text,
    Json,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum CheckGroup {
    Screening,
    Tq,
    Tt,
    Duality,
    D34,
    Tsystem,
    Casorati,
    All,
}

impl CheckGroup {
    fn jobs(self) -> &'static [Job] {
        use Job::*;
        match self {
            CheckGroup::Screening => &[Screening, ScEq, Hk],
            CheckGroup::Tq => &[Tq, TqDual],
            CheckGroup::Tt => &[Tt],
            CheckGroup::Duality => &[Duality, Rewrite],
            CheckGroup::D34 => &[D34, Hk],
            CheckGroup::Tsystem => &[Tsystem],
            CheckGroup::Casorati => &[Casorati],
            CheckGroup::All => &[
                Screening, ScEq, Hk, Tq, TqDual, Tt, Duality, Rewrite, D34, Tsystem, Casorati, Beta,
            ],
        }
    }

    fn name(self) -> String {
        self.to_possible_value()
            .expect("no skipped variants")
            .get_name()
            .to_string()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Job {
    Screening,
    ScEq,
    Hk,
    Tq,
    TqDual,
    Tt,
    Duality,
    Rewrite,
    D34,
    Tsystem,
    Casorati,
    Beta,
}

impl Job {
    fn name(self) -> &'static str {
        match self {
            Job::Screening => "screening",
            Job::ScEq => "sc-eq",
            Job::Hk => "hk",
            Job::Tq => "tq",
            Job::TqDual => "tq-dual",
            Job::Tt => "tt",
            Job::Duality => "duality",
            Job::Rewrite => "rewrite",
            Job::D34 => "d34",
            Job::Tsystem => "tsystem",
            Job::Casorati => "casorati",
            Job::Beta => "beta",
        }
    }

    fn applies(self, kind: AlgebraKind) -> bool {
        match self {
            Job::Screening | Job::ScEq | Job::Tt | Job::Beta => true,
            Job::Hk | Job::D34 => kind == AlgebraKind::D3_4,
            Job::Tq | Job::TqDual | Job::Duality | Job::Rewrite | Job::Tsystem | Job::Casorati => kind.is_a2(),
        }
    }

    fn run(self, ctx: &Context) -> tsyslab_core::Result<CheckReport> {
        let spec = &ctx.spec;
        let s = &ctx.settings;
        match self {
            Job::Screening => {
                let degree = if spec.kind().is_a2() {
                    spec.rank() as usize + 1
                } else {
                    SERIES_SCREENING_DEGREE
                };
                check_screening_annihilation(&ctx.table, degree)
            }
            Job::ScEq => check_s_functional(spec),
            Job::Hk => check_hk_annihilation(spec),
            Job::Tq => check_tq(spec, &ctx.l),
            Job::TqDual => check_tq_dualized(&ctx.table),
            Job::Tt => {
                let mut m = s.m_max.unwrap_or(DEFAULT_TT_M);
                if let Some(k) = ctx.table.bound().cutoff() {
                    m = m.min(k);
                }
                check_tt2(&ctx.table.clone().with_lower(m)?)
            }
            Job::Duality => check_duality(&ctx.table),
            Job::Rewrite => check_rewrite_a2(spec),
            Job::D34 => check_d34_lemmas(spec, s.cutoff),
            Job::Tsystem => check_tsystem_symbolic(
                &ctx.table,
                s.a_max.unwrap_or(spec.n()),
                s.m_max.unwrap_or(DEFAULT_SYMBOLIC_M),
            ),
            Job::Casorati => {
                let cfg = CasoratiConfig {
                    m_max: s.m_max.unwrap_or(DEFAULT_NUMERIC_M),
                    a_max: s.a_max.unwrap_or(u32::MAX),
                    ..CasoratiConfig::default()
                };
                run_casorati(spec, &cfg, s.seed, s.trials, s.precision)
            }
            Job::Beta => check_beta(&ctx.table),
        }
    }
}

/// Flags merged over the config file.
#[derive(Clone, Debug)]
struct Settings {
    algebra: Option<String>,
    n: Option<u32>,
    cutoff: usize,
    m_max: Option<usize>,
    a_max: Option<u32>,
    seed: u64,
    trials: usize,
    precision: Precision,
    theta_zero: bool,
    format: Format,
}

impl Settings {
    fn merge(flags: CommonArgs, file: &ConfigFile) -> Result<Self, CliError> {
        let precision = match flags.precision.as_deref().or(file.get("precision")) {
            None => Precision::Double,
            Some(p) => p
                .parse()
                .map_err(|_| CliError::Usage(format!("unknown precision `{p}` (expected double or high)")))?,
        };
        let format = match (flags.format, file.get("format")) {
            (Some(f), _) => f,
            (None, Some(f)) => {
                Format::from_str(f, true).map_err(|_| CliError::Usage(format!("unknown format `{f}`")))?
            }
            (None, None) => Format::Text,
        };
        Ok(Settings {
            algebra: flags.algebra.or_else(|| file.get("algebra").map(str::to_string)),
            n: flags.n.or(file.typed("n")?),
            cutoff: flags.cutoff.or(file.typed("cutoff")?).unwrap_or(DEFAULT_CUTOFF),
            m_max: flags.m_max.or(file.typed("m-max")?),
            a_max: flags.a_max.or(file.typed("a-max")?),
            seed: flags.seed.or(file.typed("seed")?).unwrap_or(DEFAULT_SEED),
            trials: flags.trials.or(file.typed("trials")?).unwrap_or(DEFAULT_TRIALS),
            precision,
            theta_zero: flags.theta_zero || file.typed("theta-zero")?.unwrap_or(false),
            format,
        })
    }

    fn spec(&self) -> Result<AlgebraSpec, CliError> {
        let name = self
            .algebra
            .as_deref()
            .ok_or_else(|| CliError::Usage("--algebra is required".into()))?;
        let kind: AlgebraKind = name.parse()?;
        let n = match (self.n, kind) {
            (Some(n), _) => n,
            (None, AlgebraKind::D3_4) => 2,
            (None, _) => return Err(CliError::Usage(format!("--n is required for {name}"))),
        };
        Ok(AlgebraSpec::new(kind, n)?.with_theta_zero(self.theta_zero))
    }
}

struct Context {
    spec: AlgebraSpec,
    settings: Settings,
    l: DiffOperator,
    table: TTable,
}

impl Context {
    fn new(settings: Settings) -> Result<Self, CliError> {
        let spec = settings.spec()?;
        let l = build_l(&spec, settings.cutoff)?;
        let table = extract_t(&spec, &l);
        Ok(Context {
            spec,
            settings,
            l,
            table,
        })
    }

    fn header(&self) -> Value {
        let mut v = json!({
            "algebra": self.spec.kind().name(),
            "n": self.spec.n(),
            "theta_zero": self.spec.theta_zero(),
        });
        if let Some(k) = self.table.bound().cutoff() {
            v["cutoff"] = json!(k);
        }
        v
    }
}

/// Rendered result of one command.
struct Output {
    text: String,
    json: Value,
    code: i32,
}

#[derive(Serialize)]
struct CheckSummary<'a> {
    status: Status,
    reports: &'a [CheckReport],
}

fn expand(ctx: &Context) -> Result<Output, CliError> {
    let mut text = String::new();
    let mut entries = Vec::new();
    for a in 0..ctx.table.upper_len() {
        let p = ctx.table.upper(a as i64)?;
        writeln!(text, "T^{a}(u) = {p}").expect("string write");
        entries.push(json!({ "a": a, "terms": p.len(), "poly": p.to_string() }));
    }
    let mut json = ctx.header();
    json["entries"] = Value::Array(entries);
    Ok(Output {
        text,
        json,
        code: EXIT_OK,
    })
}

fn vars(ctx: &Context) -> Result<Output, CliError> {
    let spec = &ctx.spec;
    let zero = Shift::zero();
    let mut text = String::new();
    let mut zs = Vec::new();
    for label in labels(spec) {
        let v = z_var(spec, label, &zero)?;
        writeln!(text, "{label}(u) = {v}").expect("string write");
        zs.push(json!({ "label": label.to_string(), "value": v.to_string() }));
    }
    let mut xs = Vec::new();
    if let Ok(count) = x_count(spec) {
        for i in 1..=count {
            let label = x_label(spec, i)?;
            writeln!(text, "x{i} = {label}").expect("string write");
            xs.push(json!({ "index": i, "label": label.to_string() }));
        }
    }
    let mut json = ctx.header();
    json["z"] = Value::Array(zs);
    json["x"] = Value::Array(xs);
    Ok(Output {
        text,
        json,
        code: EXIT_OK,
    })
}

fn tableaux_cmd(ctx: &Context, indices: Vec<i64>) -> Result<Output, CliError> {
    let spec = &ctx.spec;
    let zero = Shift::zero();
    let data = YoungData::new(indices)?;
    let sum = tableaux_sum(spec, &data, &zero)?;
    let count = tableaux(&data, x_count(spec)?, TableauRule::SEMISTANDARD).len();
    let det = nnsy_determinant(&ctx.table, &data, &zero)?;
    let agrees = sum == det;
    let mut text = format!("indices {:?}\nshape mu = {:?}\n{data}", data.indices(), data.mu());
    writeln!(text, "tableaux: {count}").expect("string write");
    writeln!(text, "sum = {sum}").expect("string write");
    writeln!(text, "determinant {}", if agrees { "agrees" } else { "DIFFERS" }).expect("string write");
    let mut json = ctx.header();
    json["indices"] = json!(data.indices());
    json["mu"] = json!(data.mu());
    json["count"] = json!(count);
    json["poly"] = json!(sum.to_string());
    json["determinant_agrees"] = json!(agrees);
    Ok(Output {
        text,
        json,
        code: if agrees { EXIT_OK } else { EXIT_FAIL },
    })
}

fn beta_cmd(ctx: &Context, a: Option<u32>) -> Result<Output, CliError> {
    let range: Vec<usize> = match a {
        Some(a) => {
            let max = ctx.table.upper_len().saturating_sub(1) as u32;
            if a > max {
                return Err(Error::IndexOutOfRange { index: a, max }.into());
            }
            vec![a as usize]
        }
        None => (0..ctx.table.upper_len()).collect(),
    };
    let mut text = String::new();
    let mut entries = Vec::new();
    for a in range {
        let image = beta_project(&ctx.spec, &ctx.table.upper(a as i64)?)?;
        writeln!(text, "beta(T^{a}) = {image}").expect("string write");
        entries.push(json!({ "a": a, "weights": image.to_string(), "terms": image.len() }));
    }
    let mut json = ctx.header();
    json["entries"] = Value::Array(entries);
    Ok(Output {
        text,
        json,
        code: EXIT_OK,
    })
}

fn check(ctx: &Context, group: CheckGroup) -> Result<Output, CliError> {
    let kind = ctx.spec.kind();
    let jobs: Vec<Job> = group.jobs().iter().copied().filter(|j| j.applies(kind)).collect();
    if jobs.is_empty() {
        return Err(CliError::Usage(format!(
            "`check {}` does not apply to {}",
            group.name(),
            kind.name()
        )));
    }
    let mut reports: Vec<CheckReport> = jobs
        .par_iter()
        .map(|job| {
            job.run(ctx).unwrap_or_else(|e| {
                let mut r = CheckReport::new(job.name(), ReportParams::for_spec(&ctx.spec));
                r.note("error", Status::Fail, e.to_string());
                r.finish()
            })
        })
        .collect();
    reports.sort_by(|a, b| a.check.cmp(&b.check));
    let status = reports.iter().map(|r| r.status).max().unwrap_or(Status::Pass);
    let count = |s: Status| reports.iter().filter(|r| r.status == s).count();
    let mut text: String = reports.iter().map(ToString::to_string).collect();
    writeln!(
        text,
        "{status}: {} checks, {} passed, {} warned, {} failed",
        reports.len(),
        count(Status::Pass),
        count(Status::Warn),
        count(Status::Fail)
    )
    .expect("string write");
    let json = serde_json::to_value(CheckSummary {
        status,
        reports: &reports,
    })
    .expect("reports serialize");
    Ok(Output {
        text,
        json,
        code: if status == Status::Fail { EXIT_FAIL } else { EXIT_OK },
    })
}

fn execute(cli: Cli, file: &ConfigFile, out: &mut dyn Write) -> Result<i32, CliError> {
    let settings = Settings::merge(cli.common, file)?;
    let format = settings.format;
    let ctx = Context::new(settings)?;
    let output = match cli.command {
        Command::Expand => expand(&ctx)?,
        Command::Vars => vars(&ctx)?,
        Command::Tableaux { indices } => tableaux_cmd(&ctx, indices)?,
        Command::Beta { a } => beta_cmd(&ctx, a)?,
        Command::Check { group } => check(&ctx, group)?,
    };
    match format {
        Format::Text => out.write_all(output.text.as_bytes())?,
        Format::Json => {
            serde_json::to_writer_pretty(&mut *out, &output.json).map_err(std::io::Error::from)?;
            writeln!(out)?;
        }
    }
    Ok(output.code)
}

/// Runs with an explicit config file (or none) and returns the exit code.
pub fn run_with_config<I, T>(args: I, config: Option<&Path>, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() {
                let _ = write!(err, "{}", e.render());
                EXIT_USAGE
            } else {
                let _ = write!(out, "{}", e.render());
                EXIT_OK
            };
            return code;
        }
    };
    let result = config
        .map(ConfigFile::load)
        .transpose()
        .map(Option::unwrap_or_default)
        .and_then(|file| execute(cli, &file, out));
    match result {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.exit_code()
        }
    }
}

/// Runs with the config file named by `TSYSLAB_CONFIG`, if set.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let config = std::env::var_os(config::ENV_VAR).map(PathBuf::from);
    run_with_config(args, config.as_deref(), out, err)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn call(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let mut argv = vec!["tsyslab"];
        argv.extend_from_slice(args);
        let code = run_with_config(argv, None, &mut out, &mut err);
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    #[test]
    fn scope_rules() {
        for kind in [
            AlgebraKind::A2Even,
            AlgebraKind::A2Odd,
            AlgebraKind::D2,
            AlgebraKind::D3_4,
        ] {
            for group in [CheckGroup::All, CheckGroup::Screening, CheckGroup::Tt] {
                assert!(group.jobs().iter().any(|j| j.applies(kind)));
            }
        }
        assert!(!Job::Casorati.applies(AlgebraKind::D2));
        assert!(Job::Hk.applies(AlgebraKind::D3_4));
        assert_eq!(CheckGroup::D34.name(), "d34");
    }

    #[test]
    fn usage_errors() {
        assert_eq!(call(&["expand"]).0, EXIT_USAGE);
        assert_eq!(call(&["expand", "--algebra", "a2even"]).0, EXIT_USAGE);
        assert_eq!(call(&["expand", "--algebra", "e8", "--n", "1"]).0, EXIT_USAGE);
        assert_eq!(call(&["frobnicate"]).0, EXIT_USAGE);
        assert_eq!(call(&["check", "tq", "--algebra", "d2", "--n", "2"]).0, EXIT_USAGE);
        let (code, out, _) = call(&["--help"]);
        assert_eq!(code, EXIT_OK);
        assert!(out.contains("check"));
    }

    #[test]
    fn expand_text() {
        let (code, out, _) = call(&["expand", "--algebra", "a2even", "--n", "1"]);
        assert_eq!(code, EXIT_OK);
        assert!(out.contains("T^1(u) = Y[1](u) + Y[1](u+1+1/2t)*Y[1](u+2)^-1 + Y[1](u+3+1/2t)^-1"));
        assert!(out.contains("T^3(u) = 1"));
    }
}
