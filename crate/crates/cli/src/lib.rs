//! Command-line front end: `space build`, `radius`, `index`, `certify`,
//! `shell` and `reproduce`.
//!
//! Exit codes: 0 on success, 2 on usage errors, 1 on computation errors.

// Negated float comparisons are used on purpose so that NaN fails the check.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod reproduce;

use std::ffi::OsString;
use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use dwindex::certifier::{all_certificates, index_lower_bound, vertex_certificate, VertexCertificate};
use dwindex::gallery::GallerySpec;
use dwindex::index::{default_restarts, estimate_index};
use dwindex::lp_shell::{sample_shell, write_csv, ComplexOperatorJson};
use dwindex::metrics::{operator_norm, radius, sampled_dw, OperatorJson};
use dwindex::polytope::{space_from_json, space_to_json};
use dwindex::{PolyhedralSpace, RadiusKind, RadiusReport};
use serde::Serialize;

pub const EXIT_OK: i32 = 0;
pub const EXIT_COMPUTE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

pub const THREADS_ENV: &str = "DWINDEX_THREADS";

const P_MIN: f64 = 1.01;
const P_MAX: f64 = 100.0;

#[derive(Debug, Parser)]
#[command(name = "dwindex", version, about = "Numerical and Davis-Wielandt indices of polyhedral spaces")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Polyhedral space construction.
    #[command(subcommand)]
    Space(SpaceCommand),
    /// Operator norm, numerical radius or (modified) Davis-Wielandt radius.
    Radius(RadiusArgs),
    /// Multistart upper estimate of an index.
    Index(IndexArgs),
    /// Vertex certificates and the lower bound on the Davis-Wielandt index.
    Certify(CertifyArgs),
    /// Davis-Wielandt shell samples on complex l_p^n as CSV.
    Shell(ShellArgs),
    /// Runs the full acceptance table and prints a JSON report.
    Reproduce(ReproduceArgs),
}

#[derive(Debug, Subcommand)]
pub enum SpaceCommand {
    /// Writes a gallery space as JSON.
    Build(BuildArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SpaceKind {
    RegularPolygon,
    Prism,
    PyramidPrism,
    Drum,
    HexagonGamma,
    OctagonXi,
    HexagonGammaPrism,
    OctagonXiPrism,
}

#[derive(Debug, Args)]
pub struct BuildArgs {
    #[arg(long, value_enum)]
    pub kind: SpaceKind,
    /// Half the number of polygon vertices (regular-polygon, prism, drum).
    #[arg(long, value_parser = clap::value_parser!(u32).range(2..=64))]
    pub n: Option<u32>,
    #[arg(long)]
    pub gamma: Option<f64>,
    #[arg(long)]
    pub xi: Option<f64>,
    /// Prism half-height.
    #[arg(long, default_value_t = 1.0)]
    pub height: f64,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum RadiusChoice {
    W,
    Dw,
    Dwstar,
    Opnorm,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum KindArg {
    W,
    Dw,
    Dwstar,
}

impl From<KindArg> for RadiusKind {
    fn from(k: KindArg) -> Self {
        match k {
            KindArg::W => RadiusKind::W,
            KindArg::Dw => RadiusKind::Dw,
            KindArg::Dwstar => RadiusKind::DwStar,
        }
    }
}

#[derive(Debug, Args)]
pub struct RadiusArgs {
    #[arg(long)]
    pub space: PathBuf,
    #[arg(long)]
    pub op: PathBuf,
    #[arg(long, value_enum)]
    pub kind: RadiusChoice,
    /// Adds a Monte-Carlo value from this many random unit vectors.
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    pub oracle_samples: Option<u64>,
    #[arg(long, default_value_t = 42)]
    pub seed: u64,
}

#[derive(Debug, Args)]
pub struct IndexArgs {
    #[arg(long)]
    pub space: PathBuf,
    #[arg(long, value_enum)]
    pub kind: KindArg,
    /// Defaults to 64 for planar spaces and 256 otherwise.
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    pub restarts: Option<u64>,
    #[arg(long, default_value_t = 42)]
    pub seed: u64,
    #[arg(long, default_value_t = 1e-7, value_parser = positive_f64)]
    pub tol: f64,
}

#[derive(Debug, Args)]
pub struct CertifyArgs {
    #[arg(long)]
    pub space: PathBuf,
    #[arg(long)]
    pub vertex: Option<usize>,
}

#[derive(Debug, Args)]
pub struct ShellArgs {
    /// Exponent of the norm; clamped to [1.01, 100].
    #[arg(long)]
    pub p: f64,
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    pub dim: u64,
    #[arg(long)]
    pub op: PathBuf,
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    pub samples: u64,
    #[arg(long, default_value_t = 42)]
    pub seed: u64,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ReproduceArgs {
    #[arg(long, default_value_t = 42)]
    pub seed: u64,
    /// Restricts the report to the named rows; repeatable.
    #[arg(long, value_parser = clap::builder::PossibleValuesParser::new(reproduce::LABELS))]
    pub only: Vec<String>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

fn positive_f64(s: &str) -> Result<f64, String> {
    let v: f64 = s.parse().map_err(|e| format!("{e}"))?;
    if v > 0.0 && v.is_finite() {
        Ok(v)
    } else {
        Err(format!("expected a positive number, got {s}"))
    }
}

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Compute(String),
}

impl From<dwindex::Error> for CliError {
    fn from(e: dwindex::Error) -> Self {
        CliError::Compute(e.to_string())
    }
}

type CliResult<T> = Result<T, CliError>;

/// Parses `argv` and runs the command, returning the process exit code.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    if let Err(msg) = configure_threads() {
        eprintln!("error: {msg}");
        return EXIT_USAGE;
    }
    match dispatch(cli.command) {
        Ok(()) => EXIT_OK,
        Err(CliError::Usage(msg)) => {
            eprintln!("error: {msg}");
            EXIT_USAGE
        }
        Err(CliError::Compute(msg)) => {
            eprintln!("error: {msg}");
            EXIT_COMPUTE
        }
    }
}

fn configure_threads() -> Result<(), String> {
    let Ok(value) = std::env::var(THREADS_ENV) else {
        return Ok(());
    };
    let threads: usize = value
        .trim()
        .parse()
        .ok()
        .filter(|&t| t > 0)
        .ok_or_else(|| format!("{THREADS_ENV} must be a positive integer, got {value:?}"))?;
    // A pool that is already initialized (e.g. in tests) is left as is.
    let _ = rayon::ThreadPoolBuilder::new().num_threads(threads).build_global();
    Ok(())
}

fn dispatch(command: Command) -> CliResult<()> {
    match command {
        Command::Space(SpaceCommand::Build(args)) => space_build(&args),
        Command::Radius(args) => radius_cmd(&args),
        Command::Index(args) => index_cmd(&args),
        Command::Certify(args) => certify_cmd(&args),
        Command::Shell(args) => shell_cmd(&args),
        Command::Reproduce(args) => reproduce_cmd(&args),
    }
}

fn read_input(path: &Path) -> CliResult<String> {
    fs::read_to_string(path).map_err(|e| CliError::Usage(format!("cannot read {}: {e}", path.display())))
}

fn check_output(path: Option<&Path>) -> CliResult<()> {
    if let Some(dir) = path.and_then(Path::parent).filter(|d| !d.as_os_str().is_empty()) {
        if !dir.is_dir() {
            return Err(CliError::Usage(format!("output directory {} does not exist", dir.display())));
        }
    }
    Ok(())
}

fn emit(text: &str, out: Option<&Path>) -> CliResult<()> {
    match out {
        Some(path) => fs::write(path, text)
            .map_err(|e| CliError::Compute(format!("cannot write {}: {e}", path.display()))),
        None => {
            let mut stdout = io::stdout().lock();
            stdout
                .write_all(text.as_bytes())
                .map_err(|e| CliError::Compute(format!("cannot write to stdout: {e}")))
        }
    }
}

fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("results serialize");
    s.push('\n');
    s
}

fn load_space(path: &Path) -> CliResult<PolyhedralSpace> {
    Ok(space_from_json(&read_input(path)?)?)
}

fn gallery_spec(args: &BuildArgs) -> CliResult<GallerySpec> {
    let need = |v: Option<f64>, flag: &str| v.ok_or_else(|| CliError::Usage(format!("--kind {:?} requires --{flag}", args.kind)));
    let n = || {
        args.n
            .map(|n| n as usize)
            .ok_or_else(|| CliError::Usage(format!("--kind {:?} requires --n", args.kind)))
    };
    Ok(match args.kind {
        SpaceKind::RegularPolygon => GallerySpec::RegularPolygon { n: n()? },
        SpaceKind::Prism => GallerySpec::RegularPolygon { n: n()? }.prism(args.height),
        SpaceKind::PyramidPrism => GallerySpec::PyramidPrism,
        SpaceKind::Drum => GallerySpec::Drum { n: n()? },
        SpaceKind::HexagonGamma => GallerySpec::HexagonGamma { gamma: need(args.gamma, "gamma")? },
        SpaceKind::OctagonXi => GallerySpec::OctagonXi { xi: need(args.xi, "xi")? },
        SpaceKind::HexagonGammaPrism => GallerySpec::HexagonGamma { gamma: need(args.gamma, "gamma")? }.prism(args.height),
        SpaceKind::OctagonXiPrism => GallerySpec::OctagonXi { xi: need(args.xi, "xi")? }.prism(args.height),
    })
}

fn space_build(args: &BuildArgs) -> CliResult<()> {
    check_output(args.out.as_deref())?;
    let space = gallery_spec(args)?.build()?;
    let mut text = space_to_json(&space);
    text.push('\n');
    emit(&text, args.out.as_deref())
}

#[derive(Debug, Serialize)]
struct RadiusOutput {
    kind: &'static str,
    #[serde(flatten)]
    report: RadiusReport,
    #[serde(skip_serializing_if = "Option::is_none")]
    oracle: Option<f64>,
}

fn radius_cmd(args: &RadiusArgs) -> CliResult<()> {
    let space_text = read_input(&args.space)?;
    let op_text = read_input(&args.op)?;
    let space = space_from_json(&space_text)?;
    let op = serde_json::from_str::<OperatorJson>(&op_text)
        .map_err(dwindex::Error::from)?
        .into_operator()?;
    let (name, report, kind) = match args.kind {
        RadiusChoice::Opnorm => ("opnorm", operator_norm(&space, &op)?, None),
        other => {
            let kind: RadiusKind = match other {
                RadiusChoice::W => RadiusKind::W,
                RadiusChoice::Dw => RadiusKind::Dw,
                _ => RadiusKind::DwStar,
            };
            (kind.name(), radius(&space, &op, kind)?, Some(kind))
        }
    };
    let oracle = match (args.oracle_samples, kind) {
        (Some(samples), Some(kind)) => Some(sampled_dw(&space, &op, kind, samples as usize, args.seed)?),
        (Some(_), None) => return Err(CliError::Usage("--oracle-samples applies to w, dw and dwstar only".into())),
        (None, _) => None,
    };
    emit(&to_json(&RadiusOutput { kind: name, report, oracle }), None)
}

fn index_cmd(args: &IndexArgs) -> CliResult<()> {
    let space = load_space(&args.space)?;
    let restarts = args.restarts.map_or_else(|| default_restarts(space.dim()), |r| r as usize);
    let est = estimate_index(&space, args.kind.into(), restarts, args.seed, args.tol)?;
    emit(&to_json(&est), None)
}

#[derive(Debug, Serialize)]
struct CertifyOutput {
    certificates: Vec<VertexCertificate>,
    #[serde(skip_serializing_if = "Option::is_none")]
    lower_bound: Option<f64>,
}

fn certify_cmd(args: &CertifyArgs) -> CliResult<()> {
    let space = load_space(&args.space)?;
    let out = match args.vertex {
        Some(v) => {
            if v >= space.vertices().len() {
                return Err(CliError::Usage(format!(
                    "--vertex {v} out of range (space has {} vertices)",
                    space.vertices().len()
                )));
            }
            CertifyOutput { certificates: vec![vertex_certificate(&space, v)?], lower_bound: None }
        }
        None => CertifyOutput {
            certificates: all_certificates(&space)?,
            lower_bound: Some(index_lower_bound(&space)?),
        },
    };
    emit(&to_json(&out), None)
}

fn shell_cmd(args: &ShellArgs) -> CliResult<()> {
    if !args.p.is_finite() {
        return Err(CliError::Usage(format!("--p must be finite, got {}", args.p)));
    }
    check_output(args.out.as_deref())?;
    let p = args.p.clamp(P_MIN, P_MAX);
    if p != args.p {
        eprintln!("note: p = {} clamped to {p}", args.p);
    }
    let op = serde_json::from_str::<ComplexOperatorJson>(&read_input(&args.op)?)
        .map_err(dwindex::Error::from)?
        .into_operator()?;
    if op.dim() as u64 != args.dim {
        return Err(CliError::Compute(format!("operator has dimension {}, --dim is {}", op.dim(), args.dim)));
    }
    let sample = sample_shell(&op, p, args.samples as usize, args.seed)?;
    let mut buf = Vec::with_capacity(sample.points.len() * 64);
    write_csv(&sample, &mut buf).expect("writing to memory");
    emit(std::str::from_utf8(&buf).expect("csv is ascii"), args.out.as_deref())
}

fn reproduce_cmd(args: &ReproduceArgs) -> CliResult<()> {
    check_output(args.out.as_deref())?;
    let inputs = reproduce::Inputs::standard(args.seed)?;
    let report = reproduce::run(&inputs, &args.only);
    emit(&to_json(&report), args.out.as_deref())
}
