//! Command-line front end for the `logatlas` binary.

use std::ffi::OsString;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::ser::Serialize;
use serde::Deserialize;
use serde_json::ser::{Formatter, PrettyFormatter};

use crate::branches::{
    canonical_log, canonical_skew_log, enumerate_branches, enumerate_skew_branches, principal_branch,
    principal_skew_branch, MultiIndexSet, SkewMultiIndexSet,
};
use crate::error::{ErrorClass, LogError, Result};
use crate::numkernel::Matrix;
use crate::sampler::{
    component_signature, sample_log, sample_skew_log, skew_component_signature, verify_log, VerifyReport,
};
use crate::spectra::{ortho_canonical, real_jordan, OrthoSpectralData, SpectralData};
use crate::topology::{
    branch_topology, homspace_dim, homspace_pi2_rank, log_set_cardinality_class, principal_skew_topology,
    principal_topology, skew_branch_topology, skew_log_set_cardinality_class, CardinalityClass, HomSpace,
    HomSpaceKind, TopologyReport,
};

pub const DEFAULT_MAX_INDEX: u32 = 3;
pub const DEFAULT_MAX_BRANCHES: usize = 200;
pub const DEFAULT_EPS: f64 = 1e-8;
pub const DEFAULT_TOL: f64 = 1e-8;

pub const EXIT_OK: i32 = 0;
pub const EXIT_VERIFY_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_MATH_DOMAIN: i32 = 3;
pub const EXIT_ILL_CONDITIONED: i32 = 4;

#[derive(Debug, Parser)]
#[command(name = "logatlas", version, about = "Classify and construct real logarithms of real matrices")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Enumerate logarithm branches with their canonical logs and topology.
    Classify(ClassifyArgs),
    /// Draw random logarithms on one branch.
    Sample(SampleArgs),
    /// Check that a matrix is a logarithm of another.
    Verify(VerifyArgs),
    /// Print the real Jordan form (or orthogonal canonical form).
    Jordan(JordanArgs),
    /// Tabulate dimensions and π₂ ranks of the homogeneous-space families.
    Tables(TablesArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Mode {
    General,
    Skew,
    Principal,
    #[value(name = "principal_skew", alias = "principal-skew")]
    PrincipalSkew,
}

impl Mode {
    fn name(self) -> &'static str {
        match self {
            Mode::General => "general",
            Mode::Skew => "skew",
            Mode::Principal => "principal",
            Mode::PrincipalSkew => "principal_skew",
        }
    }

    fn is_skew(self) -> bool {
        matches!(self, Mode::Skew | Mode::PrincipalSkew)
    }
}

#[derive(Debug, Args)]
pub struct ClassifyArgs {
    pub matrix: PathBuf,
    #[arg(long, value_enum, default_value = "general")]
    pub mode: Mode,
    #[arg(long, default_value_t = DEFAULT_MAX_INDEX)]
    pub max_index: u32,
    #[arg(long, default_value_t = DEFAULT_MAX_BRANCHES)]
    pub max_branches: usize,
    #[arg(long, default_value_t = DEFAULT_EPS)]
    pub eps: f64,
    #[arg(long, default_value_t = DEFAULT_TOL)]
    pub tol: f64,
    /// Process branches on a thread pool; output order is unchanged.
    #[arg(long)]
    pub parallel: bool,
}

#[derive(Debug, Args)]
pub struct SampleArgs {
    pub matrix: PathBuf,
    /// Branch JSON as printed by `classify`.
    #[arg(long)]
    pub branch: PathBuf,
    /// Treat the matrix as special orthogonal and sample skew-symmetric logs.
    #[arg(long)]
    pub skew: bool,
    #[arg(long, default_value_t = 1)]
    pub count: usize,
    #[arg(long, env = "LOGATLAS_SEED", default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = DEFAULT_EPS)]
    pub eps: f64,
    #[arg(long)]
    pub parallel: bool,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    pub matrix: PathBuf,
    pub log: PathBuf,
    #[arg(long, default_value_t = DEFAULT_TOL)]
    pub tol: f64,
}

#[derive(Debug, Args)]
pub struct JordanArgs {
    pub matrix: PathBuf,
    #[arg(long)]
    pub skew: bool,
    #[arg(long, default_value_t = DEFAULT_EPS)]
    pub eps: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum TableKind {
    Gamma,
    GammaHat,
    Theta,
    ThetaHat,
}

#[derive(Debug, Args)]
pub struct TablesArgs {
    #[arg(value_enum)]
    pub kind: TableKind,
    /// A single ζ or an inclusive range `a..b` (Γ kinds only).
    #[arg(long)]
    pub zeta: Option<String>,
    /// Explicit block sizes, comma separated.
    #[arg(long, value_delimiter = ',', conflicts_with_all = ["s_max", "nu_max"])]
    pub nu: Option<Vec<usize>>,
    /// Enumerate all non-decreasing tuples with at most this many blocks.
    #[arg(long, default_value_t = 3)]
    pub s_max: usize,
    /// Largest block size in enumerated tuples.
    #[arg(long, default_value_t = 3)]
    pub nu_max: usize,
}

/// Inputs of [`run_classify`].
#[derive(Debug, Clone)]
pub struct ClassifyRequest {
    pub matrix: Matrix,
    pub mode: Mode,
    pub max_index: u32,
    pub max_branches: usize,
    pub eps: f64,
    pub tol: f64,
    pub parallel: bool,
}

impl ClassifyRequest {
    pub fn new(matrix: Matrix, mode: Mode) -> Self {
        ClassifyRequest {
            matrix,
            mode,
            max_index: DEFAULT_MAX_INDEX,
            max_branches: DEFAULT_MAX_BRANCHES,
            eps: DEFAULT_EPS,
            tol: DEFAULT_TOL,
            parallel: false,
        }
    }

    fn validate(&self) -> Result<()> {
        if self.max_branches == 0 {
            return Err(LogError::InvalidInput("--max-branches must be ≥ 1".into()));
        }
        check_tolerance("eps", self.eps)?;
        check_tolerance("tol", self.tol)
    }
}

fn check_tolerance(name: &str, value: f64) -> Result<()> {
    if value > 0.0 && value <= 1e-3 {
        Ok(())
    } else {
        Err(LogError::InvalidInput(format!("{name} must lie in (0, 1e-3], got {value}")))
    }
}

#[derive(Debug, Clone, PartialEq, serde::Serialize, Deserialize)]
#[serde(untagged)]
pub enum Spectrum {
    General(SpectralData),
    Orthogonal(OrthoSpectralData),
}

#[derive(Debug, Clone, PartialEq, serde::Serialize, Deserialize)]
#[serde(untagged)]
pub enum Branch {
    General(MultiIndexSet),
    Skew(SkewMultiIndexSet),
}

#[derive(Debug, Clone, serde::Serialize)]
pub struct BranchReport {
    pub index: usize,
    pub branch: Branch,
    pub canonical_log: Matrix,
    pub log: Matrix,
    pub residual: f64,
    pub pass: bool,
    pub topology: TopologyReport,
}

#[derive(Debug, Clone, serde::Serialize)]
pub struct ClassifyReport {
    pub mode: &'static str,
    pub n: usize,
    pub spectral: Spectrum,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub cardinality_class: Option<CardinalityClass>,
    pub truncated: bool,
    pub branch_count: usize,
    pub branches: Vec<BranchReport>,
}

fn map_ordered<T: Sync, U: Send>(items: &[T], parallel: bool, f: impl Fn(usize, &T) -> Result<U> + Sync) -> Result<Vec<U>> {
    if parallel {
        items.par_iter().enumerate().map(|(i, t)| f(i, t)).collect()
    } else {
        items.iter().enumerate().map(|(i, t)| f(i, t)).collect()
    }
}

/// Classifies the logarithms of `req.matrix` in the requested mode.
pub fn run_classify(req: &ClassifyRequest) -> Result<ClassifyReport> {
    req.validate()?;
    let m = &req.matrix;
    if req.mode.is_skew() {
        let oc = ortho_canonical(m, req.eps)?;
        let spec = &oc.spectral;
        let (branches, truncated) = if req.mode == Mode::PrincipalSkew {
            (vec![principal_skew_branch(spec)], false)
        } else {
            let e = enumerate_skew_branches(spec, req.max_index, req.max_branches)?;
            (e.branches, e.truncated)
        };
        let reports = map_ordered(&branches, req.parallel, |index, b| {
            let canonical = canonical_skew_log(spec, b)?;
            let w = &(&oc.q * &canonical) * &oc.q.transpose();
            let log = (&w - &w.transpose()).scale(0.5);
            let check = verify_log(m, &log, req.tol)?;
            let topology = if req.mode == Mode::PrincipalSkew {
                principal_skew_topology(spec)
            } else {
                skew_branch_topology(spec, b)?
            };
            Ok(BranchReport {
                index,
                branch: Branch::Skew(b.clone()),
                canonical_log: canonical,
                log,
                residual: check.residual,
                pass: check.pass,
                topology,
            })
        })?;
        Ok(ClassifyReport {
            mode: req.mode.name(),
            n: m.order(),
            spectral: Spectrum::Orthogonal(spec.clone()),
            cardinality_class: skew_log_set_cardinality_class(spec).ok(),
            truncated,
            branch_count: reports.len(),
            branches: reports,
        })
    } else {
        let rj = real_jordan(m, req.eps)?;
        let spec = &rj.spectral;
        let (branches, truncated) = if req.mode == Mode::Principal {
            (vec![principal_branch(spec)], false)
        } else {
            let e = enumerate_branches(spec, req.max_index, req.max_branches)?;
            (e.branches, e.truncated)
        };
        let c_inv = rj.c.inverse()?;
        let reports = map_ordered(&branches, req.parallel, |index, b| {
            let canonical = canonical_log(spec, b)?;
            let log = &(&rj.c * &canonical) * &c_inv;
            let check = verify_log(m, &log, req.tol)?;
            let topology = if req.mode == Mode::Principal { principal_topology(spec) } else { branch_topology(spec, b)? };
            Ok(BranchReport {
                index,
                branch: Branch::General(b.clone()),
                canonical_log: canonical,
                log,
                residual: check.residual,
                pass: check.pass,
                topology,
            })
        })?;
        Ok(ClassifyReport {
            mode: req.mode.name(),
            n: m.order(),
            spectral: Spectrum::General(spec.clone()),
            cardinality_class: Some(log_set_cardinality_class(spec)),
            truncated,
            branch_count: reports.len(),
            branches: reports,
        })
    }
}

#[derive(Debug, Clone, serde::Serialize)]
pub struct SampleRecord {
    pub index: usize,
    pub log: Matrix,
    pub signature: Vec<i8>,
    pub residual: f64,
    pub skewness: f64,
}

fn stream_rng(seed: u64, stream: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream as u64);
    rng
}

/// Draws `count` logarithms on `branch`; sample `i` uses RNG stream `i` of
/// `seed`, so the output does not depend on `parallel`.
pub fn run_sample(m: &Matrix, branch: &Branch, count: usize, seed: u64, eps: f64, parallel: bool) -> Result<Vec<SampleRecord>> {
    check_tolerance("eps", eps)?;
    let indices: Vec<usize> = (0..count).collect();
    match branch {
        Branch::General(b) => {
            let rj = real_jordan(m, eps)?;
            map_ordered(&indices, parallel, |_, &i| {
                let mut rng = stream_rng(seed, i);
                let s = sample_log(m, &rj.spectral, &rj.c, b, &mut rng)?;
                let check = verify_log(m, &s.log, DEFAULT_TOL)?;
                Ok(SampleRecord {
                    index: i,
                    signature: component_signature(&s.commutant, b)?,
                    residual: check.residual,
                    skewness: check.skewness,
                    log: s.log,
                })
            })
        }
        Branch::Skew(b) => {
            let oc = ortho_canonical(m, eps)?;
            map_ordered(&indices, parallel, |_, &i| {
                let mut rng = stream_rng(seed, i);
                let s = sample_skew_log(m, &oc.spectral, &oc.q, b, &mut rng)?;
                let check = verify_log(m, &s.log, DEFAULT_TOL)?;
                Ok(SampleRecord {
                    index: i,
                    signature: skew_component_signature(&s.commutant, &oc.spectral, b)?,
                    residual: check.residual,
                    skewness: check.skewness,
                    log: s.log,
                })
            })
        }
    }
}

#[derive(Debug, Clone, serde::Serialize)]
pub struct TableRow {
    pub kind: HomSpaceKind,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub zeta: Option<usize>,
    pub nu: Vec<usize>,
    pub dimension: u64,
    pub components: u64,
    pub pi2_rank: u64,
}

fn parse_zeta(text: Option<&str>) -> Result<Vec<usize>> {
    let bad = |t: &str| LogError::InvalidInput(format!("--zeta expects an integer or a range a..b, got {t:?}"));
    match text {
        None => Ok(vec![0]),
        Some(t) => {
            if let Some((a, b)) = t.split_once("..") {
                let a: usize = a.trim().parse().map_err(|_| bad(t))?;
                let b: usize = b.trim().parse().map_err(|_| bad(t))?;
                if a > b {
                    return Err(bad(t));
                }
                Ok((a..=b).collect())
            } else {
                Ok(vec![t.trim().parse().map_err(|_| bad(t))?])
            }
        }
    }
}

/// Non-decreasing tuples of length `0..=s_max` with entries in `1..=nu_max`.
fn nondecreasing_tuples(s_max: usize, nu_max: usize) -> Vec<Vec<usize>> {
    let mut out = vec![vec![]];
    let mut frontier = vec![vec![]];
    for _ in 0..s_max {
        let mut next = Vec::new();
        for t in &frontier {
            let start = t.last().copied().unwrap_or(1);
            for x in start..=nu_max {
                let mut u: Vec<usize> = t.clone();
                u.push(x);
                next.push(u);
            }
        }
        out.extend(next.iter().cloned());
        frontier = next;
    }
    out
}

pub fn run_tables(kind: TableKind, zeta: Option<&str>, nu: Option<&[usize]>, s_max: usize, nu_max: usize) -> Result<Vec<TableRow>> {
    let hs_kind = match kind {
        TableKind::Gamma => HomSpaceKind::Gamma,
        TableKind::GammaHat => HomSpaceKind::GammaHat,
        TableKind::Theta => HomSpaceKind::Theta,
        TableKind::ThetaHat => HomSpaceKind::ThetaHat,
    };
    if !hs_kind.is_gamma() && zeta.is_some() {
        return Err(LogError::InvalidInput("--zeta applies to Γ kinds only".into()));
    }
    let zetas = parse_zeta(zeta)?;
    let tuples = match nu {
        Some(explicit) => vec![explicit.to_vec()],
        None => {
            if nu_max == 0 {
                return Err(LogError::InvalidInput("--nu-max must be ≥ 1".into()));
            }
            nondecreasing_tuples(s_max, nu_max)
        }
    };
    let explicit = nu.is_some();
    let mut rows = Vec::new();
    for &z in &zetas {
        for t in &tuples {
            let admissible = if hs_kind.is_gamma() { z + t.len() >= 1 } else { !t.is_empty() };
            if !admissible && !explicit {
                continue;
            }
            let hs = HomSpace::new(hs_kind, z, t.clone())?;
            rows.push(TableRow {
                kind: hs_kind,
                zeta: hs.zeta,
                nu: t.clone(),
                dimension: homspace_dim(&hs),
                components: hs.components(),
                pi2_rank: homspace_pi2_rank(&hs)?,
            });
        }
    }
    Ok(rows)
}

#[derive(Debug, Clone, serde::Serialize)]
pub struct JordanReport {
    pub spectral: Spectrum,
    #[serde(rename = "J")]
    pub j: Matrix,
    #[serde(rename = "C", skip_serializing_if = "Option::is_none")]
    pub c: Option<Matrix>,
    #[serde(rename = "Q", skip_serializing_if = "Option::is_none")]
    pub q: Option<Matrix>,
}

pub fn run_jordan(m: &Matrix, skew: bool, eps: f64) -> Result<JordanReport> {
    if skew {
        let oc = ortho_canonical(m, eps)?;
        Ok(JordanReport { spectral: Spectrum::Orthogonal(oc.spectral), j: oc.j, c: None, q: Some(oc.q) })
    } else {
        let rj = real_jordan(m, eps)?;
        Ok(JordanReport { spectral: Spectrum::General(rj.spectral), j: rj.j, c: Some(rj.c), q: None })
    }
}

/// Pretty JSON whose floats always carry 17 significant digits.
struct FixedPrecision<'a>(PrettyFormatter<'a>);

impl Formatter for FixedPrecision<'_> {
    fn write_f64<W: ?Sized + Write>(&mut self, writer: &mut W, value: f64) -> io::Result<()> {
        write!(writer, "{value:.16e}")
    }

    fn begin_array<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.begin_array(w)
    }

    fn end_array<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_array(w)
    }

    fn begin_array_value<W: ?Sized + Write>(&mut self, w: &mut W, first: bool) -> io::Result<()> {
        self.0.begin_array_value(w, first)
    }

    fn end_array_value<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_array_value(w)
    }

    fn begin_object<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.begin_object(w)
    }

    fn end_object<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_object(w)
    }

    fn begin_object_key<W: ?Sized + Write>(&mut self, w: &mut W, first: bool) -> io::Result<()> {
        self.0.begin_object_key(w, first)
    }

    fn begin_object_value<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.begin_object_value(w)
    }

    fn end_object_value<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_object_value(w)
    }
}

/// Serializes `value` as pretty JSON with fixed 17-digit floats.
pub fn to_json_string<T: Serialize>(value: &T) -> Result<String> {
    let mut buf = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut buf, FixedPrecision(PrettyFormatter::new()));
    value
        .serialize(&mut ser)
        .map_err(|e| LogError::InvalidInput(format!("serialization failed: {e}")))?;
    Ok(String::from_utf8(buf).expect("serde_json emits UTF-8"))
}

#[derive(Deserialize)]
#[serde(untagged)]
enum MatrixInput {
    Object(Matrix),
    Rows(Vec<Vec<f64>>),
}

/// Reads a matrix from `{"n": .., "data": [[..]]}` or a bare array of rows.
pub fn read_matrix(path: &Path) -> Result<Matrix> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| LogError::InvalidInput(format!("cannot read {}: {e}", path.display())))?;
    parse_matrix(&text).map_err(|e| match e {
        LogError::InvalidInput(msg) => LogError::InvalidInput(format!("{}: {msg}", path.display())),
        other => other,
    })
}

pub fn parse_matrix(text: &str) -> Result<Matrix> {
    let input: MatrixInput =
        serde_json::from_str(text).map_err(|e| LogError::InvalidInput(format!("not a matrix document: {e}")))?;
    match input {
        MatrixInput::Object(m) => Ok(m),
        MatrixInput::Rows(rows) => Matrix::from_rows(&rows),
    }
}

fn read_branch(path: &Path, skew: bool) -> Result<Branch> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| LogError::InvalidInput(format!("cannot read {}: {e}", path.display())))?;
    let parsed = if skew {
        serde_json::from_str(&text).map(Branch::Skew)
    } else {
        serde_json::from_str(&text).map(Branch::General)
    };
    parsed.map_err(|e| LogError::InvalidInput(format!("{}: not a branch document: {e}", path.display())))
}

pub fn exit_code(err: &LogError) -> i32 {
    match err.class() {
        ErrorClass::Usage => EXIT_USAGE,
        ErrorClass::MathDomain => EXIT_MATH_DOMAIN,
        ErrorClass::IllConditioned => EXIT_ILL_CONDITIONED,
    }
}

#[derive(serde::Serialize)]
struct ErrorReport<'a> {
    error: &'a str,
    message: String,
}

fn execute(command: Command, out: &mut dyn Write) -> Result<i32> {
    let emit = |out: &mut dyn Write, text: String| {
        writeln!(out, "{text}").map_err(|e| LogError::InvalidInput(format!("cannot write output: {e}")))
    };
    match command {
        Command::Classify(a) => {
            let req = ClassifyRequest {
                matrix: read_matrix(&a.matrix)?,
                mode: a.mode,
                max_index: a.max_index,
                max_branches: a.max_branches,
                eps: a.eps,
                tol: a.tol,
                parallel: a.parallel,
            };
            emit(out, to_json_string(&run_classify(&req)?)?)?;
            Ok(EXIT_OK)
        }
        Command::Sample(a) => {
            let m = read_matrix(&a.matrix)?;
            let branch = read_branch(&a.branch, a.skew)?;
            let records = run_sample(&m, &branch, a.count, a.seed, a.eps, a.parallel)?;
            emit(out, to_json_string(&records)?)?;
            Ok(EXIT_OK)
        }
        Command::Verify(a) => {
            check_tolerance("tol", a.tol)?;
            let m = read_matrix(&a.matrix)?;
            let y = read_matrix(&a.log)?;
            let report: VerifyReport = verify_log(&m, &y, a.tol)?;
            emit(out, to_json_string(&report)?)?;
            Ok(if report.pass { EXIT_OK } else { EXIT_VERIFY_FAILED })
        }
        Command::Jordan(a) => {
            let m = read_matrix(&a.matrix)?;
            emit(out, to_json_string(&run_jordan(&m, a.skew, a.eps)?)?)?;
            Ok(EXIT_OK)
        }
        Command::Tables(a) => {
            let rows = run_tables(a.kind, a.zeta.as_deref(), a.nu.as_deref(), a.s_max, a.nu_max)?;
            emit(out, to_json_string(&rows)?)?;
            Ok(EXIT_OK)
        }
    }
}

/// Parses `args`, runs the command and returns the process exit code.
/// Reports go to stdout; errors go to stderr as a one-line JSON object.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    let stdout = io::stdout();
    let mut out = stdout.lock();
    match execute(cli.command, &mut out) {
        Ok(code) => code,
        Err(err) => {
            let report = ErrorReport { error: err.name(), message: err.to_string() };
            let line = serde_json::to_string(&report).unwrap_or_else(|_| err.name().to_string());
            eprintln!("{line}");
            exit_code(&err)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn floats_use_seventeen_significant_digits() {
        let text = to_json_string(&vec![0.1f64, -2.0, 1e-300]).unwrap();
        assert!(text.contains("1.0000000000000001e-1"));
        assert!(text.contains("-2.0000000000000000e0"));
        assert!(text.contains("1.0000000000000000e-300"));
        let back: Vec<f64> = serde_json::from_str(&text).unwrap();
        assert_eq!(back, vec![0.1, -2.0, 1e-300]);
    }

    #[test]
    fn zeta_ranges() {
        assert_eq!(parse_zeta(Some("2")).unwrap(), vec![2]);
        assert_eq!(parse_zeta(Some("0..3")).unwrap(), vec![0, 1, 2, 3]);
        assert!(parse_zeta(Some("3..1")).is_err());
        assert!(parse_zeta(Some("x")).is_err());
    }

    #[test]
    fn table_examples() {
        let rows = run_tables(TableKind::Gamma, Some("0"), Some(&[2]), 0, 0).unwrap();
        assert_eq!((rows[0].dimension, rows[0].pi2_rank, rows[0].components), (2, 1, 2));
        let rows = run_tables(TableKind::Theta, None, Some(&[1, 1]), 0, 0).unwrap();
        assert_eq!((rows[0].dimension, rows[0].pi2_rank), (2, 1));
        let rows = run_tables(TableKind::GammaHat, Some("3"), Some(&[1]), 0, 0).unwrap();
        assert_eq!((rows[0].dimension, rows[0].pi2_rank), (14, 1));
        assert!(run_tables(TableKind::Theta, Some("1"), Some(&[1]), 0, 0).is_err());
        assert!(run_tables(TableKind::Gamma, Some("0"), Some(&[]), 0, 0).is_err());
    }

    #[test]
    fn tuple_enumeration() {
        let t = nondecreasing_tuples(2, 2);
        assert_eq!(t, vec![vec![], vec![1], vec![2], vec![1, 1], vec![1, 2], vec![2, 2]]);
    }

    #[test]
    fn matrix_input_formats() {
        let a = parse_matrix("[[1, 2], [3, 4]]").unwrap();
        let b = parse_matrix(r#"{"n": 2, "data": [[1, 2], [3, 4]]}"#).unwrap();
        assert_eq!(a, b);
        assert!(matches!(parse_matrix("[[1, 2]]"), Err(LogError::InvalidInput(_))));
        assert!(matches!(parse_matrix("nope"), Err(LogError::InvalidInput(_))));
    }

    #[test]
    fn classify_diagonal_is_singleton() {
        let report = run_classify(&ClassifyRequest::new(Matrix::diagonal(&[2.0, 3.0]).unwrap(), Mode::General)).unwrap();
        assert_eq!(report.branch_count, 1);
        assert_eq!(report.cardinality_class, Some(CardinalityClass::Singleton));
        assert!(report.branches[0].pass);
    }

    #[test]
    fn parallel_classify_matches_sequential() {
        let m = Matrix::identity(4).scale(-1.0);
        let mut req = ClassifyRequest::new(m, Mode::General);
        req.max_index = 2;
        let seq = to_json_string(&run_classify(&req).unwrap()).unwrap();
        req.parallel = true;
        let par = to_json_string(&run_classify(&req).unwrap()).unwrap();
        assert_eq!(seq, par);
    }
}
