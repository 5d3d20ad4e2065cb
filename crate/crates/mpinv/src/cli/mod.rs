//! Command-line front end.
//!
//! One subcommand per public operation, matrix I/O in the CSV/JSON formats
//! of [`io`], and a [`report::RunReport`] on standard output for every run.
//!
//! Exit codes: `0` success, `1` numerical failure (no convergence,
//! degenerate separation, singular or non-Hermitian input), `2` usage and
//! file errors (bad flags, unreadable files, parse errors, mismatched
//! shapes).

pub mod fredholm;
pub mod io;
pub mod report;

pub use fredholm::{fredholm_demo, FredholmOutcome, Kernel, TrueSolution};
pub use io::{read_matrix, write_matrix, FileFormat, MatrixFile};
pub use report::{ReportStyle, RunReport};

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::error::LinalgError;
use crate::lstsq;
use crate::matrix::ComplexMatrix;
use crate::pinv::{self, PinvOptions, Route};
use crate::tol;
use crate::{decomp, eigen};

#[derive(Parser)]
#[command(
    name = "mpinv",
    version,
    about = "Moore-Penrose pseudoinverse toolbox for dense complex matrices"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Pseudoinverse of the input matrix
    Pinv(PinvArgs),
    /// Least squares: minimum-norm minimizer of |Ax - y|
    Lstsq(LstsqArgs),
    /// Singular value decomposition (writes V, S, W factor files)
    Svd(SvdArgs),
    /// Polar decomposition A = U |A| (writes U, P factor files)
    Polar(PolarArgs),
    /// Hermitian eigendecomposition (writes values and vectors files)
    Eig(EigArgs),
    /// Singular values of the input matrix
    SingularValues(SingularValuesArgs),
    /// Check the four Penrose conditions for a candidate pseudoinverse
    Verify(VerifyArgs),
    /// Discretized first-kind integral equation, solved by regularization
    FredholmDemo(FredholmArgs),
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum RouteArg {
    Auto,
    Spectral,
    Polynomial,
    Tikhonov,
    Svd,
    Fullrank,
}

impl From<RouteArg> for Route {
    fn from(r: RouteArg) -> Route {
        match r {
            RouteArg::Auto => Route::Auto,
            RouteArg::Spectral => Route::Spectral,
            RouteArg::Polynomial => Route::Polynomial,
            RouteArg::Tikhonov => Route::Tikhonov,
            RouteArg::Svd => Route::Svd,
            RouteArg::Fullrank => Route::Fullrank,
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum FormatArg {
    Csv,
    Json,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ReportArg {
    Text,
    Json,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum KernelArg {
    Gaussian,
    Lorentzian,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum TrueSolutionArg {
    SinPi,
    Zero,
}

/// Flags shared by every file-driven subcommand.
#[derive(Args)]
struct CommonArgs {
    /// Input matrix file
    #[arg(long = "in", value_name = "PATH")]
    input: PathBuf,
    /// Where to write the primary result (factor files derive suffixed
    /// names from this path)
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,
    /// Force a file format instead of inferring it from extensions
    #[arg(long, value_enum)]
    format: Option<FormatArg>,
    /// Report style printed on standard output
    #[arg(long, value_enum, default_value = "text")]
    report: ReportArg,
    /// Significant digits for CSV output (17 round-trips exactly)
    #[arg(long, default_value_t = 17)]
    precision: usize,
}

/// Route and tolerance flags for pseudoinverse-based subcommands.
#[derive(Args)]
struct RouteFlags {
    /// Computation route
    #[arg(long, value_enum, default_value = "auto")]
    route: RouteArg,
    /// Relative threshold below which Gram eigenvalues / singular values
    /// count as zero
    #[arg(long = "rank-tol", default_value_t = tol::RANK_REL)]
    rank_tol: f64,
    /// Regularization start (default: 1e-2 * |A|_F^2)
    #[arg(long)]
    mu0: Option<f64>,
    /// Geometric decay factor of the regularization schedule
    #[arg(long = "mu-factor", default_value_t = tol::MU_FACTOR)]
    mu_factor: f64,
    /// Maximum regularization steps
    #[arg(long = "mu-steps", default_value_t = tol::MU_MAX_STEPS)]
    mu_steps: usize,
    /// Convergence tolerance of the regularized iteration
    #[arg(long, default_value_t = tol::CONV_REL)]
    tol: f64,
}

impl RouteFlags {
    fn to_options(&self) -> PinvOptions {
        PinvOptions {
            route: self.route.into(),
            rank_tol: self.rank_tol,
            mu0: self.mu0,
            mu_factor: self.mu_factor,
            mu_max_steps: self.mu_steps,
            conv_tol: self.tol,
        }
    }

    fn record(&self, report: &mut RunReport) {
        report.record("rank_tol", self.rank_tol);
        report.record("conv_tol", self.tol);
        if matches!(self.route, RouteArg::Tikhonov | RouteArg::Auto) {
            report.record("mu_factor", self.mu_factor);
            report.record("mu_steps", self.mu_steps as f64);
            if let Some(mu0) = self.mu0 {
                report.record("mu0", mu0);
            }
        }
    }
}

#[derive(Args)]
struct PinvArgs {
    #[command(flatten)]
    common: CommonArgs,
    #[command(flatten)]
    route: RouteFlags,
}

#[derive(Args)]
struct LstsqArgs {
    #[command(flatten)]
    common: CommonArgs,
    /// Right-hand side vector (or column-stacked matrix) file
    #[arg(long, value_name = "PATH")]
    rhs: PathBuf,
    #[command(flatten)]
    route: RouteFlags,
}

#[derive(Args)]
struct SvdArgs {
    #[command(flatten)]
    common: CommonArgs,
}

#[derive(Args)]
struct PolarArgs {
    #[command(flatten)]
    common: CommonArgs,
}

#[derive(Args)]
struct EigArgs {
    #[command(flatten)]
    common: CommonArgs,
}

#[derive(Args)]
struct SingularValuesArgs {
    #[command(flatten)]
    common: CommonArgs,
}

#[derive(Args)]
struct VerifyArgs {
    #[command(flatten)]
    common: CommonArgs,
    /// Candidate pseudoinverse file to check against --in
    #[arg(long, value_name = "PATH")]
    candidate: PathBuf,
    /// Acceptance threshold for the four residuals, relative to scale
    #[arg(long, default_value_t = tol::ACCEPT_REL)]
    tol: f64,
}

#[derive(Args)]
struct FredholmArgs {
    /// Built-in kernel
    #[arg(long, value_enum, default_value = "gaussian")]
    kernel: KernelArg,
    /// Built-in manufactured solution
    #[arg(long = "utrue", value_enum, default_value = "sin-pi")]
    true_solution: TrueSolutionArg,
    /// Grid points on [0, 1] (at least 8)
    #[arg(long = "grid-n", default_value_t = 32)]
    grid_n: usize,
    /// Regularization start (default: 1e-2 * |A|_F^2)
    #[arg(long)]
    mu0: Option<f64>,
    /// Geometric decay factor of the regularization schedule
    #[arg(long = "mu-factor", default_value_t = tol::MU_FACTOR)]
    mu_factor: f64,
    /// Regularization steps to walk
    #[arg(long = "mu-steps", default_value_t = 10)]
    mu_steps: usize,
    /// Where to write the recovered solution vector
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,
    /// Force a file format for the output
    #[arg(long, value_enum)]
    format: Option<FormatArg>,
    /// Report style printed on standard output
    #[arg(long, value_enum, default_value = "text")]
    report: ReportArg,
    /// Significant digits for CSV output
    #[arg(long, default_value_t = 17)]
    precision: usize,
}

/// Internal failure classification driving the exit code.
enum CliFailure {
    Usage(String),
    Numerical(String),
}

impl From<io::FileError> for CliFailure {
    fn from(e: io::FileError) -> CliFailure {
        CliFailure::Usage(e.to_string())
    }
}

impl From<LinalgError> for CliFailure {
    fn from(e: LinalgError) -> CliFailure {
        match e {
            LinalgError::ShapeMismatch { .. }
            | LinalgError::EmptyShape { .. }
            | LinalgError::BadEntryCount { .. }
            | LinalgError::NonFinite { .. }
            | LinalgError::InvalidOptions(_) => CliFailure::Usage(e.to_string()),
            _ => CliFailure::Numerical(e.to_string()),
        }
    }
}

impl From<std::io::Error> for CliFailure {
    fn from(e: std::io::Error) -> CliFailure {
        CliFailure::Usage(format!("i/o failure: {e}"))
    }
}

/// Run the CLI against an explicit argument vector (the first element is the
/// program name), writing reports to `out`. Returns the process exit code.
pub fn run_from<I, T, W>(argv: I, out: &mut W) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
    W: Write,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{e}");
                    0
                }
                _ => {
                    eprintln!("{e}");
                    2
                }
            };
        }
    };
    let started = Instant::now();
    let name = command_name(&cli.command);
    match run_command(&cli.command, out) {
        Ok(mut report) => {
            report.timing_ms = started.elapsed().as_secs_f64() * 1e3;
            let style = command_report_style(&cli.command);
            if write!(out, "{}", report.render(style)).is_err() {
                return 2;
            }
            0
        }
        Err(CliFailure::Usage(msg)) => {
            eprintln!("error: {name}: {msg}");
            2
        }
        Err(CliFailure::Numerical(msg)) => {
            eprintln!("error: {name}: {msg}");
            1
        }
    }
}

fn command_name(cmd: &Command) -> &'static str {
    match cmd {
        Command::Pinv(_) => "pinv",
        Command::Lstsq(_) => "lstsq",
        Command::Svd(_) => "svd",
        Command::Polar(_) => "polar",
        Command::Eig(_) => "eig",
        Command::SingularValues(_) => "singular-values",
        Command::Verify(_) => "verify",
        Command::FredholmDemo(_) => "fredholm-demo",
    }
}

/// [`run_from`] against the process arguments and standard output.
pub fn run() -> i32 {
    let mut stdout = std::io::stdout();
    run_from(std::env::args_os(), &mut stdout)
}

fn command_report_style(cmd: &Command) -> ReportStyle {
    let arg = match cmd {
        Command::Pinv(a) => a.common.report,
        Command::Lstsq(a) => a.common.report,
        Command::Svd(a) => a.common.report,
        Command::Polar(a) => a.common.report,
        Command::Eig(a) => a.common.report,
        Command::SingularValues(a) => a.common.report,
        Command::Verify(a) => a.common.report,
        Command::FredholmDemo(a) => a.report,
    };
    match arg {
        ReportArg::Text => ReportStyle::Text,
        ReportArg::Json => ReportStyle::Json,
    }
}

fn run_command(cmd: &Command, out: &mut dyn Write) -> Result<RunReport, CliFailure> {
    match cmd {
        Command::Pinv(args) => cmd_pinv(args, out),
        Command::Lstsq(args) => cmd_lstsq(args, out),
        Command::Svd(args) => cmd_svd(args),
        Command::Polar(args) => cmd_polar(args),
        Command::Eig(args) => cmd_eig(args),
        Command::SingularValues(args) => cmd_singular_values(args, out),
        Command::Verify(args) => cmd_verify(args),
        Command::FredholmDemo(args) => cmd_fredholm(args, out),
    }
}

fn file_format(arg: Option<FormatArg>, path: &Path) -> FileFormat {
    match arg {
        Some(FormatArg::Csv) => FileFormat::Csv,
        Some(FormatArg::Json) => FileFormat::Json,
        None => FileFormat::from_path(path),
    }
}

fn read_input(common: &CommonArgs, path: &Path) -> Result<ComplexMatrix, CliFailure> {
    let file = MatrixFile {
        format: file_format(common.format, path),
        path: path.to_path_buf(),
    };
    Ok(read_matrix(&file)?)
}

/// Write `m` to `--out` when given; otherwise print it (text reports only,
/// to keep JSON report output parseable as a single object).
fn emit_matrix(
    m: &ComplexMatrix,
    common: &CommonArgs,
    out: &mut dyn Write,
) -> Result<(), CliFailure> {
    match &common.out {
        Some(path) => {
            let file = MatrixFile {
                format: file_format(common.format, path),
                path: path.clone(),
            };
            write_matrix(m, &file, common.precision)?;
            Ok(())
        }
        None => {
            if common.report == ReportArg::Text {
                write!(out, "{}", io::render_csv(m, common.precision))?;
            }
            Ok(())
        }
    }
}

/// Derive `base.TAG.ext` from `base.ext` for factor files.
fn tagged_path(path: &Path, tag: &str) -> PathBuf {
    let stem = path.file_stem().and_then(|s| s.to_str()).unwrap_or("out");
    let name = match path.extension().and_then(|e| e.to_str()) {
        Some(ext) => format!("{stem}.{tag}.{ext}"),
        None => format!("{stem}.{tag}"),
    };
    path.with_file_name(name)
}

fn write_tagged(
    m: &ComplexMatrix,
    common: &CommonArgs,
    tag: &str,
) -> Result<Option<PathBuf>, CliFailure> {
    match &common.out {
        None => Ok(None),
        Some(path) => {
            let target = tagged_path(path, tag);
            let file = MatrixFile {
                format: file_format(common.format, &target),
                path: target.clone(),
            };
            write_matrix(m, &file, common.precision)?;
            Ok(Some(target))
        }
    }
}

fn cmd_pinv(args: &PinvArgs, out: &mut dyn Write) -> Result<RunReport, CliFailure> {
    let a = read_input(&args.common, &args.common.input)?;
    let opts = args.route.to_options();
    let result = pinv::pinv(&a, &opts)?;
    let mut report = RunReport::new("pinv");
    report.route_used = result.route_used.to_string();
    args.route.record(&mut report);
    report.penrose_residuals = Some(result.report.clone());
    emit_matrix(&result.pinv, &args.common, out)?;
    Ok(report)
}

fn cmd_lstsq(args: &LstsqArgs, out: &mut dyn Write) -> Result<RunReport, CliFailure> {
    let a = read_input(&args.common, &args.common.input)?;
    let y = read_input(&args.common, &args.rhs)?;
    let opts = args.route.to_options();
    let pr = pinv::pinv(&a, &opts)?;
    let sol = lstsq::solution_with_pinv(&a, &y, &pr.pinv)?;
    let mut report = RunReport::new("lstsq");
    report.route_used = pr.route_used.to_string();
    args.route.record(&mut report);
    report.penrose_residuals = Some(pr.report.clone());
    report.record("residual_norm", sol.residual_norm);
    report.record("exact", if sol.exact { 1.0 } else { 0.0 });
    emit_matrix(&sol.x_min, &args.common, out)?;
    write_tagged(&sol.kernel_projector, &args.common, "kernel")?;
    Ok(report)
}

fn cmd_svd(args: &SvdArgs) -> Result<RunReport, CliFailure> {
    let a = read_input(&args.common, &args.common.input)?;
    let factors = if a.is_square() {
        decomp::svd_square(&a)?
    } else {
        decomp::svd_rect(&a)?
    };
    let mut report = RunReport::new("svd");
    report.route_used = if factors.shape.is_some() {
        "svd-embedding".to_string()
    } else {
        "svd-square".to_string()
    };
    report.record(
        "sigma_max",
        factors.singular_values.first().copied().unwrap_or(0.0),
    );
    report.record(
        "sigma_min",
        factors.singular_values.last().copied().unwrap_or(0.0),
    );
    write_tagged(&factors.v, &args.common, "V")?;
    write_tagged(&factors.sigma(), &args.common, "S")?;
    write_tagged(&factors.w, &args.common, "W")?;
    Ok(report)
}

fn cmd_polar(args: &PolarArgs) -> Result<RunReport, CliFailure> {
    let a = read_input(&args.common, &args.common.input)?;
    let factors = decomp::polar(&a)?;
    let mut report = RunReport::new("polar");
    report.route_used = "polar-right".to_string();
    write_tagged(&factors.unitary, &args.common, "U")?;
    write_tagged(&factors.psd_factor, &args.common, "P")?;
    Ok(report)
}

fn cmd_eig(args: &EigArgs) -> Result<RunReport, CliFailure> {
    let a = read_input(&args.common, &args.common.input)?;
    let eig = eigen::hermitian_eig(&a, tol::EIG_OFF_DIAG)?;
    let mut report = RunReport::new("eig");
    report.route_used = "jacobi".to_string();
    report.record("off_diag_tol", tol::EIG_OFF_DIAG);
    let values = ComplexMatrix::from_fn(eig.dim(), 1, |i, _| {
        num_complex::Complex64::new(eig.eigenvalues[i], 0.0)
    });
    write_tagged(&values, &args.common, "values")?;
    write_tagged(&eig.vectors, &args.common, "vectors")?;
    Ok(report)
}

fn cmd_singular_values(
    args: &SingularValuesArgs,
    out: &mut dyn Write,
) -> Result<RunReport, CliFailure> {
    let a = read_input(&args.common, &args.common.input)?;
    let values = decomp::singular_values(&a)?;
    let mut report = RunReport::new("singular-values");
    report.route_used = "gram-jacobi".to_string();
    report.record("count", values.len() as f64);
    let column = ComplexMatrix::from_fn(values.len(), 1, |i, _| {
        num_complex::Complex64::new(values[i], 0.0)
    });
    emit_matrix(&column, &args.common, out)?;
    Ok(report)
}

fn cmd_verify(args: &VerifyArgs) -> Result<RunReport, CliFailure> {
    let a = read_input(&args.common, &args.common.input)?;
    let b = read_input(&args.common, &args.candidate)?;
    let (penrose, accepted) = pinv::verify_penrose(&a, &b, args.tol)?;
    let mut report = RunReport::new("verify");
    report.route_used = "candidate".to_string();
    report.record("tol", args.tol);
    report.record("accepted", if accepted { 1.0 } else { 0.0 });
    report.penrose_residuals = Some(penrose);
    Ok(report)
}

fn cmd_fredholm(args: &FredholmArgs, out: &mut dyn Write) -> Result<RunReport, CliFailure> {
    let kernel = match args.kernel {
        KernelArg::Gaussian => Kernel::Gaussian,
        KernelArg::Lorentzian => Kernel::Lorentzian,
    };
    let true_solution = match args.true_solution {
        TrueSolutionArg::SinPi => TrueSolution::SinPi,
        TrueSolutionArg::Zero => TrueSolution::Zero,
    };
    let outcome = fredholm_demo(
        kernel,
        true_solution,
        args.grid_n,
        args.mu0,
        args.mu_factor,
        args.mu_steps,
    )?;
    let mut report = RunReport::new("fredholm-demo");
    report.route_used = "tikhonov".to_string();
    report.record("grid_n", args.grid_n as f64);
    report.record("mu_factor", args.mu_factor);
    report.record("final_rel_error", outcome.final_rel_error);
    for (k, step) in outcome.steps.iter().enumerate() {
        report.record(&format!("step_{k:02}_mu"), step.mu);
        report.record(&format!("step_{k:02}_rel_error"), step.rel_error);
        report.record(&format!("step_{k:02}_residual"), step.residual);
    }
    if let Some(path) = &args.out {
        let file = MatrixFile {
            format: match args.format {
                Some(FormatArg::Csv) => FileFormat::Csv,
                Some(FormatArg::Json) => FileFormat::Json,
                None => FileFormat::from_path(path),
            },
            path: path.clone(),
        };
        write_matrix(&outcome.recovered, &file, args.precision)?;
    } else if args.report == ReportArg::Text {
        write!(out, "{}", io::render_csv(&outcome.recovered, args.precision))?;
    }
    Ok(report)
}
