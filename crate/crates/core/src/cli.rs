//! Command-line front end. [`run`] is what the `melcert` binary calls; it
//! takes the argument list plus output sinks so tests can drive it directly.

use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::certificates::{
    certify_family_with, d7_param_check, CertifyOptions, FamilyCertification, D7_DEFAULT_PARAMS,
};
use crate::constructions::{
    case_4n1, case_4n3, case_4n_tensor, case_d11, case_d11_all, case_d7, case_even, construct_for_dimension,
    generalized_pauli,
};
use crate::eigenspaces::DEFAULT_KERNEL_TOL;
use crate::error::{Error, Result};
use crate::io::{FamilyFileV1, ReportFileV1};
use crate::sdp::{solve_primal, SolverConfig};
use crate::states::{check_mutual_orthogonality, Convention, FamilyTag, UnitarySet};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_UNSUPPORTED: i32 = 2;
pub const EXIT_NOT_CERTIFIED: i32 = 3;
pub const EXIT_MALFORMED: i32 = 4;
pub const EXIT_NO_CONVERGENCE: i32 = 5;

/// Largest `d` the SDP subcommand accepts without `--allow-large`.
pub const SDP_DEFAULT_MAX_D: usize = 8;

#[derive(Debug, Parser)]
#[command(
    name = "melcert",
    version,
    about = "Orthogonal maximally entangled families and PPT-indistinguishability certificates"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Build a family of unitaries and write it as JSON.
    Construct(ConstructArgs),
    /// Certify a family file and emit a report.
    Verify(VerifyArgs),
    /// Print the certified upper bound for a family file.
    Bound(VerifyArgs),
    /// Run the primal PPT SDP solver on a family file.
    Sdp(SdpArgs),
}

#[derive(Debug, Args)]
pub struct ConstructArgs {
    /// Local dimension; picks the default family when --family is absent.
    #[arg(long)]
    pub d: Option<usize>,
    #[arg(long)]
    pub family: Option<String>,
    /// Family parameter (block size for case-even, n in 4n+1 / 4n+3 / 4n).
    #[arg(long)]
    pub n: Option<usize>,
    /// Number of unitaries to keep.
    #[arg(long)]
    pub count: Option<usize>,
    /// Output file; JSON goes to stdout when omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum ConventionArg {
    U,
    Dagger,
    Both,
}

impl ConventionArg {
    fn conventions(self) -> Vec<Convention> {
        match self {
            ConventionArg::U => vec![Convention::U],
            ConventionArg::Dagger => vec![Convention::Dagger],
            ConventionArg::Both => Convention::BOTH.to_vec(),
        }
    }
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[arg(long = "in")]
    pub input: PathBuf,
    /// Margin tolerance for the verdict.
    #[arg(long, default_value_t = crate::certificates::DEFAULT_MARGIN_TOL)]
    pub tol: f64,
    #[arg(long, default_value_t = DEFAULT_KERNEL_TOL)]
    pub kernel_tol: f64,
    #[arg(long, value_enum, default_value_t = ConventionArg::Both)]
    pub convention: ConventionArg,
    /// Parameters of the two-parameter certificate used for the d = 7 family.
    #[arg(long, default_value_t = D7_DEFAULT_PARAMS.0)]
    pub lambda: f64,
    #[arg(long, default_value_t = D7_DEFAULT_PARAMS.1)]
    pub mu: f64,
    /// Report file; the report goes to stdout when omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SdpArgs {
    #[arg(long = "in")]
    pub input: PathBuf,
    #[arg(long)]
    pub iters: Option<usize>,
    #[arg(long)]
    pub step: Option<f64>,
    #[arg(long)]
    pub tol: Option<f64>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, value_enum, default_value_t = ConventionArg::U)]
    pub convention: ConventionArg,
    /// Permit d above the default limit.
    #[arg(long)]
    pub allow_large: bool,
}

/// Maps library errors onto process exit codes.
pub fn exit_code(err: &Error) -> i32 {
    match err {
        Error::UnsupportedDimension { .. } => EXIT_UNSUPPORTED,
        Error::NoConvergence(_) => EXIT_NO_CONVERGENCE,
        Error::Malformed(_)
        | Error::Json(_)
        | Error::InvalidDimension(_)
        | Error::CountOutOfRange { .. }
        | Error::InvalidParameters { .. }
        | Error::DimensionMismatch(_)
        | Error::NotUnitary { .. }
        | Error::NotNormalized { .. }
        | Error::NotHermitian { .. }
        | Error::NotMaximallyEntangled { .. } => EXIT_MALFORMED,
        _ => EXIT_FAILURE,
    }
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_MALFORMED } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if e.use_stderr() { err.write_all(text.as_bytes()) } else { out.write_all(text.as_bytes()) };
            return code;
        }
    };
    match dispatch(&cli.command, out, err) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            exit_code(&e)
        }
    }
}

fn dispatch(command: &Command, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32> {
    match command {
        Command::Construct(a) => construct(a, out, err),
        Command::Verify(a) => verify(a, out, err),
        Command::Bound(a) => bound(a, out),
        Command::Sdp(a) => sdp(a, out, err),
    }
}

fn need(value: Option<usize>, flag: &str, family: FamilyTag) -> Result<usize> {
    value.ok_or_else(|| Error::Malformed(format!("family {family} needs --{flag}")))
}

/// Resolves the construct flags to a family.
pub fn build_family(args: &ConstructArgs) -> Result<UnitarySet> {
    let Some(name) = &args.family else {
        let d = args.d.ok_or_else(|| Error::Malformed("need --d or --family".into()))?;
        let set = construct_for_dimension(d)?;
        return match args.count {
            Some(c) => set.truncated(c),
            None => Ok(set),
        };
    };
    let tag: FamilyTag = name.parse()?;
    let set = match tag {
        FamilyTag::CaseEven => {
            let n = match (args.n, args.d) {
                (Some(n), _) => n,
                (None, Some(d)) if d % 2 == 0 => d / 2,
                _ => return Err(Error::Malformed("case-even needs --n or an even --d".into())),
            };
            return case_even(n, args.count.unwrap_or(2 * n));
        }
        FamilyTag::Case4n1 => case_4n1(match (args.n, args.d) {
            (Some(n), _) => n,
            (None, Some(d)) if d % 4 == 1 => d / 4,
            _ => need(None, "n", tag)?,
        })?,
        FamilyTag::Case4n3 => case_4n3(match (args.n, args.d) {
            (Some(n), _) => n,
            (None, Some(d)) if d % 4 == 3 => d / 4,
            _ => need(None, "n", tag)?,
        })?,
        FamilyTag::D7 => case_d7()?,
        FamilyTag::D11 => {
            return match args.count {
                None | Some(11) => case_d11(),
                Some(12) => case_d11_all(),
                Some(c) => case_d11_all()?.truncated(c),
            }
        }
        FamilyTag::Tensor4n => case_4n_tensor(match (args.n, args.d) {
            (Some(n), _) => n,
            (None, Some(d)) if d % 4 == 0 => d / 4,
            _ => need(None, "n", tag)?,
        })?,
        FamilyTag::Pauli => {
            let d = need(args.d, "d", tag)?;
            return generalized_pauli(d, args.count.unwrap_or(d));
        }
        FamilyTag::User => return Err(Error::Malformed("the user family cannot be constructed".into())),
    };
    if let Some(d) = args.d {
        if d != set.d() {
            return Err(Error::Malformed(format!("family {tag} has d = {}, not {d}", set.d())));
        }
    }
    match args.count {
        Some(c) => set.truncated(c),
        None => Ok(set),
    }
}

fn construct(args: &ConstructArgs, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32> {
    let set = build_family(args)?;
    let orth = check_mutual_orthogonality(&set, 1e-10);
    let summary = format!(
        "constructed d={} family={} count={} max_offdiag={:.3e} max_unitarity_residual={:.3e}",
        set.d(),
        set.family(),
        set.len(),
        orth.max_off_diagonal,
        set.max_unitarity_residual()
    );
    let file = FamilyFileV1::from_set(&set);
    match &args.out {
        Some(path) => {
            file.write(path)?;
            writeln!(out, "{summary}")?;
        }
        None => {
            writeln!(out, "{}", file.to_json()?)?;
            writeln!(err, "{summary}")?;
        }
    }
    Ok(if orth.passed { EXIT_OK } else { EXIT_FAILURE })
}

fn certify(args: &VerifyArgs) -> Result<(FamilyCertification, f64)> {
    if !d7_param_check(args.lambda, args.mu) {
        return Err(Error::InvalidParameters { lambda: args.lambda, mu: args.mu });
    }
    if !(args.tol >= 0.0 && args.kernel_tol > 0.0) {
        return Err(Error::Malformed("tolerances must be positive".into()));
    }
    let set = FamilyFileV1::read(&args.input)?.to_set()?;
    let options = CertifyOptions {
        conventions: args.convention.conventions(),
        margin_tol: args.tol,
        kernel_tol: args.kernel_tol,
        d7_params: (args.lambda, args.mu),
    };
    Ok((certify_family_with(&set, &options)?, args.kernel_tol))
}

fn verdict_code(cert: &FamilyCertification) -> i32 {
    if cert.verdict().is_certified() {
        EXIT_OK
    } else {
        EXIT_NOT_CERTIFIED
    }
}

fn verify(args: &VerifyArgs, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32> {
    let (cert, kernel_tol) = certify(args)?;
    let report = ReportFileV1::from_certification(&cert, kernel_tol);
    let best = cert.best();
    let summary = format!(
        "d={} family={} convention={} intersection_dim={} bound={} min_margin={:.3e} verdict={}",
        cert.d,
        cert.family,
        best.convention,
        best.intersection_dim,
        best.report.bound,
        best.report.min_margin(),
        best.report.verdict
    );
    match &args.out {
        Some(path) => {
            std::fs::write(path, report.to_json()? + "\n")?;
            writeln!(out, "{summary}")?;
        }
        None => {
            writeln!(out, "{}", report.to_json()?)?;
            writeln!(err, "{summary}")?;
        }
    }
    Ok(verdict_code(&cert))
}

/// Renders a bound. Within 1e-12 of `1 − 2/d²` the closed-form value is
/// printed and named.
pub fn format_bound(value: f64, d: usize) -> String {
    let closed = 1.0 - 2.0 / (d * d) as f64;
    if (value - closed).abs() <= 1e-12 {
        format!("{closed} = 1 - 2/d^2")
    } else {
        format!("{value}")
    }
}

fn bound(args: &VerifyArgs, out: &mut dyn Write) -> Result<i32> {
    let (cert, _) = certify(args)?;
    writeln!(out, "{}", format_bound(cert.bound(), cert.d))?;
    Ok(verdict_code(&cert))
}

fn sdp(args: &SdpArgs, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32> {
    let set = FamilyFileV1::read(&args.input)?.to_set()?;
    let d = set.d();
    if d > SDP_DEFAULT_MAX_D && !args.allow_large {
        return Err(Error::UnsupportedDimension {
            d,
            reason: format!("sdp is limited to d <= {SDP_DEFAULT_MAX_D} without --allow-large"),
        });
    }
    let mut config = SolverConfig::for_dimension(d);
    if let Some(i) = args.iters {
        config.max_iterations = i;
    }
    if let Some(s) = args.step {
        config.step_size = s;
    }
    if let Some(t) = args.tol {
        config.stop_tolerance = t;
    }
    config.seed = args.seed;
    config.validate()?;
    let mut all_converged = true;
    for convention in args.convention.conventions() {
        let sol = solve_primal(&set.states(convention), &config)?;
        all_converged &= sol.converged;
        writeln!(
            out,
            "convention={convention} primal_value={} iterations={} converged={} residual_partition={:.3e} residual_psd={:.3e} residual_ppt={:.3e}",
            sol.primal_value,
            sol.iterations,
            sol.converged,
            sol.residuals.partition,
            sol.residuals.psd,
            sol.residuals.ppt
        )?;
        if !sol.converged {
            writeln!(err, "warning: stopping tolerance not reached after {} iterations", sol.iterations)?;
        }
    }
    Ok(if all_converged { EXIT_OK } else { EXIT_NO_CONVERGENCE })
}
