//! `kleinian`: curve data, periods, function values, identity verification
//! and CSV/JSON dumps for the genus-2 curve `V` and its elliptic quotients.

mod commands;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use kleinian::{CurveV, Tolerance, C64};

/// Exit codes.
pub const EXIT_FAIL: u8 = 1;
pub const EXIT_INPUT: u8 = 2;
pub const EXIT_CONVERGENCE: u8 = 3;

#[derive(Debug, Parser)]
#[command(
    name = "kleinian",
    version,
    about = "Genus-2 Kleinian functions and their elliptic reduction"
)]
struct Cli {
    #[command(flatten)]
    curve: CurveArgs,
    /// relative quadrature tolerance (absolute tolerance is a tenth of it)
    #[arg(long, global = true, default_value_t = 1e-13)]
    tol: f64,
    /// write to this file instead of stdout
    #[arg(long, global = true)]
    output: Option<PathBuf>,
    #[command(subcommand)]
    cmd: Command,
}

#[derive(Debug, Args)]
struct CurveArgs {
    /// alpha as "re,im"
    #[arg(long, global = true, value_parser = parse_complex, allow_hyphen_values = true)]
    alpha: Option<C64>,
    /// beta as "re,im"
    #[arg(long, global = true, value_parser = parse_complex, allow_hyphen_values = true)]
    beta: Option<C64>,
    /// e1 of the sextic model, instead of alpha and beta
    #[arg(long, global = true, value_parser = parse_complex, allow_hyphen_values = true)]
    e1: Option<C64>,
    #[arg(long, global = true, value_parser = parse_complex, allow_hyphen_values = true)]
    e2: Option<C64>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Derived constants of the curve
    Curve {
        #[command(subcommand)]
        what: CurveCmd,
    },
    /// Period matrices of V, E1, E2 and the companion curves
    Periods,
    /// Function values at a point
    Eval {
        #[command(subcommand)]
        what: EvalCmd,
    },
    /// Run verification suites and print a JSON report
    Verify(VerifyArgs),
    /// CSV of Kleinian functions and Kummer coordinates at sample points
    Kummer(SampleArgs),
    /// CSV of KdV residuals over a grid around a point
    Kdv(KdvArgs),
}

#[derive(Debug, Subcommand)]
enum CurveCmd {
    Info,
}

#[derive(Debug, Subcommand)]
pub enum EvalCmd {
    /// P_jk or P_jkl of V
    Wp {
        /// subscripts such as 11, 13, 333; all seven when omitted
        #[arg(long)]
        jk: Option<String>,
        /// u1 and u3 as "re,im"
        #[arg(long, num_args = 2, required = true, value_parser = parse_complex, allow_hyphen_values = true)]
        u: Vec<C64>,
    },
    /// sigma of V
    Sigma {
        #[arg(long, num_args = 2, required = true, value_parser = parse_complex, allow_hyphen_values = true)]
        u: Vec<C64>,
    },
    /// Weierstrass P and P' of E_i
    #[command(name = "wpE")]
    WpE {
        #[arg(long, value_parser = clap::value_parser!(u8).range(1..=2))]
        i: u8,
        #[arg(long, value_parser = parse_complex, allow_hyphen_values = true)]
        v: C64,
    },
    /// sn, cn, dn with modulus kappa_i
    Sn {
        #[arg(long, value_parser = clap::value_parser!(u8).range(1..=2))]
        i: u8,
        #[arg(long, value_parser = parse_complex, allow_hyphen_values = true)]
        v: C64,
    },
    /// al_j on the companion curve of E_i
    Al {
        #[arg(long, value_parser = clap::value_parser!(u8).range(1..=2))]
        i: u8,
        #[arg(long, value_parser = clap::value_parser!(u8).range(1..=3))]
        j: u8,
        #[arg(long, value_parser = parse_complex, allow_hyphen_values = true)]
        v: C64,
    },
}

#[derive(Debug, Args)]
pub struct SampleArgs {
    #[arg(long, default_value_t = 20, value_parser = clap::value_parser!(u64).range(1..))]
    pub samples: u64,
    #[arg(long, default_value_t = 42)]
    pub seed: u64,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    /// all | periods | sigma | fundamental | f-formulas | restrictions |
    /// addition | inversion | lattice | kummer | kdv | humbert
    #[arg(long, default_value = "all")]
    pub suite: String,
    #[command(flatten)]
    pub sample: SampleArgs,
    /// add this to lambda4 in the fundamental relations
    #[arg(long, allow_hyphen_values = true)]
    pub perturb_lambda4: Option<f64>,
}

#[derive(Debug, Args)]
pub struct KdvArgs {
    /// grid center u1 and u3 as "re,im"
    #[arg(long, num_args = 2, value_parser = parse_complex, allow_hyphen_values = true,
          default_values = ["0.21,-0.13", "0.04,0.09"])]
    pub center: Vec<C64>,
    /// half-width of the grid in u1
    #[arg(long, default_value_t = 0.05)]
    pub radius: f64,
    /// points per side
    #[arg(long, default_value_t = 5, value_parser = clap::value_parser!(u64).range(1..=200))]
    pub n: u64,
    /// finite-difference step
    #[arg(long, default_value_t = 1e-3)]
    pub step: f64,
}

pub fn parse_complex(s: &str) -> Result<C64, String> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    let num = |t: &str| t.parse::<f64>().map_err(|_| format!("'{t}' is not a number"));
    let z = match parts.as_slice() {
        [re] => C64::new(num(re)?, 0.0),
        [re, im] => C64::new(num(re)?, num(im)?),
        _ => return Err(format!("expected \"re,im\", got '{s}'")),
    };
    if !(z.re.is_finite() && z.im.is_finite()) {
        return Err(format!("'{s}' is not finite"));
    }
    Ok(z)
}

/// Failure with its exit code.
#[derive(Debug)]
pub struct Failure {
    pub code: u8,
    pub message: String,
}

impl Failure {
    pub fn input(m: impl Into<String>) -> Self {
        Failure {
            code: EXIT_INPUT,
            message: m.into(),
        }
    }
}

impl From<kleinian::Error> for Failure {
    fn from(e: kleinian::Error) -> Self {
        use kleinian::Error as E;
        let code = match e {
            E::NonConvergence(_) | E::CalibrationFailure(_) | E::DegenerateLattice | E::SingularSample(_) => {
                EXIT_CONVERGENCE
            }
            _ => EXIT_INPUT,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure {
            code: EXIT_INPUT,
            message: format!("output: {e}"),
        }
    }
}

impl From<csv::Error> for Failure {
    fn from(e: csv::Error) -> Self {
        Failure {
            code: EXIT_INPUT,
            message: format!("csv: {e}"),
        }
    }
}

impl From<serde_json::Error> for Failure {
    fn from(e: serde_json::Error) -> Self {
        Failure {
            code: EXIT_INPUT,
            message: format!("json: {e}"),
        }
    }
}

fn curve_from(args: &CurveArgs) -> Result<CurveV, Failure> {
    match (args.alpha, args.beta, args.e1, args.e2) {
        (Some(a), Some(b), None, None) => Ok(CurveV::new(a, b)?),
        (None, None, Some(e1), Some(e2)) => Ok(CurveV::from_e(e1, e2)?),
        (None, None, None, None) => Err(Failure::input("give --alpha and --beta, or --e1 and --e2")),
        _ => Err(Failure::input("use either both of --alpha/--beta or both of --e1/--e2")),
    }
}

fn run(cli: Cli) -> Result<u8, Failure> {
    let tol = Tolerance::new(0.1 * cli.tol, cli.tol, 16).map_err(Failure::from)?;
    let curve = curve_from(&cli.curve)?;
    let mut out = output::sink(cli.output.as_deref())?;
    let code = match cli.cmd {
        Command::Curve { what: CurveCmd::Info } => commands::curve_info(&curve, &mut out)?,
        Command::Periods => commands::periods(&curve, &tol, &mut out)?,
        Command::Eval { what } => commands::eval(&curve, &tol, what, &mut out)?,
        Command::Verify(a) => commands::verify(&curve, &tol, &a, &mut out)?,
        Command::Kummer(a) => commands::kummer(&curve, &tol, &a, &mut out)?,
        Command::Kdv(a) => commands::kdv(&curve, &tol, &a, &mut out)?,
    };
    out.flush()?;
    Ok(code)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
