//! `veechmix`: weak-mixing certificates for interval exchanges and
//! translation flows, with numerical cross-checks.
//!
//! Exit codes: 0 success, 2 inconclusive weak-mixing check, 64 usage,
//! 65 bad input data, 70 internal failure.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

mod commands;
mod output;
mod parse;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("usage: {0}")]
    Usage(String),
    #[error("bad input: {0}")]
    Data(String),
    #[error("internal: {0}")]
    Internal(String),
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 64,
            CliError::Data(_) => 65,
            CliError::Internal(_) => 70,
        }
    }
}

macro_rules! data_errors {
    ($($t:ty),*) => {$(
        impl From<$t> for CliError {
            fn from(e: $t) -> Self {
                CliError::Data(e.to_string())
            }
        }
    )*};
}

data_errors!(
    veechmix::exactnum::ExactError,
    veechmix::iet::IetError,
    veechmix::surface::SurfaceError,
    veechmix::flow::FlowError,
    veechmix::weakmix::WeakMixError,
    veechmix::spectral::SpectralError
);

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    Exact,
    Float,
}

#[derive(Debug, Parser)]
#[command(name = "veechmix", version, about = "Weak mixing of interval exchanges and translation flows")]
pub struct Cli {
    /// Arithmetic for flow outputs
    #[arg(long, value_enum, default_value = "exact", global = true)]
    mode: ModeArg,
    /// Seed of every random stream
    #[arg(long, default_value_t = 0, global = true)]
    seed: u64,
    /// Directory for relative output paths
    #[arg(long, global = true)]
    out_dir: Option<PathBuf>,
    /// Print machine-readable JSON instead of text
    #[arg(long, global = true)]
    json: bool,
    /// Irrational basis symbols, `name=hint`, comma separated or repeated
    #[arg(long, global = true, value_name = "SYM=HINT")]
    basis: Vec<String>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Interval exchange combinatorics
    #[command(subcommand)]
    Iet(IetCmd),
    /// Build, unfold and draw translation surfaces
    #[command(subcommand)]
    Surface(SurfaceCmd),
    /// Straight-line flow and first return maps
    #[command(subcommand)]
    Flow(FlowCmd),
    /// Weak-mixing certificates
    #[command(subcommand)]
    Weakmix(WeakmixCmd),
    /// Numerical diagnostics
    #[command(subcommand)]
    Spectrum(SpectrumCmd),
    /// Permutation, surface and certificate end to end
    Demo(DemoArgs),
}

#[derive(Debug, Subcommand)]
pub enum IetCmd {
    /// sigma, its cycles and the vectors b_S
    Analyze {
        #[arg(long, conflicts_with = "iet", required_unless_present = "iet")]
        perm: Option<String>,
        #[arg(long)]
        iet: Option<PathBuf>,
    },
}

#[derive(Debug, Args)]
pub struct SurfaceOut {
    /// Write the surface JSON here
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Write an SVG drawing here
    #[arg(long)]
    pub svg: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum SurfaceCmd {
    /// Translation surface of a rational polygon
    Unfold {
        #[arg(long, conflicts_with = "preset", required_unless_present = "preset")]
        polygon: Option<PathBuf>,
        #[arg(long, value_parser = ["square", "triangle"])]
        preset: Option<String>,
        #[command(flatten)]
        out: SurfaceOut,
    },
    /// Rectangles over an IET with the given heights
    Suspend {
        #[arg(long)]
        iet: PathBuf,
        #[arg(long)]
        heights: PathBuf,
        /// Write the base section JSON here
        #[arg(long)]
        section_out: Option<PathBuf>,
        #[command(flatten)]
        out: SurfaceOut,
    },
    /// The five-pair slitted torus
    Fig1 {
        #[arg(long, conflicts_with_all = ["slits", "search"])]
        preset: Option<String>,
        #[arg(long, conflicts_with = "search")]
        slits: Option<PathBuf>,
        /// Rerun the placement search with this seed instead of loading
        #[arg(long)]
        search: Option<u64>,
        /// Write the slit list JSON here
        #[arg(long)]
        slits_out: Option<PathBuf>,
        /// Write the x-axis section JSON here
        #[arg(long)]
        section_out: Option<PathBuf>,
        #[command(flatten)]
        out: SurfaceOut,
    },
    /// The L-shaped horizontal-vertical surface
    Hv {
        #[arg(long, allow_hyphen_values = true)]
        a: String,
        #[arg(long, allow_hyphen_values = true)]
        b: String,
        #[command(flatten)]
        out: SurfaceOut,
    },
}

#[derive(Debug, Subcommand)]
pub enum FlowCmd {
    /// Follow one orbit
    Trace {
        #[arg(long)]
        surface: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        dir: String,
        #[arg(long, allow_hyphen_values = true)]
        start: String,
        #[arg(long, default_value_t = 0)]
        poly: usize,
        #[arg(long)]
        tmax: f64,
        #[arg(long)]
        svg: Option<PathBuf>,
    },
    /// First return map to a section
    ReturnMap {
        #[arg(long)]
        surface: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        dir: String,
        #[arg(long)]
        section: PathBuf,
    },
}

#[derive(Debug, Subcommand)]
pub enum WeakmixCmd {
    /// Two-cycle test; exit 0 certified, 2 inconclusive
    Check {
        #[arg(long, conflicts_with = "iet", required_unless_present = "iet", requires_all = ["dir", "section"])]
        surface: Option<PathBuf>,
        #[arg(long, allow_hyphen_values = true)]
        dir: Option<String>,
        #[arg(long)]
        section: Option<PathBuf>,
        #[arg(long, requires = "times")]
        iet: Option<PathBuf>,
        #[arg(long)]
        times: Option<PathBuf>,
    },
}

#[derive(Debug, Args)]
pub struct Dyn {
    #[arg(long)]
    pub iet: PathBuf,
    /// Roof values: sample the special flow instead of the map
    #[arg(long)]
    pub times: Option<PathBuf>,
    /// Flow time between samples when `--times` is given
    #[arg(long, default_value_t = 1.0)]
    pub dt: f64,
}

#[derive(Debug, Subcommand)]
pub enum SpectrumCmd {
    /// Correlations and the Cesaro mixing indicator
    Correlate {
        #[command(flatten)]
        dynamics: Dyn,
        #[arg(long, default_value = "char:1")]
        f: String,
        /// Defaults to `--f`
        #[arg(long)]
        g: Option<String>,
        #[arg(long, default_value_t = 10_000)]
        lags: usize,
        #[arg(long, default_value_t = 100_000)]
        samples: usize,
        #[arg(long, default_value_t = 1)]
        restarts: usize,
        #[arg(long)]
        csv: Option<PathBuf>,
        #[arg(long)]
        svg: Option<PathBuf>,
    },
    /// Twisted Birkhoff averages over a grid of alpha
    Weyl {
        #[command(flatten)]
        dynamics: Dyn,
        #[arg(long, default_value = "char:1")]
        f: String,
        #[arg(long)]
        alpha_grid: String,
        #[arg(long, default_value_t = 100_000)]
        n: usize,
        #[arg(long, default_value_t = 4)]
        samples: usize,
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Classification, eigenvalues and eigenfunction residuals
    Hv(HvArgs),
}

#[derive(Debug, Args)]
pub struct HvArgs {
    #[arg(long, allow_hyphen_values = true, default_value = "1")]
    pub a: String,
    #[arg(long, allow_hyphen_values = true, default_value = "2")]
    pub b: String,
    /// Flow angle in radians
    #[arg(long, allow_hyphen_values = true, default_value_t = std::f64::consts::FRAC_PI_4, conflicts_with = "dir")]
    pub theta: f64,
    /// Exact direction vector instead of an angle
    #[arg(long, allow_hyphen_values = true)]
    pub dir: Option<String>,
    /// Table covers |j|, |k| <= jk
    #[arg(long, default_value_t = 3)]
    pub jk: i64,
    #[arg(long, default_value_t = 100)]
    pub samples: usize,
    #[arg(long, default_value_t = 50.0)]
    pub tmax: f64,
}

#[derive(Debug, Args)]
pub struct DemoArgs {
    /// Replace the return times by (1,1,1,1)
    #[arg(long, conflicts_with = "hv")]
    pub times_equal: bool,
    /// Slit list to use instead of the shipped preset
    #[arg(long, conflicts_with = "hv")]
    pub slits: Option<PathBuf>,
    /// Run the horizontal-vertical variant
    #[arg(long)]
    pub hv: bool,
    #[command(flatten)]
    pub hv_args: HvArgs,
    /// Lags of the spectral report
    #[arg(long, default_value_t = 100_000)]
    pub lags: usize,
}

/// Die quietly on a closed stdout (`veechmix ... | head`) like other Unix
/// tools, instead of panicking inside `println!`.
fn restore_sigpipe() {
    #[cfg(unix)]
    // SAFETY: resetting a signal disposition to its default before any
    // other thread exists.
    unsafe {
        libc::signal(libc::SIGPIPE, libc::SIG_DFL);
    }
}

fn main() -> ExitCode {
    restore_sigpipe();
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 64 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match commands::run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("veechmix: {e}");
            ExitCode::from(e.code())
        }
    }
}
