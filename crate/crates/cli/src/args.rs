//! Command-line definitions.

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

use crate::dto::Cplx;

#[derive(Debug, Parser)]
#[command(name = "xyep", version, about = "Spectra and exceptional points of the open non-Hermitian XY chain")]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalOpts,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Args, Serialize, Deserialize, PartialEq)]
pub struct GlobalOpts {
    /// Accept odd chain lengths.
    #[arg(long, global = true)]
    pub allow_odd: bool,
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Json, global = true)]
    pub format: Format,
    /// Write to this file instead of standard output.
    #[arg(long, global = true)]
    #[serde(skip)]
    pub output: Option<std::path::PathBuf>,
    /// Cap on worker threads.
    #[arg(long, env = "XYEP_THREADS", global = true)]
    #[serde(skip)]
    pub threads: Option<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
    Svg,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Quasi-energies at one anisotropy.
    Quasi(QuasiArgs),
    /// Full 2^L spectrum, optionally compared with exact diagonalization.
    Spectrum(SpectrumArgs),
    /// Exceptional-point census.
    Eps(EpsArgs),
    /// Distance of the EP rings from the unit circle.
    Rings(RingsArgs),
    /// Closest quasi-energy gap over a lambda grid.
    Gap(GapArgs),
    /// Conjugation symmetry along the imaginary lambda axis.
    Pt(PtArgs),
    /// Winding-number phase diagram.
    Phase(PhaseArgs),
    /// Check EP character of the census or of one lambda.
    Verify(VerifyArgs),
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Quasi(_) => "quasi",
            Command::Spectrum(_) => "spectrum",
            Command::Eps(_) => "eps",
            Command::Rings(_) => "rings",
            Command::Gap(_) => "gap",
            Command::Pt(_) => "pt",
            Command::Phase(_) => "phase",
            Command::Verify(_) => "verify",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum QuasiRoute {
    /// Eigenvalues of the quasi-energy matrix.
    Matrix,
    /// Roots of the quasi-momentum condition.
    Momentum,
}

#[derive(Debug, Clone, Args, Serialize, Deserialize, PartialEq)]
pub struct QuasiArgs {
    /// Chain length.
    #[arg(long = "L", alias = "size")]
    pub size: usize,
    /// Anisotropy as "re,im".
    #[arg(long, value_parser = parse_complex, allow_hyphen_values = true)]
    pub lambda: Cplx,
    #[arg(long, value_enum, default_value_t = QuasiRoute::Matrix)]
    pub route: QuasiRoute,
}

#[derive(Debug, Clone, Args, Serialize, Deserialize, PartialEq)]
pub struct SpectrumArgs {
    #[arg(long = "L", alias = "size")]
    pub size: usize,
    #[arg(long, value_parser = parse_complex, allow_hyphen_values = true)]
    pub lambda: Cplx,
    /// Also diagonalise the full Hamiltonian and match the two spectra.
    #[arg(long)]
    pub compare_ed: bool,
    /// Matching tolerance.
    #[arg(long, default_value_t = 1e-8)]
    pub tol: f64,
}

#[derive(Debug, Clone, Args, Serialize, Deserialize, PartialEq)]
pub struct EpsArgs {
    #[arg(long = "L", alias = "size")]
    pub size: usize,
    /// Width of the imaginary-axis filter in |Re lambda|.
    #[arg(long, default_value_t = xyep::pt::DEFAULT_AXIS_TOL)]
    pub axis_tol: f64,
    /// Only report EPs on the imaginary axis.
    #[arg(long)]
    pub on_axis: bool,
}

#[derive(Debug, Clone, Args, Serialize, Deserialize, PartialEq)]
pub struct RingsArgs {
    /// Chain lengths, comma separated.
    #[arg(long = "L", alias = "size", value_delimiter = ',', required = true)]
    pub sizes: Vec<usize>,
}

/// Rectangle "re_min,re_max,im_min,im_max".
#[derive(Debug, Clone, Copy, Serialize, Deserialize, PartialEq)]
pub struct Grid {
    pub re_min: f64,
    pub re_max: f64,
    pub im_min: f64,
    pub im_max: f64,
}

#[derive(Debug, Clone, Args, Serialize, Deserialize, PartialEq)]
pub struct GapArgs {
    #[arg(long = "L", alias = "size")]
    pub size: usize,
    #[arg(long, value_parser = parse_grid, allow_hyphen_values = true, default_value = "-2.5,2.5,-2.5,2.5")]
    pub grid: Grid,
    /// Points per axis.
    #[arg(long, default_value_t = 101)]
    pub res: usize,
}

/// Inclusive sweep "start:stop:count".
#[derive(Debug, Clone, Copy, Serialize, Deserialize, PartialEq)]
pub struct Sweep {
    pub start: f64,
    pub stop: f64,
    pub count: usize,
}

impl Sweep {
    pub fn values(&self) -> Vec<f64> {
        if self.count == 1 {
            return vec![self.start];
        }
        (0..self.count)
            .map(|i| self.start + (self.stop - self.start) * i as f64 / (self.count - 1) as f64)
            .collect()
    }
}

#[derive(Debug, Clone, Args, Serialize, Deserialize, PartialEq)]
pub struct PtArgs {
    #[arg(long = "L", alias = "size")]
    pub size: usize,
    /// Values of Im lambda.
    #[arg(long, value_parser = parse_sweep, allow_hyphen_values = true, default_value = "0.1:3:30")]
    pub sweep: Sweep,
    /// Use exact diagonalization instead of quasi-energy sums.
    #[arg(long)]
    pub ed: bool,
    #[arg(long, default_value_t = 1e-9)]
    pub tol: f64,
}

#[derive(Debug, Clone, Args, Serialize, Deserialize, PartialEq)]
pub struct PhaseArgs {
    #[arg(long, value_parser = parse_grid, allow_hyphen_values = true, default_value = "-1.5,1.5,-1.5,1.5")]
    pub grid: Grid,
    #[arg(long, default_value_t = 101)]
    pub res: usize,
    /// Momentum samples per winding evaluation.
    #[arg(long, default_value_t = 256)]
    pub nk: usize,
}

#[derive(Debug, Clone, Args, Serialize, Deserialize, PartialEq)]
pub struct VerifyArgs {
    #[arg(long = "L", alias = "size")]
    pub size: usize,
    /// Check this point instead of the whole census.
    #[arg(long, value_parser = parse_complex, allow_hyphen_values = true)]
    pub lambda: Option<Cplx>,
    /// Also check the full Hamiltonian (L <= 10).
    #[arg(long)]
    pub hamiltonian: bool,
    #[arg(long, default_value_t = xyep::ep::DEFAULT_VERIFY_TOL)]
    pub tol: f64,
}

fn parse_f64(s: &str) -> Result<f64, String> {
    let v: f64 = s.trim().parse().map_err(|_| format!("not a number: {s:?}"))?;
    if !v.is_finite() {
        return Err(format!("not finite: {s:?}"));
    }
    Ok(v)
}

/// `"re,im"` or a bare real number.
pub fn parse_complex(s: &str) -> Result<Cplx, String> {
    match s.split(',').collect::<Vec<_>>().as_slice() {
        [re] => Ok(Cplx { re: parse_f64(re)?, im: 0.0 }),
        [re, im] => Ok(Cplx { re: parse_f64(re)?, im: parse_f64(im)? }),
        _ => Err(format!("expected \"re,im\", got {s:?}")),
    }
}

pub fn parse_grid(s: &str) -> Result<Grid, String> {
    let v = s.split(',').map(parse_f64).collect::<Result<Vec<_>, _>>()?;
    match v.as_slice() {
        &[re_min, re_max, im_min, im_max] if re_min <= re_max && im_min <= im_max => Ok(Grid {
            re_min,
            re_max,
            im_min,
            im_max,
        }),
        &[_, _, _, _] => Err(format!("grid bounds must be increasing: {s:?}")),
        _ => Err(format!("expected \"re_min,re_max,im_min,im_max\", got {s:?}")),
    }
}

pub fn parse_sweep(s: &str) -> Result<Sweep, String> {
    match s.split(':').collect::<Vec<_>>().as_slice() {
        [a, b, n] => {
            let count: usize = n.trim().parse().map_err(|_| format!("bad count in {s:?}"))?;
            if count == 0 {
                return Err("sweep count must be positive".into());
            }
            Ok(Sweep {
                start: parse_f64(a)?,
                stop: parse_f64(b)?,
                count,
            })
        }
        _ => Err(format!("expected \"start:stop:count\", got {s:?}")),
    }
}
