use std::ffi::OsString;
use std::fs;
use std::path::PathBuf;
use std::str::FromStr;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};

use crate::output::Format;

#[derive(Debug, Parser)]
#[command(
    name = "starsdym",
    version,
    about = "Verification toolkit for the star-product self-dual Yang-Mills reductions",
    after_help = "Every option may also be given in a `--config FILE` of `key = value` lines; \
                  command-line flags take precedence. Output goes to --out, else to \
                  $STARSDYM_OUT_DIR/<command>.<ext>, else to stdout."
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Star product, Moyal bracket or Poisson bracket of two Fourier fields.
    Star(StarArgs),
    /// Check the properties of the sine-algebra basis `L_m` of sl(N).
    Basis(BasisArgs),
    /// Fold a Fourier field onto sl(N) with the homomorphism χ_N.
    Project(ProjectArgs),
    /// Cauchy-Kowalewska series of the example solution.
    Solve(SolveArgs),
    /// Residual of the deformed Husain-Park equation on the example, with its convergence order.
    VerifyMe(VerifyMeArgs),
    /// Chiral-equation residual of ϑ_N, su(N) membership and the N = 2 closed form.
    VerifyChiral(VerifyChiralArgs),
    /// Weyl component, self-duality and structure residual of the example heavenly metric.
    Curvature(CurvatureArgs),
    /// Distance of the ħ = 2π/N expansion from its classical limit as N grows.
    Converge(ConvergeArgs),
    /// Numerical check of the Bessel summation identities.
    BesselCheck(BesselCheckArgs),
    /// Per-point chiral field ϑ_N with residuals and matrix entries.
    Chiral(ChiralArgs),
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Star(_) => "star",
            Command::Basis(_) => "basis",
            Command::Project(_) => "project",
            Command::Solve(_) => "solve",
            Command::VerifyMe(_) => "verify-me",
            Command::VerifyChiral(_) => "verify-chiral",
            Command::Curvature(_) => "curvature",
            Command::Converge(_) => "converge",
            Command::BesselCheck(_) => "bessel-check",
            Command::Chiral(_) => "chiral",
        }
    }

    pub fn io(&self) -> &IoArgs {
        match self {
            Command::Star(a) => &a.io,
            Command::Basis(a) => &a.io,
            Command::Project(a) => &a.io,
            Command::Solve(a) => &a.io,
            Command::VerifyMe(a) => &a.io,
            Command::VerifyChiral(a) => &a.io,
            Command::Curvature(a) => &a.io,
            Command::Converge(a) => &a.io,
            Command::BesselCheck(a) => &a.io,
            Command::Chiral(a) => &a.io,
        }
    }
}

#[derive(Debug, Args)]
pub struct IoArgs {
    /// Output file.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Output format; each command has its own default.
    #[arg(long, value_enum)]
    pub format: Option<Format>,
}

/// Closed interval `start,end` with `start < end`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Extent {
    pub start: f64,
    pub end: f64,
}

impl FromStr for Extent {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let (a, b) = s
            .split_once(',')
            .ok_or_else(|| format!("expected `start,end`, got `{s}`"))?;
        let parse = |t: &str| t.trim().parse::<f64>().map_err(|e| format!("`{t}`: {e}"));
        let (start, end) = (parse(a)?, parse(b)?);
        if !(start.is_finite() && end.is_finite() && start < end) {
            return Err(format!("extent must satisfy start < end, got {start},{end}"));
        }
        Ok(Self { start, end })
    }
}

/// Comma-separated list of dimensions.
#[derive(Clone, Debug, PartialEq)]
pub struct DimensionList(pub Vec<usize>);

impl FromStr for DimensionList {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        s.split(',')
            .map(|t| t.trim().parse::<usize>().map_err(|e| format!("`{t}`: {e}")))
            .collect::<Result<_, _>>()
            .map(DimensionList)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum StarOp {
    Star,
    Moyal,
    Poisson,
}

#[derive(Debug, Args)]
#[command(args_override_self = true, allow_negative_numbers = true)]
pub struct StarArgs {
    /// First field as `[[m1, m2, re, im], ...]`.
    #[arg(long)]
    pub f: String,
    /// Second field as `[[m1, m2, re, im], ...]`.
    #[arg(long)]
    pub g: String,
    /// Deformation parameter (ignored for `poisson`).
    #[arg(long, default_value_t = 1.0)]
    pub hbar: f64,
    #[arg(long, value_enum, default_value_t = StarOp::Star)]
    pub op: StarOp,
    #[command(flatten)]
    pub io: IoArgs,
}

#[derive(Debug, Args)]
#[command(args_override_self = true, allow_negative_numbers = true)]
pub struct BasisArgs {
    #[arg(long, default_value_t = 3)]
    pub n: usize,
    #[command(flatten)]
    pub io: IoArgs,
}

#[derive(Debug, Args)]
#[command(args_override_self = true, allow_negative_numbers = true)]
pub struct ProjectArgs {
    #[arg(long)]
    pub n: usize,
    /// Field as `[[m1, m2, re, im], ...]`.
    #[arg(long)]
    pub modes: String,
    #[command(flatten)]
    pub io: IoArgs,
}

#[derive(Debug, Args)]
pub struct HbarArgs {
    /// Deformation parameter; 0 selects the Poisson bracket.
    #[arg(long, conflicts_with = "n")]
    pub hbar: Option<f64>,
    /// Use ħ = 2π/N.
    #[arg(long)]
    pub n: Option<usize>,
}

#[derive(Debug, Args)]
#[command(args_override_self = true, allow_negative_numbers = true)]
pub struct SolveArgs {
    #[command(flatten)]
    pub hbar: HbarArgs,
    /// Truncation order K.
    #[arg(long, default_value_t = 12)]
    pub k: usize,
    #[arg(long, default_value_t = 0.0)]
    pub w: f64,
    #[arg(long, default_value_t = 0.4)]
    pub z: f64,
    /// Largest allowed deviation of the truncated series from the closed form.
    #[arg(long, default_value_t = 1e-8)]
    pub tol: f64,
    #[command(flatten)]
    pub io: IoArgs,
}

#[derive(Debug, Args)]
pub struct GridArgs {
    /// `start,end` of the w axis.
    #[arg(long, default_value = "-1,1", allow_hyphen_values = true)]
    pub grid_w: Extent,
    /// `start,end` of the z axis.
    #[arg(long, default_value = "-1,1", allow_hyphen_values = true)]
    pub grid_z: Extent,
}

#[derive(Debug, Args)]
#[command(args_override_self = true, allow_negative_numbers = true)]
pub struct VerifyMeArgs {
    #[command(flatten)]
    pub hbar: HbarArgs,
    #[command(flatten)]
    pub grid: GridArgs,
    /// Spacing of the fine grid; the coarse grid uses 2h.
    #[arg(long, default_value_t = 1.0 / 64.0)]
    pub h: f64,
    /// Torus samples per axis.
    #[arg(long, default_value_t = 128)]
    pub torus: usize,
    #[arg(long, default_value_t = 48)]
    pub band_limit: u32,
    /// Allowed deviation of the observed order from 2.
    #[arg(long, default_value_t = 0.3)]
    pub order_tol: f64,
    #[command(flatten)]
    pub io: IoArgs,
}

#[derive(Debug, Args)]
#[command(args_override_self = true, allow_negative_numbers = true)]
pub struct VerifyChiralArgs {
    #[arg(long, default_value_t = 2)]
    pub n: usize,
    #[command(flatten)]
    pub grid: GridArgs,
    #[arg(long, default_value_t = 1.0 / 128.0)]
    pub h: f64,
    #[arg(long, default_value_t = 0.3)]
    pub order_tol: f64,
    /// su(N) membership tolerance.
    #[arg(long, default_value_t = 1e-11)]
    pub algebra_tol: f64,
    /// Tolerance against the N = 2 closed form.
    #[arg(long, default_value_t = 1e-9)]
    pub closed_form_tol: f64,
    #[command(flatten)]
    pub io: IoArgs,
}

#[derive(Debug, Args)]
#[command(args_override_self = true, allow_negative_numbers = true)]
pub struct CurvatureArgs {
    /// Number of random admissible points.
    #[arg(long, default_value_t = 10)]
    pub points: usize,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    /// Half-width of the sampled (p, q) box.
    #[arg(long, default_value_t = 1.0)]
    pub range: f64,
    /// Smallest admissible |cos q| and |cos(z cos q + p)|.
    #[arg(long, default_value_t = 0.05)]
    pub margin: f64,
    /// Step of the curvature finite differences.
    #[arg(long, default_value_t = 2.5e-4)]
    pub h: f64,
    /// Step of the first-structure finite differences.
    #[arg(long, default_value_t = 1e-4)]
    pub h_connection: f64,
    /// Relative tolerance on C1 and on the remaining Weyl components.
    #[arg(long, default_value_t = 1e-4)]
    pub tol: f64,
    #[command(flatten)]
    pub io: IoArgs,
}

#[derive(Debug, Args)]
#[command(args_override_self = true, allow_negative_numbers = true)]
pub struct ConvergeArgs {
    #[arg(long, default_value = "2,4,8,16,32")]
    pub n_list: DimensionList,
    #[command(flatten)]
    pub grid: GridArgs,
    #[arg(long, default_value_t = 0.5)]
    pub h: f64,
    #[arg(long, default_value_t = 32)]
    pub band_limit: u32,
    /// Allowed deviation of the fitted exponent from 2.
    #[arg(long, default_value_t = 0.3)]
    pub exponent_tol: f64,
    #[command(flatten)]
    pub io: IoArgs,
}

#[derive(Debug, Args)]
#[command(args_override_self = true, allow_negative_numbers = true)]
pub struct BesselCheckArgs {
    #[arg(long, default_value_t = 4.0)]
    pub z_max: f64,
    #[arg(long, default_value_t = 30)]
    pub terms: usize,
    #[arg(long, default_value_t = 1e-12)]
    pub tol: f64,
    #[command(flatten)]
    pub io: IoArgs,
}

#[derive(Debug, Args)]
#[command(args_override_self = true, allow_negative_numbers = true)]
pub struct ChiralArgs {
    #[arg(long, default_value_t = 2)]
    pub n: usize,
    #[command(flatten)]
    pub grid: GridArgs,
    #[arg(long, default_value_t = 1.0 / 16.0)]
    pub h: f64,
    /// Band limit of the Fourier expansion used for the fold-project cross-check.
    #[arg(long, default_value_t = 60)]
    pub band_limit: u32,
    #[command(flatten)]
    pub io: IoArgs,
}

/// Reads `key = value` lines, skipping blanks and `#` comments.
pub fn read_config(text: &str) -> Result<Vec<(String, String)>> {
    let mut pairs = Vec::new();
    for (k, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let Some((key, value)) = line.split_once('=') else {
            bail!("config line {}: expected `key = value`, got `{line}`", k + 1);
        };
        let key = key.trim().trim_start_matches("--");
        if key.is_empty() {
            bail!("config line {}: empty key", k + 1);
        }
        pairs.push((key.to_string(), value.trim().trim_matches('"').to_string()));
    }
    Ok(pairs)
}

/// Removes `--config FILE` from `args` and splices the file's settings in
/// front of the subcommand's own flags, so that explicit flags win.
pub fn expand_config(mut args: Vec<OsString>) -> Result<Vec<OsString>> {
    let mut config = None;
    let mut k = 1;
    while k < args.len() {
        let arg = args[k].to_string_lossy().into_owned();
        if arg == "--config" {
            if k + 1 >= args.len() {
                bail!("--config needs a file");
            }
            config = Some(PathBuf::from(args.remove(k + 1)));
            args.remove(k);
        } else if let Some(path) = arg.strip_prefix("--config=") {
            config = Some(PathBuf::from(path));
            args.remove(k);
        } else {
            k += 1;
        }
    }
    let Some(path) = config else {
        return Ok(args);
    };
    let text = fs::read_to_string(&path).with_context(|| format!("cannot read config {}", path.display()))?;
    let settings = read_config(&text)?;
    let Some(sub) = args.iter().skip(1).position(|a| !a.to_string_lossy().starts_with('-')) else {
        return Ok(args);
    };
    let at = sub + 2;
    let injected = settings.into_iter().map(|(k, v)| OsString::from(format!("--{k}={v}")));
    let tail = args.split_off(at);
    args.extend(injected);
    args.extend(tail);
    Ok(args)
}
