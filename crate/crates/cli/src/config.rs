//! Command-line arguments, flat JSON config files and their merge.

use crate::error::CliError;
use archipelago::geometry::Curve;
use archipelago::kernels::{KernelMode, LemniscateSource, R1Mode, TypoReading};
use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};
use std::path::{Path, PathBuf};

/// Config file keys accepted by at least one command.
pub const KNOWN_KEYS: &[&str] = &[
    "out", "format", "precision_bits", "threads", "n", "c", "a", "d", "which", "step", "mode", "layout", "lo", "hi",
    "grid", "w", "z", "typo", "source", "r1", "zeta", "suite", "all", "quick", "randomize", "seed", "extra_points",
    "suite_config",
];

#[derive(Parser, Debug)]
#[command(name = "archipelago", version, about = "Correlation kernels of induced Ginibre and lemniscate ensembles")]
pub struct Cli {
    #[command(flatten)]
    pub global: Global,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Trace a skeleton curve or droplet boundary to CSV/JSON.
    Curve(CurveArgs),
    /// Sample a kernel over a grid of point pairs.
    Kernel(KernelArgs),
    /// Sample the Berezin kernel w -> B_N(z, w) over a grid.
    Berezin(BerezinArgs),
    /// Tabulate exact values against the large-N expansions at one N.
    Expansions(ExpansionArgs),
    /// Run verification suites and report errors, rates and verdicts.
    Verify(VerifyArgs),
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Csv,
    Json,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Layout {
    /// Every (z, w) pair of grid points.
    #[default]
    Product,
    /// Pairs (z, z).
    Diagonal,
    /// Pairs (z, w) with w fixed by --w.
    Row,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BerezinMode {
    #[default]
    Exact,
    Asymptotic,
}

#[derive(Args, Debug, Default, Serialize, Deserialize)]
#[serde(default)]
pub struct Global {
    /// Flat JSON file of option values; flags override it.
    #[arg(long, global = true)]
    #[serde(skip)]
    pub params_file: Option<PathBuf>,
    /// Output file (stdout when absent).
    #[arg(long, global = true)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub out: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub format: Option<Format>,
    /// Working precision of the exact Gram routes.
    #[arg(long, global = true)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub precision_bits: Option<u32>,
    /// Worker threads; 0 picks the number of cores.
    #[arg(long, global = true)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub threads: Option<usize>,
}

#[derive(Args, Debug, Default, Serialize, Deserialize)]
#[serde(default)]
pub struct Ensemble {
    /// Scaling parameter N.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
    /// Charge c > -1.
    #[arg(long, allow_hyphen_values = true)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub c: Option<f64>,
    /// Charge location (induced) or lemniscate shift.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub a: Option<f64>,
    /// Degree of the lemniscate potential; 1 is the induced ensemble.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub d: Option<u32>,
}

#[derive(Args, Debug, Default, Serialize, Deserialize)]
#[serde(default)]
pub struct CurveArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub ensemble: Ensemble,
    /// S1, Sa, Sa_d or droplet.
    #[arg(long, value_parser = parse_curve)]
    #[serde(skip_serializing_if = "Option::is_none", deserialize_with = "de_curve")]
    pub which: Option<Curve>,
    /// Largest distance between consecutive vertices.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub step: Option<f64>,
}

#[derive(Args, Debug, Default, Serialize, Deserialize)]
#[serde(default)]
pub struct KernelArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub ensemble: Ensemble,
    /// exact_tilde, exact_hat, exact_full_Q, exact_lemniscate, asym_thm11, asym_thm13 or limit_edge.
    #[arg(long, value_parser = parse_mode)]
    #[serde(skip_serializing_if = "Option::is_none", deserialize_with = "de_mode")]
    pub mode: Option<KernelMode>,
    #[arg(long, value_enum)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub layout: Option<Layout>,
    #[command(flatten)]
    #[serde(flatten)]
    pub grid: GridArgs,
    /// Fixed second point of the row layout, "re,im".
    #[arg(long, value_parser = parse_complex, allow_hyphen_values = true)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub w: Option<Complex64>,
    /// corrected or literal reading of the lemniscate denominator.
    #[arg(long, value_parser = parse_typo)]
    #[serde(skip_serializing_if = "Option::is_none", deserialize_with = "de_typo")]
    pub typo: Option<TypoReading>,
    /// gram or multifold construction of the exact lemniscate kernel.
    #[arg(long, value_parser = parse_source)]
    #[serde(skip_serializing_if = "Option::is_none", deserialize_with = "de_source")]
    pub source: Option<LemniscateSource>,
}

#[derive(Args, Debug, Default, Serialize, Deserialize)]
#[serde(default)]
pub struct GridArgs {
    /// Lower-left corner of the grid, "re,im".
    #[arg(long, value_parser = parse_complex, allow_hyphen_values = true)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lo: Option<Complex64>,
    /// Upper-right corner of the grid, "re,im".
    #[arg(long, value_parser = parse_complex, allow_hyphen_values = true)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub hi: Option<Complex64>,
    /// Points per axis.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub grid: Option<usize>,
}

#[derive(Args, Debug, Default, Serialize, Deserialize)]
#[serde(default)]
pub struct BerezinArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub ensemble: Ensemble,
    /// exact kernel or macroscopic asymptotic.
    #[arg(long, value_enum)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mode: Option<BerezinMode>,
    /// Fixed point z, "re,im"; defaults to (a - 1)^(1/d).
    #[arg(long, value_parser = parse_complex, allow_hyphen_values = true)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub z: Option<Complex64>,
    /// exact diagonal or density approximation dN Delta V(z)/2 for R_1(z).
    #[arg(long, value_parser = parse_r1)]
    #[serde(skip_serializing_if = "Option::is_none", deserialize_with = "de_r1")]
    pub r1: Option<R1Mode>,
    #[command(flatten)]
    #[serde(flatten)]
    pub grid: GridArgs,
    /// gram or multifold construction of the exact lemniscate kernel.
    #[arg(long, value_parser = parse_source)]
    #[serde(skip_serializing_if = "Option::is_none", deserialize_with = "de_source")]
    pub source: Option<LemniscateSource>,
}

#[derive(Args, Debug, Default, Serialize, Deserialize)]
#[serde(default)]
pub struct ExpansionArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub ensemble: Ensemble,
    /// Evaluation point outside S_a, "re,im".
    #[arg(long, value_parser = parse_complex, allow_hyphen_values = true)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub z: Option<Complex64>,
    /// Argument of Q(N + k, N zeta), outside S_1.
    #[arg(long, value_parser = parse_complex, allow_hyphen_values = true)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub zeta: Option<Complex64>,
}

#[derive(Args, Debug, Default, Serialize, Deserialize)]
#[serde(default)]
pub struct VerifyArgs {
    /// Suite to run; repeatable.
    #[arg(long)]
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub suite: Vec<String>,
    /// Run every suite.
    #[arg(long)]
    #[serde(skip_serializing_if = "is_false")]
    pub all: bool,
    /// Reduced sizes.
    #[arg(long)]
    #[serde(skip_serializing_if = "is_false")]
    pub quick: bool,
    /// Add seeded random test points to the fixed lists.
    #[arg(long)]
    #[serde(skip_serializing_if = "is_false")]
    pub randomize: bool,
    /// Seed of the random points; 0 when absent.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    /// Random points added per list; 4 when absent.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub extra_points: Option<usize>,
    /// Charge of the induced family.
    #[arg(long, allow_hyphen_values = true)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub c: Option<f64>,
    /// Charge location of the induced family.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub a: Option<f64>,
    /// JSON file with the full suite configuration.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub suite_config: Option<PathBuf>,
}

// file values accept the same spellings as the flags
macro_rules! lenient {
    ($name:ident, $parse:ident, $t:ty) => {
        fn $name<'de, D: serde::Deserializer<'de>>(d: D) -> Result<Option<$t>, D::Error> {
            let s: Option<String> = Option::deserialize(d)?;
            s.map(|s| $parse(&s).map_err(serde::de::Error::custom)).transpose()
        }
    };
}

lenient!(de_curve, parse_curve, Curve);
lenient!(de_mode, parse_mode, KernelMode);
lenient!(de_source, parse_source, LemniscateSource);
lenient!(de_typo, parse_typo, TypoReading);
lenient!(de_r1, parse_r1, R1Mode);

fn is_false(b: &bool) -> bool {
    !*b
}

fn parse_with<T>(s: &str, f: impl Fn(&str) -> Option<T>, what: &str) -> Result<T, String> {
    f(s).ok_or_else(|| format!("unknown {what} '{s}'"))
}

fn parse_curve(s: &str) -> Result<Curve, String> {
    parse_with(s, Curve::parse, "curve")
}

fn parse_mode(s: &str) -> Result<KernelMode, String> {
    parse_with(s, KernelMode::parse, "kernel mode")
}

fn parse_source(s: &str) -> Result<LemniscateSource, String> {
    parse_with(s, LemniscateSource::parse, "lemniscate source")
}

fn parse_typo(s: &str) -> Result<TypoReading, String> {
    parse_with(
        s,
        |s| match s {
            "corrected" => Some(TypoReading::Corrected),
            "literal" => Some(TypoReading::Literal),
            _ => None,
        },
        "typo reading",
    )
}

fn parse_r1(s: &str) -> Result<R1Mode, String> {
    parse_with(
        s,
        |s| match s {
            "exact" => Some(R1Mode::Exact),
            "density" | "density_approx" => Some(R1Mode::DensityApprox),
            _ => None,
        },
        "R_1 mode",
    )
}

/// `"re,im"` or a bare real number.
pub fn parse_complex(s: &str) -> Result<Complex64, String> {
    let num = |t: &str| t.trim().parse::<f64>().map_err(|_| format!("'{s}' is not a complex number re,im"));
    match s.split_once(',') {
        Some((re, im)) => Ok(Complex64::new(num(re)?, num(im)?)),
        None => Ok(Complex64::new(num(s)?, 0.0)),
    }
}

/// Reads a flat JSON object and rejects keys no command knows.
pub fn load_file(path: &Path) -> Result<Map<String, Value>, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Usage(format!("cannot read params file {}: {e}", path.display())))?;
    let value: Value = serde_json::from_str(&text)
        .map_err(|e| CliError::Usage(format!("params file {} is not valid JSON: {e}", path.display())))?;
    let Value::Object(map) = value else {
        return Err(CliError::Usage(format!("params file {} must hold a JSON object", path.display())));
    };
    if let Some(k) = map.keys().find(|k| !KNOWN_KEYS.contains(&k.as_str())) {
        return Err(CliError::Usage(format!("unknown key '{k}' in params file {}", path.display())));
    }
    Ok(map)
}

/// Overlays the flags in `args` on `file` and reads the result back.
pub fn merge<T: Serialize + DeserializeOwned>(file: &Map<String, Value>, args: &T) -> Result<T, CliError> {
    let mut merged = file.clone();
    if let Value::Object(flags) = serde_json::to_value(args).map_err(|e| CliError::Usage(e.to_string()))? {
        merged.extend(flags);
    }
    serde_json::from_value(Value::Object(merged)).map_err(|e| CliError::Usage(format!("bad config value: {e}")))
}
