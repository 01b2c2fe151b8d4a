//! Run configuration: flags, then `PENTAREC_*` environment variables, then an
//! optional TOML file, then defaults.

use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use clap::Args;
use pentarec::dirichlet::FloatMode;
use serde::{Deserialize, Serialize};

pub const DEFAULT_PREC: i64 = 60;
pub const DEFAULT_DEPTH: u32 = pentarec::rademacher::DEFAULT_DEPTH;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Json,
    Csv,
    Text,
}

impl FromStr for Format {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "json" => Ok(Format::Json),
            "csv" => Ok(Format::Csv),
            "text" => Ok(Format::Text),
            _ => Err(format!("unknown format {s:?}; expected json, csv or text")),
        }
    }
}

impl fmt::Display for Format {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Format::Json => "json",
            Format::Csv => "csv",
            Format::Text => "text",
        })
    }
}

/// Options shared by every command. `None` means "not given on the command
/// line or in the environment".
#[derive(Args, Clone, Debug, Default)]
pub struct GlobalArgs {
    /// Number of q-coefficients to compute.
    #[arg(long, global = true, env = "PENTAREC_PREC")]
    pub prec: Option<i64>,
    /// Truncation M of the sum over m in the Dirichlet double sum.
    #[arg(long = "big-m", global = true, env = "PENTAREC_BIG_M")]
    pub big_m: Option<u32>,
    /// Truncation N of the Dirichlet partial sums.
    #[arg(long = "big-n", global = true, env = "PENTAREC_BIG_N")]
    pub big_n: Option<u64>,
    /// Largest modulus c in the Kloosterman-Bessel series.
    #[arg(long = "depth-c", global = true, env = "PENTAREC_DEPTH_C")]
    pub depth_c: Option<u32>,
    /// Floating arithmetic for the Dirichlet sums: binary64 or double-double.
    #[arg(long = "float-mode", global = true, env = "PENTAREC_FLOAT_MODE")]
    pub float_mode: Option<FloatMode>,
    /// Output format: json, csv or text.
    #[arg(long, global = true, env = "PENTAREC_FORMAT")]
    pub format: Option<Format>,
    /// Write output to this file instead of standard output.
    #[arg(long, global = true, env = "PENTAREC_OUT")]
    pub out: Option<PathBuf>,
    /// TOML file with defaults for any of the options above.
    #[arg(long, global = true, env = "PENTAREC_CONFIG")]
    pub config: Option<PathBuf>,
}

/// Keys accepted in the TOML file; names match the long flags.
#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields, rename_all = "kebab-case")]
struct FileConfig {
    prec: Option<i64>,
    big_m: Option<u32>,
    big_n: Option<u64>,
    depth_c: Option<u32>,
    float_mode: Option<String>,
    format: Option<String>,
    out: Option<PathBuf>,
}

#[derive(Clone, Debug, Serialize)]
pub struct RunConfig {
    pub prec: i64,
    /// Explicit M, if any; commands fall back to their own defaults.
    #[serde(rename = "M")]
    pub big_m: Option<u32>,
    #[serde(rename = "N")]
    pub big_n: Option<u64>,
    #[serde(rename = "C")]
    pub depth_c: u32,
    pub float_mode: FloatMode,
    pub format: Format,
    #[serde(skip)]
    pub out: Option<PathBuf>,
}

fn read_file(path: &Path) -> Result<FileConfig, String> {
    let text = std::fs::read_to_string(path).map_err(|e| format!("cannot read {}: {e}", path.display()))?;
    toml::from_str(&text).map_err(|e| format!("bad config {}: {e}", path.display()))
}

impl RunConfig {
    pub fn resolve(args: &GlobalArgs) -> Result<RunConfig, String> {
        let file = match &args.config {
            Some(p) => read_file(p)?,
            None => FileConfig::default(),
        };
        let float_mode = match (args.float_mode, file.float_mode) {
            (Some(m), _) => m,
            (None, Some(s)) => s.parse().map_err(|e| format!("{e}"))?,
            (None, None) => FloatMode::default(),
        };
        let format = match (args.format, file.format) {
            (Some(f), _) => f,
            (None, Some(s)) => s.parse()?,
            (None, None) => Format::default(),
        };
        let cfg = RunConfig {
            prec: args.prec.or(file.prec).unwrap_or(DEFAULT_PREC),
            big_m: args.big_m.or(file.big_m),
            big_n: args.big_n.or(file.big_n),
            depth_c: args.depth_c.or(file.depth_c).unwrap_or(DEFAULT_DEPTH),
            float_mode,
            format,
            out: args.out.clone().or(file.out),
        };
        if cfg.prec < 2 {
            return Err(format!("--prec must be at least 2, got {}", cfg.prec));
        }
        if cfg.depth_c == 0 {
            return Err("--depth-c must be at least 1".into());
        }
        if cfg.big_n.is_some_and(|n| n < 2) {
            return Err("--big-n must be at least 2".into());
        }
        Ok(cfg)
    }
}
