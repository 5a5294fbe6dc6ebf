use std::collections::HashMap;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};

use super::CliError;

#[derive(Parser, Debug)]
#[command(name = "rpf", version, about = "Partial-fraction coefficients of restricted partitions and their asymptotics")]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalFlags,
    #[command(subcommand)]
    pub cmd: Command,
}

#[derive(Args, Debug, Default, Clone)]
pub struct GlobalFlags {
    /// working precision in bits
    #[arg(long, global = true)]
    pub bits: Option<u32>,
    /// shift σ in Q_{hkσ}(N)
    #[arg(long, global = true, allow_negative_numbers = true)]
    pub sigma: Option<i64>,
    /// N, or a comma-separated list where a command accepts several
    #[arg(long = "N", global = true)]
    pub n: Option<String>,
    /// number of expansion terms
    #[arg(long, global = true)]
    pub m: Option<usize>,
    /// highest coefficient index generated
    #[arg(long, global = true)]
    pub tmax: Option<usize>,
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    /// worker threads (output does not depend on it)
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    /// significant digits in printed values
    #[arg(long, global = true)]
    pub digits: Option<usize>,
    /// write output to FILE instead of stdout
    #[arg(long, global = true, value_name = "FILE")]
    pub out: Option<PathBuf>,
    /// key=value file; flags take precedence
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum VerifyTarget {
    Paths,
    ZeroSum,
    Identities,
    All,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum BoundsTarget {
    /// ξ₁, ξ₂, ξ₃ for lower bounds K
    Xi,
    /// |Q_{1k1}(N)| against both Q bounds, 2 ≤ k ≤ N
    Q,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum QMethodArg {
    Auto,
    Exact,
    Simple,
    Double,
    Logseries,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// zero w(A,B) of the continued dilogarithm
    #[command(allow_negative_numbers = true)]
    Zeros { a: i64, b: i64 },
    /// saddle point of p_d through m
    #[command(allow_negative_numbers = true)]
    Saddles { d: i64, #[arg(value_name = "M")] m_index: i64 },
    /// Q_{hkσ}(N)
    Qcoeff {
        h: i64,
        k: i64,
        #[arg(long, value_enum, default_value = "auto")]
        method: QMethodArg,
    },
    /// C_{hkℓ}(N)
    Ccoeff { h: i64, k: i64, ell: i64 },
    /// Σ Q_{hkσ}(N) over a subset: A, C, Cprime, Cstar, D, E, B<K> or all
    Sums { subset: String },
    /// expansion truncations against direct sums (1: C′, 2: C*, 3: D, 4: E)
    Table { which: u8 },
    /// figure datasets (1: Ψ(h,101) with its bound, 2: |Q_{1k1}(50)| with its bound)
    Figure { which: u8 },
    /// ξ constants or the Q bounds at fixed N
    Bounds {
        #[arg(value_enum, default_value = "xi")]
        what: BoundsTarget,
        /// lower bounds K for the ξ table
        #[arg(long = "K", default_value = "2,61,82,101")]
        big_k: String,
    },
    /// certification checks; exits with status 3 if any fails
    Verify {
        #[arg(value_enum, default_value = "all")]
        target: VerifyTarget,
    },
    /// ∏_{j≤m} 2 sin(πjh/k) and related quantities
    Sineprod { h: i64, k: i64, #[arg(value_name = "M")] len: u64 },
}

/// Resolved settings: flag, then config file, then default.
#[derive(Clone, Debug)]
pub struct RunConfig {
    pub bits: u32,
    pub sigma: i64,
    pub n: Option<Vec<i64>>,
    pub m: Option<usize>,
    pub tmax: usize,
    pub format: Format,
    pub threads: Option<usize>,
    pub digits: usize,
    pub out: Option<PathBuf>,
}

pub const DEFAULT_BITS: u32 = 256;
pub const DEFAULT_TMAX: usize = 6;
pub const DEFAULT_DIGITS: usize = 15;

pub fn parse_config(text: &str) -> Result<HashMap<String, String>, CliError> {
    let mut map = HashMap::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (k, v) = line
            .split_once('=')
            .ok_or_else(|| CliError::Usage(format!("config line {}: expected key=value", i + 1)))?;
        map.insert(k.trim().to_string(), v.trim().to_string());
    }
    Ok(map)
}

fn parse_num<T: std::str::FromStr>(key: &str, v: &str) -> Result<T, CliError> {
    v.parse().map_err(|_| CliError::Usage(format!("bad value for {key}: {v}")))
}

pub fn parse_n_list(v: &str) -> Result<Vec<i64>, CliError> {
    v.split(',').map(|s| parse_num::<i64>("N", s.trim())).collect()
}

impl RunConfig {
    pub fn resolve(flags: &GlobalFlags) -> Result<Self, CliError> {
        let file = match &flags.config {
            Some(p) => load(p)?,
            None => HashMap::new(),
        };
        for key in file.keys() {
            if !["bits", "sigma", "N", "m", "tmax", "format", "threads", "digits", "out"].contains(&key.as_str()) {
                return Err(CliError::Usage(format!("unknown config key {key}")));
            }
        }
        let get = |k: &str| file.get(k).map(String::as_str);
        let bits = match flags.bits {
            Some(b) => b,
            None => get("bits").map(|v| parse_num("bits", v)).transpose()?.unwrap_or(DEFAULT_BITS),
        };
        let sigma = match flags.sigma {
            Some(s) => s,
            None => get("sigma").map(|v| parse_num("sigma", v)).transpose()?.unwrap_or(1),
        };
        let n = match flags.n.as_deref().or(get("N")) {
            Some(v) => Some(parse_n_list(v)?),
            None => None,
        };
        let m = match flags.m {
            Some(m) => Some(m),
            None => get("m").map(|v| parse_num("m", v)).transpose()?,
        };
        let tmax = match flags.tmax {
            Some(t) => t,
            None => get("tmax").map(|v| parse_num("tmax", v)).transpose()?.unwrap_or(DEFAULT_TMAX),
        };
        let format = match flags.format {
            Some(f) => f,
            None => match get("format") {
                Some(v) => Format::from_str(v, true).map_err(|_| CliError::Usage(format!("bad format {v}")))?,
                None => Format::Csv,
            },
        };
        let threads = match flags.threads {
            Some(t) => Some(t),
            None => get("threads").map(|v| parse_num("threads", v)).transpose()?,
        };
        let digits = match flags.digits {
            Some(d) => d,
            None => get("digits").map(|v| parse_num("digits", v)).transpose()?.unwrap_or(DEFAULT_DIGITS),
        };
        let out = flags.out.clone().or_else(|| get("out").map(PathBuf::from));
        let cfg = RunConfig { bits, sigma, n, m, tmax, format, threads, digits, out };
        cfg.validate()?;
        Ok(cfg)
    }

    fn validate(&self) -> Result<(), CliError> {
        if self.bits < 64 {
            return Err(CliError::Usage(format!("bits must be at least 64, got {}", self.bits)));
        }
        if self.tmax > 12 {
            return Err(CliError::Usage(format!("tmax must be at most 12, got {}", self.tmax)));
        }
        if self.threads == Some(0) {
            return Err(CliError::Usage("threads must be positive".into()));
        }
        if !(1..=200).contains(&self.digits) {
            return Err(CliError::Usage(format!("digits must be in 1..=200, got {}", self.digits)));
        }
        Ok(())
    }

    /// The single N a command needs.
    pub fn single_n(&self) -> Result<i64, CliError> {
        match self.n.as_deref() {
            Some([n]) => Ok(*n),
            Some(_) => Err(CliError::Usage("this command takes a single --N".into())),
            None => Err(CliError::Usage("--N is required".into())),
        }
    }
}

fn load(p: &Path) -> Result<HashMap<String, String>, CliError> {
    let text = std::fs::read_to_string(p).map_err(|e| CliError::Usage(format!("config {}: {e}", p.display())))?;
    parse_config(&text)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn flags(args: &[&str]) -> GlobalFlags {
        let mut v = vec!["rpf"];
        v.extend_from_slice(args);
        v.push("bounds");
        Cli::try_parse_from(v).unwrap().global
    }

    #[test]
    fn config_parsing() {
        let m = parse_config("bits = 128\n# note\n\nN=800,1000  # trailing\n").unwrap();
        assert_eq!(m["bits"], "128");
        assert_eq!(m["N"], "800,1000");
        assert!(parse_config("bits 128").is_err());
    }

    #[test]
    fn defaults() {
        let c = RunConfig::resolve(&flags(&[])).unwrap();
        assert_eq!((c.bits, c.sigma, c.tmax, c.format), (256, 1, 6, Format::Csv));
        assert!(c.n.is_none() && c.threads.is_none());
    }

    #[test]
    fn flags_override_file() {
        let dir = std::env::temp_dir().join(format!("rpf-cfg-{}", std::process::id()));
        std::fs::write(&dir, "bits=128\nsigma=3\nformat=json\nN=400").unwrap();
        let path = dir.to_str().unwrap();
        let c = RunConfig::resolve(&flags(&["--config", path, "--sigma", "-2"])).unwrap();
        assert_eq!((c.bits, c.sigma, c.format), (128, -2, Format::Json));
        assert_eq!(c.n, Some(vec![400]));
        std::fs::write(&dir, "colour=blue").unwrap();
        assert!(RunConfig::resolve(&flags(&["--config", path])).is_err());
        std::fs::remove_file(&dir).unwrap();
    }

    #[test]
    fn limits() {
        assert!(RunConfig::resolve(&flags(&["--bits", "32"])).is_err());
        assert!(RunConfig::resolve(&flags(&["--tmax", "13"])).is_err());
        assert!(RunConfig::resolve(&flags(&["--threads", "0"])).is_err());
        let c = RunConfig::resolve(&flags(&["--N", "5,6"])).unwrap();
        assert!(c.single_n().is_err());
    }
}
