//! Run configuration: flags over an optional `key=value` defaults file.

use std::collections::BTreeMap;
use std::fmt;
use std::path::{Path, PathBuf};

use clap::{Args, ValueEnum};
use ouh_core::ProcessParams;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Scheme {
    Exact,
    Euler,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

impl fmt::Display for Scheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Exact => "exact",
            Self::Euler => "euler",
        })
    }
}

impl fmt::Display for Format {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Csv => "csv",
            Self::Json => "json",
        })
    }
}

/// Flags shared by every subcommand.
#[derive(Debug, Clone, Default, Args)]
pub struct CommonArgs {
    /// Mean-reversion rate (either sign).
    #[arg(long, allow_negative_numbers = true)]
    pub gamma: Option<f64>,
    /// Starting point, > 0.
    #[arg(long = "a", allow_negative_numbers = true)]
    pub a: Option<f64>,
    /// Observation time; repeat for several.
    #[arg(long = "t", allow_negative_numbers = true)]
    pub t: Vec<f64>,
    /// Number of Monte Carlo paths.
    #[arg(long)]
    pub paths: Option<usize>,
    /// Euler step size.
    #[arg(long, allow_negative_numbers = true)]
    pub dt: Option<f64>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long, value_enum)]
    pub scheme: Option<Scheme>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    /// Output file (a directory for `verify`).
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Worker threads; results do not depend on it.
    #[arg(long)]
    pub workers: Option<usize>,
    /// `key=value` file of defaults; flags take precedence.
    #[arg(long)]
    pub config: Option<PathBuf>,
}

#[derive(Debug)]
pub enum ConfigError {
    Missing(&'static str),
    Invalid { field: String, reason: String },
    File { path: PathBuf, reason: String },
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Missing(field) => {
                write!(f, "missing required value `{field}` (pass --{field} or set {field}= in --config)")
            }
            Self::Invalid { field, reason } => write!(f, "invalid `{field}`: {reason}"),
            Self::File { path, reason } => write!(f, "cannot read config file {}: {reason}", path.display()),
        }
    }
}

pub fn invalid(field: impl Into<String>, reason: impl Into<String>) -> ConfigError {
    ConfigError::Invalid {
        field: field.into(),
        reason: reason.into(),
    }
}

/// Per-command fallbacks for values absent from both flags and file.
#[derive(Debug, Clone)]
pub struct Defaults {
    pub gamma: Option<f64>,
    pub a: Option<f64>,
    pub times: Vec<f64>,
    pub n_paths: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub gamma: f64,
    pub a: f64,
    pub times: Vec<f64>,
    pub n_paths: usize,
    pub dt: f64,
    pub seed: u64,
    pub scheme: Scheme,
    pub format: Format,
    pub out: Option<PathBuf>,
    pub workers: usize,
}

impl RunConfig {
    pub fn params(&self) -> ProcessParams {
        ProcessParams::new(self.gamma, self.a).expect("validated at resolve time")
    }

    /// `key=value` pairs for file headers. The worker count is left out
    /// because it never changes results.
    pub fn echo(&self) -> String {
        format!(
            "gamma={} a={} t={} paths={} dt={} seed={} scheme={} format={}",
            self.gamma,
            self.a,
            self.times.iter().map(|t| t.to_string()).collect::<Vec<_>>().join(","),
            self.n_paths,
            self.dt,
            self.seed,
            self.scheme,
            self.format
        )
    }

    pub fn resolve(args: &CommonArgs, defaults: Defaults) -> Result<Self, ConfigError> {
        let file = match &args.config {
            Some(path) => read_config_file(path)?,
            None => BTreeMap::new(),
        };
        let from_file = |key: &'static str| file.get(key).map(String::as_str);
        let parse_f64 = |key: &'static str| -> Result<Option<f64>, ConfigError> {
            from_file(key)
                .map(|v| v.parse::<f64>().map_err(|e| invalid(key, format!("{v:?}: {e}"))))
                .transpose()
        };

        let gamma = args
            .gamma
            .or(parse_f64("gamma")?)
            .or(defaults.gamma)
            .ok_or(ConfigError::Missing("gamma"))?;
        let a = args
            .a
            .or(parse_f64("a")?)
            .or(defaults.a)
            .ok_or(ConfigError::Missing("a"))?;
        let times = if !args.t.is_empty() {
            args.t.clone()
        } else if let Some(v) = from_file("t") {
            v.split(',')
                .map(|s| s.trim().parse::<f64>().map_err(|e| invalid("t", format!("{s:?}: {e}"))))
                .collect::<Result<Vec<_>, _>>()?
        } else {
            defaults.times
        };
        let n_paths = match args.paths {
            Some(n) => n,
            None => from_file("paths")
                .map(|v| v.parse::<usize>().map_err(|e| invalid("paths", format!("{v:?}: {e}"))))
                .transpose()?
                .unwrap_or(defaults.n_paths),
        };
        let dt = args.dt.or(parse_f64("dt")?).unwrap_or(1e-3);
        let seed = match args.seed {
            Some(s) => s,
            None => from_file("seed")
                .map(|v| v.parse::<u64>().map_err(|e| invalid("seed", format!("{v:?}: {e}"))))
                .transpose()?
                .unwrap_or(1),
        };
        let scheme = match args.scheme {
            Some(s) => s,
            None => from_file("scheme")
                .map(|v| Scheme::from_str(v, true).map_err(|e| invalid("scheme", e)))
                .transpose()?
                .unwrap_or(Scheme::Exact),
        };
        let format = match args.format {
            Some(f) => f,
            None => from_file("format")
                .map(|v| Format::from_str(v, true).map_err(|e| invalid("format", e)))
                .transpose()?
                .unwrap_or(Format::Csv),
        };
        let workers = args
            .workers
            .unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get()));

        let config = Self {
            gamma,
            a,
            times,
            n_paths,
            dt,
            seed,
            scheme,
            format,
            out: args.out.clone(),
            workers,
        };
        config.validate()?;
        Ok(config)
    }

    fn validate(&self) -> Result<(), ConfigError> {
        if !self.gamma.is_finite() {
            return Err(invalid("gamma", format!("must be finite, got {}", self.gamma)));
        }
        if !(self.a > 0.0 && self.a.is_finite()) {
            return Err(invalid("a", format!("starting point must be finite and > 0, got {}", self.a)));
        }
        if self.times.is_empty() {
            return Err(invalid("t", "need at least one time"));
        }
        if self.times.iter().any(|t| !(*t > 0.0 && t.is_finite())) {
            return Err(invalid("t", "times must be finite and > 0"));
        }
        if self.times.windows(2).any(|w| w[1] <= w[0]) {
            return Err(invalid("t", "times must be strictly ascending"));
        }
        if self.n_paths < 1 {
            return Err(invalid("paths", "need at least 1 path"));
        }
        if !(self.dt > 0.0 && self.dt.is_finite()) {
            return Err(invalid("dt", format!("must be finite and > 0, got {}", self.dt)));
        }
        if self.workers < 1 {
            return Err(invalid("workers", "need at least 1 worker"));
        }
        Ok(())
    }
}

fn read_config_file(path: &Path) -> Result<BTreeMap<String, String>, ConfigError> {
    let text = std::fs::read_to_string(path).map_err(|e| ConfigError::File {
        path: path.to_path_buf(),
        reason: e.to_string(),
    })?;
    parse_key_values(&text).map_err(|reason| ConfigError::File {
        path: path.to_path_buf(),
        reason,
    })
}

fn parse_key_values(text: &str) -> Result<BTreeMap<String, String>, String> {
    let mut map = BTreeMap::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (k, v) = line
            .split_once('=')
            .ok_or_else(|| format!("line {}: expected key=value", lineno + 1))?;
        map.insert(k.trim().to_string(), v.trim().to_string());
    }
    Ok(map)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn defaults() -> Defaults {
        Defaults {
            gamma: None,
            a: None,
            times: vec![1.0],
            n_paths: 100,
        }
    }

    #[test]
    fn missing_a_is_named() {
        let args = CommonArgs {
            gamma: Some(1.0),
            ..CommonArgs::default()
        };
        let err = RunConfig::resolve(&args, defaults()).unwrap_err();
        assert!(err.to_string().contains("`a`"), "{err}");
    }

    #[test]
    fn flags_win_over_file() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("run.cfg");
        std::fs::write(&path, "# defaults\ngamma = -0.5\na=2\nt=0.5,1\nseed=9\n").unwrap();
        let args = CommonArgs {
            a: Some(3.0),
            config: Some(path),
            ..CommonArgs::default()
        };
        let config = RunConfig::resolve(&args, defaults()).unwrap();
        assert_eq!((config.gamma, config.a, config.seed), (-0.5, 3.0, 9));
        assert_eq!(config.times, vec![0.5, 1.0]);
    }

    #[test]
    fn rejects_bad_values() {
        let base = CommonArgs {
            gamma: Some(1.0),
            a: Some(1.0),
            ..CommonArgs::default()
        };
        for (args, field) in [
            (CommonArgs { a: Some(-1.0), ..base.clone() }, "`a`"),
            (CommonArgs { t: vec![1.0, 0.5], ..base.clone() }, "`t`"),
            (CommonArgs { paths: Some(0), ..base.clone() }, "`paths`"),
            (CommonArgs { dt: Some(0.0), ..base.clone() }, "`dt`"),
        ] {
            let err = RunConfig::resolve(&args, defaults()).unwrap_err().to_string();
            assert!(err.contains(field), "{err}");
        }
    }

    #[test]
    fn malformed_file_line() {
        assert!(parse_key_values("gamma 1").is_err());
        assert_eq!(parse_key_values("a=1 # comment").unwrap()["a"], "1");
    }
}
