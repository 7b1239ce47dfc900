//! Run configuration: TOML file plus command-line overrides.

use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use divspline::cases::Stabilization;
use divspline::StabParams;
use thiserror::Error;
use toml::{Table, Value};

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("cannot read config {path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("malformed config: {0}")]
    Syntax(String),
    #[error("unknown key `{0}`")]
    UnknownKey(String),
    #[error("key `{key}`: expected {expected}")]
    Type { key: String, expected: &'static str },
    #[error("key `{key}`: {message}")]
    Invalid { key: String, message: String },
    #[error("key `command` is required")]
    MissingCommand,
}

fn invalid(key: &str, message: impl Into<String>) -> ConfigError {
    ConfigError::Invalid {
        key: key.to_string(),
        message: message.into(),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Command {
    Convergence,
    Robustness,
    PressureRobustness,
    Cavity,
    TaylorGreen2d,
}

impl Command {
    pub const ALL: [Command; 5] = [
        Command::Convergence,
        Command::Robustness,
        Command::PressureRobustness,
        Command::Cavity,
        Command::TaylorGreen2d,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Command::Convergence => "convergence",
            Command::Robustness => "robustness",
            Command::PressureRobustness => "pressure-robustness",
            Command::Cavity => "cavity",
            Command::TaylorGreen2d => "taylor-green-2d",
        }
    }
}

impl fmt::Display for Command {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Command {
    type Err = ConfigError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Command::ALL
            .into_iter()
            .find(|c| c.as_str() == s)
            .ok_or_else(|| invalid("command", format!("unknown command '{s}'")))
    }
}

/// Partially specified configuration, from a file or from flags.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct RawConfig {
    pub command: Option<Command>,
    pub k_prime: Option<usize>,
    pub mesh: Option<Vec<usize>>,
    pub re: Option<Vec<f64>>,
    pub delta: Option<f64>,
    pub gamma: Option<f64>,
    pub c_nit: Option<f64>,
    pub dt: Option<f64>,
    pub t_end: Option<f64>,
    pub rho_inf: Option<f64>,
    pub out: Option<PathBuf>,
    pub threads: Option<usize>,
    pub seed: Option<u64>,
}

fn real(key: &str, v: &Value) -> Result<f64, ConfigError> {
    match v {
        Value::Float(x) => Ok(*x),
        Value::Integer(i) => Ok(*i as f64),
        _ => Err(ConfigError::Type {
            key: key.into(),
            expected: "a number",
        }),
    }
}

fn count(key: &str, v: &Value) -> Result<usize, ConfigError> {
    match v {
        Value::Integer(i) if *i >= 0 => Ok(*i as usize),
        Value::Integer(_) => Err(invalid(key, "must be nonnegative")),
        _ => Err(ConfigError::Type {
            key: key.into(),
            expected: "an integer",
        }),
    }
}

fn list<T>(key: &str, v: &Value, item: fn(&str, &Value) -> Result<T, ConfigError>) -> Result<Vec<T>, ConfigError> {
    match v {
        Value::Array(a) => a.iter().map(|x| item(key, x)).collect(),
        other => Ok(vec![item(key, other)?]),
    }
}

impl RawConfig {
    pub fn from_table(table: &Table) -> Result<Self, ConfigError> {
        let mut raw = RawConfig::default();
        for (key, v) in table {
            let k = key.as_str();
            match k {
                "command" => {
                    let s = v.as_str().ok_or_else(|| ConfigError::Type {
                        key: k.into(),
                        expected: "a string",
                    })?;
                    raw.command = Some(s.parse()?);
                }
                "kPrime" => raw.k_prime = Some(count(k, v)?),
                "mesh" => raw.mesh = Some(list(k, v, count)?),
                "re" => raw.re = Some(list(k, v, real)?),
                "delta" => raw.delta = Some(real(k, v)?),
                "gamma" => raw.gamma = Some(real(k, v)?),
                "cNit" => raw.c_nit = Some(real(k, v)?),
                "dt" => raw.dt = Some(real(k, v)?),
                "tEnd" => raw.t_end = Some(real(k, v)?),
                "rhoInf" => raw.rho_inf = Some(real(k, v)?),
                "out" => {
                    let s = v.as_str().ok_or_else(|| ConfigError::Type {
                        key: k.into(),
                        expected: "a string",
                    })?;
                    raw.out = Some(PathBuf::from(s));
                }
                "threads" => raw.threads = Some(count(k, v)?),
                "seed" => raw.seed = Some(count(k, v)? as u64),
                _ => return Err(ConfigError::UnknownKey(key.clone())),
            }
        }
        Ok(raw)
    }

    pub fn from_toml(text: &str) -> Result<Self, ConfigError> {
        let table: Table = text.parse().map_err(|e: toml::de::Error| ConfigError::Syntax(e.to_string()))?;
        Self::from_table(&table)
    }

    pub fn from_file(path: &Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path).map_err(|source| ConfigError::Io {
            path: path.to_path_buf(),
            source,
        })?;
        Self::from_toml(&text)
    }

    /// Values set in `other` replace those in `self`.
    pub fn overridden_by(self, other: RawConfig) -> RawConfig {
        RawConfig {
            command: other.command.or(self.command),
            k_prime: other.k_prime.or(self.k_prime),
            mesh: other.mesh.or(self.mesh),
            re: other.re.or(self.re),
            delta: other.delta.or(self.delta),
            gamma: other.gamma.or(self.gamma),
            c_nit: other.c_nit.or(self.c_nit),
            dt: other.dt.or(self.dt),
            t_end: other.t_end.or(self.t_end),
            rho_inf: other.rho_inf.or(self.rho_inf),
            out: other.out.or(self.out),
            threads: other.threads.or(self.threads),
            seed: other.seed.or(self.seed),
        }
    }
}

/// Fully resolved and validated configuration.
#[derive(Clone, Debug, PartialEq)]
pub struct CaseConfig {
    pub command: Command,
    pub k_prime: usize,
    pub mesh: Vec<usize>,
    pub re: Vec<f64>,
    /// At most one of `delta` and `gamma` is set; neither means `delta = 1`.
    pub delta: Option<f64>,
    pub gamma: Option<f64>,
    pub c_nit: Option<f64>,
    pub dt: f64,
    pub t_end: f64,
    pub rho_inf: f64,
    pub out: PathBuf,
    /// Worker threads; 0 lets the runtime decide.
    pub threads: usize,
    pub seed: u64,
}

/// Largest velocity degree supported by the built-in Gauss rules.
pub const MAX_K_PRIME: usize = 5;

impl CaseConfig {
    pub fn resolve(raw: RawConfig) -> Result<Self, ConfigError> {
        let command = raw.command.ok_or(ConfigError::MissingCommand)?;
        let (mesh, re, k_prime, t_end) = match command {
            Command::Convergence => (vec![4, 8, 16, 32], vec![10.0], 1, 1.0),
            Command::Robustness => (vec![16], vec![1.0, 10.0, 100.0, 1000.0], 1, 1.0),
            Command::PressureRobustness => (vec![16], vec![10.0], 1, 1.0),
            Command::Cavity => (vec![16], vec![1000.0], 1, 1.0),
            Command::TaylorGreen2d => (vec![32], vec![100.0], 2, 1.0),
        };
        let cfg = CaseConfig {
            command,
            k_prime: raw.k_prime.unwrap_or(k_prime),
            mesh: raw.mesh.unwrap_or(mesh),
            re: raw.re.unwrap_or(re),
            delta: raw.delta,
            gamma: raw.gamma,
            c_nit: raw.c_nit,
            dt: raw.dt.unwrap_or(1e-2),
            t_end: raw.t_end.unwrap_or(t_end),
            rho_inf: raw.rho_inf.unwrap_or(0.5),
            out: raw.out.unwrap_or_else(|| PathBuf::from("out")),
            threads: raw.threads.unwrap_or(0),
            seed: raw.seed.unwrap_or(0),
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        if !(1..=MAX_K_PRIME).contains(&self.k_prime) {
            return Err(invalid("kPrime", format!("must lie in 1..={MAX_K_PRIME}")));
        }
        if self.mesh.is_empty() || self.mesh.contains(&0) {
            return Err(invalid("mesh", "needs at least one positive element count"));
        }
        if self.re.is_empty() || self.re.iter().any(|&r| !(r > 0.0 && r.is_finite())) {
            return Err(invalid("re", "needs at least one positive Reynolds number"));
        }
        if self.delta.is_some() && self.gamma.is_some() {
            return Err(invalid("gamma", "cannot be combined with `delta`"));
        }
        if let Some(d) = self.delta {
            if !(d >= 0.0 && d.is_finite()) {
                return Err(invalid("delta", "must be nonnegative"));
            }
        }
        if let Some(g) = self.gamma {
            if !(g >= 0.0 && g.is_finite()) {
                return Err(invalid("gamma", "must be nonnegative"));
            }
        }
        if let Some(c) = self.c_nit {
            if !(c > 0.0 && c.is_finite()) {
                return Err(invalid("cNit", "must be positive"));
            }
        }
        if !(self.dt > 0.0 && self.dt.is_finite()) {
            return Err(invalid("dt", "must be positive"));
        }
        if !(self.t_end > 0.0 && self.t_end.is_finite()) {
            return Err(invalid("tEnd", "must be positive"));
        }
        if !(0.0..=1.0).contains(&self.rho_inf) {
            return Err(invalid("rhoInf", "must lie in [0, 1]"));
        }
        if self.seed > i64::MAX as u64 {
            return Err(invalid("seed", "must fit in a signed 64-bit integer"));
        }
        Ok(())
    }

    pub fn stabilization(&self) -> Stabilization {
        Stabilization {
            delta: self.delta.unwrap_or(1.0),
            gamma: self.gamma,
            c_nit: self.c_nit,
        }
    }

    /// Stabilization parameters at the first Reynolds number.
    pub fn stab_params(&self) -> StabParams {
        self.stabilization().params(self.k_prime, 1.0 / self.re[0])
    }

    pub fn to_table(&self) -> Table {
        let mut t = Table::new();
        t.insert("command".into(), Value::String(self.command.as_str().into()));
        t.insert("kPrime".into(), Value::Integer(self.k_prime as i64));
        t.insert(
            "mesh".into(),
            Value::Array(self.mesh.iter().map(|&m| Value::Integer(m as i64)).collect()),
        );
        t.insert("re".into(), Value::Array(self.re.iter().map(|&r| Value::Float(r)).collect()));
        if let Some(d) = self.delta {
            t.insert("delta".into(), Value::Float(d));
        }
        if let Some(g) = self.gamma {
            t.insert("gamma".into(), Value::Float(g));
        }
        if let Some(c) = self.c_nit {
            t.insert("cNit".into(), Value::Float(c));
        }
        t.insert("dt".into(), Value::Float(self.dt));
        t.insert("tEnd".into(), Value::Float(self.t_end));
        t.insert("rhoInf".into(), Value::Float(self.rho_inf));
        t.insert("out".into(), Value::String(self.out.to_string_lossy().into_owned()));
        t.insert("threads".into(), Value::Integer(self.threads as i64));
        t.insert("seed".into(), Value::Integer(self.seed as i64));
        t
    }
}
