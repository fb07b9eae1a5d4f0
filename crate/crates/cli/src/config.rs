//! Run configuration: built-in defaults, then a `key=value` file, then
//! command-line flags. Later sources win.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use iqy_dirac::dirac::{DiracError, PhysicalParams, SolveMode, Symmetry};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ConfigError {
    #[error("cannot read config file {path}: {reason}")]
    Unreadable { path: PathBuf, reason: String },
    #[error("line {line}: expected key=value, got {text:?}")]
    Syntax { line: usize, text: String },
    #[error("unknown key {0:?}")]
    UnknownKey(String),
    #[error("invalid {key} {value:?}: {reason}")]
    Invalid {
        key: String,
        value: String,
        reason: String,
    },
    #[error("kappa list is empty")]
    EmptyKappa,
    #[error("kappa must be nonzero")]
    ZeroKappa,
    #[error("tensor list is empty")]
    EmptyTensor,
    #[error("n-min {min} exceeds n-max {max}")]
    NRange { min: usize, max: usize },
    #[error("{0}")]
    Physics(#[from] DiracError),
}

pub const KEYS: &[&str] = &[
    "symmetry",
    "mass",
    "v0",
    "screening",
    "tensor-h",
    "cs",
    "cps",
    "n-min",
    "n-max",
    "kappa",
    "window",
    "tol",
    "mode",
    "format",
    "out",
];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum OutputFormat {
    #[default]
    Csv,
    Json,
}

impl std::str::FromStr for OutputFormat {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().as_str() {
            "csv" => Ok(OutputFormat::Csv),
            "json" => Ok(OutputFormat::Json),
            other => Err(format!("unknown format {other:?}, expected csv or json")),
        }
    }
}

/// Default state selection when the user gives none.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Preset {
    /// The doublets of the published tables.
    Tables,
    /// Three low-lying states.
    Desk,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub symmetry: Symmetry,
    /// `tensor` is ignored here; see `tensors`.
    pub params: PhysicalParams,
    pub tensors: Vec<f64>,
    pub n_min: usize,
    pub n_max: usize,
    pub kappas: Vec<i32>,
    pub window: Option<(f64, f64)>,
    pub tol: f64,
    pub mode: SolveMode,
    pub out: Option<PathBuf>,
    pub format: OutputFormat,
}

impl RunConfig {
    pub fn defaults(symmetry: Symmetry, preset: Preset) -> Self {
        let (n_min, n_max, kappas) = match (preset, symmetry) {
            (Preset::Tables, Symmetry::Pspin) => (1, 2, vec![-4, -3, -2, -1, 2, 3, 4, 5]),
            (Preset::Tables, Symmetry::Spin) => (0, 1, vec![-5, -4, -3, -2, 1, 2, 3, 4]),
            (Preset::Desk, Symmetry::Pspin) => (1, 1, vec![-1, 2, -2]),
            (Preset::Desk, Symmetry::Spin) => (0, 0, vec![-2, 1, -3]),
        };
        let tensors = match preset {
            Preset::Tables => vec![0.0, 5.0],
            Preset::Desk => vec![0.0],
        };
        Self {
            symmetry,
            params: PhysicalParams::default(),
            tensors,
            n_min,
            n_max,
            kappas,
            window: None,
            tol: 1e-12,
            mode: SolveMode::Strict,
            out: None,
            format: OutputFormat::Csv,
        }
    }

    /// Applies `settings` on top of the defaults for their symmetry.
    pub fn resolve(settings: &Settings, preset: Preset) -> Result<Self, ConfigError> {
        let symmetry = match settings.get("symmetry") {
            Some(v) => parse("symmetry", v)?,
            None => Symmetry::Pspin,
        };
        let mut cfg = Self::defaults(symmetry, preset);
        for (key, value) in settings.iter() {
            cfg.apply(key, value)?;
        }
        cfg.validate()?;
        Ok(cfg)
    }

    fn apply(&mut self, key: &str, value: &str) -> Result<(), ConfigError> {
        let p = &mut self.params;
        match key {
            "symmetry" => {}
            "mass" => p.mass = parse(key, value)?,
            "v0" => p.depth = parse(key, value)?,
            "screening" => p.screening = parse(key, value)?,
            "cs" => p.spin_constant = parse(key, value)?,
            "cps" => p.pspin_constant = parse(key, value)?,
            "tensor-h" => self.tensors = parse_list(key, value)?,
            "n-min" => self.n_min = parse(key, value)?,
            "n-max" => self.n_max = parse(key, value)?,
            "kappa" => self.kappas = parse_list(key, value)?,
            "window" => {
                let w: Vec<f64> = parse_list(key, value)?;
                match w[..] {
                    [lo, hi] if lo < hi => self.window = Some((lo, hi)),
                    _ => return Err(invalid(key, value, "expected lo,hi with lo < hi")),
                }
            }
            "tol" => {
                self.tol = parse(key, value)?;
                if !(self.tol > 0.0) {
                    return Err(invalid(key, value, "must be positive"));
                }
            }
            "mode" => self.mode = parse(key, value)?,
            "format" => self.format = parse(key, value)?,
            "out" => self.out = Some(PathBuf::from(value)),
            other => return Err(ConfigError::UnknownKey(other.to_string())),
        }
        Ok(())
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        self.params.validate()?;
        if self.kappas.is_empty() {
            return Err(ConfigError::EmptyKappa);
        }
        if self.kappas.contains(&0) {
            return Err(ConfigError::ZeroKappa);
        }
        if self.tensors.is_empty() {
            return Err(ConfigError::EmptyTensor);
        }
        for &h in &self.tensors {
            self.params.with_tensor(h).validate()?;
        }
        if self.n_min > self.n_max {
            return Err(ConfigError::NRange {
                min: self.n_min,
                max: self.n_max,
            });
        }
        Ok(())
    }

    pub fn params_with(&self, tensor: f64) -> PhysicalParams {
        self.params.with_tensor(tensor)
    }
}

/// Ordered `key → value` settings. Inserting a key again replaces it.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Settings(BTreeMap<String, String>);

impl Settings {
    pub fn get(&self, key: &str) -> Option<&str> {
        self.0.get(key).map(String::as_str)
    }

    pub fn set(&mut self, key: &str, value: impl Into<String>) -> Result<(), ConfigError> {
        let key = key.trim();
        if !KEYS.contains(&key) {
            return Err(ConfigError::UnknownKey(key.to_string()));
        }
        self.0
            .insert(key.to_string(), value.into().trim().to_string());
        Ok(())
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, &str)> {
        self.0.iter().map(|(k, v)| (k.as_str(), v.as_str()))
    }

    /// `key=value` per line; blank lines and `#` comments are skipped.
    pub fn parse(text: &str) -> Result<Self, ConfigError> {
        let mut settings = Settings::default();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| ConfigError::Syntax {
                line: i + 1,
                text: raw.to_string(),
            })?;
            settings.set(key, value)?;
        }
        Ok(settings)
    }

    pub fn load(path: &Path) -> Result<Self, ConfigError> {
        let text = fs::read_to_string(path).map_err(|e| ConfigError::Unreadable {
            path: path.to_path_buf(),
            reason: e.to_string(),
        })?;
        Self::parse(&text)
    }

    /// Entries of `other` replace those here.
    pub fn merge(mut self, other: Settings) -> Self {
        self.0.extend(other.0);
        self
    }
}

fn invalid(key: &str, value: &str, reason: impl Into<String>) -> ConfigError {
    ConfigError::Invalid {
        key: key.to_string(),
        value: value.to_string(),
        reason: reason.into(),
    }
}

fn parse<T>(key: &str, value: &str) -> Result<T, ConfigError>
where
    T: std::str::FromStr,
    T::Err: std::fmt::Display,
{
    value
        .trim()
        .parse()
        .map_err(|e: T::Err| invalid(key, value, e.to_string()))
}

fn parse_list<T>(key: &str, value: &str) -> Result<Vec<T>, ConfigError>
where
    T: std::str::FromStr,
    T::Err: std::fmt::Display,
{
    value
        .split(',')
        .filter(|s| !s.trim().is_empty())
        .map(|s| parse(key, s))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn settings(pairs: &[(&str, &str)]) -> Settings {
        let mut s = Settings::default();
        for (k, v) in pairs {
            s.set(k, *v).unwrap();
        }
        s
    }

    #[test]
    fn defaults_follow_the_tables() {
        let cfg = RunConfig::resolve(&Settings::default(), Preset::Tables).unwrap();
        assert_eq!(cfg.symmetry, Symmetry::Pspin);
        assert_eq!(cfg.params.mass, 5.0);
        assert_eq!(cfg.params.pspin_constant, -5.5);
        assert_eq!(cfg.kappas.len(), 8);
        assert_eq!(cfg.tensors, vec![0.0, 5.0]);
        let spin = RunConfig::resolve(&settings(&[("symmetry", "spin")]), Preset::Tables).unwrap();
        assert_eq!((spin.n_min, spin.n_max), (0, 1));
        assert_eq!(spin.params.spin_constant, 6.0);
    }

    #[test]
    fn file_then_flags() {
        let file =
            Settings::parse("# comment\nmass = 4.0\nkappa=-1,2\n\nwindow=-3,-1 # trailing\n")
                .unwrap();
        let flags = settings(&[("mass", "3.5"), ("tensor-h", "0.5,1")]);
        let cfg = RunConfig::resolve(&file.merge(flags), Preset::Tables).unwrap();
        assert_eq!(cfg.params.mass, 3.5);
        assert_eq!(cfg.kappas, vec![-1, 2]);
        assert_eq!(cfg.window, Some((-3.0, -1.0)));
        assert_eq!(cfg.tensors, vec![0.5, 1.0]);
    }

    #[test]
    fn rejects_bad_input() {
        assert!(matches!(
            Settings::parse("mass 4"),
            Err(ConfigError::Syntax { line: 1, .. })
        ));
        assert!(matches!(
            Settings::parse("colour=red"),
            Err(ConfigError::UnknownKey(_))
        ));
        let cases: &[(&str, &str)] = &[
            ("kappa", ""),
            ("kappa", "1,0"),
            ("mass", "heavy"),
            ("window", "1,0"),
            ("screening", "-1"),
            ("n-min", "3"),
            ("tol", "0"),
            ("symmetry", "isospin"),
            ("format", "xml"),
        ];
        for (k, v) in cases {
            let r = RunConfig::resolve(&settings(&[(k, v)]), Preset::Tables);
            assert!(r.is_err(), "{k}={v}");
        }
        assert_eq!(
            RunConfig::resolve(&settings(&[("kappa", "")]), Preset::Tables),
            Err(ConfigError::EmptyKappa)
        );
    }

    #[test]
    fn desk_preset_has_three_states() {
        let cfg = RunConfig::resolve(&Settings::default(), Preset::Desk).unwrap();
        let states = (cfg.n_max - cfg.n_min + 1) * cfg.kappas.len() * cfg.tensors.len();
        assert_eq!(states, 3);
    }
}
