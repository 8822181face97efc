//! Run settings: TOML config file, environment default, flag overrides.

use std::path::{Path, PathBuf};

use clap::ValueEnum;
use serde::Deserialize;

use crate::polyline::{Tolerance, CLOSURE_TOL, COLLINEAR_TOL};
use crate::quadrature::REL_TOL;
use crate::reconstruct::SWITCH_TOL;

/// Environment variable naming the default config file.
pub const CONFIG_ENV: &str = "SAILFRAC_CONFIG";

/// Seed used when neither the config nor `--seed` sets one.
pub const DEFAULT_SEED: u64 = 0x5eed;

/// Default tolerance of `cf expand` on decimal input.
pub const EXPAND_TOL: f64 = 1e-12;

/// Arithmetic of the geometric commands.
#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Exact,
    Float,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Csv,
    Json,
}

/// Named tolerance overrides; every entry must be positive.
#[derive(Debug, Clone, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Tolerances {
    pub collinear: Option<f64>,
    pub closure: Option<f64>,
    pub quadrature: Option<f64>,
    pub switch: Option<f64>,
    pub expand: Option<f64>,
}

impl Tolerances {
    pub const NAMES: [&'static str; 5] = ["collinear", "closure", "quadrature", "switch", "expand"];

    fn slot(&mut self, name: &str) -> Option<&mut Option<f64>> {
        Some(match name {
            "collinear" => &mut self.collinear,
            "closure" => &mut self.closure,
            "quadrature" => &mut self.quadrature,
            "switch" => &mut self.switch,
            "expand" => &mut self.expand,
            _ => return None,
        })
    }

    /// Sets `name` to `value`; unknown names and non-positive values are errors.
    pub fn set(&mut self, name: &str, value: f64) -> Result<(), String> {
        if !(value > 0.0 && value.is_finite()) {
            return Err(format!("tolerance {name} must be positive, got {value}"));
        }
        let known = Self::NAMES.join("|");
        let slot = self.slot(name).ok_or_else(|| format!("unknown tolerance {name:?} ({known})"))?;
        *slot = Some(value);
        Ok(())
    }

    fn validate(&self) -> Result<(), String> {
        let mut copy = Tolerances::default();
        for (name, v) in Self::NAMES.iter().zip(self.values()) {
            if let Some(v) = v {
                copy.set(name, v)?;
            }
        }
        Ok(())
    }

    fn values(&self) -> [Option<f64>; 5] {
        [self.collinear, self.closure, self.quadrature, self.switch, self.expand]
    }

    fn merge(&mut self, over: &Tolerances) {
        for (name, v) in Self::NAMES.iter().zip(over.values()) {
            if let Some(v) = v {
                *self.slot(name).expect("known name") = Some(v);
            }
        }
    }
}

/// Contents of a config file. Unknown keys are rejected.
#[derive(Debug, Clone, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Config {
    pub mode: Option<Mode>,
    pub output: Option<Format>,
    pub seed: Option<u64>,
    #[serde(default)]
    pub tolerances: Tolerances,
}

impl Config {
    pub fn parse(text: &str) -> Result<Self, String> {
        let c: Config = toml::from_str(text).map_err(|e| format!("config: {}", e.message()))?;
        c.tolerances.validate().map_err(|e| format!("config: {e}"))?;
        Ok(c)
    }

    pub fn load(path: &Path) -> Result<Self, String> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| format!("config {}: {e}", path.display()))?;
        Self::parse(&text)
    }

    /// `explicit` if given, else the file named by [`CONFIG_ENV`], else defaults.
    pub fn discover(explicit: Option<&Path>) -> Result<Self, String> {
        let env = std::env::var_os(CONFIG_ENV).map(PathBuf::from);
        match explicit.map(Path::to_path_buf).or(env) {
            Some(p) => Self::load(&p),
            None => Ok(Config::default()),
        }
    }
}

/// Effective settings of one invocation.
#[derive(Debug, Clone, PartialEq)]
pub struct Settings {
    /// `None`: exact unless some scalar is written as a decimal.
    pub mode: Option<Mode>,
    pub format: Format,
    pub seed: u64,
    pub tolerances: Tolerances,
}

impl Settings {
    /// Flags win over the config file.
    pub fn resolve(
        config: Config,
        mode: Option<Mode>,
        format: Option<Format>,
        seed: Option<u64>,
        overrides: &Tolerances,
    ) -> Self {
        let mut tolerances = config.tolerances;
        tolerances.merge(overrides);
        Settings {
            mode: mode.or(config.mode),
            format: format.or(config.output).unwrap_or_default(),
            seed: seed.or(config.seed).unwrap_or(DEFAULT_SEED),
            tolerances,
        }
    }

    pub fn polyline_tol(&self) -> Tolerance {
        Tolerance {
            collinear: self.tolerances.collinear.unwrap_or(COLLINEAR_TOL),
            closure: self.tolerances.closure.unwrap_or(CLOSURE_TOL),
        }
    }

    pub fn quadrature_tol(&self) -> f64 {
        self.tolerances.quadrature.unwrap_or(REL_TOL)
    }

    pub fn switch_tol(&self) -> f64 {
        self.tolerances.switch.unwrap_or(SWITCH_TOL)
    }

    pub fn expand_tol(&self) -> f64 {
        self.tolerances.expand.unwrap_or(EXPAND_TOL)
    }
}
