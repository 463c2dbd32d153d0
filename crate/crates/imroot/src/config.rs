//! Run configuration: defaults, JSON config file, flag overrides, and the
//! stable config hash embedded in every report.

use kmlie::cartan::{CartanError, CartanMatrix};
use serde::Deserialize;
use serde_json::Value;
use std::path::PathBuf;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OutputFormat {
    Text,
    Json,
    Csv,
    Svg,
}

impl OutputFormat {
    pub fn parse(s: &str) -> Result<Self, String> {
        match s {
            "text" => Ok(OutputFormat::Text),
            "json" => Ok(OutputFormat::Json),
            "csv" => Ok(OutputFormat::Csv),
            "svg" => Ok(OutputFormat::Svg),
            other => Err(format!("unknown format '{other}' (text|json|csv|svg)")),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            OutputFormat::Text => "text",
            OutputFormat::Json => "json",
            OutputFormat::Csv => "csv",
            OutputFormat::Svg => "svg",
        }
    }
}

/// JSON config file schema; unknown keys are rejected.
#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigFile {
    pub cartan: Option<Value>,
    pub cutoff: Option<i64>,
    pub window: Option<u32>,
    pub tol: Option<f64>,
    pub format: Option<String>,
    pub out: Option<PathBuf>,
    pub max_exact_height: Option<i64>,
}

/// Effective run configuration after merging defaults, the config file and
/// command-line flags (flags win).
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub cartan: CartanMatrix,
    pub cartan_source: String,
    pub cutoff: i64,
    pub window: u32,
    pub tol: f64,
    pub format: OutputFormat,
    pub out: Option<PathBuf>,
    pub max_exact_height: Option<i64>,
}

#[derive(Debug)]
pub enum ConfigError {
    Cartan(CartanError),
    Io(String),
    Parse(String),
    Invalid(String),
}

impl std::fmt::Display for ConfigError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            ConfigError::Cartan(e) => write!(f, "{e}"),
            ConfigError::Io(m) => write!(f, "io error: {m}"),
            ConfigError::Parse(m) => write!(f, "config parse error: {m}"),
            ConfigError::Invalid(m) => write!(f, "invalid configuration: {m}"),
        }
    }
}

impl std::error::Error for ConfigError {}

pub struct Overrides {
    pub cartan: Option<String>,
    pub config: Option<PathBuf>,
    pub cutoff: Option<i64>,
    pub window: Option<u32>,
    pub tol: Option<f64>,
    pub format: Option<String>,
    pub out: Option<PathBuf>,
    pub max_exact_height: Option<i64>,
}

impl RunConfig {
    pub fn build(ov: &Overrides) -> Result<Self, ConfigError> {
        let file: ConfigFile = match &ov.config {
            Some(path) => {
                let text = std::fs::read_to_string(path)
                    .map_err(|e| ConfigError::Io(format!("{}: {e}", path.display())))?;
                serde_json::from_str(&text).map_err(|e| ConfigError::Parse(e.to_string()))?
            }
            None => ConfigFile::default(),
        };
        let (cartan, cartan_source) = if let Some(flag) = &ov.cartan {
            (
                CartanMatrix::parse_flag(flag).map_err(ConfigError::Cartan)?,
                flag.clone(),
            )
        } else if let Some(v) = &file.cartan {
            let cm = match v {
                Value::String(s) => CartanMatrix::parse_flag(s).map_err(ConfigError::Cartan)?,
                other => CartanMatrix::from_json_str(&other.to_string())
                    .map_err(ConfigError::Cartan)?,
            };
            (cm, v.to_string())
        } else {
            (
                CartanMatrix::rank2(-3).expect("valid default"),
                "2,-3;-3,2".to_string(),
            )
        };
        let cutoff = ov.cutoff.or(file.cutoff).unwrap_or(8);
        if cutoff < 1 {
            return Err(ConfigError::Invalid("cutoff must be >= 1".into()));
        }
        let window = ov.window.or(file.window).unwrap_or(4);
        let tol = ov.tol.or(file.tol).unwrap_or(1e-8);
        if !(tol > 0.0) {
            return Err(ConfigError::Invalid("tol must be positive".into()));
        }
        let format = match ov.format.as_deref().or(file.format.as_deref()) {
            Some(s) => OutputFormat::parse(s).map_err(ConfigError::Invalid)?,
            None => OutputFormat::Text,
        };
        let out = ov.out.clone().or(file.out);
        let max_exact_height = ov.max_exact_height.or(file.max_exact_height);
        if let Some(h) = max_exact_height {
            if h < 1 {
                return Err(ConfigError::Invalid("max-exact-height must be >= 1".into()));
            }
        }
        Ok(RunConfig {
            cartan,
            cartan_source,
            cutoff,
            window,
            tol,
            format,
            out,
            max_exact_height,
        })
    }

    pub fn algebra(&self) -> kmlie::Algebra {
        let alg = kmlie::Algebra::new(self.cartan.clone());
        match self.max_exact_height {
            Some(h) => alg.with_max_exact_height(h),
            None => alg,
        }
    }

    /// FNV-1a hash of the canonical config string; identical configurations
    /// hash identically across runs.
    pub fn hash(&self) -> String {
        let canonical = format!(
            "cartan={};cutoff={};window={};tol={};format={};max_exact_height={:?}",
            self.cartan_source,
            self.cutoff,
            self.window,
            self.tol,
            self.format.name(),
            self.max_exact_height,
        );
        let mut h: u64 = 0xcbf29ce484222325;
        for b in canonical.bytes() {
            h ^= b as u64;
            h = h.wrapping_mul(0x100000001b3);
        }
        format!("{h:016x}")
    }
}
