//! TOML experiment configuration.
//!
//! ```toml
//! experiment = "cavity"
//!
//! [output]
//! dir = "out"
//! plot = true
//!
//! [params]
//! g_eff = 10.0
//! nbar = 0.05
//! gamma_t = { start = 0.0, stop = 5.0, points = 101 }
//!
//! [sweep]
//! nbar = [0.05, 0.1]
//! ```

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use serde::Deserialize;

use super::experiments::ExperimentId;
use super::CliError;

/// A list of values or an inclusive linear range.
#[derive(Debug, Clone, PartialEq, serde::Serialize, Deserialize)]
#[serde(untagged)]
pub enum Axis {
    List(Vec<f64>),
    Range { start: f64, stop: f64, points: usize },
}

impl Axis {
    pub fn values(&self) -> Result<Vec<f64>, CliError> {
        let v = match self {
            Axis::List(v) => v.clone(),
            Axis::Range { start, stop, points } => {
                if *points < 2 {
                    return Err(CliError::Config(format!("range needs at least 2 points, got {points}")));
                }
                let step = (stop - start) / (*points - 1) as f64;
                (0..*points).map(|i| if i + 1 == *points { *stop } else { start + i as f64 * step }).collect()
            }
        };
        if v.is_empty() {
            return Err(CliError::Config("axis has no values".into()));
        }
        if v.iter().any(|x| !x.is_finite()) {
            return Err(CliError::Config("axis values must be finite".into()));
        }
        Ok(v)
    }
}

#[derive(Debug, Clone, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputSpec {
    pub dir: Option<PathBuf>,
    /// File stem; defaults to the config file stem.
    pub stem: Option<String>,
    /// Also write a gnuplot script.
    #[serde(default)]
    pub plot: bool,
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub experiment: ExperimentId,
    #[serde(default)]
    pub output: OutputSpec,
    #[serde(default)]
    pub params: toml::Table,
    /// Parameter path (dots select nested tables) to the values it takes.
    #[serde(default)]
    pub sweep: BTreeMap<String, Axis>,
    #[serde(skip)]
    pub source: String,
    #[serde(skip)]
    pub path: PathBuf,
}

impl ExperimentConfig {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)?;
        let mut cfg = Self::parse(&text)?;
        cfg.path = path.to_path_buf();
        Ok(cfg)
    }

    pub fn parse(text: &str) -> Result<Self, CliError> {
        let mut cfg: Self = toml::from_str(text).map_err(|e| CliError::Config(e.to_string()))?;
        cfg.source = text.to_string();
        // schema check before any work
        cfg.experiment.validate(&cfg.params)?;
        for (key, axis) in &cfg.sweep {
            let first = axis.values()?[0];
            let mut probe = cfg.params.clone();
            set_path(&mut probe, key, first)?;
            cfg.experiment.validate(&probe)?;
        }
        Ok(cfg)
    }

    pub fn output_dir(&self) -> PathBuf {
        self.output.dir.clone().unwrap_or_else(|| PathBuf::from("out"))
    }

    pub fn stem(&self) -> String {
        self.output.stem.clone().unwrap_or_else(|| {
            self.path
                .file_stem()
                .map(|s| s.to_string_lossy().into_owned())
                .unwrap_or_else(|| self.experiment.name().to_string())
        })
    }
}

/// Sets `params[a][b]...` for the dotted `key` to `value`.
pub fn set_path(params: &mut toml::Table, key: &str, value: f64) -> Result<(), CliError> {
    let mut parts: Vec<&str> = key.split('.').collect();
    let last = parts.pop().filter(|s| !s.is_empty()).ok_or_else(|| CliError::Config(format!("bad sweep key `{key}`")))?;
    let mut table = params;
    for p in parts {
        table = table
            .entry(p)
            .or_insert_with(|| toml::Value::Table(toml::Table::new()))
            .as_table_mut()
            .ok_or_else(|| CliError::Config(format!("sweep key `{key}`: `{p}` is not a table")))?;
    }
    let v = match table.get(last) {
        Some(toml::Value::Integer(_)) if value.fract() == 0.0 => toml::Value::Integer(value as i64),
        _ => toml::Value::Float(value),
    };
    table.insert(last.to_string(), v);
    Ok(())
}
