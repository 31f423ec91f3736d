//! CSV tables, JSON sidecars and gnuplot scripts.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use super::config::ExperimentConfig;
use super::experiments::run_experiment;
use super::CliError;

/// One numeric table; `suffix` is appended to the output stem.
#[derive(Debug, Clone, PartialEq)]
pub struct CurveRecord {
    pub suffix: String,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

impl CurveRecord {
    pub fn new(suffix: &str, columns: &[&str], rows: Vec<Vec<f64>>) -> Self {
        debug_assert!(rows.iter().all(|r| r.len() == columns.len()));
        Self { suffix: suffix.to_string(), columns: columns.iter().map(|c| c.to_string()).collect(), rows }
    }

    /// Comma-separated, header row, 17 significant digits, LF endings.
    pub fn to_csv(&self) -> String {
        let mut s = self.columns.join(",");
        s.push('\n');
        for row in &self.rows {
            for (i, v) in row.iter().enumerate() {
                if i > 0 {
                    s.push(',');
                }
                let _ = write!(s, "{v:.16e}");
            }
            s.push('\n');
        }
        s
    }

    fn gnuplot(&self, csv_name: &str) -> String {
        let mut s = String::from("set datafile separator ','\nset key autotitle columnhead\n");
        let _ = writeln!(s, "set xlabel '{}'", self.columns[0]);
        let series: Vec<String> =
            (2..=self.columns.len()).map(|c| format!("'{csv_name}' using 1:{c} with lines")).collect();
        let _ = writeln!(s, "plot {}", series.join(", \\\n     "));
        s
    }
}

/// Runs `cfg.experiment` with `params` and writes every record under `dir`.
/// Returns the CSV paths.
pub fn run_and_write(
    cfg: &ExperimentConfig,
    params: &toml::Table,
    dir: &Path,
    stem: &str,
    sweep_point: Option<&serde_json::Value>,
) -> Result<Vec<PathBuf>, CliError> {
    let records = run_experiment(cfg.experiment, params)?;
    fs::create_dir_all(dir)?;
    let mut written = Vec::new();
    for rec in &records {
        let base = format!("{stem}{}", rec.suffix);
        let csv = dir.join(format!("{base}.csv"));
        fs::write(&csv, rec.to_csv())?;
        let meta = serde_json::json!({
            "experiment": cfg.experiment,
            "description": cfg.experiment.description(),
            "conventions": cfg.experiment.conventions(),
            "version": env!("CARGO_PKG_VERSION"),
            "columns": rec.columns,
            "rows": rec.rows.len(),
            "params": params,
            "sweep_point": sweep_point,
            "config": point_config(cfg, params),
        });
        let text = serde_json::to_string_pretty(&meta).map_err(|e| CliError::Io(e.into()))?;
        fs::write(dir.join(format!("{base}.meta.json")), text + "\n")?;
        if cfg.output.plot {
            fs::write(dir.join(format!("{base}.gp")), rec.gnuplot(&format!("{base}.csv")))?;
        }
        written.push(csv);
    }
    Ok(written)
}

/// Config text that regenerates this output: the original file for a plain
/// run, or the file with the sweep point substituted.
fn point_config(cfg: &ExperimentConfig, params: &toml::Table) -> String {
    if cfg.sweep.is_empty() {
        return cfg.source.clone();
    }
    let mut doc = toml::Table::new();
    doc.insert("experiment".into(), toml::Value::String(cfg.experiment.name().into()));
    doc.insert("params".into(), toml::Value::Table(params.clone()));
    toml::to_string(&doc).unwrap_or_default()
}
