//! Cartesian-product parameter sweeps.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use rayon::prelude::*;

use super::config::{set_path, ExperimentConfig};
use super::output::run_and_write;
use super::CliError;

#[derive(Debug, Clone, PartialEq)]
pub struct SweepSummary {
    pub index: PathBuf,
    pub total: usize,
    pub succeeded: usize,
}

/// All combinations of the axis values, last axis fastest.
pub fn cartesian(axes: &[Vec<f64>]) -> Vec<Vec<f64>> {
    axes.iter().fold(vec![Vec::new()], |acc, axis| {
        acc.iter()
            .flat_map(|prefix| {
                axis.iter().map(move |&v| {
                    let mut p = prefix.clone();
                    p.push(v);
                    p
                })
            })
            .collect()
    })
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\"").replace('\n', " "))
    } else {
        s.to_string()
    }
}

/// Runs every point, writing `<stem>_pNNNN.*` files and `<stem>_index.csv`.
/// A failing point is recorded in the index and does not stop the others.
pub fn run_sweep(cfg: &ExperimentConfig, dir: &Path, workers: Option<usize>) -> Result<SweepSummary, CliError> {
    let names: Vec<&String> = cfg.sweep.keys().collect();
    let axes = cfg.sweep.values().map(|a| a.values()).collect::<Result<Vec<_>, _>>()?;
    let points = cartesian(&axes);
    let stem = cfg.stem();
    std::fs::create_dir_all(dir)?;

    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(n) = workers {
        if n == 0 {
            return Err(CliError::Config("--workers must be at least 1".into()));
        }
        builder = builder.num_threads(n);
    }
    let pool = builder.build().map_err(|e| CliError::Config(e.to_string()))?;

    let outcomes: Vec<Result<Vec<PathBuf>, CliError>> = pool.install(|| {
        points
            .par_iter()
            .enumerate()
            .map(|(i, values)| {
                let mut params = cfg.params.clone();
                let mut point = serde_json::Map::new();
                for (name, &v) in names.iter().zip(values) {
                    set_path(&mut params, name, v)?;
                    point.insert((*name).clone(), serde_json::json!(v));
                }
                run_and_write(cfg, &params, dir, &format!("{stem}_p{i:04}"), Some(&serde_json::Value::Object(point)))
            })
            .collect()
    });

    let mut index = String::from("point");
    for n in &names {
        let _ = write!(index, ",{}", csv_field(n));
    }
    index.push_str(",status,files,message\n");
    let mut succeeded = 0;
    for (i, (values, outcome)) in points.iter().zip(&outcomes).enumerate() {
        let _ = write!(index, "{i}");
        for v in values {
            let _ = write!(index, ",{v:.16e}");
        }
        match outcome {
            Ok(files) => {
                succeeded += 1;
                let names: Vec<String> = files
                    .iter()
                    .map(|f| f.file_name().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default())
                    .collect();
                let _ = writeln!(index, ",ok,{},", csv_field(&names.join(";")));
            }
            Err(e) => {
                let _ = writeln!(index, ",error {},,{}", e.exit_code(), csv_field(&e.to_string()));
            }
        }
    }
    let path = dir.join(format!("{stem}_index.csv"));
    std::fs::write(&path, index)?;
    Ok(SweepSummary { index: path, total: points.len(), succeeded })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn product_order() {
        let p = cartesian(&[vec![1.0, 2.0], vec![3.0, 4.0]]);
        assert_eq!(p, vec![vec![1.0, 3.0], vec![1.0, 4.0], vec![2.0, 3.0], vec![2.0, 4.0]]);
        assert_eq!(cartesian(&[]), vec![Vec::<f64>::new()]);
    }
}
