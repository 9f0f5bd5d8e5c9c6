use std::path::{Path, PathBuf};

use rayon::prelude::*;

use super::config::ExperimentConfig;
use super::run::run_experiment;
use crate::error::{Error, Result};
use crate::record::format_param;

/// `start:step:end` (inclusive) or a single value. Values are rounded to 12
/// decimals so `0.7:0.1:1.9` yields `0.8`, not `0.7999999999999999`.
pub fn parse_alpha_grid(spec: &str) -> Result<Vec<f64>> {
    let nums = spec
        .split(':')
        .map(|p| {
            p.trim()
                .parse::<f64>()
                .map_err(|e| Error::invalid(format!("alpha grid {spec:?}: {e}")))
        })
        .collect::<Result<Vec<f64>>>()?;
    let round = |x: f64| (x * 1e12).round() / 1e12;
    match nums.as_slice() {
        [a] => Ok(vec![*a]),
        [start, step, end] if *step > 0.0 && end >= start => {
            let count = ((end - start) / step + 1e-9).floor() as usize + 1;
            Ok((0..count).map(|i| round(start + i as f64 * step)).collect())
        }
        _ => Err(Error::invalid(format!(
            "alpha grid must be start:step:end with step > 0, got {spec:?}"
        ))),
    }
}

/// `a..b` (exclusive), `a..=b` or a single seed.
pub fn parse_seed_range(spec: &str) -> Result<Vec<u64>> {
    let num = |s: &str| {
        s.trim()
            .parse::<u64>()
            .map_err(|e| Error::invalid(format!("seed range {spec:?}: {e}")))
    };
    let seeds: Vec<u64> = if let Some((a, b)) = spec.split_once("..=") {
        (num(a)?..=num(b)?).collect()
    } else if let Some((a, b)) = spec.split_once("..") {
        (num(a)?..num(b)?).collect()
    } else {
        vec![num(spec)?]
    };
    if seeds.is_empty() {
        return Err(Error::invalid(format!("seed range {spec:?} is empty")));
    }
    Ok(seeds)
}

pub fn sweep_file_name(alpha: f64, seed: u64) -> String {
    format!("alpha_{}_seed_{seed}.csv", format_param(alpha))
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepCell {
    pub alpha: f64,
    pub seed: u64,
    pub path: PathBuf,
    /// Set when the run blew up; the file holds the partial record.
    pub truncated_at: Option<f64>,
}

/// Runs `base` as `fnls` at every `α` and seed, one CSV per cell in `out_dir`.
///
/// Cells are independent and each writes only its own file, so the output
/// does not depend on `threads` (`None` uses rayon's default pool).
pub fn run_sweep(
    base: &ExperimentConfig,
    alphas: &[f64],
    seeds: &[u64],
    out_dir: &Path,
    threads: Option<usize>,
) -> Result<Vec<SweepCell>> {
    let mut cells = Vec::new();
    for &alpha in alphas {
        for &seed in seeds {
            let mut config = base.with_alpha(alpha)?;
            config.seed = seed;
            config.output = Some(out_dir.join(sweep_file_name(alpha, seed)));
            cells.push(config);
        }
    }
    std::fs::create_dir_all(out_dir)?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads.unwrap_or(0))
        .build()
        .map_err(|e| Error::invalid(format!("thread pool: {e}")))?;
    let results: Vec<Result<SweepCell>> = pool.install(|| {
        cells
            .par_iter()
            .map(|config| {
                let alpha = config.variant.alpha().expect("fnls");
                let path = config.output.clone().expect("set above");
                let truncated_at = match run_experiment(config) {
                    Ok(_) => None,
                    Err(Error::NonFinite { last_valid_time, .. }) => Some(last_valid_time),
                    Err(e) => return Err(e),
                };
                Ok(SweepCell {
                    alpha,
                    seed: config.seed,
                    path,
                    truncated_at,
                })
            })
            .collect()
    });
    results.into_iter().collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grids() {
        let a = parse_alpha_grid("0.7:0.1:1.9").unwrap();
        assert_eq!(a.len(), 13);
        assert_eq!(a[1], 0.8);
        assert_eq!(a[12], 1.9);
        assert_eq!(parse_alpha_grid("1.5").unwrap(), vec![1.5]);
        assert!(parse_alpha_grid("1:0:2").is_err());
        assert!(parse_alpha_grid("2:0.1:1").is_err());
        assert_eq!(parse_seed_range("0..8").unwrap(), (0..8).collect::<Vec<u64>>());
        assert_eq!(parse_seed_range("3..=4").unwrap(), vec![3, 4]);
        assert_eq!(parse_seed_range("5").unwrap(), vec![5]);
        assert!(parse_seed_range("4..4").is_err());
        assert!(parse_seed_range("a..b").is_err());
        assert_eq!(sweep_file_name(0.8, 3), "alpha_0.8_seed_3.csv");
    }

    #[test]
    fn parallel_matches_serial() {
        let base = ExperimentConfig {
            max_mode: 8,
            t_final: 0.1,
            ..ExperimentConfig::default()
        };
        let alphas = parse_alpha_grid("0.8:0.6:2").unwrap();
        let seeds = parse_seed_range("0..2").unwrap();
        let (d1, d4) = (tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap());
        let serial = run_sweep(&base, &alphas, &seeds, d1.path(), Some(1)).unwrap();
        let parallel = run_sweep(&base, &alphas, &seeds, d4.path(), Some(4)).unwrap();
        assert_eq!(serial.len(), 6);
        for (a, b) in serial.iter().zip(&parallel) {
            assert_eq!(a.path.file_name(), b.path.file_name());
            assert_eq!(std::fs::read(&a.path).unwrap(), std::fs::read(&b.path).unwrap());
        }
    }
}
