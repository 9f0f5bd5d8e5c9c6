use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use super::config::{ExperimentConfig, InitialData};
use crate::dynamics::{evolve, Sampling};
use crate::error::{Error, Result};
use crate::record::TrajectoryRecord;

/// `#` lines written above the CSV header: version, generator and config echo.
pub fn csv_preamble(config: &ExperimentConfig) -> Vec<String> {
    let mut lines = vec![
        format!("fracwave {}", env!("CARGO_PKG_VERSION")),
        format!(
            "rng = ChaCha8 seed_from_u64({}), stream 0 (u or u1), stream 1 (u2)",
            config.seed
        ),
    ];
    if matches!(config.initial, InitialData::Random { .. }) {
        lines.push("initial data = seeded random ensemble; this is a modelling choice, not canonical data".into());
    }
    // The output path is left out so a file does not depend on where it was written.
    let echo = ExperimentConfig {
        output: None,
        ..config.clone()
    };
    lines.extend(echo.to_string().lines().map(|l| format!("config: {l}")));
    lines
}

pub fn write_record(config: &ExperimentConfig, record: &TrajectoryRecord, path: &Path) -> Result<()> {
    let mut out = BufWriter::new(File::create(path)?);
    record.write_csv(&mut out, &csv_preamble(config))?;
    out.flush()?;
    Ok(())
}

/// Runs `config` and writes the CSV to `config.output` if set.
///
/// On blow-up the partial record is still written, ending with the
/// truncation marker, and the `NonFinite` error is returned.
pub fn run_experiment(config: &ExperimentConfig) -> Result<TrajectoryRecord> {
    let initial = config.initial_state()?;
    let sampling = Sampling {
        sobolev: config.norms.clone(),
        energies: config.energies.clone(),
        keep_states: false,
    };
    let result = evolve(
        &initial,
        &config.variant,
        config.t_final,
        config.dt,
        config.sample_every,
        &sampling,
    );
    if let Some(path) = &config.output {
        match &result {
            Ok(rec) => write_record(config, rec, path)?,
            Err(Error::NonFinite { partial, .. }) => write_record(config, partial, path)?,
            Err(_) => {}
        }
    }
    result
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::EvolutionSpec;
    use num_complex::Complex64;

    #[test]
    fn plane_wave_norms_are_constant() {
        let config = ExperimentConfig {
            variant: EvolutionSpec::fractional_nls(1.5).unwrap(),
            max_mode: 8,
            t_final: 2.0,
            initial: InitialData::Explicit {
                coeffs: vec![(3, Complex64::new(0.7, 0.2))],
                coeffs2: vec![],
            },
            norms: vec![0.0, 1.0, 2.5],
            ..ExperimentConfig::default()
        };
        let rec = run_experiment(&config).unwrap();
        for col in ["hs_0", "hs_1", "hs_2.5", "linf"] {
            let d = rec.relative_drift(col).unwrap();
            assert!(d < 1e-12, "{col} {d}");
        }
    }

    #[test]
    fn same_seed_same_bytes() {
        let dir = tempfile::tempdir().unwrap();
        let mut config = ExperimentConfig {
            energies: vec![(1.5, 0)],
            seed: 4,
            ..ExperimentConfig::default()
        };
        let mut files = Vec::new();
        for name in ["a.csv", "b.csv"] {
            config.output = Some(dir.path().join(name));
            run_experiment(&config).unwrap();
            files.push(std::fs::read(dir.path().join(name)).unwrap());
        }
        assert_eq!(files[0], files[1]);
        let text = String::from_utf8(files.remove(0)).unwrap();
        assert!(text.starts_with("# fracwave "));
        assert!(text.contains("modelling choice"));
        assert!(text.contains("# config: seed = 4"));
        assert!(text
            .lines()
            .any(|l| l == "t,hs_0.5,hs_1,linf,mass,momentum,hamiltonian,energy_a1.5_n0"));
    }

    #[test]
    fn blowup_keeps_partial_csv() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("blow.csv");
        let config = ExperimentConfig {
            max_mode: 8,
            dt: 0.1,
            sample_every: 1,
            initial: InitialData::Explicit {
                coeffs: vec![(2, Complex64::new(1e200, 0.0))],
                coeffs2: vec![],
            },
            output: Some(path.clone()),
            ..ExperimentConfig::default()
        };
        let err = run_experiment(&config).unwrap_err();
        let Error::NonFinite { last_valid_time, .. } = err else {
            panic!("{err}")
        };
        let text = std::fs::read_to_string(&path).unwrap();
        assert!(text
            .trim_end()
            .ends_with(&format!("# truncated at t = {last_valid_time:?}")));
    }
}
