//! Time-sampled observables of one run and their CSV form.
//!
//! The CSV layout is a block of `#` comment lines (configuration echo and
//! provenance), one header line, then one row per sample. Floats are written
//! in the shortest form that parses back to the same `f64`. A run cut short
//! by a non-finite state ends with a `# truncated at t = ...` line.

use std::io::{self, BufRead, Write};

use crate::dynamics::State;
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct TrajectoryRecord {
    columns: Vec<String>,
    rows: Vec<Vec<f64>>,
    states: Vec<State>,
    truncated_at: Option<f64>,
}

impl TrajectoryRecord {
    /// Empty record; the first column must be `t`.
    pub fn new(columns: Vec<String>) -> Self {
        assert_eq!(
            columns.first().map(String::as_str),
            Some("t"),
            "first column must be time"
        );
        TrajectoryRecord {
            columns,
            rows: Vec::new(),
            states: Vec::new(),
            truncated_at: None,
        }
    }

    pub fn push(&mut self, row: Vec<f64>) {
        assert_eq!(row.len(), self.columns.len(), "row width");
        self.rows.push(row);
    }

    pub(crate) fn push_state(&mut self, state: State) {
        self.states.push(state);
    }

    pub(crate) fn set_truncated(&mut self, t: f64) {
        self.truncated_at = Some(t);
    }

    pub(crate) fn reverse_time(&mut self) {
        self.rows.reverse();
        self.states.reverse();
        for row in &mut self.rows {
            row[0] = -row[0];
        }
        for s in &mut self.states {
            *s = s.conj_coeffs();
        }
        if let Some(t) = self.truncated_at.as_mut() {
            *t = -*t;
        }
    }

    pub fn columns(&self) -> &[String] {
        &self.columns
    }

    pub fn rows(&self) -> &[Vec<f64>] {
        &self.rows
    }

    /// States at the sample times, if they were kept.
    pub fn states(&self) -> &[State] {
        &self.states
    }

    pub fn truncated_at(&self) -> Option<f64> {
        self.truncated_at
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn times(&self) -> Vec<f64> {
        self.column("t").expect("time column")
    }

    pub fn column(&self, name: &str) -> Option<Vec<f64>> {
        let idx = self.columns.iter().position(|c| c == name)?;
        Some(self.rows.iter().map(|r| r[idx]).collect())
    }

    /// `max_i |x_i - x_0| / |x_0|` for a column (absolute drift if `x_0 = 0`).
    pub fn relative_drift(&self, name: &str) -> Option<f64> {
        let xs = self.column(name)?;
        let x0 = *xs.first()?;
        let dev = xs.iter().map(|x| (x - x0).abs()).fold(0.0, f64::max);
        Some(if x0 == 0.0 { dev } else { dev / x0.abs() })
    }

    pub fn write_csv(&self, out: &mut impl Write, preamble: &[String]) -> io::Result<()> {
        for line in preamble {
            writeln!(out, "# {line}")?;
        }
        writeln!(out, "{}", self.columns.join(","))?;
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(|x| format_float(*x)).collect();
            writeln!(out, "{}", cells.join(","))?;
        }
        if let Some(t) = self.truncated_at {
            writeln!(out, "# truncated at t = {}", format_float(t))?;
        }
        Ok(())
    }

    /// Parses the output of [`write_csv`](Self::write_csv); comment lines other
    /// than the truncation marker are skipped.
    pub fn read_csv(input: impl BufRead) -> Result<Self> {
        let mut rec: Option<TrajectoryRecord> = None;
        let mut truncated = None;
        for (i, line) in input.lines().enumerate() {
            let line = line?;
            let bad = |message: String| Error::Config { line: i + 1, message };
            if let Some(rest) = line.strip_prefix('#') {
                if let Some(t) = rest.trim().strip_prefix("truncated at t = ") {
                    truncated = Some(t.parse::<f64>().map_err(|e| bad(e.to_string()))?);
                }
                continue;
            }
            if line.trim().is_empty() {
                continue;
            }
            match rec.as_mut() {
                None => {
                    let columns: Vec<String> = line.split(',').map(|c| c.trim().to_string()).collect();
                    if columns[0] != "t" {
                        return Err(bad(format!("first column must be t, got {:?}", columns[0])));
                    }
                    rec = Some(TrajectoryRecord::new(columns));
                }
                Some(r) => {
                    let row = line
                        .split(',')
                        .map(|c| c.trim().parse::<f64>().map_err(|e| bad(format!("{c:?}: {e}"))))
                        .collect::<Result<Vec<f64>>>()?;
                    if row.len() != r.columns.len() {
                        return Err(bad(format!("expected {} fields, got {}", r.columns.len(), row.len())));
                    }
                    r.rows.push(row);
                }
            }
        }
        let mut rec = rec.ok_or_else(|| Error::InsufficientSamples("no header line".into()))?;
        rec.truncated_at = truncated;
        Ok(rec)
    }
}

/// Shortest round-trip representation.
pub fn format_float(x: f64) -> String {
    format!("{x:?}")
}

/// Compact label for a parameter inside a column or file name (`1.5`, `2`).
pub fn format_param(x: f64) -> String {
    format!("{x}")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> TrajectoryRecord {
        let mut r = TrajectoryRecord::new(vec!["t".into(), "mass".into()]);
        r.push(vec![0.0, 2.0]);
        r.push(vec![0.5, 2.0 + 1e-9]);
        r.push(vec![1.0, 2.0 - 3e-9]);
        r
    }

    #[test]
    fn columns_and_drift() {
        let r = sample();
        assert_eq!(r.times(), vec![0.0, 0.5, 1.0]);
        assert!((r.relative_drift("mass").unwrap() - 1.5e-9).abs() < 1e-15);
        assert!(r.column("missing").is_none());
    }

    #[test]
    fn csv_round_trips_floats() {
        let mut r = sample();
        r.set_truncated(1.0);
        let mut buf = Vec::new();
        r.write_csv(&mut buf, &["seed = 3".into()]).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], "# seed = 3");
        assert_eq!(lines[1], "t,mass");
        let back: f64 = lines[3].split(',').nth(1).unwrap().parse().unwrap();
        assert_eq!(back, 2.0 + 1e-9);
        assert_eq!(*lines.last().unwrap(), "# truncated at t = 1.0");
        assert_eq!(TrajectoryRecord::read_csv(text.as_bytes()).unwrap(), r);
    }

    #[test]
    fn csv_parse_errors_name_the_line() {
        let err = TrajectoryRecord::read_csv("t,a\n0,1\n1,x\n".as_bytes()).unwrap_err();
        assert!(matches!(err, Error::Config { line: 3, .. }), "{err}");
        assert!(TrajectoryRecord::read_csv("# only comments\n".as_bytes()).is_err());
        assert!(TrajectoryRecord::read_csv("x,t\n".as_bytes()).is_err());
    }

    #[test]
    fn param_labels() {
        assert_eq!(format_param(2.0), "2");
        assert_eq!(format_param(1.5), "1.5");
    }
}
