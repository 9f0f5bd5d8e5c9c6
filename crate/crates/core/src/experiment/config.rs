use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use num_complex::Complex64;

use crate::dynamics::{EvolutionSpec, PairField, State};
use crate::energies::ModifiedEnergyParams;
use crate::error::{Error, Result};
use crate::initial::{member_rng, random_field_from};
use crate::record::{format_float, format_param};
use crate::torus::TorusField;

#[derive(Debug, Clone, PartialEq)]
pub enum InitialData {
    /// Seeded random data, see [`crate::initial`]. Pairs draw `u₂` from stream 1.
    Random { sigma: f64, amplitude: f64 },
    /// Listed coefficients `(k, u_k)`; `coeffs2` is the second component of a pair.
    Explicit {
        coeffs: Vec<(i64, Complex64)>,
        coeffs2: Vec<(i64, Complex64)>,
    },
}

/// One run, read from `key = value` lines.
///
/// ```text
/// variant = fnls        # fnls | halfwave | szego | pair
/// alpha = 1.5           # fnls only
/// max_mode = 64
/// dt = 1e-3
/// t_final = 10
/// sample_every = 10
/// init = random         # random | explicit
/// sigma = 2             # random
/// amplitude = 1         # random
/// coeffs = 1:0.5, -2:0.1:0.3   # explicit, k:re[:im]
/// coeffs2 = 0:1         # explicit, second pair component
/// norms = 0.5, 1, 2
/// energies = 1.5:0, 1.5:1
/// output = run.csv
/// seed = 0
/// ```
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub variant: EvolutionSpec,
    pub max_mode: usize,
    pub dt: f64,
    pub t_final: f64,
    pub sample_every: usize,
    pub initial: InitialData,
    pub norms: Vec<f64>,
    pub energies: Vec<(f64, u32)>,
    pub output: Option<PathBuf>,
    pub seed: u64,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        ExperimentConfig {
            variant: EvolutionSpec::FractionalNls { alpha: 1.5 },
            max_mode: 32,
            dt: 1e-3,
            t_final: 1.0,
            sample_every: 10,
            initial: InitialData::Random {
                sigma: 2.0,
                amplitude: 1.0,
            },
            norms: vec![0.5, 1.0],
            energies: Vec::new(),
            output: None,
            seed: 0,
        }
    }
}

const KEYS: [&str; 15] = [
    "variant",
    "alpha",
    "max_mode",
    "dt",
    "t_final",
    "sample_every",
    "init",
    "sigma",
    "amplitude",
    "coeffs",
    "coeffs2",
    "norms",
    "energies",
    "output",
    "seed",
];

fn list(v: &str) -> impl Iterator<Item = &str> {
    v.split(',').map(str::trim).filter(|s| !s.is_empty())
}

fn parse_coeffs(v: &str) -> std::result::Result<Vec<(i64, Complex64)>, String> {
    list(v)
        .map(|item| {
            let parts: Vec<&str> = item.split(':').map(str::trim).collect();
            let num = |s: &str| s.parse::<f64>().map_err(|e| format!("{s:?}: {e}"));
            match parts.as_slice() {
                [k, re] => Ok((
                    k.parse::<i64>().map_err(|e| format!("{k:?}: {e}"))?,
                    Complex64::new(num(re)?, 0.0),
                )),
                [k, re, im] => Ok((
                    k.parse::<i64>().map_err(|e| format!("{k:?}: {e}"))?,
                    Complex64::new(num(re)?, num(im)?),
                )),
                _ => Err(format!("expected k:re or k:re:im, got {item:?}")),
            }
        })
        .collect()
}

fn show_coeffs(c: &[(i64, Complex64)]) -> String {
    let items: Vec<String> = c
        .iter()
        .map(|(k, z)| format!("{k}:{}:{}", format_float(z.re), format_float(z.im)))
        .collect();
    items.join(", ")
}

impl FromStr for ExperimentConfig {
    type Err = Error;

    fn from_str(text: &str) -> Result<Self> {
        let mut entries: Vec<(&str, &str, usize)> = Vec::new();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let err = |message: String| Error::Config { line: i + 1, message };
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| err(format!("expected key = value, got {line:?}")))?;
            let key = key.trim();
            if !KEYS.contains(&key) {
                return Err(err(format!("unknown key {key:?}")));
            }
            if entries.iter().any(|e| e.0 == key) {
                return Err(err(format!("duplicate key {key:?}")));
            }
            entries.push((key, value.trim(), i + 1));
        }

        let get = |key: &str| entries.iter().find(|e| e.0 == key).map(|e| (e.1, e.2));
        let end = text.lines().count();
        let required = |key: &str| {
            get(key).ok_or(Error::Config {
                line: end,
                message: format!("missing key {key:?}"),
            })
        };
        fn parsed<T: FromStr>(v: (&str, usize)) -> Result<T>
        where
            T::Err: fmt::Display,
        {
            v.0.parse::<T>().map_err(|e| Error::Config {
                line: v.1,
                message: format!("{:?}: {e}", v.0),
            })
        }
        let at = |line: usize| move |message: String| Error::Config { line, message };

        let (variant_name, vline) = required("variant")?;
        let variant = match (variant_name, get("alpha")) {
            ("fnls", Some(a)) => EvolutionSpec::fractional_nls(parsed(a)?).map_err(|e| at(a.1)(e.to_string()))?,
            ("fnls", None) => return Err(at(vline)("variant fnls needs alpha".into())),
            (_, Some(a)) => return Err(at(a.1)(format!("alpha is fixed for variant {variant_name}"))),
            ("halfwave", None) => EvolutionSpec::HalfWave,
            ("szego", None) => EvolutionSpec::Szego,
            ("pair", None) => EvolutionSpec::QuadraticPair,
            _ => return Err(at(vline)(format!("unknown variant {variant_name:?}"))),
        };

        let defaults = ExperimentConfig::default();
        let initial = match get("init").map_or("random", |v| v.0) {
            "random" => {
                for key in ["coeffs", "coeffs2"] {
                    if let Some(v) = get(key) {
                        return Err(at(v.1)(format!("{key} needs init = explicit")));
                    }
                }
                let sigma = get("sigma").map(parsed).transpose()?.unwrap_or(2.0);
                let amplitude = get("amplitude").map(parsed).transpose()?.unwrap_or(1.0);
                InitialData::Random { sigma, amplitude }
            }
            "explicit" => {
                for key in ["sigma", "amplitude"] {
                    if let Some(v) = get(key) {
                        return Err(at(v.1)(format!("{key} needs init = random")));
                    }
                }
                let coeffs = required("coeffs").and_then(|v| parse_coeffs(v.0).map_err(at(v.1)))?;
                let coeffs2 = match get("coeffs2") {
                    Some(v) if !variant.is_pair() => return Err(at(v.1)("coeffs2 is for variant pair".into())),
                    Some(v) => parse_coeffs(v.0).map_err(at(v.1))?,
                    None => Vec::new(),
                };
                InitialData::Explicit { coeffs, coeffs2 }
            }
            other => return Err(at(get("init").map_or(end, |v| v.1))(format!("unknown init {other:?}"))),
        };

        let norms = match get("norms") {
            Some(v) => list(v.0).map(|s| parsed((s, v.1))).collect::<Result<Vec<f64>>>()?,
            None => defaults.norms.clone(),
        };
        let energies = match get("energies") {
            Some(v) => list(v.0)
                .map(|item| {
                    let (a, n) = item
                        .split_once(':')
                        .ok_or_else(|| at(v.1)(format!("expected alpha:n, got {item:?}")))?;
                    Ok((parsed((a.trim(), v.1))?, parsed((n.trim(), v.1))?))
                })
                .collect::<Result<Vec<(f64, u32)>>>()?,
            None => Vec::new(),
        };

        let config = ExperimentConfig {
            variant,
            max_mode: parsed(required("max_mode")?)?,
            dt: parsed(required("dt")?)?,
            t_final: parsed(required("t_final")?)?,
            sample_every: get("sample_every")
                .map(parsed)
                .transpose()?
                .unwrap_or(defaults.sample_every),
            initial,
            norms,
            energies,
            output: get("output").map(|v| PathBuf::from(v.0)),
            seed: get("seed").map(parsed).transpose()?.unwrap_or(0),
        };
        config.validate()?;
        Ok(config)
    }
}

impl ExperimentConfig {
    pub fn from_file(path: &Path) -> Result<Self> {
        std::fs::read_to_string(path)
            .map_err(|e| Error::Io(std::io::Error::new(e.kind(), format!("{}: {e}", path.display()))))?
            .parse()
    }

    pub fn validate(&self) -> Result<()> {
        if self.max_mode < 4 {
            return Err(Error::invalid(format!(
                "max_mode must be at least 4, got {}",
                self.max_mode
            )));
        }
        if !(self.dt > 0.0 && self.dt.is_finite()) {
            return Err(Error::invalid(format!("dt must be positive, got {}", self.dt)));
        }
        if self.t_final == 0.0 || !self.t_final.is_finite() {
            return Err(Error::invalid(format!(
                "t_final must be finite and nonzero, got {}",
                self.t_final
            )));
        }
        if self.sample_every == 0 {
            return Err(Error::invalid("sample_every must be at least 1"));
        }
        if let Some(s) = self.norms.iter().find(|s| !s.is_finite()) {
            return Err(Error::invalid(format!("norm exponent must be finite, got {s}")));
        }
        if !self.energies.is_empty() && self.variant.is_pair() {
            return Err(Error::invalid("modified energies are defined for scalar variants only"));
        }
        for &(alpha, n) in &self.energies {
            ModifiedEnergyParams::new(alpha, n)?;
        }
        match &self.initial {
            InitialData::Random { sigma, amplitude } => {
                if !(sigma.is_finite() && amplitude.is_finite() && *amplitude >= 0.0) {
                    return Err(Error::invalid(format!(
                        "bad random data sigma = {sigma}, amplitude = {amplitude}"
                    )));
                }
            }
            InitialData::Explicit { coeffs, coeffs2 } => {
                let km = self.max_mode as i64;
                for &(k, z) in coeffs.iter().chain(coeffs2) {
                    if k.abs() > km || !(z.re.is_finite() && z.im.is_finite()) {
                        return Err(Error::invalid(format!(
                            "coefficient {k}:{z} is out of band or not finite"
                        )));
                    }
                    if k < 0 && matches!(self.variant, EvolutionSpec::Szego) {
                        return Err(Error::invalid(format!("Szego data must have k >= 0, got mode {k}")));
                    }
                }
            }
        }
        Ok(())
    }

    /// The initial state described by the config.
    pub fn initial_state(&self) -> Result<State> {
        self.validate()?;
        let km = self.max_mode;
        let field =
            |c: &[(i64, Complex64)]| TorusField::from_fn(km, |k| c.iter().filter(|e| e.0 == k).map(|e| e.1).sum());
        let (u1, u2) = match &self.initial {
            InitialData::Random { sigma, amplitude } => (
                random_field_from(&mut member_rng(self.seed, 0), km, *sigma, *amplitude),
                random_field_from(&mut member_rng(self.seed, 1), km, *sigma, *amplitude),
            ),
            InitialData::Explicit { coeffs, coeffs2 } => (field(coeffs), field(coeffs2)),
        };
        Ok(match self.variant {
            EvolutionSpec::QuadraticPair => State::Pair(PairField::new(u1, u2)?),
            EvolutionSpec::Szego => State::Scalar(u1.szego_project()),
            _ => State::Scalar(u1),
        })
    }

    /// Same config with `fnls` at exponent `alpha`.
    pub fn with_alpha(&self, alpha: f64) -> Result<Self> {
        Ok(ExperimentConfig {
            variant: EvolutionSpec::fractional_nls(alpha)?,
            ..self.clone()
        })
    }
}

/// Canonical config text; parses back to an equal config.
impl fmt::Display for ExperimentConfig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "variant = {}", self.variant.name())?;
        if let EvolutionSpec::FractionalNls { alpha } = self.variant {
            writeln!(f, "alpha = {}", format_float(alpha))?;
        }
        writeln!(f, "max_mode = {}", self.max_mode)?;
        writeln!(f, "dt = {}", format_float(self.dt))?;
        writeln!(f, "t_final = {}", format_float(self.t_final))?;
        writeln!(f, "sample_every = {}", self.sample_every)?;
        match &self.initial {
            InitialData::Random { sigma, amplitude } => {
                writeln!(f, "init = random")?;
                writeln!(f, "sigma = {}", format_float(*sigma))?;
                writeln!(f, "amplitude = {}", format_float(*amplitude))?;
            }
            InitialData::Explicit { coeffs, coeffs2 } => {
                writeln!(f, "init = explicit")?;
                writeln!(f, "coeffs = {}", show_coeffs(coeffs))?;
                if !coeffs2.is_empty() {
                    writeln!(f, "coeffs2 = {}", show_coeffs(coeffs2))?;
                }
            }
        }
        let norms: Vec<String> = self.norms.iter().map(|s| format_float(*s)).collect();
        writeln!(f, "norms = {}", norms.join(", "))?;
        if !self.energies.is_empty() {
            let e: Vec<String> = self
                .energies
                .iter()
                .map(|(a, n)| format!("{}:{n}", format_param(*a)))
                .collect();
            writeln!(f, "energies = {}", e.join(", "))?;
        }
        if let Some(p) = &self.output {
            writeln!(f, "output = {}", p.display())?;
        }
        writeln!(f, "seed = {}", self.seed)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const SAMPLE: &str = "
        # fractional NLS
        variant = fnls
        alpha = 1.5
        max_mode = 16
        dt = 1e-3
        t_final = 0.5   # short
        norms = 0.5, 1,2
        energies = 1.5:0, 1.25:1
        seed = 9
    ";

    #[test]
    fn parses_and_round_trips() {
        let c: ExperimentConfig = SAMPLE.parse().unwrap();
        assert_eq!(c.variant, EvolutionSpec::FractionalNls { alpha: 1.5 });
        assert_eq!(c.max_mode, 16);
        assert_eq!(c.norms, vec![0.5, 1.0, 2.0]);
        assert_eq!(c.energies, vec![(1.5, 0), (1.25, 1)]);
        assert_eq!(
            c.initial,
            InitialData::Random {
                sigma: 2.0,
                amplitude: 1.0
            }
        );
        assert_eq!(c.sample_every, 10);
        assert_eq!(c.seed, 9);
        let back: ExperimentConfig = c.to_string().parse().unwrap();
        assert_eq!(back, c);
    }

    #[test]
    fn explicit_coefficients() {
        let c: ExperimentConfig =
            "variant = pair\nmax_mode = 4\ndt = 0.01\nt_final = 1\ninit = explicit\ncoeffs = 1:0.5, -2:0:1\ncoeffs2 = 0:2"
                .parse()
                .unwrap();
        let State::Pair(p) = c.initial_state().unwrap() else {
            panic!("pair")
        };
        assert_eq!(p.u1.coeff(1), Complex64::new(0.5, 0.0));
        assert_eq!(p.u1.coeff(-2), Complex64::new(0.0, 1.0));
        assert_eq!(p.u2.coeff(0), Complex64::new(2.0, 0.0));
        let back: ExperimentConfig = c.to_string().parse().unwrap();
        assert_eq!(back, c);
    }

    #[test]
    fn errors_carry_line_numbers() {
        let base = "variant = halfwave\nmax_mode = 8\ndt = 0.01\nt_final = 1\n";
        let line = |text: &str| match text.parse::<ExperimentConfig>() {
            Err(Error::Config { line, .. }) => line,
            other => panic!("{other:?}"),
        };
        assert_eq!(line(&format!("{base}colour = red\n")), 5);
        assert_eq!(line(&format!("{base}dt = 0.1\n")), 5);
        assert_eq!(line(&format!("{base}seed = -1\n")), 5);
        assert_eq!(line(&format!("{base}alpha = 1\n")), 5);
        assert_eq!(line("variant = fnls\nmax_mode = 8\n"), 1);
        assert_eq!(line(&format!("{base}no equals sign\n")), 5);
        assert!(format!("{base}sigma = 1\ncoeffs = 1:1\n")
            .parse::<ExperimentConfig>()
            .is_err());
    }

    #[test]
    fn invariants_are_checked() {
        let bad = |extra: &str| format!("variant = szego\ndt = 0.01\nt_final = 1\n{extra}").parse::<ExperimentConfig>();
        assert!(bad("max_mode = 3").is_err());
        assert!(bad("max_mode = 8\nsample_every = 0").is_err());
        assert!(bad("max_mode = 8\ninit = explicit\ncoeffs = -1:1").is_err());
        assert!(bad("max_mode = 8\ninit = explicit\ncoeffs = 9:1").is_err());
        assert!(bad("max_mode = 8\nenergies = 1.5:0").is_ok());
        let c = bad("max_mode = 8").unwrap();
        assert!(c
            .initial_state()
            .unwrap()
            .as_scalar()
            .unwrap()
            .is_nonnegative_spectrum());
    }
}
