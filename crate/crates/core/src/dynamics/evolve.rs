use crate::energies::modified_energy;
use crate::error::{Error, Result};
use crate::record::{format_param, TrajectoryRecord};
use crate::torus::TorusField;

use super::{
    conserved_quantities, pair_conserved, pair_nonlinear_rhs, phase_step_grid, phase_step_unchecked, szego_conserved,
    szego_rhs, EvolutionSpec, LinearPropagator, PairField, State,
};

/// Which observables to record at each sample.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Sampling {
    /// Sobolev exponents `s` of the `hs_<s>` columns.
    pub sobolev: Vec<f64>,
    /// `(α, n)` of the `energy_a<α>_n<n>` columns (scalar variants only).
    pub energies: Vec<(f64, u32)>,
    /// Keep the sampled states in the record.
    pub keep_states: bool,
}

impl Sampling {
    fn deduped(&self) -> (Vec<f64>, Vec<(f64, u32)>) {
        let mut s: Vec<f64> = Vec::new();
        for &x in &self.sobolev {
            if !s.contains(&x) {
                s.push(x);
            }
        }
        let mut e: Vec<(f64, u32)> = Vec::new();
        for &x in &self.energies {
            if !e.contains(&x) {
                e.push(x);
            }
        }
        (s, e)
    }
}

fn columns(spec: &EvolutionSpec, sobolev: &[f64], energies: &[(f64, u32)]) -> Vec<String> {
    let mut cols = vec!["t".to_string()];
    if spec.is_pair() {
        for comp in ["u1", "u2"] {
            cols.extend(sobolev.iter().map(|s| format!("{comp}_hs_{}", format_param(*s))));
        }
        cols.extend(["u1_linf", "u2_linf", "qtilde", "htilde", "momentum"].map(String::from));
    } else {
        cols.extend(sobolev.iter().map(|s| format!("hs_{}", format_param(*s))));
        cols.extend(["linf", "mass", "momentum", "hamiltonian"].map(String::from));
        cols.extend(
            energies
                .iter()
                .map(|(a, n)| format!("energy_a{}_n{n}", format_param(*a))),
        );
    }
    cols
}

fn observe(t: f64, state: &State, spec: &EvolutionSpec, sobolev: &[f64], energies: &[(f64, u32)]) -> Vec<f64> {
    let mut row = vec![t];
    match state {
        State::Scalar(u) => {
            row.extend(sobolev.iter().map(|&s| u.sobolev_norm(s)));
            let c = match spec.alpha() {
                Some(alpha) => conserved_quantities(u, alpha),
                None => szego_conserved(u),
            };
            row.extend([u.sup_norm(), c.mass, c.momentum, c.hamiltonian]);
            row.extend(energies.iter().map(|&(a, n)| modified_energy(u, a, n).energy));
        }
        State::Pair(p) => {
            row.extend(sobolev.iter().map(|&s| p.u1.sobolev_norm(s)));
            row.extend(sobolev.iter().map(|&s| p.u2.sobolev_norm(s)));
            let c = pair_conserved(p);
            row.extend([
                p.u1.sup_norm(),
                p.u2.sup_norm(),
                c.mass_tilde,
                c.hamiltonian_tilde,
                c.momentum,
            ]);
        }
    }
    row
}

enum Stepper {
    Strang { half: LinearPropagator, alpha_grid: usize },
    Szego,
    Pair { half: LinearPropagator },
}

fn rk4<T: Clone>(y: &T, dt: f64, f: impl Fn(&T) -> T, axpy: impl Fn(&T, f64, &T) -> T) -> T {
    let k1 = f(y);
    let k2 = f(&axpy(y, 0.5 * dt, &k1));
    let k3 = f(&axpy(y, 0.5 * dt, &k2));
    let k4 = f(&axpy(y, dt, &k3));
    let mut out = axpy(y, dt / 6.0, &k1);
    out = axpy(&out, dt / 3.0, &k2);
    out = axpy(&out, dt / 3.0, &k3);
    axpy(&out, dt / 6.0, &k4)
}

fn axpy_field(y: &TorusField, a: f64, x: &TorusField) -> TorusField {
    y + &(x * a)
}

fn axpy_pair(y: &PairField, a: f64, x: &PairField) -> PairField {
    PairField {
        u1: axpy_field(&y.u1, a, &x.u1),
        u2: axpy_field(&y.u2, a, &x.u2),
    }
}

impl Stepper {
    fn new(spec: &EvolutionSpec, max_mode: usize, dt: f64) -> Self {
        match spec {
            EvolutionSpec::FractionalNls { .. } | EvolutionSpec::HalfWave => Stepper::Strang {
                half: LinearPropagator::new(max_mode, 0.5 * dt, spec.alpha().expect("dispersive")),
                alpha_grid: phase_step_grid(max_mode),
            },
            EvolutionSpec::Szego => Stepper::Szego,
            EvolutionSpec::QuadraticPair => Stepper::Pair {
                half: LinearPropagator::new(max_mode, 0.5 * dt, 1.0),
            },
        }
    }

    fn step(&self, state: &State, dt: f64) -> State {
        match (self, state) {
            (Stepper::Strang { half, alpha_grid }, State::Scalar(u)) => {
                let v = phase_step_unchecked(&half.apply(u), dt, *alpha_grid);
                State::Scalar(half.apply(&v))
            }
            (Stepper::Szego, State::Scalar(u)) => State::Scalar(rk4(u, dt, szego_rhs, axpy_field)),
            (Stepper::Pair { half }, State::Pair(p)) => {
                let p = PairField {
                    u1: half.apply(&p.u1),
                    u2: half.apply(&p.u2),
                };
                let f = |q: &PairField| {
                    let (a, b) = pair_nonlinear_rhs(q);
                    PairField { u1: a, u2: b }
                };
                let p = rk4(&p, dt, f, axpy_pair);
                State::Pair(PairField {
                    u1: half.apply(&p.u1),
                    u2: half.apply(&p.u2),
                })
            }
            _ => unreachable!("shape checked before stepping"),
        }
    }
}

fn szego_guard(u: &TorusField, dt: f64) -> Result<()> {
    let sup = u.sup_norm();
    if dt * sup * sup > 0.5 {
        return Err(Error::invalid(format!(
            "Szego step dt = {dt} exceeds the stability guard 0.5/|u|_inf^2 = {}",
            0.5 / (sup * sup)
        )));
    }
    Ok(())
}

/// Advances `initial` to time `t_final`, sampling every `sample_every` steps.
///
/// The step count is `|t_final|/dt` rounded up, and the step is shrunk so the
/// last step lands exactly on `t_final`. The first and last states are always
/// sampled. Negative `t_final` evolves the coefficient-conjugated data forward
/// and maps back, so the record runs from `t_final` to 0.
pub fn evolve(
    initial: &State,
    spec: &EvolutionSpec,
    t_final: f64,
    dt: f64,
    sample_every: usize,
    sampling: &Sampling,
) -> Result<TrajectoryRecord> {
    if !(dt > 0.0 && dt.is_finite()) {
        return Err(Error::invalid(format!("dt must be positive, got {dt}")));
    }
    if t_final == 0.0 || !t_final.is_finite() {
        return Err(Error::invalid(format!(
            "final time must be finite and nonzero, got {t_final}"
        )));
    }
    if sample_every == 0 {
        return Err(Error::invalid("sample_every must be at least 1"));
    }
    if spec.is_pair() != matches!(initial, State::Pair(_)) {
        return Err(Error::invalid(format!(
            "initial state does not match variant {}",
            spec.name()
        )));
    }
    let (sobolev, energies) = sampling.deduped();
    if !energies.is_empty() && matches!(spec, EvolutionSpec::QuadraticPair) {
        return Err(Error::invalid("modified energies are defined for scalar states only"));
    }

    if t_final < 0.0 {
        let mut rec =
            evolve(&initial.conj_coeffs(), spec, -t_final, dt, sample_every, sampling).map_err(|e| match e {
                Error::NonFinite {
                    last_valid_time,
                    mut partial,
                } => {
                    partial.reverse_time();
                    Error::NonFinite {
                        last_valid_time: -last_valid_time,
                        partial,
                    }
                }
                other => other,
            })?;
        rec.reverse_time();
        return Ok(rec);
    }

    let raw = t_final / dt;
    let steps = if (raw - raw.round()).abs() <= 1e-9 * raw {
        raw.round()
    } else {
        raw.ceil()
    }
    .max(1.0) as usize;
    let h = t_final / steps as f64;

    let mut rec = TrajectoryRecord::new(columns(spec, &sobolev, &energies));
    let take = |rec: &mut TrajectoryRecord, t: f64, s: &State| {
        rec.push(observe(t, s, spec, &sobolev, &energies));
        if sampling.keep_states {
            rec.push_state(s.clone());
        }
    };

    let mut state = initial.clone();
    if !state.is_finite() {
        return Err(Error::invalid("initial data is not finite"));
    }
    if let (EvolutionSpec::Szego, State::Scalar(u)) = (spec, &state) {
        szego_guard(u, h)?;
    }
    take(&mut rec, 0.0, &state);

    let stepper = Stepper::new(spec, state.max_mode(), h);
    let mut last_valid = 0.0;
    for i in 1..=steps {
        let next = stepper.step(&state, h);
        let t = if i == steps { t_final } else { i as f64 * h };
        if !next.is_finite() {
            rec.set_truncated(last_valid);
            return Err(Error::NonFinite {
                last_valid_time: last_valid,
                partial: Box::new(rec),
            });
        }
        state = next;
        last_valid = t;
        if i % sample_every == 0 || i == steps {
            let row = observe(t, &state, spec, &sobolev, &energies);
            if row.iter().any(|x| !x.is_finite()) {
                rec.set_truncated(last_valid);
                return Err(Error::NonFinite {
                    last_valid_time: last_valid,
                    partial: Box::new(rec),
                });
            }
            take(&mut rec, t, &state);
            if let (EvolutionSpec::Szego, State::Scalar(u)) = (spec, &state) {
                szego_guard(u, h)?;
            }
        }
    }
    Ok(rec)
}
