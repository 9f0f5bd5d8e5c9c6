use crate::torus::{self, TorusField};

use super::PairField;

/// Mass `Q = ½‖u‖²`, momentum `M = (Du, u)` and Hamiltonian of a scalar state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConservedReport {
    pub mass: f64,
    pub momentum: f64,
    pub hamiltonian: f64,
}

/// `Q̃ = ‖u₁‖² + 2‖u₂‖²`, `H̃` and the momentum `(Du₁,u₁) + (Du₂,u₂)` of a pair.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PairConservedReport {
    pub mass_tilde: f64,
    pub hamiltonian_tilde: f64,
    pub momentum: f64,
}

fn mass(u: &TorusField) -> f64 {
    0.5 * u.l2_norm().powi(2)
}

fn momentum(u: &TorusField) -> f64 {
    u.modes().map(|(k, c)| k as f64 * c.norm_sqr()).sum()
}

/// `‖u‖⁴_{L⁴} = ‖|u|²‖²_{L²}`, exact through the dealiased square.
fn l4_fourth(u: &TorusField) -> f64 {
    torus::modulus_squared(u).l2_norm().powi(2)
}

/// `H_α(u) = ½(|D|^α u, u) + ¼‖u‖⁴_{L⁴}`.
pub fn conserved_quantities(u: &TorusField, alpha: f64) -> ConservedReport {
    let kinetic: f64 = u
        .modes()
        .map(|(k, c)| (k.unsigned_abs() as f64).powf(alpha) * c.norm_sqr())
        .sum();
    ConservedReport {
        mass: mass(u),
        momentum: momentum(u),
        hamiltonian: 0.5 * kinetic + 0.25 * l4_fourth(u),
    }
}

/// Szegő invariants; the Hamiltonian is `¼‖u‖⁴_{L⁴}`.
pub fn szego_conserved(u: &TorusField) -> ConservedReport {
    ConservedReport {
        mass: mass(u),
        momentum: momentum(u),
        hamiltonian: 0.25 * l4_fourth(u),
    }
}

pub fn pair_conserved(p: &PairField) -> PairConservedReport {
    let half_wave = |u: &TorusField| -> f64 { u.modes().map(|(k, c)| k.unsigned_abs() as f64 * c.norm_sqr()).sum() };
    let cross = torus::product(&p.u1, &p.u1).inner(&p.u2).re;
    PairConservedReport {
        mass_tilde: p.u1.l2_norm().powi(2) + 2.0 * p.u2.l2_norm().powi(2),
        hamiltonian_tilde: 0.5 * (half_wave(&p.u1) + half_wave(&p.u2) + cross),
        momentum: momentum(&p.u1) + momentum(&p.u2),
    }
}
