//! Atomic Λ-system steady state and the OMIT ↔ EIT correspondence.
//!
//! A control field on the |2⟩→|3⟩ transition and a weak probe on |1⟩→|3⟩
//! drive the coherences S₁₂, S₁₃ into a steady state of exactly the same
//! algebraic form as the mechanical amplitude and anti-Stokes field of the
//! optomechanical system. The dictionary:
//!
//! | EIT                        | OMIT                     |
//! |----------------------------|--------------------------|
//! | coherence S₁₃              | intracavity field A⁻     |
//! | coherence S₁₂              | mechanical amplitude X   |
//! | ground-state splitting ω₂₁ | phonon frequency Ω_m     |
//! | Rabi rate μ₂₃E_c/ħ         | coupling rate 2g₀āx_zpf  |
//!
//! with γ₁₃ ↔ κ and γ₁₂ ↔ Γ_m completing the identification.

use num_complex::Complex64 as C64;
use serde::Serialize;

use crate::params::{OperatingPoint, SystemParams, HBAR};

/// Three-level Λ system driven by classical control/probe fields.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LambdaSystemParams {
    /// Ground-state splitting ω₂₁ (rad/s).
    pub omega21: f64,
    /// Probe transition frequency ω₃₁ (rad/s).
    pub omega31: f64,
    /// Probe transition dipole moment μ₁₃ (C·m).
    pub mu13: f64,
    /// Control transition dipole moment μ₂₃ (C·m).
    pub mu23: f64,
    /// Ground-state coherence damping γ₁₂ (rad/s).
    pub gamma12: f64,
    /// Optical coherence damping γ₁₃ (rad/s).
    pub gamma13: f64,
    /// Control field amplitude E_c (V/m).
    pub field_c: f64,
    /// Probe field amplitude E_p (V/m), weak.
    pub field_p: f64,
    /// Control laser frequency (rad/s).
    pub omega_c_laser: f64,
    /// Probe laser frequency (rad/s).
    pub omega_p_laser: f64,
}

impl LambdaSystemParams {
    /// Control Rabi frequency μ₂₃E_c/ħ (rad/s).
    pub fn rabi(&self) -> f64 {
        self.mu23 * self.field_c / HBAR
    }

    /// Control transition frequency ω₃₂ = ω₃₁ − ω₂₁.
    pub fn omega32(&self) -> f64 {
        self.omega31 - self.omega21
    }

    /// Control detuning from the |2⟩→|3⟩ transition.
    pub fn control_detuning(&self) -> f64 {
        self.omega_c_laser - self.omega32()
    }
}

/// Steady-state optical coherence S₁₃ at two-photon detuning Δ':
///
/// S₁₃ = (iμ₁₃E_p/2ħ) / (−i(Δ'+δ_c) + γ₁₃/2 + (Ω_R²/4)/(−iΔ' + γ₁₂/2)),
///
/// with Ω_R the control Rabi rate and δ_c the control detuning (zero for
/// a control field on resonance).
pub fn eit_coherence(p: &LambdaSystemParams, delta_prime: f64) -> C64 {
    let rabi = p.rabi();
    let numerator = C64::i() * (p.mu13 * p.field_p / (2.0 * HBAR));
    let denominator = C64::new(p.gamma13 / 2.0, -(delta_prime + p.control_detuning()))
        + (rabi * rabi / 4.0) / C64::new(p.gamma12 / 2.0, -delta_prime);
    numerator / denominator
}

/// Probe polarizability α = μ₁₃S₁₃/(E_p/2).
pub fn eit_polarizability(p: &LambdaSystemParams, delta_prime: f64) -> C64 {
    p.mu13 * eit_coherence(p, delta_prime) / (p.field_p / 2.0)
}

/// The response-relevant optomechanical parameter set of the RSB model.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RsbResponseParams {
    pub eta_c: f64,
    pub kappa: f64,
    pub gamma_m: f64,
    pub omega_m: f64,
    pub omega_c: f64,
}

impl RsbResponseParams {
    pub fn from_operating_point(op: &OperatingPoint, system: &SystemParams) -> Self {
        RsbResponseParams {
            eta_c: system.cavity.eta_c(),
            kappa: system.cavity.kappa(),
            gamma_m: system.mechanics.gamma_m,
            omega_m: system.mechanics.omega_m,
            omega_c: op.omega_c_rate,
        }
    }

    /// RSB anti-Stokes amplitude per unit probe (control on the lower sideband).
    pub fn a_minus(&self, delta_prime: f64) -> C64 {
        (self.eta_c * self.kappa).sqrt()
            / (C64::new(self.kappa / 2.0, -delta_prime)
                + (self.omega_c * self.omega_c / 4.0) / C64::new(self.gamma_m / 2.0, -delta_prime))
    }
}

/// One row of the correspondence table.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Correspondence {
    pub eit: &'static str,
    pub omit: &'static str,
}

/// The bidirectional EIT ↔ OMIT dictionary.
#[derive(Debug, Clone, Copy, Default)]
pub struct EitMapping;

impl EitMapping {
    pub const TABLE: [Correspondence; 4] = [
        Correspondence {
            eit: "S13",
            omit: "A_minus",
        },
        Correspondence {
            eit: "S12",
            omit: "X",
        },
        Correspondence {
            eit: "omega21",
            omit: "omega_m",
        },
        Correspondence {
            eit: "rabi_mu23_Ec_over_hbar",
            omit: "omega_c",
        },
    ];

    pub fn to_omit(&self, eit: &str) -> Option<&'static str> {
        Self::TABLE.iter().find(|c| c.eit == eit).map(|c| c.omit)
    }

    pub fn to_eit(&self, omit: &str) -> Option<&'static str> {
        Self::TABLE.iter().find(|c| c.omit == omit).map(|c| c.eit)
    }
}

/// Λ-system equivalent of an RSB optomechanical response.
///
/// Free scales are pinned deterministically: unit field amplitudes, dipole
/// moments chosen so the Rabi rate equals Ω_c and the returned
/// proportionality constant S₁₃(Δ')/A⁻(Δ') is exactly the imaginary unit.
/// The absolute optical frequency is immaterial to the response and set to
/// 10⁴·Ω_m.
pub fn map_omit_to_eit(rsb: &RsbResponseParams) -> (LambdaSystemParams, C64) {
    let omega31 = 1e4 * rsb.omega_m;
    let field_c = 1.0;
    let field_p = 1.0;
    let lambda = LambdaSystemParams {
        omega21: rsb.omega_m,
        omega31,
        mu13: 2.0 * HBAR * (rsb.eta_c * rsb.kappa).sqrt() / field_p,
        mu23: HBAR * rsb.omega_c / field_c,
        gamma12: rsb.gamma_m,
        gamma13: rsb.kappa,
        field_c,
        field_p,
        omega_c_laser: omega31 - rsb.omega_m, // control on resonance
        omega_p_laser: omega31,
    };
    let constant =
        C64::i() * (lambda.mu13 * lambda.field_p / (2.0 * HBAR)) / (rsb.eta_c * rsb.kappa).sqrt();
    (lambda, constant)
}

/// Inverse mapping: recover the response-relevant optomechanical parameters.
pub fn map_eit_to_omit(p: &LambdaSystemParams) -> (RsbResponseParams, C64) {
    let kappa = p.gamma13;
    let prefactor = p.mu13 * p.field_p / (2.0 * HBAR);
    let eta_c = prefactor * prefactor / kappa;
    let rsb = RsbResponseParams {
        eta_c,
        kappa,
        gamma_m: p.gamma12,
        omega_m: p.omega21,
        omega_c: p.rabi().abs(),
    };
    (rsb, C64::i() * prefactor / (eta_c * kappa).sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use rand::{Rng, SeedableRng};
    use std::f64::consts::TAU;

    fn sample_rsb() -> RsbResponseParams {
        RsbResponseParams {
            eta_c: 0.1464,
            kappa: TAU * 15e6,
            gamma_m: TAU * 41e3,
            omega_m: TAU * 51.8e6,
            omega_c: TAU * 4e6,
        }
    }

    #[test]
    fn bare_two_level_response() {
        let (mut lambda, _) = map_omit_to_eit(&sample_rsb());
        lambda.field_c = 0.0;
        let s13 = eit_coherence(&lambda, 0.0);
        let expect = lambda.mu13 * lambda.field_p / (HBAR * lambda.gamma13);
        assert!(s13.re.abs() < 1e-15 * s13.im.abs());
        assert_relative_eq!(s13.im, expect, max_relative = 1e-14);
    }

    #[test]
    fn control_suppresses_center_coherence() {
        let (lambda, _) = map_omit_to_eit(&sample_rsb());
        let mut dark = lambda;
        dark.field_c = 0.0;
        let ratio = eit_coherence(&lambda, 0.0).norm() / eit_coherence(&dark, 0.0).norm();
        let c_eit = lambda.rabi().powi(2) / (lambda.gamma12 * lambda.gamma13);
        assert_relative_eq!(ratio, 1.0 / (1.0 + c_eit), max_relative = 1e-12);
    }

    #[test]
    fn coherence_equals_rsb_response_up_to_constant() {
        let mut rng = rand::rngs::StdRng::seed_from_u64(42);
        for _ in 0..100 {
            let rsb = RsbResponseParams {
                eta_c: rng.random_range(0.05..0.95),
                kappa: TAU * 10f64.powf(rng.random_range(6.0..8.0)),
                gamma_m: TAU * 10f64.powf(rng.random_range(3.0..6.0)),
                omega_m: TAU * 10f64.powf(rng.random_range(7.0..9.0)),
                omega_c: TAU * 10f64.powf(rng.random_range(4.0..7.0)),
            };
            let (lambda, constant) = map_omit_to_eit(&rsb);
            for i in 0..25 {
                let dp = (i as f64 / 12.0 - 1.0) * 3.0 * rsb.gamma_m * 0.5
                    + (i as f64 - 12.0) * rsb.kappa / 50.0;
                let lhs = eit_coherence(&lambda, dp);
                let rhs = constant * rsb.a_minus(dp);
                assert!(
                    (lhs - rhs).norm() <= 1e-12 * rhs.norm(),
                    "mismatch at Δ'={dp:e}: {lhs} vs {rhs}"
                );
            }
        }
    }

    #[test]
    fn cooperativity_is_preserved() {
        let rsb = sample_rsb();
        let (lambda, _) = map_omit_to_eit(&rsb);
        let c_eit = lambda.rabi().powi(2) / (lambda.gamma12 * lambda.gamma13);
        let c_omit = rsb.omega_c.powi(2) / (rsb.gamma_m * rsb.kappa);
        assert_relative_eq!(c_eit, c_omit, max_relative = 1e-12);
    }

    #[test]
    fn mapping_round_trip() {
        let rsb = sample_rsb();
        let (lambda, forward_const) = map_omit_to_eit(&rsb);
        let (back, back_const) = map_eit_to_omit(&lambda);
        assert_relative_eq!(back.eta_c, rsb.eta_c, max_relative = 1e-14);
        assert_relative_eq!(back.kappa, rsb.kappa, max_relative = 1e-15);
        assert_relative_eq!(back.gamma_m, rsb.gamma_m, max_relative = 1e-15);
        assert_relative_eq!(back.omega_m, rsb.omega_m, max_relative = 1e-15);
        assert_relative_eq!(back.omega_c, rsb.omega_c, max_relative = 1e-14);
        assert!((forward_const - C64::i()).norm() < 1e-14);
        assert!((back_const - C64::i()).norm() < 1e-7);
        // and forward again reproduces the same Λ system exactly
        let (lambda2, _) = map_omit_to_eit(&back);
        assert_relative_eq!(lambda2.mu13, lambda.mu13, max_relative = 1e-14);
        assert_relative_eq!(lambda2.mu23, lambda.mu23, max_relative = 1e-14);
    }

    #[test]
    fn dictionary_is_involutive() {
        let map = EitMapping;
        for c in EitMapping::TABLE {
            assert_eq!(map.to_eit(map.to_omit(c.eit).unwrap()).unwrap(), c.eit);
            assert_eq!(map.to_omit(map.to_eit(c.omit).unwrap()).unwrap(), c.omit);
        }
        assert!(map.to_omit("nope").is_none());
    }

    #[test]
    fn polarizability_shape() {
        let rsb = sample_rsb();
        let (lambda, _) = map_omit_to_eit(&rsb);

        // absorption (Im α > 0) at line center without control
        let mut dark = lambda;
        dark.field_c = 0.0;
        assert!(eit_polarizability(&dark, 0.0).im > 0.0);

        // Im α(0) decreases monotonically with control power
        let mut last = f64::INFINITY;
        for i in 0..6 {
            let mut p = lambda;
            p.field_c = i as f64 * 0.5;
            let im = eit_polarizability(&p, 0.0).im;
            assert!(im <= last);
            last = im;
        }

        // Re α is odd about Δ' = 0
        for i in 1..40 {
            let dp = i as f64 / 39.0 * 2.0 * rsb.kappa;
            let plus = eit_polarizability(&lambda, dp).re;
            let minus = eit_polarizability(&lambda, -dp).re;
            assert_relative_eq!(plus, -minus, max_relative = 1e-10, epsilon = 1e-40);
        }
    }
}
