//! Physical parameters of one optomechanical device and derived quantities.
//!
//! Constructors validate the domain once; the structs are plain `Copy` data
//! afterwards. Angular rates throughout (rad/s).

use serde::Serialize;

use crate::error::{Error, Result};

/// Reduced Planck constant (J·s), CODATA 2018.
pub const HBAR: f64 = 1.054_571_817e-34;
/// Speed of light in vacuum (m/s), exact.
pub const SPEED_OF_LIGHT: f64 = 299_792_458.0;

/// Optical mode: intrinsic loss, external (waveguide) coupling, carrier wavelength.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CavityParams {
    /// Intrinsic loss rate κ₀ (rad/s), > 0.
    pub kappa0: f64,
    /// External coupling rate κ_ex (rad/s), ≥ 0.
    pub kappa_ex: f64,
    /// Vacuum wavelength of the control laser (m).
    pub wavelength: f64,
}

impl CavityParams {
    pub fn new(kappa0: f64, kappa_ex: f64, wavelength: f64) -> Result<Self> {
        if kappa0 <= 0.0 || !kappa0.is_finite() {
            return Err(Error::parameter(
                "kappa0",
                format!("must be > 0, got {kappa0}"),
            ));
        }
        if kappa_ex < 0.0 || !kappa_ex.is_finite() {
            return Err(Error::parameter(
                "kappa_ex",
                format!("must be ≥ 0, got {kappa_ex}"),
            ));
        }
        if wavelength <= 0.0 || !wavelength.is_finite() {
            return Err(Error::parameter(
                "wavelength",
                format!("must be > 0, got {wavelength}"),
            ));
        }
        Ok(Self {
            kappa0,
            kappa_ex,
            wavelength,
        })
    }

    /// Total loss rate κ = κ₀ + κ_ex.
    pub fn kappa(&self) -> f64 {
        self.kappa0 + self.kappa_ex
    }

    /// Coupling parameter η_c = κ_ex/(κ₀+κ_ex) ∈ [0, 1).
    pub fn eta_c(&self) -> f64 {
        self.kappa_ex / self.kappa()
    }

    /// Control-laser carrier angular frequency ω_l = 2πc/λ (rad/s).
    pub fn laser_omega(&self) -> f64 {
        2.0 * std::f64::consts::PI * SPEED_OF_LIGHT / self.wavelength
    }
}

/// Mechanical mode: effective mass, resonance, damping.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MechanicalParams {
    /// Effective mass (kg).
    pub m_eff: f64,
    /// Angular resonance frequency Ω_m (rad/s).
    pub omega_m: f64,
    /// Damping rate Γ_m (rad/s). Exactly zero is rejected (singular susceptibility).
    pub gamma_m: f64,
}

impl MechanicalParams {
    pub fn new(m_eff: f64, omega_m: f64, gamma_m: f64) -> Result<Self> {
        if m_eff <= 0.0 || !m_eff.is_finite() {
            return Err(Error::parameter(
                "m_eff",
                format!("must be > 0, got {m_eff}"),
            ));
        }
        if omega_m <= 0.0 || !omega_m.is_finite() {
            return Err(Error::parameter(
                "omega_m",
                format!("must be > 0, got {omega_m}"),
            ));
        }
        if gamma_m <= 0.0 || !gamma_m.is_finite() {
            return Err(Error::parameter(
                "gamma_m",
                format!("must be > 0, got {gamma_m}"),
            ));
        }
        Ok(Self {
            m_eff,
            omega_m,
            gamma_m,
        })
    }

    /// Mechanical quality factor Q_m = Ω_m/Γ_m.
    pub fn q_m(&self) -> f64 {
        self.omega_m / self.gamma_m
    }
}

/// Optomechanical coupling constant g₀ = dω_c/dx (rad/s per m). May be
/// negative; g₀ = 0 means a bare cavity.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CouplingParams {
    pub g0: f64,
}

impl CouplingParams {
    pub fn new(g0: f64) -> Result<Self> {
        if !g0.is_finite() {
            return Err(Error::parameter("g0", format!("must be finite, got {g0}")));
        }
        Ok(Self { g0 })
    }
}

/// Control drive and probe modulation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DriveParams {
    /// Control-laser power at the cavity input (W).
    pub input_power: f64,
    /// Effective control detuning Δ̄ (rad/s), i.e. the post-static-shift
    /// detuning that is the experimental knob.
    pub detuning: f64,
    /// Probe modulation frequency Ω = ω_p − ω_l (rad/s).
    pub probe_offset: f64,
    /// Phase-modulation depth β (dimensionless). β ≪ 1 assumed, not enforced.
    pub modulation_depth: f64,
}

impl DriveParams {
    pub fn new(
        input_power: f64,
        detuning: f64,
        probe_offset: f64,
        modulation_depth: f64,
    ) -> Result<Self> {
        if input_power < 0.0 || !input_power.is_finite() {
            return Err(Error::parameter(
                "input_power",
                format!("must be ≥ 0, got {input_power}"),
            ));
        }
        if !detuning.is_finite() || !probe_offset.is_finite() {
            return Err(Error::parameter(
                "detuning",
                "detuning/probe_offset must be finite",
            ));
        }
        if modulation_depth < 0.0 || !modulation_depth.is_finite() {
            return Err(Error::parameter(
                "modulation_depth",
                format!("must be ≥ 0, got {modulation_depth}"),
            ));
        }
        Ok(Self {
            input_power,
            detuning,
            probe_offset,
            modulation_depth,
        })
    }
}

/// One device: optical mode, mechanical mode, their coupling.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SystemParams {
    pub cavity: CavityParams,
    pub mechanics: MechanicalParams,
    pub coupling: CouplingParams,
}

impl SystemParams {
    pub fn new(
        cavity: CavityParams,
        mechanics: MechanicalParams,
        coupling: CouplingParams,
    ) -> Self {
        Self {
            cavity,
            mechanics,
            coupling,
        }
    }

    /// Zero-point fluctuation amplitude of the mechanical mode (m).
    pub fn x_zpf(&self) -> f64 {
        zero_point_fluctuation(&self.mechanics)
    }
}

/// Drive-dependent working point of the linearized model.
///
/// `a_bar` is the steady intracavity amplitude in √photons, chosen real and
/// nonnegative by the global phase convention. `omega_c_rate` stores
/// |Ω_c| = |2 g₀ ā x_zpf|; all response formulas use Ω_c², so the magnitude
/// carries the full information and is insensitive to the sign of g₀.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct OperatingPoint {
    /// Steady intracavity amplitude ā (√photons), ≥ 0.
    pub a_bar: f64,
    /// Static radiation-pressure displacement x̄ (m).
    pub x_bar: f64,
    /// Effective control detuning Δ̄ (rad/s).
    pub delta_bar: f64,
    /// Coupling rate magnitude Ω_c = |2 g₀ ā x_zpf| (rad/s).
    pub omega_c_rate: f64,
    /// Cooperativity C = Ω_c²/(Γ_m κ).
    pub cooperativity: f64,
    /// Zero-point fluctuation amplitude (m).
    pub x_zpf: f64,
}

impl OperatingPoint {
    /// Build a working point from an explicit intracavity amplitude.
    pub fn from_amplitude(system: &SystemParams, delta_bar: f64, a_bar: f64) -> Self {
        let x_zpf = system.x_zpf();
        let g0 = system.coupling.g0;
        let mech = system.mechanics;
        let omega_c = (2.0 * g0 * a_bar * x_zpf).abs();
        let kappa = system.cavity.kappa();
        OperatingPoint {
            a_bar,
            x_bar: -HBAR * g0 * a_bar * a_bar / (mech.m_eff * mech.omega_m * mech.omega_m),
            delta_bar,
            omega_c_rate: omega_c,
            cooperativity: omega_c * omega_c / (mech.gamma_m * kappa),
            x_zpf,
        }
    }

    /// Build a working point with a prescribed coupling rate Ω_c, solving
    /// for the amplitude that realizes it. Handy for studies parameterized
    /// directly by cooperativity. Requires g₀ ≠ 0.
    pub fn from_coupling_rate(system: &SystemParams, delta_bar: f64, omega_c: f64) -> Result<Self> {
        let g0 = system.coupling.g0;
        if g0 == 0.0 {
            return Err(Error::parameter(
                "g0",
                "cannot realize a nonzero coupling rate with g0 = 0",
            ));
        }
        let a_bar = omega_c.abs() / (2.0 * g0.abs() * system.x_zpf());
        Ok(Self::from_amplitude(system, delta_bar, a_bar))
    }
}

/// Photon flux |s_in|² (1/s) carried by `power` at the control carrier.
///
/// Uses P = ħω_l|s_in|². Sideband offsets (tens of MHz against hundreds of
/// THz) are neglected in this conversion.
pub fn photon_flux(power: f64, wavelength: f64) -> Result<f64> {
    if wavelength <= 0.0 || !wavelength.is_finite() {
        return Err(Error::parameter(
            "wavelength",
            format!("must be > 0, got {wavelength}"),
        ));
    }
    if power < 0.0 || !power.is_finite() {
        return Err(Error::parameter(
            "power",
            format!("must be ≥ 0, got {power}"),
        ));
    }
    let omega_l = 2.0 * std::f64::consts::PI * SPEED_OF_LIGHT / wavelength;
    Ok(power / (HBAR * omega_l))
}

/// Zero-point fluctuation amplitude x_zpf = √(ħ/(2 m_eff Ω_m)) (m).
pub fn zero_point_fluctuation(mech: &MechanicalParams) -> f64 {
    (HBAR / (2.0 * mech.m_eff * mech.omega_m)).sqrt()
}

#[cfg(test)]
pub(crate) mod test_fixtures {
    use super::*;
    use std::f64::consts::TAU;

    /// Reference toroid used throughout the tests: 20 ng, Ω_m/2π = 51.8 MHz,
    /// Γ_m/2π = 41 kHz, κ/2π = 15 MHz, g₀/2π = −12 GHz/nm, λ = 775 nm.
    pub fn reference_device(eta_c: f64) -> SystemParams {
        let kappa = TAU * 15e6;
        let cavity = CavityParams::new(kappa * (1.0 - eta_c), kappa * eta_c, 775e-9).unwrap();
        let mechanics = MechanicalParams::new(20e-12, TAU * 51.8e6, TAU * 41e3).unwrap();
        let coupling = CouplingParams::new(-TAU * 12e9 / 1e-9).unwrap();
        SystemParams::new(cavity, mechanics, coupling)
    }
}
