//! Radiation-pressure steady state of the driven cavity.
//!
//! The self-consistent pair
//!
//! ```text
//! ā = √(η_c κ) s̄_in / (−i(Δ − g₀x̄) + κ/2),      x̄ = −ħ g₀ ā² / (m_eff Ω_m²)
//! ```
//!
//! reduces to a real cubic. We solve it in the frequency-shift variable
//! u = g₀·x̄ (rad/s), where it is monic and well scaled:
//!
//! ```text
//! Q(u) = u³ − 2Δu² + (Δ² + κ²/4)u + S = 0,     S = ħ g₀² η_c κ · flux / (m_eff Ω_m²) ≥ 0
//! ```
//!
//! All physical roots satisfy u ≤ 0 (the static shift always drags the
//! resonance towards lower frequency for this interaction sign). One to
//! three roots exist; the static stability criterion is Q'(u) > 0.

use crate::error::{Error, Result};
use crate::params::{
    photon_flux, zero_point_fluctuation, CavityParams, CouplingParams, DriveParams,
    MechanicalParams, OperatingPoint, SystemParams, HBAR,
};

/// One steady-state solution with its static stability flag.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SteadyStateRoot {
    pub point: OperatingPoint,
    pub stable: bool,
}

/// Working point computed directly from the *effective* detuning Δ̄.
///
/// No cubic needed: the experimental knob is Δ̄ itself, so
/// ā = √(η_c κ · flux)/|−iΔ̄ + κ/2| and Ω_c, C follow.
pub fn operating_point(system: &SystemParams, drive: &DriveParams) -> OperatingPoint {
    let cav = system.cavity;
    // wavelength/power validated at construction
    let flux = photon_flux(drive.input_power, cav.wavelength).expect("validated params");
    let a_bar = amplitude_at(cav.eta_c(), cav.kappa(), drive.detuning, flux);
    OperatingPoint::from_amplitude(system, drive.detuning, a_bar)
}

/// ā at effective detuning `delta_bar` for the given coupling and flux.
pub fn amplitude_at(eta_c: f64, kappa: f64, delta_bar: f64, flux: f64) -> f64 {
    (eta_c * kappa * flux).sqrt() / (delta_bar * delta_bar + kappa * kappa / 4.0).sqrt()
}

/// All steady-state roots for a *laser* detuning Δ (pre-shift), sorted by
/// |x̄| ascending and flagged stable/unstable.
pub fn solve_steady_state(
    cav: &CavityParams,
    mech: &MechanicalParams,
    cpl: &CouplingParams,
    laser_detuning: f64,
    flux: f64,
) -> Result<Vec<SteadyStateRoot>> {
    if flux < 0.0 || !flux.is_finite() {
        return Err(Error::parameter("flux", format!("must be ≥ 0, got {flux}")));
    }
    let system = SystemParams::new(*cav, *mech, *cpl);
    let kappa = cav.kappa();
    let eta_c = cav.eta_c();
    let g0 = cpl.g0;
    let m_om2 = mech.m_eff * mech.omega_m * mech.omega_m;
    let strength = HBAR * g0 * g0 * eta_c * kappa * flux / m_om2; // S ≥ 0, (rad/s)³

    if strength == 0.0 {
        // Undriven or uncoupled: the single root sits at x̄ = 0.
        let a_bar = amplitude_at(eta_c, kappa, laser_detuning, flux);
        let mut point = OperatingPoint::from_amplitude(&system, laser_detuning, a_bar);
        point.x_bar = 0.0;
        return Ok(vec![SteadyStateRoot {
            point,
            stable: true,
        }]);
    }

    // Monic cubic coefficients in u = g₀x̄.
    let b = -2.0 * laser_detuning;
    let c = laser_detuning * laser_detuning + kappa * kappa / 4.0;
    let d = strength;
    let mut roots = solve_cubic_monic(b, c, d);

    // One Newton polish per root, guarded against flat derivative near
    // bifurcation double roots.
    for u in roots.iter_mut() {
        let q = ((*u + b) * *u + c) * *u + d;
        let dq = (3.0 * *u + 2.0 * b) * *u + c;
        if dq.abs() > 1e-12 * (c.abs() + u.abs() * u.abs()) {
            *u -= q / dq;
        }
    }

    // Merge near-coincident roots (double roots at the bistability boundary).
    roots.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let scale = roots.iter().fold(kappa, |m, u| m.max(u.abs()));
    roots.dedup_by(|a, b| (*a - *b).abs() <= 1e-9 * scale);

    // Sort by |x̄| ascending; all u ≤ 0 so that is u descending.
    roots.sort_by(|a, b| a.abs().partial_cmp(&b.abs()).unwrap());

    let mut out = Vec::with_capacity(roots.len());
    for u in roots {
        let delta_bar = laser_detuning - u;
        let a_bar = amplitude_at(eta_c, kappa, delta_bar, flux);
        let x_bar = u / g0;
        let x_zpf = zero_point_fluctuation(mech);
        let omega_c = (2.0 * g0 * a_bar * x_zpf).abs();
        let point = OperatingPoint {
            a_bar,
            x_bar,
            delta_bar,
            omega_c_rate: omega_c,
            cooperativity: omega_c * omega_c / (mech.gamma_m * kappa),
            x_zpf,
        };
        // Relative residual of the mechanical balance m Ω_m² x̄ = −ħ g₀ ā².
        let lhs = m_om2 * x_bar;
        let rhs = -HBAR * g0 * a_bar * a_bar;
        let denom = lhs.abs().max(rhs.abs());
        let residual = if denom > 0.0 {
            (lhs - rhs).abs() / denom
        } else {
            0.0
        };
        if residual > 1e-10 {
            return Err(Error::SolverResidual { residual });
        }
        let dq = (3.0 * u - 4.0 * laser_detuning) * u + c;
        out.push(SteadyStateRoot {
            point,
            stable: dq > 0.0,
        });
    }
    Ok(out)
}

/// Real roots of the monic cubic u³ + b u² + c u + d, unsorted.
fn solve_cubic_monic(b: f64, c: f64, d: f64) -> Vec<f64> {
    // Depressed form t³ + pt + q with u = t − b/3.
    let shift = b / 3.0;
    let p = c - b * b / 3.0;
    let q = (2.0 * b * b / 9.0 - c) * shift + d;
    let half_q = q / 2.0;
    let disc = half_q * half_q + (p / 3.0).powi(3);

    if disc > 0.0 {
        // One real root; pick the cancellation-free branch.
        let sq = disc.sqrt();
        let s = if -half_q >= 0.0 {
            (-half_q + sq).cbrt()
        } else {
            (-half_q - sq).cbrt()
        };
        let t = if s != 0.0 { s - p / (3.0 * s) } else { 0.0 };
        vec![t - shift]
    } else {
        // Three real roots (possibly degenerate): trigonometric method.
        let m = 2.0 * (-p / 3.0).max(0.0).sqrt();
        if m == 0.0 {
            return vec![-shift]; // triple root
        }
        let arg = (3.0 * q / (p * m)).clamp(-1.0, 1.0);
        let theta = arg.acos() / 3.0;
        (0..3)
            .map(|k| m * (theta - 2.0 * std::f64::consts::PI * k as f64 / 3.0).cos() - shift)
            .collect()
    }
}
