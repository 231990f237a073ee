//! Linearized probe response of the driven cavity.
//!
//! Three model variants of increasing approximation:
//!
//! * `Full` — the exact linearized solution: either the closed-form
//!   transmission or the equivalent 3×3 linear system in (A⁻, (A⁺)*, X).
//! * `Rsb` — resolved-sideband form, Stokes sideband dropped, mechanical
//!   susceptibility linearized around Ω_m; valid for κ ≪ Ω_m, Δ̄ = −Ω_m.
//! * `WeakCoupling` — additionally Ω_c, Γ_m ≪ κ; the transparency window
//!   becomes an exact Lorentzian of width Γ_OMIT = Γ_m(1+C) and peak
//!   (C/(1+C))².
//!
//! The probe axis is either the absolute modulation frequency Ω (full
//! variant) or the two-photon detuning Δ' = Ω − Ω_m (approximate variants).

use num_complex::Complex64 as C64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::params::{MechanicalParams, OperatingPoint, SystemParams, HBAR};

/// Complex sideband and mechanical amplitudes per unit probe amplitude.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinearResponse {
    /// Anti-Stokes intracavity amplitude A⁻ (at ω_l + Ω).
    pub a_minus: C64,
    /// Stokes amplitude A⁺ (at ω_l − Ω).
    pub a_plus: C64,
    /// Mechanical oscillation amplitude X (m per √(photon/s)).
    pub x_amp: C64,
}

/// Probe transmission at one frequency.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TransmissionPoint {
    /// Complex amplitude transmission t_p.
    pub t_p: C64,
    /// Normalized transmission t'_p = (t_p − t_r)/(1 − t_r), t_r = 1 − 2η_c.
    pub t_p_norm: C64,
    /// |t_p|².
    pub power_transmission: f64,
    /// arg(t_p) (rad), principal value; grid consumers unwrap.
    pub phase: f64,
}

impl TransmissionPoint {
    fn from_t_p(t_p: C64, t_r: f64) -> Self {
        TransmissionPoint {
            t_p,
            t_p_norm: (t_p - t_r) / (1.0 - t_r),
            power_transmission: t_p.norm_sqr(),
            phase: t_p.arg(),
        }
    }
}

/// Which level of approximation a sweep or query evaluates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum ModelVariant {
    Full,
    Rsb,
    WeakCoupling,
}

impl ModelVariant {
    pub fn name(&self) -> &'static str {
        match self {
            ModelVariant::Full => "full",
            ModelVariant::Rsb => "rsb",
            ModelVariant::WeakCoupling => "weak",
        }
    }
}

/// Mechanical susceptibility χ(Ω) = 1/(m_eff(Ω_m² − Ω² − iΓ_mΩ)) (m/N).
pub fn susceptibility(mech: &MechanicalParams, omega: f64) -> C64 {
    let den = C64::new(
        mech.omega_m * mech.omega_m - omega * omega,
        -mech.gamma_m * omega,
    );
    1.0 / (mech.m_eff * den)
}

/// Residual on-resonance transmission of the bare cavity, t_r = 1 − 2η_c.
///
/// Every variant reproduces this value at the probe-on-resonance point with
/// the control off, so the normalization is self-consistent across models.
pub fn residual_transmission(system: &SystemParams) -> f64 {
    1.0 - 2.0 * system.cavity.eta_c()
}

/// Bare-cavity amplitude transmission for a tone offset `offset` from the
/// control laser (control off): t = 1 − η_cκ/(−i(Δ̄+offset) + κ/2).
pub fn bare_transmission(system: &SystemParams, delta_bar: f64, offset: f64) -> C64 {
    let kappa = system.cavity.kappa();
    let eta = system.cavity.eta_c();
    1.0 - eta * kappa / C64::new(kappa / 2.0, -(delta_bar + offset))
}

/// Exact closed-form transmission at modulation frequency Ω.
///
/// t_p = 1 − η_cκ(1 + i f(Ω)) / (−i(Δ̄+Ω) + κ/2 + 2Δ̄ f(Ω)),
/// f(Ω) = ħ g₀² ā² χ(Ω)/(i(Δ̄−Ω) + κ/2).
pub fn response_closed_form(
    op: &OperatingPoint,
    system: &SystemParams,
    omega: f64,
) -> TransmissionPoint {
    let kappa = system.cavity.kappa();
    let eta = system.cavity.eta_c();
    let g0 = system.coupling.g0;
    let db = op.delta_bar;
    let chi = susceptibility(&system.mechanics, omega);
    let f = HBAR * g0 * g0 * op.a_bar * op.a_bar * chi / C64::new(kappa / 2.0, db - omega);
    let t_p = 1.0
        - eta * kappa * (1.0 + C64::i() * f)
            / (C64::new(kappa / 2.0, -(db + omega)) + 2.0 * db * f);
    TransmissionPoint::from_t_p(t_p, residual_transmission(system))
}

/// Closed-form anti-Stokes amplitude per unit probe,
/// A⁻ = √(η_cκ)(1 + i f(Ω)) / (−i(Δ̄+Ω) + κ/2 + 2Δ̄ f(Ω)).
pub fn a_minus_closed_form(op: &OperatingPoint, system: &SystemParams, omega: f64) -> C64 {
    let kappa = system.cavity.kappa();
    let eta = system.cavity.eta_c();
    let g0 = system.coupling.g0;
    let db = op.delta_bar;
    let chi = susceptibility(&system.mechanics, omega);
    let f = HBAR * g0 * g0 * op.a_bar * op.a_bar * chi / C64::new(kappa / 2.0, db - omega);
    (eta * kappa).sqrt() * (1.0 + C64::i() * f)
        / (C64::new(kappa / 2.0, -(db + omega)) + 2.0 * db * f)
}

/// Direct solution of the three coupled sideband/mechanics equations.
///
/// Solved in the scaled unknown X̃ = X/x_zpf so all matrix entries are
/// rates; the returned `x_amp` is re-dimensionalized.
pub fn response_direct_solve(
    op: &OperatingPoint,
    system: &SystemParams,
    omega: f64,
) -> Result<LinearResponse> {
    let kappa = system.cavity.kappa();
    let eta = system.cavity.eta_c();
    let mech = system.mechanics;
    let db = op.delta_bar;
    // Signed coupling rate; the stored magnitude drops the g₀ sign.
    let omega_c_signed = 2.0 * system.coupling.g0 * op.a_bar * op.x_zpf;

    let m = [
        [
            C64::new(kappa / 2.0, -(db + omega)),
            C64::new(0.0, 0.0),
            C64::i() * (omega_c_signed / 2.0),
        ],
        [
            C64::new(kappa / 2.0, db - omega),
            C64::new(0.0, 0.0),
            -C64::i() * (omega_c_signed / 2.0),
        ],
        [
            C64::new(omega_c_signed, 0.0),
            C64::new(omega_c_signed, 0.0),
            C64::new(
                (mech.omega_m * mech.omega_m - omega * omega) / mech.omega_m,
                -mech.gamma_m * omega / mech.omega_m,
            ),
        ],
    ];
    // Column order is (A⁻, (A⁺)*, X̃); the second equation has no A⁻ term.
    let m = [
        [m[0][0], m[0][1], m[0][2]],
        [m[1][1], m[1][0], m[1][2]],
        [m[2][0], m[2][1], m[2][2]],
    ];
    let rhs = [
        C64::new((eta * kappa).sqrt(), 0.0),
        C64::new(0.0, 0.0),
        C64::new(0.0, 0.0),
    ];
    let sol = solve3(m, rhs)?;
    Ok(LinearResponse {
        a_minus: sol[0],
        a_plus: sol[1].conj(),
        x_amp: op.x_zpf * sol[2],
    })
}

/// 3×3 complex linear solve, partial pivoting.
#[allow(clippy::needless_range_loop)]
fn solve3(mut m: [[C64; 3]; 3], mut b: [C64; 3]) -> Result<[C64; 3]> {
    for col in 0..3 {
        let pivot = (col..3)
            .max_by(|&i, &j| {
                m[i][col]
                    .norm_sqr()
                    .partial_cmp(&m[j][col].norm_sqr())
                    .unwrap()
            })
            .unwrap();
        if m[pivot][col].norm_sqr() == 0.0 {
            return Err(Error::Degenerate(
                "singular sideband/mechanics system (Γ_m = 0?)".into(),
            ));
        }
        m.swap(col, pivot);
        b.swap(col, pivot);
        for row in col + 1..3 {
            let factor = m[row][col] / m[col][col];
            for k in col..3 {
                let sub = factor * m[col][k];
                m[row][k] -= sub;
            }
            let sub = factor * b[col];
            b[row] -= sub;
        }
    }
    let mut x = [C64::new(0.0, 0.0); 3];
    for row in (0..3).rev() {
        let mut acc = b[row];
        for k in row + 1..3 {
            acc -= m[row][k] * x[k];
        }
        x[row] = acc / m[row][row];
    }
    Ok(x)
}

/// Resolved-sideband anti-Stokes amplitude per unit probe, at two-photon
/// detuning Δ' and control on the lower sideband (Δ̄ = −Ω_m):
///
/// A⁻ = √(η_cκ) / (−iΔ' + κ/2 + (Ω_c²/4)/(−iΔ' + Γ_m/2))
pub fn response_rsb(op: &OperatingPoint, system: &SystemParams, delta_prime: f64) -> C64 {
    let kappa = system.cavity.kappa();
    let eta = system.cavity.eta_c();
    let gm = system.mechanics.gamma_m;
    let oc2 = op.omega_c_rate * op.omega_c_rate;
    (eta * kappa).sqrt()
        / (C64::new(kappa / 2.0, -delta_prime) + (oc2 / 4.0) / C64::new(gm / 2.0, -delta_prime))
}

/// Weak-coupling Lorentzian transmission (Ω_c, Γ_m ≪ κ, Δ̄ = −Ω_m):
/// t'_p = Ω_c²/(Ω_c² + Γ_mκ − 2iΔ'κ), t_p = 1 − 2η_c + 2η_c t'_p.
pub fn transmission_weak_coupling(
    op: &OperatingPoint,
    system: &SystemParams,
    delta_prime: f64,
) -> TransmissionPoint {
    let kappa = system.cavity.kappa();
    let eta = system.cavity.eta_c();
    let gm = system.mechanics.gamma_m;
    let oc2 = op.omega_c_rate * op.omega_c_rate;
    let norm = oc2 / C64::new(oc2 + gm * kappa, -2.0 * delta_prime * kappa);
    let t_p = 1.0 - 2.0 * eta + 2.0 * eta * norm;
    TransmissionPoint {
        t_p,
        t_p_norm: norm,
        power_transmission: t_p.norm_sqr(),
        phase: t_p.arg(),
    }
}

/// Weak-coupling anti-Stokes amplitude per unit probe.
pub fn a_minus_weak_coupling(op: &OperatingPoint, system: &SystemParams, delta_prime: f64) -> C64 {
    let kappa = system.cavity.kappa();
    let eta = system.cavity.eta_c();
    let gm = system.mechanics.gamma_m;
    let oc2 = op.omega_c_rate * op.omega_c_rate;
    let d = C64::new(gm / 2.0, -delta_prime);
    4.0 * (eta * kappa).sqrt() * d / (2.0 * kappa * d + oc2)
}

/// Mechanical amplitude from the resolved-sideband balance
/// Ω_m(2Δ' − iΓ_m)X = −ħ g₀ ā A⁻.
pub fn x_amp_rsb(
    op: &OperatingPoint,
    system: &SystemParams,
    delta_prime: f64,
    a_minus: C64,
) -> C64 {
    let mech = system.mechanics;
    -HBAR * system.coupling.g0 * op.a_bar * a_minus
        / (mech.omega_m * C64::new(2.0 * delta_prime, -mech.gamma_m))
}

/// Transparency window width Γ_OMIT = Γ_m(1 + C) (rad/s).
pub fn omit_width(op: &OperatingPoint, system: &SystemParams) -> f64 {
    system.mechanics.gamma_m * (1.0 + op.cooperativity)
}

/// Closed-form group delay at window center, τ_g(Δ'=0) = (2/Γ_m)/(C+1) = 2/Γ_OMIT.
pub fn group_delay_at_center(op: &OperatingPoint, system: &SystemParams) -> f64 {
    2.0 / omit_width(op, system)
}

/// Numerical group delay at two-photon detuning Δ': the derivative of the
/// normalized-transmission phase by central finite difference, with the
/// sign convention that a transparency window yields a *positive* delay.
/// Default step Γ_OMIT/10⁴.
pub fn group_delay_numeric(
    op: &OperatingPoint,
    system: &SystemParams,
    delta_prime: f64,
    variant: ModelVariant,
    step: Option<f64>,
) -> Result<f64> {
    let h = step.unwrap_or_else(|| omit_width(op, system) / 1e4);
    if h <= 0.0 || !h.is_finite() {
        return Err(Error::parameter("step", format!("must be > 0, got {h}")));
    }
    if delta_prime + h == delta_prime || delta_prime - h == delta_prime {
        return Err(Error::StepUnderflow(h));
    }
    let t_norm =
        |dp: f64| transmission_at(op, system, variant, system.mechanics.omega_m + dp).t_p_norm;
    let hi = t_norm(delta_prime + h);
    let lo = t_norm(delta_prime - h);
    // arg of the ratio: immune to branch cuts as long as the phase step < π.
    Ok((hi / lo).arg() / (2.0 * h))
}

/// Transmission at absolute modulation frequency Ω under the chosen variant.
pub fn transmission_at(
    op: &OperatingPoint,
    system: &SystemParams,
    variant: ModelVariant,
    omega: f64,
) -> TransmissionPoint {
    match variant {
        ModelVariant::Full => response_closed_form(op, system, omega),
        ModelVariant::Rsb => {
            let dp = omega - system.mechanics.omega_m;
            let kappa = system.cavity.kappa();
            let eta = system.cavity.eta_c();
            let t_p = 1.0 - (eta * kappa).sqrt() * response_rsb(op, system, dp);
            TransmissionPoint::from_t_p(t_p, residual_transmission(system))
        }
        ModelVariant::WeakCoupling => {
            transmission_weak_coupling(op, system, omega - system.mechanics.omega_m)
        }
    }
}

/// Sideband and mechanical amplitudes at Ω under the chosen variant.
pub fn amplitudes_at(
    op: &OperatingPoint,
    system: &SystemParams,
    variant: ModelVariant,
    omega: f64,
) -> Result<LinearResponse> {
    match variant {
        ModelVariant::Full => response_direct_solve(op, system, omega),
        ModelVariant::Rsb => {
            let dp = omega - system.mechanics.omega_m;
            let a_minus = response_rsb(op, system, dp);
            Ok(LinearResponse {
                a_minus,
                a_plus: C64::new(0.0, 0.0),
                x_amp: x_amp_rsb(op, system, dp, a_minus),
            })
        }
        ModelVariant::WeakCoupling => {
            let dp = omega - system.mechanics.omega_m;
            let a_minus = a_minus_weak_coupling(op, system, dp);
            Ok(LinearResponse {
                a_minus,
                a_plus: C64::new(0.0, 0.0),
                x_amp: x_amp_rsb(op, system, dp, a_minus),
            })
        }
    }
}

/// In-place phase unwrapping along a monotone grid: removes 2π jumps.
pub fn unwrap_phases(phases: &mut [f64]) {
    use std::f64::consts::{PI, TAU};
    let mut correction = 0.0;
    for i in 1..phases.len() {
        let raw = phases[i] + correction;
        let mut delta = raw - phases[i - 1];
        while delta > PI {
            correction -= TAU;
            delta -= TAU;
        }
        while delta < -PI {
            correction += TAU;
            delta += TAU;
        }
        phases[i] = phases[i - 1] + delta;
    }
}
