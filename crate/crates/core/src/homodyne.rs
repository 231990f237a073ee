//! Phase-modulation probing and the balanced homodyne receiver.
//!
//! The phase modulator puts sidebands at ω_l ± Ω on the control carrier;
//! after the cavity, the three tones (carrier, upper, lower sideband) beat
//! with the matched local-oscillator comb. Demodulating the beat note at Ω
//! yields in-phase/quadrature components (A, B); the complex receiver
//! response t_hom = A + iB reduces to 1 − t_p in the resolved-sideband
//! limit where carrier and lower sideband pass untouched.
//!
//! The receiver's global I/Q convention (demodulation sideband and output
//! sign) is fixed exactly by that limit.

use num_complex::Complex64 as C64;

use crate::params::{OperatingPoint, SystemParams};
use crate::response::{bare_transmission, response_closed_form};

/// Complex transmissions of the three tones plus the LO phase factor e^{−iΦ}.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThreeToneTransmission {
    pub t_c: C64,
    pub t_us: C64,
    pub t_ls: C64,
    /// e^{−iΦ}, unit modulus.
    pub lo_phase: C64,
}

impl ThreeToneTransmission {
    pub fn new(t_c: C64, t_us: C64, t_ls: C64, phi: f64) -> Self {
        ThreeToneTransmission {
            t_c,
            t_us,
            t_ls,
            lo_phase: C64::from_polar(1.0, -phi),
        }
    }
}

/// Demodulated homodyne output at the modulation frequency.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HomodyneSignal {
    /// In-phase component A.
    pub in_phase: f64,
    /// Quadrature component B.
    pub quadrature: f64,
    /// t_hom = A + iB.
    pub t_hom: C64,
    /// t'_hom = t_hom/(1 − t_r).
    pub t_hom_norm: C64,
}

/// Demodulated quadratures for an arbitrary three-tone field.
///
/// `t_r` is the bare-cavity residual transmission used for normalization.
/// With t_c = t_ls = 1 and Φ = 0 this reduces exactly to
/// (A, B) = (1 − Re t_us, −Im t_us), i.e. t_hom = 1 − t_us.
pub fn quadratures_full(tones: &ThreeToneTransmission, t_r: f64) -> HomodyneSignal {
    let (pr, pi) = (tones.lo_phase.re, tones.lo_phase.im);
    let (tcr, tci) = (tones.t_c.re, tones.t_c.im);
    let (tur, tui) = (tones.t_us.re, tones.t_us.im);
    let (tlr, tli) = (tones.t_ls.re, tones.t_ls.im);
    // cos/sin coefficients of the beat note, sign-fixed to the receiver
    // convention that makes t_hom → 1 − t_p in the RSB limit.
    let a = 2.0 * pr * tcr - 2.0 * pi * tci - (tur + tlr) * pr + (tui + tli) * pi;
    let b = -(tui - tli) * pr - (tur - tlr) * pi;
    let t_hom = C64::new(a, b);
    HomodyneSignal {
        in_phase: a,
        quadrature: b,
        t_hom,
        t_hom_norm: t_hom / (1.0 - t_r),
    }
}

/// Resolved-sideband simplification: t_hom ≈ 1 − t_p.
pub fn homodyne_rsb(t_p: C64) -> C64 {
    1.0 - t_p
}

/// Three-tone field for the full model: carrier and lower sideband see the
/// bare cavity at offsets 0 and −Ω from the control laser, the upper
/// sideband probes the optomechanical response at Ω.
pub fn bare_cavity_tones(
    op: &OperatingPoint,
    system: &SystemParams,
    omega: f64,
    phi: f64,
) -> ThreeToneTransmission {
    let t_c = bare_transmission(system, op.delta_bar, 0.0);
    let t_ls = bare_transmission(system, op.delta_bar, -omega);
    let t_us = response_closed_form(op, system, omega).t_p;
    ThreeToneTransmission::new(t_c, t_us, t_ls, phi)
}

/// Weak-coupling normalized homodyne dip:
/// |t'_hom|² = 1 − [Ω_c²/κ·(Ω_c²/κ + 2Γ_m)] / [(Γ_m + Ω_c²/κ)² + (2Δ')²].
pub fn homodyne_dip(op: &OperatingPoint, system: &SystemParams, delta_prime: f64) -> f64 {
    let kappa = system.cavity.kappa();
    let gm = system.mechanics.gamma_m;
    let pump = op.omega_c_rate * op.omega_c_rate / kappa;
    1.0 - pump * (pump + 2.0 * gm) / ((gm + pump).powi(2) + (2.0 * delta_prime).powi(2))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::params::test_fixtures::reference_device;
    use crate::params::OperatingPoint;
    use crate::response::transmission_weak_coupling;
    use approx::assert_relative_eq;
    use rand::{Rng, SeedableRng};

    fn op_with_c(system: &SystemParams, c: f64) -> OperatingPoint {
        let oc = (c * system.mechanics.gamma_m * system.cavity.kappa()).sqrt();
        OperatingPoint::from_coupling_rate(system, -system.mechanics.omega_m, oc).unwrap()
    }

    #[test]
    fn empty_cavity_gives_null_signal() {
        let one = C64::new(1.0, 0.0);
        let sig = quadratures_full(&ThreeToneTransmission::new(one, one, one, 0.0), 0.0);
        assert!(sig.in_phase.abs() < 1e-15);
        assert!(sig.quadrature.abs() < 1e-15);
    }

    #[test]
    fn rsb_reduction_is_exact() {
        let one = C64::new(1.0, 0.0);
        let t_us = C64::new(0.37, -0.22);
        let sig = quadratures_full(&ThreeToneTransmission::new(one, t_us, one, 0.0), 0.0);
        assert_relative_eq!(sig.in_phase, 1.0 - t_us.re, max_relative = 1e-15);
        assert_relative_eq!(sig.quadrature, -t_us.im, max_relative = 1e-15);
        assert!((sig.t_hom - homodyne_rsb(t_us)).norm() < 1e-15);
    }

    /// Time-domain oracle: synthesize the beat signal over many periods,
    /// demodulate by multiplying with cos/sin and integrating (trapezoid),
    /// apply the same receiver convention.
    fn demodulate_time_domain(tones: &ThreeToneTransmission) -> (f64, f64) {
        let omega = 1.0; // arbitrary; only the product Ωt matters
        let periods = 1000usize;
        let per_period = 32usize;
        let n = periods * per_period;
        let t_total = periods as f64 * std::f64::consts::TAU / omega;
        let dt = t_total / n as f64;
        let phase = tones.lo_phase;
        let signal = |t: f64| {
            let rot = C64::from_polar(1.0, omega * t);
            (phase * (-2.0 * tones.t_c * (omega * t).cos() + tones.t_us * rot + tones.t_ls / rot))
                .re
        };
        let (mut acc_c, mut acc_s) = (0.0, 0.0);
        for k in 0..=n {
            let t = k as f64 * dt;
            let w = if k == 0 || k == n { 0.5 } else { 1.0 };
            let s = signal(t);
            acc_c += w * s * (omega * t).cos();
            acc_s += w * s * (omega * t).sin();
        }
        let a_raw = 2.0 * acc_c * dt / t_total;
        let b_raw = 2.0 * acc_s * dt / t_total;
        (-a_raw, b_raw)
    }

    #[test]
    fn quadratures_match_time_domain_demodulation() {
        let mut rng = rand::rngs::StdRng::seed_from_u64(0x517);
        for _ in 0..40 {
            let mut c = || C64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0));
            let tones = ThreeToneTransmission::new(
                c(),
                c(),
                c(),
                rng.random_range(-std::f64::consts::PI..std::f64::consts::PI),
            );
            let sig = quadratures_full(&tones, 0.0);
            let (a, b) = demodulate_time_domain(&tones);
            assert_relative_eq!(sig.in_phase, a, max_relative = 1e-6, epsilon = 1e-9);
            assert_relative_eq!(sig.quadrature, b, max_relative = 1e-6, epsilon = 1e-9);
        }
    }

    #[test]
    fn homodyne_rsb_limits() {
        assert_eq!(homodyne_rsb(C64::new(1.0, 0.0)), C64::new(0.0, 0.0));
        assert_eq!(homodyne_rsb(C64::new(0.0, 0.0)), C64::new(1.0, 0.0));
    }

    #[test]
    fn dip_relation_against_transparency() {
        let sys = reference_device(0.5);
        for &c in &[0.0, 0.3, 1.0, 4.0, 9.0, 25.0] {
            let op = op_with_c(&sys, c);
            let dip = homodyne_dip(&op, &sys, 0.0);
            let peak = transmission_weak_coupling(&op, &sys, 0.0)
                .t_p_norm
                .norm_sqr();
            assert_relative_eq!(dip, (1.0 - peak.sqrt()).powi(2), max_relative = 1e-12);
        }
        // C = 9 reaches the 1% floor.
        let op = op_with_c(&sys, 9.0);
        assert_relative_eq!(homodyne_dip(&op, &sys, 0.0), 0.01, max_relative = 1e-12);
    }

    #[test]
    fn dip_flat_without_control() {
        let sys = reference_device(0.5);
        let bare = OperatingPoint::from_amplitude(&sys, -sys.mechanics.omega_m, 0.0);
        for &dp in &[0.0, 1e5, -3e6] {
            assert_eq!(homodyne_dip(&bare, &sys, dp), 1.0);
        }
    }

    #[test]
    fn normalized_responses_sum_to_one_in_rsb() {
        let sys = reference_device(0.3);
        let op = op_with_c(&sys, 2.0);
        let t_r = crate::response::residual_transmission(&sys);
        for i in 0..51 {
            let dp = (i as f64 - 25.0) * 1e5;
            let tp = crate::response::transmission_at(
                &op,
                &sys,
                crate::response::ModelVariant::Rsb,
                sys.mechanics.omega_m + dp,
            );
            let t_hom_norm = homodyne_rsb(tp.t_p) / (1.0 - t_r);
            let sum = t_hom_norm + tp.t_p_norm;
            assert_relative_eq!(sum.re, 1.0, max_relative = 1e-12);
            assert!(sum.im.abs() < 1e-12);
        }
    }
}
