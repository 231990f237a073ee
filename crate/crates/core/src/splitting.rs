//! Counterpropagating-mode coupling in a ring cavity.
//!
//! Surface backscattering couples the clockwise and counterclockwise modes
//! at a rate γ. The symmetric/antisymmetric combinations
//! a_± = (a_ccw ± a_cw)/√2 are stationary, split by ±γ/2, and each couples
//! to the waveguide with the halved parameter η'_c = η_c/2. For γ ≫ κ a
//! single split mode carries the whole OMIT physics with η_c → η_c/2.

use num_complex::Complex64 as C64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::params::CavityParams;

/// A backscattering-split cavity.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SplitModeParams {
    /// Intermode coupling rate γ (rad/s), ≥ 0.
    pub gamma_split: f64,
    pub base: CavityParams,
}

/// One stationary mode viewed as an effective single-mode cavity.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EffectiveMode {
    /// Effective laser detuning from this mode (rad/s).
    pub detuning: f64,
    /// Cavity with η'_c = η_c/2 (total κ unchanged).
    pub cavity: CavityParams,
}

impl SplitModeParams {
    pub fn new(gamma_split: f64, base: CavityParams) -> Result<Self> {
        if gamma_split < 0.0 || !gamma_split.is_finite() {
            return Err(Error::parameter(
                "gamma_split",
                format!("must be ≥ 0, got {gamma_split}"),
            ));
        }
        Ok(Self { gamma_split, base })
    }

    /// Cavity with the coupling parameter halved, κ kept fixed.
    pub fn halved_coupling_cavity(&self) -> CavityParams {
        let kappa = self.base.kappa();
        let kappa_ex = self.base.kappa_ex / 2.0;
        CavityParams {
            kappa0: kappa - kappa_ex,
            kappa_ex,
            wavelength: self.base.wavelength,
        }
    }

    /// The two stationary modes (a_+ at Δ+γ/2, a_− at Δ−γ/2) for a laser
    /// detuning Δ from the degenerate resonance. For γ = 0 both coincide.
    pub fn stationary_modes(&self, laser_detuning: f64) -> (EffectiveMode, EffectiveMode) {
        let cavity = self.halved_coupling_cavity();
        (
            EffectiveMode {
                detuning: laser_detuning + self.gamma_split / 2.0,
                cavity,
            },
            EffectiveMode {
                detuning: laser_detuning - self.gamma_split / 2.0,
                cavity,
            },
        )
    }

    /// Coupling-rate correction: the η_c → η_c/2 substitution (when a split
    /// is present) plus an empirical taper loss factor ≥ 1 dividing Ω_c.
    pub fn corrected_coupling_rate(
        &self,
        omega_c_nominal: f64,
        taper_loss_factor: f64,
    ) -> Result<f64> {
        if taper_loss_factor < 1.0 || !taper_loss_factor.is_finite() {
            return Err(Error::parameter(
                "taper_loss_factor",
                format!("must be ≥ 1, got {taper_loss_factor}"),
            ));
        }
        let split = if self.gamma_split > 0.0 {
            std::f64::consts::FRAC_1_SQRT_2
        } else {
            1.0
        };
        Ok(omega_c_nominal * split / taper_loss_factor)
    }

    /// Bare two-mode amplitude transmission for a tone at offset `offset`
    /// from a laser detuned by `laser_detuning`: both stationary modes
    /// contribute with weight η_cκ/2.
    pub fn bare_two_mode_transmission(&self, laser_detuning: f64, offset: f64) -> C64 {
        let kappa = self.base.kappa();
        let half = self.base.eta_c() * kappa / 2.0;
        let (hi, lo) = self.stationary_modes(laser_detuning);
        1.0 - half / C64::new(kappa / 2.0, -(hi.detuning + offset))
            - half / C64::new(kappa / 2.0, -(lo.detuning + offset))
    }
}

/// Change of basis propagating → stationary: (a_ccw, a_cw) ↦ (a_+, a_−).
pub fn stationary_basis(a_ccw: C64, a_cw: C64) -> (C64, C64) {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    (s * (a_ccw + a_cw), s * (a_ccw - a_cw))
}

/// Inverse basis change: (a_+, a_−) ↦ (a_ccw, a_cw).
pub fn propagating_basis(a_plus: C64, a_minus: C64) -> (C64, C64) {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    (s * (a_plus + a_minus), s * (a_plus - a_minus))
}

/// Effective coupling parameter η' from a measured residual power
/// transmission |t_r|² = (1 − 2η')², undercoupled branch η' ≤ 1/2.
pub fn infer_eta_from_residual(residual_power_transmission: f64) -> Result<f64> {
    let r = residual_power_transmission;
    if !(0.0..=1.0).contains(&r) || !r.is_finite() {
        return Err(Error::parameter(
            "residual_power_transmission",
            format!("must lie in [0, 1], got {r}"),
        ));
    }
    Ok((1.0 - r.sqrt()) / 2.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;
    use std::f64::consts::TAU;

    fn base() -> CavityParams {
        CavityParams::new(TAU * 10e6, TAU * 5e6, 775e-9).unwrap()
    }

    #[test]
    fn degenerate_limit_populates_only_ccw() {
        let p = SplitModeParams::new(0.0, base()).unwrap();
        let kappa = p.base.kappa();
        let det = -TAU * 3e6;
        let flux: f64 = 1e14;
        let (hi, lo) = p.stationary_modes(det);
        assert_eq!(hi.detuning, lo.detuning);
        let drive = flux.sqrt();
        let amp = |m: &EffectiveMode| {
            (m.cavity.eta_c() * kappa).sqrt() * drive / C64::new(kappa / 2.0, -m.detuning)
        };
        let (a_ccw, a_cw) = propagating_basis(amp(&hi), amp(&lo));
        assert!(a_cw.norm() < 1e-12 * a_ccw.norm());
        // and a_ccw reproduces the unsplit single-mode amplitude
        let single = (p.base.eta_c() * kappa).sqrt() * drive / C64::new(kappa / 2.0, -det);
        assert_relative_eq!(a_ccw.re, single.re, max_relative = 1e-12);
        assert_relative_eq!(a_ccw.im, single.im, max_relative = 1e-12);
    }

    #[test]
    fn split_modes_have_halved_coupling() {
        let p = SplitModeParams::new(TAU * 300e6, base()).unwrap();
        let (hi, lo) = p.stationary_modes(-TAU * 150e6);
        assert_relative_eq!(
            hi.cavity.eta_c(),
            p.base.eta_c() / 2.0,
            max_relative = 1e-14
        );
        assert_relative_eq!(hi.cavity.kappa(), p.base.kappa(), max_relative = 1e-14);
        assert_relative_eq!(hi.detuning - lo.detuning, TAU * 300e6, max_relative = 1e-14);
    }

    #[test]
    fn residual_inversion_reference_point() {
        let eta = infer_eta_from_residual(0.5).unwrap();
        assert_relative_eq!(eta, (2.0 - 2.0f64.sqrt()) / 4.0, max_relative = 1e-14);
        assert_relative_eq!(eta, 0.1464, max_relative = 1e-3);
        assert_eq!(infer_eta_from_residual(1.0).unwrap(), 0.0);
        assert_relative_eq!(
            infer_eta_from_residual(0.0).unwrap(),
            0.5,
            max_relative = 1e-15
        );
        assert!(infer_eta_from_residual(-0.1).is_err());
        assert!(infer_eta_from_residual(1.1).is_err());
    }

    #[test]
    fn residual_inversion_is_left_inverse() {
        for i in 0..=20 {
            let eta = 0.5 * i as f64 / 20.0;
            let r = (1.0 - 2.0 * eta).powi(2);
            assert_relative_eq!(infer_eta_from_residual(r).unwrap(), eta, epsilon = 1e-14);
        }
    }

    #[test]
    fn coupling_rate_correction() {
        let unsplit = SplitModeParams::new(0.0, base()).unwrap();
        assert_eq!(unsplit.corrected_coupling_rate(1e7, 1.0).unwrap(), 1e7);
        assert_relative_eq!(
            unsplit.corrected_coupling_rate(1e7, 1.9).unwrap(),
            1e7 / 1.9,
            max_relative = 1e-15
        );
        let split = SplitModeParams::new(TAU * 300e6, base()).unwrap();
        assert_relative_eq!(
            split.corrected_coupling_rate(1e7, 1.9).unwrap(),
            1e7 / (1.9 * 2.0f64.sqrt()),
            max_relative = 1e-14
        );
        // taper part composes multiplicatively
        let once = unsplit.corrected_coupling_rate(1e7, 1.2 * 1.5).unwrap();
        let twice = unsplit
            .corrected_coupling_rate(unsplit.corrected_coupling_rate(1e7, 1.2).unwrap(), 1.5)
            .unwrap();
        assert_relative_eq!(once, twice, max_relative = 1e-15);
        assert!(unsplit.corrected_coupling_rate(1e7, 0.5).is_err());
    }

    #[test]
    fn well_split_dips_sit_at_mode_detunings() {
        let gamma = TAU * 300e6; // 20κ
        let p = SplitModeParams::new(gamma, base()).unwrap();
        let det = -gamma / 2.0;
        let (hi, _lo) = p.stationary_modes(det);
        assert_eq!(hi.detuning, 0.0);
        // On resonance with one well-split mode the transmission drops to
        // the η' = η_c/2 single-mode value.
        let t_on = p.bare_two_mode_transmission(det, 0.0);
        let expect = 1.0 - 2.0 * (p.base.eta_c() / 2.0);
        assert_relative_eq!(t_on.re, expect, max_relative = 2e-3);
    }

    #[test]
    fn well_split_spectrum_has_two_dips_separated_by_gamma() {
        let gamma = TAU * 300e6; // 20κ
        let p = SplitModeParams::new(gamma, base()).unwrap();
        let kappa = p.base.kappa();
        let eta_eff = p.base.eta_c() / 2.0;
        let fit_window = |center: f64| {
            let n = 801;
            let (mut xs, mut ys) = (Vec::with_capacity(n), Vec::with_capacity(n));
            for i in 0..n {
                let offset = center + (i as f64 / (n - 1) as f64 - 0.5) * 6.0 * kappa;
                xs.push(offset);
                ys.push(p.bare_two_mode_transmission(0.0, offset).norm_sqr());
            }
            crate::fit::fit_lorentzian(&xs, &ys).unwrap()
        };
        let left = fit_window(-gamma / 2.0);
        let right = fit_window(gamma / 2.0);
        assert!(left.converged && right.converged);
        assert_relative_eq!(right.center - left.center, gamma, max_relative = 1e-3);
        // each dip matches the η' = η_c/2 single-mode prediction
        let depth_expect = 4.0 * eta_eff * (1.0 - eta_eff);
        assert_relative_eq!(left.depth, depth_expect, max_relative = 2e-2);
        assert_relative_eq!(right.depth, depth_expect, max_relative = 2e-2);
        assert_relative_eq!(left.fwhm, kappa, max_relative = 2e-2);
    }

    proptest! {
        #[test]
        fn basis_change_is_unitary(
            re1 in -10.0..10.0f64, im1 in -10.0..10.0f64,
            re2 in -10.0..10.0f64, im2 in -10.0..10.0f64,
        ) {
            let a_ccw = C64::new(re1, im1);
            let a_cw = C64::new(re2, im2);
            let (p, m) = stationary_basis(a_ccw, a_cw);
            let total = p.norm_sqr() + m.norm_sqr();
            prop_assert!((total - (a_ccw.norm_sqr() + a_cw.norm_sqr())).abs() <= 1e-12 * total.max(1e-12));
            let (ccw2, cw2) = propagating_basis(p, m);
            prop_assert!((ccw2 - a_ccw).norm() <= 1e-12);
            prop_assert!((cw2 - a_cw).norm() <= 1e-12);
        }
    }
}
