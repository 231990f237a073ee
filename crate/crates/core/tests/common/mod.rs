//! Brute-force reference implementations shared by the integration tests.
//!
//! Everything here is deliberately independent of the library's solution
//! paths: dense scans, elimination on the raw coupled-mode equations,
//! time-domain demodulation. Slow and simple on purpose.

use num_complex::Complex64 as C64;
use omit_core::params::{SystemParams, HBAR};

/// Dense-grid scan for steady-state roots in the frequency-shift variable
/// u = g₀x̄: bracket sign changes of the self-consistency cubic on a uniform
/// grid, then bisect each bracket.
pub fn scan_steady_state_shifts(
    sys: &SystemParams,
    laser_detuning: f64,
    flux: f64,
    n_grid: usize,
) -> Vec<f64> {
    let kappa = sys.cavity.kappa();
    let s = HBAR * sys.coupling.g0.powi(2) * sys.cavity.eta_c() * kappa * flux
        / (sys.mechanics.m_eff * sys.mechanics.omega_m.powi(2));
    let b = -2.0 * laser_detuning;
    let c = laser_detuning * laser_detuning + kappa * kappa / 4.0;
    let q = move |u: f64| ((u + b) * u + c) * u + s;
    // Fujiwara root bound for the monic cubic.
    let bound = 2.0 * b.abs().max(c.sqrt()).max(s.cbrt());
    let mut roots = Vec::new();
    let mut prev_u = -bound;
    let mut prev_q = q(prev_u);
    for i in 1..=n_grid {
        let u = -bound + bound * i as f64 / n_grid as f64;
        let qu = q(u);
        if prev_q == 0.0 {
            roots.push(prev_u);
        } else if prev_q * qu < 0.0 {
            let (mut lo, mut hi) = (prev_u, u);
            for _ in 0..80 {
                let mid = 0.5 * (lo + hi);
                if q(lo) * q(mid) <= 0.0 {
                    hi = mid;
                } else {
                    lo = mid;
                }
            }
            roots.push(0.5 * (lo + hi));
        }
        prev_u = u;
        prev_q = qu;
    }
    roots
}

/// Complex n×n Gaussian elimination with partial pivoting.
#[allow(clippy::needless_range_loop)]
pub fn solve_complex(mut m: Vec<Vec<C64>>, mut b: Vec<C64>) -> Vec<C64> {
    let n = b.len();
    for col in 0..n {
        let pivot = (col..n)
            .max_by(|&i, &j| {
                m[i][col]
                    .norm_sqr()
                    .partial_cmp(&m[j][col].norm_sqr())
                    .unwrap()
            })
            .unwrap();
        m.swap(col, pivot);
        b.swap(col, pivot);
        assert!(m[col][col].norm_sqr() > 0.0, "singular oracle system");
        for row in col + 1..n {
            let f = m[row][col] / m[col][col];
            for k in col..n {
                let sub = f * m[col][k];
                m[row][k] -= sub;
            }
            let sub = f * b[col];
            b[row] -= sub;
        }
    }
    let mut x = vec![C64::new(0.0, 0.0); n];
    for row in (0..n).rev() {
        let mut acc = b[row];
        for k in row + 1..n {
            acc -= m[row][k] * x[k];
        }
        x[row] = acc / m[row][row];
    }
    x
}

/// Full two-mode linear response: both stationary modes of a split cavity
/// carry an anti-Stokes and a Stokes sideband, coupled through the shared
/// mechanical mode — five complex unknowns (A⁻₊, (A⁺₊)*, A⁻₋, (A⁺₋)*, X̃).
///
/// `sys` carries the *unsplit* cavity (physical η_c); `laser_detuning` is
/// the effective detuning from the degenerate resonance. Returns the probe
/// amplitude transmission at modulation frequency Ω.
pub fn two_mode_transmission(
    sys: &SystemParams,
    gamma_split: f64,
    laser_detuning: f64,
    flux: f64,
    omega: f64,
) -> C64 {
    let kappa = sys.cavity.kappa();
    let eta = sys.cavity.eta_c();
    let mech = sys.mechanics;
    let g0 = sys.coupling.g0;
    let x_zpf = sys.x_zpf();
    let drive = flux.sqrt();
    let half_coupling = (eta * kappa / 2.0).sqrt();

    // complex steady amplitudes of the two stationary modes
    let det = [
        laser_detuning + gamma_split / 2.0,
        laser_detuning - gamma_split / 2.0,
    ];
    let a_bar: Vec<C64> = det
        .iter()
        .map(|&d| half_coupling * drive / C64::new(kappa / 2.0, -d))
        .collect();

    let zero = C64::new(0.0, 0.0);
    let mut m = vec![vec![zero; 5]; 5];
    let mut rhs = vec![zero; 5];
    for mode in 0..2 {
        let anti = 2 * mode; // row/col of A⁻ for this mode
        let stokes = anti + 1; // row/col of (A⁺)*
        m[anti][anti] = C64::new(kappa / 2.0, -(det[mode] + omega));
        m[anti][4] = C64::i() * g0 * x_zpf * a_bar[mode];
        rhs[anti] = C64::new(half_coupling, 0.0);
        m[stokes][stokes] = C64::new(kappa / 2.0, det[mode] - omega);
        m[stokes][4] = -C64::i() * g0 * x_zpf * a_bar[mode].conj();
        // mechanics row: radiation-pressure beat of each mode, no cross term
        m[4][anti] = 2.0 * g0 * x_zpf * a_bar[mode].conj();
        m[4][stokes] = 2.0 * g0 * x_zpf * a_bar[mode];
    }
    m[4][4] = C64::new(
        (mech.omega_m * mech.omega_m - omega * omega) / mech.omega_m,
        -mech.gamma_m * omega / mech.omega_m,
    );

    let sol = solve_complex(m, rhs);
    1.0 - half_coupling * (sol[0] + sol[2])
}
