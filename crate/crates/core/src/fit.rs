//! Four-parameter Lorentzian least-squares fitting.
//!
//! Model: y = baseline − depth·(w/2)² / ((x − center)² + (w/2)²).
//! A dip has depth > 0, a peak depth < 0.
//!
//! Damped least squares (Levenberg–Marquardt) with the analytic Jacobian
//! and multiplicative diag(JᵀJ) damping, which keeps every step — and hence
//! the whole fit — exactly equivariant under rescaling of the x axis.
//! Deterministic initialization, no randomness anywhere.

use serde::Serialize;

use crate::error::{Error, Result};

const MAX_ITERATIONS: usize = 200;
const REL_STEP_TOL: f64 = 1e-10;

/// Fitted dip/peak parameters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LorentzianFit {
    /// Line center (x units).
    pub center: f64,
    /// Full width at half maximum (x units), > 0 when constrained.
    pub fwhm: f64,
    /// Depth of the feature (y units); negative for a peak.
    pub depth: f64,
    /// Baseline level (y units).
    pub baseline: f64,
    /// √(Σr²/N) of the final residuals.
    pub rms_residual: f64,
    /// Relative parameter change dropped below 1e-10 within the cap.
    pub converged: bool,
    pub iterations: usize,
    /// Depth is consistent with zero, so the width is meaningless.
    pub fwhm_unconstrained: bool,
}

impl LorentzianFit {
    /// Model value at `x`.
    pub fn evaluate(&self, x: f64) -> f64 {
        let hw2 = (self.fwhm / 2.0) * (self.fwhm / 2.0);
        let d = x - self.center;
        self.baseline - self.depth * hw2 / (d * d + hw2)
    }

    /// Model value at the line center, baseline − depth.
    pub fn extremum(&self) -> f64 {
        self.baseline - self.depth
    }
}

/// Fit the four-parameter Lorentzian to (x, y).
///
/// Needs ≥ 5 finite points. Non-convergence within the iteration cap is not
/// an error: the best-so-far parameters are returned with `converged = false`.
pub fn fit_lorentzian(x: &[f64], y: &[f64]) -> Result<LorentzianFit> {
    if x.len() != y.len() {
        return Err(Error::parameter(
            "x/y",
            format!("length mismatch: {} vs {}", x.len(), y.len()),
        ));
    }
    if x.len() < 5 {
        return Err(Error::parameter(
            "x/y",
            format!("need ≥ 5 points, got {}", x.len()),
        ));
    }
    if x.iter().chain(y.iter()).any(|v| !v.is_finite()) {
        return Err(Error::parameter("x/y", "all values must be finite"));
    }
    let n = x.len();

    let (x_min, x_max) = min_max(x);
    let (y_min, y_max) = min_max(y);
    let span = x_max - x_min;
    if span <= 0.0 {
        return Err(Error::parameter("x", "grid has zero span"));
    }
    let y_scale = y_max.abs().max(y_min.abs()).max(f64::MIN_POSITIVE);

    // Deterministic initialization: baseline from the outer 10% of points,
    // center at the strongest deviation, width at half the span.
    let n_edge = (n / 20).max(1);
    let mut outer: Vec<f64> = y[..n_edge]
        .iter()
        .chain(y[n - n_edge..].iter())
        .copied()
        .collect();
    outer.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let baseline0 = if outer.len() % 2 == 1 {
        outer[outer.len() / 2]
    } else {
        0.5 * (outer[outer.len() / 2 - 1] + outer[outer.len() / 2])
    };
    let ext = (0..n)
        .max_by(|&i, &j| {
            (y[i] - baseline0)
                .abs()
                .partial_cmp(&(y[j] - baseline0).abs())
                .unwrap()
        })
        .unwrap();
    let mut p = [x[ext], span / 2.0, baseline0 - y[ext], baseline0];

    if y_max == y_min {
        // Perfectly flat data: the model already matches with zero depth.
        return Ok(LorentzianFit {
            center: p[0],
            fwhm: p[1].abs(),
            depth: 0.0,
            baseline: y[0],
            rms_residual: 0.0,
            converged: true,
            iterations: 0,
            fwhm_unconstrained: true,
        });
    }

    let mut lambda = 1e-3;
    let mut cost = cost_of(&p, x, y);
    let mut converged = false;
    let mut iterations = 0;

    while iterations < MAX_ITERATIONS {
        iterations += 1;
        let (a, g) = normal_equations(&p, x, y);
        let step = match solve_damped(&a, &g, lambda) {
            Some(s) => s,
            None => {
                lambda = (lambda * 10.0).min(1e12);
                continue;
            }
        };
        let scales = [
            p[0].abs().max(span),
            p[1].abs().max(span),
            p[2].abs().max(y_scale),
            p[3].abs().max(y_scale),
        ];
        let rel = (0..4)
            .map(|i| (step[i] / scales[i]).abs())
            .fold(0.0, f64::max);
        let trial = [
            p[0] + step[0],
            p[1] + step[1],
            p[2] + step[2],
            p[3] + step[3],
        ];
        let trial_cost = cost_of(&trial, x, y);
        if trial_cost.is_finite() && trial_cost < cost {
            p = trial;
            cost = trial_cost;
            lambda = (lambda / 10.0).max(1e-14);
        } else {
            lambda = (lambda * 10.0).min(1e12);
        }
        // A proposed step below tolerance means the parameters have settled,
        // whether or not the step still lowered the (already minimal) cost.
        if rel < REL_STEP_TOL {
            converged = true;
            break;
        }
    }

    let depth = p[2];
    Ok(LorentzianFit {
        center: p[0],
        fwhm: p[1].abs(),
        depth,
        baseline: p[3],
        rms_residual: (cost / n as f64).sqrt(),
        converged,
        iterations,
        fwhm_unconstrained: depth.abs() <= 1e-10 * y_scale,
    })
}

fn min_max(v: &[f64]) -> (f64, f64) {
    v.iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &x| {
            (lo.min(x), hi.max(x))
        })
}

fn model(p: &[f64; 4], x: f64) -> f64 {
    let hw2 = (p[1] / 2.0) * (p[1] / 2.0);
    let d = x - p[0];
    p[3] - p[2] * hw2 / (d * d + hw2)
}

fn cost_of(p: &[f64; 4], x: &[f64], y: &[f64]) -> f64 {
    x.iter()
        .zip(y)
        .map(|(&xi, &yi)| (model(p, xi) - yi).powi(2))
        .sum()
}

/// JᵀJ and Jᵀr for the current parameters.
#[allow(clippy::needless_range_loop)] // index form keeps the 4×4 algebra readable
fn normal_equations(p: &[f64; 4], x: &[f64], y: &[f64]) -> ([[f64; 4]; 4], [f64; 4]) {
    let mut a = [[0.0; 4]; 4];
    let mut g = [0.0; 4];
    let half_w = p[1] / 2.0;
    let hw2 = half_w * half_w;
    for (&xi, &yi) in x.iter().zip(y) {
        let d = xi - p[0];
        let den = d * d + hw2;
        let den2 = den * den;
        let lor = hw2 / den;
        let jac = [
            -p[2] * 2.0 * hw2 * d / den2,
            -p[2] * half_w * d * d / den2,
            -lor,
            1.0,
        ];
        let r = p[3] - p[2] * lor - yi;
        for i in 0..4 {
            g[i] += jac[i] * r;
            for j in i..4 {
                a[i][j] += jac[i] * jac[j];
            }
        }
    }
    for i in 0..4 {
        for j in 0..i {
            a[i][j] = a[j][i];
        }
    }
    (a, g)
}

/// Solve (A + λ·diag(A))δ = −g; None if the damped matrix is singular.
#[allow(clippy::needless_range_loop)]
fn solve_damped(a: &[[f64; 4]; 4], g: &[f64; 4], lambda: f64) -> Option<[f64; 4]> {
    let mut m = *a;
    let mut b = [-g[0], -g[1], -g[2], -g[3]];
    for i in 0..4 {
        m[i][i] += lambda * a[i][i];
        // A zero diagonal means the residual is flat in this parameter;
        // freeze it instead of failing (flat-data and depth ≈ 0 cases).
        if m[i][i] == 0.0 {
            m[i][i] = 1.0;
            b[i] = 0.0;
        }
    }
    for col in 0..4 {
        let pivot =
            (col..4).max_by(|&i, &j| m[i][col].abs().partial_cmp(&m[j][col].abs()).unwrap())?;
        if m[pivot][col] == 0.0 || !m[pivot][col].is_finite() {
            return None;
        }
        m.swap(col, pivot);
        b.swap(col, pivot);
        for row in col + 1..4 {
            let f = m[row][col] / m[col][col];
            for k in col..4 {
                m[row][k] -= f * m[col][k];
            }
            b[row] -= f * b[col];
        }
    }
    let mut out = [0.0; 4];
    for row in (0..4).rev() {
        let mut acc = b[row];
        for k in row + 1..4 {
            acc -= m[row][k] * out[k];
        }
        out[row] = acc / m[row][row];
    }
    if out.iter().all(|v| v.is_finite()) {
        Some(out)
    } else {
        None
    }
}
