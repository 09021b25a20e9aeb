//! Least-squares extraction of single-peak parameters from a broadened
//! spectrum via Levenberg-Marquardt with analytic derivatives.

use crate::error::{Error, Result};
use crate::observables::SpectrumData;

/// Best-fit parameters of `A L(omega - omega0)` over a fit window, with the
/// unit-area Lorentzian of FWHM `gamma`. `residual` is the root of the final
/// sum of squares.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LorentzianFit {
    pub omega0: f64,
    pub gamma: f64,
    pub amplitude: f64,
    pub residual: f64,
}

const MAX_ITERATIONS: usize = 300;
const MAX_REJECTIONS: usize = 40;

/// Fits one Lorentzian to the curve samples inside `window = (lo, hi)`.
///
/// With `fixed_gamma` the width is pinned and only the position and amplitude
/// vary. Initial guesses come from the tallest sample in the window and its
/// half-maximum width.
pub fn lorentzian_fit(
    spectrum: &SpectrumData,
    window: (f64, f64),
    fixed_gamma: Option<f64>,
) -> Result<LorentzianFit> {
    let (lo, hi) = window;
    if !(lo < hi) || !lo.is_finite() || !hi.is_finite() {
        return Err(Error::InvalidInput(format!(
            "fit window ({lo}, {hi}) is not an ordered finite interval"
        )));
    }
    if let Some(g) = fixed_gamma {
        if !(g > 0.0) || !g.is_finite() {
            return Err(Error::InvalidInput(format!(
                "fixed width must be positive, got {g}"
            )));
        }
    }
    let points: Vec<(f64, f64)> = spectrum
        .omega_grid()
        .iter()
        .zip(spectrum.curve())
        .filter(|(w, _)| **w >= lo && **w <= hi)
        .map(|(&w, &y)| (w, y))
        .collect();
    let free_gamma = fixed_gamma.is_none();
    let n_params = if free_gamma { 3 } else { 2 };
    if points.len() <= n_params {
        return Err(Error::InvalidInput(format!(
            "window ({lo}, {hi}) holds {} grid points, need more than {n_params}",
            points.len()
        )));
    }

    let (peak_omega, peak_height) = points
        .iter()
        .copied()
        .fold((points[0].0, f64::MIN), |best, (w, y)| {
            if y > best.1 {
                (w, y)
            } else {
                best
            }
        });
    let gamma0 = fixed_gamma.unwrap_or_else(|| {
        half_max_width(&points, peak_omega, peak_height).unwrap_or((hi - lo) / 10.0)
    });
    // A peak of unit-area shape has height 2 A / (pi gamma).
    let mut params = [
        0.5 * peak_height * std::f64::consts::PI * gamma0,
        peak_omega,
        gamma0,
    ];
    let mut sse = sum_of_squares(&points, &params);
    let mut damping = 1e-3;

    for _ in 0..MAX_ITERATIONS {
        let (normal, gradient) = normal_equations(&points, &params, free_gamma);
        let mut accepted = false;
        for _ in 0..MAX_REJECTIONS {
            let Some(step) = solve_damped(&normal, &gradient, damping, n_params) else {
                damping *= 10.0;
                continue;
            };
            let mut trial = params;
            for (p, s) in trial.iter_mut().zip(&step) {
                *p -= s;
            }
            if trial[2] <= 0.0 {
                damping *= 10.0;
                continue;
            }
            let trial_sse = sum_of_squares(&points, &trial);
            if trial_sse <= sse {
                let shrunk = step
                    .iter()
                    .zip(&params)
                    .all(|(s, p)| s.abs() <= 1e-14 * (1.0 + p.abs()));
                params = trial;
                sse = trial_sse;
                damping = (damping / 10.0).max(1e-14);
                accepted = true;
                if shrunk {
                    return Ok(finish(params, sse));
                }
                break;
            }
            damping *= 10.0;
        }
        if !accepted {
            // The damped step no longer improves anything: converged.
            return Ok(finish(params, sse));
        }
    }
    Err(Error::FitFailure(format!(
        "no convergence after {MAX_ITERATIONS} iterations, residual {:.3e}",
        sse.sqrt()
    )))
}

fn finish(params: [f64; 3], sse: f64) -> LorentzianFit {
    LorentzianFit {
        amplitude: params[0],
        omega0: params[1],
        gamma: params[2],
        residual: sse.sqrt(),
    }
}

fn model(w: f64, p: &[f64; 3]) -> f64 {
    let d = (w - p[1]).powi(2) + 0.25 * p[2] * p[2];
    p[0] * p[2] / (2.0 * std::f64::consts::PI) / d
}

fn sum_of_squares(points: &[(f64, f64)], p: &[f64; 3]) -> f64 {
    points
        .iter()
        .map(|&(w, y)| (model(w, p) - y).powi(2))
        .sum()
}

/// Accumulates `J^T J` (upper triangle, row-major 3x3) and `J^T r` for the
/// residual `r = model - y`. The width column is left zero when pinned.
fn normal_equations(
    points: &[(f64, f64)],
    p: &[f64; 3],
    free_gamma: bool,
) -> ([f64; 9], [f64; 3]) {
    let mut normal = [0.0; 9];
    let mut gradient = [0.0; 3];
    let two_pi = 2.0 * std::f64::consts::PI;
    for &(w, y) in points {
        let dw = w - p[1];
        let d = dw * dw + 0.25 * p[2] * p[2];
        let f = p[0] * p[2] / two_pi / d;
        let r = f - y;
        let mut j = [
            p[2] / two_pi / d,
            p[0] * p[2] / two_pi * 2.0 * dw / (d * d),
            p[0] / two_pi * (dw * dw - 0.25 * p[2] * p[2]) / (d * d),
        ];
        if !free_gamma {
            j[2] = 0.0;
        }
        for a in 0..3 {
            gradient[a] += j[a] * r;
            for b in a..3 {
                normal[a * 3 + b] += j[a] * j[b];
            }
        }
    }
    (normal, gradient)
}

/// Solves `(N + damping diag(N)) x = g` for the active parameters by Gaussian
/// elimination with partial pivoting. Returns `None` on a singular system.
fn solve_damped(
    normal: &[f64; 9],
    gradient: &[f64; 3],
    damping: f64,
    n_params: usize,
) -> Option<[f64; 3]> {
    let n = n_params;
    let mut a = [[0.0; 4]; 3];
    for row in 0..n {
        for col in 0..n {
            let (lo, hi) = (row.min(col), row.max(col));
            a[row][col] = normal[lo * 3 + hi];
        }
        a[row][row] *= 1.0 + damping;
        if a[row][row] == 0.0 {
            a[row][row] = damping.max(1e-300);
        }
        a[row][n] = gradient[row];
    }
    for col in 0..n {
        let pivot = (col..n).max_by(|&i, &j| {
            a[i][col].abs().partial_cmp(&a[j][col].abs()).unwrap()
        })?;
        if a[pivot][col].abs() < 1e-300 {
            return None;
        }
        a.swap(col, pivot);
        for row in col + 1..n {
            let factor = a[row][col] / a[col][col];
            for k in col..=n {
                a[row][k] -= factor * a[col][k];
            }
        }
    }
    let mut x = [0.0; 3];
    for row in (0..n).rev() {
        let tail: f64 = (row + 1..n).map(|k| a[row][k] * x[k]).sum();
        x[row] = (a[row][n] - tail) / a[row][row];
    }
    Some(x)
}

fn half_max_width(points: &[(f64, f64)], peak_omega: f64, peak_height: f64) -> Option<f64> {
    let half = 0.5 * peak_height;
    let left = points
        .iter()
        .rev()
        .find(|(w, y)| *w < peak_omega && *y < half)
        .map(|(w, _)| *w);
    let right = points
        .iter()
        .find(|(w, y)| *w > peak_omega && *y < half)
        .map(|(w, _)| *w);
    match (left, right) {
        (Some(l), Some(r)) => Some(r - l),
        (Some(l), None) => Some(2.0 * (peak_omega - l)),
        (None, Some(r)) => Some(2.0 * (r - peak_omega)),
        (None, None) => None,
    }
}
