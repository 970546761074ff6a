//! Least-squares Bleaney-Bowers fits.
//!
//! Minimizes `sum_i (chi(T_i; J, g) - chi_i)^2` with a Levenberg-Marquardt
//! iteration on an analytic Jacobian. The start value for J comes from a
//! coarse scan in which g^2 (the overall amplitude) is eliminated in closed
//! form, so the start does not depend on the data's absolute scale.

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use super::dataset::{SusceptibilityDataset, SusceptibilityPoint};
use crate::constants::CURIE_PREFACTOR;
use crate::error::{Error, Result};
use crate::phasemap::linspace;
use crate::substance::{occupations, Coupling};

/// How the Lande factor is treated.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GPolicy {
    Fixed(f64),
    Free { init: f64 },
}

impl Default for GPolicy {
    /// Typical Cu(II) value.
    fn default() -> Self {
        GPolicy::Fixed(2.1)
    }
}

impl GPolicy {
    fn start(self) -> f64 {
        match self {
            GPolicy::Fixed(g) | GPolicy::Free { init: g } => g,
        }
    }

    fn is_free(self) -> bool {
        matches!(self, GPolicy::Free { .. })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FitOptions {
    pub max_iterations: usize,
    /// Threshold on the scaled gradient reported in [`FitResult::gradient_norm`].
    pub gradient_tolerance: f64,
    pub lambda_initial: f64,
    pub lambda_up: f64,
    pub lambda_down: f64,
    /// `(min, max, points)` of the starting scan over J/k_B in kelvin.
    pub scan: (f64, f64, usize),
}

impl Default for FitOptions {
    fn default() -> Self {
        FitOptions {
            max_iterations: 200,
            gradient_tolerance: 1e-10,
            lambda_initial: 1e-3,
            lambda_up: 10.0,
            lambda_down: 10.0,
            scan: (-500.0, 500.0, 1001),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FitResult {
    pub j_over_kb: f64,
    pub g: f64,
    /// Root-mean-square residual, emu/mol.
    pub residual_rms: f64,
    /// Parameter variances `s^2 (J^T J)^-1`, ordered `[J, g]` (or `[J]` with g fixed).
    pub covariance_diag: Vec<f64>,
    pub converged: bool,
    pub iterations: usize,
    /// `max_k |(J^T r)_k| / (|J_k| |chi|)`, dimensionless.
    pub gradient_norm: f64,
}

impl FitResult {
    pub fn coupling(&self) -> Result<Coupling> {
        Coupling::new(self.j_over_kb)
    }
}

/// JSON fit report; field order is part of the output format.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FitReport {
    #[serde(rename = "j_over_kb_K")]
    pub j_over_kb_k: f64,
    pub g: f64,
    pub residual_rms: f64,
    pub converged: bool,
    pub iterations: usize,
    #[serde(rename = "pressure_GPa")]
    pub pressure_gpa: Option<f64>,
    pub label: String,
}

impl FitReport {
    pub fn new(fit: &FitResult, data: &SusceptibilityDataset) -> Self {
        FitReport {
            j_over_kb_k: fit.j_over_kb,
            g: fit.g,
            residual_rms: fit.residual_rms,
            converged: fit.converged,
            iterations: fit.iterations,
            pressure_gpa: data.pressure_gpa(),
            label: data.label().to_string(),
        }
    }
}

/// Bleaney-Bowers molar susceptibility without range checks, for the fit loop.
#[inline]
pub fn bleaney_bowers(j_over_kb: f64, g: f64, temperature: f64) -> f64 {
    2.0 * CURIE_PREFACTOR * g * g / temperature * occupations(j_over_kb / temperature).0
}

/// Noise-free Bleaney-Bowers data at the given temperatures.
pub fn synthesize(
    j_over_kb: f64,
    g: f64,
    temperatures: &[f64],
    pressure_gpa: Option<f64>,
    label: impl Into<String>,
) -> Result<SusceptibilityDataset> {
    Coupling::new(j_over_kb)?;
    if !(g.is_finite() && g > 0.0) {
        return Err(Error::InvalidGFactor(g));
    }
    let points = temperatures
        .iter()
        .map(|&t| SusceptibilityPoint {
            temperature: t,
            chi: bleaney_bowers(j_over_kb, g, t),
        })
        .collect();
    SusceptibilityDataset::new(points, pressure_gpa, label)
}

/// Model minus data at every temperature.
pub fn residuals(data: &SusceptibilityDataset, j_over_kb: f64, g: f64) -> Vec<f64> {
    data.points()
        .iter()
        .map(|p| bleaney_bowers(j_over_kb, g, p.temperature) - p.chi)
        .collect()
}

/// Rows `[d r_i / dJ, d r_i / dg]`, using `dF/dJ = -F (1 - 3F) / T`.
pub fn residual_jacobian(data: &SusceptibilityDataset, j_over_kb: f64, g: f64) -> Vec<[f64; 2]> {
    data.points()
        .iter()
        .map(|p| {
            let t = p.temperature;
            let (f, singlet) = occupations(j_over_kb / t);
            let amp = 2.0 * CURIE_PREFACTOR / t;
            let d_j = -amp * g * g * f * singlet / t;
            let d_g = 2.0 * amp * g * f;
            [d_j, d_g]
        })
        .collect()
}

fn sum_sq(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum()
}

/// Best J on the scan grid, with `g^2` either fixed or solved in closed form.
fn scan_start(data: &SusceptibilityDataset, policy: GPolicy, opts: &FitOptions) -> f64 {
    let (lo, hi, n) = opts.scan;
    let mut best = (f64::INFINITY, 0.0);
    for j in linspace(lo, hi, n.max(1)) {
        let shape: Vec<f64> = data
            .points()
            .iter()
            .map(|p| bleaney_bowers(j, 1.0, p.temperature))
            .collect();
        let g2 = match policy {
            GPolicy::Fixed(g) => g * g,
            GPolicy::Free { .. } => {
                let num: f64 = shape
                    .iter()
                    .zip(data.points())
                    .map(|(m, p)| m * p.chi)
                    .sum();
                let den = sum_sq(&shape);
                if den > 0.0 && num > 0.0 {
                    num / den
                } else {
                    continue;
                }
            }
        };
        let sse: f64 = shape
            .iter()
            .zip(data.points())
            .map(|(m, p)| (g2 * m - p.chi).powi(2))
            .sum();
        if sse < best.0 {
            best = (sse, j);
        }
    }
    best.1
}

pub fn fit_bleaney_bowers(data: &SusceptibilityDataset, policy: GPolicy) -> Result<FitResult> {
    fit_bleaney_bowers_with(data, policy, &FitOptions::default())
}

pub fn fit_bleaney_bowers_with(
    data: &SusceptibilityDataset,
    policy: GPolicy,
    opts: &FitOptions,
) -> Result<FitResult> {
    let g0 = policy.start();
    if !(g0.is_finite() && g0 > 0.0) {
        return Err(Error::InvalidGFactor(g0));
    }
    let free_g = policy.is_free();
    let n_par = if free_g { 2 } else { 1 };
    let chi_norm = sum_sq(&data.points().iter().map(|p| p.chi).collect::<Vec<_>>()).sqrt();

    let mut params = [scan_start(data, policy, opts), g0];
    let mut r = residuals(data, params[0], params[1]);
    let mut sse = sum_sq(&r);
    let mut lambda = opts.lambda_initial;
    let mut iterations = 0;

    let (normal, gradient_norm) = loop {
        let jac = build_jacobian(data, params, n_par);
        let normal = jac.transpose() * &jac;
        let grad = jac.transpose() * DVector::from_column_slice(&r);
        let gradient_norm = scaled_gradient(&jac, &grad, chi_norm);
        if gradient_norm <= opts.gradient_tolerance || iterations >= opts.max_iterations {
            break (normal, gradient_norm);
        }
        iterations += 1;

        let mut accepted = false;
        while lambda < 1e30 {
            let mut damped = normal.clone();
            for k in 0..n_par {
                damped[(k, k)] += lambda * normal[(k, k)].max(f64::MIN_POSITIVE);
            }
            let Some(chol) = damped.cholesky() else {
                lambda *= opts.lambda_up;
                continue;
            };
            let step = chol.solve(&(-&grad));
            let mut trial = params;
            for k in 0..n_par {
                trial[k] += step[k];
            }
            let r_trial = residuals(data, trial[0], trial[1]);
            let sse_trial = sum_sq(&r_trial);
            if sse_trial.is_finite() && sse_trial < sse {
                params = trial;
                r = r_trial;
                sse = sse_trial;
                lambda /= opts.lambda_down;
                accepted = true;
                break;
            }
            lambda *= opts.lambda_up;
        }
        if !accepted {
            // stalled at a floating-point minimum
            break (normal, gradient_norm);
        }
    };
    let converged = gradient_norm <= opts.gradient_tolerance && sse.is_finite();

    let n = data.len();
    let dof = n.saturating_sub(n_par).max(1) as f64;
    let s2 = sse / dof;
    let covariance_diag = normal
        .try_inverse()
        .map(|inv| (0..n_par).map(|k| s2 * inv[(k, k)]).collect())
        .unwrap_or_else(|| vec![f64::INFINITY; n_par]);

    Ok(FitResult {
        j_over_kb: params[0],
        g: params[1].abs(),
        residual_rms: (sse / n as f64).sqrt(),
        covariance_diag,
        converged,
        iterations,
        gradient_norm,
    })
}

fn scaled_gradient(jac: &DMatrix<f64>, grad: &DVector<f64>, chi_norm: f64) -> f64 {
    (0..jac.ncols())
        .map(|k| {
            let col = jac.column(k).norm();
            if col > 0.0 {
                grad[k].abs() / (col * chi_norm)
            } else {
                0.0
            }
        })
        .fold(0.0, f64::max)
}

fn build_jacobian(data: &SusceptibilityDataset, params: [f64; 2], n_par: usize) -> DMatrix<f64> {
    let rows = residual_jacobian(data, params[0], params[1]);
    DMatrix::from_fn(rows.len(), n_par, |i, k| rows[i][k])
}
