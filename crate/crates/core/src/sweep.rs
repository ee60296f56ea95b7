//! Error-versus-degree curves for every approximation mode.
//!
//! Weighted-norm errors are computed in coefficient space: with reference
//! coefficients `a_k` (from a projection of much higher degree) and the
//! coefficients `a~_k` of the approximant,
//! `||f - p||^2 = sum_{k<=n} (a_k - a~_k)^2 gamma_k + sum_{k>n} a_k^2 gamma_k`.
//! This avoids evaluating high-degree polynomials far out on the half-line.

use rayon::prelude::*;

use crate::basis::{gamma_norms, BasisParams, Form};
use crate::error::{Error, Result};
use crate::interpolation::{interpolate, PointKind};
use crate::projection::{default_grid, max_error_on_grid, project, project_with_rule, Expansion};
use crate::quadrature::{gauss_laguerre, gauss_radau, integrate, RuleKind};
use crate::verify::{fit_rate, fit_rate_fixed_power, select_model, FunctionSpec, GeneralFit, RateFit, MODEL_EXPONENTS};
use crate::weeks::{LaplacePair, WeeksApproximant, WeeksParams};

#[derive(Debug, Clone, PartialEq)]
pub struct ErrorCurve {
    pub ns: Vec<usize>,
    pub errors: Vec<f64>,
}

impl ErrorCurve {
    pub fn fit(&self, floor: f64) -> Result<RateFit> {
        fit_rate(&self.ns, &self.errors, floor)
    }

    pub fn select_model(&self, floor: f64) -> Result<GeneralFit> {
        select_model(&self.ns, &self.errors, floor, &MODEL_EXPONENTS)
    }

    /// Monotone upper envelope `max_{m >= n} e_m`. Errors of functions with
    /// complex-conjugate singularities oscillate under a root-exponential
    /// envelope; the bounds describe the envelope, so fits use this.
    pub fn envelope(&self) -> ErrorCurve {
        let mut errors = self.errors.clone();
        let mut run = 0.0f64;
        for e in errors.iter_mut().rev() {
            run = run.max(*e);
            *e = run;
        }
        ErrorCurve { ns: self.ns.clone(), errors }
    }

    /// Rate of the upper envelope with the algebraic power held at
    /// `log_power`. Over the short pre-floor ranges of oscillating curves the
    /// free three-parameter fit trades the power against the slope; pinning
    /// the power to its predicted value leaves one rate parameter.
    pub fn fit_envelope(&self, floor: f64, log_power: f64) -> Result<RateFit> {
        let env = self.envelope();
        fit_rate_fixed_power(&env.ns, &env.errors, floor, log_power)
    }

    /// Restriction to `lo <= n <= hi`.
    pub fn window(&self, lo: usize, hi: usize) -> ErrorCurve {
        let (ns, errors) = self
            .ns
            .iter()
            .zip(&self.errors)
            .filter(|(n, _)| (lo..=hi).contains(*n))
            .map(|(n, e)| (*n, *e))
            .unzip();
        ErrorCurve { ns, errors }
    }

    pub fn error_at(&self, n: usize) -> Option<f64> {
        self.ns.iter().position(|&m| m == n).map(|i| self.errors[i])
    }
}

/// `lo, lo + step, ...` up to and including `hi`.
pub fn degrees(lo: usize, hi: usize, step: usize) -> Vec<usize> {
    (lo..=hi).step_by(step.max(1)).collect()
}

fn max_degree(ns: &[usize]) -> Result<usize> {
    ns.iter().copied().max().ok_or_else(|| Error::InvalidParameter("empty degree list".into()))
}

/// Degree of the reference projection used for tail sums.
pub fn reference_degree(nmax: usize) -> usize {
    (2 * nmax).max(nmax + 100)
}

fn real_fn(spec: &FunctionSpec) -> impl Fn(f64) -> f64 + Sync + '_ {
    move |x| spec.eval(x)
}

/// `|a_n|` (or `|b_n|` in function form) for `n = 0..=nmax` from a single
/// projection of degree `nmax`.
pub fn coefficient_curve(spec: &FunctionSpec, alpha: f64, form: Form, nu: f64, nmax: usize) -> Result<ErrorCurve> {
    let params = BasisParams::new(alpha, form)?;
    let e = project(real_fn(spec), nmax, &params, nu, None)?;
    Ok(ErrorCurve { ns: (0..=nmax).collect(), errors: e.coeffs().iter().map(|c| c.abs()).collect() })
}

fn tail_norm(reference: &[f64], approx: &[f64], gammas: &[f64]) -> f64 {
    let mut sum = 0.0;
    for (k, (a, g)) in reference.iter().zip(gammas).enumerate() {
        let d = a - approx.get(k).copied().unwrap_or(0.0);
        sum += d * d * g;
    }
    sum.sqrt()
}

/// `|| d^m/dx^m (f - Pi_n f) ||` in the `x^{alpha+m} e^{-x}` norm, for the
/// polynomial-form projection. `m = 0` is the plain projection error.
pub fn derivative_curve(spec: &FunctionSpec, alpha: f64, m: usize, ns: &[usize]) -> Result<ErrorCurve> {
    let nref = reference_degree(max_degree(ns)?);
    let params = BasisParams::polynomial(alpha)?;
    let reference = project(real_fn(spec), nref, &params, 1.0, None)?;
    // d^m L_k^(alpha) = (-1)^m L_{k-m}^(alpha+m)
    let shifted = gamma_norms(alpha + m as f64, nref);
    let a = reference.coeffs();
    let errors = ns
        .iter()
        .map(|&n| {
            let sum: f64 = (n + 1..=nref).filter(|&k| k >= m).map(|k| a[k] * a[k] * shifted[k - m]).sum();
            sum.sqrt()
        })
        .collect();
    Ok(ErrorCurve { ns: ns.to_vec(), errors })
}

pub fn projection_weighted_curve(spec: &FunctionSpec, alpha: f64, ns: &[usize]) -> Result<ErrorCurve> {
    derivative_curve(spec, alpha, 0, ns)
}

/// Maximum error of the truncated projection on [`default_grid`].
pub fn projection_max_curve(spec: &FunctionSpec, alpha: f64, form: Form, nu: f64, ns: &[usize]) -> Result<ErrorCurve> {
    let nmax = max_degree(ns)?;
    let params = BasisParams::new(alpha, form)?;
    let full: Expansion = project(real_fn(spec), nmax, &params, nu, None)?;
    let errors = ns
        .par_iter()
        .map(|&n| {
            let grid = default_grid(alpha, n, nu)?;
            Ok(max_error_on_grid(&full.truncate(n), real_fn(spec), &grid))
        })
        .collect::<Result<Vec<f64>>>()?;
    Ok(ErrorCurve { ns: ns.to_vec(), errors })
}

/// Weighted-norm error of the degree-`n` interpolant on `n + 1` points. The
/// norm is `x^alpha e^{-x}` for the polynomial form and `x^alpha` for the
/// function form.
pub fn interpolation_curve(spec: &FunctionSpec, alpha: f64, kind: PointKind, form: Form, ns: &[usize]) -> Result<ErrorCurve> {
    let nref = reference_degree(max_degree(ns)?);
    let params = BasisParams::new(alpha, form)?;
    let reference = project(real_fn(spec), nref, &params, 1.0, None)?;
    let gammas = gamma_norms(alpha, nref);
    let errors = ns
        .par_iter()
        .map(|&n| {
            let itp = interpolate(real_fn(spec), kind, form, alpha, n)?;
            // the interpolant has degree n, so an (n+1)-point Gauss rule
            // recovers its coefficients exactly
            let rule = gauss_laguerre(alpha, n + 1)?;
            let approx = project_with_rule(|x| itp.eval(x), n, form, 1.0, &rule)?;
            Ok(tail_norm(reference.coeffs(), approx.coeffs(), &gammas))
        })
        .collect::<Result<Vec<f64>>>()?;
    Ok(ErrorCurve { ns: ns.to_vec(), errors })
}

/// Error of the `(n+1)`-point rule for `int x^alpha e^{-x} f(x) dx`, against a
/// Gauss reference of order `4 nmax + 64`.
pub fn quadrature_curve(spec: &FunctionSpec, alpha: f64, kind: RuleKind, ns: &[usize]) -> Result<ErrorCurve> {
    let nmax = max_degree(ns)?;
    let reference = integrate(&gauss_laguerre(alpha, 4 * nmax + 64)?, real_fn(spec))?;
    let errors = ns
        .par_iter()
        .map(|&n| {
            let rule = match kind {
                RuleKind::Gauss => gauss_laguerre(alpha, n + 1)?,
                RuleKind::Radau => gauss_radau(alpha, n + 1)?,
            };
            Ok((integrate(&rule, real_fn(spec))? - reference).abs())
        })
        .collect::<Result<Vec<f64>>>()?;
    Ok(ErrorCurve { ns: ns.to_vec(), errors })
}

/// Signed Weeks errors `f(t) - f_n(t)` for each `n` and each `t`.
#[derive(Debug, Clone, PartialEq)]
pub struct WeeksCurve {
    pub ns: Vec<usize>,
    pub ts: Vec<f64>,
    /// `diffs[i][j]` is the error at `ts[i]` for `ns[j]`.
    pub diffs: Vec<Vec<f64>>,
}

impl WeeksCurve {
    pub fn curve(&self, i: usize) -> ErrorCurve {
        ErrorCurve { ns: self.ns.clone(), errors: self.diffs[i].iter().map(|d| d.abs()).collect() }
    }
}

pub fn weeks_curve(pair: &LaplacePair, sigma: f64, nu: f64, ns: &[usize], ts: &[f64]) -> Result<WeeksCurve> {
    let exact = pair
        .exact
        .as_ref()
        .ok_or_else(|| Error::Domain(format!("pair `{}` has no closed-form inverse", pair.name)))?;
    let per_n = ns
        .par_iter()
        .map(|&n| {
            let approx = WeeksApproximant::new(pair, &WeeksParams::new(sigma, nu, n)?)?;
            ts.iter().map(|&t| Ok(exact(t) - approx.eval(t)?)).collect::<Result<Vec<f64>>>()
        })
        .collect::<Result<Vec<Vec<f64>>>>()?;
    let diffs = (0..ts.len()).map(|i| per_n.iter().map(|row| row[i]).collect()).collect();
    Ok(WeeksCurve { ns: ns.to_vec(), ts: ts.to_vec(), diffs })
}
