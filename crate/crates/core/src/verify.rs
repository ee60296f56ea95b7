//! Executable versions of the convergence theory: parabola geometry, the
//! weighted Cauchy transform `Phi_n` of the basis, the contour-integral
//! coefficient formula, the `V_alpha` prefactor constants and
//! root-exponential rate fitting.
//!
//! Conventions: `P_rho = { z : Re sqrt(-z) = rho }`, parametrized by
//! `z(t) = (t - i rho)^2 = t^2 - rho^2 - 2 t rho i`, so that
//! `sqrt(-z(t)) = rho + i t` and `|z'(t)| = 2 sqrt(t^2 + rho^2)`.

use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;

use crate::basis::{gamma_norm, glf_raw};
use crate::error::{check_alpha, Error, Result};
use crate::quadrature::{gauss_laguerre, gauss_legendre};

pub type RealFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;
pub type ComplexFn = Arc<dyn Fn(Complex64) -> Complex64 + Send + Sync>;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Parabola {
    rho: f64,
}

impl Parabola {
    pub fn new(rho: f64) -> Result<Self> {
        if rho.is_finite() && rho > 0.0 {
            Ok(Self { rho })
        } else {
            Err(Error::InvalidParameter(format!("rho must be finite and > 0, got {rho}")))
        }
    }

    pub fn rho(&self) -> f64 {
        self.rho
    }

    pub fn z(&self, t: f64) -> Complex64 {
        Complex64::new(t * t - self.rho * self.rho, -2.0 * t * self.rho)
    }

    pub fn dz(&self, t: f64) -> Complex64 {
        Complex64::new(2.0 * t, -2.0 * self.rho)
    }

    /// Principal `sqrt(-z(t))`.
    pub fn sqrt_neg_z(&self, t: f64) -> Complex64 {
        Complex64::new(self.rho, t)
    }

    pub fn vertex(&self) -> Complex64 {
        self.z(0.0)
    }

    /// Whether `z` lies strictly inside `D_rho`, the region containing the
    /// positive real axis.
    pub fn contains(&self, z: Complex64) -> bool {
        (-z).sqrt().re < self.rho
    }
}

/// Supremal `rho` such that `f` is analytic inside `P_rho`:
/// `min_k sqrt((|z_k| - Re z_k) / 2)`.
pub fn rho_from_singularities(singularities: &[Complex64]) -> Result<f64> {
    if singularities.is_empty() {
        return Err(Error::Domain("no singularities given".into()));
    }
    let mut rho = f64::INFINITY;
    for z in singularities {
        if z.im == 0.0 && z.re >= 0.0 {
            return Err(Error::Domain(format!("singularity {z} lies on the positive real axis")));
        }
        rho = rho.min(((z.norm() - z.re) / 2.0).sqrt());
    }
    Ok(rho)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum GrowthClass {
    /// `|f(z)| <= K |z|^beta`.
    Algebraic,
    /// `|f(z)| <= K |z|^beta e^{-Re z / 2}`.
    AlgebraicTimesExpHalf,
    EntireExponential,
    EntireGaussian,
}

impl GrowthClass {
    pub fn is_entire(self) -> bool {
        matches!(self, GrowthClass::EntireExponential | GrowthClass::EntireGaussian)
    }

    pub fn as_str(self) -> &'static str {
        match self {
            GrowthClass::Algebraic => "algebraic",
            GrowthClass::AlgebraicTimesExpHalf => "algebraic_times_exp_half",
            GrowthClass::EntireExponential => "entire_exponential",
            GrowthClass::EntireGaussian => "entire_gaussian",
        }
    }
}

/// A test function with the analytic data needed to predict its rates.
#[derive(Clone)]
pub struct FunctionSpec {
    pub name: String,
    pub description: String,
    pub f: RealFn,
    pub f_complex: Option<ComplexFn>,
    pub singularities: Vec<Complex64>,
    pub beta: f64,
    pub growth_class: GrowthClass,
    /// Recorded parabola parameter; `None` for entire functions.
    pub rho: Option<f64>,
    pub alpha_defaults: Vec<f64>,
}

impl fmt::Debug for FunctionSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FunctionSpec")
            .field("name", &self.name)
            .field("singularities", &self.singularities)
            .field("beta", &self.beta)
            .field("growth_class", &self.growth_class)
            .field("rho", &self.rho)
            .finish()
    }
}

impl FunctionSpec {
    pub fn eval(&self, x: f64) -> f64 {
        (self.f)(x)
    }

    pub fn eval_complex(&self, z: Complex64) -> Result<Complex64> {
        match &self.f_complex {
            Some(f) => Ok(f(z)),
            None => Err(Error::Domain(format!("`{}` has no complex extension", self.name))),
        }
    }

    /// Smallest degree for which the contour formula holds:
    /// `max(floor(beta - 1/2) + 1, 0)`.
    pub fn min_contour_degree(&self) -> usize {
        ((self.beta - 0.5).floor() + 1.0).max(0.0) as usize
    }
}

/// `Phi_n^(alpha)(z) = (1/2 pi i) sum_j w_j L_n(x_j) / (z - x_j)` over a
/// Gauss-Laguerre rule.
#[derive(Debug, Clone)]
pub struct PhiOracle {
    alpha: f64,
    n: usize,
    nodes: Vec<f64>,
    /// `w_j L_n(x_j)`
    c: Vec<f64>,
}

/// Minimum distance from `R_+` accepted by the oracle.
pub const PHI_MIN_DISTANCE: f64 = 1e-8;

impl PhiOracle {
    pub fn new(alpha: f64, n: usize, quad_points: Option<usize>) -> Result<Self> {
        let m = quad_points.unwrap_or(8 * (n + 32));
        if m < n + 1 {
            return Err(Error::InvalidParameter(format!("quad_points = {m} is below n + 1")));
        }
        let rule = gauss_laguerre(alpha, m)?;
        let nodes = rule.nodes().to_vec();
        let c = nodes
            .iter()
            .zip(rule.scaled_weights())
            .map(|(&x, &fused)| (fused.ln() - 0.5 * x).exp() * glf_raw(alpha, n, x))
            .collect();
        Ok(Self { alpha, n, nodes, c })
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn degree(&self) -> usize {
        self.n
    }

    pub fn eval(&self, z: Complex64) -> Result<Complex64> {
        let dist = if z.re <= 0.0 { z.norm() } else { z.im.abs() };
        if !(dist >= PHI_MIN_DISTANCE) {
            return Err(Error::Domain(format!("z = {z} is on or too close to the positive real axis")));
        }
        let mut sum = Complex64::new(0.0, 0.0);
        for (&x, &c) in self.nodes.iter().zip(&self.c) {
            sum += c / (z - x);
        }
        Ok(sum / Complex64::new(0.0, 2.0 * PI))
    }
}

pub fn phi_oracle(alpha: f64, n: usize, z: Complex64, quad_points: Option<usize>) -> Result<Complex64> {
    PhiOracle::new(alpha, n, quad_points)?.eval(z)
}

/// Leading large-`n` behaviour
/// `i gamma_n e^{-2 sqrt(-(n+1) z)} e^{-z/2} (-z)^{alpha/2-1/4} / (2 sqrt(pi) (n+1)^{alpha/2+1/4})`,
/// from `Phi_n = (i/2pi) Gamma(n+alpha+1) U(n+1, 1-alpha, -z)` and the
/// large-`a` form of Kummer's `U`. Relative error is `O(n^{-1/2})`.
pub fn phi_asymptotic(alpha: f64, n: usize, z: Complex64) -> Result<Complex64> {
    check_alpha(alpha)?;
    let np1 = (n + 1) as f64;
    let p = alpha / 2.0 + 0.25;
    let w = (-z).sqrt();
    let ln = crate::basis::ln_gamma_norm(alpha, n)? - (2.0 * PI.sqrt()).ln() - p * np1.ln();
    let expo = -2.0 * np1.sqrt() * w - 0.5 * z + (p - 0.5) * (-z).ln() + ln;
    Ok(Complex64::new(0.0, 1.0) * expo.exp())
}

/// Degree at and below which the contour integrand uses the quadrature
/// oracle; above it the asymptotic form is used.
pub const PHI_ORACLE_MAX_DEGREE: usize = 30;

#[derive(Debug, Clone, PartialEq)]
pub struct ContourEstimate {
    pub value: f64,
    /// Imaginary part of the computed integral, zero in exact arithmetic.
    pub imag_residual: f64,
    pub t_limit_used: f64,
    /// Size of the last tail panel, or of the integrand bound at the
    /// cut-off when the window was fixed.
    pub tail_estimate: f64,
    pub warning: Option<String>,
}

const PANEL_POINTS: usize = 16;
const TAIL_REL_TOL: f64 = 1e-14;
const TAIL_T_MAX: f64 = 1e30;

struct HalfLine {
    value: Complex64,
    t_used: f64,
    tail: f64,
    warning: Option<String>,
}

/// `int_{-inf}^{inf} g(t) dt` as `int_0^T (g(t) + g(-t)) dt` on `panels`
/// Gauss-Legendre panels, followed (when `t_limit` is `None`) by doubling
/// panels `[T, 2T]` until a panel adds less than `1e-14` of the total.
fn integrate_symmetric<G>(g: G, t_limit: Option<f64>, default_limit: f64, panels: usize) -> Result<HalfLine>
where
    G: Fn(f64) -> Result<Complex64>,
{
    let (gx, gw) = gauss_legendre(PANEL_POINTS);
    let panel = |a: f64, b: f64| -> Result<Complex64> {
        let half = 0.5 * (b - a);
        let mid = 0.5 * (a + b);
        let mut s = Complex64::new(0.0, 0.0);
        for (x, w) in gx.iter().zip(&gw) {
            let t = mid + half * x;
            s += *w * (g(t)? + g(-t)?);
        }
        Ok(s * half)
    };
    let t0 = t_limit.unwrap_or(default_limit);
    if !(t0.is_finite() && t0 > 0.0) {
        return Err(Error::InvalidParameter(format!("t_limit must be finite and > 0, got {t0}")));
    }
    let panels = panels.max(1);
    let h = t0 / panels as f64;
    let mut value = Complex64::new(0.0, 0.0);
    for i in 0..panels {
        value += panel(i as f64 * h, (i + 1) as f64 * h)?;
    }
    if t_limit.is_some() {
        let edge = (g(t0)? + g(-t0)?).norm();
        return Ok(HalfLine { value, t_used: t0, tail: edge, warning: None });
    }
    let mut t = t0;
    let mut last;
    let mut warning = None;
    loop {
        let mut contrib = Complex64::new(0.0, 0.0);
        for i in 0..4 {
            let a = t * (1.0 + i as f64 / 4.0);
            contrib += panel(a, a + 0.25 * t)?;
        }
        value += contrib;
        t *= 2.0;
        last = contrib.norm();
        if last <= TAIL_REL_TOL * value.norm() {
            break;
        }
        if t >= TAIL_T_MAX {
            warning = Some(format!(
                "tail not resolved by t = {t:e}: last panel {last:e} vs integral {:e}",
                value.norm()
            ));
            break;
        }
    }
    Ok(HalfLine { value, t_used: t, tail: last, warning })
}

fn check_rho(fspec: &FunctionSpec, rho: f64) -> Result<Parabola> {
    let parabola = Parabola::new(rho)?;
    if !fspec.singularities.is_empty() {
        let sup = rho_from_singularities(&fspec.singularities)?;
        if rho >= sup {
            return Err(Error::Domain(format!(
                "rho = {rho} is not below the supremal rho = {sup} of `{}`",
                fspec.name
            )));
        }
    }
    Ok(parabola)
}

/// `a_k = (1/gamma_k) int_{P_rho} Phi_k(z) f(z) dz`, integrated along the
/// parametrization in the direction of increasing `t`.
///
/// With `t_limit = None` the window `[-rho-10, rho+10]` is split into
/// `t_points` panels and the tails are added by doubling until they no
/// longer contribute.
pub fn contour_coefficient(
    fspec: &FunctionSpec,
    alpha: f64,
    k: usize,
    rho: f64,
    t_limit: Option<f64>,
    t_points: usize,
) -> Result<ContourEstimate> {
    check_alpha(alpha)?;
    let parabola = check_rho(fspec, rho)?;
    if k < fspec.min_contour_degree() {
        return Err(Error::Domain(format!(
            "degree {k} is below {} required for beta = {}",
            fspec.min_contour_degree(),
            fspec.beta
        )));
    }
    fspec.eval_complex(Complex64::new(0.0, 0.0))?;
    let oracle = if k <= PHI_ORACLE_MAX_DEGREE { Some(PhiOracle::new(alpha, k, None)?) } else { None };
    let phi = |z: Complex64| -> Result<Complex64> {
        match &oracle {
            Some(o) => o.eval(z),
            None => phi_asymptotic(alpha, k, z),
        }
    };
    let g = |t: f64| -> Result<Complex64> {
        let z = parabola.z(t);
        Ok(phi(z)? * fspec.eval_complex(z)? * parabola.dz(t))
    };
    let res = integrate_symmetric(g, t_limit, rho + 10.0, t_points)?;
    let gamma = gamma_norm(alpha, k)?;
    let value = res.value / gamma;
    if !value.re.is_finite() {
        return Err(Error::NonFinite(format!("contour integral for k = {k}")));
    }
    Ok(ContourEstimate {
        value: value.re,
        imag_residual: value.im,
        t_limit_used: res.t_used,
        tail_estimate: res.tail / gamma,
        warning: res.warning,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum VVariant {
    /// `int |(-z)^{alpha/2+1/4} e^{-z/2} f(z)| ds`
    V,
    /// `int |(-z)^{alpha/2+1/4} f(z)| ds`
    VHat,
}

/// Arc-length prefactor constants along `P_rho`. A divergent integral is
/// reported as a domain error.
pub fn v_alpha_constant(
    fspec: &FunctionSpec,
    alpha: f64,
    rho: f64,
    variant: VVariant,
    t_limit: Option<f64>,
    t_points: usize,
) -> Result<f64> {
    check_alpha(alpha)?;
    let parabola = check_rho(fspec, rho)?;
    let p = alpha / 2.0 + 0.75;
    let g = |t: f64| -> Result<Complex64> {
        let r2 = t * t + rho * rho;
        let z = parabola.z(t);
        let mut v = 2.0 * r2.powf(p) * fspec.eval_complex(z)?.norm();
        if variant == VVariant::V {
            v *= (-0.5 * z.re).exp();
        }
        Ok(Complex64::new(v, 0.0))
    };
    let res = integrate_symmetric(g, t_limit, rho + 10.0, t_points)?;
    if let Some(w) = res.warning {
        return Err(Error::Domain(format!("V constant diverges: {w}")));
    }
    if !res.value.re.is_finite() {
        return Err(Error::NonFinite("V constant".into()));
    }
    Ok(res.value.re)
}

/// `log e_n ~ intercept + log_power * ln n - sqrt_slope * sqrt(n)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RateFit {
    pub sqrt_slope: f64,
    pub log_power: f64,
    pub intercept: f64,
    /// RMS residual of `ln e` over the points used.
    pub residual: f64,
    pub n_range: (usize, usize),
    pub points: usize,
}

/// Default fitting floor: errors at or below it are treated as round-off.
pub const DEFAULT_FLOOR: f64 = 1e-13;

fn select_points(ns: &[usize], errors: &[f64], floor: f64) -> Result<Vec<(f64, f64)>> {
    if ns.len() != errors.len() {
        return Err(Error::Fit(format!("{} degrees but {} errors", ns.len(), errors.len())));
    }
    let pts: Vec<(f64, f64)> = ns
        .iter()
        .zip(errors)
        .filter(|(n, e)| **n > 0 && e.is_finite() && **e > floor)
        .map(|(&n, &e)| (n as f64, e.ln()))
        .collect();
    if pts.len() < 5 {
        return Err(Error::Fit(format!(
            "only {} points above floor {floor:e}; need at least 5",
            pts.len()
        )));
    }
    Ok(pts)
}

/// Least squares `min |A c - y|` by modified Gram-Schmidt QR.
fn least_squares(cols: &[Vec<f64>], y: &[f64]) -> Result<Vec<f64>> {
    let k = cols.len();
    let mut q: Vec<Vec<f64>> = cols.to_vec();
    let mut r = vec![vec![0.0; k]; k];
    for j in 0..k {
        for i in 0..j {
            let d: f64 = q[i].iter().zip(&q[j]).map(|(a, b)| a * b).sum();
            r[i][j] = d;
            let qi = q[i].clone();
            q[j].iter_mut().zip(&qi).for_each(|(v, u)| *v -= d * u);
        }
        let norm = q[j].iter().map(|v| v * v).sum::<f64>().sqrt();
        if norm <= 1e-12 * cols[j].iter().map(|v| v * v).sum::<f64>().sqrt() {
            return Err(Error::Fit("design matrix is rank deficient".into()));
        }
        r[j][j] = norm;
        q[j].iter_mut().for_each(|v| *v /= norm);
    }
    let qty: Vec<f64> = q.iter().map(|qj| qj.iter().zip(y).map(|(a, b)| a * b).sum()).collect();
    let mut c = vec![0.0; k];
    for j in (0..k).rev() {
        let s: f64 = (j + 1..k).map(|i| r[j][i] * c[i]).sum();
        c[j] = (qty[j] - s) / r[j][j];
    }
    Ok(c)
}

fn rms_residual(cols: &[Vec<f64>], y: &[f64], c: &[f64]) -> f64 {
    let m = y.len();
    let ss: f64 = (0..m)
        .map(|i| {
            let pred: f64 = cols.iter().zip(c).map(|(col, ci)| col[i] * ci).sum();
            (y[i] - pred).powi(2)
        })
        .sum();
    (ss / m as f64).sqrt()
}

fn n_range(pts: &[(f64, f64)]) -> (usize, usize) {
    let lo = pts.iter().map(|p| p.0).fold(f64::INFINITY, f64::min);
    let hi = pts.iter().map(|p| p.0).fold(0.0, f64::max);
    (lo as usize, hi as usize)
}

/// Fits `ln e = c + p ln n - s sqrt(n)` over the points with `e > floor`.
pub fn fit_rate(ns: &[usize], errors: &[f64], floor: f64) -> Result<RateFit> {
    let pts = select_points(ns, errors, floor)?;
    let y: Vec<f64> = pts.iter().map(|p| p.1).collect();
    let cols = vec![
        vec![1.0; pts.len()],
        pts.iter().map(|p| p.0.ln()).collect(),
        pts.iter().map(|p| -p.0.sqrt()).collect(),
    ];
    let c = least_squares(&cols, &y)?;
    Ok(RateFit {
        sqrt_slope: c[2],
        log_power: c[1],
        intercept: c[0],
        residual: rms_residual(&cols, &y, &c),
        n_range: n_range(&pts),
        points: pts.len(),
    })
}

/// As [`fit_rate`] with the algebraic power held at `log_power`.
pub fn fit_rate_fixed_power(ns: &[usize], errors: &[f64], floor: f64, log_power: f64) -> Result<RateFit> {
    let pts = select_points(ns, errors, floor)?;
    let y: Vec<f64> = pts.iter().map(|p| p.1 - log_power * p.0.ln()).collect();
    let cols = vec![vec![1.0; pts.len()], pts.iter().map(|p| -p.0.sqrt()).collect()];
    let c = least_squares(&cols, &y)?;
    Ok(RateFit {
        sqrt_slope: c[1],
        log_power,
        intercept: c[0],
        residual: rms_residual(&cols, &y, &c),
        n_range: n_range(&pts),
        points: pts.len(),
    })
}

/// Fit of `ln e = c + p ln n - kappa n^q` for a fixed exponent `q`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GeneralFit {
    pub q: f64,
    pub kappa: f64,
    pub log_power: f64,
    pub intercept: f64,
    pub residual: f64,
    pub n_range: (usize, usize),
    pub points: usize,
}

pub fn fit_general(ns: &[usize], errors: &[f64], floor: f64, q: f64) -> Result<GeneralFit> {
    let pts = select_points(ns, errors, floor)?;
    let y: Vec<f64> = pts.iter().map(|p| p.1).collect();
    let cols = vec![
        vec![1.0; pts.len()],
        pts.iter().map(|p| p.0.ln()).collect(),
        pts.iter().map(|p| -p.0.powf(q)).collect(),
    ];
    let c = least_squares(&cols, &y)?;
    Ok(GeneralFit {
        q,
        kappa: c[2],
        log_power: c[1],
        intercept: c[0],
        residual: rms_residual(&cols, &y, &c),
        n_range: n_range(&pts),
        points: pts.len(),
    })
}

/// Exponents tried by [`select_model`].
pub const MODEL_EXPONENTS: [f64; 3] = [0.5, 2.0 / 3.0, 1.0];

/// Fits each exponent in `qs` and returns the fit with the smallest residual.
pub fn select_model(ns: &[usize], errors: &[f64], floor: f64, qs: &[f64]) -> Result<GeneralFit> {
    let mut best: Option<GeneralFit> = None;
    for &q in qs {
        let fit = fit_general(ns, errors, floor, q)?;
        if best.is_none_or(|b| fit.residual < b.residual) {
            best = Some(fit);
        }
    }
    best.ok_or_else(|| Error::Fit("no model exponents given".into()))
}

/// The quantity whose decay is being predicted.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum RateMode {
    /// Polynomial-form coefficients `|a_n|`.
    Coeff,
    /// `||f - Pi_n f||` in the weighted norm.
    ProjWeighted,
    /// Function-form projection error in the maximum norm.
    ProjMax,
    /// Interpolation error at Laguerre points, weighted norm.
    Interp,
    /// Gauss-Laguerre quadrature error.
    Quad,
    /// Weeks inversion error for the pair whose inverse is the function.
    Weeks { sigma: f64, nu: f64 },
    /// `m`-th derivative of the projection, weighted norm.
    Diff { m: usize },
    /// Function-form projection with scaling factor `nu`, maximum norm.
    Scaled { nu: f64 },
}

impl RateMode {
    pub fn name(&self) -> &'static str {
        match self {
            RateMode::Coeff => "coeff",
            RateMode::ProjWeighted => "proj_weighted",
            RateMode::ProjMax => "proj_max",
            RateMode::Interp => "interp",
            RateMode::Quad => "quad",
            RateMode::Weeks { .. } => "weeks",
            RateMode::Diff { .. } => "diff",
            RateMode::Scaled { .. } => "scaled",
        }
    }
}

/// `(sqrt_slope, log_power)` predicted for `fspec` in the given mode.
pub fn predicted_rate(fspec: &FunctionSpec, alpha: f64, mode: RateMode) -> Result<(f64, f64)> {
    check_alpha(alpha)?;
    if fspec.growth_class.is_entire() || fspec.singularities.is_empty() {
        return Err(Error::NoPrediction(format!(
            "`{}` is entire; its decay is faster than any root-exponential rate",
            fspec.name
        )));
    }
    let rho = rho_from_singularities(&fspec.singularities)?;
    let s = 2.0 * rho;
    Ok(match mode {
        RateMode::Coeff => (s, -alpha / 2.0 - 0.25),
        RateMode::ProjWeighted => (s, 0.0),
        RateMode::ProjMax => (s, alpha.abs() / 2.0 + 0.25),
        RateMode::Interp => (s, 0.25),
        RateMode::Quad => (2.0 * s, 0.0),
        RateMode::Weeks { nu, .. } => (s * nu.sqrt(), 0.25),
        RateMode::Diff { m } => (s, m as f64 / 2.0),
        RateMode::Scaled { nu } => (s * nu.sqrt(), alpha.abs() / 2.0 + 0.25),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn spec(name: &str, f: fn(Complex64) -> Complex64, sing: Vec<Complex64>, beta: f64) -> FunctionSpec {
        FunctionSpec {
            name: name.into(),
            description: String::new(),
            f: Arc::new(move |x| f(c(x, 0.0)).re),
            f_complex: Some(Arc::new(f)),
            singularities: sing,
            beta,
            growth_class: GrowthClass::Algebraic,
            rho: None,
            alpha_defaults: vec![0.0],
        }
    }

    #[test]
    fn parabola_geometry() {
        let p = Parabola::new(1.3).unwrap();
        assert!((p.vertex() - c(-1.69, 0.0)).norm() < 1e-15);
        for &t in &[-3.0, -0.4, 0.0, 0.7, 5.0] {
            let z = p.z(t);
            // focus at the origin: |z| = Re z + 2 rho^2
            assert_relative_eq!(z.norm(), z.re + 2.0 * 1.69, max_relative = 1e-14);
            assert_relative_eq!((-z).sqrt().re, 1.3, max_relative = 1e-14);
            let s = p.sqrt_neg_z(t);
            assert!((s * s + z).norm() < 1e-12 * (1.0 + z.norm()));
        }
        assert!(p.contains(c(5.0, 0.0)));
        assert!(!p.contains(c(-2.0, 0.0)));
        assert!(Parabola::new(0.0).is_err());
    }

    #[test]
    fn rho_examples() {
        assert_relative_eq!(rho_from_singularities(&[c(-1.0, 0.0)]).unwrap(), 1.0);
        assert_relative_eq!(rho_from_singularities(&[c(-2.25, 0.0)]).unwrap(), 1.5);
        let f3: Vec<Complex64> = (0..5)
            .flat_map(|k| {
                let y = 8.0 * (2 * k + 1) as f64;
                [c(0.0, y), c(0.0, -y)]
            })
            .collect();
        assert_relative_eq!(rho_from_singularities(&f3).unwrap(), 2.0, max_relative = 1e-15);
        assert!(rho_from_singularities(&[c(2.0, 0.0)]).is_err());
        assert!(rho_from_singularities(&[]).is_err());
    }

    #[test]
    fn phi_at_minus_one() {
        // (1/2 pi i) int e^{-x} / (-1 - x) dx = i e E1(1) / (2 pi)
        let v = phi_oracle(0.0, 0, c(-1.0, 0.0), None).unwrap();
        assert!(v.re.abs() < 1e-15);
        assert_relative_eq!(v.im, 0.094_911_630_513_549_84, max_relative = 1e-12);
        assert!(phi_oracle(0.0, 3, c(2.0, 1e-9), None).is_err());
    }

    #[test]
    fn phi_decays_like_inverse_power() {
        for n in [0usize, 2, 4] {
            let o = PhiOracle::new(0.5, n, None).unwrap();
            let a = o.eval(c(-1e3, 0.0)).unwrap().norm() * 1e3f64.powi(n as i32 + 1);
            let b = o.eval(c(-1e4, 0.0)).unwrap().norm() * 1e4f64.powi(n as i32 + 1);
            assert!(a.is_finite() && b.is_finite());
            assert!(b < 2.0 * a && a < 2.0 * b, "n={n}: {a} vs {b}");
        }
    }

    #[test]
    fn phi_asymptotic_agrees_at_moderate_degree() {
        // the O(n^{-1/2}) correction is larger for negative alpha
        for &(alpha, n) in &[(0.0, 50), (1.5, 50), (-0.5, 150)] {
            for &z in &[c(-1.0, 0.0), c(-0.5, -1.2), c(0.3, 0.8)] {
                let exact = phi_oracle(alpha, n, z, None).unwrap();
                let asym = phi_asymptotic(alpha, n, z).unwrap();
                let r = exact / asym;
                assert!((r.norm() - 1.0).abs() < 0.1, "alpha={alpha} z={z}: {exact} vs {asym}");
                assert!(r.arg().abs() < 0.15, "alpha={alpha} z={z}: {exact} vs {asym}");
            }
        }
    }

    #[test]
    fn phi_decay_exponent_at_minus_one() {
        // log|Phi_n(-1)| against sqrt(n+1): slope -2 once the algebraic and
        // gamma_n factors are removed
        let ns: Vec<usize> = (10..=60).step_by(5).collect();
        let ys: Vec<f64> = ns
            .iter()
            .map(|&n| {
                let v = phi_oracle(0.5, n, c(-1.0, 0.0), None).unwrap().norm();
                v.ln() - crate::basis::ln_gamma_norm(0.5, n).unwrap() + 0.5 * ((n + 1) as f64).ln()
            })
            .collect();
        let xs: Vec<f64> = ns.iter().map(|&n| ((n + 1) as f64).sqrt()).collect();
        let m = xs.len() as f64;
        let (mx, my) = (xs.iter().sum::<f64>() / m, ys.iter().sum::<f64>() / m);
        let slope = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum::<f64>()
            / xs.iter().map(|x| (x - mx).powi(2)).sum::<f64>();
        assert!((slope + 2.0).abs() < 0.1, "slope {slope}");
    }

    #[test]
    fn contour_constant_function() {
        let one = spec("one", |_| c(1.0, 0.0), vec![], 0.0);
        let est = contour_coefficient(&one, 0.0, 0, 0.8, None, 100).unwrap();
        assert!((est.value - 1.0).abs() < 1e-10, "{est:?}");
        assert!(est.imag_residual.abs() < 1e-10);
    }

    #[test]
    fn contour_matches_projection_for_reciprocal() {
        let f1 = spec("f1", |z| 1.0 / (1.0 + z), vec![c(-1.0, 0.0)], -1.0);
        let p = crate::basis::BasisParams::polynomial(0.0).unwrap();
        let e = crate::projection::project(|x| 1.0 / (1.0 + x), 6, &p, 1.0, None).unwrap();
        for k in [0usize, 3, 6] {
            let a = contour_coefficient(&f1, 0.0, k, 0.9, None, 200).unwrap();
            let b = contour_coefficient(&f1, 0.0, k, 0.5, None, 200).unwrap();
            assert!((a.value - e.coeffs()[k]).abs() < 1e-8, "k={k}: {} vs {}", a.value, e.coeffs()[k]);
            assert!((a.value - b.value).abs() < 1e-9);
        }
        assert!(contour_coefficient(&f1, 0.0, 2, 1.0, None, 50).is_err());
    }

    #[test]
    fn v_constant_window() {
        // f = 1 on a fixed window reduces to 2 int (t^2+rho^2)^{alpha/2+3/4} e^{-(t^2-rho^2)/2} dt
        let one = spec("one", |_| c(1.0, 0.0), vec![], 0.0);
        let (rho, alpha, tl) = (0.7, 0.5, 3.0);
        let v = v_alpha_constant(&one, alpha, rho, VVariant::V, Some(tl), 200).unwrap();
        let (x, w) = gauss_legendre(64);
        let reference: f64 = x
            .iter()
            .zip(&w)
            .map(|(x, w)| {
                let t = tl * x;
                w * tl * 2.0 * (t * t + rho * rho).powf(alpha / 2.0 + 0.75) * (-(t * t - rho * rho) / 2.0).exp()
            })
            .sum();
        assert_relative_eq!(v, reference, max_relative = 1e-12);
        // V_hat of a slowly decaying function diverges
        let f1 = spec("f1", |z| 1.0 / (1.0 + z), vec![c(-1.0, 0.0)], -1.0);
        assert!(v_alpha_constant(&f1, 0.0, 0.9, VVariant::VHat, None, 50).is_err());
    }

    #[test]
    fn v_hat_of_scaled_reciprocal_converges() {
        let g = spec("glf1", |z| (-0.5 * z).exp() / (1.0 + z), vec![c(-1.0, 0.0)], -1.0);
        let vals: Vec<f64> = [2.0, 4.0, 8.0, 16.0]
            .iter()
            .map(|&tl| v_alpha_constant(&g, 0.0, 0.9, VVariant::VHat, Some(tl), 200).unwrap())
            .collect();
        assert!(vals[0] > 0.0);
        assert!(vals.windows(2).all(|w| w[1] >= w[0] * (1.0 - 1e-14)), "{vals:?}");
        assert_relative_eq!(vals[2], vals[3], max_relative = 1e-10);
        let auto = v_alpha_constant(&g, 0.0, 0.9, VVariant::VHat, None, 200).unwrap();
        assert_relative_eq!(auto, vals[3], max_relative = 1e-10);
    }

    #[test]
    fn fit_recovers_exact_model() {
        let ns: Vec<usize> = (10..200).step_by(5).collect();
        let e: Vec<f64> = ns.iter().map(|&n| (n as f64).powf(0.25) * (-2.0 * (n as f64).sqrt()).exp()).collect();
        let fit = fit_rate(&ns, &e, 1e-300).unwrap();
        assert!((fit.sqrt_slope - 2.0).abs() < 1e-6);
        assert!((fit.log_power - 0.25).abs() < 1e-6);
        assert!(fit.residual < 1e-10);
        let fixed = fit_rate_fixed_power(&ns, &e, 1e-300, 0.25).unwrap();
        assert!((fixed.sqrt_slope - 2.0).abs() < 1e-10);
    }

    #[test]
    fn fit_tolerates_multiplicative_noise() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand::rngs::StdRng::seed_from_u64(7);
        let ns: Vec<usize> = (10..=400).collect();
        let e: Vec<f64> = ns
            .iter()
            .map(|&n| (-4.0 * (n as f64).sqrt()).exp() * (1.0 + 0.01 * rng.gen_range(-1.0..1.0)))
            .collect();
        let fit = fit_rate(&ns, &e, 1e-300).unwrap();
        assert!((3.9..=4.1).contains(&fit.sqrt_slope), "{fit:?}");
    }

    #[test]
    fn fit_rejects_floor_limited_data() {
        let ns: Vec<usize> = (1..20).collect();
        let e = vec![1e-16; ns.len()];
        assert!(matches!(fit_rate(&ns, &e, 1e-13), Err(Error::Fit(_))));
    }

    #[test]
    fn model_selection_picks_generating_exponent() {
        let ns: Vec<usize> = (4..120).collect();
        for &q in &MODEL_EXPONENTS {
            let e: Vec<f64> = ns.iter().map(|&n| (-0.6 * (n as f64).powf(q)).exp()).collect();
            let fit = select_model(&ns, &e, 1e-300, &MODEL_EXPONENTS).unwrap();
            assert_eq!(fit.q, q);
            assert!((fit.kappa - 0.6).abs() < 1e-8);
        }
    }

    #[test]
    fn predicted_rates() {
        let f1 = spec("f1", |z| 1.0 / (1.0 + z), vec![c(-1.0, 0.0)], -1.0);
        assert_eq!(predicted_rate(&f1, 0.0, RateMode::Coeff).unwrap(), (2.0, -0.25));
        let (s, p) = predicted_rate(&f1, 0.0, RateMode::Weeks { sigma: 1.0, nu: 2.0 }).unwrap();
        assert_relative_eq!(s, 2.0 * 2f64.sqrt(), max_relative = 1e-15);
        assert_eq!(p, 0.25);
        let g = spec("glf2", |z| (-2.0 * z / 3.0).exp() / (z * z + 4.0), vec![c(0.0, 2.0), c(0.0, -2.0)], -2.0);
        assert_eq!(predicted_rate(&g, 0.0, RateMode::ProjMax).unwrap(), (2.0, 0.25));
        let mut entire = spec("exp", |z| (-z).exp(), vec![], 0.0);
        entire.growth_class = GrowthClass::EntireExponential;
        assert!(matches!(predicted_rate(&entire, 0.0, RateMode::Coeff), Err(Error::NoPrediction(_))));
    }
}
