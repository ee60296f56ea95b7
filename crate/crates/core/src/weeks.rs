//! Weeks method for numerical inversion of the Laplace transform.
//!
//! The inverse is expanded as
//! `f(t) = e^{sigma t} sum_k c_k e^{-nu t/2} L_k(nu t)`. Writing
//! `s = sigma + i (nu/2) cot(theta/2)`, the coefficients satisfy
//! `sum_k c_k e^{i k theta} = (nu/2)(1 + i cot(theta/2)) F(s)`, so `c_k` are
//! the cosine coefficients of the real part, sampled on the midpoint grid
//! `theta_j = (j + 1/2) pi / (n + 1)`.

use std::f64::consts::PI;
use std::fmt;

use num_complex::Complex64;
use rayon::prelude::*;
use rustfft::FftPlanner;

use crate::basis::Form;
use crate::error::{Error, Result};
use crate::projection::{eval_expansion_parts, Expansion};

pub use crate::verify::{ComplexFn as Transform, RealFn};

/// A Laplace transform pair with the analytic data the error theory needs.
#[derive(Clone)]
pub struct LaplacePair {
    pub name: String,
    pub description: String,
    /// `F(s)`.
    pub transform: Transform,
    /// `f(t)` when known in closed form.
    pub exact: Option<RealFn>,
    /// Real part of the right-most singularity of `F`.
    pub sigma0: f64,
    /// Singularities of `f` in the complex `t` plane.
    pub singularities: Vec<Complex64>,
    /// `lambda` with `f(t) = O(e^{lambda t})` as `t -> inf`.
    pub growth_rate: f64,
    pub default_sigma: f64,
    pub default_nu: f64,
}

impl fmt::Debug for LaplacePair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("LaplacePair")
            .field("name", &self.name)
            .field("sigma0", &self.sigma0)
            .field("singularities", &self.singularities)
            .field("growth_rate", &self.growth_rate)
            .field("has_exact", &self.exact.is_some())
            .finish()
    }
}

impl LaplacePair {
    pub fn eval_transform(&self, s: Complex64) -> Complex64 {
        (self.transform)(s)
    }

    pub fn eval_exact(&self, t: f64) -> Option<f64> {
        self.exact.as_ref().map(|f| f(t))
    }

    /// Parabola parameter of `f` in the `t` plane, if `f` has singularities.
    pub fn rho_t(&self) -> Option<f64> {
        if self.singularities.is_empty() {
            return None;
        }
        crate::verify::rho_from_singularities(&self.singularities).ok()
    }

    /// Parabola parameter of `x -> e^{x/2} e^{-sigma x/nu} f(x/nu)`, the
    /// function whose Laguerre coefficients the method computes. `None` when
    /// `f` is entire or when that function grows exponentially.
    pub fn rho(&self, sigma: f64, nu: f64) -> Option<f64> {
        if sigma - self.growth_rate < 0.5 * nu {
            return None;
        }
        self.rho_t().map(|r| r * nu.sqrt())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WeeksParams {
    pub sigma: f64,
    pub nu: f64,
    pub n: usize,
}

impl WeeksParams {
    pub fn new(sigma: f64, nu: f64, n: usize) -> Result<Self> {
        if !sigma.is_finite() {
            return Err(Error::InvalidParameter(format!("sigma must be finite, got {sigma}")));
        }
        if !(nu.is_finite() && nu > 0.0) {
            return Err(Error::InvalidParameter(format!("nu must be finite and > 0, got {nu}")));
        }
        Ok(Self { sigma, nu, n })
    }

    fn validate_for(&self, pair: &LaplacePair) -> Result<()> {
        if !(self.sigma > pair.sigma0) {
            return Err(Error::InvalidParameter(format!(
                "sigma = {} must exceed sigma0 = {} for pair `{}`",
                self.sigma, pair.sigma0, pair.name
            )));
        }
        Ok(())
    }
}

/// `theta_j = (j + 1/2) pi / (n + 1)`.
pub fn theta_grid(n: usize) -> Vec<f64> {
    let m = (n + 1) as f64;
    (0..=n).map(|j| (j as f64 + 0.5) * PI / m).collect()
}

/// `phi(theta_j) = Re[(nu/2)(1 + i cot(theta_j/2)) F(sigma + i (nu/2) cot(theta_j/2))]`.
pub fn sample_phi(pair: &LaplacePair, params: &WeeksParams) -> Result<Vec<f64>> {
    params.validate_for(pair)?;
    let thetas = theta_grid(params.n);
    let half_nu = 0.5 * params.nu;
    let samples: Vec<f64> = thetas
        .par_iter()
        .map(|&theta| {
            let cot = 1.0 / (0.5 * theta).tan();
            let s = Complex64::new(params.sigma, half_nu * cot);
            let factor = Complex64::new(half_nu, half_nu * cot);
            (factor * pair.eval_transform(s)).re
        })
        .collect();
    if let Some(j) = samples.iter().position(|v| !v.is_finite()) {
        return Err(Error::NonFinite(format!(
            "transform sample at theta_{j} = {} is {}",
            thetas[j], samples[j]
        )));
    }
    Ok(samples)
}

/// Midpoint cosine transform by direct summation:
/// `c_k = (2 tau_k / (n+1)) sum_j phi_j cos(k theta_j)`, `tau_0 = 1/2`.
pub fn cosine_coefficients(phi: &[f64]) -> Vec<f64> {
    let m = phi.len();
    let period = 4 * m;
    let scale = PI / (2 * m) as f64;
    let cos_table: Vec<f64> = (0..period).map(|r| (r as f64 * scale).cos()).collect();
    (0..m)
        .map(|k| {
            let mut sum = 0.0;
            for (j, v) in phi.iter().enumerate() {
                // cos(k theta_j) = cos(pi k (2j+1) / (2m)), reduced exactly
                let r = (k * (2 * j + 1)) % period;
                sum += v * cos_table[r];
            }
            let tau = if k == 0 { 0.5 } else { 1.0 };
            2.0 * tau * sum / m as f64
        })
        .collect()
}

/// Same transform through an FFT of the even extension (DCT-II).
pub fn cosine_coefficients_fast(phi: &[f64]) -> Vec<f64> {
    let m = phi.len();
    let mut buf: Vec<Complex64> = phi
        .iter()
        .chain(phi.iter().rev())
        .map(|&v| Complex64::new(v, 0.0))
        .collect();
    let mut planner = FftPlanner::new();
    planner.plan_fft_forward(2 * m).process(&mut buf);
    (0..m)
        .map(|k| {
            let twiddle = Complex64::from_polar(1.0, -PI * k as f64 / (2 * m) as f64);
            let x = 0.5 * (twiddle * buf[k]).re;
            let tau = if k == 0 { 0.5 } else { 1.0 };
            2.0 * tau * x / m as f64
        })
        .collect()
}

/// Weeks coefficients `c_0 ..= c_n` by direct summation.
pub fn weeks_coefficients(pair: &LaplacePair, params: &WeeksParams) -> Result<Vec<f64>> {
    Ok(cosine_coefficients(&sample_phi(pair, params)?))
}

/// Weeks coefficients through the FFT path.
pub fn weeks_coefficients_fast(pair: &LaplacePair, params: &WeeksParams) -> Result<Vec<f64>> {
    Ok(cosine_coefficients_fast(&sample_phi(pair, params)?))
}

/// `f_n(t) = e^{sigma t} sum_k c_k e^{-nu t/2} L_k(nu t)` for fixed coefficients.
#[derive(Debug, Clone)]
pub struct WeeksApproximant {
    sigma: f64,
    expansion: Expansion,
}

impl WeeksApproximant {
    pub fn new(pair: &LaplacePair, params: &WeeksParams) -> Result<Self> {
        let coeffs = weeks_coefficients(pair, params)?;
        Self::from_coefficients(params.sigma, params.nu, coeffs)
    }

    pub fn from_coefficients(sigma: f64, nu: f64, coeffs: Vec<f64>) -> Result<Self> {
        Ok(Self { sigma, expansion: Expansion::new(0.0, Form::Function, nu, coeffs)? })
    }

    pub fn coefficients(&self) -> &[f64] {
        self.expansion.coeffs()
    }

    pub fn eval(&self, t: f64) -> Result<f64> {
        if !(t.is_finite() && t >= 0.0) {
            return Err(Error::Domain(format!("t must be finite and >= 0, got {t}")));
        }
        let (m, ln_scale) = eval_expansion_parts(&self.expansion, t);
        if m == 0.0 {
            return Ok(0.0);
        }
        let v = m * (ln_scale + self.sigma * t).exp();
        if v.is_finite() {
            Ok(v)
        } else {
            Err(Error::NonFinite(format!(
                "e^(sigma t) overflows at t = {t} with sigma = {}",
                self.sigma
            )))
        }
    }
}

/// Evaluates the degree-`n` Weeks approximation at `t`.
pub fn weeks_invert(pair: &LaplacePair, params: &WeeksParams, t: f64) -> Result<f64> {
    WeeksApproximant::new(pair, params)?.eval(t)
}

/// `max_{k <= n} |c_k(n) - c_k(oversample * n)|`, an estimate of the aliasing
/// error in the degree-`n` coefficients.
pub fn weeks_aliasing_check(pair: &LaplacePair, params: &WeeksParams, oversample: usize) -> Result<f64> {
    if oversample < 2 {
        return Err(Error::InvalidParameter(format!("oversample must be >= 2, got {oversample}")));
    }
    let coarse = weeks_coefficients_fast(pair, params)?;
    let fine_params = WeeksParams { n: oversample * (params.n + 1) - 1, ..*params };
    let fine = weeks_coefficients_fast(pair, &fine_params)?;
    Ok(coarse
        .iter()
        .zip(&fine)
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max))
}
