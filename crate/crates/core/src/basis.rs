//! Generalized Laguerre polynomials `L_k^(alpha)` and functions
//! `exp(-x/2) L_k^(alpha)(x)`.
//!
//! Everything is built on the forward three-term recurrence
//!
//! ```text
//! (k+1) L_{k+1} = (2k + alpha + 1 - x) L_k - (k + alpha) L_{k-1}
//! ```
//!
//! with `L_0 = 1`, `L_1 = alpha + 1 - x`. The function form runs the same
//! recurrence on values carrying a separate exponent so that neither
//! `exp(-x/2)` nor the polynomial growth leaves the double range.

use crate::error::{check_alpha, Error, Result};
use crate::special::ln_gamma;

/// Polynomial (`L_k`) or function (`exp(-x/2) L_k`) form of the basis.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Form {
    Polynomial,
    Function,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BasisParams {
    alpha: f64,
    form: Form,
}

impl BasisParams {
    pub fn new(alpha: f64, form: Form) -> Result<Self> {
        check_alpha(alpha)?;
        Ok(Self { alpha, form })
    }

    pub fn polynomial(alpha: f64) -> Result<Self> {
        Self::new(alpha, Form::Polynomial)
    }

    pub fn function(alpha: f64) -> Result<Self> {
        Self::new(alpha, Form::Function)
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn form(&self) -> Form {
        self.form
    }

    /// Weight `x^alpha e^{-x}` (polynomial form) or `x^alpha` (function form).
    pub fn weight(&self, x: f64) -> f64 {
        match self.form {
            Form::Polynomial => x.powf(self.alpha) * (-x).exp(),
            Form::Function => x.powf(self.alpha),
        }
    }
}

/// A checked abscissa on the half-line.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct EvalPoint(f64);

impl EvalPoint {
    pub fn new(x: f64) -> Result<Self> {
        if x.is_finite() && x >= 0.0 {
            Ok(Self(x))
        } else {
            Err(Error::Domain(format!("evaluation point must be finite and >= 0, got {x}")))
        }
    }

    pub fn value(self) -> f64 {
        self.0
    }
}

const RESCALE_LIMIT: f64 = 1.8446744073709552e19; // 2^64
const RESCALE_FACTOR: f64 = 5.421010862427522e-20; // 2^-64
const RESCALE_EXP: i32 = 64;

/// One step of the three-term recurrence in difference form.
///
/// With `d_k = L_k - L_{k-1}` the recurrence reads
/// `d_{k+1} = ((k + alpha) d_k - x L_k) / (k + 1)`, `L_{k+1} = L_k + d_{k+1}`.
/// Unlike `(2k + alpha + 1 - x) L_k`, this never adds `x` to a large number,
/// so small arguments keep their full relative precision.
#[inline]
fn step(alpha: f64, x: f64, k: usize, cur: f64, diff: f64) -> (f64, f64) {
    let k = k as f64;
    let d = ((k + alpha) * diff - x * cur) / (k + 1.0);
    (cur + d, d)
}

/// Forward recurrence whose iterates are `mantissa * 2^exp2 * exp(base)`.
///
/// Rescaling by powers of two is exact, so the mantissas see the same
/// rounding as the plain recurrence.
#[derive(Debug, Clone)]
pub(crate) struct ScaledRecurrence {
    alpha: f64,
    x: f64,
    k: usize,
    cur: f64,
    diff: f64,
    exp2: i32,
    base: f64,
}

impl ScaledRecurrence {
    /// Starts at degree 0 with value `exp(base)`.
    pub(crate) fn new(alpha: f64, x: f64, base: f64) -> Self {
        Self { alpha, x, k: 0, cur: 1.0, diff: 1.0, exp2: 0, base }
    }

    /// Natural log of the common scale factor of the mantissas.
    pub(crate) fn log_scale(&self) -> f64 {
        self.exp2 as f64 * std::f64::consts::LN_2 + self.base
    }

    pub(crate) fn mantissa(&self) -> f64 {
        self.cur
    }

    pub(crate) fn prev_mantissa(&self) -> f64 {
        self.cur - self.diff
    }

    /// Mantissa of `L_k - L_{k-1}`.
    pub(crate) fn diff_mantissa(&self) -> f64 {
        self.diff
    }

    pub(crate) fn value(&self) -> f64 {
        if self.cur == 0.0 {
            return 0.0;
        }
        self.cur * self.log_scale().exp()
    }

    pub(crate) fn advance(&mut self) {
        (self.cur, self.diff) = step(self.alpha, self.x, self.k, self.cur, self.diff);
        self.k += 1;
        if self.cur.abs() > RESCALE_LIMIT {
            self.cur *= RESCALE_FACTOR;
            self.diff *= RESCALE_FACTOR;
            self.exp2 += RESCALE_EXP;
        }
    }

    pub(crate) fn advance_to(&mut self, k: usize) {
        while self.k < k {
            self.advance();
        }
    }
}

/// `L_k^(alpha)(x)` by plain recurrence; no validation.
pub(crate) fn glp_raw(alpha: f64, k: usize, x: f64) -> f64 {
    let (mut cur, mut diff) = (1.0, 1.0);
    for j in 0..k {
        (cur, diff) = step(alpha, x, j, cur, diff);
    }
    cur
}

/// `exp(-x/2) L_k^(alpha)(x)` without intermediate overflow; no validation.
pub(crate) fn glf_raw(alpha: f64, k: usize, x: f64) -> f64 {
    let mut rec = ScaledRecurrence::new(alpha, x, -0.5 * x);
    rec.advance_to(k);
    rec.value()
}

/// Values `exp(-x/2) L_j^(alpha)(x)` for `j = 0..=n`.
pub(crate) fn glf_values(alpha: f64, n: usize, x: f64, out: &mut Vec<f64>) {
    out.clear();
    let mut rec = ScaledRecurrence::new(alpha, x, -0.5 * x);
    let mut exp2 = rec.exp2;
    let mut factor = rec.log_scale().exp();
    out.push(rec.mantissa() * factor);
    for _ in 0..n {
        rec.advance();
        if rec.exp2 != exp2 {
            exp2 = rec.exp2;
            factor = rec.log_scale().exp();
        }
        out.push(rec.mantissa() * factor);
    }
}

/// Evaluates `L_k^(alpha)(x)`. Negative `x` is accepted.
pub fn eval_glp(params: &BasisParams, k: usize, x: f64) -> Result<f64> {
    if !x.is_finite() {
        return Err(Error::Domain(format!("x must be finite, got {x}")));
    }
    let v = glp_raw(params.alpha, k, x);
    if v.is_finite() {
        Ok(v)
    } else {
        Err(Error::NonFinite(format!(
            "L_{k}^({})({x}) overflows; use eval_glp_log",
            params.alpha
        )))
    }
}

/// `L_k^(alpha)(x)` as `(ln |L|, sign)`, usable where the value itself
/// overflows. A zero value gives `(-inf, 0.0)`.
pub fn eval_glp_log(params: &BasisParams, k: usize, x: f64) -> Result<(f64, f64)> {
    if !x.is_finite() {
        return Err(Error::Domain(format!("x must be finite, got {x}")));
    }
    let mut rec = ScaledRecurrence::new(params.alpha, x, 0.0);
    rec.advance_to(k);
    let m = rec.mantissa();
    if m == 0.0 {
        return Ok((f64::NEG_INFINITY, 0.0));
    }
    Ok((m.abs().ln() + rec.log_scale(), m.signum()))
}

/// Evaluates `exp(-x/2) L_k^(alpha)(x)` for `x >= 0`.
pub fn eval_glf(params: &BasisParams, k: usize, x: f64) -> Result<f64> {
    let x = EvalPoint::new(x)?.value();
    let v = glf_raw(params.alpha, k, x);
    if v.is_finite() {
        Ok(v)
    } else {
        Err(Error::NonFinite(format!("GLF of degree {k} at x = {x}")))
    }
}

/// `ln gamma_k^(alpha) = ln Gamma(k + alpha + 1) - ln k!`.
pub fn ln_gamma_norm(alpha: f64, k: usize) -> Result<f64> {
    check_alpha(alpha)?;
    let kf = k as f64;
    Ok(ln_gamma(kf + alpha + 1.0) - ln_gamma(kf + 1.0))
}

/// Squared weighted norm `gamma_k^(alpha) = Gamma(k + alpha + 1) / k!`.
pub fn gamma_norm(alpha: f64, k: usize) -> Result<f64> {
    if alpha == 0.0 {
        check_alpha(alpha)?;
        return Ok(1.0);
    }
    Ok(ln_gamma_norm(alpha, k)?.exp())
}

/// `gamma_0 ..= gamma_n` by the ratio recurrence
/// `gamma_{k+1} = gamma_k (k + alpha + 1) / (k + 1)`.
pub(crate) fn gamma_norms(alpha: f64, n: usize) -> Vec<f64> {
    let mut out = Vec::with_capacity(n + 1);
    let mut g = crate::special::gamma(alpha + 1.0);
    out.push(g);
    for k in 0..n {
        let kf = k as f64;
        g *= (kf + alpha + 1.0) / (kf + 1.0);
        out.push(g);
    }
    out
}

/// Uniform bound on `exp(-x/2) |L_n^(alpha)(x)|` over `x >= 0`:
/// `kappa = gamma_n / Gamma(alpha+1)` for `alpha >= 0`, `2 - kappa` below.
pub fn glf_bound(alpha: f64, n: usize) -> Result<f64> {
    check_alpha(alpha)?;
    let kappa = (ln_gamma_norm(alpha, n)? - ln_gamma(alpha + 1.0)).exp();
    Ok(if alpha >= 0.0 { kappa } else { 2.0 - kappa })
}

/// `m`-th derivative of `L_k^(alpha)` via
/// `d^m/dx^m L_k^(alpha) = (-1)^m L_{k-m}^(alpha+m)`.
pub fn eval_glp_derivative(params: &BasisParams, k: usize, m: usize, x: f64) -> Result<f64> {
    if m > k {
        return Ok(0.0);
    }
    let shifted = BasisParams::new(params.alpha + m as f64, params.form)?;
    let v = eval_glp(&shifted, k - m, x)?;
    Ok(if m % 2 == 0 { v } else { -v })
}

/// `L_k^(alpha)(0) = (alpha+1)_k / k!`.
pub fn glp_at_zero(alpha: f64, k: usize) -> f64 {
    (0..k).fold(1.0, |acc, j| acc * (alpha + 1.0 + j as f64) / (j as f64 + 1.0))
}
