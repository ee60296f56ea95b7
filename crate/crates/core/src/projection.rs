//! Truncated Laguerre expansions: projection by Gauss-Laguerre quadrature,
//! Clenshaw evaluation, and weighted norms.

use crate::basis::{gamma_norms, glf_values, BasisParams, Form};
use crate::error::{check_alpha, Error, Result};
use crate::quadrature::{gauss_laguerre, QuadRule};

/// `sum_k coeffs[k] phi_k(nu x)` where `phi_k` is `L_k^(alpha)` or
/// `exp(-x/2) L_k^(alpha)` depending on `form`.
#[derive(Debug, Clone, PartialEq)]
pub struct Expansion {
    alpha: f64,
    form: Form,
    nu: f64,
    coeffs: Vec<f64>,
}

impl Expansion {
    pub fn new(alpha: f64, form: Form, nu: f64, coeffs: Vec<f64>) -> Result<Self> {
        check_alpha(alpha)?;
        if !(nu.is_finite() && nu > 0.0) {
            return Err(Error::InvalidParameter(format!("nu must be finite and > 0, got {nu}")));
        }
        if coeffs.is_empty() {
            return Err(Error::InvalidParameter("an expansion needs at least one coefficient".into()));
        }
        if let Some(k) = coeffs.iter().position(|c| !c.is_finite()) {
            return Err(Error::NonFinite(format!("coefficient {k} is {}", coeffs[k])));
        }
        Ok(Self { alpha, form, nu, coeffs })
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn form(&self) -> Form {
        self.form
    }

    pub fn nu(&self) -> f64 {
        self.nu
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    /// Highest degree present.
    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// The same expansion cut back to degree `n` (no-op if already shorter).
    pub fn truncate(&self, n: usize) -> Self {
        let mut out = self.clone();
        out.coeffs.truncate(n + 1);
        out
    }

    pub fn eval(&self, x: f64) -> f64 {
        eval_expansion(self, x)
    }
}

/// Default number of quadrature points used to project onto degree `n`.
pub fn default_quad_points(n: usize) -> usize {
    4 * n + 64
}

/// Projects `f` onto degree `n` using a Gauss-Laguerre rule of
/// `quad_points` nodes (default `4n + 64`) in the scaled variable `y = nu x`.
pub fn project<F>(f: F, n: usize, params: &BasisParams, nu: f64, quad_points: Option<usize>) -> Result<Expansion>
where
    F: Fn(f64) -> f64,
{
    let m = quad_points.unwrap_or_else(|| default_quad_points(n));
    if m < n + 1 {
        return Err(Error::InvalidParameter(format!(
            "quad_points = {m} is below n + 1 = {}",
            n + 1
        )));
    }
    let rule = gauss_laguerre(params.alpha(), m)?;
    project_with_rule(f, n, params.form(), nu, &rule)
}

/// As [`project`], with a prebuilt rule whose `alpha` fixes the basis.
pub fn project_with_rule<F>(f: F, n: usize, form: Form, nu: f64, rule: &QuadRule) -> Result<Expansion>
where
    F: Fn(f64) -> f64,
{
    if !(nu.is_finite() && nu > 0.0) {
        return Err(Error::InvalidParameter(format!("nu must be finite and > 0, got {nu}")));
    }
    if rule.len() < n + 1 {
        return Err(Error::InvalidParameter(format!(
            "rule has {} nodes, need at least {}",
            rule.len(),
            n + 1
        )));
    }
    let alpha = rule.alpha();
    let gammas = gamma_norms(alpha, n);
    let mut sums = vec![0.0; n + 1];
    let mut buf = Vec::with_capacity(n + 1);
    for (index, (&y, &fused)) in rule.nodes().iter().zip(rule.scaled_weights()).enumerate() {
        let x = y / nu;
        let value = f(x);
        if !value.is_finite() {
            return Err(Error::Evaluation { index, x, value });
        }
        // w_j L_k(y) = (w_j e^{y}) e^{-y/2} Lhat_k(y)
        let factor = match form {
            Form::Polynomial => (fused.ln() - 0.5 * y).exp() * value,
            Form::Function => fused * value,
        };
        if factor == 0.0 {
            continue;
        }
        glf_values(alpha, n, y, &mut buf);
        for (s, v) in sums.iter_mut().zip(&buf) {
            *s += factor * v;
        }
    }
    let coeffs = sums.iter().zip(&gammas).map(|(s, g)| s / g).collect();
    Expansion::new(alpha, form, nu, coeffs)
}

const RESCALE_LIMIT: f64 = 1.8446744073709552e19;
const RESCALE_FACTOR: f64 = 5.421010862427522e-20;

/// Clenshaw sum `sum_k c_k L_k^(alpha)(y)` returned as `(mantissa, exp2)`
/// with value `mantissa * 2^exp2`.
pub(crate) fn clenshaw_scaled(alpha: f64, coeffs: &[f64], y: f64) -> (f64, i32) {
    let n = coeffs.len() - 1;
    let a = |k: usize| (2.0 * k as f64 + alpha + 1.0 - y) / (k as f64 + 1.0);
    let b = |k: usize| -(k as f64 + alpha) / (k as f64 + 1.0);
    let mut exp2 = 0i32;
    let mut unit = 1.0; // 2^-exp2
    let mut b1 = 0.0; // b_{k+1}
    let mut b2 = 0.0; // b_{k+2}
    for k in (1..=n).rev() {
        let bk = coeffs[k] * unit + a(k) * b1 + b(k + 1) * b2;
        b2 = b1;
        b1 = bk;
        if b1.abs() > RESCALE_LIMIT {
            b1 *= RESCALE_FACTOR;
            b2 *= RESCALE_FACTOR;
            unit *= RESCALE_FACTOR;
            exp2 += 64;
        }
    }
    let phi1 = alpha + 1.0 - y;
    let s = coeffs[0] * unit + b1 * phi1 + b(1) * b2;
    (s, exp2)
}

/// Natural-log scale form of the expansion at `x`: value = `m * exp(ln_scale)`.
pub(crate) fn eval_expansion_parts(exp: &Expansion, x: f64) -> (f64, f64) {
    let y = exp.nu * x;
    let (m, exp2) = clenshaw_scaled(exp.alpha, &exp.coeffs, y);
    let mut ln_scale = exp2 as f64 * std::f64::consts::LN_2;
    if exp.form == Form::Function {
        ln_scale -= 0.5 * y;
    }
    (m, ln_scale)
}

/// Evaluates the expansion at `x >= 0` by Clenshaw's recurrence.
pub fn eval_expansion(exp: &Expansion, x: f64) -> f64 {
    let (m, ln_scale) = eval_expansion_parts(exp, x);
    if m == 0.0 {
        return 0.0;
    }
    m * ln_scale.exp()
}

/// Weight function for norms: `omega = x^alpha e^{-x}` or `varpi = x^alpha`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Weight {
    Omega,
    Varpi,
}

/// `sqrt(sum_j w_j g(x_j)^2)` with a Gauss-Laguerre rule matched to `weight`.
pub fn weighted_norm<F>(g: F, alpha: f64, weight: Weight, quad_points: usize) -> Result<f64>
where
    F: Fn(f64) -> f64,
{
    let rule = gauss_laguerre(alpha, quad_points)?;
    weighted_norm_with_rule(g, &rule, weight)
}

pub fn weighted_norm_with_rule<F>(g: F, rule: &QuadRule, weight: Weight) -> Result<f64>
where
    F: Fn(f64) -> f64,
{
    let w = match weight {
        Weight::Omega => rule.weights(),
        Weight::Varpi => rule.scaled_weights(),
    };
    let mut sum = 0.0;
    for (index, (&x, &wj)) in rule.nodes().iter().zip(w).enumerate() {
        if wj == 0.0 {
            continue;
        }
        let value = g(x);
        if !value.is_finite() {
            return Err(Error::Evaluation { index, x, value });
        }
        sum += wj * value * value;
    }
    Ok(sum.sqrt())
}

/// `max_x |f(x) - exp(x)|` over `grid`.
pub fn max_error_on_grid<F>(exp: &Expansion, f: F, grid: &[f64]) -> f64
where
    F: Fn(f64) -> f64,
{
    grid.iter()
        .map(|&x| (f(x) - eval_expansion(exp, x)).abs())
        .fold(0.0, f64::max)
}

/// 1000 equispaced points on `[0, 50]` plus the `n + 1` Gauss-Laguerre
/// nodes of the basis, mapped back by `1/nu`.
pub fn default_grid(alpha: f64, n: usize, nu: f64) -> Result<Vec<f64>> {
    let mut grid: Vec<f64> = (0..1000).map(|i| 50.0 * i as f64 / 999.0).collect();
    let rule = gauss_laguerre(alpha, n + 1)?;
    grid.extend(rule.nodes().iter().map(|y| y / nu));
    Ok(grid)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::basis::{eval_glf, eval_glp};
    use approx::assert_relative_eq;

    fn poly(alpha: f64) -> BasisParams {
        BasisParams::polynomial(alpha).unwrap()
    }

    #[test]
    fn projects_basis_element() {
        for &alpha in &[0.0, 0.5, -0.5] {
            let p = poly(alpha);
            let e = project(|x| eval_glp(&p, 3, x).unwrap(), 5, &p, 1.0, None).unwrap();
            for (k, c) in e.coeffs().iter().enumerate() {
                let want = if k == 3 { 1.0 } else { 0.0 };
                assert!((c - want).abs() < 1e-12, "alpha={alpha} k={k} c={c}");
            }
        }
    }

    #[test]
    fn projects_constant() {
        for form in [Form::Polynomial] {
            let p = BasisParams::new(1.5, form).unwrap();
            let e = project(|_| 1.0, 7, &p, 1.0, None).unwrap();
            assert_relative_eq!(e.coeffs()[0], 1.0, max_relative = 1e-13);
            assert!(e.coeffs()[1..].iter().all(|c| c.abs() < 1e-13));
        }
    }

    #[test]
    fn first_coefficient_of_reciprocal() {
        let e = project(|x| 1.0 / (x + 1.0), 0, &poly(0.0), 1.0, Some(200)).unwrap();
        assert!((e.coeffs()[0] - 0.596_347_362_323_194_1).abs() < 1e-12);
    }

    #[test]
    fn clenshaw_examples() {
        let e = Expansion::new(0.0, Form::Polynomial, 1.0, vec![1.0]).unwrap();
        assert_eq!(e.eval(4.2), 1.0);
        let e = Expansion::new(0.0, Form::Function, 1.0, vec![1.0]).unwrap();
        assert_relative_eq!(e.eval(4.2), (-2.1f64).exp(), max_relative = 1e-15);
        let e = Expansion::new(0.0, Form::Polynomial, 1.0, vec![2.0, -4.0, 2.0]).unwrap();
        assert_relative_eq!(e.eval(3.0), 9.0, max_relative = 1e-14);
    }

    #[test]
    fn clenshaw_matches_direct_sum() {
        let coeffs: Vec<f64> = (0..40).map(|k| ((k * 7 % 11) as f64 - 5.0) / 5.0).collect();
        for form in [Form::Polynomial, Form::Function] {
            let p = BasisParams::new(0.75, form).unwrap();
            let e = Expansion::new(0.75, form, 1.0, coeffs.clone()).unwrap();
            for &x in &[0.0, 0.3, 2.5, 17.0, 60.0] {
                let direct: f64 = coeffs
                    .iter()
                    .enumerate()
                    .map(|(k, c)| match form {
                        Form::Polynomial => c * eval_glp(&p, k, x).unwrap(),
                        Form::Function => c * eval_glf(&p, k, x).unwrap(),
                    })
                    .sum();
                let scale: f64 = coeffs
                    .iter()
                    .enumerate()
                    .map(|(k, c)| match form {
                        Form::Polynomial => (c * eval_glp(&p, k, x).unwrap()).abs(),
                        Form::Function => (c * eval_glf(&p, k, x).unwrap()).abs(),
                    })
                    .sum();
                assert!((e.eval(x) - direct).abs() <= 1e-12 * scale.max(1e-300), "x={x}");
            }
        }
    }

    #[test]
    fn function_form_survives_large_arguments() {
        let e = Expansion::new(0.0, Form::Function, 1.0, vec![0.5; 300]).unwrap();
        let v = e.eval(3000.0);
        assert!(v.is_finite());
    }

    #[test]
    fn reciprocal_reconstruction() {
        let e = project(|x| 1.0 / (x + 1.0), 200, &poly(0.0), 1.0, None).unwrap();
        assert!((e.eval(1.0) - 0.5).abs() < 1e-10);
    }

    #[test]
    fn norm_examples() {
        let p = poly(0.0);
        let n = weighted_norm(|x| eval_glp(&p, 2, x).unwrap(), 0.0, Weight::Omega, 10).unwrap();
        assert_relative_eq!(n, 1.0, max_relative = 1e-13);
        let alpha = 0.5;
        let n = weighted_norm(|x| (-0.5 * x).exp(), alpha, Weight::Varpi, 10).unwrap();
        assert_relative_eq!(n, crate::special::gamma(alpha + 1.0).sqrt(), max_relative = 1e-13);
        let n = weighted_norm(|x| (-0.5 * x).exp(), 0.0, Weight::Varpi, 10).unwrap();
        assert_relative_eq!(n, 1.0, max_relative = 1e-13);
    }

    #[test]
    fn max_error_examples() {
        // polynomial-form round-off grows like |L_k(x)|, so use a short grid
        let e = project(|_| 1.0, 10, &poly(0.0), 1.0, None).unwrap();
        let grid: Vec<f64> = (0..200).map(|i| 0.025 * i as f64).collect();
        assert!(max_error_on_grid(&e, |_| 1.0, &grid) < 1e-13);
        let grid = default_grid(0.0, 10, 1.0).unwrap();
        let z = Expansion::new(0.0, Form::Polynomial, 1.0, vec![0.0; 4]).unwrap();
        assert_eq!(max_error_on_grid(&z, |_| 0.0, &grid), 0.0);
    }

    #[test]
    fn parameter_errors() {
        assert!(project(|x| x, 10, &poly(0.0), 1.0, Some(5)).is_err());
        assert!(project(|x| x, 3, &poly(0.0), 0.0, None).is_err());
        let err = project(|x| if x > 3.0 { f64::INFINITY } else { 1.0 }, 3, &poly(0.0), 1.0, None);
        assert!(matches!(err, Err(Error::Evaluation { .. })));
        assert!(Expansion::new(0.0, Form::Polynomial, 1.0, vec![f64::NAN]).is_err());
    }
}
