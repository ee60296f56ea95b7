//! Barycentric interpolation at Laguerre points (zeros of `L_{n+1}^(alpha)`)
//! and Laguerre-Radau points (zeros of `x L_n^(alpha+1)`).
//!
//! Barycentric weights come straight from the quadrature weights, since
//! `1/l'(x_j)` is, up to sign and a common constant, `sqrt(x_j w_j)` for
//! Gauss nodes and `sqrt(w_j)` for the interior Radau nodes.

use crate::basis::{gamma_norms, Form, ScaledRecurrence};
use crate::error::{Error, Result};
use crate::quadrature::{gauss_laguerre, gauss_radau, QuadRule, RuleKind};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PointKind {
    Laguerre,
    Radau,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Interpolant {
    points: Vec<f64>,
    values: Vec<f64>,
    bary_weights: Vec<f64>,
    form: Form,
    alpha: f64,
    point_kind: PointKind,
    /// `(sign, ln |e^{x_j/2} / l'(x_j)|)` for the node polynomial `l`.
    lagrange_weights: Vec<(f64, f64)>,
}

/// `(sign, ln |e^{x_j/2} / l'(x_j)|)` for each node, with `l = L_N^(alpha)`
/// (Gauss) or `l = x L_{N-1}^(alpha+1)` (Radau).
fn lagrange_weights(rule: &QuadRule) -> Vec<(f64, f64)> {
    let n = rule.len();
    let alpha = rule.alpha();
    let nodes = rule.nodes();
    let fused = rule.scaled_weights();
    match rule.kind() {
        RuleKind::Gauss => {
            // w_j = gamma_N / (x_j L_N'(x_j)^2); sign of L_N' at the j-th zero is -(-1)^j.
            let ln_g = gamma_norms(alpha, n)[n].ln();
            (0..n)
                .map(|j| {
                    let sign = if j % 2 == 0 { -1.0 } else { 1.0 };
                    (sign, 0.5 * (nodes[j].ln() + fused[j].ln() - ln_g))
                })
                .collect()
        }
        RuleKind::Radau => {
            let m = n - 1;
            let ln_g = gamma_norms(alpha + 1.0, m)[m].ln();
            (0..n)
                .map(|j| {
                    let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
                    if j == 0 {
                        // l'(0) = L_m^(alpha+1)(0) = (alpha+2)_m / m!
                        let ln_l0: f64 = (0..m)
                            .map(|i| ((alpha + 2.0 + i as f64) / (i as f64 + 1.0)).ln())
                            .sum();
                        (sign, -ln_l0)
                    } else {
                        (sign, 0.5 * (fused[j].ln() - ln_g))
                    }
                })
                .collect()
        }
    }
}

/// Barycentric weights for the nodes of `rule`, normalized so that
/// `max |lambda_j| = 1` and `lambda_0 > 0`. Weights of far-out nodes may
/// underflow to zero.
pub fn barycentric_weights(rule: &QuadRule) -> Vec<f64> {
    let lw = lagrange_weights(rule);
    let logs: Vec<f64> = lw.iter().zip(rule.nodes()).map(|((_, l), x)| l - 0.5 * x).collect();
    let max = logs.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let flip = lw[0].0;
    lw.iter()
        .zip(&logs)
        .map(|((s, _), l)| s * flip * (l - max).exp())
        .collect()
}

/// Interpolates `f` at `n + 1` points of the given kind.
pub fn interpolate<F>(f: F, point_kind: PointKind, form: Form, alpha: f64, n: usize) -> Result<Interpolant>
where
    F: Fn(f64) -> f64,
{
    let rule = match point_kind {
        PointKind::Laguerre => gauss_laguerre(alpha, n + 1)?,
        PointKind::Radau => gauss_radau(alpha, n + 1)?,
    };
    interpolate_on_rule(f, &rule, form)
}

/// Interpolates `f` at the nodes of a prebuilt rule.
pub fn interpolate_on_rule<F>(f: F, rule: &QuadRule, form: Form) -> Result<Interpolant>
where
    F: Fn(f64) -> f64,
{
    let mut values = Vec::with_capacity(rule.len());
    for (index, &x) in rule.nodes().iter().enumerate() {
        let value = f(x);
        if !value.is_finite() {
            return Err(Error::Evaluation { index, x, value });
        }
        values.push(value);
    }
    let lagrange_weights = lagrange_weights(rule);
    Ok(Interpolant {
        points: rule.nodes().to_vec(),
        values,
        bary_weights: barycentric_weights(rule),
        form,
        alpha: rule.alpha(),
        point_kind: match rule.kind() {
            RuleKind::Gauss => PointKind::Laguerre,
            RuleKind::Radau => PointKind::Radau,
        },
        lagrange_weights,
    })
}

impl Interpolant {
    pub fn points(&self) -> &[f64] {
        &self.points
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn bary_weights(&self) -> &[f64] {
        &self.bary_weights
    }

    pub fn form(&self) -> Form {
        self.form
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn point_kind(&self) -> PointKind {
        self.point_kind
    }

    /// True when `x` lies beyond the largest node.
    pub fn is_extrapolation(&self, x: f64) -> bool {
        x > *self.points.last().unwrap()
    }

    pub fn eval(&self, x: f64) -> f64 {
        eval_interpolant(self, x)
    }

    fn node_hit(&self, x: f64) -> Option<usize> {
        let i = self.points.partition_point(|&p| p < x);
        [i.wrapping_sub(1), i]
            .into_iter()
            .filter(|&j| j < self.points.len())
            .find(|&j| {
                let xj = self.points[j];
                let ulp = f64::EPSILON * xj.abs().max(f64::MIN_POSITIVE);
                (x - xj).abs() <= 4.0 * ulp
            })
    }

    /// `(sign, ln |e^{-x/2} l(x)|)` for the node polynomial.
    fn scaled_node_polynomial(&self, x: f64) -> (f64, f64) {
        let n = self.points.len();
        let (alpha, degree, extra) = match self.point_kind {
            PointKind::Laguerre => (self.alpha, n, 0.0),
            PointKind::Radau => (self.alpha + 1.0, n - 1, x.ln()),
        };
        let mut rec = ScaledRecurrence::new(alpha, x, -0.5 * x);
        rec.advance_to(degree);
        let m = rec.mantissa();
        (m.signum(), m.abs().ln() + rec.log_scale() + extra)
    }
}

/// Evaluates the interpolant from the barycentric sums, assembled in log
/// space from `ln |l(x)|` and `ln |1/l'(x_j)|` so that neither the node
/// polynomial nor the weights need to be representable on their own.
///
/// Two formulas are formed from the same terms `l_j(x)`:
/// the first (modified Lagrange) form `sum_j l_j(x) f_j`, backward stable
/// with error about `eps sum_j |l_j(x) f_j|`, and the second (quotient) form
/// shifted by the value `f_r` at the nearest node,
/// `f_r + sum_j l_j(x) (f_j - f_r) / sum_j l_j(x)`, which reproduces
/// constants exactly but carries an extra error of about
/// `eps Lebesgue(x) |p(x) - f_r|`. The one with the smaller estimate is
/// returned; away from the widely spaced outer nodes both agree.
pub fn eval_interpolant(itp: &Interpolant, x: f64) -> f64 {
    if let Some(j) = itp.node_hit(x) {
        return itp.values[j];
    }
    let (sign_l, ln_l) = itp.scaled_node_polynomial(x);
    if !ln_l.is_finite() {
        // x sits on a root of l to working precision
        let j = itp.points.partition_point(|&p| p < x).min(itp.points.len() - 1);
        return itp.values[j];
    }
    let poly = itp.form == Form::Polynomial;
    let r = itp.points.partition_point(|&p| p < x).min(itp.points.len() - 1);
    let r = if r > 0 && x - itp.points[r - 1] < itp.points[r] - x { r - 1 } else { r };
    let (xr, fr) = (itp.points[r], itp.values[r]);
    let shift = if poly { fr } else { fr * (0.5 * (xr - x)).exp() };
    let (mut first, mut num, mut den) = (0.0, 0.0, 0.0);
    let (mut abs_first, mut abs_num, mut lebesgue) = (0.0, 0.0, 0.0);
    for ((&xj, &fj), &(sj, lj)) in itp.points.iter().zip(&itp.values).zip(&itp.lagrange_weights) {
        let lagrange = sj / (x - xj) * (ln_l + lj + 0.5 * (x - xj)).exp();
        let term = match (poly, fj == 0.0) {
            (_, true) => 0.0,
            (true, false) => fj * lagrange,
            (false, false) => sj * fj / (x - xj) * (ln_l + lj).exp(),
        };
        let shifted = term - shift * lagrange;
        first += term;
        num += shifted;
        den += lagrange;
        abs_first += term.abs();
        abs_num += shifted.abs();
        lebesgue += lagrange.abs();
    }
    let first = sign_l * first;
    if !den.is_finite() || den == 0.0 || !num.is_finite() {
        return first;
    }
    let second_cost = abs_num + lebesgue * (first - shift).abs();
    if abs_first < second_cost {
        first
    } else {
        shift + num / den
    }
}
