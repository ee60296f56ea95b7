//! Gauss-Laguerre and Gauss-Laguerre-Radau rules for
//! `int_0^inf x^alpha e^{-x} f(x) dx`.
//!
//! Nodes are eigenvalues of the (possibly modified) Jacobi matrix, found by
//! implicit QL and then polished with Newton steps on the node polynomial.
//! Weights use the Christoffel form
//! `w_j e^{x_j} = 1 / sum_k Lhat_k(x_j)^2 / gamma_k`, which keeps the
//! product `w_j e^{x_j}` finite long after `w_j` itself has underflowed.

use crate::basis::{gamma_norms, glf_values, ScaledRecurrence};
use crate::error::{check_alpha, Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum RuleKind {
    Gauss,
    Radau,
}

#[derive(Debug, Clone, PartialEq)]
pub struct QuadRule {
    kind: RuleKind,
    alpha: f64,
    nodes: Vec<f64>,
    weights: Vec<f64>,
    ln_weights: Vec<f64>,
    scaled_weights: Vec<f64>,
}

impl QuadRule {
    pub fn kind(&self) -> RuleKind {
        self.kind
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    /// Weights for `x^alpha e^{-x}`. Entries underflow to zero for nodes
    /// beyond roughly 745.
    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// Natural logs of the weights, finite for every node.
    pub fn ln_weights(&self) -> &[f64] {
        &self.ln_weights
    }

    /// `w_j e^{x_j}`: weights for `x^alpha` alone.
    pub fn scaled_weights(&self) -> &[f64] {
        &self.scaled_weights
    }
}

/// Gauss-Laguerre rule with `npoints` nodes (zeros of `L_npoints^(alpha)`).
pub fn gauss_laguerre(alpha: f64, npoints: usize) -> Result<QuadRule> {
    check_alpha(alpha)?;
    if npoints == 0 {
        return Err(Error::InvalidParameter("npoints must be >= 1".into()));
    }
    let (diag, off) = jacobi_matrix(alpha, npoints);
    let mut nodes = tridiagonal_eigenvalues(diag, off)?;
    nodes.sort_by(f64::total_cmp);
    polish(&mut nodes, alpha, npoints);
    build(RuleKind::Gauss, alpha, nodes)
}

/// Gauss-Laguerre-Radau rule with `npoints` nodes: `0` and the zeros of
/// `L_{npoints-1}^(alpha+1)`.
pub fn gauss_radau(alpha: f64, npoints: usize) -> Result<QuadRule> {
    check_alpha(alpha)?;
    if npoints == 0 {
        return Err(Error::InvalidParameter("npoints must be >= 1".into()));
    }
    let (mut diag, off) = jacobi_matrix(alpha, npoints);
    // Last diagonal entry chosen so that 0 is an eigenvalue:
    // a' = -b_{N-1}^2 p_{N-2}(0) / p_{N-1}(0) = N - 1 for the monic Laguerre family.
    diag[npoints - 1] = (npoints - 1) as f64;
    let mut nodes = tridiagonal_eigenvalues(diag, off)?;
    nodes.sort_by(f64::total_cmp);
    nodes[0] = 0.0;
    polish(&mut nodes[1..], alpha + 1.0, npoints - 1);
    build(RuleKind::Radau, alpha, nodes)
}

/// `sum_j w_j f(x_j)`, approximating `int_0^inf x^alpha e^{-x} f(x) dx`.
pub fn integrate<F: Fn(f64) -> f64>(rule: &QuadRule, f: F) -> Result<f64> {
    weighted_sum(rule.nodes(), rule.weights(), f)
}

/// `sum_j w_j e^{x_j} g(x_j)`, approximating `int_0^inf x^alpha g(x) dx`.
pub fn integrate_scaled<F: Fn(f64) -> f64>(rule: &QuadRule, g: F) -> Result<f64> {
    weighted_sum(rule.nodes(), rule.scaled_weights(), g)
}

fn weighted_sum<F: Fn(f64) -> f64>(nodes: &[f64], weights: &[f64], f: F) -> Result<f64> {
    let mut sum = 0.0;
    for (index, (&x, &w)) in nodes.iter().zip(weights).enumerate() {
        let value = f(x);
        if !value.is_finite() {
            return Err(Error::Evaluation { index, x, value });
        }
        sum += w * value;
    }
    Ok(sum)
}

fn jacobi_matrix(alpha: f64, n: usize) -> (Vec<f64>, Vec<f64>) {
    let diag = (0..n).map(|k| 2.0 * k as f64 + alpha + 1.0).collect();
    let off = (1..n).map(|k| (k as f64 * (k as f64 + alpha)).sqrt()).collect();
    (diag, off)
}

/// Newton steps on `L_n^(alpha)`, using `x L_n' = n L_n - (n+alpha) L_{n-1}`.
/// A step is kept only if it stays well inside the gap to the neighbours.
fn polish(nodes: &mut [f64], alpha: f64, n: usize) {
    let m = nodes.len();
    let original = nodes.to_vec();
    for j in 0..m {
        let lo_gap = if j > 0 { original[j] - original[j - 1] } else { original[j] };
        let hi_gap = if j + 1 < m { original[j + 1] - original[j] } else { f64::INFINITY };
        let limit = 0.25 * lo_gap.min(hi_gap);
        let mut x = original[j];
        for _ in 0..3 {
            let mut rec = ScaledRecurrence::new(alpha, x, 0.0);
            rec.advance_to(n);
            // n L_n - (n+alpha) L_{n-1} = n (L_n - L_{n-1}) - alpha L_{n-1}
            let ln = rec.mantissa();
            let denom = n as f64 * rec.diff_mantissa() - alpha * rec.prev_mantissa();
            if denom == 0.0 || !denom.is_finite() {
                break;
            }
            let dx = x * ln / denom;
            if !dx.is_finite() || (x - dx - original[j]).abs() > limit {
                break;
            }
            x -= dx;
            if dx.abs() <= 4.0 * f64::EPSILON * x.abs() {
                break;
            }
        }
        nodes[j] = x;
    }
}

fn build(kind: RuleKind, alpha: f64, nodes: Vec<f64>) -> Result<QuadRule> {
    let n = nodes.len();
    for (i, pair) in nodes.windows(2).enumerate() {
        if !(pair[1] > pair[0]) {
            return Err(Error::NoConvergence { index: i + 1 });
        }
    }
    let gammas = gamma_norms(alpha, n - 1);
    let mut scaled_weights = Vec::with_capacity(n);
    let mut ln_weights = Vec::with_capacity(n);
    let mut buf = Vec::with_capacity(n);
    for &x in &nodes {
        glf_values(alpha, n - 1, x, &mut buf);
        let s: f64 = buf.iter().zip(&gammas).map(|(v, g)| v * v / g).sum();
        let fused = 1.0 / s;
        scaled_weights.push(fused);
        ln_weights.push(fused.ln() - x);
    }
    let weights = ln_weights.iter().map(|lw| lw.exp()).collect();
    Ok(QuadRule { kind, alpha, nodes, weights, ln_weights, scaled_weights })
}

/// Eigenvalues of the symmetric tridiagonal matrix with diagonal `d` and
/// off-diagonal `e` by the implicit QL iteration with Wilkinson shifts.
pub(crate) fn tridiagonal_eigenvalues(mut d: Vec<f64>, off: Vec<f64>) -> Result<Vec<f64>> {
    let n = d.len();
    let mut e = off;
    e.push(0.0);
    for l in 0..n {
        let mut iter = 0;
        loop {
            let mut m = l;
            while m + 1 < n {
                let dd = d[m].abs() + d[m + 1].abs();
                if e[m].abs() <= f64::EPSILON * dd {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            iter += 1;
            if iter > 60 {
                return Err(Error::NoConvergence { index: l });
            }
            let mut g = (d[l + 1] - d[l]) / (2.0 * e[l]);
            let mut r = g.hypot(1.0);
            g = d[m] - d[l] + e[l] / (g + r.copysign(g));
            let (mut s, mut c, mut p) = (1.0, 1.0, 0.0);
            let mut i = m;
            let mut underflow = false;
            while i > l {
                i -= 1;
                let f = s * e[i];
                let b = c * e[i];
                r = f.hypot(g);
                e[i + 1] = r;
                if r == 0.0 {
                    d[i + 1] -= p;
                    e[m] = 0.0;
                    underflow = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + 2.0 * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;
            }
            if underflow {
                continue;
            }
            d[l] -= p;
            e[l] = g;
            e[m] = 0.0;
        }
    }
    Ok(d)
}

/// Gauss-Legendre nodes and weights on `[-1, 1]`.
pub fn gauss_legendre(npoints: usize) -> (Vec<f64>, Vec<f64>) {
    let n = npoints;
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    for i in 0..n.div_ceil(2) {
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 1.0;
        for _ in 0..100 {
            let (p, d) = legendre_with_derivative(n, x);
            dp = d;
            let dx = p / d;
            x -= dx;
            if dx.abs() <= 1e-16 {
                break;
            }
        }
        let (_, d) = legendre_with_derivative(n, x);
        if d.is_finite() {
            dp = d;
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    if n % 2 == 1 {
        nodes[n / 2] = 0.0;
    }
    (nodes, weights)
}

fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::special::{gamma, ln_gamma};
    use approx::assert_relative_eq;

    #[test]
    fn one_and_two_point_rules() {
        let r = gauss_laguerre(0.0, 1).unwrap();
        assert_relative_eq!(r.nodes()[0], 1.0, max_relative = 1e-15);
        assert_relative_eq!(r.weights()[0], 1.0, max_relative = 1e-15);

        let r = gauss_laguerre(0.0, 2).unwrap();
        let s2 = 2f64.sqrt();
        assert_relative_eq!(r.nodes()[0], 2.0 - s2, max_relative = 1e-14);
        assert_relative_eq!(r.nodes()[1], 2.0 + s2, max_relative = 1e-14);
        assert_relative_eq!(r.weights()[0], (2.0 + s2) / 4.0, max_relative = 1e-14);
        assert_relative_eq!(r.weights()[1], (2.0 - s2) / 4.0, max_relative = 1e-14);

        let r = gauss_radau(0.0, 1).unwrap();
        assert_eq!(r.nodes(), &[0.0]);
        assert_relative_eq!(r.weights()[0], 1.0, max_relative = 1e-15);

        let r = gauss_radau(0.0, 2).unwrap();
        assert_eq!(r.nodes()[0], 0.0);
        assert_relative_eq!(r.nodes()[1], 2.0, max_relative = 1e-15);
        assert_relative_eq!(r.weights()[0], 0.5, max_relative = 1e-14);
        assert_relative_eq!(r.weights()[1], 0.5, max_relative = 1e-14);
    }

    #[test]
    fn zeroth_moment() {
        for &alpha in &[0.0, 0.5, 1.5, -0.5, -0.9] {
            for n in [1usize, 8, 21, 100] {
                for rule in [gauss_laguerre(alpha, n).unwrap(), gauss_radau(alpha, n).unwrap()] {
                    let s: f64 = rule.weights().iter().sum();
                    assert_relative_eq!(s, gamma(alpha + 1.0), max_relative = 1e-12);
                }
            }
        }
    }

    #[test]
    fn radau_first_weight_closed_form() {
        for &alpha in &[0.0, 0.5, 2.0] {
            for n in [2usize, 5, 30, 200] {
                let r = gauss_radau(alpha, n).unwrap();
                let ln_w0 = ln_gamma(alpha + 1.0) + ln_gamma(alpha + 2.0) + ln_gamma(n as f64)
                    - ln_gamma(n as f64 + alpha + 1.0);
                assert_relative_eq!(r.ln_weights()[0], ln_w0, epsilon = 1e-12);
            }
        }
    }

    #[test]
    fn nodes_are_zeros_of_node_polynomial() {
        let r = gauss_laguerre(0.5, 60).unwrap();
        for &x in r.nodes() {
            let mut rec = ScaledRecurrence::new(0.5, x, 0.0);
            rec.advance_to(60);
            // residual relative to the size of the neighbouring degree
            assert!(rec.mantissa().abs() <= 1e-12 * rec.prev_mantissa().abs() * (1.0 + x));
        }
    }

    #[test]
    fn large_rules_stay_finite() {
        let r = gauss_laguerre(0.0, 1664).unwrap();
        assert!(r.scaled_weights().iter().all(|w| w.is_finite() && *w > 0.0));
        assert!(r.ln_weights().iter().all(|w| w.is_finite()));
        let s: f64 = r.weights().iter().sum();
        assert_relative_eq!(s, 1.0, max_relative = 1e-12);
        // int_0^inf x^0 e^{-x} dx via scaled weights
        let v = integrate_scaled(&r, |x| (-x).exp()).unwrap();
        assert_relative_eq!(v, 1.0, max_relative = 1e-12);
    }

    #[test]
    fn integrate_examples() {
        let r = gauss_laguerre(0.0, 1).unwrap();
        assert_relative_eq!(integrate(&r, |x| x).unwrap(), 1.0, max_relative = 1e-15);
        let r = gauss_radau(0.0, 3).unwrap();
        assert_relative_eq!(integrate(&r, |x| x * x).unwrap(), 2.0, max_relative = 1e-14);
        let r = gauss_laguerre(0.0, 41).unwrap();
        let v = integrate(&r, |x| 1.0 / (x + 1.0)).unwrap();
        assert!((v - 0.596_347_362_323_194_1).abs() < 1e-8);
        let err = integrate(&r, |x| if x > 10.0 { f64::NAN } else { 1.0 }).unwrap_err();
        assert!(matches!(err, Error::Evaluation { .. }));
    }

    #[test]
    fn legendre_rule() {
        for n in [1usize, 2, 5, 16, 32] {
            let (x, w) = gauss_legendre(n);
            assert_relative_eq!(w.iter().sum::<f64>(), 2.0, max_relative = 1e-14);
            for d in 0..(2 * n) {
                let q: f64 = x.iter().zip(&w).map(|(x, w)| w * x.powi(d as i32)).sum();
                let exact = if d % 2 == 1 { 0.0 } else { 2.0 / (d as f64 + 1.0) };
                assert!((q - exact).abs() <= 1e-14, "n={n} d={d}");
            }
        }
    }

    #[test]
    fn rejects_bad_input() {
        assert!(gauss_laguerre(-1.0, 3).is_err());
        assert!(gauss_laguerre(0.0, 0).is_err());
        assert!(gauss_radau(0.0, 0).is_err());
    }
}
