//! Spectral differentiation in coefficient space.
//!
//! Since `d/dx L_k^(alpha) = -L_{k-1}^(alpha+1)`, differentiating a
//! polynomial-form expansion only shifts the coefficient vector and the
//! family parameter.

use crate::basis::Form;
use crate::error::{Error, Result};
use crate::projection::{clenshaw_scaled, Expansion};

/// `m`-th derivative of a polynomial-form expansion, expressed in the basis
/// `L_k^(alpha+m)`. Returns the zero expansion of degree 0 when `m` exceeds
/// the degree.
pub fn differentiate(exp: &Expansion, m: usize) -> Result<Expansion> {
    if exp.form() != Form::Polynomial {
        return Err(Error::InvalidParameter(
            "coefficient-space differentiation needs a polynomial-form expansion".into(),
        ));
    }
    let alpha = exp.alpha() + m as f64;
    if m > exp.degree() {
        return Expansion::new(alpha, Form::Polynomial, exp.nu(), vec![0.0]);
    }
    let factor = exp.nu().powi(m as i32) * if m % 2 == 0 { 1.0 } else { -1.0 };
    let coeffs = exp.coeffs()[m..].iter().map(|c| factor * c).collect();
    Expansion::new(alpha, Form::Polynomial, exp.nu(), coeffs)
}

/// First derivative of a function-form expansion at each grid point:
/// `d/dx Lhat_k = e^{-x/2} (-L_k^(alpha)/2 - L_{k-1}^(alpha+1))`, chain rule
/// applied for `nu`.
pub fn differentiate_glf(exp: &Expansion, x_grid: &[f64]) -> Result<Vec<f64>> {
    if exp.form() != Form::Function {
        return Err(Error::InvalidParameter(
            "differentiate_glf needs a function-form expansion".into(),
        ));
    }
    let alpha = exp.alpha();
    let nu = exp.nu();
    let coeffs = exp.coeffs();
    let ln2 = std::f64::consts::LN_2;
    let mut out = Vec::with_capacity(x_grid.len());
    for &x in x_grid {
        if !(x.is_finite() && x >= 0.0) {
            return Err(Error::Domain(format!("grid point must be finite and >= 0, got {x}")));
        }
        let y = nu * x;
        let (m0, e0) = clenshaw_scaled(alpha, coeffs, y);
        let mut value = -0.5 * m0 * (e0 as f64 * ln2 - 0.5 * y).exp();
        if coeffs.len() > 1 {
            let (m1, e1) = clenshaw_scaled(alpha + 1.0, &coeffs[1..], y);
            value -= m1 * (e1 as f64 * ln2 - 0.5 * y).exp();
        }
        out.push(nu * value);
    }
    Ok(out)
}
