//! Built-in test functions and Laplace pairs with their analytic metadata.

use std::f64::consts::PI;
use std::sync::{Arc, LazyLock};

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::special::exp_e1;
use crate::verify::{rho_from_singularities, FunctionSpec, GrowthClass};
use crate::weeks::LaplacePair;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// `sech w` without overflow for large `|Re w|`.
pub fn sech(w: Complex64) -> Complex64 {
    let w = if w.re < 0.0 { -w } else { w };
    let e = (-w).exp();
    2.0 * e / (1.0 + e * e)
}

fn f3_poles() -> Vec<Complex64> {
    // sech(pi z / 16) has poles at z = 8i(2k+1); the nearest ones fix rho,
    // a few more are listed for completeness
    (0..4)
        .flat_map(|k| {
            let y = 8.0 * (2 * k + 1) as f64;
            [c(0.0, y), c(0.0, -y)]
        })
        .collect()
}

struct Entry {
    name: &'static str,
    description: &'static str,
    f: fn(Complex64) -> Complex64,
    singularities: Vec<Complex64>,
    beta: f64,
    growth_class: GrowthClass,
    alpha_defaults: Vec<f64>,
}

fn build(e: Entry) -> FunctionSpec {
    let f = e.f;
    let rho = if e.singularities.is_empty() {
        None
    } else {
        Some(rho_from_singularities(&e.singularities).expect("registered singularities are off the positive axis"))
    };
    FunctionSpec {
        name: e.name.into(),
        description: e.description.into(),
        f: Arc::new(move |x| f(c(x, 0.0)).re),
        f_complex: Some(Arc::new(f)),
        singularities: e.singularities,
        beta: e.beta,
        growth_class: e.growth_class,
        rho,
        alpha_defaults: e.alpha_defaults,
    }
}

static FUNCTIONS: LazyLock<Vec<FunctionSpec>> = LazyLock::new(|| {
    use GrowthClass::*;
    [
        Entry {
            name: "f1",
            description: "1/(x+1)",
            f: |z| 1.0 / (z + 1.0),
            singularities: vec![c(-1.0, 0.0)],
            beta: -1.0,
            growth_class: Algebraic,
            alpha_defaults: vec![0.0, 1.5],
        },
        Entry {
            name: "f2",
            description: "exp(-x)/(4x+9)",
            f: |z| (-z).exp() / (4.0 * z + 9.0),
            singularities: vec![c(-2.25, 0.0)],
            beta: -1.0,
            growth_class: AlgebraicTimesExpHalf,
            alpha_defaults: vec![0.0, 1.5],
        },
        Entry {
            name: "f3",
            description: "sech(pi x/16)",
            f: |z| sech(PI * z / 16.0),
            singularities: f3_poles(),
            beta: 0.0,
            growth_class: Algebraic,
            alpha_defaults: vec![0.0, 1.5],
        },
        Entry {
            name: "glf1",
            description: "exp(-x/2)/(1+x)",
            f: |z| (-0.5 * z).exp() / (z + 1.0),
            singularities: vec![c(-1.0, 0.0)],
            beta: -1.0,
            growth_class: AlgebraicTimesExpHalf,
            alpha_defaults: vec![0.0],
        },
        Entry {
            name: "glf2",
            description: "exp(-2x/3)/(x^2+4)",
            f: |z| (-2.0 * z / 3.0).exp() / (z * z + 4.0),
            singularities: vec![c(0.0, 2.0), c(0.0, -2.0)],
            beta: -2.0,
            growth_class: AlgebraicTimesExpHalf,
            alpha_defaults: vec![0.0],
        },
        Entry {
            name: "exp_recip1p",
            description: "exp(-x)/(x+1)",
            f: |z| (-z).exp() / (z + 1.0),
            singularities: vec![c(-1.0, 0.0)],
            beta: -1.0,
            growth_class: AlgebraicTimesExpHalf,
            alpha_defaults: vec![0.0],
        },
        Entry {
            name: "recip_sq9",
            description: "1/(x^2+9)",
            f: |z| 1.0 / (z * z + 9.0),
            singularities: vec![c(0.0, 3.0), c(0.0, -3.0)],
            beta: -2.0,
            growth_class: Algebraic,
            alpha_defaults: vec![0.0],
        },
        Entry {
            name: "scaling",
            description: "exp(-x)/(9+4x)",
            f: |z| (-z).exp() / (4.0 * z + 9.0),
            singularities: vec![c(-2.25, 0.0)],
            beta: -1.0,
            growth_class: AlgebraicTimesExpHalf,
            alpha_defaults: vec![0.0],
        },
        Entry {
            name: "cos",
            description: "cos x",
            f: |z| z.cos(),
            singularities: vec![],
            beta: 0.0,
            growth_class: EntireExponential,
            alpha_defaults: vec![0.0],
        },
        Entry {
            name: "exp_sin",
            description: "exp(-x) sin x",
            f: |z| (-z).exp() * z.sin(),
            singularities: vec![],
            beta: 0.0,
            growth_class: EntireExponential,
            alpha_defaults: vec![0.0],
        },
        Entry {
            name: "exp",
            description: "exp(-x)",
            f: |z| (-z).exp(),
            singularities: vec![],
            beta: 0.0,
            growth_class: EntireExponential,
            alpha_defaults: vec![0.0],
        },
        Entry {
            name: "gauss",
            description: "exp(-x^2)",
            f: |z| (-z * z).exp(),
            singularities: vec![],
            beta: 0.0,
            growth_class: EntireGaussian,
            alpha_defaults: vec![0.0],
        },
        Entry {
            name: "gauss_sin",
            description: "exp(-x^2) sin x",
            f: |z| (-z * z).exp() * z.sin(),
            singularities: vec![],
            beta: 0.0,
            growth_class: EntireGaussian,
            alpha_defaults: vec![0.0],
        },
        Entry {
            name: "gauss_cos",
            description: "exp(-x^2) cos x",
            f: |z| (-z * z).exp() * z.cos(),
            singularities: vec![],
            beta: 0.0,
            growth_class: EntireGaussian,
            alpha_defaults: vec![0.0],
        },
        Entry {
            name: "one",
            description: "1",
            f: |_| c(1.0, 0.0),
            singularities: vec![],
            beta: 0.0,
            growth_class: EntireExponential,
            alpha_defaults: vec![0.0],
        },
    ]
    .into_iter()
    .map(build)
    .collect()
});

static PAIRS: LazyLock<Vec<LaplacePair>> = LazyLock::new(|| {
    vec![
        LaplacePair {
            name: "recip1p".into(),
            description: "f(t) = 1/(t+1), F(s) = exp(s) E1(s)".into(),
            transform: Arc::new(exp_e1),
            exact: Some(Arc::new(|t| 1.0 / (t + 1.0))),
            sigma0: 0.0,
            singularities: vec![c(-1.0, 0.0)],
            growth_rate: 0.0,
            default_sigma: 1.0,
            default_nu: 2.0,
        },
        LaplacePair {
            name: "exp".into(),
            description: "f(t) = exp(-t), F(s) = 1/(s+1)".into(),
            transform: Arc::new(|s| 1.0 / (s + 1.0)),
            exact: Some(Arc::new(|t: f64| (-t).exp())),
            sigma0: -1.0,
            singularities: vec![],
            growth_rate: -1.0,
            default_sigma: 1.0,
            default_nu: 2.0,
        },
        LaplacePair {
            name: "unit".into(),
            description: "f(t) = 1, F(s) = 1/s; one basis term at sigma = nu/2".into(),
            transform: Arc::new(|s| 1.0 / s),
            exact: Some(Arc::new(|_| 1.0)),
            sigma0: 0.0,
            singularities: vec![],
            growth_rate: 0.0,
            default_sigma: 1.0,
            default_nu: 2.0,
        },
    ]
});

pub fn function_names() -> Vec<&'static str> {
    FUNCTIONS.iter().map(|f| f.name.as_str()).collect()
}

pub fn laplace_pair_names() -> Vec<&'static str> {
    PAIRS.iter().map(|p| p.name.as_str()).collect()
}

pub fn functions() -> &'static [FunctionSpec] {
    &FUNCTIONS
}

pub fn laplace_pairs() -> &'static [LaplacePair] {
    &PAIRS
}

pub fn get_function(name: &str) -> Result<FunctionSpec> {
    FUNCTIONS.iter().find(|f| f.name == name).cloned().ok_or_else(|| Error::UnknownName {
        name: name.into(),
        available: function_names().iter().map(|s| s.to_string()).collect(),
    })
}

pub fn get_laplace_pair(name: &str) -> Result<LaplacePair> {
    PAIRS.iter().find(|p| p.name == name).cloned().ok_or_else(|| Error::UnknownName {
        name: name.into(),
        available: laplace_pair_names().iter().map(|s| s.to_string()).collect(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quadrature::gauss_laguerre;
    use approx::assert_relative_eq;

    #[test]
    fn lookup() {
        let f1 = get_function("f1").unwrap();
        assert_eq!(f1.singularities, vec![c(-1.0, 0.0)]);
        assert_eq!(f1.beta, -1.0);
        assert_eq!(get_function("f3").unwrap().rho, Some(2.0));
        match get_function("bogus") {
            Err(Error::UnknownName { available, .. }) => assert!(available.iter().any(|n| n == "f1")),
            other => panic!("{other:?}"),
        }
        assert!(get_laplace_pair("bogus").is_err());
    }

    #[test]
    fn recorded_rho_matches_singularities() {
        let expected = [("f1", 1.0), ("f2", 1.5), ("f3", 2.0), ("glf2", 1.0), ("recip_sq9", 1.5f64.sqrt())];
        for (name, rho) in expected {
            assert_relative_eq!(get_function(name).unwrap().rho.unwrap(), rho, max_relative = 1e-12);
        }
        for f in functions() {
            if let Some(rho) = f.rho {
                assert!((rho_from_singularities(&f.singularities).unwrap() - rho).abs() <= 1e-12);
            } else {
                assert!(f.growth_class.is_entire(), "{}", f.name);
            }
        }
    }

    #[test]
    fn real_and_complex_agree() {
        for f in functions() {
            for &x in &[0.0, 0.3, 2.0, 17.0] {
                let a = f.eval(x);
                let b = f.eval_complex(c(x, 0.0)).unwrap();
                assert_eq!(a, b.re);
                assert!(b.im.abs() <= 1e-300, "{}", f.name);
            }
        }
    }

    #[test]
    fn sech_is_robust() {
        assert_relative_eq!(sech(c(0.0, 0.0)).re, 1.0);
        assert_relative_eq!(sech(c(1.0, 0.0)).re, 1.0 / 1f64.cosh(), max_relative = 1e-15);
        assert_relative_eq!(sech(c(-1.0, 0.0)).re, 1.0 / 1f64.cosh(), max_relative = 1e-15);
        assert_eq!(sech(c(800.0, 3.0)), c(0.0, 0.0));
        let w = c(0.4, 1.1);
        assert!((sech(w) - 1.0 / w.cosh()).norm() < 1e-15);
    }

    #[test]
    fn pair_examples() {
        let p = get_laplace_pair("recip1p").unwrap();
        assert_relative_eq!(p.eval_transform(c(2.0, 0.0)).re, 0.361_328_616_888_222_5, max_relative = 1e-12);
        assert_eq!(p.sigma0, 0.0);
        assert_eq!(get_laplace_pair("exp").unwrap().eval_transform(c(0.0, 0.0)), c(1.0, 0.0));
    }

    #[test]
    fn forward_laplace_transform() {
        // int_0^inf e^{-s t} f(t) dt = (1/s) int_0^inf e^{-u} f(u/s) du
        let rule = gauss_laguerre(0.0, 400).unwrap();
        for p in laplace_pairs() {
            let f = p.exact.as_ref().unwrap();
            for &s in &[0.5, 1.0, 2.0, 3.5, 7.0] {
                if s <= p.sigma0 {
                    continue;
                }
                let num: f64 = rule.nodes().iter().zip(rule.weights()).map(|(u, w)| w * f(u / s)).sum::<f64>() / s;
                let want = p.eval_transform(c(s, 0.0)).re;
                assert!((num - want).abs() <= 1e-8 * want.abs(), "{} at s={s}: {num} vs {want}", p.name);
            }
        }
    }
}
