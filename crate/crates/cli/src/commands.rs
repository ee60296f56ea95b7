use std::fs;
use std::io::Write as _;

use laguerre_core::interpolation::interpolate;
use laguerre_core::projection::project;
use laguerre_core::quadrature::{gauss_laguerre, gauss_radau};
use laguerre_core::registry::{functions, get_function, get_laplace_pair, laplace_pairs};
use laguerre_core::sweep::{
    coefficient_curve, degrees, derivative_curve, interpolation_curve, projection_max_curve, projection_weighted_curve,
    quadrature_curve, reference_degree, weeks_curve, ErrorCurve,
};
use laguerre_core::verify::{contour_coefficient, predicted_rate, RateMode};
use laguerre_core::weeks::WeeksApproximant;
use laguerre_core::{BasisParams, Form, FunctionSpec, LaplacePair, PointKind, RateFit, RuleKind, WeeksParams};
use serde_json::json;

use crate::table::{num, Cell, Table};
use crate::{Cli, Command, FitArg, Failure, FormArg, ModeArg, NormArg, PointsArg, RangeArgs, RateArgs, RuleArg};

type Outcome<T> = std::result::Result<T, Failure>;

/// Contour panels for the oracle subcommand.
const ORACLE_PANELS: usize = 200;

impl From<FormArg> for Form {
    fn from(f: FormArg) -> Self {
        match f {
            FormArg::Poly => Form::Polynomial,
            FormArg::Glf => Form::Function,
        }
    }
}

impl From<RuleArg> for RuleKind {
    fn from(k: RuleArg) -> Self {
        match k {
            RuleArg::Gauss => RuleKind::Gauss,
            RuleArg::Radau => RuleKind::Radau,
        }
    }
}

impl From<PointsArg> for PointKind {
    fn from(k: PointsArg) -> Self {
        match k {
            PointsArg::Laguerre => PointKind::Laguerre,
            PointsArg::Radau => PointKind::Radau,
        }
    }
}

fn form_name(f: Form) -> &'static str {
    match f {
        Form::Polynomial => "poly",
        Form::Function => "glf",
    }
}

pub fn run(cli: &Cli) -> Outcome<()> {
    let (table, gate) = match &cli.command {
        Command::Nodes { alpha, n, kind } => (nodes(*alpha, *n, *kind)?, true),
        Command::Coeffs { function, alpha, nmax, nu, form } => (coeffs(function, *alpha, *nmax, *nu, (*form).into())?, true),
        Command::Project { function, alpha, nmax, norm, nu, form, range } => {
            (project_errors(function, *alpha, *nmax, *norm, *nu, *form, range)?, true)
        }
        Command::Interp { function, alpha, points, form, nmax, at, range } => {
            let f = get_function(function)?;
            let t = if at.is_empty() {
                interp_errors(&f, *alpha, (*points).into(), (*form).into(), *nmax, range)?
            } else {
                interp_values(&f, *alpha, (*points).into(), (*form).into(), *nmax, at)?
            };
            (t, true)
        }
        Command::Quad { function, alpha, nmax, kind, range } => {
            let f = get_function(function)?;
            let ns = sweep_degrees(range, *nmax)?;
            let mut t = curve_table("quad", &quadrature_curve(&f, *alpha, (*kind).into(), &ns)?);
            t.meta("fn", f.name.as_str());
            t.meta("alpha", num(*alpha));
            t.meta("kind", if *kind == RuleArg::Gauss { "gauss" } else { "radau" });
            (t, true)
        }
        Command::Diff { function, alpha, m, nmax, range } => {
            let f = get_function(function)?;
            let ns = sweep_degrees(range, *nmax)?;
            let mut t = curve_table("diff", &derivative_curve(&f, *alpha, *m, &ns)?);
            t.meta("fn", f.name.as_str());
            t.meta("alpha", num(*alpha));
            t.meta("m", *m);
            (t, true)
        }
        Command::Weeks { pair, sigma, nu, n, t } => (weeks(pair, *sigma, *nu, *n, t)?, true),
        Command::Rate(args) => rate(args)?,
        Command::Oracle { function, k, rho, alpha } => (oracle(function, *k, *rho, *alpha)?, true),
        Command::List => (list(), true),
    };
    emit(cli, &table)?;
    if gate {
        Ok(())
    } else {
        Err(Failure::OutOfTolerance)
    }
}

fn emit(cli: &Cli, table: &Table) -> Outcome<()> {
    let text = if cli.output.json { table.to_json() } else { table.to_csv() };
    match &cli.output.out {
        Some(path) => fs::write(path, text).map_err(|e| Failure::Io(format!("cannot write {}: {e}", path.display()))),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes()).and_then(|_| out.flush()).map_err(|e| Failure::Io(e.to_string()))
        }
    }
}

fn sweep_degrees(range: &RangeArgs, nmax: usize) -> Outcome<Vec<usize>> {
    if range.nmin > nmax {
        return Err(Failure::Usage(format!("--nmin {} exceeds --nmax {nmax}", range.nmin)));
    }
    if range.step == 0 {
        return Err(Failure::Usage("--step must be positive".into()));
    }
    Ok(degrees(range.nmin, nmax, range.step))
}

fn curve_table(command: &str, curve: &ErrorCurve) -> Table {
    let mut t = Table::new(command, &["n", "error"]);
    for (&n, &e) in curve.ns.iter().zip(&curve.errors) {
        t.push(vec![n.into(), e.into()]);
    }
    t
}

fn nodes(alpha: f64, n: usize, kind: RuleArg) -> Outcome<Table> {
    let rule = match kind {
        RuleArg::Gauss => gauss_laguerre(alpha, n)?,
        RuleArg::Radau => gauss_radau(alpha, n)?,
    };
    let mut t = Table::new("nodes", &["index", "node", "weight"]);
    for (j, (&x, &w)) in rule.nodes().iter().zip(rule.weights()).enumerate() {
        t.push(vec![j.into(), x.into(), w.into()]);
    }
    t.meta("alpha", num(alpha));
    t.meta("kind", if kind == RuleArg::Gauss { "gauss" } else { "radau" });
    Ok(t)
}

fn coeffs(name: &str, alpha: f64, nmax: usize, nu: f64, form: Form) -> Outcome<Table> {
    let f = get_function(name)?;
    let params = BasisParams::new(alpha, form)?;
    let e = project(|x| f.eval(x), nmax, &params, nu, None)?;
    let mut t = Table::new("coeffs", &["n", "coefficient"]);
    for (k, &c) in e.coeffs().iter().enumerate() {
        t.push(vec![k.into(), c.into()]);
    }
    t.meta("fn", f.name.as_str());
    t.meta("alpha", num(alpha));
    t.meta("nu", num(nu));
    t.meta("form", form_name(form));
    Ok(t)
}

fn project_errors(
    name: &str,
    alpha: f64,
    nmax: usize,
    norm: NormArg,
    nu: f64,
    form: Option<FormArg>,
    range: &RangeArgs,
) -> Outcome<Table> {
    let f = get_function(name)?;
    let ns = sweep_degrees(range, nmax)?;
    let (curve, form) = match norm {
        NormArg::Weighted => {
            if form == Some(FormArg::Glf) || nu != 1.0 {
                return Err(Failure::Usage("the weighted norm is available for --form poly with --nu 1".into()));
            }
            (projection_weighted_curve(&f, alpha, &ns)?, Form::Polynomial)
        }
        NormArg::Max => {
            let form = form.unwrap_or(FormArg::Glf).into();
            (projection_max_curve(&f, alpha, form, nu, &ns)?, form)
        }
    };
    let mut t = curve_table("project", &curve);
    t.meta("fn", f.name.as_str());
    t.meta("alpha", num(alpha));
    t.meta("norm", if norm == NormArg::Max { "max" } else { "weighted" });
    t.meta("form", form_name(form));
    t.meta("nu", num(nu));
    Ok(t)
}

fn interp_errors(f: &FunctionSpec, alpha: f64, kind: PointKind, form: Form, nmax: usize, range: &RangeArgs) -> Outcome<Table> {
    let ns = sweep_degrees(range, nmax)?;
    let mut t = curve_table("interp", &interpolation_curve(f, alpha, kind, form, &ns)?);
    t.meta("fn", f.name.as_str());
    t.meta("alpha", num(alpha));
    t.meta("points", if kind == PointKind::Laguerre { "laguerre" } else { "radau" });
    t.meta("form", form_name(form));
    Ok(t)
}

fn interp_values(f: &FunctionSpec, alpha: f64, kind: PointKind, form: Form, n: usize, at: &[f64]) -> Outcome<Table> {
    if let Some(x) = at.iter().find(|x| !(x.is_finite() && **x >= 0.0)) {
        return Err(Failure::Usage(format!("evaluation points must be finite and >= 0, got {x}")));
    }
    let itp = interpolate(|x| f.eval(x), kind, form, alpha, n)?;
    let mut t = Table::new("interp", &["x", "value", "exact", "error", "extrapolated"]);
    for &x in at {
        let (v, e) = (itp.eval(x), f.eval(x));
        t.push(vec![x.into(), v.into(), e.into(), (e - v).abs().into(), itp.is_extrapolation(x).into()]);
    }
    t.meta("fn", f.name.as_str());
    t.meta("alpha", num(alpha));
    t.meta("n", n);
    t.meta("largest_node", num(*itp.points().last().unwrap_or(&0.0)));
    Ok(t)
}

fn weeks_params(pair: &LaplacePair, sigma: Option<f64>, nu: Option<f64>, n: usize) -> Outcome<WeeksParams> {
    Ok(WeeksParams::new(sigma.unwrap_or(pair.default_sigma), nu.unwrap_or(pair.default_nu), n)?)
}

fn weeks(name: &str, sigma: Option<f64>, nu: Option<f64>, n: usize, ts: &[f64]) -> Outcome<Table> {
    let pair = get_laplace_pair(name)?;
    let params = weeks_params(&pair, sigma, nu, n)?;
    if let Some(t) = ts.iter().find(|t| !(t.is_finite() && **t >= 0.0)) {
        return Err(Failure::Usage(format!("times must be finite and >= 0, got {t}")));
    }
    let approx = WeeksApproximant::new(&pair, &params)?;
    let mut t = Table::new("weeks", &["t", "approximation", "exact", "error"]);
    for &time in ts {
        let v = approx.eval(time)?;
        let exact = pair.eval_exact(time);
        t.push(vec![time.into(), v.into(), exact.into(), exact.map(|e| (e - v).abs()).into()]);
    }
    t.meta("pair", pair.name.as_str());
    t.meta("sigma", num(params.sigma));
    t.meta("nu", num(params.nu));
    t.meta("n", n);
    Ok(t)
}

fn require<'a>(value: &'a Option<String>, flag: &str, mode: &str) -> Outcome<&'a str> {
    value.as_deref().ok_or_else(|| Failure::Usage(format!("--mode {mode} requires --{flag}")))
}

/// Error curve and predicted `(sqrt_slope, log_power)` for a rate request.
fn rate_curve(args: &RateArgs, ns: &[usize]) -> Outcome<(ErrorCurve, (f64, f64), serde_json::Map<String, serde_json::Value>)> {
    let mut meta = serde_json::Map::new();
    meta.insert("alpha".into(), num(args.alpha));
    if args.mode == ModeArg::Weeks {
        let pair = get_laplace_pair(require(&args.pair, "pair", "weeks")?)?;
        let params = weeks_params(&pair, args.sigma, args.nu, 0)?;
        let rho = pair
            .rho_t()
            .ok_or_else(|| Failure::Numerical(format!("pair `{}` has no singularities to predict a rate from", pair.name)))?;
        let curve = weeks_curve(&pair, params.sigma, params.nu, ns, &[args.t])?.curve(0);
        meta.insert("pair".into(), json!(pair.name));
        meta.insert("sigma".into(), num(params.sigma));
        meta.insert("nu".into(), num(params.nu));
        meta.insert("t".into(), num(args.t));
        return Ok((curve, (2.0 * rho * params.nu.sqrt(), 0.25), meta));
    }
    let f = get_function(require(&args.function, "fn", "this mode")?)?;
    meta.insert("fn".into(), json!(f.name));
    let nu = args.nu.unwrap_or(1.0);
    let (curve, mode) = match args.mode {
        ModeArg::Coeff => {
            let full = coefficient_curve(&f, args.alpha, Form::Polynomial, 1.0, args.nmax)?;
            let curve = ErrorCurve {
                ns: ns.to_vec(),
                errors: ns.iter().map(|&n| full.errors[n]).collect(),
            };
            (curve, RateMode::Coeff)
        }
        ModeArg::ProjWeighted => (projection_weighted_curve(&f, args.alpha, ns)?, RateMode::ProjWeighted),
        ModeArg::ProjMax => (projection_max_curve(&f, args.alpha, Form::Function, 1.0, ns)?, RateMode::ProjMax),
        ModeArg::Interp => {
            meta.insert("points".into(), json!(if args.points == PointsArg::Laguerre { "laguerre" } else { "radau" }));
            (interpolation_curve(&f, args.alpha, args.points.into(), Form::Polynomial, ns)?, RateMode::Interp)
        }
        ModeArg::Quad => (quadrature_curve(&f, args.alpha, RuleKind::Gauss, ns)?, RateMode::Quad),
        ModeArg::Diff => {
            meta.insert("m".into(), json!(args.m));
            (derivative_curve(&f, args.alpha, args.m, ns)?, RateMode::Diff { m: args.m })
        }
        ModeArg::Scaled => {
            meta.insert("nu".into(), num(nu));
            (projection_max_curve(&f, args.alpha, Form::Function, nu, ns)?, RateMode::Scaled { nu })
        }
        ModeArg::Weeks => unreachable!("handled above"),
    };
    Ok((curve, predicted_rate(&f, args.alpha, mode)?, meta))
}

/// Returns the table and whether the fitted slope is within tolerance.
fn rate(args: &RateArgs) -> Outcome<(Table, bool)> {
    if !(args.tol.is_finite() && args.tol > 0.0) {
        return Err(Failure::Usage(format!("--tol must be positive, got {}", args.tol)));
    }
    let range = RangeArgs { nmin: args.nmin, step: args.step };
    let ns = sweep_degrees(&range, args.nmax)?;
    let (curve, (slope, power), meta) = rate_curve(args, &ns)?;
    let fit: RateFit = match args.fit {
        FitArg::Envelope => curve.fit_envelope(args.floor, power)?,
        FitArg::Free => curve.fit(args.floor)?,
    };
    let rel = (fit.sqrt_slope - slope).abs() / slope;
    let pass = rel <= args.tol;

    // predicted model anchored to the same points in least squares
    let fitted = if args.fit == FitArg::Envelope { curve.envelope() } else { curve.clone() };
    let used: Vec<(f64, f64)> = fitted
        .ns
        .iter()
        .zip(&fitted.errors)
        .filter(|(&n, &e)| (fit.n_range.0..=fit.n_range.1).contains(&n) && e > args.floor)
        .map(|(&n, &e)| (n as f64, e.ln()))
        .collect();
    let intercept = used.iter().map(|(n, y)| y + slope * n.sqrt() - power * n.ln()).sum::<f64>() / used.len() as f64;

    let mut t = Table::new("rate", &["n", "error", "predicted"]);
    for (&n, &e) in curve.ns.iter().zip(&curve.errors) {
        let x = n as f64;
        let model = if n == 0 { f64::NAN } else { (intercept + power * x.ln() - slope * x.sqrt()).exp() };
        t.push(vec![n.into(), e.into(), model.into()]);
    }
    t.meta = meta;
    t.meta("mode", format!("{:?}", args.mode).to_lowercase());
    t.meta("fit_method", if args.fit == FitArg::Envelope { "envelope" } else { "free" });
    t.meta(
        "fit",
        json!({
            "sqrt_slope": num(fit.sqrt_slope),
            "log_power": num(fit.log_power),
            "intercept": num(fit.intercept),
            "residual": num(fit.residual),
            "n_min": fit.n_range.0,
            "n_max": fit.n_range.1,
            "points": fit.points,
        }),
    );
    t.meta("predicted", json!({ "sqrt_slope": num(slope), "log_power": num(power) }));
    t.meta("relative_error", num(rel));
    t.meta("tolerance", num(args.tol));
    t.meta("pass", pass);
    eprintln!(
        "fitted slope {:.4} (power {:.3}, n {}..{}, {} points), predicted {:.4}: relative error {:.3} {} tolerance {}: {}",
        fit.sqrt_slope,
        fit.log_power,
        fit.n_range.0,
        fit.n_range.1,
        fit.points,
        slope,
        rel,
        if pass { "<=" } else { ">" },
        args.tol,
        if pass { "PASS" } else { "FAIL" }
    );
    Ok((t, pass))
}

fn oracle(name: &str, kmax: usize, rho: f64, alpha: f64) -> Outcome<Table> {
    let f = get_function(name)?;
    let params = BasisParams::polynomial(alpha)?;
    let reference = project(|x| f.eval(x), reference_degree(kmax), &params, 1.0, None)?;
    let mut t = Table::new("oracle", &["n", "contour", "projection", "error", "imag_residual"]);
    let mut warnings = Vec::new();
    for k in f.min_contour_degree()..=kmax {
        let est = contour_coefficient(&f, alpha, k, rho, None, ORACLE_PANELS)?;
        let a = reference.coeffs()[k];
        t.push(vec![k.into(), est.value.into(), a.into(), (est.value - a).abs().into(), est.imag_residual.into()]);
        if let Some(w) = est.warning {
            warnings.push(json!(format!("k = {k}: {w}")));
        }
    }
    t.meta("fn", f.name.as_str());
    t.meta("alpha", num(alpha));
    t.meta("rho", num(rho));
    t.meta("projection_degree", reference_degree(kmax));
    t.meta("warnings", warnings);
    Ok(t)
}

/// Space-separated `re+imi` values.
fn singularity_list(s: impl Iterator<Item = (f64, f64)>) -> String {
    s.map(|(re, im)| format!("{re}{im:+}i")).collect::<Vec<_>>().join(" ")
}

fn list() -> Table {
    let mut t = Table::new(
        "list",
        &["name", "kind", "description", "rho", "beta", "growth_class", "sigma0", "singularities"],
    );
    for f in functions() {
        t.push(vec![
            f.name.as_str().into(),
            "function".into(),
            f.description.as_str().into(),
            f.rho.into(),
            f.beta.into(),
            f.growth_class.as_str().into(),
            Cell::Missing,
            singularity_list(f.singularities.iter().map(|z| (z.re, z.im))).into(),
        ]);
    }
    for p in laplace_pairs() {
        t.push(vec![
            p.name.as_str().into(),
            "laplace_pair".into(),
            p.description.as_str().into(),
            p.rho_t().into(),
            Cell::Missing,
            Cell::Missing,
            p.sigma0.into(),
            singularity_list(p.singularities.iter().map(|z| (z.re, z.im))).into(),
        ]);
    }
    t
}
