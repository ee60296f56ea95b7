//! Special functions needed by the rest of the crate: log-gamma and the
//! exponential integral E1 for complex argument.

use num_complex::Complex64;

const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

/// |s| at which E1 switches from the power series to the continued fraction.
pub const E1_SPLIT_RADIUS: f64 = 4.0;

pub fn ln_gamma(x: f64) -> f64 {
    statrs::function::gamma::ln_gamma(x)
}

pub fn gamma(x: f64) -> f64 {
    statrs::function::gamma::gamma(x)
}

/// E1(s) for complex s off the branch cut (-inf, 0].
pub fn e1(s: Complex64) -> Complex64 {
    if s.norm() <= E1_SPLIT_RADIUS {
        e1_series(s)
    } else {
        exp_e1_continued_fraction(s) * (-s).exp()
    }
}

/// e^s E1(s), the Laplace transform of 1/(t+1). Computed without forming
/// e^s separately when |s| is large.
pub fn exp_e1(s: Complex64) -> Complex64 {
    if s.norm() <= E1_SPLIT_RADIUS {
        e1_series(s) * s.exp()
    } else {
        exp_e1_continued_fraction(s)
    }
}

/// E1(s) = -gamma - ln s - sum_{k>=1} (-s)^k / (k k!)
pub fn e1_series(s: Complex64) -> Complex64 {
    let mut term = Complex64::new(1.0, 0.0);
    let mut sum = Complex64::new(0.0, 0.0);
    for k in 1..200 {
        let kf = k as f64;
        term = term * (-s) / kf;
        let contrib = term / kf;
        sum += contrib;
        if contrib.norm() <= 1e-17 * sum.norm() {
            break;
        }
    }
    -EULER_GAMMA - s.ln() - sum
}

/// e^s E1(s) by the even continued fraction
/// 1/(s+1- 1/(s+3- 4/(s+5- ...))), evaluated with modified Lentz.
pub fn exp_e1_continued_fraction(s: Complex64) -> Complex64 {
    let tiny = Complex64::new(1e-300, 0.0);
    let mut b = s + 1.0;
    let mut c = Complex64::new(1e300, 0.0);
    let mut d = b.inv();
    let mut h = d;
    for i in 1..5000 {
        let an = -((i * i) as f64);
        b += 2.0;
        d = an * d + b;
        if d.norm() < 1e-300 {
            d = tiny;
        }
        d = d.inv();
        c = b + an / c;
        if c.norm() < 1e-300 {
            c = tiny;
        }
        let del = c * d;
        h *= del;
        if (del - 1.0).norm() < 1e-16 {
            break;
        }
    }
    h
}
