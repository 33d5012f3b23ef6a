//! Special functions: Hermite functions, log-gamma, regularized incomplete
//! gamma and beta functions, Laguerre polynomials and Laguerre functions.
//!
//! Hermite functions follow the time-frequency convention
//! `h_0(t) = 2^{1/4} e^{-pi t^2}`, with `h_n` carrying a positive leading
//! coefficient. With that sign choice the Bargmann transform sends `h_n` to
//! the normalized monomial `sqrt(pi^n/n!) z^n` without extra phases.

use std::f64::consts::PI;

use crate::error::{Error, Result};

const EPS: f64 = 1e-16;
const TINY: f64 = 1e-300;
const MAX_ITER: usize = 5000;

/// Order of a Hermite function.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct HermiteIndex(pub usize);

impl From<usize> for HermiteIndex {
    fn from(n: usize) -> Self {
        HermiteIndex(n)
    }
}

/// L2-normalized Hermite function `h_n(t)`.
///
/// Evaluated by the three-term recurrence on the normalized functions, so no
/// factorials appear and the values stay finite for large `n`.
pub fn hermite_h(n: HermiteIndex, t: f64) -> f64 {
    debug_assert!(t.is_finite(), "hermite_h requires a finite argument");
    let n = n.0;
    let h0 = 2f64.powf(0.25) * (-PI * t * t).exp();
    if n == 0 {
        return h0;
    }
    let x = (2.0 * PI).sqrt() * t;
    let mut prev = 0.0;
    let mut cur = h0;
    for k in 0..n {
        let kf = k as f64;
        let next = (2.0 / (kf + 1.0)).sqrt() * x * cur - (kf / (kf + 1.0)).sqrt() * prev;
        prev = cur;
        cur = next;
    }
    cur
}

/// All Hermite functions `h_0(t), ..., h_{count-1}(t)` in one recurrence sweep.
pub fn hermite_all(count: usize, t: f64) -> Vec<f64> {
    let mut out = Vec::with_capacity(count);
    if count == 0 {
        return out;
    }
    let x = (2.0 * PI).sqrt() * t;
    let mut prev = 0.0;
    let mut cur = 2f64.powf(0.25) * (-PI * t * t).exp();
    out.push(cur);
    for k in 0..count - 1 {
        let kf = k as f64;
        let next = (2.0 / (kf + 1.0)).sqrt() * x * cur - (kf / (kf + 1.0)).sqrt() * prev;
        prev = cur;
        cur = next;
        out.push(cur);
    }
    out
}

// Lanczos approximation, g = 7, n = 9.
const LANCZOS_G: f64 = 7.0;
const LANCZOS_COEF: [f64; 9] = [
    0.999_999_999_999_809_9,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_1,
    -176.615_029_162_140_6,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_572e-6,
    1.505_632_735_149_311_6e-7,
];

/// Natural logarithm of `|Gamma(x)|`.
pub fn ln_gamma(x: f64) -> f64 {
    if x < 0.5 {
        // Reflection: Gamma(x) Gamma(1-x) = pi / sin(pi x)
        return (PI / (PI * x).sin().abs()).ln() - ln_gamma(1.0 - x);
    }
    if x == 1.0 || x == 2.0 {
        return 0.0;
    }
    let x = x - 1.0;
    let mut acc = LANCZOS_COEF[0];
    let t = x + LANCZOS_G + 0.5;
    for (i, c) in LANCZOS_COEF.iter().enumerate().skip(1) {
        acc += c / (x + i as f64);
    }
    0.5 * (2.0 * PI).ln() + (x + 0.5) * t.ln() - t + acc.ln()
}

/// `ln n!`, exact summation for small `n`.
pub fn ln_factorial(n: usize) -> f64 {
    if n < 32 {
        (2..=n).map(|k| (k as f64).ln()).sum()
    } else {
        ln_gamma(n as f64 + 1.0)
    }
}

/// `ln B(a, b)`.
pub fn ln_beta(a: f64, b: f64) -> f64 {
    ln_gamma(a) + ln_gamma(b) - ln_gamma(a + b)
}

/// Regularized lower incomplete gamma function `P(s, x) = gamma(s, x) / Gamma(s)`.
pub fn regularized_lower_gamma(s: f64, x: f64) -> Result<f64> {
    let (p, _) = incomplete_gamma_pair(s, x)?;
    Ok(p)
}

/// Regularized upper incomplete gamma function `Q(s, x) = 1 - P(s, x)`,
/// computed without cancellation.
pub fn regularized_upper_gamma(s: f64, x: f64) -> Result<f64> {
    let (_, q) = incomplete_gamma_pair(s, x)?;
    Ok(q)
}

fn incomplete_gamma_pair(s: f64, x: f64) -> Result<(f64, f64)> {
    if !(s > 0.0) || !s.is_finite() {
        return Err(Error::domain(
            "regularized_lower_gamma",
            format!("s = {s} must be > 0"),
        ));
    }
    if !(x >= 0.0) {
        return Err(Error::domain(
            "regularized_lower_gamma",
            format!("x = {x} must be >= 0"),
        ));
    }
    if x == 0.0 {
        return Ok((0.0, 1.0));
    }
    if x.is_infinite() {
        return Ok((1.0, 0.0));
    }
    let log_prefactor = -x + s * x.ln() - ln_gamma(s);
    if x < s + 1.0 {
        // series
        let mut term = 1.0 / s;
        let mut sum = term;
        let mut denom = s;
        for _ in 0..MAX_ITER {
            denom += 1.0;
            term *= x / denom;
            sum += term;
            if term.abs() < sum.abs() * EPS {
                break;
            }
        }
        let p = (sum.ln() + log_prefactor).exp().min(1.0);
        Ok((p, 1.0 - p))
    } else {
        // continued fraction for Q (modified Lentz)
        let mut b = x + 1.0 - s;
        let mut c = 1.0 / TINY;
        let mut d = 1.0 / b;
        let mut h = d;
        for i in 1..MAX_ITER {
            let an = -(i as f64) * (i as f64 - s);
            b += 2.0;
            d = an * d + b;
            if d.abs() < TINY {
                d = TINY;
            }
            c = b + an / c;
            if c.abs() < TINY {
                c = TINY;
            }
            d = 1.0 / d;
            let del = d * c;
            h *= del;
            if (del - 1.0).abs() < EPS {
                break;
            }
        }
        let q = (h.ln() + log_prefactor).exp().min(1.0);
        Ok((1.0 - q, q))
    }
}

/// Regularized incomplete beta function `I_x(a, b)`.
pub fn regularized_incomplete_beta(a: f64, b: f64, x: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&x) {
        return Err(Error::domain(
            "regularized_incomplete_beta",
            format!("x = {x} outside [0, 1]"),
        ));
    }
    incomplete_beta_split(a, b, x, 1.0 - x)
}

/// `I_x(a, b)` where the caller also supplies `y = 1 - x` computed without
/// cancellation (e.g. `(1 - r)(1 + r)` for `x = r^2`).
pub fn incomplete_beta_split(a: f64, b: f64, x: f64, y: f64) -> Result<f64> {
    if !(a > 0.0) || !(b > 0.0) {
        return Err(Error::domain(
            "regularized_incomplete_beta",
            format!("parameters a = {a}, b = {b} must be > 0"),
        ));
    }
    if !(0.0..=1.0).contains(&x) || !(0.0..=1.0).contains(&y) {
        return Err(Error::domain(
            "regularized_incomplete_beta",
            format!("x = {x} outside [0, 1]"),
        ));
    }
    if x == 0.0 {
        return Ok(0.0);
    }
    if y == 0.0 {
        return Ok(1.0);
    }
    let log_front = a * x.ln() + b * y.ln() - ln_beta(a, b);
    if x < (a + 1.0) / (a + b + 2.0) {
        Ok(((log_front).exp() * beta_cf(a, b, x) / a).clamp(0.0, 1.0))
    } else {
        Ok((1.0 - (log_front).exp() * beta_cf(b, a, y) / b).clamp(0.0, 1.0))
    }
}

fn beta_cf(a: f64, b: f64, x: f64) -> f64 {
    let qab = a + b;
    let qap = a + 1.0;
    let qam = a - 1.0;
    let mut c = 1.0;
    let mut d = 1.0 - qab * x / qap;
    if d.abs() < TINY {
        d = TINY;
    }
    d = 1.0 / d;
    let mut h = d;
    for m in 1..MAX_ITER {
        let m = m as f64;
        let m2 = 2.0 * m;
        let aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if d.abs() < TINY {
            d = TINY;
        }
        c = 1.0 + aa / c;
        if c.abs() < TINY {
            c = TINY;
        }
        d = 1.0 / d;
        h *= d * c;
        let aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if d.abs() < TINY {
            d = TINY;
        }
        c = 1.0 + aa / c;
        if c.abs() < TINY {
            c = TINY;
        }
        d = 1.0 / d;
        let del = d * c;
        h *= del;
        if (del - 1.0).abs() < EPS {
            break;
        }
    }
    h
}

/// Generalized Laguerre polynomial `L_n^alpha(x)` by the three-term recurrence.
pub fn laguerre_poly(n: usize, alpha: f64, x: f64) -> f64 {
    let mut prev = 1.0;
    if n == 0 {
        return prev;
    }
    let mut cur = 1.0 + alpha - x;
    for k in 1..n {
        let kf = k as f64;
        let next = ((2.0 * kf + 1.0 + alpha - x) * cur - (kf + alpha) * prev) / (kf + 1.0);
        prev = cur;
        cur = next;
    }
    cur
}

/// Laguerre function `l_n^alpha(x) = 1_{x >= 0} e^{-x/2} x^{alpha/2} L_n^alpha(x)`.
pub fn laguerre_fn(n: usize, alpha: f64, x: f64) -> f64 {
    if x < 0.0 {
        return 0.0;
    }
    if x == 0.0 {
        return if alpha > 0.0 {
            0.0
        } else if alpha == 0.0 {
            laguerre_poly(n, alpha, 0.0)
        } else {
            f64::INFINITY
        };
    }
    (-0.5 * x + 0.5 * alpha * x.ln()).exp() * laguerre_poly(n, alpha, x)
}

/// `h_n` sampled at each of `times`.
pub fn hermite_samples(n: usize, times: &[f64]) -> Vec<f64> {
    times
        .iter()
        .map(|&t| hermite_h(HermiteIndex(n), t))
        .collect()
}
