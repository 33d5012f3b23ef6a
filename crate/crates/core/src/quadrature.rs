//! One-dimensional quadrature rules: Gauss-Legendre nodes and an adaptive
//! Gauss-Kronrod (7/15) integrator.

use std::f64::consts::PI;

use crate::error::{Error, Result};

/// Gauss-Legendre rule on `[-1, 1]`.
#[derive(Debug, Clone)]
pub struct GaussLegendre {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl GaussLegendre {
    pub fn new(n: usize) -> Self {
        assert!(n >= 1, "Gauss-Legendre rule needs at least one node");
        let mut nodes = vec![0.0; n];
        let mut weights = vec![0.0; n];
        let nf = n as f64;
        for i in 0..n.div_ceil(2) {
            // Tricomi initial guess, then Newton on P_n
            let mut x = ((i as f64 + 0.75) / (nf + 0.5) * PI).cos();
            let mut dp = 1.0;
            for _ in 0..100 {
                let (p, d) = legendre_with_derivative(n, x);
                dp = d;
                let dx = p / d;
                x -= dx;
                if dx.abs() < 1e-16 {
                    break;
                }
            }
            let (_, d) = legendre_with_derivative(n, x);
            dp = if d != 0.0 { d } else { dp };
            let w = 2.0 / ((1.0 - x * x) * dp * dp);
            nodes[i] = -x;
            nodes[n - 1 - i] = x;
            weights[i] = w;
            weights[n - 1 - i] = w;
        }
        if n % 2 == 1 {
            nodes[n / 2] = 0.0;
        }
        GaussLegendre { nodes, weights }
    }

    /// Nodes and weights mapped affinely onto `[a, b]`.
    pub fn on_interval(&self, a: f64, b: f64) -> impl Iterator<Item = (f64, f64)> + '_ {
        let half = 0.5 * (b - a);
        let mid = 0.5 * (a + b);
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(move |(&x, &w)| (mid + half * x, half * w))
    }

    pub fn integrate(&self, f: impl Fn(f64) -> f64, a: f64, b: f64) -> f64 {
        self.on_interval(a, b).map(|(x, w)| w * f(x)).sum()
    }
}

fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let p = if n == 0 { 1.0 } else { p1 };
    let prev = if n == 0 { 0.0 } else { p0 };
    let d = n as f64 * (x * p - prev) / (x * x - 1.0);
    (p, d)
}

// Gauss-Kronrod 7/15 abscissae and weights on [-1, 1].
const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_8,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

fn gk15<T>(f: &impl Fn(f64) -> T, a: f64, b: f64) -> (T, f64)
where
    T: Copy
        + std::ops::Add<Output = T>
        + std::ops::Mul<f64, Output = T>
        + std::ops::Sub<Output = T>
        + Norm,
{
    let half = 0.5 * (b - a);
    let mid = 0.5 * (a + b);
    let fc = f(mid);
    let mut kron = fc * WGK[7];
    let mut gauss = fc * WG[3];
    for j in 0..7 {
        let dx = half * XGK[j];
        let s = f(mid - dx) + f(mid + dx);
        kron = kron + s * WGK[j];
        if j % 2 == 1 {
            gauss = gauss + s * WG[j / 2];
        }
    }
    let k = kron * half;
    let g = gauss * half;
    (k, (k - g).norm())
}

/// Magnitude used by the adaptive integrator's error control.
pub trait Norm {
    fn norm(&self) -> f64;
}

impl Norm for f64 {
    fn norm(&self) -> f64 {
        self.abs()
    }
}

impl Norm for num_complex::Complex64 {
    fn norm(&self) -> f64 {
        num_complex::Complex64::norm(*self)
    }
}

/// Result of an adaptive integration.
#[derive(Debug, Clone, Copy)]
pub struct Adaptive<T> {
    pub value: T,
    pub err_estimate: f64,
}

/// Globally adaptive Gauss-Kronrod 7/15 integration over `[a, b]`.
pub fn adaptive_gk<T>(
    f: impl Fn(f64) -> T,
    a: f64,
    b: f64,
    abs_tol: f64,
    rel_tol: f64,
) -> Result<Adaptive<T>>
where
    T: Copy
        + std::ops::Add<Output = T>
        + std::ops::Mul<f64, Output = T>
        + std::ops::Sub<Output = T>
        + Norm,
{
    const MAX_SEGMENTS: usize = 4000;
    let (v, e) = gk15(&f, a, b);
    let mut segs = vec![(a, b, v, e)];
    loop {
        let total = segs.iter().skip(1).fold(segs[0].2, |acc, s| acc + s.2);
        let err: f64 = segs.iter().map(|s| s.3).sum();
        if err <= abs_tol.max(rel_tol * total.norm()) {
            return Ok(Adaptive {
                value: total,
                err_estimate: err,
            });
        }
        if segs.len() >= MAX_SEGMENTS {
            return Err(Error::NonConvergence {
                estimate: err,
                tol: abs_tol.max(rel_tol * total.norm()),
            });
        }
        let (idx, _) = segs
            .iter()
            .enumerate()
            .max_by(|x, y| x.1 .3.total_cmp(&y.1 .3))
            .expect("nonempty");
        let (lo, hi, _, _) = segs.swap_remove(idx);
        let m = 0.5 * (lo + hi);
        let (v1, e1) = gk15(&f, lo, m);
        let (v2, e2) = gk15(&f, m, hi);
        segs.push((lo, m, v1, e1));
        segs.push((m, hi, v2, e2));
    }
}
