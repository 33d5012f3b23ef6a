use std::f64::consts::{PI, TAU};
use std::fmt;
use std::sync::Arc;

use nalgebra::DMatrix;
use num_complex::Complex64;

use super::GalerkinOperator;
use crate::error::{Error, Result};
use crate::geometry::{Domain, PolarRule, QuadratureSpec, RadialMeasure, RuleHints, Weight};
use crate::quadrature::GaussLegendre;
use crate::special_fn::{ln_gamma, regularized_lower_gamma};

type C64 = Complex64;
type RadialFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;
type PlaneFn = Arc<dyn Fn(C64) -> f64 + Send + Sync>;

/// Bounded symbol on the plane:
/// `sigma(r e^{i theta}) = sigma_0(r) + sigma_1(r) (e^{i p theta} + e^{-i p theta}) + general(z)`.
#[derive(Clone)]
pub struct SymbolFn {
    pub radial: RadialFn,
    /// `(sigma_1, p)`; `None` for purely radial symbols.
    pub oscillating: Option<(RadialFn, usize)>,
    pub general: Option<PlaneFn>,
    /// Radii where `sigma_0` or `sigma_1` jump; quadrature panels split there.
    pub radial_breaks: Vec<f64>,
    pub label: String,
}

impl fmt::Debug for SymbolFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("SymbolFn")
            .field("label", &self.label)
            .field("angular_order", &self.angular_order())
            .field("radial_breaks", &self.radial_breaks)
            .finish()
    }
}

impl SymbolFn {
    pub fn radial(
        profile: impl Fn(f64) -> f64 + Send + Sync + 'static,
        breaks: Vec<f64>,
        label: impl Into<String>,
    ) -> Self {
        SymbolFn {
            radial: Arc::new(profile),
            oscillating: None,
            general: None,
            radial_breaks: breaks,
            label: label.into(),
        }
    }

    /// `angular_order` p, or 0 for radial symbols.
    pub fn angular_order(&self) -> usize {
        self.oscillating.as_ref().map(|(_, p)| *p).unwrap_or(0)
    }

    pub fn eval(&self, z: C64) -> f64 {
        let r = z.norm();
        let mut v = (self.radial)(r);
        if let Some((s1, p)) = &self.oscillating {
            v += 2.0 * s1(r) * (*p as f64 * z.arg()).cos();
        }
        if let Some(g) = &self.general {
            v += g(z);
        }
        v
    }
}

/// `lambda_n = (pi^n/n!) 2 pi int_0^inf profile(r) r^{2n+1} e^{-pi r^2} dr`.
pub fn radial_symbol_spectrum(
    profile: impl Fn(f64) -> f64,
    breaks: &[f64],
    size: usize,
    quad: &QuadratureSpec,
) -> Result<Vec<f64>> {
    quad.validate()?;
    let eval = |nodes: usize| -> Vec<f64> {
        let cap = RadialMeasure::FockGaussian.radial_cutoff(2 * size);
        let rule = GaussLegendre::new(nodes);
        let mut edges = vec![0.0, cap];
        edges.extend(breaks.iter().copied().filter(|&b| b > 0.0 && b < cap));
        edges.sort_by(f64::total_cmp);
        let mut out = vec![0.0; size];
        for e in edges.windows(2) {
            let pieces = ((e[1] - e[0]) / 0.25).ceil().max(1.0) as usize;
            for p in 0..pieces {
                let a = e[0] + (e[1] - e[0]) * p as f64 / pieces as f64;
                let b = e[0] + (e[1] - e[0]) * (p + 1) as f64 / pieces as f64;
                for (r, w) in rule.on_interval(a, b) {
                    let s = profile(r);
                    if s == 0.0 {
                        continue;
                    }
                    let base = (TAU * w * r).ln() - PI * r * r;
                    for (n, acc) in out.iter_mut().enumerate() {
                        let nf = n as f64;
                        *acc += s
                            * (base + nf * PI.ln() - ln_gamma(nf + 1.0) + 2.0 * nf * r.ln()).exp();
                    }
                }
            }
        }
        out
    };
    let mut nodes = quad.radial_nodes;
    let mut coarse = eval(nodes);
    let mut est = f64::INFINITY;
    for _ in 0..3 {
        nodes *= 2;
        let fine = eval(nodes);
        est = coarse
            .iter()
            .zip(&fine)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max);
        if est <= quad.target_abs_tol {
            return Ok(fine);
        }
        coarse = fine;
    }
    Err(Error::NonConvergence {
        estimate: est,
        tol: quad.target_abs_tol,
    })
}

/// Toeplitz matrix `M[m][n] = int sigma e_n conj(e_m) e^{-pi|z|^2} dz` by
/// full two-dimensional polar quadrature of the pointwise symbol.
pub fn assemble_symbol(
    symbol: &SymbolFn,
    size: usize,
    quad: &QuadratureSpec,
) -> Result<GalerkinOperator> {
    quad.validate()?;
    if size == 0 {
        return Err(Error::domain(
            "assemble_symbol",
            "basis size must be positive",
        ));
    }
    let hints = RuleHints {
        max_freq: 2 * size + symbol.angular_order(),
        radial_breaks: symbol.radial_breaks.clone(),
    };
    let q = quad.with_degree(quad.max_degree.max(2 * size));
    let evaluate = |q: &QuadratureSpec| -> Result<DMatrix<C64>> {
        let rule = PolarRule::new(
            &Domain::Plane,
            Weight::Measure(RadialMeasure::FockGaussian),
            q,
            &hints,
        )?;
        let half_norm: Vec<f64> = (0..size)
            .map(|n| 0.5 * RadialMeasure::FockGaussian.ln_basis_norm_sq(n))
            .collect();
        let mut acc = DMatrix::from_element(size, size, C64::new(0.0, 0.0));
        let mut per_ray = DMatrix::from_element(size, size, 0.0f64);
        let mut g = vec![0.0; size];
        for ray in &rule.rays {
            per_ray.fill(0.0);
            let e = C64::from_polar(1.0, ray.theta);
            for node in &ray.radial {
                let s = symbol.eval(e * node.r);
                if s == 0.0 {
                    continue;
                }
                let lr = node.r.ln();
                for (n, gn) in g.iter_mut().enumerate() {
                    *gn = (half_norm[n] + n as f64 * lr + 0.5 * node.ln_w).exp();
                }
                for m in 0..size {
                    for n in m..size {
                        per_ray[(m, n)] += s * g[m] * g[n];
                    }
                }
            }
            for m in 0..size {
                for n in m..size {
                    acc[(m, n)] += C64::from_polar(
                        ray.weight * per_ray[(m, n)],
                        (n as f64 - m as f64) * ray.theta,
                    );
                }
            }
        }
        for m in 0..size {
            for n in 0..m {
                acc[(m, n)] = acc[(n, m)].conj();
            }
        }
        Ok(acc)
    };
    let mut qq = q;
    let mut coarse = evaluate(&qq)?;
    let mut est = f64::INFINITY;
    for _ in 0..3 {
        qq = QuadratureSpec {
            radial_nodes: 2 * qq.radial_nodes,
            angular_nodes: 2 * qq.angular_nodes,
            ..qq
        };
        let fine = evaluate(&qq)?;
        est = (&fine - &coarse)
            .iter()
            .map(|x| x.norm())
            .fold(0.0, f64::max);
        if est <= quad.target_abs_tol {
            return GalerkinOperator::new(
                fine,
                RadialMeasure::FockGaussian,
                format!("symbol {}", symbol.label),
                est,
            );
        }
        coarse = fine;
    }
    Err(Error::NonConvergence {
        estimate: est,
        tol: quad.target_abs_tol,
    })
}

/// Support `[a, b]` and split point `c` of the counterexample's `sigma_1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CounterexampleSupport {
    pub a: f64,
    pub c: f64,
    pub b: f64,
}

impl Default for CounterexampleSupport {
    fn default() -> Self {
        CounterexampleSupport {
            a: 0.3,
            c: 0.9,
            b: 1.5,
        }
    }
}

/// `int_lo^hi r^q e^{-pi r^2} dr` via the incomplete gamma function.
fn gaussian_power_integral(q: f64, lo: f64, hi: f64) -> Result<f64> {
    let s = 0.5 * (q + 1.0);
    let p_hi = regularized_lower_gamma(s, PI * hi * hi)?;
    let p_lo = regularized_lower_gamma(s, PI * lo * lo)?;
    Ok(0.5 * (ln_gamma(s) - s * PI.ln()).exp() * (p_hi - p_lo))
}

fn bisect(f: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64, tol: f64) -> Result<f64> {
    let (mut flo, fhi) = (f(lo), f(hi));
    if flo == 0.0 {
        return Ok(lo);
    }
    if fhi == 0.0 {
        return Ok(hi);
    }
    if flo.signum() == fhi.signum() {
        return Err(Error::RootNotBracketed { lo, hi });
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        let fm = f(mid);
        if fm == 0.0 || (hi - lo) < tol * mid.abs().max(1.0) {
            return Ok(mid);
        }
        if fm.signum() == flo.signum() {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Nonnegative, non-radial symbol whose Toeplitz operator has `e_{N}` as an
/// eigenvector: `sigma_1 = 1` on `[a, c)`, `-beta` on `[c, b]`, with `beta`
/// chosen so that `int sigma_1(r) r^{3N+2} e^{-pi r^2} dr = 0`; `sigma_0 = 2 max|sigma_1|`
/// on `[a, b]`; angular order `N + 1`.
pub fn build_counterexample_symbol(
    target: usize,
    support: CounterexampleSupport,
) -> Result<SymbolFn> {
    let CounterexampleSupport { a, b, .. } = support;
    if !(0.0 < a && a < b) || !(a < support.c && support.c < b) {
        return Err(Error::domain(
            "build_counterexample_symbol",
            format!("need 0 < a < c < b, got {support:?}"),
        ));
    }
    let q = 3.0 * target as f64 + 2.0;
    let mut c = support.c;
    let mut attempt = 0;
    let beta = loop {
        let inner = gaussian_power_integral(q, a, c)?;
        let outer = gaussian_power_integral(q, c, b)?;
        let moment = |beta: f64| inner - beta * outer;
        let mut hi = 1.0;
        let mut bracket = None;
        for _ in 0..60 {
            if moment(hi) < 0.0 {
                bracket = Some(hi);
                break;
            }
            hi *= 2.0;
        }
        let found = match bracket {
            Some(hi) if inner > 0.0 => bisect(moment, 0.0, hi, 1e-15),
            _ => Err(Error::RootNotBracketed { lo: 0.0, hi }),
        };
        match found {
            Ok(beta) => break beta,
            Err(e) if attempt >= 4 => return Err(e),
            Err(_) => {
                // widen the inner segment
                attempt += 1;
                c = 0.5 * (c + b);
            }
        }
    };
    let sup = beta.max(1.0);
    let sigma1 = move |r: f64| {
        if r >= a && r < c {
            1.0
        } else if r >= c && r <= b {
            -beta
        } else {
            0.0
        }
    };
    let sigma0 = move |r: f64| if r >= a && r <= b { 2.0 * sup } else { 0.0 };
    Ok(SymbolFn {
        radial: Arc::new(sigma0),
        oscillating: Some((Arc::new(sigma1), target + 1)),
        general: None,
        radial_breaks: vec![a, c, b],
        label: format!("counterexample N={target} support=[{a}, {c}, {b}] beta={beta:.12}"),
    })
}
