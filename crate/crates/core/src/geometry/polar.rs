//! Tensor polar quadrature over `domain x measure`.
//!
//! Angles are split at the domain's angular breakpoints; on each ray the
//! radial integral runs over the exact sub-intervals inside the domain, so the
//! indicator never enters the integrand.

use std::f64::consts::{PI, TAU};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::{Domain, RadialMeasure};
use crate::error::{Error, Result};
use crate::quadrature::GaussLegendre;

type C64 = Complex64;

const MAX_REFINEMENTS: usize = 3;

/// Node counts and tolerance of a polar quadrature.
///
/// `radial_nodes` is the Gauss-Legendre order per radial panel and
/// `angular_nodes` the base order per angular panel.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct QuadratureSpec {
    pub radial_nodes: usize,
    pub angular_nodes: usize,
    pub target_abs_tol: f64,
    /// Largest power of `|z|` the integrand carries; sets the Fock cutoff radius.
    #[serde(default)]
    pub max_degree: usize,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        QuadratureSpec {
            radial_nodes: 16,
            angular_nodes: 24,
            target_abs_tol: 1e-10,
            max_degree: 0,
        }
    }
}

impl QuadratureSpec {
    pub fn new(radial_nodes: usize, angular_nodes: usize, target_abs_tol: f64) -> Result<Self> {
        let q = QuadratureSpec {
            radial_nodes,
            angular_nodes,
            target_abs_tol,
            max_degree: 0,
        };
        q.validate()?;
        Ok(q)
    }

    pub fn with_degree(mut self, max_degree: usize) -> Self {
        self.max_degree = max_degree;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.radial_nodes < 16 || self.angular_nodes < 16 {
            return Err(Error::domain(
                "QuadratureSpec",
                "node counts must be at least 16",
            ));
        }
        if !(self.target_abs_tol > 0.0) {
            return Err(Error::domain(
                "QuadratureSpec",
                "target_abs_tol must be positive",
            ));
        }
        Ok(())
    }

    fn doubled(&self) -> Self {
        QuadratureSpec {
            radial_nodes: 2 * self.radial_nodes,
            angular_nodes: 2 * self.angular_nodes,
            ..*self
        }
    }
}

/// Weight the polar rule integrates against.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Weight {
    Measure(RadialMeasure),
    /// Plain area measure `dz`.
    Lebesgue,
}

/// Radial quadrature node; `ln_w` is the log of the full radial weight
/// (Gauss weight, Jacobian `r`, and measure density).
#[derive(Debug, Clone, Copy)]
pub struct RadialNode {
    pub r: f64,
    pub w: f64,
    pub ln_w: f64,
}

#[derive(Debug, Clone)]
pub struct Ray {
    pub theta: f64,
    pub weight: f64,
    pub radial: Vec<RadialNode>,
}

/// A polar quadrature rule: `int_Omega f dmu ~ sum_rays w_theta sum_nodes w f(r e^{i theta})`.
#[derive(Debug, Clone)]
pub struct PolarRule {
    pub rays: Vec<Ray>,
}

/// Extra information used to place nodes.
#[derive(Debug, Clone, Default)]
pub struct RuleHints {
    /// Highest angular frequency the integrand carries.
    pub max_freq: usize,
    /// Radii where the integrand jumps (piecewise symbols).
    pub radial_breaks: Vec<f64>,
}

impl PolarRule {
    pub fn new(
        domain: &Domain,
        weight: Weight,
        quad: &QuadratureSpec,
        hints: &RuleHints,
    ) -> Result<Self> {
        if let Weight::Measure(m) = weight {
            m.validate()?;
            let support = m.support_radius();
            let br = domain.bounding_radius();
            if support.is_finite() && br > support - 1e-6 + 1e-12 {
                return Err(Error::domain(
                    "integrate",
                    format!(
                        "domain bounding radius {br} exceeds measure support (limit {})",
                        support - 1e-6
                    ),
                ));
            }
        } else if !domain.bounding_radius().is_finite() {
            return Err(Error::domain(
                "integrate",
                "Lebesgue integrals need a bounded domain",
            ));
        }
        let radial_cap = match weight {
            Weight::Measure(m) => m.radial_cutoff(quad.max_degree),
            Weight::Lebesgue => f64::INFINITY,
        };
        let radial_rule = GaussLegendre::new(quad.radial_nodes);
        let rays = angular_nodes(domain, quad, hints)
            .into_iter()
            .map(|(theta, wt)| {
                let mut radial = Vec::new();
                for (r0, r1) in domain.radial_intervals(theta) {
                    let r1 = r1.min(radial_cap);
                    if r1 > r0 {
                        push_radial(
                            &mut radial,
                            r0,
                            r1,
                            weight,
                            &radial_rule,
                            &hints.radial_breaks,
                        );
                    }
                }
                Ray {
                    theta,
                    weight: wt,
                    radial,
                }
            })
            .collect();
        Ok(PolarRule { rays })
    }

    pub fn len(&self) -> usize {
        self.rays.iter().map(|r| r.radial.len()).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Flattened `(z, weight)` pairs.
    pub fn points(&self) -> Vec<(C64, f64)> {
        self.rays
            .iter()
            .flat_map(|ray| {
                let e = C64::from_polar(1.0, ray.theta);
                ray.radial.iter().map(move |n| (e * n.r, ray.weight * n.w))
            })
            .collect()
    }

    pub fn apply(&self, f: &impl Fn(C64) -> C64) -> C64 {
        let mut total = C64::new(0.0, 0.0);
        for ray in &self.rays {
            let e = C64::from_polar(1.0, ray.theta);
            let s: C64 = ray.radial.iter().map(|n| f(e * n.r) * n.w).sum();
            total += s * ray.weight;
        }
        total
    }
}

fn smoothstep_panel(a: f64, b: f64, rule: &GaussLegendre, out: &mut Vec<(f64, f64)>) {
    // theta = a + (b - a)(3 s^2 - 2 s^3): zero Jacobian at both ends absorbs
    // square-root endpoint behavior (tangent rays of off-center disks).
    for (s, w) in rule.on_interval(0.0, 1.0) {
        let theta = a + (b - a) * s * s * (3.0 - 2.0 * s);
        let jac = (b - a) * 6.0 * s * (1.0 - s);
        out.push((theta, w * jac));
    }
}

fn angular_nodes(domain: &Domain, quad: &QuadratureSpec, hints: &RuleHints) -> Vec<(f64, f64)> {
    let breaks = domain.angular_breakpoints();
    let mut out = Vec::new();
    if breaks.is_empty() {
        let n = (4 * quad.angular_nodes).max(2 * hints.max_freq + 16);
        let h = TAU / n as f64;
        for i in 0..n {
            out.push((i as f64 * h, h));
        }
        return out;
    }
    let nb = breaks.len();
    for i in 0..nb {
        let a = breaks[i];
        let b = if i + 1 < nb {
            breaks[i + 1]
        } else {
            breaks[0] + TAU
        };
        let width = b - a;
        if width <= 0.0 {
            continue;
        }
        let pieces = (width / (PI / 4.0)).ceil().max(1.0) as usize;
        let pw = width / pieces as f64;
        let order = quad.angular_nodes + (0.75 * hints.max_freq as f64 * pw).ceil() as usize;
        let rule = GaussLegendre::new(order);
        for p in 0..pieces {
            smoothstep_panel(a + p as f64 * pw, a + (p + 1) as f64 * pw, &rule, &mut out);
        }
    }
    out
}

fn panel_edges(lo: f64, hi: f64, max_width: f64, extra: &[f64]) -> Vec<f64> {
    let mut edges = vec![lo, hi];
    edges.extend(extra.iter().copied().filter(|&x| x > lo && x < hi));
    edges.sort_by(f64::total_cmp);
    let mut out = vec![edges[0]];
    for w in edges.windows(2) {
        let pieces = ((w[1] - w[0]) / max_width).ceil().max(1.0) as usize;
        for p in 1..=pieces {
            out.push(w[0] + (w[1] - w[0]) * p as f64 / pieces as f64);
        }
    }
    out.dedup_by(|a, b| (*a - *b).abs() < 1e-15);
    out
}

fn push_radial(
    out: &mut Vec<RadialNode>,
    r0: f64,
    r1: f64,
    weight: Weight,
    rule: &GaussLegendre,
    breaks: &[f64],
) {
    let edges = match weight {
        Weight::Measure(RadialMeasure::BergmanAlpha { .. }) => {
            // geometric grading toward the boundary circle, where (1 - r^2)^alpha
            // is singular for non-integer alpha
            let mut extra = breaks.to_vec();
            let gap = 1.0 - r1;
            let mut g = 0.1;
            while g > 0.5 * gap && g > 1e-14 {
                extra.push(1.0 - g);
                g *= 0.25;
            }
            panel_edges(r0, r1, 0.125, &extra)
        }
        _ => panel_edges(r0, r1, 0.25, breaks),
    };
    for e in edges.windows(2) {
        for (r, w) in rule.on_interval(e[0], e[1]) {
            let ln_mu = match weight {
                Weight::Measure(m) => m.ln_weight(r),
                Weight::Lebesgue => 0.0,
            };
            let ln_w = (w * r).ln() + ln_mu;
            out.push(RadialNode {
                r,
                w: ln_w.exp(),
                ln_w,
            });
        }
    }
}

/// Value and node-doubling error estimate of a quadrature.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Integral {
    pub value: C64,
    pub err_estimate: f64,
}

/// `int_Omega f dmu` by polar quadrature with node-doubling error control.
pub fn integrate(
    domain: &Domain,
    measure: &RadialMeasure,
    f: impl Fn(C64) -> C64,
    quad: &QuadratureSpec,
) -> Result<Integral> {
    integrate_with(
        domain,
        Weight::Measure(*measure),
        f,
        quad,
        &RuleHints::default(),
    )
}

pub fn integrate_with(
    domain: &Domain,
    weight: Weight,
    f: impl Fn(C64) -> C64,
    quad: &QuadratureSpec,
    hints: &RuleHints,
) -> Result<Integral> {
    quad.validate()?;
    let mut q = *quad;
    let mut coarse = PolarRule::new(domain, weight, &q, hints)?.apply(&f);
    let mut est = f64::INFINITY;
    for _ in 0..MAX_REFINEMENTS {
        let fine_q = q.doubled();
        let fine = PolarRule::new(domain, weight, &fine_q, hints)?.apply(&f);
        est = (fine - coarse).norm();
        if est <= quad.target_abs_tol {
            return Ok(Integral {
                value: fine,
                err_estimate: est,
            });
        }
        coarse = fine;
        q = fine_q;
    }
    Err(Error::NonConvergence {
        estimate: est,
        tol: quad.target_abs_tol,
    })
}

/// `I_{m,k} = int_Omega |z|^{2m} conj(z)^k dmu(z)`.
pub fn monomial_moment(
    domain: &Domain,
    measure: &RadialMeasure,
    m: usize,
    k: usize,
    quad: &QuadratureSpec,
) -> Result<C64> {
    let table = MomentTable::compute(domain, measure, 2 * m + k, k, quad)?;
    Ok(table.raw(2 * m + k, k))
}

/// Table of normalized polar moments
/// `G[j][k] = int_Omega r^j e^{-i k theta} dmu / int_C r^j dmu`
/// for `k <= j`, `j = k mod 2`.
#[derive(Debug, Clone)]
pub struct MomentTable {
    pub measure: RadialMeasure,
    pub max_power: usize,
    pub max_freq: usize,
    values: Vec<Vec<C64>>,
    pub err_estimate: f64,
}

impl MomentTable {
    pub fn compute(
        domain: &Domain,
        measure: &RadialMeasure,
        max_power: usize,
        max_freq: usize,
        quad: &QuadratureSpec,
    ) -> Result<Self> {
        quad.validate()?;
        let hints = RuleHints {
            max_freq,
            radial_breaks: vec![],
        };
        let mut q = quad.with_degree(quad.max_degree.max(max_power));
        let mut coarse = Self::evaluate(domain, measure, max_power, max_freq, &q, &hints)?;
        let mut est = f64::INFINITY;
        for _ in 0..MAX_REFINEMENTS {
            let fine_q = q.doubled();
            let fine = Self::evaluate(domain, measure, max_power, max_freq, &fine_q, &hints)?;
            est = 0.0f64;
            for (a, b) in coarse.iter().zip(&fine) {
                for (x, y) in a.iter().zip(b) {
                    est = est.max((x - y).norm());
                }
            }
            if est <= quad.target_abs_tol {
                return Ok(MomentTable {
                    measure: *measure,
                    max_power,
                    max_freq,
                    values: fine,
                    err_estimate: est,
                });
            }
            coarse = fine;
            q = fine_q;
        }
        Err(Error::NonConvergence {
            estimate: est,
            tol: quad.target_abs_tol,
        })
    }

    fn evaluate(
        domain: &Domain,
        measure: &RadialMeasure,
        max_power: usize,
        max_freq: usize,
        quad: &QuadratureSpec,
        hints: &RuleHints,
    ) -> Result<Vec<Vec<C64>>> {
        let rule = PolarRule::new(domain, Weight::Measure(*measure), quad, hints)?;
        let ln_full: Vec<f64> = (0..=max_power)
            .map(|j| measure.ln_full_moment(j as f64))
            .collect();
        let mut values = vec![vec![C64::new(0.0, 0.0); max_freq + 1]; max_power + 1];
        let mut radial = vec![0.0; max_power + 1];
        for ray in &rule.rays {
            if ray.radial.is_empty() {
                continue;
            }
            radial.iter_mut().for_each(|x| *x = 0.0);
            for node in &ray.radial {
                let lr = node.r.ln();
                for (j, acc) in radial.iter_mut().enumerate() {
                    *acc += (j as f64 * lr + node.ln_w - ln_full[j]).exp();
                }
            }
            let step = C64::from_polar(1.0, -ray.theta);
            let mut phase = C64::new(ray.weight, 0.0);
            for k in 0..=max_freq {
                for (row, r) in values.iter_mut().zip(&radial).skip(k).step_by(2) {
                    row[k] += phase * r;
                }
                phase *= step;
            }
        }
        Ok(values)
    }

    /// Normalized moment `G[j][k]`.
    pub fn normalized(&self, j: usize, k: usize) -> C64 {
        self.values[j][k]
    }

    /// Unnormalized `int_Omega r^j e^{-ik theta} dmu`.
    pub fn raw(&self, j: usize, k: usize) -> C64 {
        self.values[j][k] * self.measure.ln_full_moment(j as f64).exp()
    }
}
