//! Time-domain cross-check of the Fock model: the Gabor transform with the
//! Gaussian window `phi = h_0`, localization by an indicator in the
//! time-frequency plane, and the concentration functional.
//!
//! Points of the time-frequency plane are written `z = x + i xi`. Transforms
//! are plain Riemann sums over the signal samples; the window is cut at
//! `|t - x| <= 6` where it is below `1e-48`. Integrals over bounded domains
//! use the polar nodes of the geometry module with Lebesgue weight, so the
//! only discretization left is the time sampling. The whole plane is
//! integrated on the Cartesian [`TFGrid`].

use std::f64::consts::{PI, TAU};

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{Domain, PolarRule, QuadratureSpec, RuleHints, Weight};
use crate::special_fn::{hermite_all, hermite_h, HermiteIndex};

type C64 = Complex64;

/// Default sampling step of signals.
pub const DEFAULT_DT: f64 = 1e-3;
/// Default half-length of the sampled time interval.
pub const DEFAULT_T_MAX: f64 = 8.0;
/// Largest admissible grid step.
pub const MAX_GRID_STEP: f64 = 0.5;

const WINDOW_CUTOFF: f64 = 6.0;

/// Uniformly sampled complex signal; sample `k` sits at `t0 + k dt`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SampledSignal {
    pub samples: Vec<C64>,
    pub t0: f64,
    pub dt: f64,
}

impl SampledSignal {
    pub fn new(samples: Vec<C64>, t0: f64, dt: f64) -> Result<Self> {
        if !(dt > 0.0) || !t0.is_finite() {
            return Err(Error::domain(
                "SampledSignal",
                format!("need dt > 0 and finite t0, got dt = {dt}, t0 = {t0}"),
            ));
        }
        if samples
            .iter()
            .any(|s| !s.re.is_finite() || !s.im.is_finite())
        {
            return Err(Error::domain("SampledSignal", "samples must be finite"));
        }
        Ok(SampledSignal { samples, t0, dt })
    }

    pub fn from_fn(t0: f64, dt: f64, count: usize, f: impl Fn(f64) -> C64) -> Result<Self> {
        let samples = (0..count).map(|k| f(t0 + k as f64 * dt)).collect();
        Self::new(samples, t0, dt)
    }

    /// `h_n` on the default time grid.
    pub fn hermite(n: usize) -> Self {
        hermite_signal(n, -DEFAULT_T_MAX, DEFAULT_DT, default_count())
    }

    pub fn zeros_like(&self) -> Self {
        SampledSignal {
            samples: vec![C64::new(0.0, 0.0); self.samples.len()],
            t0: self.t0,
            dt: self.dt,
        }
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn time(&self, k: usize) -> f64 {
        self.t0 + k as f64 * self.dt
    }

    /// `||f||^2 = dt sum |f_k|^2`.
    pub fn energy(&self) -> f64 {
        self.dt * self.samples.iter().map(|s| s.norm_sqr()).sum::<f64>()
    }

    pub fn norm(&self) -> f64 {
        self.energy().sqrt()
    }

    fn check_same_grid(&self, other: &SampledSignal) -> Result<()> {
        if self.samples.len() != other.samples.len() {
            return Err(Error::DimensionMismatch {
                expected: self.samples.len(),
                got: other.samples.len(),
            });
        }
        if self.t0 != other.t0 || self.dt != other.dt {
            return Err(Error::domain(
                "SampledSignal",
                "signals live on different time grids",
            ));
        }
        Ok(())
    }

    /// `<f, g> = dt sum f_k conj(g_k)`.
    pub fn inner(&self, other: &SampledSignal) -> Result<C64> {
        self.check_same_grid(other)?;
        Ok(self
            .samples
            .iter()
            .zip(&other.samples)
            .map(|(a, b)| a * b.conj())
            .sum::<C64>()
            * self.dt)
    }

    /// Largest `|f_k - g_k|`.
    pub fn max_abs_diff(&self, other: &SampledSignal) -> Result<f64> {
        self.check_same_grid(other)?;
        Ok(self
            .samples
            .iter()
            .zip(&other.samples)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max))
    }

    pub fn scaled(&self, c: C64) -> SampledSignal {
        SampledSignal {
            samples: self.samples.iter().map(|s| s * c).collect(),
            ..*self
        }
    }

    pub fn add(&self, other: &SampledSignal) -> Result<SampledSignal> {
        self.check_same_grid(other)?;
        Ok(SampledSignal {
            samples: self
                .samples
                .iter()
                .zip(&other.samples)
                .map(|(a, b)| a + b)
                .collect(),
            ..*self
        })
    }

    /// Index range of samples with `|t - x| <= WINDOW_CUTOFF`.
    fn window_range(&self, x: f64) -> std::ops::Range<usize> {
        let lo = ((x - WINDOW_CUTOFF - self.t0) / self.dt).ceil().max(0.0) as usize;
        let hi = (((x + WINDOW_CUTOFF - self.t0) / self.dt).floor() + 1.0)
            .clamp(0.0, self.samples.len() as f64) as usize;
        lo.min(hi)..hi
    }
}

fn default_count() -> usize {
    (2.0 * DEFAULT_T_MAX / DEFAULT_DT).round() as usize + 1
}

/// `h_n` sampled at `t0 + k dt`, `k < count`.
pub fn hermite_signal(n: usize, t0: f64, dt: f64, count: usize) -> SampledSignal {
    SampledSignal {
        samples: (0..count)
            .map(|k| C64::new(hermite_h(HermiteIndex(n), t0 + k as f64 * dt), 0.0))
            .collect(),
        t0,
        dt,
    }
}

/// Cartesian grid over `[-x_range, x_range] x [-xi_range, xi_range]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TFGrid {
    pub x_step: f64,
    pub xi_step: f64,
    pub x_range: f64,
    pub xi_range: f64,
}

impl Default for TFGrid {
    fn default() -> Self {
        TFGrid {
            x_step: 0.05,
            xi_step: 0.05,
            x_range: 4.0,
            xi_range: 4.0,
        }
    }
}

impl TFGrid {
    pub fn validate(&self) -> Result<()> {
        for step in [self.x_step, self.xi_step] {
            if !(step > 0.0) {
                return Err(Error::domain(
                    "TFGrid",
                    format!("step {step} must be positive"),
                ));
            }
            if step > MAX_GRID_STEP {
                return Err(Error::GridTooCoarse {
                    step,
                    max: MAX_GRID_STEP,
                });
            }
        }
        if !(self.x_range > 0.0 && self.xi_range > 0.0) {
            return Err(Error::domain("TFGrid", "ranges must be positive"));
        }
        Ok(())
    }

    pub fn xs(&self) -> Vec<f64> {
        axis(self.x_step, self.x_range)
    }

    pub fn xis(&self) -> Vec<f64> {
        axis(self.xi_step, self.xi_range)
    }

    pub fn cell_area(&self) -> f64 {
        self.x_step * self.xi_step
    }
}

fn axis(step: f64, range: f64) -> Vec<f64> {
    let n = (range / step + 1e-9).floor() as i64;
    (-n..=n).map(|i| i as f64 * step).collect()
}

fn gaussian_window(t: f64) -> f64 {
    2f64.powf(0.25) * (-PI * t * t).exp()
}

/// `V_phi f(x, xi) = int f(t) phi(t - x) e^{-2 pi i xi t} dt` by a Riemann sum.
pub fn stft_at(f: &SampledSignal, x: f64, xi: f64) -> C64 {
    let range = f.window_range(x);
    if range.is_empty() {
        return C64::new(0.0, 0.0);
    }
    let mut phase = C64::from_polar(1.0, -TAU * xi * f.time(range.start));
    let step = C64::from_polar(1.0, -TAU * xi * f.dt);
    let mut acc = C64::new(0.0, 0.0);
    for k in range {
        acc += f.samples[k] * gaussian_window(f.time(k) - x) * phase;
        phase *= step;
    }
    acc * f.dt
}

/// `V_phi f` on every grid point; rows follow `grid.xs()`, columns `grid.xis()`.
pub fn stft_gaussian(f: &SampledSignal, grid: &TFGrid) -> Result<DMatrix<C64>> {
    grid.validate()?;
    let (xs, xis) = (grid.xs(), grid.xis());
    let mut out = DMatrix::from_element(xs.len(), xis.len(), C64::new(0.0, 0.0));
    for (i, &x) in xs.iter().enumerate() {
        let range = f.window_range(x);
        let windowed: Vec<C64> = range
            .clone()
            .map(|k| f.samples[k] * gaussian_window(f.time(k) - x))
            .collect();
        if windowed.is_empty() {
            continue;
        }
        let t_start = f.time(range.start);
        for (j, &xi) in xis.iter().enumerate() {
            let mut phase = C64::from_polar(1.0, -TAU * xi * t_start);
            let step = C64::from_polar(1.0, -TAU * xi * f.dt);
            let mut acc = C64::new(0.0, 0.0);
            for w in &windowed {
                acc += w * phase;
                phase *= step;
            }
            out[(i, j)] = acc * f.dt;
        }
    }
    Ok(out)
}

/// Integration nodes `(z, weight)` of the time-frequency plane restricted to `domain`.
fn tf_nodes(domain: &Domain, grid: &TFGrid, max_freq: usize) -> Result<Vec<(C64, f64)>> {
    grid.validate()?;
    domain.validate()?;
    if matches!(domain, Domain::Plane) {
        let area = grid.cell_area();
        let xis = grid.xis();
        return Ok(grid
            .xs()
            .into_iter()
            .flat_map(|x| xis.iter().map(move |&xi| (C64::new(x, xi), area)))
            .collect());
    }
    let hints = RuleHints {
        max_freq,
        radial_breaks: vec![],
    };
    let rule = PolarRule::new(domain, Weight::Lebesgue, &QuadratureSpec::default(), &hints)?;
    Ok(rule.points())
}

/// `H_Omega f = int_Omega V_phi f(z) pi(z) phi dz`, with `pi(z) phi(t) = e^{2 pi i xi t} phi(t - x)`.
pub fn apply_localization(
    f: &SampledSignal,
    domain: &Domain,
    grid: &TFGrid,
) -> Result<SampledSignal> {
    let nodes = tf_nodes(domain, grid, 16)?;
    let mut out = f.zeros_like();
    for (z, w) in nodes {
        let v = stft_at(f, z.re, z.im) * w;
        if v == C64::new(0.0, 0.0) {
            continue;
        }
        let range = f.window_range(z.re);
        if range.is_empty() {
            continue;
        }
        let mut phase = C64::from_polar(1.0, TAU * z.im * f.time(range.start));
        let step = C64::from_polar(1.0, TAU * z.im * f.dt);
        for k in range {
            out.samples[k] += v * gaussian_window(f.time(k) - z.re) * phase;
            phase *= step;
        }
    }
    Ok(out)
}

/// `int_Omega |V_phi f|^2 dz / ||f||^2`.
pub fn concentration(f: &SampledSignal, domain: &Domain, grid: &TFGrid) -> Result<f64> {
    let energy = f.energy();
    if energy == 0.0 {
        return Err(Error::ZeroSignal);
    }
    let nodes = tf_nodes(domain, grid, 16)?;
    let num: f64 = nodes
        .iter()
        .map(|&(z, w)| stft_at(f, z.re, z.im).norm_sqr() * w)
        .sum();
    Ok(num / energy)
}

/// `G[m][n] = <H_Omega h_n, h_m> = int_Omega V h_n conj(V h_m) dz` for `m, n < size`,
/// with the Hermite functions sampled on the default time grid.
///
/// This equals the Fock Galerkin matrix of `domain.reflect()`.
pub fn hermite_matrix_timedomain(
    domain: &Domain,
    grid: &TFGrid,
    size: usize,
) -> Result<DMatrix<C64>> {
    if size == 0 {
        return Err(Error::domain(
            "hermite_matrix_timedomain",
            "basis size must be positive",
        ));
    }
    let nodes = tf_nodes(domain, grid, 2 * size)?;
    let (t0, dt, count) = (-DEFAULT_T_MAX, DEFAULT_DT, default_count());
    // basis[k * size + n] = h_n(t_k)
    let basis: Vec<f64> = (0..count)
        .flat_map(|k| hermite_all(size, t0 + k as f64 * dt))
        .collect();
    let time = |k: usize| t0 + k as f64 * dt;
    let mut g = DMatrix::from_element(size, size, C64::new(0.0, 0.0));
    let mut v = vec![C64::new(0.0, 0.0); size];
    for (z, w) in nodes {
        v.iter_mut().for_each(|x| *x = C64::new(0.0, 0.0));
        let lo = ((z.re - WINDOW_CUTOFF - t0) / dt).ceil().max(0.0) as usize;
        let hi = ((((z.re + WINDOW_CUTOFF - t0) / dt).floor() + 1.0).max(0.0) as usize).min(count);
        if lo >= hi {
            continue;
        }
        let mut phase = C64::from_polar(1.0, -TAU * z.im * time(lo));
        let step = C64::from_polar(1.0, -TAU * z.im * dt);
        for k in lo..hi {
            let c = phase * gaussian_window(time(k) - z.re);
            for (n, vn) in v.iter_mut().enumerate() {
                *vn += c * basis[k * size + n];
            }
            phase *= step;
        }
        for vn in v.iter_mut() {
            *vn *= dt;
        }
        for m in 0..size {
            for n in 0..size {
                g[(m, n)] += v[n] * v[m].conj() * w;
            }
        }
    }
    Ok(g)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fock_op::{assemble_indicator, normalized_monomial};
    use crate::special_fn::regularized_lower_gamma;

    fn small_grid() -> TFGrid {
        TFGrid {
            x_step: 0.1,
            xi_step: 0.1,
            x_range: 4.0,
            xi_range: 4.0,
        }
    }

    #[test]
    fn grid_validation() {
        assert!(TFGrid::default().validate().is_ok());
        let g = TFGrid {
            x_step: 0.6,
            ..TFGrid::default()
        };
        assert!(matches!(g.validate(), Err(Error::GridTooCoarse { .. })));
        let g = TFGrid {
            xi_step: 0.51,
            ..TFGrid::default()
        };
        assert!(matches!(
            stft_gaussian(&SampledSignal::hermite(0), &g),
            Err(Error::GridTooCoarse { .. })
        ));
        assert_eq!(TFGrid::default().xs().len(), 161);
    }

    #[test]
    fn stft_of_window_at_origin() {
        let phi = SampledSignal::hermite(0);
        assert!((phi.energy() - 1.0).abs() < 1e-12);
        assert!((stft_at(&phi, 0.0, 0.0) - 1.0).norm() < 1e-12);
    }

    #[test]
    fn stft_matches_bargmann_relation() {
        // V h_n(x, xi) = e^{-i pi x xi} e^{-pi|z|^2/2} e_n(conj z)
        for n in [0, 1, 3, 6] {
            let h = SampledSignal::hermite(n);
            for &(x, xi) in &[(0.3, -0.7), (-1.1, 0.4), (1.5, 1.5), (0.0, 2.0)] {
                let z = C64::new(x, xi);
                let expect = C64::from_polar(1.0, -PI * x * xi)
                    * (-PI * z.norm_sqr() / 2.0).exp()
                    * normalized_monomial(n, z.conj());
                assert!((stft_at(&h, x, xi) - expect).norm() < 1e-10, "n={n} z={z}");
            }
        }
    }

    #[test]
    fn stft_modulus_radial() {
        let h = SampledSignal::hermite(2);
        for r in [0.4, 1.0, 1.7] {
            let vals: Vec<f64> = (0..8)
                .map(|k| {
                    let z = C64::from_polar(r, k as f64 * 0.7);
                    stft_at(&h, z.re, z.im).norm()
                })
                .collect();
            let spread = vals.iter().cloned().fold(f64::NEG_INFINITY, f64::max)
                - vals.iter().cloned().fold(f64::INFINITY, f64::min);
            assert!(spread < 1e-10);
        }
    }

    #[test]
    fn moyal_identity() {
        let h = SampledSignal::hermite(3);
        let v = stft_gaussian(&h, &TFGrid::default()).unwrap();
        let total: f64 =
            v.iter().map(|c| c.norm_sqr()).sum::<f64>() * TFGrid::default().cell_area();
        assert!((total - h.energy()).abs() < 1e-6, "{total}");
    }

    #[test]
    fn concentration_values() {
        let phi = SampledSignal::hermite(0);
        let g = TFGrid::default();
        let c1 = concentration(&phi, &Domain::centered_disk(1.0), &g).unwrap();
        assert!((c1 - (1.0 - (-PI).exp())).abs() < 1e-8);
        let c_half = concentration(&phi, &Domain::centered_disk(0.5), &g).unwrap();
        assert!(c_half < c1);
        let all = concentration(&phi, &Domain::Plane, &g).unwrap();
        assert!((all - 1.0).abs() < 1e-6);
        let zero = phi.zeros_like();
        assert!(matches!(
            concentration(&zero, &Domain::centered_disk(1.0), &g),
            Err(Error::ZeroSignal)
        ));
        let h4 = SampledSignal::hermite(4);
        let c = concentration(&h4, &Domain::annulus(0.5, 1.0), &g).unwrap();
        let e = regularized_lower_gamma(5.0, PI).unwrap()
            - regularized_lower_gamma(5.0, PI / 4.0).unwrap();
        assert!((c - e).abs() < 1e-8);
    }

    #[test]
    fn localization_on_disk_scales_hermite() {
        let g = TFGrid::default();
        for n in [0, 2] {
            let h = SampledSignal::hermite(n);
            let out = apply_localization(&h, &Domain::centered_disk(1.0), &g).unwrap();
            let lambda = regularized_lower_gamma(n as f64 + 1.0, PI).unwrap();
            let diff = out.max_abs_diff(&h.scaled(C64::new(lambda, 0.0))).unwrap();
            assert!(diff < 1e-6, "n={n}: {diff}");
        }
        let h = SampledSignal::hermite(1);
        let out = apply_localization(&h, &Domain::empty(), &g).unwrap();
        assert!(out.samples.iter().all(|s| s.norm() == 0.0));
    }

    #[test]
    fn localization_whole_plane_reproduces() {
        // coarser time grid keeps this test fast; the Riemann sums stay spectrally accurate
        let f = SampledSignal::from_fn(-8.0, 5e-3, 3201, |t| {
            C64::new(
                hermite_h(HermiteIndex(1), t),
                0.5 * hermite_h(HermiteIndex(4), t - 0.3),
            )
        })
        .unwrap();
        let out = apply_localization(&f, &Domain::Plane, &small_grid()).unwrap();
        assert!(out.max_abs_diff(&f).unwrap() < 1e-6);
    }

    #[test]
    fn localization_self_adjoint() {
        let g = TFGrid::default();
        let d = Domain::square(C64::new(0.1, 0.2), 1.5);
        let f = SampledSignal::hermite(1)
            .add(&SampledSignal::hermite(2).scaled(C64::new(0.0, 0.7)))
            .unwrap();
        let h = SampledSignal::hermite(3);
        let hf = apply_localization(&f, &d, &g).unwrap();
        let hh = apply_localization(&h, &d, &g).unwrap();
        let lhs = hf.inner(&h).unwrap();
        let rhs = f.inner(&hh).unwrap();
        assert!((lhs - rhs).norm() < 1e-6 * f.norm() * h.norm());
        let q = hf.inner(&f).unwrap();
        assert!(q.re >= 0.0 && q.re <= f.energy() + 1e-6);
    }

    #[test]
    fn timedomain_matrix_matches_reflected_fock() {
        let g = TFGrid::default();
        let quad = QuadratureSpec::default();
        let half = Domain::polygon(&[
            C64::new(-1.0, 0.0),
            C64::new(1.0, 0.0),
            C64::new(0.8, 0.9),
            C64::new(-0.5, 1.1),
        ]);
        for d in [Domain::centered_disk(1.0), half] {
            let gm = hermite_matrix_timedomain(&d, &g, 8).unwrap();
            let fock = assemble_indicator(&d.reflect(), 8, &quad).unwrap();
            let worst = (0..8)
                .flat_map(|m| (0..8).map(move |n| (m, n)))
                .map(|(m, n)| (gm[(m, n)] - fock.entry(m, n)).norm())
                .fold(0.0, f64::max);
            assert!(worst < 1e-8, "{worst}");
        }
        let empty = hermite_matrix_timedomain(&Domain::empty(), &g, 4).unwrap();
        assert!(empty.iter().all(|c| c.norm() == 0.0));
    }
}
