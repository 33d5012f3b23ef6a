//! Inverse procedure: probe a black-box operator with basis vectors, decide
//! from the responses whether the hidden domain can be a centered disk or a
//! centered ring, and estimate its size.
//!
//! The verdict is only as strong as the prior that the hidden symbol is the
//! indicator of a simply connected set. Non-radial nonnegative symbols can
//! have basis vectors as eigenvectors, so every report carries that caveat.

use std::f64::consts::{PI, TAU};

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::bergman_wavelet::PseudoDisk;
use crate::error::{Error, Result};
use crate::fock_op::GalerkinOperator;
use crate::geometry::{Domain, MomentTable, QuadratureSpec, RadialMeasure};

type C64 = Complex64;

pub const CAVEAT: &str = "assuming the symbol is an indicator of a simply connected set";
pub const DEFAULT_TOL: f64 = 1e-6;
pub const DEFAULT_CONSISTENCY_TOL: f64 = 1e-3;
/// Probes must satisfy `n + GUARD_BAND <= N`.
pub const GUARD_BAND: usize = 8;
/// RMS misfit above which a ring fit is rejected.
pub const RING_FIT_THRESHOLD: f64 = 1e-4;

/// Which orthonormal monomial basis the black box acts in.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum BasisTag {
    Fock,
    Bergman { alpha: f64 },
}

impl BasisTag {
    pub fn measure(&self) -> Result<RadialMeasure> {
        match *self {
            BasisTag::Fock => Ok(RadialMeasure::FockGaussian),
            BasisTag::Bergman { alpha } => RadialMeasure::bergman(alpha),
        }
    }
}

type Action = Box<dyn Fn(&[C64]) -> Vec<C64> + Send + Sync>;

/// Opaque linear map on coefficient vectors of length `dimension`.
pub struct BlackBox {
    dimension: usize,
    basis: BasisTag,
    action: Action,
}

impl std::fmt::Debug for BlackBox {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("BlackBox")
            .field("dimension", &self.dimension)
            .field("basis", &self.basis)
            .finish()
    }
}

impl BlackBox {
    pub fn from_fn(
        dimension: usize,
        basis: BasisTag,
        action: impl Fn(&[C64]) -> Vec<C64> + Send + Sync + 'static,
    ) -> Self {
        BlackBox {
            dimension,
            basis,
            action: Box::new(action),
        }
    }

    pub fn from_matrix(matrix: DMatrix<C64>, basis: BasisTag) -> Result<Self> {
        if matrix.nrows() != matrix.ncols() {
            return Err(Error::DimensionMismatch {
                expected: matrix.nrows(),
                got: matrix.ncols(),
            });
        }
        let n = matrix.nrows();
        Ok(Self::from_fn(n, basis, move |v| {
            let x = nalgebra::DVector::from_column_slice(v);
            (&matrix * x).iter().copied().collect()
        }))
    }

    pub fn from_operator(op: &GalerkinOperator, basis: BasisTag) -> Result<Self> {
        Self::from_matrix(op.matrix.clone(), basis)
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn basis(&self) -> BasisTag {
        self.basis
    }

    pub fn apply(&self, v: &[C64]) -> Result<Vec<C64>> {
        if v.len() != self.dimension {
            return Err(Error::DimensionMismatch {
                expected: self.dimension,
                got: v.len(),
            });
        }
        let out = (self.action)(v);
        if out.len() != self.dimension {
            return Err(Error::DimensionMismatch {
                expected: self.dimension,
                got: out.len(),
            });
        }
        Ok(out)
    }

    /// Largest relative defect `||T(av+bw) - aTv - bTw|| / (|a| ||v|| + |b| ||w||)`
    /// over `trials` random draws; fails above `1e-9`.
    pub fn check_linearity(&self, trials: usize, seed: u64) -> Result<f64> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let draw = |rng: &mut ChaCha8Rng| {
            C64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))
        };
        let mut worst = 0.0f64;
        for _ in 0..trials {
            let v: Vec<C64> = (0..self.dimension).map(|_| draw(&mut rng)).collect();
            let w: Vec<C64> = (0..self.dimension).map(|_| draw(&mut rng)).collect();
            let (a, b) = (draw(&mut rng), draw(&mut rng));
            let mix: Vec<C64> = v.iter().zip(&w).map(|(x, y)| a * x + b * y).collect();
            let (tm, tv, tw) = (self.apply(&mix)?, self.apply(&v)?, self.apply(&w)?);
            let defect = norm(
                &tm.iter()
                    .zip(tv.iter().zip(&tw))
                    .map(|(m, (x, y))| m - a * x - b * y)
                    .collect::<Vec<_>>(),
            );
            let scale = a.norm() * norm(&v) + b.norm() * norm(&w);
            worst = worst.max(defect / scale);
        }
        if worst > 1e-9 {
            return Err(Error::Nonlinear { defect: worst });
        }
        Ok(worst)
    }
}

fn norm(v: &[C64]) -> f64 {
    v.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt()
}

/// Response of the black box to one basis vector.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ProbeRecord {
    pub n: usize,
    /// `Re <T delta_n, delta_n>`.
    pub lambda: f64,
    /// `||T delta_n - lambda delta_n||_2`.
    pub residual: f64,
    /// `Im <T delta_n, delta_n>`, a Hermitian sanity check.
    #[serde(skip)]
    pub lambda_imag: f64,
    /// `||T delta_n||_2`, the scale the residual is judged against.
    #[serde(skip)]
    pub response_norm: f64,
}

impl ProbeRecord {
    pub fn relative_residual(&self) -> f64 {
        if self.response_norm > 0.0 {
            self.residual / self.response_norm
        } else {
            0.0
        }
    }
}

pub fn probe_residual(bb: &BlackBox, n: usize) -> Result<ProbeRecord> {
    if n + GUARD_BAND > bb.dimension {
        return Err(Error::TruncationRisk(format!(
            "probe {n} needs a basis of at least {} elements, box has {}",
            n + GUARD_BAND,
            bb.dimension
        )));
    }
    let mut delta = vec![C64::new(0.0, 0.0); bb.dimension];
    delta[n] = C64::new(1.0, 0.0);
    let out = bb.apply(&delta)?;
    let lambda = out[n].re;
    let residual = out
        .iter()
        .enumerate()
        .map(|(i, v)| {
            if i == n {
                (v - lambda).norm_sqr()
            } else {
                v.norm_sqr()
            }
        })
        .sum::<f64>()
        .sqrt();
    Ok(ProbeRecord {
        n,
        lambda,
        residual,
        lambda_imag: out[n].im,
        response_norm: norm(&out),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Verdict {
    DiskCentered,
    RadialMultiRing,
    NotRadial,
    Inconclusive,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProbeReport {
    pub probes: Vec<ProbeRecord>,
    pub verdict: Verdict,
    pub radius: Option<f64>,
    /// Fitted `[r_in, r_out]` pairs.
    pub rings: Option<Vec<[f64; 2]>>,
    /// Spread `max - min` of the per-probe radius estimates.
    pub consistency: Option<f64>,
    pub caveat: String,
    pub tol: f64,
    pub consistency_tol: f64,
    pub basis: BasisTag,
    /// Half-plane preimage of the recovered disk (Bergman boxes only).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pseudodisk: Option<PseudoDisk>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

/// Thresholds of [`disk_verdict`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VerdictTolerances {
    #[serde(default = "default_tol")]
    pub tol: f64,
    #[serde(default = "default_consistency_tol")]
    pub consistency_tol: f64,
}

fn default_tol() -> f64 {
    DEFAULT_TOL
}

fn default_consistency_tol() -> f64 {
    DEFAULT_CONSISTENCY_TOL
}

impl Default for VerdictTolerances {
    fn default() -> Self {
        VerdictTolerances {
            tol: DEFAULT_TOL,
            consistency_tol: DEFAULT_CONSISTENCY_TOL,
        }
    }
}

/// Decides between a centered disk, a centered ring, a non-radial domain, or
/// no conclusion, from the responses to the basis vectors in `probes`.
///
/// A probe counts as an eigenvector when its residual is at most
/// `tol * ||T delta_n||`; the relative form keeps the decision invariant
/// under rescaling of the box.
pub fn disk_verdict(
    bb: &BlackBox,
    probes: &[usize],
    tols: VerdictTolerances,
) -> Result<ProbeReport> {
    if probes.is_empty() {
        return Err(Error::domain("disk_verdict", "need at least one probe"));
    }
    let measure = bb.basis.measure()?;
    let records = probes
        .iter()
        .map(|&n| probe_residual(bb, n))
        .collect::<Result<Vec<_>>>()?;
    if records.iter().all(|r| r.lambda.abs() < 10.0 * tols.tol) {
        return Err(Error::DegenerateSpectrum {
            threshold: 10.0 * tols.tol,
        });
    }
    let mut report = ProbeReport {
        probes: records.clone(),
        verdict: Verdict::Inconclusive,
        radius: None,
        rings: None,
        consistency: None,
        caveat: CAVEAT.to_string(),
        tol: tols.tol,
        consistency_tol: tols.consistency_tol,
        basis: bb.basis,
        pseudodisk: None,
        notes: Vec::new(),
    };
    if records.iter().any(|r| r.relative_residual() > tols.tol) {
        report.verdict = Verdict::NotRadial;
        return Ok(report);
    }
    let mut radii = Vec::with_capacity(records.len());
    for r in &records {
        match estimate_radius_with(&measure, r.lambda, r.n) {
            Ok(x) => radii.push(x),
            Err(_) => {
                report.notes.push(format!(
                    "probe {} has lambda {} outside (0, 1); no radius",
                    r.n, r.lambda
                ));
                return Ok(report);
            }
        }
    }
    let hi = radii.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let lo = radii.iter().copied().fold(f64::INFINITY, f64::min);
    report.consistency = Some(hi - lo);
    if hi - lo <= tols.consistency_tol {
        let mean = radii.iter().sum::<f64>() / radii.len() as f64;
        report.verdict = Verdict::DiskCentered;
        report.radius = Some(mean);
        if let BasisTag::Bergman { .. } = bb.basis {
            report.pseudodisk = PseudoDisk::new(C64::new(0.0, 1.0), mean).ok();
        }
        return Ok(report);
    }
    let data: Vec<(usize, f64)> = records.iter().map(|r| (r.n, r.lambda)).collect();
    match ring_fit_with(&measure, &data) {
        Ok(fit) => {
            report.verdict = Verdict::RadialMultiRing;
            report.rings = Some(vec![[fit.r_in, fit.r_out]]);
            report
                .notes
                .push(format!("single-ring fit residual {:.3e}", fit.fit_residual));
        }
        Err(e) => report.notes.push(format!("ring fit rejected: {e}")),
    }
    Ok(report)
}

/// Radius `R` of the centered Fock disk with `P(n+1, pi R^2) = lambda`.
pub fn estimate_radius(lambda: f64, n: usize) -> Result<f64> {
    estimate_radius_with(&RadialMeasure::FockGaussian, lambda, n)
}

/// Inverts the disk eigenvalue `lambda = disk_mass(n, R)` of `measure` for `R`.
pub fn estimate_radius_with(measure: &RadialMeasure, lambda: f64, n: usize) -> Result<f64> {
    if !(lambda > 0.0 && lambda < 1.0) {
        return Err(Error::OutOfRange {
            value: lambda,
            range: "(0, 1)",
        });
    }
    let mut hi = match measure {
        RadialMeasure::FockGaussian => {
            let mut r = 1.0;
            while measure.disk_mass(n, r)? < lambda {
                r *= 2.0;
            }
            r
        }
        RadialMeasure::BergmanAlpha { .. } => 1.0,
    };
    let mut lo = 0.0;
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if measure.disk_mass(n, mid)? < lambda {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// `d/dR disk_mass(n, R) = 2 pi R^{2n+1} mu(R) / ||z^n||^2`.
fn disk_mass_slope(measure: &RadialMeasure, n: usize, r: f64) -> f64 {
    if r <= 0.0 || r >= measure.support_radius() {
        return 0.0;
    }
    (TAU.ln() + (2 * n + 1) as f64 * r.ln() + measure.ln_weight(r) + measure.ln_basis_norm_sq(n))
        .exp()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RingFit {
    pub r_in: f64,
    pub r_out: f64,
    /// Root-mean-square misfit of the eigenvalue model.
    pub fit_residual: f64,
}

/// Fits `lambda_n = P(n+1, pi r_out^2) - P(n+1, pi r_in^2)` to `(n, lambda_n)` pairs.
pub fn ring_fit(lambdas: &[(usize, f64)]) -> Result<RingFit> {
    ring_fit_with(&RadialMeasure::FockGaussian, lambdas)
}

/// [`ring_fit`] for any radial measure: grid seed, then Levenberg-Marquardt.
pub fn ring_fit_with(measure: &RadialMeasure, lambdas: &[(usize, f64)]) -> Result<RingFit> {
    if lambdas.len() < 3 {
        return Err(Error::domain(
            "ring_fit",
            format!("need at least 3 probes, got {}", lambdas.len()),
        ));
    }
    let r_max = match measure {
        RadialMeasure::FockGaussian => {
            let n_max = lambdas.iter().map(|p| p.0).max().unwrap_or(0) as f64;
            ((n_max + 40.0) / PI).sqrt()
        }
        RadialMeasure::BergmanAlpha { .. } => 1.0 - 1e-6,
    };
    let model = |r_in: f64, r_out: f64| -> Result<Vec<f64>> {
        lambdas
            .iter()
            .map(|&(n, _)| measure.ring_mass(n, r_in.abs(), r_out.abs().min(r_max)))
            .collect()
    };
    let cost = |pred: &[f64]| {
        pred.iter()
            .zip(lambdas)
            .map(|(p, (_, l))| (p - l).powi(2))
            .sum::<f64>()
    };

    // grid seed
    const GRID: usize = 160;
    let radii: Vec<f64> = (0..=GRID).map(|i| r_max * i as f64 / GRID as f64).collect();
    let table: Vec<Vec<f64>> = radii
        .iter()
        .map(|&r| {
            lambdas
                .iter()
                .map(|&(n, _)| measure.disk_mass(n, r))
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<_>>()?;
    let mut best = (f64::INFINITY, 0.0, 0.0);
    for o in 1..=GRID {
        for i in 0..o {
            let c: f64 = lambdas
                .iter()
                .enumerate()
                .map(|(k, (_, l))| (table[o][k] - table[i][k] - l).powi(2))
                .sum();
            if c < best.0 {
                best = (c, radii[i], radii[o]);
            }
        }
    }
    let (mut c, mut a, mut b) = best;
    let mut mu = 1e-3;
    for _ in 0..500 {
        let pred = model(a, b)?;
        let res: Vec<f64> = pred.iter().zip(lambdas).map(|(p, (_, l))| p - l).collect();
        // Jacobian columns: d/da = -slope(r_in) sign(a), d/db = slope(r_out) sign(b)
        let ja: Vec<f64> = lambdas
            .iter()
            .map(|&(n, _)| -disk_mass_slope(measure, n, a.abs()) * a.signum())
            .collect();
        let jb: Vec<f64> = lambdas
            .iter()
            .map(|&(n, _)| disk_mass_slope(measure, n, b.abs().min(r_max)) * b.signum())
            .collect();
        let dot = |x: &[f64], y: &[f64]| x.iter().zip(y).map(|(p, q)| p * q).sum::<f64>();
        let (g_a, g_b) = (dot(&ja, &res), dot(&jb, &res));
        let (h_aa, h_ab, h_bb) = (dot(&ja, &ja), dot(&ja, &jb), dot(&jb, &jb));
        let mut improved = false;
        for _ in 0..30 {
            let (m_aa, m_bb) = (h_aa * (1.0 + mu) + 1e-300, h_bb * (1.0 + mu) + 1e-300);
            let det = m_aa * m_bb - h_ab * h_ab;
            if det <= 0.0 || !det.is_finite() {
                mu *= 10.0;
                continue;
            }
            let da = -(m_bb * g_a - h_ab * g_b) / det;
            let db = -(m_aa * g_b - h_ab * g_a) / det;
            let (na, nb) = (a + da, b + db);
            let nc = cost(&model(na, nb)?);
            if nc < c {
                let step = da.abs().max(db.abs());
                a = na;
                b = nb;
                c = nc;
                mu = (mu * 0.3).max(1e-12);
                improved = step > 1e-15;
                break;
            }
            mu *= 10.0;
        }
        if !improved || c < 1e-30 {
            break;
        }
    }
    let (r_in, r_out) = {
        let (x, y) = (a.abs(), b.abs().min(r_max));
        (x.min(y), x.max(y))
    };
    let fit_residual = (c / lambdas.len() as f64).sqrt();
    if fit_residual > RING_FIT_THRESHOLD {
        return Err(Error::FitFailure {
            residual: fit_residual,
            threshold: RING_FIT_THRESHOLD,
        });
    }
    Ok(RingFit {
        r_in,
        r_out,
        fit_residual,
    })
}

/// Outcome of the monomial-moment test.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DoubleOrthResult {
    pub pass: bool,
    /// `k` with the largest `|I_{m,k}|`.
    pub worst_k: usize,
    pub worst_value: f64,
    /// Smallest `k` with `|I_{m,k}| > tol`.
    pub first_failure: Option<usize>,
}

/// Checks `int_Omega |z|^{2m} conj(z)^k dmu = 0` for `k = 1..=k_max`.
pub fn double_orth_test(
    domain: &Domain,
    measure: &RadialMeasure,
    m: usize,
    k_max: usize,
    tol: f64,
    quad: &QuadratureSpec,
) -> Result<DoubleOrthResult> {
    if k_max == 0 {
        return Err(Error::domain(
            "double_orth_test",
            "k_max must be at least 1",
        ));
    }
    let table = MomentTable::compute(domain, measure, 2 * m + k_max, k_max, quad)?;
    let mut out = DoubleOrthResult {
        pass: true,
        worst_k: 1,
        worst_value: 0.0,
        first_failure: None,
    };
    for k in 1..=k_max {
        let v = table.raw(2 * m + k, k).norm();
        if v > out.worst_value {
            out.worst_value = v;
            out.worst_k = k;
        }
        if v > tol && out.first_failure.is_none() {
            out.first_failure = Some(k);
            out.pass = false;
        }
    }
    Ok(out)
}
