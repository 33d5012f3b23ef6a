//! The acceptance suite: ten numbered criteria, each a group of checks with
//! a measured value and the bound it is held to.
//!
//! Failures of the quadrature itself (`NonConvergence`) are reported as such
//! rather than as a failed comparison, so a deliberately unreachable
//! tolerance shows up as "quadrature failure" in the report.

use std::f64::consts::PI;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::bergman_wavelet::{
    ber_psi_check, bergman_galerkin, cayley_to_disc, cayley_to_halfplane, disc_eigenvalue_closed,
    laguerre_laplace_check, map_pseudodisk, rho_disc, rho_halfplane, PseudoDisk,
};
use crate::error::{Error, Result};
use crate::fock_op::{
    annulus_spectrum_closed, assemble_indicator, assemble_indicator_quadrature, assemble_symbol,
    build_counterexample_symbol, disk_spectrum_closed, CounterexampleSupport, GalerkinOperator,
};
use crate::frame_lab::{frame_bounds_estimate, Lattice, DEFAULT_PROBE_ORDER, DEFAULT_RADIUS};
use crate::geometry::{Domain, QuadratureSpec, RadialMeasure};
use crate::inverse_probe::{
    disk_verdict, double_orth_test, probe_residual, BasisTag, BlackBox, Verdict, VerdictTolerances,
};
use crate::special_fn::regularized_lower_gamma;
use crate::stft_bridge::{concentration, hermite_matrix_timedomain, SampledSignal, TFGrid};

type C64 = Complex64;

pub const CRITERIA: [(u8, &str); 10] = [
    (1, "disk spectrum"),
    (2, "annulus spectrum"),
    (3, "inverse procedure"),
    (4, "double orthogonality"),
    (5, "non-radial counterexample"),
    (6, "STFT cross-validation"),
    (7, "Bergman disc spectrum"),
    (8, "Cayley geometry"),
    (9, "Laguerre identities"),
    (10, "frame experiment"),
];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ValidationSettings {
    #[serde(default)]
    pub quad: QuadratureSpec,
    /// Seeds the random sampling of criterion 8; every other check is
    /// deterministic.
    #[serde(default)]
    pub seed: u64,
    #[serde(default = "all_criteria")]
    pub criteria: Vec<u8>,
}

fn all_criteria() -> Vec<u8> {
    CRITERIA.iter().map(|c| c.0).collect()
}

impl Default for ValidationSettings {
    fn default() -> Self {
        ValidationSettings {
            quad: QuadratureSpec::default(),
            seed: 0,
            criteria: all_criteria(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Relation {
    AtMost,
    AtLeast,
    Holds,
}

/// One measured quantity against its bound.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub label: String,
    pub measured: f64,
    pub relation: Relation,
    pub bound: f64,
    pub pass: bool,
}

impl Check {
    fn at_most(label: impl Into<String>, measured: f64, bound: f64) -> Self {
        Check {
            label: label.into(),
            measured,
            relation: Relation::AtMost,
            bound,
            pass: measured <= bound,
        }
    }

    fn at_least(label: impl Into<String>, measured: f64, bound: f64) -> Self {
        Check {
            label: label.into(),
            measured,
            relation: Relation::AtLeast,
            bound,
            pass: measured >= bound,
        }
    }

    /// A yes/no outcome; `measured` is 1 or 0.
    fn holds(label: impl Into<String>, ok: bool) -> Self {
        Check {
            label: label.into(),
            measured: if ok { 1.0 } else { 0.0 },
            relation: Relation::Holds,
            bound: 1.0,
            pass: ok,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CriterionResult {
    pub id: u8,
    pub name: String,
    pub pass: bool,
    pub checks: Vec<Check>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
    pub quadrature_failure: bool,
}

impl CriterionResult {
    /// `PASS  3 inverse procedure (12 checks)` or the failing detail.
    pub fn summary_line(&self) -> String {
        let head = format!(
            "{} {:>2} {}",
            if self.pass { "PASS" } else { "FAIL" },
            self.id,
            self.name
        );
        if let Some(e) = &self.error {
            let kind = if self.quadrature_failure {
                "quadrature failure"
            } else {
                "error"
            };
            return format!("{head}: {kind}: {e}");
        }
        let failed: Vec<&Check> = self.checks.iter().filter(|c| !c.pass).collect();
        match failed.first() {
            None => format!("{head} ({} checks)", self.checks.len()),
            Some(c) => format!(
                "{head}: {} of {} checks failed, first {} = {:e} ({:?} {:e})",
                failed.len(),
                self.checks.len(),
                c.label,
                c.measured,
                c.relation,
                c.bound
            ),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub all_pass: bool,
    pub results: Vec<CriterionResult>,
}

pub fn run_criterion(id: u8, settings: &ValidationSettings) -> Result<CriterionResult> {
    let name = CRITERIA
        .iter()
        .find(|c| c.0 == id)
        .map(|c| c.1)
        .ok_or_else(|| {
            Error::domain(
                "run_criterion",
                format!("no criterion {id}; valid ids are 1..=10"),
            )
        })?;
    let q = &settings.quad;
    let outcome = match id {
        1 => disk_spectrum(q),
        2 => annulus_spectrum(q),
        3 => inverse_procedure(q),
        4 => double_orthogonality(q),
        5 => counterexample(q),
        6 => stft_cross_validation(q),
        7 => bergman_disc(q),
        8 => cayley_geometry(settings.seed),
        9 => laguerre_identities(),
        _ => frame_experiment(),
    };
    Ok(match outcome {
        Ok(checks) => CriterionResult {
            id,
            name: name.to_string(),
            pass: !checks.is_empty() && checks.iter().all(|c| c.pass),
            checks,
            error: None,
            quadrature_failure: false,
        },
        Err(e) => CriterionResult {
            id,
            name: name.to_string(),
            pass: false,
            checks: Vec::new(),
            quadrature_failure: matches!(e, Error::NonConvergence { .. }),
            error: Some(e.to_string()),
        },
    })
}

pub fn run_validation(settings: &ValidationSettings) -> Result<ValidationReport> {
    settings.quad.validate()?;
    let results = settings
        .criteria
        .iter()
        .map(|&id| run_criterion(id, settings))
        .collect::<Result<Vec<_>>>()?;
    Ok(ValidationReport {
        all_pass: results.iter().all(|r| r.pass),
        results,
    })
}

fn sorted_desc(mut v: Vec<f64>) -> Vec<f64> {
    v.sort_by(|a, b| b.total_cmp(a));
    v
}

fn max_dev(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y).abs())
        .fold(0.0, f64::max)
}

fn diagonal(op: &GalerkinOperator) -> Vec<f64> {
    (0..op.size()).map(|n| op.entry(n, n).re).collect()
}

fn disk_spectrum(q: &QuadratureSpec) -> Result<Vec<Check>> {
    let mut checks = Vec::new();
    for r in [0.5, 1.0, 2.0] {
        let op = assemble_indicator(&Domain::centered_disk(r), 24, q)?;
        let eig = op.eigendecompose()?.eigenvalues;
        let closed = disk_spectrum_closed(r, 24)?;
        checks.push(Check::at_most(
            format!("R={r} max off-diagonal"),
            op.max_off_diagonal(),
            1e-8,
        ));
        checks.push(Check::at_most(
            format!("R={r} eigenvalue deviation"),
            max_dev(&eig, &sorted_desc(closed.clone())),
            1e-8,
        ));
        checks.push(Check::at_most(
            format!("R={r} diagonal deviation"),
            max_dev(&diagonal(&op), &closed),
            1e-8,
        ));
        let quad_op = assemble_indicator_quadrature(
            &Domain::centered_disk(r),
            &RadialMeasure::FockGaussian,
            24,
            q,
        )?;
        checks.push(Check::at_most(
            format!("R={r} quadrature max off-diagonal"),
            quad_op.max_off_diagonal(),
            1e-8,
        ));
        checks.push(Check::at_most(
            format!("R={r} quadrature eigenvalue deviation"),
            max_dev(&quad_op.eigendecompose()?.eigenvalues, &sorted_desc(closed)),
            1e-8,
        ));
    }
    Ok(checks)
}

fn annulus_spectrum(q: &QuadratureSpec) -> Result<Vec<Check>> {
    let op = assemble_indicator(&Domain::annulus(0.5, 1.0), 24, q)?;
    let closed = annulus_spectrum_closed(0.5, 1.0, 24)?;
    // oracle spelled out through the gamma function
    let direct: Vec<f64> = (0..24)
        .map(|n| {
            Ok(regularized_lower_gamma(n as f64 + 1.0, PI)?
                - regularized_lower_gamma(n as f64 + 1.0, PI / 4.0)?)
        })
        .collect::<Result<_>>()?;
    let eig = op.eigendecompose()?.eigenvalues;
    let quad_op = assemble_indicator_quadrature(
        &Domain::annulus(0.5, 1.0),
        &RadialMeasure::FockGaussian,
        24,
        q,
    )?;
    Ok(vec![
        Check::at_most(
            "closed form vs P(n+1,pi)-P(n+1,pi/4)",
            max_dev(&closed, &direct),
            1e-12,
        ),
        Check::at_most("max off-diagonal", op.max_off_diagonal(), 1e-8),
        Check::at_most(
            "eigenvalue deviation",
            max_dev(&eig, &sorted_desc(direct.clone())),
            1e-8,
        ),
        Check::at_most("diagonal deviation", max_dev(&diagonal(&op), &direct), 1e-8),
        Check::at_most(
            "quadrature max off-diagonal",
            quad_op.max_off_diagonal(),
            1e-8,
        ),
        Check::at_most(
            "quadrature eigenvalue deviation",
            max_dev(&quad_op.eigendecompose()?.eigenvalues, &sorted_desc(direct)),
            1e-8,
        ),
    ])
}

fn fock_box(domain: &Domain, q: &QuadratureSpec) -> Result<BlackBox> {
    BlackBox::from_operator(&assemble_indicator(domain, 48, q)?, BasisTag::Fock)
}

fn inverse_procedure(q: &QuadratureSpec) -> Result<Vec<Check>> {
    let probes: Vec<usize> = (0..8).collect();
    let tols = VerdictTolerances::default();
    let mut checks = Vec::new();
    for r in [0.4, 0.8, 1.2, 1.6] {
        let rep = disk_verdict(&fock_box(&Domain::centered_disk(r), q)?, &probes, tols)?;
        checks.push(Check::holds(
            format!("disk R={r} verdict DiskCentered"),
            rep.verdict == Verdict::DiskCentered,
        ));
        let err = rep.radius.map_or(f64::INFINITY, |x| (x - r).abs());
        checks.push(Check::at_most(
            format!("disk R={r} radius error"),
            err,
            1e-4,
        ));
    }
    let quad_box = BlackBox::from_operator(
        &assemble_indicator_quadrature(
            &Domain::centered_disk(1.2),
            &RadialMeasure::FockGaussian,
            48,
            q,
        )?,
        BasisTag::Fock,
    )?;
    let rep = disk_verdict(&quad_box, &probes, tols)?;
    let err = rep.radius.map_or(f64::INFINITY, |x| (x - 1.2).abs());
    checks.push(Check::at_most(
        "quadrature-assembled disk R=1.2 radius error",
        err,
        1e-4,
    ));
    let square = Domain::square(C64::new(0.0, 0.0), PI.sqrt());
    let rep = disk_verdict(&fock_box(&square, q)?, &probes, tols)?;
    checks.push(Check::holds(
        "square verdict NotRadial",
        rep.verdict == Verdict::NotRadial,
    ));

    let rep = disk_verdict(&fock_box(&Domain::annulus(0.5, 1.0), q)?, &probes, tols)?;
    checks.push(Check::holds(
        "annulus verdict RadialMultiRing",
        rep.verdict == Verdict::RadialMultiRing,
    ));
    let ring_err = match rep.rings.as_deref() {
        Some([[r_in, r_out]]) => (r_in - 0.5).abs().max((r_out - 1.0).abs()),
        _ => f64::INFINITY,
    };
    checks.push(Check::at_most(
        "annulus ring parameter error",
        ring_err,
        1e-3,
    ));
    Ok(checks)
}

fn double_orthogonality(q: &QuadratureSpec) -> Result<Vec<Check>> {
    let fock = RadialMeasure::FockGaussian;
    let tol = 1e-8;
    let mut checks = Vec::new();
    let disk = Domain::centered_disk(1.0);
    for m in 0..=4 {
        let r = double_orth_test(&disk, &fock, m, 8, tol, q)?;
        checks.push(Check::at_most(
            format!("disk m={m} worst |I_m,k| over k<=8"),
            r.worst_value,
            tol,
        ));
    }
    let square = double_orth_test(
        &Domain::square(C64::new(0.0, 0.0), PI.sqrt()),
        &fock,
        0,
        4,
        tol,
        q,
    )?;
    checks.push(Check::holds(
        "square first failure at k=4",
        square.first_failure == Some(4),
    ));
    checks.push(Check::at_least(
        "square |I_0,4|",
        square.worst_value,
        100.0 * tol,
    ));
    let off = double_orth_test(&Domain::disk(C64::new(0.3, 0.0), 0.5), &fock, 0, 4, tol, q)?;
    checks.push(Check::holds(
        "off-center disk first failure at k=1",
        off.first_failure == Some(1),
    ));
    Ok(checks)
}

fn counterexample(q: &QuadratureSpec) -> Result<Vec<Check>> {
    const SIZE: usize = 16;
    let mut checks = Vec::new();
    for target in 0..=2 {
        let sym = build_counterexample_symbol(target, CounterexampleSupport::default())?;
        let min = sample_min(&sym);
        checks.push(Check::at_least(
            format!("N={target} min symbol on samples"),
            min,
            0.0,
        ));
        let op = assemble_symbol(&sym, SIZE, q)?;
        let bb = BlackBox::from_operator(&op, BasisTag::Fock)?;
        let hit = probe_residual(&bb, target)?;
        let miss = probe_residual(&bb, target + 1)?;
        checks.push(Check::at_most(
            format!("N={target} residual of e_N"),
            hit.residual,
            1e-6,
        ));
        checks.push(Check::at_least(
            format!("N={target} residual of e_N+1"),
            miss.residual,
            1e-3,
        ));
        checks.push(Check::at_most(
            format!("N={target} |entry[{}][{target}]|", 2 * target + 1),
            op.entry(2 * target + 1, target).norm(),
            1e-8,
        ));
    }
    Ok(checks)
}

fn sample_min(sym: &crate::fock_op::SymbolFn) -> f64 {
    let mut min = f64::INFINITY;
    for i in 0..=300 {
        for j in 0..256 {
            let z = C64::from_polar(2.0 * i as f64 / 300.0, 2.0 * PI * j as f64 / 256.0);
            min = min.min(sym.eval(z));
        }
    }
    min
}

fn stft_cross_validation(q: &QuadratureSpec) -> Result<Vec<Check>> {
    let grid = TFGrid::default();
    let mut checks = Vec::new();
    let domains = [
        ("disk", Domain::centered_disk(1.0)),
        ("off-center disk", Domain::disk(C64::new(0.3, -0.2), 1.0)),
        ("annulus", Domain::annulus(0.5, 1.0)),
        ("square", Domain::square(C64::new(0.0, 0.0), PI.sqrt())),
        (
            "off-center square",
            Domain::square(C64::new(0.1, 0.2), PI.sqrt()),
        ),
    ];
    for (name, d) in domains {
        let g = hermite_matrix_timedomain(&d, &grid, 12)?;
        let f = assemble_indicator(&d.reflect(), 12, q)?;
        let worst = (0..12)
            .flat_map(|m| (0..12).map(move |n| (m, n)))
            .map(|(m, n)| (g[(m, n)] - f.entry(m, n)).norm())
            .fold(0.0, f64::max);
        checks.push(Check::at_most(
            format!("{name} time-domain vs reflected Fock"),
            worst,
            1e-3,
        ));
    }
    let c = concentration(
        &SampledSignal::hermite(0),
        &Domain::centered_disk(1.0),
        &grid,
    )?;
    checks.push(Check::at_most(
        "concentration of h_0 on D(0,1) vs P(1,pi)",
        (c - regularized_lower_gamma(1.0, PI)?).abs(),
        1e-3,
    ));
    Ok(checks)
}

fn bergman_disc(q: &QuadratureSpec) -> Result<Vec<Check>> {
    let mut checks = Vec::new();
    for alpha in [0.0, 0.5, 2.0] {
        for r in [0.3, 0.6, 0.9] {
            let op = bergman_galerkin(&Domain::centered_disk(r), alpha, 17, q)?;
            let closed = (0..17)
                .map(|n| disc_eigenvalue_closed(r, n, alpha))
                .collect::<Result<Vec<_>>>()?;
            let eig = op.eigendecompose()?.eigenvalues;
            checks.push(Check::at_most(
                format!("alpha={alpha} r={r} eigenvalue deviation"),
                max_dev(&eig, &sorted_desc(closed.clone())).max(max_dev(&diagonal(&op), &closed)),
                1e-8,
            ));
            let measure = RadialMeasure::bergman(alpha)?;
            let quad_op =
                assemble_indicator_quadrature(&Domain::centered_disk(r), &measure, 17, q)?;
            checks.push(Check::at_most(
                format!("alpha={alpha} r={r} quadrature eigenvalue deviation"),
                max_dev(&quad_op.eigendecompose()?.eigenvalues, &sorted_desc(closed)),
                1e-8,
            ));
        }
        let r = 1.0 - 1e-6;
        let worst = (0..=16)
            .map(|m| disc_eigenvalue_closed(r, m, alpha).map(|c| (1.0 - c).abs()))
            .collect::<Result<Vec<_>>>()?;
        checks.push(Check::at_most(
            format!("alpha={alpha} |1 - C(1-1e-6, m)|, m<=16"),
            worst.into_iter().fold(0.0, f64::max),
            1e-4,
        ));
    }
    Ok(checks)
}

fn cayley_geometry(seed: u64) -> Result<Vec<Check>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let upper =
        |rng: &mut ChaCha8Rng| C64::new(rng.random_range(-5.0..5.0), rng.random_range(0.01..5.0));
    let mut worst: f64 = 0.0;
    for _ in 0..1000 {
        let (z1, z2) = (upper(&mut rng), upper(&mut rng));
        let d = rho_halfplane(z1, z2)? - rho_disc(cayley_to_disc(z1)?, cayley_to_disc(z2)?)?;
        worst = worst.max(d.abs());
    }
    let mut checks = vec![Check::at_most(
        "pseudohyperbolic metric invariance, 1000 pairs",
        worst,
        1e-12,
    )];

    for (center, rho) in [
        (C64::new(0.0, 1.0), 0.5),
        (C64::new(0.0, 1.0), 0.8),
        (C64::new(0.7, 1.6), 0.4),
    ] {
        let pd = PseudoDisk::new(center, rho)?;
        let image = map_pseudodisk(&pd);
        let samples = 10_000;
        let mut agree = 0usize;
        for _ in 0..samples {
            // uniform in the unit disc
            let w = C64::from_polar(rng.random::<f64>().sqrt(), rng.random_range(0.0..2.0 * PI));
            if pd.contains(cayley_to_halfplane(w)?) == image.contains(w) {
                agree += 1;
            }
        }
        checks.push(Check::at_least(
            format!("pseudodisk({center}, {rho}) indicator agreement"),
            agree as f64 / samples as f64,
            0.999,
        ));
        if center == C64::new(0.0, 1.0) {
            let same = match image {
                Domain::Disk { center: c, radius } => {
                    c[0].abs() < 1e-15 && c[1].abs() < 1e-15 && (radius - rho).abs() < 1e-15
                }
                _ => false,
            };
            checks.push(Check::holds(
                format!("pseudodisk(i, {rho}) maps to D(0, {rho})"),
                same,
            ));
        }
    }
    Ok(checks)
}

fn laguerre_identities() -> Result<Vec<Check>> {
    let mut worst: f64 = 0.0;
    for n in 0..=8 {
        for alpha in [0.0, 0.5, 1.5] {
            for s in [1.2, 2.0, 5.0] {
                worst = worst.max(laguerre_laplace_check(n, alpha, s)?.abs_err);
            }
        }
    }
    let mut checks = vec![Check::at_most(
        "Laplace transform of x^a L_n^a, n<=8",
        worst,
        1e-8,
    )];
    let points = [
        C64::new(0.0, 1.0),
        C64::new(0.7, 1.3),
        C64::new(-1.0, 0.5),
        C64::new(2.0, 2.0),
        C64::new(-0.3, 0.8),
    ];
    for (n, alpha) in [(0, 0.0), (2, 0.5), (3, 1.5)] {
        let worst = points
            .iter()
            .map(|&z| ber_psi_check(n, alpha, z).map(|c| c.abs_err))
            .collect::<Result<Vec<_>>>()?;
        checks.push(Check::at_most(
            format!("Ber psi_{n} = Psi_{n} (alpha={alpha}), 5 points"),
            worst.into_iter().fold(0.0, f64::max),
            1e-4,
        ));
    }
    Ok(checks)
}

fn frame_experiment() -> Result<Vec<Check>> {
    let n = DEFAULT_PROBE_ORDER;
    let rect = frame_bounds_estimate(&Lattice::rectangular(2.0, DEFAULT_RADIUS)?, n)?;
    let hex = frame_bounds_estimate(&Lattice::hexagonal(2.0, DEFAULT_RADIUS)?, n)?;
    let mut checks = vec![Check::at_most(
        "hex/rect condition ratio at redundancy 2",
        hex.cond_est / rect.cond_est,
        1.0 - f64::EPSILON,
    )];
    let mut tightest = f64::INFINITY;
    for red in [1.5, 2.0, 3.0] {
        for lat in [
            Lattice::rectangular(red, DEFAULT_RADIUS)?,
            Lattice::hexagonal(red, DEFAULT_RADIUS)?,
        ] {
            tightest = tightest.min(frame_bounds_estimate(&lat, n)?.cond_est);
        }
    }
    checks.push(Check::at_least(
        "smallest cond_est over the sweep",
        tightest,
        1.0 + 1e-3,
    ));
    let rect2 = frame_bounds_estimate(&Lattice::rectangular(2.0, 2.0 * DEFAULT_RADIUS)?, n)?;
    let hex2 = frame_bounds_estimate(&Lattice::hexagonal(2.0, 2.0 * DEFAULT_RADIUS)?, n)?;
    let drift = ((rect2.cond_est - rect.cond_est) / rect.cond_est)
        .abs()
        .max(((hex2.cond_est - hex.cond_est) / hex.cond_est).abs());
    checks.push(Check::at_most(
        "relative cond_est change under radius doubling",
        drift,
        0.02,
    ));
    Ok(checks)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unreachable_tolerance_is_flagged_as_quadrature_failure() {
        let settings = ValidationSettings {
            quad: QuadratureSpec::new(16, 24, 1e-15).unwrap(),
            criteria: vec![4],
            ..Default::default()
        };
        let rep = run_validation(&settings).unwrap();
        let r = &rep.results[0];
        assert!(!rep.all_pass && !r.pass);
        assert!(r.quadrature_failure, "{r:?}");
        assert!(r
            .summary_line()
            .starts_with("FAIL  4 double orthogonality: quadrature failure"));
    }

    #[test]
    fn seed_only_moves_random_checks() {
        let a = run_criterion(9, &ValidationSettings::default()).unwrap();
        let b = run_criterion(
            9,
            &ValidationSettings {
                seed: 99,
                ..Default::default()
            },
        )
        .unwrap();
        assert_eq!(a, b);
        let c = run_criterion(
            8,
            &ValidationSettings {
                seed: 99,
                ..Default::default()
            },
        )
        .unwrap();
        assert!(c.pass, "{}", c.summary_line());
    }

    #[test]
    fn unknown_criterion() {
        assert!(run_criterion(11, &ValidationSettings::default()).is_err());
        let s: ValidationSettings = serde_json::from_str("{}").unwrap();
        assert_eq!(s, ValidationSettings::default());
        assert!(serde_json::from_str::<ValidationSettings>(r#"{"sed": 1}"#).is_err());
    }
}
