//! Experiment runner behind the `tflocal` binary.
//!
//! A run reads one JSON config, fills in every default, hashes the result
//! and writes CSV/JSON artifacts stamped with that hash. Config problems map
//! to exit code 2, numerical failures to exit code 3.

use std::fs;
use std::path::{Path, PathBuf};

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use tflocal_core::bergman_wavelet::{
    ber_psi_check, bergman_galerkin, disc_eigenvalue_closed, laguerre_laplace_check,
    map_pseudodisk, PseudoDisk,
};
use tflocal_core::fock_op::{
    assemble_indicator_with, assemble_symbol, build_counterexample_symbol, CounterexampleSupport,
    GalerkinOperator,
};
use tflocal_core::frame_lab::{
    condition_sweep, frame_bounds_estimate, FrameEstimate, Lattice, DEFAULT_PROBE_ORDER,
    DEFAULT_RADIUS,
};
use tflocal_core::geometry::{Domain, QuadratureSpec, RadialMeasure};
use tflocal_core::inverse_probe::{
    disk_verdict, probe_residual, BasisTag, BlackBox, ProbeRecord, ProbeReport, VerdictTolerances,
};
use tflocal_core::io::{
    matrix_from_csv, matrix_to_csv, signal_to_csv, spectrum_to_csv, table_to_csv, OperatorEnvelope,
    Stamp,
};
use tflocal_core::stft_bridge::{
    apply_localization, hermite_matrix_timedomain, SampledSignal, TFGrid,
};
use tflocal_core::validation::{run_validation, ValidationReport, ValidationSettings, CRITERIA};

pub const EXIT_CONFIG: i32 = 2;
pub const EXIT_NUMERIC: i32 = 3;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("config error: {0}")]
    Config(String),
    #[error("numeric failure: {0}")]
    Numeric(#[from] tflocal_core::Error),
    #[error("cannot write {path}: {source}")]
    Output {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("validation failed: criteria {0:?}")]
    ValidationFailed(Vec<u8>),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => EXIT_CONFIG,
            _ => EXIT_NUMERIC,
        }
    }
}

fn config_err(e: impl std::fmt::Display) -> CliError {
    CliError::Config(e.to_string())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum Command {
    Direct,
    Probe,
    Symbol,
    Wavelet,
    Frames,
    Validate,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Direct => "direct",
            Command::Probe => "probe",
            Command::Symbol => "symbol",
            Command::Wavelet => "wavelet",
            Command::Frames => "frames",
            Command::Validate => "validate",
        }
    }
}

/// Time-domain cross-check attached to `direct`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StftConfig {
    #[serde(default)]
    pub grid: TFGrid,
    /// Hermite functions to localize and export as signals.
    #[serde(default = "default_hermite")]
    pub hermite: Vec<usize>,
}

fn default_hermite() -> Vec<usize> {
    vec![0, 1, 2]
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SupportConfig {
    pub a: f64,
    pub c: f64,
    pub b: f64,
}

impl Default for SupportConfig {
    fn default() -> Self {
        let CounterexampleSupport { a, c, b } = CounterexampleSupport::default();
        SupportConfig { a, c, b }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SymbolConfig {
    #[serde(default)]
    pub target: usize,
    #[serde(default)]
    pub support: SupportConfig,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WaveletConfig {
    #[serde(default = "default_alpha")]
    pub alpha: f64,
    /// Radius of the centered disc `D(0, r)` in the unit disc.
    #[serde(default = "default_disc_radius")]
    pub radius: f64,
    #[serde(default = "default_laguerre_max_n")]
    pub laguerre_max_n: usize,
    #[serde(default = "default_laguerre_s")]
    pub laguerre_s: Vec<f64>,
    #[serde(default = "default_ber_orders")]
    pub ber_orders: Vec<usize>,
    /// Upper half-plane points `[re, im]`.
    #[serde(default = "default_ber_points")]
    pub ber_points: Vec<[f64; 2]>,
}

fn default_alpha() -> f64 {
    0.5
}
fn default_disc_radius() -> f64 {
    0.6
}
fn default_laguerre_max_n() -> usize {
    8
}
fn default_laguerre_s() -> Vec<f64> {
    vec![1.2, 2.0, 5.0]
}
fn default_ber_orders() -> Vec<usize> {
    vec![0, 1, 2, 3]
}
fn default_ber_points() -> Vec<[f64; 2]> {
    vec![[0.0, 1.0], [0.7, 1.3], [-1.0, 0.5], [2.0, 2.0], [-0.3, 0.8]]
}

impl Default for WaveletConfig {
    fn default() -> Self {
        serde_json::from_str("{}").expect("all fields have defaults")
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FramesConfig {
    #[serde(default = "default_redundancies")]
    pub redundancies: Vec<f64>,
    #[serde(default = "default_radius")]
    pub truncation_radius: f64,
    #[serde(default = "default_probe_order")]
    pub probe_order: usize,
}

fn default_redundancies() -> Vec<f64> {
    vec![1.5, 2.0, 3.0]
}
fn default_radius() -> f64 {
    DEFAULT_RADIUS
}
fn default_probe_order() -> usize {
    DEFAULT_PROBE_ORDER
}

impl Default for FramesConfig {
    fn default() -> Self {
        serde_json::from_str("{}").expect("all fields have defaults")
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ValidateConfig {
    #[serde(default = "default_criteria")]
    pub criteria: Vec<u8>,
}

fn default_criteria() -> Vec<u8> {
    CRITERIA.iter().map(|c| c.0).collect()
}

impl Default for ValidateConfig {
    fn default() -> Self {
        ValidateConfig {
            criteria: default_criteria(),
        }
    }
}

/// The whole experiment description. Domains live in the Fock plane; the
/// time-frequency region of the same experiment is `domain.reflect()`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    #[serde(default)]
    pub command: Option<Command>,
    #[serde(default)]
    pub domain: Option<Domain>,
    #[serde(default = "default_measure")]
    pub measure: RadialMeasure,
    #[serde(rename = "N", default = "default_size")]
    pub n: usize,
    #[serde(default)]
    pub quadrature: QuadratureSpec,
    #[serde(default)]
    pub tolerances: VerdictTolerances,
    #[serde(default = "default_probes")]
    pub probes: Vec<usize>,
    /// CSV matrix acting as the black box of `probe`; relative paths are
    /// resolved against the config file.
    #[serde(default)]
    pub matrix_file: Option<PathBuf>,
    /// Basis of `matrix_file`; defaults to the one matching `measure`.
    #[serde(default)]
    pub basis: Option<BasisTag>,
    #[serde(default)]
    pub stft: Option<StftConfig>,
    #[serde(default)]
    pub symbol: SymbolConfig,
    #[serde(default)]
    pub wavelet: WaveletConfig,
    #[serde(default)]
    pub frames: FramesConfig,
    #[serde(default)]
    pub validate: ValidateConfig,
    #[serde(default)]
    pub out: Option<PathBuf>,
    #[serde(default)]
    pub seed: u64,
}

fn default_measure() -> RadialMeasure {
    RadialMeasure::FockGaussian
}
fn default_size() -> usize {
    24
}
fn default_probes() -> Vec<usize> {
    (0..8).collect()
}

fn basis_of(measure: &RadialMeasure) -> BasisTag {
    match *measure {
        RadialMeasure::FockGaussian => BasisTag::Fock,
        RadialMeasure::BergmanAlpha { alpha } => BasisTag::Bergman { alpha },
    }
}

impl ExperimentConfig {
    pub fn parse(text: &str) -> Result<Self, CliError> {
        serde_json::from_str(text).map_err(config_err)
    }

    /// Applies the command line and fills the remaining defaults, then checks
    /// everything that can be checked before any numerics run.
    pub fn materialize(
        mut self,
        command: Command,
        out: Option<PathBuf>,
        seed: Option<u64>,
    ) -> Result<Self, CliError> {
        match self.command {
            Some(c) if c != command => {
                return Err(CliError::Config(format!(
                    "config is for '{}' but '{}' was requested",
                    c.name(),
                    command.name()
                )));
            }
            _ => self.command = Some(command),
        }
        if let Some(o) = out {
            self.out = Some(o);
        }
        self.out.get_or_insert_with(|| PathBuf::from("out"));
        if let Some(s) = seed {
            self.seed = s;
        }
        self.basis.get_or_insert(basis_of(&self.measure));
        self.check()?;
        Ok(self)
    }

    fn check(&self) -> Result<(), CliError> {
        self.measure.validate().map_err(config_err)?;
        self.quadrature.validate().map_err(config_err)?;
        if self.n == 0 {
            return Err(CliError::Config("N must be positive".into()));
        }
        if let Some(d) = &self.domain {
            d.validate().map_err(config_err)?;
        }
        if let Some(s) = &self.stft {
            s.grid.validate().map_err(config_err)?;
        }
        if !(self.tolerances.tol > 0.0 && self.tolerances.consistency_tol > 0.0) {
            return Err(CliError::Config("tolerances must be positive".into()));
        }
        let needs_domain = match self.command {
            Some(Command::Direct) => true,
            Some(Command::Probe) => self.matrix_file.is_none(),
            _ => false,
        };
        if needs_domain && self.domain.is_none() {
            return Err(CliError::Config("this command needs a 'domain'".into()));
        }
        if self.command == Some(Command::Probe)
            && self.domain.is_some()
            && self.matrix_file.is_some()
        {
            return Err(CliError::Config(
                "give either 'domain' or 'matrix_file', not both".into(),
            ));
        }
        if self.command == Some(Command::Probe) && self.probes.is_empty() {
            return Err(CliError::Config("'probes' must not be empty".into()));
        }
        if let Some(bad) = self
            .validate
            .criteria
            .iter()
            .find(|id| !CRITERIA.iter().any(|c| c.0 == **id))
        {
            return Err(CliError::Config(format!("no acceptance criterion {bad}")));
        }
        if self
            .frames
            .redundancies
            .iter()
            .any(|r| r.is_nan() || *r <= 1.0)
        {
            return Err(CliError::Config("frame redundancies must exceed 1".into()));
        }
        if self
            .wavelet
            .ber_points
            .iter()
            .any(|p| p[1].is_nan() || p[1] <= 0.0)
        {
            return Err(CliError::Config(
                "wavelet.ber_points must lie in the upper half-plane".into(),
            ));
        }
        Ok(())
    }

    /// SHA-256 of the materialized config, ignoring the output directory.
    pub fn hash(&self) -> String {
        let mut c = self.clone();
        c.out = None;
        let text = serde_json::to_string(&c).expect("config serializes");
        Sha256::digest(text.as_bytes())
            .iter()
            .map(|b| format!("{b:02x}"))
            .collect()
    }

    fn domain(&self) -> &Domain {
        self.domain.as_ref().expect("checked in materialize")
    }
}

/// Collects artifacts in the output directory.
struct Sink {
    dir: PathBuf,
    stamp: Stamp,
    written: Vec<PathBuf>,
}

impl Sink {
    fn new(dir: &Path, hash: String) -> Result<Self, CliError> {
        fs::create_dir_all(dir).map_err(|source| CliError::Output {
            path: dir.to_path_buf(),
            source,
        })?;
        Ok(Sink {
            dir: dir.to_path_buf(),
            stamp: Stamp::new(hash),
            written: Vec::new(),
        })
    }

    fn text(&mut self, name: &str, body: &str) -> Result<(), CliError> {
        let path = self.dir.join(name);
        fs::write(&path, body).map_err(|source| CliError::Output {
            path: path.clone(),
            source,
        })?;
        self.written.push(path);
        Ok(())
    }

    /// Pretty JSON with the stamp merged into the top-level object.
    fn json(&mut self, name: &str, value: &impl Serialize) -> Result<(), CliError> {
        let mut v = serde_json::to_value(value).expect("artifact serializes");
        if let serde_json::Value::Object(map) = &mut v {
            map.insert("config_hash".into(), self.stamp.config_hash.clone().into());
            map.insert(
                "versions".into(),
                serde_json::to_value(&self.stamp.versions).expect("versions serialize"),
            );
        }
        let body = serde_json::to_string_pretty(&v).expect("artifact serializes") + "\n";
        self.text(name, &body)
    }
}

/// What a run produced, for the terminal summary.
#[derive(Debug, Clone)]
pub struct RunSummary {
    pub files: Vec<PathBuf>,
    pub lines: Vec<String>,
}

pub fn run_file(
    command: Command,
    config_path: &Path,
    out: Option<PathBuf>,
    seed: Option<u64>,
) -> Result<RunSummary, CliError> {
    let text = fs::read_to_string(config_path)
        .map_err(|e| CliError::Config(format!("cannot read {}: {e}", config_path.display())))?;
    let mut cfg = ExperimentConfig::parse(&text)?;
    if let Some(m) = &cfg.matrix_file {
        if m.is_relative() {
            cfg.matrix_file = Some(config_path.parent().unwrap_or(Path::new(".")).join(m));
        }
    }
    run(cfg.materialize(command, out, seed)?)
}

/// Runs a materialized config.
pub fn run(cfg: ExperimentConfig) -> Result<RunSummary, CliError> {
    let command = cfg
        .command
        .ok_or_else(|| CliError::Config("command not set".into()))?;
    let out = cfg
        .out
        .clone()
        .ok_or_else(|| CliError::Config("output directory not set".into()))?;
    let mut sink = Sink::new(&out, cfg.hash())?;
    sink.json("config.json", &cfg)?;
    let lines = match command {
        Command::Direct => run_direct(&cfg, &mut sink)?,
        Command::Probe => run_probe(&cfg, &mut sink)?,
        Command::Symbol => run_symbol(&cfg, &mut sink)?,
        Command::Wavelet => run_wavelet(&cfg, &mut sink)?,
        Command::Frames => run_frames(&cfg, &mut sink)?,
        Command::Validate => run_validate(&cfg, &mut sink)?,
    };
    Ok(RunSummary {
        files: sink.written,
        lines,
    })
}

fn assemble(cfg: &ExperimentConfig, domain: &Domain) -> Result<GalerkinOperator, CliError> {
    Ok(match cfg.measure {
        RadialMeasure::BergmanAlpha { alpha } => {
            bergman_galerkin(domain, alpha, cfg.n, &cfg.quadrature)?
        }
        m => assemble_indicator_with(domain, &m, cfg.n, &cfg.quadrature)?,
    })
}

#[derive(Serialize)]
struct DirectMeta {
    #[serde(flatten)]
    envelope: OperatorEnvelope,
    hermitian_defect: f64,
    max_off_diagonal: f64,
    trace: f64,
    unitarity_defect: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    closed_form_max_deviation: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    timedomain_max_deviation: Option<f64>,
}

fn run_direct(cfg: &ExperimentConfig, sink: &mut Sink) -> Result<Vec<String>, CliError> {
    let domain = cfg.domain();
    let op = assemble(cfg, domain)?;
    let spec = op.eigendecompose()?;
    // closed form for unions of centered rings, reordered like the eigenvalues
    let closed = match domain.centered_rings() {
        Some(rings) => {
            let r_max = cfg.measure.support_radius();
            let mut v = (0..cfg.n)
                .map(|n| {
                    rings
                        .iter()
                        .map(|&(a, b)| cfg.measure.ring_mass(n, a.min(r_max), b.min(r_max)))
                        .sum::<tflocal_core::Result<f64>>()
                })
                .collect::<tflocal_core::Result<Vec<f64>>>()?;
            v.sort_by(|a, b| b.total_cmp(a));
            Some(v)
        }
        None => None,
    };
    let closed_dev = closed.as_ref().map(|c| {
        spec.eigenvalues
            .iter()
            .zip(c)
            .map(|(l, c)| (l - c).abs())
            .fold(0.0, f64::max)
    });

    sink.text(
        "spectrum.csv",
        &spectrum_to_csv(&spec, closed.as_deref(), &sink.stamp),
    )?;
    sink.text("matrix.csv", &matrix_to_csv(&op.matrix, &sink.stamp))?;

    let mut lines = vec![format!(
        "N = {}, largest eigenvalue {:.12}",
        cfg.n,
        spec.eigenvalues.first().copied().unwrap_or(0.0)
    )];
    if let Some(d) = closed_dev {
        lines.push(format!("max deviation from closed form {d:.3e}"));
    }
    let mut td_dev = None;
    if let Some(stft) = &cfg.stft {
        if !matches!(cfg.measure, RadialMeasure::FockGaussian) {
            return Err(CliError::Config(
                "'stft' needs the fock_gaussian measure".into(),
            ));
        }
        let tf_domain = domain.reflect();
        let g = hermite_matrix_timedomain(&tf_domain, &stft.grid, cfg.n)?;
        let dev = g
            .iter()
            .zip(op.matrix.iter())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max);
        td_dev = Some(dev);
        sink.text("timedomain_matrix.csv", &matrix_to_csv(&g, &sink.stamp))?;
        for &n in &stft.hermite {
            let h = SampledSignal::hermite(n);
            let out = apply_localization(&h, &tf_domain, &stft.grid)?;
            let (csv, side) = signal_to_csv(&out, &sink.stamp)?;
            sink.text(&format!("localized_h{n}.csv"), &csv)?;
            sink.text(&format!("localized_h{n}.json"), &(side + "\n"))?;
        }
        lines.push(format!(
            "time-domain vs Fock matrix max deviation {dev:.3e}"
        ));
    }
    let meta = DirectMeta {
        envelope: OperatorEnvelope::new(&op, &sink.stamp),
        hermitian_defect: op.hermitian_defect(),
        max_off_diagonal: op.max_off_diagonal(),
        trace: op.trace(),
        unitarity_defect: spec.unitarity_defect(),
        closed_form_max_deviation: closed_dev,
        timedomain_max_deviation: td_dev,
    };
    sink.text(
        "meta.json",
        &(serde_json::to_string_pretty(&meta).expect("meta serializes") + "\n"),
    )?;
    Ok(lines)
}

#[derive(Serialize)]
struct ProbeOutput<'a> {
    #[serde(flatten)]
    report: &'a ProbeReport,
    source: String,
    linearity_defect: f64,
}

fn run_probe(cfg: &ExperimentConfig, sink: &mut Sink) -> Result<Vec<String>, CliError> {
    let basis = cfg.basis.unwrap_or(basis_of(&cfg.measure));
    let (bb, source) = match &cfg.matrix_file {
        Some(path) => {
            let text = fs::read_to_string(path)
                .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
            let m = matrix_from_csv(&text).map_err(config_err)?;
            if m.nrows() != cfg.n {
                return Err(CliError::Config(format!(
                    "matrix file is {0}x{0} but N is {1}",
                    m.nrows(),
                    cfg.n
                )));
            }
            (
                BlackBox::from_matrix(m, basis).map_err(config_err)?,
                format!("matrix file {}", path.display()),
            )
        }
        None => {
            let op = assemble(cfg, cfg.domain())?;
            (
                BlackBox::from_operator(&op, basis)?,
                format!(
                    "hidden domain {}",
                    serde_json::to_string(cfg.domain()).expect("domain serializes")
                ),
            )
        }
    };
    if let Some(&p) = cfg.probes.iter().max() {
        if p + tflocal_core::inverse_probe::GUARD_BAND > cfg.n {
            return Err(CliError::Config(format!(
                "probe {p} needs N >= {}",
                p + tflocal_core::inverse_probe::GUARD_BAND
            )));
        }
    }
    let linearity_defect = bb.check_linearity(4, cfg.seed)?;
    let report = disk_verdict(&bb, &cfg.probes, cfg.tolerances)?;
    sink.json(
        "probe_report.json",
        &ProbeOutput {
            report: &report,
            source,
            linearity_defect,
        },
    )?;
    let mut lines = vec![format!("verdict {:?}", report.verdict)];
    if let Some(r) = report.radius {
        lines.push(format!("radius {r:.10}"));
    }
    if let Some(rings) = &report.rings {
        lines.push(format!("rings {rings:?}"));
    }
    lines.push(format!("caveat: {}", report.caveat));
    Ok(lines)
}

#[derive(Serialize)]
struct SymbolMeta {
    #[serde(flatten)]
    envelope: OperatorEnvelope,
    target: usize,
    support: SupportConfig,
    angular_order: usize,
    eigen_probe: ProbeRecord,
    neighbour_probe: ProbeRecord,
    moment_entry: f64,
}

fn run_symbol(cfg: &ExperimentConfig, sink: &mut Sink) -> Result<Vec<String>, CliError> {
    let t = cfg.symbol.target;
    if cfg.n < t + 1 + tflocal_core::inverse_probe::GUARD_BAND || cfg.n < 2 * t + 2 {
        return Err(CliError::Config(format!(
            "N = {} is too small for target {t}",
            cfg.n
        )));
    }
    let SupportConfig { a, c, b } = cfg.symbol.support;
    let sym =
        build_counterexample_symbol(t, CounterexampleSupport { a, c, b }).map_err(|e| match e {
            tflocal_core::Error::Domain { .. } => config_err(e),
            e => CliError::Numeric(e),
        })?;
    let op = assemble_symbol(&sym, cfg.n, &cfg.quadrature)?;
    let spec = op.eigendecompose()?;
    let bb = BlackBox::from_operator(&op, BasisTag::Fock)?;
    let hit = probe_residual(&bb, t)?;
    let miss = probe_residual(&bb, t + 1)?;
    let moment_entry = op.entry(2 * t + 1, t).norm();
    sink.text("spectrum.csv", &spectrum_to_csv(&spec, None, &sink.stamp))?;
    sink.text("matrix.csv", &matrix_to_csv(&op.matrix, &sink.stamp))?;
    let meta = SymbolMeta {
        envelope: OperatorEnvelope::new(&op, &sink.stamp),
        target: t,
        support: cfg.symbol.support,
        angular_order: sym.angular_order(),
        eigen_probe: hit,
        neighbour_probe: miss,
        moment_entry,
    };
    sink.text(
        "meta.json",
        &(serde_json::to_string_pretty(&meta).expect("meta serializes") + "\n"),
    )?;
    Ok(vec![
        format!(
            "e_{t} residual {:.3e} (eigenvalue {:.12})",
            hit.residual, hit.lambda
        ),
        format!("e_{} residual {:.3e}", t + 1, miss.residual),
        format!("|entry[{}][{t}]| = {moment_entry:.3e}", 2 * t + 1),
    ])
}

#[derive(Serialize)]
struct PseudoDiskOutput {
    pseudodisk: PseudoDisk,
    image: Domain,
}

fn run_wavelet(cfg: &ExperimentConfig, sink: &mut Sink) -> Result<Vec<String>, CliError> {
    let w = &cfg.wavelet;
    RadialMeasure::bergman(w.alpha).map_err(config_err)?;
    let disc = Domain::centered_disk(w.radius);
    disc.validate().map_err(config_err)?;
    let op = bergman_galerkin(&disc, w.alpha, cfg.n, &cfg.quadrature).map_err(|e| match e {
        tflocal_core::Error::InvalidDomain(_) => config_err(e),
        e => CliError::Numeric(e),
    })?;
    let spec = op.eigendecompose()?;
    let mut closed = (0..cfg.n)
        .map(|n| disc_eigenvalue_closed(w.radius, n, w.alpha))
        .collect::<tflocal_core::Result<Vec<_>>>()?;
    closed.sort_by(|a, b| b.total_cmp(a));
    let dev = spec
        .eigenvalues
        .iter()
        .zip(&closed)
        .map(|(l, c)| (l - c).abs())
        .fold(0.0, f64::max);
    sink.text(
        "spectrum.csv",
        &spectrum_to_csv(&spec, Some(&closed), &sink.stamp),
    )?;

    let mut rows = Vec::new();
    for n in 0..=w.laguerre_max_n {
        for &s in &w.laguerre_s {
            let c = laguerre_laplace_check(n, w.alpha, s).map_err(config_err)?;
            rows.push(vec![n as f64, w.alpha, s, c.lhs, c.rhs, c.abs_err]);
        }
    }
    let lag_worst = rows.iter().map(|r| r[5]).fold(0.0, f64::max);
    sink.text(
        "laguerre.csv",
        &table_to_csv(
            &["n", "alpha", "s", "lhs", "rhs", "abs_err"],
            &rows,
            &sink.stamp,
        ),
    )?;

    let mut rows = Vec::new();
    for &n in &w.ber_orders {
        for p in &w.ber_points {
            let c = ber_psi_check(n, w.alpha, C64::new(p[0], p[1]))?;
            rows.push(vec![
                n as f64, p[0], p[1], c.lhs.re, c.lhs.im, c.rhs.re, c.rhs.im, c.abs_err,
            ]);
        }
    }
    let ber_worst = rows.iter().map(|r| r[7]).fold(0.0, f64::max);
    sink.text(
        "ber_psi.csv",
        &table_to_csv(
            &[
                "n", "z_re", "z_im", "ber_re", "ber_im", "psi_re", "psi_im", "abs_err",
            ],
            &rows,
            &sink.stamp,
        ),
    )?;

    // the Bergman probe recovers the disc and hands back its half-plane preimage
    let bb = BlackBox::from_operator(&op, BasisTag::Bergman { alpha: w.alpha })?;
    let probes: Vec<usize> = cfg
        .probes
        .iter()
        .copied()
        .filter(|p| p + tflocal_core::inverse_probe::GUARD_BAND <= cfg.n)
        .collect();
    if probes.is_empty() {
        return Err(CliError::Config(format!("no probe fits in N = {}", cfg.n)));
    }
    let report = disk_verdict(&bb, &probes, cfg.tolerances)?;
    sink.json("probe_report.json", &report)?;
    let pd = report.pseudodisk.ok_or_else(|| {
        CliError::Numeric(tflocal_core::Error::SolverFailure(format!(
            "probe verdict {:?} carries no pseudodisk",
            report.verdict
        )))
    })?;
    sink.json(
        "pseudodisk.json",
        &PseudoDiskOutput {
            pseudodisk: pd,
            image: map_pseudodisk(&pd),
        },
    )?;
    Ok(vec![
        format!("disc eigenvalues vs I_(r^2)(n+1, alpha+1): max deviation {dev:.3e}"),
        format!("Laguerre-Laplace identity: max error {lag_worst:.3e}"),
        format!("Ber psi_n = Psi_n: max error {ber_worst:.3e}"),
        format!("pseudodisk center i, rho {:.10}", pd.rho()),
    ])
}

#[derive(Serialize)]
struct FramesOutput {
    estimator: &'static str,
    probe_order: usize,
    truncation_radius: f64,
    rows: Vec<FrameRow>,
}

#[derive(Serialize)]
struct FrameRow {
    redundancy: f64,
    rectangular: FrameEstimate,
    hexagonal: FrameEstimate,
}

const ESTIMATOR: &str = "finite-section estimate: extreme eigenvalues of the leading N - N/4 block of the truncated frame operator; ordering comparisons only, not certified bounds";

fn run_frames(cfg: &ExperimentConfig, sink: &mut Sink) -> Result<Vec<String>, CliError> {
    let f = &cfg.frames;
    let sweep = condition_sweep(&f.redundancies, f.truncation_radius, f.probe_order).map_err(
        |e| match e {
            tflocal_core::Error::TruncationRisk(_) | tflocal_core::Error::Domain { .. } => {
                config_err(e)
            }
            e => CliError::Numeric(e),
        },
    )?;
    let rows: Vec<Vec<f64>> = sweep
        .iter()
        .map(|r| vec![r.redundancy, r.rect_cond, r.hex_cond, r.ratio])
        .collect();
    sink.text(
        "sweep.csv",
        &table_to_csv(
            &["redundancy", "rect_cond", "hex_cond", "ratio"],
            &rows,
            &sink.stamp,
        ),
    )?;
    let detail = f
        .redundancies
        .iter()
        .map(|&red| {
            Ok(FrameRow {
                redundancy: red,
                rectangular: frame_bounds_estimate(
                    &Lattice::rectangular(red, f.truncation_radius)?,
                    f.probe_order,
                )?,
                hexagonal: frame_bounds_estimate(
                    &Lattice::hexagonal(red, f.truncation_radius)?,
                    f.probe_order,
                )?,
            })
        })
        .collect::<tflocal_core::Result<Vec<_>>>()?;
    sink.json(
        "frames.json",
        &FramesOutput {
            estimator: ESTIMATOR,
            probe_order: f.probe_order,
            truncation_radius: f.truncation_radius,
            rows: detail,
        },
    )?;
    Ok(sweep
        .iter()
        .map(|r| {
            format!(
                "redundancy {}: rect {:.6}, hex {:.6}, ratio {:.6}",
                r.redundancy, r.rect_cond, r.hex_cond, r.ratio
            )
        })
        .collect())
}

fn run_validate(cfg: &ExperimentConfig, sink: &mut Sink) -> Result<Vec<String>, CliError> {
    let settings = ValidationSettings {
        quad: cfg.quadrature,
        seed: cfg.seed,
        criteria: cfg.validate.criteria.clone(),
    };
    let report: ValidationReport = run_validation(&settings).map_err(config_err)?;
    sink.json("validation.json", &report)?;
    let lines: Vec<String> = report.results.iter().map(|r| r.summary_line()).collect();
    if !report.all_pass {
        for l in &lines {
            eprintln!("{l}");
        }
        return Err(CliError::ValidationFailed(
            report
                .results
                .iter()
                .filter(|r| !r.pass)
                .map(|r| r.id)
                .collect(),
        ));
    }
    Ok(lines)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_materialize() {
        let cfg = ExperimentConfig::parse(
            r#"{"domain": {"shape": "disk", "center": [0, 0], "radius": 1}}"#,
        )
        .unwrap()
        .materialize(Command::Direct, None, Some(3))
        .unwrap();
        assert_eq!(cfg.command, Some(Command::Direct));
        assert_eq!(cfg.basis, Some(BasisTag::Fock));
        assert_eq!(cfg.seed, 3);
        let echoed = serde_json::to_value(&cfg).unwrap();
        for key in [
            "N",
            "quadrature",
            "tolerances",
            "probes",
            "symbol",
            "wavelet",
            "frames",
            "validate",
            "out",
        ] {
            assert!(!echoed[key].is_null(), "{key} not materialized");
        }
        assert_eq!(echoed["wavelet"]["laguerre_s"].as_array().unwrap().len(), 3);
        // the echo parses back to the same config
        let again: ExperimentConfig = serde_json::from_value(echoed).unwrap();
        assert_eq!(again, cfg);
    }

    #[test]
    fn unknown_fields_rejected() {
        for bad in [
            r#"{"N": 4, "radius": 1}"#,
            r#"{"quadrature": {"radial_nodes": 16, "angular_nodes": 24, "target_abs_tol": 1e-10, "x": 1}}"#,
            r#"{"frames": {"redundancy": [2]}}"#,
        ] {
            let e = ExperimentConfig::parse(bad).unwrap_err();
            assert_eq!(e.exit_code(), EXIT_CONFIG, "{bad}");
        }
    }

    #[test]
    fn hash_ignores_out_but_not_seed() {
        let base = ExperimentConfig::parse("{}").unwrap();
        let a = base
            .clone()
            .materialize(Command::Frames, Some("a".into()), None)
            .unwrap();
        let b = base
            .clone()
            .materialize(Command::Frames, Some("b".into()), None)
            .unwrap();
        let c = base
            .materialize(Command::Frames, Some("a".into()), Some(1))
            .unwrap();
        assert_eq!(a.hash(), b.hash());
        assert_ne!(a.hash(), c.hash());
        assert_eq!(a.hash().len(), 64);
    }

    #[test]
    fn command_mismatch_and_missing_domain() {
        let cfg = ExperimentConfig::parse(r#"{"command": "probe"}"#).unwrap();
        assert!(matches!(
            cfg.clone().materialize(Command::Direct, None, None),
            Err(CliError::Config(_))
        ));
        assert!(matches!(
            cfg.materialize(Command::Probe, None, None),
            Err(CliError::Config(_))
        ));
        let bad_n = ExperimentConfig::parse(r#"{"N": 0}"#).unwrap();
        assert!(matches!(
            bad_n.materialize(Command::Frames, None, None),
            Err(CliError::Config(_))
        ));
    }
}
