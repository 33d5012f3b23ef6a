//! Plain-text artifact formats.
//!
//! * matrix CSV: one line per row, header `row,re_0,im_0,re_1,im_1,...`
//! * spectrum CSV: `index,eigenvalue,residual`, optionally followed by
//!   `closed_form,deviation`
//! * signal CSV: `re,im`, one sample per line, with a JSON sidecar holding
//!   `t0` and `dt`
//!
//! Every file opens with a `#` comment line carrying the config hash and the
//! module versions. Numbers use the shortest round-trip decimal form, so
//! equal inputs give byte-identical files.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fock_op::{GalerkinOperator, Spectrum};
use crate::geometry::RadialMeasure;
use crate::stft_bridge::SampledSignal;

type C64 = Complex64;

/// Library modules and their versions, embedded in every artifact.
pub fn module_versions() -> BTreeMap<String, String> {
    const V: &str = env!("CARGO_PKG_VERSION");
    [
        "special_fn",
        "geometry",
        "fock_op",
        "stft_bridge",
        "inverse_probe",
        "bergman_wavelet",
        "frame_lab",
        "io",
    ]
    .iter()
    .map(|m| (m.to_string(), V.to_string()))
    .collect()
}

/// Identifies the run that produced an artifact.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Stamp {
    pub config_hash: String,
    pub versions: BTreeMap<String, String>,
}

impl Stamp {
    pub fn new(config_hash: impl Into<String>) -> Self {
        Stamp {
            config_hash: config_hash.into(),
            versions: module_versions(),
        }
    }

    fn comment(&self) -> String {
        let versions: Vec<String> = self
            .versions
            .iter()
            .map(|(k, v)| format!("{k}={v}"))
            .collect();
        format!(
            "# config_hash={} versions={}\n",
            self.config_hash,
            versions.join(";")
        )
    }
}

fn data_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty() && !l.starts_with('#'))
}

fn parse_f64(field: &str, line: usize) -> Result<f64> {
    field
        .trim()
        .parse::<f64>()
        .map_err(|e| Error::Parse(format!("line {}: {field:?}: {e}", line + 1)))
}

pub fn matrix_to_csv(m: &DMatrix<C64>, stamp: &Stamp) -> String {
    let mut out = stamp.comment();
    out.push_str("row");
    for j in 0..m.ncols() {
        let _ = write!(out, ",re_{j},im_{j}");
    }
    out.push('\n');
    for i in 0..m.nrows() {
        let _ = write!(out, "{i}");
        for j in 0..m.ncols() {
            let v = m[(i, j)];
            let _ = write!(out, ",{},{}", v.re, v.im);
        }
        out.push('\n');
    }
    out
}

/// Parses a square matrix written by [`matrix_to_csv`].
pub fn matrix_from_csv(text: &str) -> Result<DMatrix<C64>> {
    let mut lines = data_lines(text);
    let (_, header) = lines
        .next()
        .ok_or_else(|| Error::Parse("empty matrix file".into()))?;
    let cols = header.split(',').count();
    if cols < 3 || (cols - 1) % 2 != 0 || !header.starts_with("row") {
        return Err(Error::Parse(format!("bad matrix header {header:?}")));
    }
    let n = (cols - 1) / 2;
    let mut m = DMatrix::from_element(n, n, C64::new(0.0, 0.0));
    let mut rows = 0;
    for (ln, line) in lines {
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != cols {
            return Err(Error::DimensionMismatch {
                expected: cols,
                got: fields.len(),
            });
        }
        if rows >= n {
            return Err(Error::DimensionMismatch {
                expected: n,
                got: rows + 1,
            });
        }
        for j in 0..n {
            m[(rows, j)] = C64::new(
                parse_f64(fields[1 + 2 * j], ln)?,
                parse_f64(fields[2 + 2 * j], ln)?,
            );
        }
        rows += 1;
    }
    if rows != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: rows,
        });
    }
    Ok(m)
}

/// Spectrum table; `closed_form`, when given, adds the comparison columns.
pub fn spectrum_to_csv(spec: &Spectrum, closed_form: Option<&[f64]>, stamp: &Stamp) -> String {
    let mut out = stamp.comment();
    out.push_str("index,eigenvalue,residual");
    if closed_form.is_some() {
        out.push_str(",closed_form,deviation");
    }
    out.push('\n');
    for (i, (l, r)) in spec.eigenvalues.iter().zip(&spec.residuals).enumerate() {
        let _ = write!(out, "{i},{l},{r}");
        if let Some(c) = closed_form {
            let _ = write!(out, ",{},{}", c[i], (l - c[i]).abs());
        }
        out.push('\n');
    }
    out
}

/// JSON companion of a matrix artifact.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OperatorEnvelope {
    pub provenance: String,
    #[serde(rename = "N")]
    pub n: usize,
    pub quad_tol: f64,
    pub measure: RadialMeasure,
    #[serde(flatten)]
    pub stamp: Stamp,
}

impl OperatorEnvelope {
    pub fn new(op: &GalerkinOperator, stamp: &Stamp) -> Self {
        OperatorEnvelope {
            provenance: op.provenance.clone(),
            n: op.size(),
            quad_tol: op.quad_tol,
            measure: op.measure,
            stamp: stamp.clone(),
        }
    }
}

/// Sidecar of a signal CSV.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SignalSidecar {
    pub t0: f64,
    pub dt: f64,
    pub len: usize,
    #[serde(flatten)]
    pub stamp: Stamp,
}

/// Signal CSV and its sidecar JSON.
pub fn signal_to_csv(sig: &SampledSignal, stamp: &Stamp) -> Result<(String, String)> {
    let mut out = stamp.comment();
    out.push_str("re,im\n");
    for s in &sig.samples {
        let _ = writeln!(out, "{},{}", s.re, s.im);
    }
    let sidecar = SignalSidecar {
        t0: sig.t0,
        dt: sig.dt,
        len: sig.samples.len(),
        stamp: stamp.clone(),
    };
    Ok((out, serde_json::to_string_pretty(&sidecar)?))
}

pub fn signal_from_csv(csv: &str, sidecar_json: &str) -> Result<SampledSignal> {
    let side: SignalSidecar = serde_json::from_str(sidecar_json)?;
    let mut lines = data_lines(csv);
    match lines.next() {
        Some((_, h)) if h.trim() == "re,im" => {}
        other => {
            return Err(Error::Parse(format!(
                "expected header \"re,im\", got {:?}",
                other.map(|o| o.1)
            )))
        }
    }
    let mut samples = Vec::with_capacity(side.len);
    for (ln, line) in lines {
        let mut f = line.split(',');
        let (Some(re), Some(im), None) = (f.next(), f.next(), f.next()) else {
            return Err(Error::Parse(format!(
                "line {}: expected two columns",
                ln + 1
            )));
        };
        samples.push(C64::new(parse_f64(re, ln)?, parse_f64(im, ln)?));
    }
    if samples.len() != side.len {
        return Err(Error::DimensionMismatch {
            expected: side.len,
            got: samples.len(),
        });
    }
    SampledSignal::new(samples, side.t0, side.dt)
}

/// Generic table with a header row.
pub fn table_to_csv(header: &[&str], rows: &[Vec<f64>], stamp: &Stamp) -> String {
    let mut out = stamp.comment();
    out.push_str(&header.join(","));
    out.push('\n');
    for row in rows {
        let fields: Vec<String> = row.iter().map(|v| v.to_string()).collect();
        out.push_str(&fields.join(","));
        out.push('\n');
    }
    out
}
