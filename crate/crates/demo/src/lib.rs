//! Browser bindings: spectrum of a centered disk, the probe verdict for a
//! hidden shape, and the time-frequency picture of a Hermite function.

use std::f64::consts::PI;

use num_complex::Complex64 as C64;
use wasm_bindgen::prelude::*;

use tflocal_core::fock_op::{assemble_indicator, disk_spectrum_closed, normalized_monomial};
use tflocal_core::geometry::{Domain, QuadratureSpec};
use tflocal_core::inverse_probe::{disk_verdict, BasisTag, BlackBox, VerdictTolerances};

fn js_err(e: impl std::fmt::Display) -> JsError {
    JsError::new(&e.to_string())
}

/// Eigenvalues `P(n+1, pi R^2)` of the disk of radius `radius`, `n < size`.
#[wasm_bindgen]
pub fn disk_spectrum(radius: f64, size: usize) -> Result<Vec<f64>, JsError> {
    disk_spectrum_closed(radius, size).map_err(js_err)
}

/// Builds the hidden domain named by `shape` ("disk", "annulus", "square",
/// "offset_disk") with size parameter `param`, hides its operator behind a
/// black box and returns the probe report as JSON.
#[wasm_bindgen]
pub fn probe_shape(shape: &str, param: f64, size: usize) -> Result<String, JsError> {
    let domain = match shape {
        "disk" => Domain::centered_disk(param),
        "annulus" => Domain::annulus(0.5 * param, param),
        "square" => Domain::square(C64::new(0.0, 0.0), param),
        "offset_disk" => Domain::disk(C64::new(0.3, 0.1), param),
        other => return Err(JsError::new(&format!("unknown shape {other:?}"))),
    };
    let op = assemble_indicator(&domain, size, &QuadratureSpec::default()).map_err(js_err)?;
    let bb = BlackBox::from_operator(&op, BasisTag::Fock).map_err(js_err)?;
    let probes: Vec<usize> = (0..size.saturating_sub(8).min(8)).collect();
    let report = disk_verdict(&bb, &probes, VerdictTolerances::default()).map_err(js_err)?;
    serde_json::to_string(&report).map_err(js_err)
}

/// `|V_phi h_n|` on a `cells x cells` grid over `[-extent, extent]^2`, row
/// major with `xi` decreasing down the rows, normalized to a peak of 1.
#[wasm_bindgen]
pub fn hermite_tf_magnitude(n: usize, cells: usize, extent: f64) -> Vec<f64> {
    let step = 2.0 * extent / cells.max(1) as f64;
    let mut out = Vec::with_capacity(cells * cells);
    for row in 0..cells {
        let xi = extent - (row as f64 + 0.5) * step;
        for col in 0..cells {
            let x = -extent + (col as f64 + 0.5) * step;
            let z = C64::new(x, xi);
            out.push((-PI * z.norm_sqr() / 2.0).exp() * normalized_monomial(n, z.conj()).norm());
        }
    }
    let peak = out.iter().copied().fold(0.0, f64::max);
    if peak > 0.0 {
        out.iter_mut().for_each(|v| *v /= peak);
    }
    out
}
