//! Gaussian Gabor frames over rectangular and hexagonal lattices.
//!
//! The frame operator is compressed to the first `N` Hermite functions:
//! `S[m][n] = sum_z <pi(z) phi, h_n> <h_m, pi(z) phi>`, summed over lattice
//! points inside the truncation disk. Lattice points near the truncation
//! circle see only part of the lattice, which depresses the high-index
//! corner of `S`, so the bounds are read from the leading block of indices
//! `0..N - N/4`. The result is a biased estimator meant for comparing lattice
//! families, not a certified frame bound.

use std::f64::consts::PI;

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fock_op::normalized_monomial;

type C64 = Complex64;

/// Default Hermite probe order.
pub const DEFAULT_PROBE_ORDER: usize = 24;
/// Default truncation radius.
pub const DEFAULT_RADIUS: f64 = 6.0;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum LatticeKind {
    /// `a Z x b Z`.
    Rectangular { a: f64, b: f64 },
    /// Generated by `s (1, 0)` and `s (1/2, sqrt 3 / 2)`.
    Hexagonal { s: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Lattice {
    pub kind: LatticeKind,
    pub truncation_radius: f64,
}

impl Lattice {
    /// Square lattice `a = b = 1/sqrt(redundancy)`.
    pub fn rectangular(redundancy: f64, truncation_radius: f64) -> Result<Self> {
        check_redundancy(redundancy)?;
        let a = redundancy.sqrt().recip();
        Self::new(LatticeKind::Rectangular { a, b: a }, truncation_radius)
    }

    /// Hexagonal lattice with cell area `1/redundancy`.
    pub fn hexagonal(redundancy: f64, truncation_radius: f64) -> Result<Self> {
        check_redundancy(redundancy)?;
        let s = (2.0 / (3f64.sqrt() * redundancy)).sqrt();
        Self::new(LatticeKind::Hexagonal { s }, truncation_radius)
    }

    pub fn new(kind: LatticeKind, truncation_radius: f64) -> Result<Self> {
        let lat = Lattice {
            kind,
            truncation_radius,
        };
        lat.validate()?;
        Ok(lat)
    }

    pub fn validate(&self) -> Result<()> {
        let ok = match self.kind {
            LatticeKind::Rectangular { a, b } => {
                a > 0.0 && b > 0.0 && a.is_finite() && b.is_finite()
            }
            LatticeKind::Hexagonal { s } => s > 0.0 && s.is_finite(),
        };
        if !ok {
            return Err(Error::domain(
                "Lattice",
                format!("invalid lattice spacing {:?}", self.kind),
            ));
        }
        if !(self.truncation_radius >= 0.0) || !self.truncation_radius.is_finite() {
            return Err(Error::domain(
                "Lattice",
                format!(
                    "truncation radius {} must be finite and >= 0",
                    self.truncation_radius
                ),
            ));
        }
        Ok(())
    }

    /// Points per unit area.
    pub fn redundancy(&self) -> f64 {
        match self.kind {
            LatticeKind::Rectangular { a, b } => 1.0 / (a * b),
            LatticeKind::Hexagonal { s } => 2.0 / (3f64.sqrt() * s * s),
        }
    }

    fn basis(&self) -> (C64, C64) {
        match self.kind {
            LatticeKind::Rectangular { a, b } => (C64::new(a, 0.0), C64::new(0.0, b)),
            LatticeKind::Hexagonal { s } => {
                (C64::new(s, 0.0), C64::new(0.5 * s, 0.5 * 3f64.sqrt() * s))
            }
        }
    }
}

fn check_redundancy(r: f64) -> Result<()> {
    if !(r > 0.0) || !r.is_finite() {
        return Err(Error::domain(
            "Lattice",
            format!("redundancy {r} must be positive"),
        ));
    }
    Ok(())
}

/// Lattice points with `|z| <= truncation_radius`, sorted by modulus then argument.
pub fn lattice_points(lat: &Lattice) -> Vec<C64> {
    let (u, v) = lat.basis();
    let r = lat.truncation_radius;
    // |i u + j v| <= r forces |i| <= r |v| / area and |j| <= r |u| / area
    let area = (u.re * v.im - u.im * v.re).abs();
    let bound = (r * u.norm().max(v.norm()) / area).ceil() as i64 + 1;
    let mut pts = Vec::new();
    for i in -bound..=bound {
        for j in -bound..=bound {
            let z = u * i as f64 + v * j as f64;
            if z.norm() <= r + 1e-12 {
                pts.push(z);
            }
        }
    }
    pts.sort_by(|a, b| {
        a.norm()
            .total_cmp(&b.norm())
            .then(a.arg().total_cmp(&b.arg()))
    });
    pts
}

/// `<pi(z1) phi, pi(z2) phi> = e^{-pi |z1 - z2|^2 / 2} e^{i pi (xi1 - xi2)(x1 + x2)}`
/// with `pi(z) phi(t) = e^{2 pi i xi t} phi(t - x)`.
pub fn coherent_overlap(z1: C64, z2: C64) -> C64 {
    let d = z1 - z2;
    C64::from_polar(
        (-PI * d.norm_sqr() / 2.0).exp(),
        PI * (z1.im - z2.im) * (z1.re + z2.re),
    )
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FrameEstimate {
    pub a_est: f64,
    pub b_est: f64,
    pub cond_est: f64,
    pub points: usize,
    /// Size of the leading block the bounds were read from.
    pub block: usize,
}

/// Frame-operator matrix on `h_0..h_{N-1}`.
///
/// `|V_phi h_n(z)| = e^{-pi|z|^2/2} |e_n(conj z)|` and the phases of
/// `V_phi h_m` and `V_phi h_n` share the factor `e^{-i pi x xi}`, so
/// `S[m][n] = sum_z e^{-pi |z|^2} e_m(conj z) conj(e_n(conj z))`.
pub fn frame_matrix(lat: &Lattice, probe_order: usize) -> Result<DMatrix<C64>> {
    lat.validate()?;
    let mut s = DMatrix::from_element(probe_order, probe_order, C64::new(0.0, 0.0));
    let mut v = vec![C64::new(0.0, 0.0); probe_order];
    for z in lattice_points(lat) {
        let damp = (-PI * z.norm_sqr() / 2.0).exp();
        for (n, vn) in v.iter_mut().enumerate() {
            *vn = normalized_monomial(n, z.conj()) * damp;
        }
        for m in 0..probe_order {
            for n in 0..probe_order {
                s[(m, n)] += v[m] * v[n].conj();
            }
        }
    }
    Ok(s)
}

/// Extreme eigenvalues of the leading `N - N/4` block of the frame matrix.
///
/// Fails with `TruncationRisk` when `N > pi (R - 3)^2`: beyond that order
/// `h_{N-1}` has visible mass near the truncation circle.
pub fn frame_bounds_estimate(lat: &Lattice, probe_order: usize) -> Result<FrameEstimate> {
    lat.validate()?;
    let r = lat.truncation_radius;
    let limit = PI * (r - 3.0).max(0.0).powi(2);
    if probe_order == 0 || probe_order as f64 > limit {
        return Err(Error::TruncationRisk(format!(
            "probe order {probe_order} exceeds pi (R - 3)^2 = {limit:.2} for truncation radius {r}"
        )));
    }
    let s = frame_matrix(lat, probe_order)?;
    let block = probe_order - probe_order / 4;
    let central = s.view((0, 0), (block, block)).into_owned();
    let sym = (&central + central.adjoint()) * C64::new(0.5, 0.0);
    let eig = nalgebra::linalg::SymmetricEigen::try_new(sym, 1e-15, 200 * block.max(10))
        .ok_or_else(|| {
            Error::SolverFailure(format!("frame block of size {block} did not converge"))
        })?;
    let a_est = eig
        .eigenvalues
        .iter()
        .copied()
        .fold(f64::INFINITY, f64::min);
    let b_est = eig
        .eigenvalues
        .iter()
        .copied()
        .fold(f64::NEG_INFINITY, f64::max);
    if !(a_est > 0.0) {
        return Err(Error::SolverFailure(format!(
            "lower frame bound estimate {a_est} is not positive"
        )));
    }
    Ok(FrameEstimate {
        a_est,
        b_est,
        cond_est: b_est / a_est,
        points: lattice_points(lat).len(),
        block,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub redundancy: f64,
    pub rect_cond: f64,
    pub hex_cond: f64,
    /// `hex_cond / rect_cond`.
    pub ratio: f64,
}

/// Condition estimates of both lattice families at each redundancy.
pub fn condition_sweep(
    redundancies: &[f64],
    truncation_radius: f64,
    probe_order: usize,
) -> Result<Vec<SweepRow>> {
    redundancies
        .iter()
        .map(|&red| {
            let rect =
                frame_bounds_estimate(&Lattice::rectangular(red, truncation_radius)?, probe_order)?;
            let hex =
                frame_bounds_estimate(&Lattice::hexagonal(red, truncation_radius)?, probe_order)?;
            Ok(SweepRow {
                redundancy: red,
                rect_cond: rect.cond_est,
                hex_cond: hex.cond_est,
                ratio: hex.cond_est / rect.cond_est,
            })
        })
        .collect()
}
