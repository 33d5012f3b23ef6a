use std::f64::consts::PI;

use nalgebra::DMatrix;
use num_complex::Complex64;

use super::GalerkinOperator;
use crate::error::{Error, Result};
use crate::geometry::{Domain, MomentTable, QuadratureSpec, RadialMeasure};
use crate::special_fn::ln_factorial;

type C64 = Complex64;

/// Orthonormal Fock monomial `e_n(z) = sqrt(pi^n / n!) z^n`.
pub fn normalized_monomial(n: usize, z: C64) -> C64 {
    if n == 0 {
        return C64::new(1.0, 0.0);
    }
    let r = z.norm();
    if r == 0.0 {
        return C64::new(0.0, 0.0);
    }
    let nf = n as f64;
    let ln_mag = 0.5 * (nf * PI.ln() - ln_factorial(n)) + nf * r.ln();
    C64::from_polar(ln_mag.exp(), nf * z.arg())
}

/// Basis size that captures every eigenvalue above ~1e-10 for domains
/// inside `Disk(0, r0)`.
pub fn recommended_basis_size(r0: f64) -> usize {
    let a = PI * r0 * r0;
    (a.ceil() + 8.0 * a.sqrt() + 16.0) as usize
}

/// `P(n+1, pi R^2)` for `n < size`: the spectrum of the centered disk.
pub fn disk_spectrum_closed(radius: f64, size: usize) -> Result<Vec<f64>> {
    (0..size)
        .map(|n| RadialMeasure::FockGaussian.disk_mass(n, radius))
        .collect()
}

/// `P(n+1, pi r_out^2) - P(n+1, pi r_in^2)`.
pub fn annulus_spectrum_closed(r_in: f64, r_out: f64, size: usize) -> Result<Vec<f64>> {
    if !(r_in >= 0.0) || r_in > r_out {
        return Err(Error::domain(
            "annulus_spectrum_closed",
            format!("need 0 <= r_in <= r_out, got ({r_in}, {r_out})"),
        ));
    }
    (0..size)
        .map(|n| RadialMeasure::FockGaussian.ring_mass(n, r_in, r_out))
        .collect()
}

/// Fock-space localization operator of the indicator of `domain`.
///
/// Centered disks and annuli use the closed form; every other shape goes
/// through polar quadrature.
pub fn assemble_indicator(
    domain: &Domain,
    size: usize,
    quad: &QuadratureSpec,
) -> Result<GalerkinOperator> {
    assemble_indicator_with(domain, &RadialMeasure::FockGaussian, size, quad)
}

/// Same as [`assemble_indicator`] for an arbitrary radial measure.
pub fn assemble_indicator_with(
    domain: &Domain,
    measure: &RadialMeasure,
    size: usize,
    quad: &QuadratureSpec,
) -> Result<GalerkinOperator> {
    domain.validate()?;
    match domain.centered_rings() {
        Some(rings) => {
            let mut diag = vec![0.0; size];
            for (n, d) in diag.iter_mut().enumerate() {
                for &(r_in, r_out) in &rings {
                    *d += measure.ring_mass(n, r_in, r_out.min(measure.support_radius()))?;
                }
            }
            GalerkinOperator::diagonal(
                &diag,
                *measure,
                format!("indicator {} (closed form)", describe(domain)),
            )
        }
        None => assemble_indicator_quadrature(domain, measure, size, quad),
    }
}

/// Quadrature-only assembly, used directly to cross-check the closed forms.
pub fn assemble_indicator_quadrature(
    domain: &Domain,
    measure: &RadialMeasure,
    size: usize,
    quad: &QuadratureSpec,
) -> Result<GalerkinOperator> {
    if size == 0 {
        return Err(Error::domain(
            "assemble_indicator",
            "basis size must be positive",
        ));
    }
    domain.validate()?;
    let table = MomentTable::compute(domain, measure, 2 * (size - 1), size - 1, quad)?;
    let ln_norm: Vec<f64> = (0..size).map(|n| measure.ln_basis_norm_sq(n)).collect();
    let mut m = DMatrix::from_element(size, size, C64::new(0.0, 0.0));
    for row in 0..size {
        for col in row..size {
            let j = row + col;
            let kappa =
                (0.5 * (ln_norm[row] + ln_norm[col]) + measure.ln_full_moment(j as f64)).exp();
            let v = table.normalized(j, col - row).conj() * kappa;
            m[(row, col)] = v;
            m[(col, row)] = v.conj();
        }
    }
    GalerkinOperator::new(
        m,
        *measure,
        format!("indicator {} (quadrature)", describe(domain)),
        table.err_estimate,
    )
}

pub(crate) fn describe(domain: &Domain) -> String {
    serde_json::to_string(domain).unwrap_or_else(|_| format!("{domain:?}"))
}
