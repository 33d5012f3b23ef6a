use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::special_fn::{
    incomplete_beta_split, ln_beta, ln_factorial, ln_gamma, regularized_lower_gamma,
};

/// Rotation-invariant weight `dmu(z) = mu(|z|) dz` on a disk about the origin.
///
/// * `FockGaussian`: `e^{-pi |z|^2} dz` on the whole plane.
/// * `BergmanAlpha`: `(alpha + 1)(1 - |w|^2)^alpha dA(w)` on the unit disc,
///   with `dA = dz / pi` the normalized area measure.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum RadialMeasure {
    FockGaussian,
    BergmanAlpha { alpha: f64 },
}

impl RadialMeasure {
    pub fn bergman(alpha: f64) -> Result<Self> {
        let m = RadialMeasure::BergmanAlpha { alpha };
        m.validate()?;
        Ok(m)
    }

    pub fn validate(&self) -> Result<()> {
        match *self {
            RadialMeasure::FockGaussian => Ok(()),
            RadialMeasure::BergmanAlpha { alpha } if alpha > -1.0 && alpha.is_finite() => Ok(()),
            RadialMeasure::BergmanAlpha { alpha } => Err(Error::domain(
                "RadialMeasure",
                format!("alpha = {alpha} must exceed -1"),
            )),
        }
    }

    pub fn support_radius(&self) -> f64 {
        match self {
            RadialMeasure::FockGaussian => f64::INFINITY,
            RadialMeasure::BergmanAlpha { .. } => 1.0,
        }
    }

    /// Density `mu(r)` with respect to Lebesgue measure `dz`.
    pub fn weight_at(&self, r: f64) -> Result<f64> {
        if !(r >= 0.0) || r >= self.support_radius() {
            return Err(Error::domain(
                "weight_at",
                format!("r = {r} outside [0, {})", self.support_radius()),
            ));
        }
        Ok(self.ln_weight(r).exp())
    }

    pub(crate) fn ln_weight(&self, r: f64) -> f64 {
        match *self {
            RadialMeasure::FockGaussian => -PI * r * r,
            RadialMeasure::BergmanAlpha { alpha } => {
                ((alpha + 1.0) / PI).ln() + alpha * ((1.0 - r) * (1.0 + r)).ln()
            }
        }
    }

    /// `c_{n,R} = 2 pi int_0^R r^n mu(r) dr` for odd `n`, in closed form.
    pub fn closed_moment(&self, n: usize, radius: f64) -> Result<f64> {
        if n.is_multiple_of(2) {
            return Err(Error::domain(
                "closed_moment",
                format!("order n = {n} must be odd"),
            ));
        }
        if !(radius >= 0.0) || radius > self.support_radius() {
            return Err(Error::domain(
                "closed_moment",
                format!("radius {radius} outside [0, {}]", self.support_radius()),
            ));
        }
        let m = (n - 1) / 2;
        let mf = m as f64;
        match *self {
            RadialMeasure::FockGaussian => {
                let scale = (ln_factorial(m) - mf * PI.ln()).exp();
                let p = if radius.is_infinite() {
                    1.0
                } else {
                    regularized_lower_gamma(mf + 1.0, PI * radius * radius)?
                };
                Ok(scale * p)
            }
            RadialMeasure::BergmanAlpha { alpha } => {
                let scale = (alpha + 1.0) * ln_beta(mf + 1.0, alpha + 1.0).exp();
                let x = radius * radius;
                let y = (1.0 - radius) * (1.0 + radius);
                Ok(scale * incomplete_beta_split(mf + 1.0, alpha + 1.0, x, y)?)
            }
        }
    }

    /// `ln int_{support} |z|^j dmu(z)` for any real power `j >= 0`.
    pub fn ln_full_moment(&self, j: f64) -> f64 {
        match *self {
            // 2 pi int r^{j+1} e^{-pi r^2} dr = Gamma(j/2 + 1) / pi^{j/2}
            RadialMeasure::FockGaussian => ln_gamma(0.5 * j + 1.0) - 0.5 * j * PI.ln(),
            // (alpha+1) B(j/2 + 1, alpha + 1)
            RadialMeasure::BergmanAlpha { alpha } => {
                (alpha + 1.0).ln() + ln_beta(0.5 * j + 1.0, alpha + 1.0)
            }
        }
    }

    /// `ln` of the squared normalization of the n-th orthonormal monomial:
    /// `pi^n / n!` (Fock) or `Gamma(n+2+alpha) / (n! Gamma(2+alpha))` (Bergman).
    pub fn ln_basis_norm_sq(&self, n: usize) -> f64 {
        -self.ln_full_moment(2.0 * n as f64)
    }

    /// `int_{r_in < |z| < r_out} |e_n|^2 dmu`, the diagonal entry of a centered ring.
    pub fn ring_mass(&self, n: usize, r_in: f64, r_out: f64) -> Result<f64> {
        Ok(self.disk_mass(n, r_out)? - self.disk_mass(n, r_in)?)
    }

    /// `int_{|z| < r} |e_n|^2 dmu`: `P(n+1, pi r^2)` or `I_{r^2}(n+1, alpha+1)`.
    pub fn disk_mass(&self, n: usize, r: f64) -> Result<f64> {
        if r <= 0.0 {
            return Ok(0.0);
        }
        let a = n as f64 + 1.0;
        match *self {
            RadialMeasure::FockGaussian => {
                if r.is_infinite() {
                    Ok(1.0)
                } else {
                    regularized_lower_gamma(a, PI * r * r)
                }
            }
            RadialMeasure::BergmanAlpha { alpha } => {
                if r >= 1.0 {
                    return Ok(1.0);
                }
                incomplete_beta_split(a, alpha + 1.0, r * r, (1.0 - r) * (1.0 + r))
            }
        }
    }

    /// Radius beyond which `r^{degree+1} mu(r)` is below `1e-20` of its peak.
    pub(crate) fn radial_cutoff(&self, degree: usize) -> f64 {
        match self {
            RadialMeasure::FockGaussian => {
                let d = degree as f64 + 1.0;
                let peak_sq = d / (2.0 * PI);
                let log_peak = 0.5 * d * peak_sq.ln() - PI * peak_sq;
                let mut r = peak_sq.sqrt().max(0.5);
                while d * r.ln() - PI * r * r > log_peak - 46.0 {
                    r += 0.05;
                }
                r
            }
            RadialMeasure::BergmanAlpha { .. } => 1.0,
        }
    }
}
