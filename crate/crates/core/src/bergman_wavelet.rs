//! Wavelet localization in the unit-disc model: weighted Bergman Galerkin
//! operators, Cayley and pseudohyperbolic geometry, and the Laguerre-side
//! identities linking the half-plane and disc pictures.
//!
//! Conventions. The Bergman transform is taken without its global constant,
//! `Ber f(z) = int_0^inf t^{(alpha+1)/2} fhat(t) e^{izt} dt`, and the
//! Fourier-side wavelets drop the sign `(-1)^n`. With these choices
//! `Ber psi_n = 2^{3alpha/2 + 1 - n} e^{i pi (alpha+2)/2} Psi_n` and
//! `T_alpha Psi_n = 2^{-(5alpha/2 + 2)} e^{-i pi (alpha+2)/2} e_n`, where
//! `T_alpha f(w) = 2^{alpha/2+1} (1-w)^{-(alpha+2)} f(i(1+w)/(1-w))`.

use std::f64::consts::{FRAC_PI_2, LN_2};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fock_op::{assemble_indicator_with, GalerkinOperator};
use crate::geometry::{Domain, QuadratureSpec, RadialMeasure};
use crate::quadrature::adaptive_gk;
use crate::special_fn::{laguerre_fn, laguerre_poly, ln_factorial, ln_gamma};

type C64 = Complex64;

const I: C64 = C64 { re: 0.0, im: 1.0 };

/// Largest admissible bounding radius for domains inside the disc.
pub const DISC_MARGIN: f64 = 1e-6;

/// Pseudohyperbolic disk `{u in C+ : rho(u, center) < rho}`.
///
/// Serialized as `{"center":[re,im],"rho":r}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "PseudoDiskRepr", into = "PseudoDiskRepr")]
pub struct PseudoDisk {
    center: C64,
    rho: f64,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct PseudoDiskRepr {
    center: [f64; 2],
    rho: f64,
}

impl TryFrom<PseudoDiskRepr> for PseudoDisk {
    type Error = Error;
    fn try_from(r: PseudoDiskRepr) -> Result<Self> {
        PseudoDisk::new(C64::new(r.center[0], r.center[1]), r.rho)
    }
}

impl From<PseudoDisk> for PseudoDiskRepr {
    fn from(p: PseudoDisk) -> Self {
        PseudoDiskRepr {
            center: [p.center.re, p.center.im],
            rho: p.rho,
        }
    }
}

impl PseudoDisk {
    pub fn new(center: C64, rho: f64) -> Result<Self> {
        if !(center.im > 0.0) || !center.re.is_finite() || !center.im.is_finite() {
            return Err(Error::domain(
                "PseudoDisk",
                format!("center {center} must lie in the upper half-plane"),
            ));
        }
        if !(rho > 0.0 && rho < 1.0) {
            return Err(Error::domain(
                "PseudoDisk",
                format!("rho = {rho} must lie in (0, 1)"),
            ));
        }
        Ok(PseudoDisk { center, rho })
    }

    pub fn center(&self) -> C64 {
        self.center
    }

    pub fn rho(&self) -> f64 {
        self.rho
    }

    pub fn contains(&self, u: C64) -> bool {
        rho_halfplane(u, self.center)
            .map(|d| d < self.rho)
            .unwrap_or(false)
    }
}

/// Orthonormal basis of the weighted Bergman space,
/// `e_n(w) = (Gamma(n+2+alpha) / (n! Gamma(2+alpha)))^{1/2} w^n`.
pub fn e_n_alpha(n: usize, alpha: f64, w: C64) -> Result<C64> {
    if !(alpha > -1.0) {
        return Err(Error::domain(
            "e_n_alpha",
            format!("alpha = {alpha} must exceed -1"),
        ));
    }
    if !(w.norm() < 1.0) {
        return Err(Error::domain(
            "e_n_alpha",
            format!("|w| = {} must be below 1", w.norm()),
        ));
    }
    if n == 0 {
        return Ok(C64::new(1.0, 0.0));
    }
    let r = w.norm();
    if r == 0.0 {
        return Ok(C64::new(0.0, 0.0));
    }
    let nf = n as f64;
    let ln_c = 0.5 * (ln_gamma(nf + 2.0 + alpha) - ln_factorial(n) - ln_gamma(2.0 + alpha));
    Ok(C64::from_polar((ln_c + nf * r.ln()).exp(), nf * w.arg()))
}

/// `C(r, n) = I_{r^2}(n+1, alpha+1)`, the mass of `|e_n|^2` on the disk of radius `r`.
pub fn disc_eigenvalue_closed(r: f64, n: usize, alpha: f64) -> Result<f64> {
    if !(r > 0.0 && r < 1.0) {
        return Err(Error::domain(
            "disc_eigenvalue_closed",
            format!("r = {r} must lie in (0, 1)"),
        ));
    }
    RadialMeasure::bergman(alpha)?.disk_mass(n, r)
}

/// Galerkin matrix of the indicator of `domain` in the weighted Bergman basis.
pub fn bergman_galerkin(
    domain: &Domain,
    alpha: f64,
    size: usize,
    quad: &QuadratureSpec,
) -> Result<GalerkinOperator> {
    let measure = RadialMeasure::bergman(alpha)?;
    domain.validate()?;
    let br = domain.bounding_radius();
    if br > 1.0 - DISC_MARGIN {
        return Err(Error::InvalidDomain(format!(
            "bounding radius {br} exceeds 1 - {DISC_MARGIN:e}"
        )));
    }
    assemble_indicator_with(domain, &measure, size, quad)
}

/// `w = (u - i) / (u + i)`.
pub fn cayley_to_disc(u: C64) -> Result<C64> {
    if !(u.im > 0.0) || !u.re.is_finite() || !u.im.is_finite() {
        return Err(Error::domain(
            "cayley_to_disc",
            format!("{u} is not in the upper half-plane"),
        ));
    }
    Ok((u - I) / (u + I))
}

/// `u = i (1 + w) / (1 - w)`.
pub fn cayley_to_halfplane(w: C64) -> Result<C64> {
    if !(w.norm() < 1.0) {
        return Err(Error::domain(
            "cayley_to_halfplane",
            format!("|{w}| is not below 1"),
        ));
    }
    Ok(I * (1.0 + w) / (1.0 - w))
}

/// `|(z1 - z2) / (z1 - conj z2)|` on the upper half-plane.
pub fn rho_halfplane(z1: C64, z2: C64) -> Result<f64> {
    if !(z1.im > 0.0 && z2.im > 0.0) {
        return Err(Error::domain(
            "rho_halfplane",
            format!("{z1}, {z2} must lie in the upper half-plane"),
        ));
    }
    Ok(((z1 - z2) / (z1 - z2.conj())).norm())
}

/// `|(w1 - w2) / (1 - w1 conj w2)|` on the disc.
pub fn rho_disc(w1: C64, w2: C64) -> Result<f64> {
    if !(w1.norm() < 1.0 && w2.norm() < 1.0) {
        return Err(Error::domain(
            "rho_disc",
            format!("{w1}, {w2} must lie in the unit disc"),
        ));
    }
    Ok(((w1 - w2) / (1.0 - w1 * w2.conj())).norm())
}

/// Involutive disc automorphism `w -> (a - w) / (1 - conj(a) w)`, swapping `a` and `0`.
pub fn disc_automorphism(a: C64, w: C64) -> Result<C64> {
    if !(a.norm() < 1.0 && w.norm() <= 1.0) {
        return Err(Error::domain(
            "disc_automorphism",
            format!("need |a| < 1 and |w| <= 1, got {a}, {w}"),
        ));
    }
    Ok((a - w) / (1.0 - a.conj() * w))
}

/// Euclidean disk in the unit disc equal to the Cayley image of `delta`.
pub fn map_pseudodisk(delta: &PseudoDisk) -> Domain {
    let a = (delta.center - I) / (delta.center + I);
    let r2 = delta.rho * delta.rho;
    let den = 1.0 - r2 * a.norm_sqr();
    let center = a * ((1.0 - r2) / den);
    let radius = delta.rho * (1.0 - a.norm_sqr()) / den;
    Domain::disk(center, radius)
}

/// Outcome of a closed-form versus quadrature comparison.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct IdentityCheck<T> {
    pub lhs: T,
    pub rhs: T,
    pub abs_err: f64,
}

/// `int_0^inf x^alpha L_n^alpha(x) e^{-xs} dx` against `Gamma(alpha+n+1)/n! s^{-alpha-n-1} (s-1)^n`.
pub fn laguerre_laplace_check(n: usize, alpha: f64, s: f64) -> Result<IdentityCheck<f64>> {
    if !(alpha > -1.0) || !(s > 1.0) {
        return Err(Error::domain(
            "laguerre_laplace_check",
            format!("need alpha > -1 and s > 1, got ({alpha}, {s})"),
        ));
    }
    let nf = n as f64;
    let rhs = (ln_gamma(alpha + nf + 1.0) - ln_factorial(n) - (alpha + nf + 1.0) * s.ln()).exp()
        * (s - 1.0).powi(n as i32);
    // x = y^2 removes the x^alpha endpoint singularity for alpha < 0
    let mut x_max = 10.0 / s;
    while (alpha + nf) * x_max.ln() - s * x_max > -60.0 {
        x_max *= 1.5;
    }
    let integrand = |y: f64| {
        let x = y * y;
        if x == 0.0 {
            return 0.0;
        }
        2.0 * (alpha * x.ln() - s * x).exp() * y * laguerre_poly(n, alpha, x)
    };
    let lhs = adaptive_gk(integrand, 0.0, x_max.sqrt(), 1e-14, 1e-13)?.value;
    Ok(IdentityCheck {
        lhs,
        rhs,
        abs_err: (lhs - rhs).abs(),
    })
}

/// Fourier-side wavelet
/// `(n! / (2^{2alpha+2n+1} Gamma(n+2+alpha) Gamma(2+alpha)))^{1/2} l_n^{alpha+1}(2t)`.
pub fn psi_fourier_side(n: usize, alpha: f64, t: f64) -> Result<f64> {
    if !(alpha >= 0.0) || !(t >= 0.0) {
        return Err(Error::domain(
            "psi_fourier_side",
            format!("need alpha >= 0 and t >= 0, got ({alpha}, {t})"),
        ));
    }
    let nf = n as f64;
    let ln_c = 0.5
        * (ln_factorial(n)
            - (2.0 * alpha + 2.0 * nf + 1.0) * LN_2
            - ln_gamma(nf + 2.0 + alpha)
            - ln_gamma(2.0 + alpha));
    Ok(ln_c.exp() * laguerre_fn(n, alpha + 1.0, 2.0 * t))
}

/// `Psi_n(z) = 4^{-(alpha+1/2)} (Gamma(n+2+alpha)/(n! Gamma(2+alpha)))^{1/2} ((z-i)/(z+i))^n (z+i)^{-(alpha+2)}`.
#[allow(non_snake_case)]
pub fn Psi_n_alpha(n: usize, alpha: f64, z: C64) -> Result<C64> {
    if !(alpha > -1.0) {
        return Err(Error::domain(
            "Psi_n_alpha",
            format!("alpha = {alpha} must exceed -1"),
        ));
    }
    let w = cayley_to_disc(z)?;
    let nf = n as f64;
    let ln_c = -(2.0 * alpha + 1.0) * LN_2
        + 0.5 * (ln_gamma(nf + 2.0 + alpha) - ln_factorial(n) - ln_gamma(2.0 + alpha));
    Ok(w.powu(n as u32) * (z + I).powf(-(alpha + 2.0)) * ln_c.exp())
}

/// Numerical Bergman transform `int_0^T t^{(alpha+1)/2} fhat(t) e^{izt} dt`.
///
/// `t_max` truncates the half-line; the returned bound is the size of the
/// integrand at `t_max` divided by `Im z`, a tail estimate valid when
/// `t^{(alpha+1)/2} |fhat(t)|` is nonincreasing beyond `t_max`.
pub fn bergman_transform_numeric(
    fhat: impl Fn(f64) -> f64,
    alpha: f64,
    z: C64,
    t_max: f64,
) -> Result<(C64, f64)> {
    if !(z.im > 0.0) {
        return Err(Error::domain(
            "bergman_transform_numeric",
            format!("{z} is not in the upper half-plane"),
        ));
    }
    if !(t_max > 0.0) {
        return Err(Error::domain(
            "bergman_transform_numeric",
            format!("t_max = {t_max} must be positive"),
        ));
    }
    let p = 0.5 * (alpha + 1.0);
    let integrand = |t: f64| (I * z * t).exp() * (t.powf(p) * fhat(t));
    let v = adaptive_gk(integrand, 0.0, t_max, 1e-13, 1e-12)?;
    let tail = integrand(t_max).norm() / z.im;
    Ok((v.value, tail + v.err_estimate))
}

/// `T_alpha f(w) = 2^{alpha/2+1} (1-w)^{-(alpha+2)} f(i(1+w)/(1-w))`.
pub fn t_alpha(f: impl Fn(C64) -> Result<C64>, alpha: f64, w: C64) -> Result<C64> {
    let u = cayley_to_halfplane(w)?;
    Ok(f(u)? * (1.0 - w).powf(-(alpha + 2.0)) * ((0.5 * alpha + 1.0) * LN_2).exp())
}

/// Constant `k` with `Ber psi_n = k Psi_n` under this module's conventions.
pub fn ber_psi_constant(n: usize, alpha: f64) -> C64 {
    C64::from_polar(
        ((1.5 * alpha + 1.0 - n as f64) * LN_2).exp(),
        FRAC_PI_2 * (alpha + 2.0),
    )
}

/// Constant `k` with `T_alpha Psi_n = k e_n`.
pub fn t_alpha_psi_constant(alpha: f64) -> C64 {
    C64::from_polar(
        (-(2.5 * alpha + 2.0) * LN_2).exp(),
        -FRAC_PI_2 * (alpha + 2.0),
    )
}

/// Compares the numerical Bergman transform of `psi_n` with `k Psi_n(z)`.
pub fn ber_psi_check(n: usize, alpha: f64, z: C64) -> Result<IdentityCheck<C64>> {
    // Laguerre functions decay like e^{-t}; 80 + 4n puts the tail below 1e-30
    let t_max = 80.0 + 4.0 * n as f64;
    let (lhs, _) = bergman_transform_numeric(
        |t| psi_fourier_side(n, alpha, t).unwrap_or(0.0),
        alpha,
        z,
        t_max,
    )?;
    let rhs = ber_psi_constant(n, alpha) * Psi_n_alpha(n, alpha, z)?;
    Ok(IdentityCheck {
        lhs,
        rhs,
        abs_err: (lhs - rhs).norm(),
    })
}

/// Compares `T_alpha Psi_n` at `w = cayley(z)` with `k e_n(w)`.
pub fn t_alpha_psi_check(n: usize, alpha: f64, z: C64) -> Result<IdentityCheck<C64>> {
    let w = cayley_to_disc(z)?;
    let lhs = t_alpha(|u| Psi_n_alpha(n, alpha, u), alpha, w)?;
    let rhs = t_alpha_psi_constant(alpha) * e_n_alpha(n, alpha, w)?;
    Ok(IdentityCheck {
        lhs,
        rhs,
        abs_err: (lhs - rhs).norm(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::special_fn::regularized_incomplete_beta;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;
    use std::f64::consts::PI;

    fn quad() -> QuadratureSpec {
        QuadratureSpec::new(16, 24, 1e-10).unwrap()
    }

    fn random_upper(rng: &mut ChaCha8Rng) -> C64 {
        C64::new(rng.random_range(-5.0..5.0), rng.random_range(0.05..5.0))
    }

    #[test]
    fn basis_values_and_norm() {
        let w = C64::new(0.3, 0.4);
        assert_eq!(e_n_alpha(0, 0.7, w).unwrap(), C64::new(1.0, 0.0));
        assert_eq!(
            e_n_alpha(3, 0.7, C64::new(0.0, 0.0)).unwrap(),
            C64::new(0.0, 0.0)
        );
        // direct: Gamma(5.5)/(2 Gamma(2.5)) = 3.5 * 2.5 / 2
        let direct = w * w * (3.5f64 * 2.5 / 2.0).sqrt();
        assert!((e_n_alpha(2, 0.5, w).unwrap() - direct).norm() < 1e-14);
        assert!(e_n_alpha(1, 0.0, C64::new(1.0, 0.0)).is_err());
        // oracle: (alpha+1) int_0^1 2 r^{2n+1} (1-r^2)^alpha dr by quadrature
        for &alpha in &[0.0, 0.5, 2.0] {
            for n in 0..6 {
                let a2 =
                    e_n_alpha(n, alpha, C64::new(0.5, 0.0)).unwrap().re / 0.5f64.powi(n as i32);
                let m = adaptive_gk(
                    |r: f64| {
                        2.0 * (alpha + 1.0) * r.powi(2 * n as i32 + 1) * (1.0 - r * r).powf(alpha)
                    },
                    0.0,
                    1.0,
                    1e-15,
                    1e-13,
                )
                .unwrap()
                .value;
                assert!((a2 * a2 * m - 1.0).abs() < 1e-10, "alpha={alpha} n={n}");
            }
        }
    }

    #[test]
    fn disc_eigenvalue_examples() {
        for r in [0.1, 0.5, 0.9] {
            assert!((disc_eigenvalue_closed(r, 0, 0.0).unwrap() - r * r).abs() < 1e-14);
        }
        assert!((disc_eigenvalue_closed(1.0 - 1e-6, 3, 1.0).unwrap() - 1.0).abs() < 1e-4);
        let v = disc_eigenvalue_closed(0.7, 2, 1.5).unwrap();
        let a2 = (ln_gamma(5.5) - ln_factorial(2) - ln_gamma(3.5)).exp();
        let oracle = a2
            * adaptive_gk(
                |r: f64| 2.5 * 2.0 * r.powi(5) * (1.0 - r * r).powf(1.5),
                0.0,
                0.7,
                1e-15,
                1e-13,
            )
            .unwrap()
            .value;
        assert!((v - oracle).abs() < 1e-12);
        assert!((v - regularized_incomplete_beta(3.0, 2.5, 0.49).unwrap()).abs() < 1e-14);
        let mut prev = 0.0;
        for i in 1..100 {
            let c = disc_eigenvalue_closed(i as f64 / 100.0, 4, 0.5).unwrap();
            assert!(c >= prev);
            prev = c;
        }
    }

    #[test]
    fn galerkin_disk_and_selection_rule() {
        let op = bergman_galerkin(&Domain::centered_disk(0.6), 0.5, 12, &quad()).unwrap();
        for n in 0..12 {
            assert!(
                (op.entry(n, n).re - disc_eigenvalue_closed(0.6, n, 0.5).unwrap()).abs() < 1e-14
            );
        }
        let s = 0.9 * std::f64::consts::SQRT_2;
        let sq = Domain::square(C64::new(0.0, 0.0), s);
        let op = bergman_galerkin(&sq, 1.0, 12, &quad()).unwrap();
        for m in 0..12 {
            for n in 0..12 {
                if (m as i64 - n as i64).rem_euclid(4) != 0 {
                    assert!(op.entry(m, n).norm() < 1e-10);
                }
            }
        }
        assert!(op.entry(0, 4).norm() > 1e-4);
        let spec = op.eigendecompose().unwrap();
        assert!(spec
            .eigenvalues
            .iter()
            .all(|&l| l > -1e-9 && l < 1.0 + 1e-9));
        assert!(bergman_galerkin(&Domain::centered_disk(1.0), 0.0, 4, &quad()).is_err());
    }

    #[test]
    fn galerkin_off_center_disk_matches_quadrature() {
        let d = Domain::disk(C64::new(0.2, -0.1), 0.5);
        let op = bergman_galerkin(&d, 0.5, 6, &quad()).unwrap();
        let measure = RadialMeasure::bergman(0.5).unwrap();
        for (m, n) in [(0, 0), (1, 0), (2, 1), (3, 5)] {
            let v = crate::geometry::integrate(
                &d,
                &measure,
                |z| e_n_alpha(n, 0.5, z).unwrap() * e_n_alpha(m, 0.5, z).unwrap().conj(),
                &quad(),
            )
            .unwrap();
            assert!((v.value - op.entry(m, n)).norm() < 1e-9);
        }
    }

    #[test]
    fn cayley_maps() {
        assert!(cayley_to_disc(I).unwrap().norm() < 1e-16);
        assert!((cayley_to_halfplane(C64::new(0.0, 0.0)).unwrap() - I).norm() < 1e-16);
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..1000 {
            let u = random_upper(&mut rng);
            let back = cayley_to_halfplane(cayley_to_disc(u).unwrap()).unwrap();
            assert!((back - u).norm() < 1e-14 * u.norm().max(1.0));
        }
        // real-axis points approach the unit circle
        for x in [-3.0, 0.0, 0.5, 10.0] {
            let w = cayley_to_disc(C64::new(x, 1e-9)).unwrap();
            assert!((w.norm() - 1.0).abs() < 1e-8);
        }
        assert!(cayley_to_disc(C64::new(1.0, 0.0)).is_err());
        assert!(cayley_to_halfplane(C64::new(1.0, 0.0)).is_err());
    }

    #[test]
    fn pseudohyperbolic_metric() {
        assert!((rho_halfplane(I, 3.0 * I).unwrap() - 0.5).abs() < 1e-15);
        assert_eq!(rho_halfplane(I, I).unwrap(), 0.0);
        assert_eq!(
            rho_disc(C64::new(0.3, 0.1), C64::new(0.3, 0.1)).unwrap(),
            0.0
        );
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let mut worst = 0.0f64;
        for _ in 0..1000 {
            let (u1, u2) = (random_upper(&mut rng), random_upper(&mut rng));
            let h = rho_halfplane(u1, u2).unwrap();
            let d = rho_disc(cayley_to_disc(u1).unwrap(), cayley_to_disc(u2).unwrap()).unwrap();
            worst = worst.max((h - d).abs());
            assert!((rho_halfplane(u2, u1).unwrap() - h).abs() < 1e-15);
            assert!((0.0..1.0).contains(&h));
        }
        assert!(worst < 1e-12, "{worst}");
        let a = C64::new(0.4, -0.3);
        for _ in 0..500 {
            let w1 = cayley_to_disc(random_upper(&mut rng)).unwrap();
            let w2 = cayley_to_disc(random_upper(&mut rng)).unwrap();
            let before = rho_disc(w1, w2).unwrap();
            let after = rho_disc(
                disc_automorphism(a, w1).unwrap(),
                disc_automorphism(a, w2).unwrap(),
            )
            .unwrap();
            assert!((before - after).abs() < 1e-12);
        }
        assert!(rho_halfplane(C64::new(0.0, -1.0), I).is_err());
    }

    #[test]
    fn pseudodisk_mapping() {
        let p = PseudoDisk::new(I, 0.4).unwrap();
        assert_eq!(map_pseudodisk(&p), Domain::disk(C64::new(0.0, 0.0), 0.4));
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for center in [I, C64::new(1.5, 0.7), C64::new(-2.0, 3.0)] {
            let p = PseudoDisk::new(center, 0.6).unwrap();
            let d = map_pseudodisk(&p);
            let mut agree = 0;
            for _ in 0..10_000 {
                let w = C64::from_polar(
                    rng.random::<f64>().sqrt() * 0.999,
                    rng.random_range(0.0..2.0 * PI),
                );
                let u = cayley_to_halfplane(w).unwrap();
                if d.contains(w) == p.contains(u) {
                    agree += 1;
                }
            }
            assert!(agree >= 9990, "{center}: {agree}");
        }
        let tiny = map_pseudodisk(&PseudoDisk::new(C64::new(1.0, 2.0), 1e-9).unwrap());
        let a = cayley_to_disc(C64::new(1.0, 2.0)).unwrap();
        match tiny {
            Domain::Disk { center, radius } => {
                assert!(radius < 1e-8);
                assert!((C64::new(center[0], center[1]) - a).norm() < 1e-8);
            }
            _ => panic!("expected a disk"),
        }
        assert!(PseudoDisk::new(C64::new(0.0, -1.0), 0.5).is_err());
        assert!(PseudoDisk::new(I, 1.0).is_err());
    }

    #[test]
    fn pseudodisk_serde() {
        let p = PseudoDisk::new(C64::new(0.5, 2.0), 0.25).unwrap();
        let s = serde_json::to_string(&p).unwrap();
        assert_eq!(s, r#"{"center":[0.5,2.0],"rho":0.25}"#);
        assert_eq!(serde_json::from_str::<PseudoDisk>(&s).unwrap(), p);
        assert!(serde_json::from_str::<PseudoDisk>(r#"{"center":[0.5,-2.0],"rho":0.25}"#).is_err());
        assert!(
            serde_json::from_str::<PseudoDisk>(r#"{"center":[0.5,2.0],"rho":0.25,"x":1}"#).is_err()
        );
    }

    #[test]
    fn laguerre_laplace() {
        let c = laguerre_laplace_check(1, 0.0, 2.0).unwrap();
        assert!((c.rhs - 0.25).abs() < 1e-15);
        assert!(c.abs_err < 1e-10);
        let c = laguerre_laplace_check(0, 0.5, 3.0).unwrap();
        assert!((c.rhs - (ln_gamma(1.5) - 1.5 * 3f64.ln()).exp()).abs() < 1e-14);
        assert!(laguerre_laplace_check(3, 1.5, 1.7).unwrap().abs_err < 1e-8);
        assert!(laguerre_laplace_check(2, -0.5, 1.5).unwrap().abs_err < 1e-8);
        assert!(laguerre_laplace_check(2, 0.0, 0.5).is_err());
    }

    #[test]
    fn psi_at_i() {
        for alpha in [0.0, 0.5, 2.0] {
            let v = Psi_n_alpha(0, alpha, I).unwrap().norm();
            let expect = 4f64.powf(-(alpha + 0.5)) * 2f64.powf(-(alpha + 2.0));
            assert!((v - expect).abs() < 1e-15);
        }
    }

    #[test]
    fn fourier_side_orthonormal_under_bergman_pairing() {
        // Laguerre functions of a fixed order are orthogonal on the half-line
        let alpha = 1.0;
        for (m, n) in [(0, 1), (1, 3), (2, 2)] {
            let ip = adaptive_gk(
                |t: f64| {
                    psi_fourier_side(m, alpha, t).unwrap() * psi_fourier_side(n, alpha, t).unwrap()
                },
                0.0,
                120.0,
                1e-16,
                1e-12,
            )
            .unwrap()
            .value;
            if m != n {
                assert!(ip.abs() < 1e-12, "{m},{n}: {ip}");
            } else {
                assert!(ip > 0.0);
            }
        }
    }

    #[test]
    fn ber_psi_identity() {
        for &(n, alpha) in &[(0, 0.0), (1, 0.5), (3, 1.0), (2, 2.0)] {
            for z in [2.0 * I, C64::new(0.7, 1.3), C64::new(-1.0, 0.5)] {
                let c = ber_psi_check(n, alpha, z).unwrap();
                assert!(
                    c.abs_err < 1e-9 * c.rhs.norm().max(1e-3),
                    "n={n} alpha={alpha} z={z}: {c:?}"
                );
            }
        }
    }

    #[test]
    fn t_alpha_identity() {
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        for _ in 0..20 {
            let z = random_upper(&mut rng);
            for &(n, alpha) in &[(0, 0.0), (2, 0.5), (5, 1.5)] {
                let c = t_alpha_psi_check(n, alpha, z).unwrap();
                assert!(c.abs_err < 1e-12 * c.rhs.norm().max(1.0), "{z}: {c:?}");
            }
        }
    }
}
