//! Property tests for the structural invariants of each module.

use std::f64::consts::PI;

use num_complex::Complex64 as C64;
use proptest::prelude::*;

use tflocal_core::bergman_wavelet::{
    bergman_galerkin, disc_automorphism, map_pseudodisk, rho_disc, PseudoDisk,
};
use tflocal_core::fock_op::{
    assemble_indicator, assemble_symbol, build_counterexample_symbol, CounterexampleSupport,
    GalerkinOperator,
};
use tflocal_core::frame_lab::{frame_bounds_estimate, frame_matrix, Lattice};
use tflocal_core::geometry::{integrate, monomial_moment, Domain, QuadratureSpec, RadialMeasure};
use tflocal_core::inverse_probe::{
    disk_verdict, double_orth_test, probe_residual, BasisTag, BlackBox, Verdict, VerdictTolerances,
};
use tflocal_core::special_fn::{regularized_incomplete_beta, regularized_lower_gamma};

fn quad() -> QuadratureSpec {
    QuadratureSpec::default()
}

fn eps(op: &GalerkinOperator) -> f64 {
    10.0 * op.quad_tol.max(1e-12)
}

fn config(cases: u32) -> ProptestConfig {
    ProptestConfig {
        cases,
        ..ProptestConfig::default()
    }
}

/// Off-center convex shapes inside `Disk(0, 2)`.
fn shape() -> impl Strategy<Value = Domain> {
    prop_oneof![
        (-0.6..0.6f64, -0.6..0.6f64, 0.2..1.0f64)
            .prop_map(|(x, y, r)| Domain::disk(C64::new(x, y), r)),
        (-0.5..0.5f64, -0.5..0.5f64, 0.3..1.6f64, 0.0..PI).prop_map(|(x, y, s, a)| Domain::square(
            C64::new(x, y),
            s
        )
        .rotated(a)),
        // angles a, a + 2.1, a + 4.2 leave gaps below pi, so the triangle is counterclockwise
        (0.2..1.8f64, 0.2..1.8f64, 0.2..1.8f64, 0.0..2.0 * PI).prop_map(|(r1, r2, r3, a)| {
            Domain::polygon(&[
                C64::from_polar(r1, a),
                C64::from_polar(r2, a + 2.1),
                C64::from_polar(r3, a + 4.2),
            ])
        }),
    ]
}

fn max_entry_gap(a: &GalerkinOperator, b: impl Fn(usize, usize) -> C64) -> f64 {
    let n = a.size();
    (0..n)
        .flat_map(|i| (0..n).map(move |j| (i, j)))
        .map(|(i, j)| (a.entry(i, j) - b(i, j)).norm())
        .fold(0.0, f64::max)
}

proptest! {
    #![proptest_config(config(64))]

    #[test]
    fn incomplete_functions_monotone(s in 0.5..30.0f64, x in 0.0..60.0f64, dx in 0.0..5.0f64, a in 0.5..10.0f64, b in 0.5..10.0f64, u in 0.0..1.0f64, du in 0.0..0.5f64) {
        prop_assert!(regularized_lower_gamma(s, x).unwrap() <= regularized_lower_gamma(s, x + dx).unwrap());
        prop_assert_eq!(regularized_lower_gamma(s, 0.0).unwrap(), 0.0);
        let v = (u + du).min(1.0);
        prop_assert!(regularized_incomplete_beta(a, b, u).unwrap() <= regularized_incomplete_beta(a, b, v).unwrap() + 1e-15);
        prop_assert_eq!(regularized_incomplete_beta(a, b, 0.0).unwrap(), 0.0);
        prop_assert_eq!(regularized_incomplete_beta(a, b, 1.0).unwrap(), 1.0);
    }

    #[test]
    fn disc_automorphisms_preserve_metric(a in (-0.9..0.9f64, -0.9..0.9f64), w1 in (0.0..0.99f64, 0.0..6.3f64), w2 in (0.0..0.99f64, 0.0..6.3f64)) {
        let a = C64::new(a.0, a.1);
        prop_assume!(a.norm() < 0.95);
        let (w1, w2) = (C64::from_polar(w1.0, w1.1), C64::from_polar(w2.0, w2.1));
        let before = rho_disc(w1, w2).unwrap();
        let after = rho_disc(disc_automorphism(a, w1).unwrap(), disc_automorphism(a, w2).unwrap()).unwrap();
        prop_assert!((before - after).abs() <= 1e-12, "{} vs {}", before, after);
    }
}

proptest! {
    #![proptest_config(config(12))]

    #[test]
    fn radial_moments_match_closed_form(r in 0.1..3.0f64, m in 0usize..=12, alpha in prop_oneof![Just(None), (0.0..3.0f64).prop_map(Some)]) {
        let measure = match alpha {
            None => RadialMeasure::FockGaussian,
            Some(a) => RadialMeasure::bergman(a).unwrap(),
        };
        let r = r.min(0.95 * measure.support_radius());
        let q = quad();
        let got = integrate(&Domain::centered_disk(r), &measure, |z| C64::new(z.norm_sqr().powi(m as i32), 0.0), &q).unwrap();
        let want = measure.closed_moment(2 * m + 1, r).unwrap();
        prop_assert!((got.value.re - want).abs() <= 10.0 * q.target_abs_tol, "{} vs {}", got.value.re, want);
    }

    #[test]
    fn rotational_selection_rule(p in 3usize..=6, r in 0.3..1.5f64, phase in 0.0..1.0f64, m in 0usize..4, k in 1usize..9) {
        let verts: Vec<C64> = (0..p).map(|j| C64::from_polar(r, phase + 2.0 * PI * j as f64 / p as f64)).collect();
        let v = monomial_moment(&Domain::polygon(&verts), &RadialMeasure::FockGaussian, m, k, &quad()).unwrap();
        if k % p != 0 {
            prop_assert!(v.norm() <= 1e-9, "p={} k={}: {}", p, k, v);
        }
    }

    #[test]
    fn operators_hermitian_and_contained(d in shape()) {
        let op = assemble_indicator(&d, 16, &quad()).unwrap();
        let e = eps(&op);
        prop_assert!(op.hermitian_defect() <= e);
        let spec = op.eigendecompose().unwrap();
        prop_assert!(spec.eigenvalues.iter().all(|&l| l >= -e && l <= 1.0 + e), "{:?}", spec.eigenvalues);
    }

    #[test]
    fn operator_order_follows_inclusion(x in -0.5..0.5f64, y in -0.5..0.5f64, s in 0.3..1.2f64, grow in 0.01..0.5f64) {
        let c = C64::new(x, y);
        let inner = Domain::square(c, s);
        let outer = Domain::disk(c, s / 2f64.sqrt() + grow);
        let q = quad();
        let small = assemble_indicator(&inner, 12, &q).unwrap();
        let big = assemble_indicator(&outer, 12, &q).unwrap();
        let diff = big.minus(&small).unwrap().eigendecompose().unwrap();
        let e = eps(&small) + eps(&big);
        prop_assert!(diff.eigenvalues.iter().all(|&l| l >= -e));
        // the same order holds for plain integrals of a nonnegative function
        let f = |z: C64| C64::new((z.re * 2.0).cos().powi(2) + z.im * z.im, 0.0);
        let a = integrate(&inner, &RadialMeasure::FockGaussian, f, &q).unwrap().value.re;
        let b = integrate(&outer, &RadialMeasure::FockGaussian, f, &q).unwrap().value.re;
        prop_assert!(a <= b + q.target_abs_tol);
    }

    #[test]
    fn rotation_equivariance(d in shape(), theta in 0.0..2.0 * PI) {
        let q = quad();
        let base = assemble_indicator(&d, 12, &q).unwrap();
        let turned = assemble_indicator(&d.clone().rotated(theta), 12, &q).unwrap();
        // entry (m, n) pairs e_n with conj(e_m), so the phase is e^{i(n-m)theta}
        let gap = max_entry_gap(&turned, |m, n| C64::from_polar(1.0, (n as f64 - m as f64) * theta) * base.entry(m, n));
        prop_assert!(gap <= eps(&base) + eps(&turned), "{}", gap);
        // probe residuals do not see the rotation
        let b0 = BlackBox::from_operator(&base, BasisTag::Fock).unwrap();
        let b1 = BlackBox::from_operator(&turned, BasisTag::Fock).unwrap();
        for n in 0..4 {
            let (r0, r1) = (probe_residual(&b0, n).unwrap(), probe_residual(&b1, n).unwrap());
            prop_assert!((r0.residual - r1.residual).abs() <= 1e-9 && (r0.lambda - r1.lambda).abs() <= 1e-9);
        }
    }

    #[test]
    fn trace_is_area(d in shape()) {
        let op = assemble_indicator(&d, 48, &quad()).unwrap();
        prop_assert!((op.trace() - d.area()).abs() <= 1e-6, "{} vs {}", op.trace(), d.area());
    }

    #[test]
    fn verdict_scale_invariant(r in 0.4..1.6f64, c in 0.01..100.0f64, square in any::<bool>()) {
        let d = if square { Domain::square(C64::new(0.0, 0.0), 2.0 * r) } else { Domain::centered_disk(r) };
        let op = assemble_indicator(&d, 24, &quad()).unwrap();
        let scaled = op.matrix.map(|v| v * c);
        let probes: Vec<usize> = (0..6).collect();
        let a = disk_verdict(&BlackBox::from_operator(&op, BasisTag::Fock).unwrap(), &probes, VerdictTolerances::default()).unwrap();
        let b = disk_verdict(&BlackBox::from_matrix(scaled, BasisTag::Fock).unwrap(), &probes, VerdictTolerances::default()).unwrap();
        let radial = |v: Verdict| v != Verdict::NotRadial;
        prop_assert_eq!(radial(a.verdict), radial(b.verdict));
        for (p, s) in a.probes.iter().zip(&b.probes) {
            prop_assert!((p.relative_residual() - s.relative_residual()).abs() <= 1e-9);
        }
    }

    #[test]
    fn double_orthogonality_of_radial_domains(r_in in 0.0..1.0f64, width in 0.1..1.0f64, theta in 0.0..2.0 * PI, m in 0usize..4) {
        let q = quad();
        let fock = RadialMeasure::FockGaussian;
        let d = if r_in < 0.05 { Domain::centered_disk(width) } else { Domain::annulus(r_in, r_in + width) };
        prop_assert!(double_orth_test(&d.rotated(theta), &fock, m, 6, 1e-8, &q).unwrap().pass);
    }

    #[test]
    fn off_center_disks_fail_at_k1(rho in 0.1..1.0f64, phi in 0.0..2.0 * PI) {
        let d = Domain::disk(C64::from_polar(rho, phi), 0.5);
        let res = double_orth_test(&d, &RadialMeasure::FockGaussian, 0, 3, 1e-8, &quad()).unwrap();
        prop_assert_eq!(res.first_failure, Some(1));
    }

    #[test]
    fn frame_operator_psd(red in 1.2..4.0f64, hex in any::<bool>()) {
        let lat = if hex { Lattice::hexagonal(red, 6.0) } else { Lattice::rectangular(red, 6.0) }.unwrap();
        let s = frame_matrix(&lat, 16).unwrap();
        let defect = (&s - s.adjoint()).iter().map(|v| v.norm()).fold(0.0, f64::max);
        prop_assert!(defect <= 1e-10);
        let herm = (&s + s.adjoint()) * C64::new(0.5, 0.0);
        let min = nalgebra::linalg::SymmetricEigen::new(herm).eigenvalues.min();
        prop_assert!(min >= -1e-10);
        let est = frame_bounds_estimate(&lat, 16).unwrap();
        prop_assert!(est.a_est <= est.b_est);
    }
}

#[test]
fn counterexample_column_is_isolated() {
    for target in 0..=2 {
        let sym = build_counterexample_symbol(target, CounterexampleSupport::default()).unwrap();
        let op = assemble_symbol(&sym, 12, &quad()).unwrap();
        let e = eps(&op).max(1e-8);
        for m in 0..12 {
            if m != target {
                assert!(
                    op.entry(m, target).norm() <= e,
                    "target {target} row {m}: {}",
                    op.entry(m, target)
                );
            }
        }
        assert!(op.entry(target, target).re > 0.0);
    }
}

#[test]
fn bergman_disks_recovered_as_pseudodisks() {
    for (alpha, r) in [(0.0, 0.4), (1.0, 0.7)] {
        let op = bergman_galerkin(&Domain::centered_disk(r), alpha, 24, &quad()).unwrap();
        let bb = BlackBox::from_operator(&op, BasisTag::Bergman { alpha }).unwrap();
        let rep = disk_verdict(&bb, &[0, 1, 2, 3], VerdictTolerances::default()).unwrap();
        assert_eq!(rep.verdict, Verdict::DiskCentered);
        let pd = rep.pseudodisk.expect("bergman report carries a pseudodisk");
        assert_eq!(
            pd,
            PseudoDisk::new(C64::new(0.0, 1.0), rep.radius.unwrap()).unwrap()
        );
        match map_pseudodisk(&pd) {
            Domain::Disk { center, radius } => {
                assert!(center[0].abs() < 1e-15 && center[1].abs() < 1e-15);
                assert!((radius - r).abs() < 1e-6);
            }
            other => panic!("{other:?}"),
        }
    }
}
