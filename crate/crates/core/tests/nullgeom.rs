

use minlab_core::catalog::{weierstrass_data, SurfaceClass};
use minlab_core::nullgeom::*;
use minlab_core::wrep::{conjugate, linspace};
use minlab_core::Vec21;
use proptest::prelude::*;

fn helices() -> Vec<(NullCurve, f64)> {
    vec![
        (helix(HelixKind::Positive, 2.0).unwrap(), 4.0),
        (helix(HelixKind::Zero, 0.0).unwrap(), 0.0),
        (helix(HelixKind::Negative, 1.0).unwrap(), -1.0),
    ]
}

#[test]
fn helix_curvatures_and_frames() {
    for (h, k) in helices() {
        let frames = frame_and_curvature(&h, 21).unwrap();
        for f in &frames {
            assert!((f.kappa - k).abs() < 1e-6, "{}: {} vs {k}", h.label, f.kappa);
            assert!(f.structure_residual < 1e-5, "{}: {}", h.label, f.structure_residual);
            assert!((f.n.inner(f.sigma) + 2.0).abs() < 1e-8);
            assert!(f.n.inner(f.e).abs() < 1e-8);
            assert!(f.n.norm_sq().abs() < 1e-8);
            assert!((f.e.norm_sq() - 1.0).abs() < 1e-8);
        }
        assert!(h.null_residual(50).unwrap() < 1e-14);
    }
}

#[test]
fn frame_requires_pseudo_arclength() {
    let h = helix(HelixKind::Positive, 2.0).unwrap().affine_reparam(2.0, 0.0);
    assert!(matches!(frame_at(&h, 0.3), Err(minlab_core::Error::NotPseudoArclength)));
    assert!((curvature_raw(&h, 0.3).unwrap() - 4.0).abs() < 1e-6);
}

#[test]
fn helix_parameter_rejected() {
    assert!(helix(HelixKind::Positive, 0.0).is_err());
    assert!(helix(HelixKind::Negative, -1.0).is_err());
}

#[test]
fn pseudo_arclength_fixes_unit_speed_curve() {
    let c = curve_from_angle(|u| u, (0.0, 2.0));
    let s = pseudo_arclength(&c).unwrap();
    assert!((s.interval.1 - 2.0).abs() < 1e-10);
    for t in linspace(0.0, 2.0, 11) {
        assert!((s.position(t).unwrap() - c.position(t).unwrap()).max_abs() < 1e-8);
    }
}

#[test]
fn pseudo_arclength_of_helix_is_fixed_point() {
    let h = helix(HelixKind::Positive, 2.0).unwrap();
    let s = pseudo_arclength(&h).unwrap();
    for t in linspace(0.0, 2.0, 9) {
        assert!((s.position(t).unwrap() - h.position(t).unwrap()).max_abs() < 1e-10);
    }
}

fn hausdorff(a: &[(f64, Vec21)], b: &[(f64, Vec21)]) -> f64 {
    let one = |p: &[(f64, Vec21)], q: &[(f64, Vec21)]| {
        p.iter()
            .map(|(_, x)| q.iter().map(|(_, y)| (*x - *y).euclid_norm()).fold(f64::INFINITY, f64::min))
            .fold(0.0, f64::max)
    };
    one(a, b).max(one(b, a))
}

#[test]
fn reparametrization_invariance() {
    let c = curve_from_angle(|u| u * u, (1.0, 2.0));
    let doubled = c.affine_reparam(2.0, 0.0);
    let a = pseudo_arclength(&c).unwrap();
    let b = pseudo_arclength(&doubled).unwrap();
    assert!((a.interval.1 - a.interval.0 - (b.interval.1 - b.interval.0)).abs() < 1e-9);
    // Dense samples of the same geometric curve.
    let sa = a.samples(2001).unwrap();
    let sb = b.samples(2001).unwrap();
    let d = hausdorff(&sa, &sb);
    assert!(d < 1e-3, "{d}");
    // Pointwise comparison at equal arclength from the start.
    for k in 0..5 {
        let ds = k as f64 * 0.2;
        let pa = a.position(a.interval.0 + ds).unwrap();
        let pb = b.position(b.interval.0 + ds).unwrap();
        assert!((pa - pb).max_abs() < 1e-6);
    }
}

#[test]
fn angle_curvature_agrees_with_frame() {
    let c = curve_from_angle(|u| u * u, (1.0, 2.0));
    let af = AngleFunction::from_theta(|u| u * u, (1.0, 2.0));
    for u in linspace(1.0, 2.0, 11) {
        let k_angle = curvature_from_angle(&af, u).unwrap();
        let k_frame = curvature_raw(&c, u).unwrap();
        assert!((k_angle - k_frame).abs() < 1e-5, "{u}: {k_angle} vs {k_frame}");
    }
    let unit = AngleFunction::from_theta(|u| u, (0.0, 1.0));
    assert!((curvature_from_angle(&unit, 0.5).unwrap() - 1.0).abs() < 1e-9);
    let flat = AngleFunction::from_omega(|_| 0.0, (0.0, 1.0));
    assert!(curvature_from_angle(&flat, 0.5).is_err());
}

#[test]
fn angle_from_curve_matches_synthetic() {
    let c = curve_from_angle(|u| u * u, (1.0, 2.0));
    let from_curve = AngleFunction::from_curve(&c);
    let synthetic = AngleFunction::from_theta(|u| u * u, (1.0, 2.0));
    for u in linspace(1.0, 2.0, 7) {
        let a = from_curve.omega_jet(u).unwrap();
        let b = synthetic.omega_jet(u).unwrap();
        for i in 0..3 {
            assert!((a[i] - b[i]).abs() < 1e-5, "{u} {i}: {a:?} vs {b:?}");
        }
    }
}

#[test]
fn scaling_law_on_helices() {
    for (h, k) in helices() {
        for mu in [0.5, 2.0] {
            let (a, _) = scale_curves(&h, &h, mu).unwrap();
            let s = pseudo_arclength(&a).unwrap();
            let f = frame_at(&s, 0.5 * (s.interval.0 + s.interval.1)).unwrap();
            assert!((f.kappa - k / mu).abs() < 1e-5, "{} μ={mu}: {}", h.label, f.kappa);
        }
    }
    assert!(scale_curves(&helices()[0].0, &helices()[0].0, 0.0).is_err());
}

#[test]
fn balancing_equalizes() {
    let a = helix(HelixKind::Positive, 2.0).unwrap();
    let b = helix(HelixKind::Positive, 1.0).unwrap();
    let mu = balance_scaling(4.0, 1.0).unwrap();
    let (a2, b2) = scale_curves(&a, &b, mu).unwrap();
    let ka = curvature_raw(&a2, 0.7).unwrap();
    let kb = curvature_raw(&b2, 0.7).unwrap();
    assert!((ka - 2.0).abs() < 1e-5 && (kb - 2.0).abs() < 1e-5, "{ka} {kb}");
}

#[test]
fn catalog_curves_have_constant_curvature_d_minus_c() {
    for cls in SurfaceClass::acceptance_samples() {
        let Some(expected) = cls.lightlike_curvature() else { continue };
        let data = weierstrass_data(&cls).unwrap();
        let dom = cls.default_domain();
        let r = 0.45 * (dom.x1 - dom.x0).min(dom.y1 - dom.y0) / 2.0;
        let (cx, cy) = (0.5 * (dom.x0 + dom.x1), 0.5 * (dom.y0 + dom.y1));
        let (a, b) = decompose(&data, NullRect::centered(cx, cy, r)).unwrap();
        for curve in [&a, &b] {
            let ks = curvature_profile(curve, 15).unwrap();
            let (lo, hi) = ks.iter().fold((f64::MAX, f64::MIN), |(l, h), k| (l.min(*k), h.max(*k)));
            assert!(hi - lo < 1e-5, "{cls} {}: spread {}", curve.label, hi - lo);
            assert!((ks[7] - expected).abs() < 1e-5, "{cls}: {} vs {expected}", ks[7]);
        }
        // Conjugate: null curves (α, -β) keep the same curvature.
        let (ca, cb) = decompose(&conjugate(&data), NullRect::centered(cx, cy, r)).unwrap();
        assert!((curvature_raw(&ca, cx + cy).unwrap() - expected).abs() < 1e-5);
        assert!((curvature_raw(&cb, cx - cy).unwrap() - expected).abs() < 1e-5);
        let tb = b.tangent(cx - cy).unwrap();
        let tcb = cb.tangent(cx - cy).unwrap();
        assert!((tb + tcb).max_abs() < 1e-12);
    }
}

#[test]
fn decomposition_reconstructs_enneper() {
    let data = weierstrass_data(&SurfaceClass::Enneper).unwrap();
    let rect = NullRect::centered(0.1, -0.05, 0.4);
    let (a, b) = decompose(&data, rect).unwrap();
    let sum = NullSum { alpha: a.clone(), beta: b.clone() };
    use minlab_core::wrep::Immersion;
    for u in linspace(rect.u0 - 0.3, rect.u0 + 0.3, 5) {
        for v in linspace(rect.v0 - 0.3, rect.v0 + 0.3, 5) {
            let (x, y) = ((u + v) / 2.0, (u - v) / 2.0);
            let f = data.integrate_point(x, y).unwrap();
            assert!((sum.point(x, y).unwrap() - f).max_abs() < 1e-8);
        }
    }
    // Hopf-normalized data give pseudo-arclength generating curves.
    for t in linspace(rect.u0 - 0.3, rect.u0 + 0.3, 5) {
        let [_, a2, _, _] = a.derivs(t).unwrap();
        assert!((a2.norm_sq() - 1.0).abs() < 1e-9);
    }
    assert!(decompose(&data, NullRect::centered(0.9, 0.0, 0.5)).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]
    #[test]
    fn scaling_law_random_mu(mu in 0.5..2.0f64, c in 0.5..2.0f64, t in 0.2..1.8f64) {
        for kind in [HelixKind::Positive, HelixKind::Negative] {
            let h = helix(kind, c).unwrap();
            let k = curvature_raw(&h, t).unwrap();
            let scaled = curvature_raw(&h.scaled(mu), t).unwrap();
            prop_assert!((scaled - k / mu).abs() < 1e-5 * (1.0 + k.abs()));
        }
    }

    #[test]
    fn helix_curves_are_null(c in 0.1..3.0f64, s in -2.0..2.0f64) {
        for kind in [HelixKind::Positive, HelixKind::Zero, HelixKind::Negative] {
            let h = helix(kind, c).unwrap();
            let d = h.tangent(s).unwrap();
            prop_assert!(d.norm_sq().abs() < 1e-12 * (1.0 + d.euclid_norm().powi(2)));
        }
    }
}

