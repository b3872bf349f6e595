use minlab_core::catalog::{conformal_solution, weierstrass_data, ConformalCase, SurfaceClass};
use minlab_core::fd;
use minlab_core::wrep::linspace;
use minlab_core::ParaComplex;
use proptest::prelude::*;

fn samples(cls: &SurfaceClass, n: usize) -> Vec<(f64, f64)> {
    let r = cls.default_domain();
    let mut out = Vec::new();
    for x in linspace(r.x0, r.x1, n) {
        for y in linspace(r.y0, r.y1, n) {
            out.push((x, y));
        }
    }
    out
}

#[test]
fn hopf_differential_is_minus_half() {
    for cls in SurfaceClass::acceptance_samples() {
        if cls == SurfaceClass::Plane {
            continue;
        }
        let d = weierstrass_data(&cls).unwrap();
        for (x, y) in samples(&cls, 9) {
            let q = d.hopf(ParaComplex::new(x, y)).unwrap();
            assert!((q.re + 0.5).abs() < 1e-12 && q.im.abs() < 1e-12, "{cls} at ({x},{y}): {q}");
        }
    }
}

#[test]
fn closed_form_rho_matches_definition() {
    for cls in SurfaceClass::acceptance_samples() {
        let d = weierstrass_data(&cls).unwrap();
        for (x, y) in samples(&cls, 7) {
            let z = ParaComplex::new(x, y);
            let h = d.h(z).unwrap();
            let eta = d.eta(z).unwrap();
            let direct = (1.0 + h.sq_norm()) * eta.sq_norm().abs().sqrt();
            let closed = d.rho(x, y).unwrap();
            assert!((direct.abs() - closed.abs()).abs() < 1e-12, "{cls} at ({x},{y}): {direct} vs {closed}");
        }
    }
}

#[test]
fn aligned_solution_reproduces_data_rho() {
    for cls in SurfaceClass::acceptance_samples() {
        let Some(aligned) = cls.conformal() else { continue };
        let d = weierstrass_data(&cls).unwrap();
        for (x, y) in samples(&cls, 7) {
            let (f, g) = (aligned.solution.f(x + aligned.x_shift), aligned.solution.g(y + aligned.y_shift));
            if (f.d1 - g.d1).abs() < 1e-8 && aligned.solution.case != ConformalCase::Case2 {
                // removable 0/0 of the quotient form, on the singular set
                continue;
            }
            let a = aligned.rho_jet(x, y).rho;
            let b = d.rho(x, y).unwrap();
            assert!((a - b).abs() < 1e-12 * (1.0 + b.abs()), "{cls} at ({x},{y}): {a} vs {b}");
        }
    }
}

#[test]
fn data_rho_satisfies_gauss_equation_by_fd() {
    let h = 1e-3;
    for cls in SurfaceClass::acceptance_samples() {
        if cls == SurfaceClass::Plane {
            continue;
        }
        let d = weierstrass_data(&cls).unwrap();
        for (x, y) in samples(&cls, 6) {
            let r = d.rho(x, y).unwrap();
            let [rx, rxx, _] = fd::derivatives3(|t| d.rho(t, y), x, h).unwrap();
            let [ry, ryy, _] = fd::derivatives3(|t| d.rho(x, t), y, h).unwrap();
            let res = r * (rxx - ryy) - (rx * rx - ry * ry) - 1.0;
            assert!(res.abs() < 1e-7, "{cls} at ({x},{y}): {res}");
        }
    }
}

#[test]
fn case_1d_example() {
    let s = conformal_solution(ConformalCase::Case1d, -1.0, -2.0, 0.0).unwrap();
    for t in linspace(-2.0, 2.0, 50) {
        assert!((s.f(t).v - t.cosh()).abs() < 1e-12);
        assert!((s.g(t).v + 2f64.sqrt() * t.cosh()).abs() < 1e-12);
        for r in s.ode_residuals(t, 0.5 * t) {
            assert!(r.abs() < 1e-10);
        }
    }
}

#[test]
fn lightlike_curvature_records() {
    assert_eq!(SurfaceClass::Plane.lightlike_curvature(), None);
    assert_eq!(SurfaceClass::CatenoidTimelike.lightlike_curvature(), Some(4.0));
    assert_eq!(SurfaceClass::Enneper.lightlike_curvature(), Some(0.0));
    let k = SurfaceClass::BonnetTimelike2 { c4: 2.0 }.lightlike_curvature().unwrap();
    assert!((k + 1.0).abs() < 1e-15);
}

fn case_params() -> impl Strategy<Value = (ConformalCase, f64, f64)> {
    prop_oneof![
        (0.0..3.0f64, 0.01..3.0f64).prop_map(|(c, d)| (ConformalCase::Case1a, c, d)),
        (0.01..3.0f64, -3.0..3.0f64).prop_map(|(c, d)| (ConformalCase::Case1b, c, d)),
        (0.01..3.0f64, 0.01..3.0f64).prop_map(|(c, t)| (ConformalCase::Case1c, c, 2.0 * c - t)),
        (-3.0..-0.01f64, 0.01..3.0f64).prop_map(|(c, t)| (ConformalCase::Case1d, c, c - t)),
    ]
}

proptest! {
    #[test]
    fn ode_and_gauss_residuals_vanish((case, c, d) in case_params(), x in -1.0..1.0f64, y in -1.0..1.0f64) {
        let s = conformal_solution(case, c, d, 0.0).unwrap();
        let scale = 1.0 + c.abs() + d.abs();
        let f = s.f(x);
        let g = s.g(y);
        for r in s.ode_residuals(x, y) {
            prop_assert!(r.abs() < 1e-10 * scale * (1.0 + f.v * f.v + g.v * g.v));
        }
        let j = s.rho_jet(x, y);
        prop_assume!((f.d1 - g.d1).abs() > 1e-2);
        prop_assert!(j.rxy.abs() < 1e-8 * (1.0 + j.rho.abs()).powi(3));
        let mag = 1.0 + j.rho.abs() * (j.rxx.abs() + j.ryy.abs()) + j.rx * j.rx + j.ry * j.ry;
        prop_assert!(j.gauss_residual().abs() < 1e-9 * mag, "{:?}", j);
    }
}

mod axial {
    use std::sync::Arc;

    use minlab_core::catalog::{axial_directions, weierstrass_data, SurfaceClass};
    use minlab_core::wrep::{sample, GridSpec};
    use minlab_core::Error;

    fn axes(cls: SurfaceClass) -> minlab_core::Result<minlab_core::catalog::AxialDirections> {
        let data = weierstrass_data(&cls).unwrap();
        let grid = sample(Arc::new(data.clone()), &GridSpec::new(50, 50, data.domain)).unwrap();
        axial_directions(&grid, &cls)
    }

    #[test]
    fn spacelike_and_timelike_axes() {
        let a = axes(SurfaceClass::BonnetPeriodic { c1: 2.0 }).unwrap();
        let (v1, v2) = (a.v1.unwrap(), a.v2.unwrap());
        assert!((v1.norm_sq() - 2.25).abs() < 1e-6 && (v2.norm_sq() + 6.25).abs() < 1e-6);
        assert!(v1.inner(v2).abs() < 1e-6);
        assert!(a.spread1 < 1e-5 && a.spread2 < 1e-5);
    }

    #[test]
    fn case_1d_timelike_v1() {
        let a = axes(SurfaceClass::BonnetTimelike2 { c4: 1.0 }).unwrap();
        assert!((a.v1.unwrap().norm_sq() + 1.0).abs() < 1e-6);
        assert!((a.v2.unwrap().norm_sq() + 2.0 * -1.0).abs() < 1e-6);
    }

    #[test]
    fn vanishing_f_has_no_v1() {
        let a = axes(SurfaceClass::CatenoidTimelike).unwrap();
        assert!(a.v1.is_none());
        assert!((a.v2.unwrap().norm_sq() + 4.0).abs() < 1e-6);
        assert!(matches!(axes(SurfaceClass::Plane), Err(Error::NotApplicable(_))));
    }
}
