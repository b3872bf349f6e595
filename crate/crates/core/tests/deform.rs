use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_2, FRAC_PI_4, SQRT_2};

use minlab_core::catalog::{weierstrass_data, SurfaceClass};
use minlab_core::checks::kappa_constancy;
use minlab_core::deform::*;
use minlab_core::nullgeom::{frame_and_curvature, NullRect};
use minlab_core::wrep::{conjugate, GridSpec, Immersion, Rect};
use minlab_core::{ParaComplex, Vec21};

fn q() -> f64 {
    2f64.powf(0.25)
}

fn enneper_limit(x: f64, y: f64) -> Vec21 {
    Vec21::new(x * x + y * y, x - x * y * y - x.powi(3) / 3.0, -y - x * x * y - y.powi(3) / 3.0) / SQRT_2
}

fn max_dev(f: impl Fn(f64, f64) -> (Vec21, Vec21)) -> f64 {
    probe_points(0.5)
        .into_iter()
        .map(|(x, y)| {
            let (a, b) = f(x, y);
            (a - b).max_abs()
        })
        .fold(0.0, f64::max)
}

#[test]
fn p_branch_special_value_is_stored() {
    let d = family_data(Branch::P, FRAC_PI_4).unwrap();
    let z = ParaComplex::new(0.4, -0.3);
    let h = d.h(z).unwrap() - z * 2f64.powf(-0.25);
    assert!(h.re.abs() < 1e-15 && h.im.abs() < 1e-15);
    assert!((d.eta(z).unwrap().re - 2f64.powf(-0.75)).abs() < 1e-15);
}

#[test]
fn p_branch_is_continuous_through_quarter_pi() {
    let near = family_data(Branch::P, FRAC_PI_4 - 1e-9).unwrap();
    let at = family_data(Branch::P, FRAC_PI_4).unwrap();
    for &(x, y) in &probe_points(0.5) {
        let z = ParaComplex::new(x, y);
        let d = near.h(z).unwrap() - at.h(z).unwrap();
        assert!(d.re.abs() < 1e-8 && d.im.abs() < 1e-8);
    }
}

#[test]
fn p_branch_enneper_limit() {
    let m = max_dev(|x, y| (family_point(Branch::P, FRAC_PI_4, q() * x, q() * y).unwrap(), enneper_limit(x, y)));
    assert!(m < 1e-6, "{m}");
}

#[test]
fn p_branch_plane_limits() {
    let a = 3.0 * 2f64.powf(-0.75);
    for theta in [-FRAC_PI_4 + 1e-7, 3.0 * FRAC_PI_4 - 1e-7] {
        let m = max_dev(|x, y| (family_point(Branch::P, theta, x, y).unwrap(), Vec21::new(0.0, a * x, -a * y)));
        assert!(m < 1e-6, "{theta}: {m}");
    }
}

#[test]
fn s2_meets_p_at_enneper() {
    let shift = Vec21::new(FRAC_1_SQRT_2, 0.0, -2.0 * SQRT_2 / 3.0);
    let m = max_dev(|x, y| {
        (
            family_point(Branch::S2, FRAC_PI_4, x, y - q()).unwrap() + shift,
            family_point(Branch::P, FRAC_PI_4, x, y).unwrap(),
        )
    });
    assert!(m < 1e-6, "{m}");
    let near = max_dev(|x, y| {
        (family_point(Branch::S2, FRAC_PI_4 - 1e-10, x, y).unwrap(), family_point(Branch::S2, FRAC_PI_4, x, y).unwrap())
    });
    assert!(near < 1e-4, "{near}");
}

#[test]
fn cl_branch_limits_and_junction() {
    let m = max_dev(|x, y| {
        let o = Vec21::new(y - x * x * y - y.powi(3) / 3.0, -2.0 * x * y, -y - x * x * y - y.powi(3) / 3.0) * 0.5;
        (family_point(Branch::CL, 1e-8, x, y).unwrap(), o)
    });
    assert!(m < 1e-6, "{m}");
    let j = max_dev(|x, y| (family_point(Branch::CL, 1.0, x, y).unwrap(), family_point(Branch::S2, 0.0, x, y).unwrap()));
    assert!(j < 1e-6, "{j}");
    // h at ĉ₃ = 1 is 2je^{jz} - j
    let d = family_data(Branch::CL, 1.0).unwrap();
    let z = ParaComplex::new(0.2, 0.3);
    let e = d.h(z).unwrap() - (ParaComplex::J * z).exp() * ParaComplex::J * 2.0 + ParaComplex::J;
    assert!(e.re.abs() < 1e-14 && e.im.abs() < 1e-14);
}

#[test]
fn cl_branch_start_is_lightlike_catenoid_data() {
    let d = family_data(Branch::CL, 0.0).unwrap();
    let c = weierstrass_data(&SurfaceClass::CatenoidLightlike).unwrap();
    for &(x, y) in &probe_points(0.5) {
        let z = ParaComplex::new(x, y);
        // h has a pole where 1 - jz is a zero divisor
        let (Ok(a), Ok(b)) = (d.h(z), c.h(z)) else { continue };
        let dh = a - b;
        let de = d.eta(z).unwrap() - c.eta(z).unwrap();
        assert!(dh.re.abs().max(dh.im.abs()).max(de.re.abs()).max(de.im.abs()) < 1e-14);
    }
}

#[test]
fn s4_and_bl2_junctions() {
    let s = max_dev(|x, y| {
        (family_point(Branch::S4, 0.0, x, y).unwrap(), family_point(Branch::S2, -FRAC_PI_2, x, y).unwrap())
    });
    assert!(s < 1e-6, "{s}");
    let b = max_dev(|x, y| (family_point(Branch::BL2, 0.0, x, y).unwrap(), family_point(Branch::P, 0.0, x, y).unwrap()));
    assert!(b < 1e-6, "{b}");
}

#[test]
fn bl2_endpoints_are_catalog_data() {
    let z = ParaComplex::new(0.3, -0.2);
    let w = z * q();
    let start = family_data(Branch::BL2, 0.0).unwrap();
    let c = weierstrass_data(&SurfaceClass::CatenoidSpacelike1).unwrap();
    let d = start.h(z).unwrap() - c.h(w).unwrap();
    assert!(d.re.abs() < 1e-14 && d.im.abs() < 1e-14);
    let end = family_data(Branch::BL2, 1.0).unwrap();
    let c = weierstrass_data(&SurfaceClass::BonnetLightlike2).unwrap();
    let d = end.h(z).unwrap() - c.h(w).unwrap();
    assert!(d.re.abs() < 1e-14 && d.im.abs() < 1e-14);
}

#[test]
fn bl2_interior_members_have_bonnet_spacelike_conformal_factor() {
    for c5 in [0.2, 0.5, 0.8] {
        let a = bl2_alignment(c5).unwrap();
        let data = family_data(Branch::BL2, c5).unwrap();
        let bs = weierstrass_data(&SurfaceClass::BonnetSpacelike { c2: a.c2 }).unwrap();
        for &(x, y) in &probe_points(1.0) {
            let lhs = data.rho(x, y).unwrap();
            let rhs = a.scale * bs.rho(q() * x + a.x_shift, q() * y + a.y_shift).unwrap();
            assert!((lhs - rhs).abs() < 1e-12 * (1.0 + lhs.abs()), "{c5} ({x}, {y})");
        }
    }
    assert!(bl2_alignment(1.0).is_err());
}

#[test]
fn family_surface_matches_pointwise_evaluation() {
    let spec = GridSpec::new(7, 6, Rect::square(0.5));
    for b in Branch::ALL {
        let (lo, hi) = b.range();
        let theta = 0.3 * lo + 0.7 * hi;
        let grid = family_surface(b, theta, &spec).unwrap();
        let m = family_member(b, theta).unwrap();
        for k in 0..grid.len() {
            let (x, y) = grid.coords(k);
            assert!((grid.points[k] - m.point(x, y).unwrap()).max_abs() < 1e-9, "{b}");
        }
        let r = grid.conformality_residual().unwrap();
        assert!(r < 1e-6, "{b}: {r}");
    }
}

#[test]
fn branch_members_keep_equal_constant_curvature() {
    let rect = NullRect::centered(0.0, 0.0, 0.4);
    for b in Branch::ALL {
        let (lo, hi) = b.range();
        for theta in [0.8 * lo + 0.2 * hi, 0.4 * lo + 0.6 * hi] {
            let r = kappa_constancy(&family_data(b, theta).unwrap(), rect, None, 16).unwrap();
            assert!(r.spread.pass, "{b}({theta}): {}", r.spread);
            assert!((r.kappa_alpha - r.kappa_beta).abs() < 1e-4, "{b}({theta})");
        }
    }
}

#[test]
fn p_branch_curvature_law() {
    // α of the data is 2^{3/2}·α^{ĉ₁}, so κ = -4cos(2ĉ₁)/2^{3/2}
    let rect = NullRect::centered(0.0, 0.0, 0.4);
    for c1 in [-0.5, 0.0, 0.3, 1.2, 2.0] {
        let r = kappa_constancy(&family_data(Branch::P, c1).unwrap(), rect, None, 16).unwrap();
        let expect = -4.0 * (2.0 * c1).cos() / 2f64.powf(1.5);
        assert!((r.kappa_alpha - expect).abs() < 1e-4, "{c1}: {} vs {expect}", r.kappa_alpha);
    }
}

#[test]
fn null_curve_family_pseudo_arclength_and_curvature() {
    for c1 in [-0.5, 0.0, 0.3, FRAC_PI_4, 1.2, 2.0] {
        let (alpha, beta) = null_curve_family(c1).unwrap();
        for curve in [&alpha, &beta] {
            let frames = frame_and_curvature(curve, 12).unwrap();
            for f in &frames {
                assert!((f.kappa + 4.0 * (2.0 * c1).cos()).abs() < 1e-5, "{c1}: {}", f.kappa);
            }
            for t in [-0.8, 0.0, 0.6] {
                let d = curve.derivs(t).unwrap();
                assert!((d[1].norm_sq() - 1.0).abs() < 1e-6);
                assert!(d[0].norm_sq().abs() < 1e-12);
            }
        }
    }
}

#[test]
fn null_curve_family_generates_the_p_branch() {
    for c1 in [-0.5, 0.0, 0.3, FRAC_PI_4, 1.2, 2.0] {
        let (alpha, beta) = null_curve_family(c1).unwrap();
        let m = family_member(Branch::P, c1).unwrap();
        let k = 2f64.powf(0.75) / 2.0;
        let scale = 1.0 / (2f64.powf(1.5) * r_factor(c1));
        for &(u, v) in &[(0.1, 0.2), (-0.3, 0.25), (0.4, -0.35), (0.0, 0.0)] {
            let lhs = (alpha.position(u).unwrap() + beta.position(v).unwrap()) * 0.5;
            let rhs = m.point(k * (u + v), k * (u - v)).unwrap() * scale;
            assert!((lhs - rhs).max_abs() < 1e-6, "{c1} ({u}, {v})");
        }
    }
}

#[test]
fn continuity_scans() {
    let probes = probe_points(0.5);
    let r = continuity_scan(Branch::P, &uniform_thetas(Branch::P, 200), &probes).unwrap();
    assert!(r.max_jump < 0.05, "{r:?}");
    for b in [Branch::P, Branch::CL, Branch::S4, Branch::BL2] {
        let r = refinement_study(b, 50, &probes).unwrap();
        assert!(r.ratio < 0.55, "{b}: {r:?}");
    }
    // S2 depends on the square roots a₀, a₁, so jumps shrink like √Δθ
    let r = refinement_study(Branch::S2, 50, &probes).unwrap();
    assert!(r.ratio > 0.6 && r.ratio < 0.8, "{r:?}");
}

#[test]
fn conjugate_family_stays_thomsen() {
    use minlab_core::checks::{affine_minimal_surface, planar_curvature_lines, tol};
    let spec = GridSpec::new(12, 12, Rect::square(0.4));
    for b in Branch::ALL {
        let (lo, hi) = b.range();
        let data = family_data(b, 0.5 * (lo + hi)).unwrap();
        let conj = conjugate(&data);
        let rect = NullRect::centered(0.0, 0.0, 0.3);
        assert!(affine_minimal_surface(&conj, rect, 16).unwrap().iter().all(|o| o.pass()), "{b}");
        let grid = minlab_core::wrep::integrate(&data, &spec).unwrap();
        assert!(planar_curvature_lines(&grid, tol::PLANARITY).unwrap().pass(), "{b}");
    }
}

#[test]
fn cl_conformal_factor_matches_generic_form_up_to_sign() {
    for c3 in [0.2, 0.5, 1.0] {
        let d = family_data(Branch::CL, c3).unwrap();
        for (x, y) in probe_points(0.8) {
            let z = ParaComplex::new(x, y);
            let Ok(h) = d.h(z) else { continue };
            let generic = (1.0 + h.sq_norm()) * d.eta(z).unwrap().sq_norm().abs().sqrt();
            let rho = d.rho(x, y).unwrap();
            assert!((rho.abs() - generic.abs()).abs() < 1e-10 * (1.0 + generic.abs()), "ĉ₃ = {c3} at ({x}, {y})");
        }
    }
}
