//! Numerical verification: Gauss equation, planar curvature lines, Hopf
//! normalization, Gaussian curvature, flat points, lightlike curvature and
//! the affine-minimal equation.

use std::fmt;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::catalog::{weierstrass_data, AlignedSolution, ConformalCase, RhoJet, SurfaceClass};
use crate::error::{Error, Result};
use crate::fd;
use crate::nullgeom::{curvature_profile, decompose, AngleFunction, NullCurve, NullRect};
use crate::paracomplex::ParaComplex;
use crate::wrep::{self, conjugate, flat_point, linspace, FlatPoint, GridSpec, Rect, SurfaceGrid, WeierstrassData};

/// Samples with `|ρ| < SINGULAR_BAND·max|ρ|` are excluded from pointwise checks.
pub const SINGULAR_BAND: f64 = 1e-3;

/// Default tolerances.
pub mod tol {
    pub const HOPF: f64 = 1e-8;
    pub const GAUSS: f64 = 1e-6;
    pub const PLANARITY: f64 = 1e-4;
    pub const PLANARITY_FAIL: f64 = 1e-2;
    pub const KAPPA_SPREAD: f64 = 1e-4;
    pub const KAPPA_VALUE: f64 = 1e-3;
    pub const AFFINE: f64 = 1e-5;
}

/// Step for finite-difference derivatives of `ρ`.
const RHO_STEP: f64 = 1e-3;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub test: String,
    pub max_residual: f64,
    pub tol: f64,
    pub pass: bool,
    pub n: usize,
    pub n_excluded: usize,
}

impl VerificationReport {
    /// Builds a report from per-sample residuals (`None` marks an excluded
    /// sample). A non-finite residual fails the report.
    pub fn from_residuals(test: impl Into<String>, residuals: &[Option<f64>], tol: f64) -> Self {
        let mut max = 0.0f64;
        let mut n = 0;
        let mut finite = true;
        for r in residuals.iter().flatten() {
            n += 1;
            if r.is_finite() {
                max = max.max(r.abs());
            } else {
                finite = false;
                max = f64::INFINITY;
            }
        }
        VerificationReport {
            test: test.into(),
            max_residual: max,
            tol,
            pass: finite && n > 0 && max < tol,
            n,
            n_excluded: residuals.len() - n,
        }
    }

    pub fn to_json_line(&self) -> String {
        serde_json::to_string(self).unwrap_or_default()
    }
}

impl fmt::Display for VerificationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} {}: max {:.3e} (tol {:.1e}, n = {}, excluded {})",
            if self.pass { "PASS" } else { "FAIL" },
            self.test,
            self.max_residual,
            self.tol,
            self.n,
            self.n_excluded
        )
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PlanarityReport {
    /// `max(|det(F_x, F_xx, F_xxx)|, |det(F_y, F_yy, F_yyy)|)`.
    pub determinants: VerificationReport,
    pub rho_xy: VerificationReport,
}

impl PlanarityReport {
    pub fn pass(&self) -> bool {
        self.determinants.pass
    }
}

/// Determinant test for planar curvature lines on a grid with jets.
pub fn planar_curvature_lines(grid: &SurfaceGrid, tol: f64) -> Result<PlanarityReport> {
    let jets = grid
        .jets
        .as_ref()
        .ok_or_else(|| Error::NotApplicable("grid sampled without jets".into()))?;
    let mask = grid.singular_mask(SINGULAR_BAND);
    let dets: Vec<Option<f64>> = jets
        .iter()
        .zip(&mask)
        .map(|(j, &skip)| (!skip).then(|| j.det_x().abs().max(j.det_y().abs())))
        .collect();
    let source = &grid.source;
    let rho_xy: Vec<Option<f64>> = (0..grid.len())
        .into_par_iter()
        .map(|k| {
            if mask[k] {
                return Ok(None);
            }
            let (x, y) = grid.coords(k);
            let v = fd::derivative(
                |s| fd::derivative(|t| source.rho(s, t), y, RHO_STEP, 1),
                x,
                RHO_STEP,
                1,
            )?;
            Ok(Some(v))
        })
        .collect::<Result<_>>()?;
    Ok(PlanarityReport {
        determinants: VerificationReport::from_residuals(
            format!("planar_curvature_lines[{}]", source.label()),
            &dets,
            tol,
        ),
        rho_xy: VerificationReport::from_residuals(format!("rho_xy[{}]", source.label()), &rho_xy, tol),
    })
}

/// Residual of `ρ(ρₓₓ - ρ_yy) - (ρₓ² - ρ_y²) - 4|q|²`.
pub fn gauss_residual(j: &RhoJet, q_sq: f64) -> f64 {
    j.rho * (j.rxx - j.ryy) - (j.rx * j.rx - j.ry * j.ry) - 4.0 * q_sq
}

fn gauss_points(grid: &SurfaceGrid) -> Vec<(f64, f64, bool)> {
    let mask = grid.singular_mask(SINGULAR_BAND);
    (0..grid.len())
        .map(|k| {
            let (x, y) = grid.coords(k);
            (x, y, mask[k])
        })
        .collect()
}

/// Gauss equation with the analytic jet of an aligned conformal solution,
/// sampled at the grid points.
pub fn gauss_equation(sol: &AlignedSolution, grid: &SurfaceGrid, tol: f64) -> VerificationReport {
    let res: Vec<Option<f64>> = gauss_points(grid)
        .into_iter()
        .map(|(x, y, skip)| {
            let s = &sol.solution;
            if s.case != ConformalCase::Case2 {
                let den = s.f(x + sol.x_shift).d1 - s.g(y + sol.y_shift).d1;
                if den.abs() < 1e-8 {
                    return None;
                }
            }
            (!skip).then(|| sol.rho_jet(x, y).gauss_residual())
        })
        .collect();
    VerificationReport::from_residuals(format!("gauss_equation[{:?}]", sol.solution.case), &res, tol)
}

/// `ρ` jet of any smooth function by finite differences.
pub fn rho_jet_fd(rho: &(dyn Fn(f64, f64) -> Result<f64> + Sync), x: f64, y: f64) -> Result<RhoJet> {
    let r = rho(x, y)?;
    let [rx, rxx, _] = fd::derivatives3(|t| rho(t, y), x, RHO_STEP)?;
    let [ry, ryy, _] = fd::derivatives3(|t| rho(x, t), y, RHO_STEP)?;
    let rxy = fd::derivative(|s| fd::derivative(|t| rho(s, t), y, RHO_STEP, 1), x, RHO_STEP, 1)?;
    Ok(RhoJet { rho: r, rx, ry, rxx, rxy, ryy })
}

/// Gauss equation for an arbitrary conformal factor (derivatives by finite
/// differences) with Hopf differential of constant squared norm `q_sq`.
pub fn gauss_equation_fd(
    label: &str,
    rho: &(dyn Fn(f64, f64) -> Result<f64> + Sync),
    grid: &SurfaceGrid,
    q_sq: f64,
    tol: f64,
) -> Result<VerificationReport> {
    let res: Vec<Option<f64>> = gauss_points(grid)
        .into_par_iter()
        .map(|(x, y, skip)| {
            if skip {
                return Ok(None);
            }
            Ok(Some(gauss_residual(&rho_jet_fd(rho, x, y)?, q_sq)))
        })
        .collect::<Result<_>>()?;
    Ok(VerificationReport::from_residuals(format!("gauss_equation_fd[{label}]"), &res, tol))
}

/// `max |q + 1/2|` with `q = -h_z η` over `points`.
pub fn hopf_normalization(data: &WeierstrassData, points: &[(f64, f64)], tol: f64) -> Result<VerificationReport> {
    let res: Vec<Option<f64>> = points
        .iter()
        .map(|&(x, y)| {
            let q = data.hopf(ParaComplex::new(x, y))?;
            Ok(Some((q.re + 0.5).abs().max(q.im.abs())))
        })
        .collect::<Result<_>>()?;
    let kind = if data.has_analytic_h_z() { "analytic" } else { "fd" };
    Ok(VerificationReport::from_residuals(format!("hopf_normalization[{}, {kind}]", data.label), &res, tol))
}

/// `K = det II / det I` per sample; `None` on the singular band.
pub fn gaussian_curvature(grid: &SurfaceGrid) -> Result<Vec<Option<f64>>> {
    let jets = grid
        .jets
        .as_ref()
        .ok_or_else(|| Error::NotApplicable("grid sampled without jets".into()))?;
    let mask = grid.singular_mask(SINGULAR_BAND);
    (0..grid.len())
        .into_par_iter()
        .map(|k| {
            if mask[k] {
                return Ok(None);
            }
            let (x, y) = grid.coords(k);
            let j = &jets[k];
            let n = grid.source.normal(x, y)?;
            let (e, f, g) = (j.f_x.norm_sq(), j.f_x.inner(j.f_y), j.f_y.norm_sq());
            let (l, m, nn) = (j.f_xx.inner(n), j.f_xy.inner(n), j.f_yy.inner(n));
            Ok(Some((l * nn - m * m) / (e * g - f * f)))
        })
        .collect()
}

/// Flat-point kind of `q = -h_z η` at each point.
pub fn flat_points(data: &WeierstrassData, points: &[(f64, f64)], tol: f64) -> Result<Vec<FlatPoint>> {
    points
        .iter()
        .map(|&(x, y)| Ok(flat_point(data.hopf(ParaComplex::new(x, y))?, tol)))
        .collect()
}

/// A null rectangle centred in `domain`, as large as fits.
pub fn default_null_rect(domain: &Rect) -> NullRect {
    let (cx, cy) = (0.5 * (domain.x0 + domain.x1), 0.5 * (domain.y0 + domain.y1));
    let half = 0.5 * (domain.x1 - domain.x0).min(domain.y1 - domain.y0);
    NullRect::centered(cx, cy, 0.9 * half)
}

/// Spread and deviation from `expected` of the lightlike curvature of both
/// generating curves.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KappaReport {
    pub kappa_alpha: f64,
    pub kappa_beta: f64,
    pub spread: VerificationReport,
    pub value: Option<VerificationReport>,
}

impl KappaReport {
    pub fn pass(&self) -> bool {
        self.spread.pass && self.value.as_ref().is_none_or(|v| v.pass)
    }
}

pub fn kappa_constancy(
    data: &WeierstrassData,
    rect: NullRect,
    expected: Option<f64>,
    samples: usize,
) -> Result<KappaReport> {
    let (alpha, beta) = decompose(data, rect)?;
    let ka = curvature_profile(&alpha, samples)?;
    let kb = curvature_profile(&beta, samples)?;
    let spread = |ks: &[f64]| {
        let (lo, hi) = ks.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(l, h), k| (l.min(*k), h.max(*k)));
        hi - lo
    };
    let mean = |ks: &[f64]| ks.iter().sum::<f64>() / ks.len() as f64;
    let (ma, mb) = (mean(&ka), mean(&kb));
    let spread_report = VerificationReport::from_residuals(
        format!("kappa_spread[{}]", data.label),
        &[Some(spread(&ka)), Some(spread(&kb)), Some(ma - mb)],
        tol::KAPPA_SPREAD,
    );
    let value = expected.map(|k| {
        let res: Vec<Option<f64>> = ka.iter().chain(&kb).map(|v| Some(v - k)).collect();
        VerificationReport::from_residuals(format!("kappa_value[{}]", data.label), &res, tol::KAPPA_VALUE)
    });
    Ok(KappaReport { kappa_alpha: ma, kappa_beta: mb, spread: spread_report, value })
}

fn affine_terms(theta: &AngleFunction, u: f64) -> Result<(f64, f64)> {
    let [w, w1, w2] = theta.omega_jet(u)?;
    if !(w > 0.0) {
        return Err(Error::Degenerate(format!("θ′ = {w:e} at {u}")));
    }
    Ok((2.0 * w.powi(4) + 2.0 * w * w2 - 3.5 * w1 * w1, w.powi(3)))
}

/// Least-squares `k` in `2ω⁴ + 2ωω″ - (7/2)ω′² = kω³`.
pub fn fit_k(theta: &AngleFunction, samples: usize) -> Result<f64> {
    let terms: Vec<(f64, f64)> = linspace(theta.interval.0, theta.interval.1, samples)
        .into_par_iter()
        .map(|u| affine_terms(theta, u))
        .collect::<Result<_>>()?;
    let (num, den) = terms.iter().fold((0.0, 0.0), |(n, d), (a, w3)| (n + a * w3, d + w3 * w3));
    Ok(num / den)
}

/// Residual of `2ω⁴ + 2ωω″ - (7/2)ω′² - kω³`.
pub fn affine_minimal_residual(
    theta: &AngleFunction,
    k: f64,
    samples: usize,
    tol: f64,
) -> Result<VerificationReport> {
    let res: Vec<Option<f64>> = linspace(theta.interval.0, theta.interval.1, samples)
        .into_par_iter()
        .map(|u| {
            let (a, w3) = affine_terms(theta, u)?;
            Ok(Some(a - k * w3))
        })
        .collect::<Result<_>>()?;
    Ok(VerificationReport::from_residuals(format!("affine_minimal[{}, k = {k:.6}]", theta.label), &res, tol))
}

/// Outcome of the affine-minimal test on one generating curve.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum AffineOutcome {
    /// Fitted `k` and the residual report.
    Fitted { k: f64, report: VerificationReport },
    /// The curve is a straight line (`θ′ ≡ 0`), for which the equation
    /// holds for every `k`.
    Straight,
}

impl AffineOutcome {
    pub fn pass(&self) -> bool {
        match self {
            AffineOutcome::Fitted { report, .. } => report.pass,
            AffineOutcome::Straight => true,
        }
    }
}

/// Fits `k` and tests the affine-minimal equation on a generating curve.
pub fn affine_minimal_curve(curve: &NullCurve, samples: usize, tol: f64) -> Result<AffineOutcome> {
    const STRAIGHT: f64 = 1e-10;
    let theta = AngleFunction::from_curve(curve);
    let omegas: Vec<f64> = linspace(curve.interval.0, curve.interval.1, samples)
        .iter()
        .map(|&u| theta.omega_jet(u).map(|j| j[0]))
        .collect::<Result<_>>()?;
    if omegas.iter().all(|w| w.abs() < STRAIGHT) {
        return Ok(AffineOutcome::Straight);
    }
    let k = fit_k(&theta, samples)?;
    let report = affine_minimal_residual(&theta, k, samples, tol)?;
    Ok(AffineOutcome::Fitted { k, report })
}

/// Both generating curves of `data` satisfy the affine-minimal equation.
pub fn affine_minimal_surface(data: &WeierstrassData, rect: NullRect, samples: usize) -> Result<[AffineOutcome; 2]> {
    let (a, b) = decompose(data, rect)?;
    Ok([affine_minimal_curve(&a, samples, tol::AFFINE)?, affine_minimal_curve(&b, samples, tol::AFFINE)?])
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Membership {
    /// Planar curvature lines.
    InB,
    /// The conjugate has planar curvature lines.
    InBStar,
    /// Both (timelike planes).
    Both,
    Neither,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ThomsenReport {
    pub class: String,
    pub planar_surface: PlanarityReport,
    pub planar_conjugate: PlanarityReport,
    pub affine_surface: [AffineOutcome; 2],
    pub affine_conjugate: [AffineOutcome; 2],
    pub membership: Membership,
}

impl ThomsenReport {
    /// Both the surface and its conjugate are affine minimal.
    pub fn thomsen(&self) -> bool {
        self.affine_surface.iter().chain(&self.affine_conjugate).all(AffineOutcome::pass)
    }
}

/// Planarity and affine-minimal tests on a catalog surface and its conjugate.
pub fn thomsen_membership(cls: &SurfaceClass, n: usize) -> Result<ThomsenReport> {
    let data = weierstrass_data(cls)?;
    let conj = conjugate(&data);
    let spec = GridSpec::new(n, n, data.domain);
    let planar = |d: &WeierstrassData| -> Result<PlanarityReport> {
        planar_curvature_lines(&wrep::integrate(d, &spec)?, tol::PLANARITY)
    };
    let planar_surface = planar(&data)?;
    let planar_conjugate = planar(&conj)?;
    let rect = default_null_rect(&data.domain);
    let affine_surface = affine_minimal_surface(&data, rect, 41)?;
    let affine_conjugate = affine_minimal_surface(&conj, rect, 41)?;
    let membership = match (planar_surface.pass(), planar_conjugate.pass()) {
        (true, true) => Membership::Both,
        (true, false) => Membership::InB,
        (false, true) => Membership::InBStar,
        (false, false) => Membership::Neither,
    };
    Ok(ThomsenReport {
        class: cls.to_string(),
        planar_surface,
        planar_conjugate,
        affine_surface,
        affine_conjugate,
        membership,
    })
}

/// Evenly spaced points in a rectangle.
pub fn grid_points(domain: &Rect, n: usize) -> Vec<(f64, f64)> {
    let xs = linspace(domain.x0, domain.x1, n);
    let ys = linspace(domain.y0, domain.y1, n);
    ys.iter().flat_map(|&y| xs.iter().map(move |&x| (x, y))).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn report_logic() {
        let r = VerificationReport::from_residuals("t", &[Some(1e-7), None, Some(-2e-7)], 1e-6);
        assert!(r.pass);
        assert_eq!((r.n, r.n_excluded), (2, 1));
        assert_eq!(r.max_residual, 2e-7);
        let r = VerificationReport::from_residuals("t", &[Some(f64::NAN)], 1e-6);
        assert!(!r.pass);
        let r = VerificationReport::from_residuals("t", &[None], 1e-6);
        assert!(!r.pass);
    }

    #[test]
    fn json_line_fields() {
        let r = VerificationReport::from_residuals("t", &[Some(0.5)], 1.0);
        let v: serde_json::Value = serde_json::from_str(&r.to_json_line()).unwrap();
        for key in ["test", "max_residual", "tol", "pass", "n", "n_excluded"] {
            assert!(v.get(key).is_some(), "{key}");
        }
    }
}
