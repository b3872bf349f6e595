//! Singular sets `{|h|² = -1} = {ρ = 0}` and their classification into
//! cuspidal edges and swallowtails.

use std::f64::consts::{FRAC_PI_2, PI};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::catalog::SurfaceClass;
use crate::contour::{marching_squares, newton_project};
use crate::error::{Error, Result};
use crate::fd;
use crate::minkowski::Vec21;
use crate::paracomplex::{ParaComplex, ParaError};
use crate::wrep::{Rect, WeierstrassData, JET_STEP};

/// Width of the `Im ψ = 0` band.
pub const EPS_SW: f64 = 1e-6;

/// Newton stopping tolerance on `|h|² + 1`.
pub const REFINE_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SingularKind {
    CuspidalEdge,
    Swallowtail,
    Unresolved,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SingularPointClass {
    pub x: f64,
    pub y: f64,
    pub kind: SingularKind,
    pub psi: ParaComplex,
    pub psi_cap_re: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SingularCurve {
    pub points: Vec<(f64, f64)>,
    pub closed: bool,
    pub swallowtails: Vec<(f64, f64)>,
}

fn undefined(x: f64, y: f64) -> impl Fn(ParaError) -> Error {
    move |_| Error::CriterionUndefined { x, y }
}

/// `ψ = h_z/(h²η)`.
pub fn psi(data: &WeierstrassData, x: f64, y: f64) -> Result<ParaComplex> {
    let z = ParaComplex::new(x, y);
    let num = data.h_z(z).map_err(|_| Error::CriterionUndefined { x, y })?;
    let den = data.h2_eta(z).map_err(|_| Error::CriterionUndefined { x, y })?;
    num.checked_div(den).map_err(undefined(x, y))
}

/// `ψ` and `Re Ψ` with `Ψ = (h/h_z)ψ_z`.
pub fn criteria(data: &WeierstrassData, x: f64, y: f64) -> Result<(ParaComplex, f64)> {
    let z = ParaComplex::new(x, y);
    let p = psi(data, x, y)?;
    let psi_z = fd::derivative(|t| psi(data, t, y), x, JET_STEP, 1)?;
    let h = data.h(z).map_err(|_| Error::CriterionUndefined { x, y })?;
    let hz = data.h_z(z).map_err(|_| Error::CriterionUndefined { x, y })?;
    let big = h.checked_div(hz).map_err(undefined(x, y))? * psi_z;
    Ok((p, big.re))
}

/// Classifies a point of the singular set.
pub fn classify(data: &WeierstrassData, x: f64, y: f64) -> Result<SingularPointClass> {
    let (p, big_re) = criteria(data, x, y)?;
    let im = p.im.abs();
    let kind = if im < EPS_SW {
        if p.re.abs() > EPS_SW && big_re.abs() > EPS_SW {
            SingularKind::Swallowtail
        } else {
            SingularKind::Unresolved
        }
    } else if im < 10.0 * EPS_SW || p.re.abs() <= EPS_SW {
        SingularKind::Unresolved
    } else {
        SingularKind::CuspidalEdge
    };
    Ok(SingularPointClass { x, y, kind, psi: p, psi_cap_re: big_re })
}

/// `|h|² + 1`, whose zero set is the singular set.
pub fn singular_function(data: &WeierstrassData, x: f64, y: f64) -> f64 {
    data.h(ParaComplex::new(x, y)).map(|h| h.sq_norm() + 1.0).unwrap_or(f64::NAN)
}

/// Zero set of `|h|² + 1` on `domain`. The contour is traced on the signed
/// conformal factor `ρ` from an `n × n` grid, since `|h|² + 1` changes sign
/// through the poles of `h`, then each vertex is Newton-projected onto
/// `|h|² + 1 = 0`. Points where the projection fails are dropped.
pub fn singular_set(data: &WeierstrassData, domain: Rect, n: usize) -> Vec<SingularCurve> {
    let rho = |x: f64, y: f64| data.rho(x, y).unwrap_or(f64::NAN);
    let g = |x: f64, y: f64| singular_function(data, x, y);
    let slack = 1e-9 * (domain.x1 - domain.x0).max(domain.y1 - domain.y0);
    let inside = |&(x, y): &(f64, f64)| {
        x >= domain.x0 - slack && x <= domain.x1 + slack && y >= domain.y0 - slack && y <= domain.y1 + slack
    };
    marching_squares(rho, domain, n, n)
        .into_iter()
        .map(|line| {
            let points: Vec<(f64, f64)> =
                line.points.par_iter().filter_map(|p| newton_project(&g, *p, REFINE_TOL)).filter(inside).collect();
            SingularCurve { points, closed: line.closed, swallowtails: Vec::new() }
        })
        .filter(|c| !c.points.is_empty())
        .collect()
}

/// Solves `|h|² + 1 = 0`, `Im ψ = 0` by Newton's method from `p`.
fn solve_swallowtail(data: &WeierstrassData, p: (f64, f64)) -> Option<(f64, f64)> {
    const H: f64 = 1e-6;
    let g = |x: f64, y: f64| -> Option<(f64, f64)> {
        let a = singular_function(data, x, y);
        a.is_finite().then_some(())?;
        Some((a, psi(data, x, y).ok()?.im))
    };
    let (mut x, mut y) = p;
    for _ in 0..40 {
        let (a, b) = g(x, y)?;
        let (ax1, bx1) = g(x + H, y)?;
        let (ax0, bx0) = g(x - H, y)?;
        let (ay1, by1) = g(x, y + H)?;
        let (ay0, by0) = g(x, y - H)?;
        let (ax, bx) = ((ax1 - ax0) / (2.0 * H), (bx1 - bx0) / (2.0 * H));
        let (ay, by) = ((ay1 - ay0) / (2.0 * H), (by1 - by0) / (2.0 * H));
        let det = ax * by - ay * bx;
        if !(det.abs() > 0.0) || !det.is_finite() {
            return None;
        }
        let dx = (a * by - ay * b) / det;
        let dy = (ax * b - a * bx) / det;
        x -= dx;
        y -= dy;
        if dx.abs().max(dy.abs()) < 1e-14 * (1.0 + x.abs() + y.abs()) {
            break;
        }
    }
    let (a, b) = g(x, y)?;
    (a.abs() < REFINE_TOL && b.abs() < 1e-9).then_some((x, y))
}

/// Swallowtails on the singular curves: sign changes of `Im ψ` along each
/// curve, refined to `|h|² + 1 = Im ψ = 0` and confirmed by `classify`.
pub fn find_swallowtails(data: &WeierstrassData, curves: &mut [SingularCurve], domain: Rect) -> Vec<SingularPointClass> {
    let mut found: Vec<SingularPointClass> = Vec::new();
    for curve in curves.iter_mut() {
        let ims: Vec<Option<f64>> =
            curve.points.par_iter().map(|&(x, y)| psi(data, x, y).ok().map(|p| p.im)).collect();
        let n = curve.points.len();
        let pairs = if curve.closed { n } else { n.saturating_sub(1) };
        let candidates: Vec<(f64, f64)> = (0..pairs)
            .filter_map(|k| {
                let k1 = (k + 1) % n;
                let (a, b) = (ims[k]?, ims[k1]?);
                if a == 0.0 || a.signum() != b.signum() {
                    let (p, q) = (curve.points[k], curve.points[k1]);
                    let t = if a == b { 0.5 } else { a / (a - b) };
                    Some((p.0 + t * (q.0 - p.0), p.1 + t * (q.1 - p.1)))
                } else {
                    None
                }
            })
            .collect();
        for c in candidates {
            let Some((x, y)) = solve_swallowtail(data, c) else { continue };
            if !domain.contains(x, y) {
                continue;
            }
            let Ok(cls) = classify(data, x, y) else { continue };
            if cls.kind != SingularKind::Swallowtail {
                continue;
            }
            if found.iter().any(|f| (f.x - x).abs() < 1e-7 && (f.y - y).abs() < 1e-7) {
                continue;
            }
            curve.swallowtails.push((x, y));
            found.push(cls);
        }
    }
    let key = |v: f64| (v * 1e9).round() + 0.0;
    found.sort_by(|a, b| key(a.x).total_cmp(&key(b.x)).then(a.y.total_cmp(&b.y)));
    found
}

/// Families with a swallowtail table entry.
pub fn is_table_family(cls: &SurfaceClass) -> bool {
    matches!(
        cls,
        SurfaceClass::BonnetPeriodic { .. }
            | SurfaceClass::BonnetTimelike1 { .. }
            | SurfaceClass::BonnetLightlike1
            | SurfaceClass::BonnetSpacelike { .. }
            | SurfaceClass::BonnetTimelike2 { .. }
            | SurfaceClass::BonnetLightlike2
    )
}

/// Rectangle scanned for singular points of each table family.
pub fn scan_domain(cls: &SurfaceClass) -> Result<Rect> {
    Ok(match cls {
        SurfaceClass::BonnetPeriodic { .. } => Rect::new(-0.6, 2.2, 0.2, 2.95),
        SurfaceClass::BonnetTimelike1 { .. } | SurfaceClass::BonnetSpacelike { .. } => Rect::new(-2.0, 2.0, -1.5, 3.0),
        SurfaceClass::BonnetLightlike1 => Rect::new(-2.0, 2.0, -1.0, 3.0),
        SurfaceClass::BonnetTimelike2 { .. } => Rect::new(-2.0, 2.0, -2.0, 3.0),
        SurfaceClass::BonnetLightlike2 => Rect::new(-3.0, 2.0, -1.0, 3.0),
        _ => return Err(Error::ParamRange(format!("{cls} has no swallowtail table entry"))),
    })
}

/// Swallowtail locations listed for each family, real-valued entries only,
/// inside `domain`.
pub fn table_entries(cls: &SurfaceClass, domain: Rect) -> Result<Vec<(f64, f64)>> {
    let pts = match *cls {
        SurfaceClass::BonnetPeriodic { c1 } => {
            let r = (c1 * c1 + 1.0).sqrt();
            let mut v = Vec::new();
            for y in [(c1 / r).acos(), (-c1 / r).acos()] {
                v.push((0.0, y));
                v.push((PI, y));
            }
            for y in [(1.0 / r).acos(), (-1.0 / r).acos()] {
                v.push((FRAC_PI_2, y));
            }
            v
        }
        SurfaceClass::BonnetTimelike1 { c2 } | SurfaceClass::BonnetSpacelike { c2 } => vec![(0.0, (c2 + 1.0).ln())],
        SurfaceClass::BonnetLightlike1 => vec![(0.0, 2f64.ln())],
        SurfaceClass::BonnetTimelike2 { .. } | SurfaceClass::BonnetLightlike2 => vec![],
        _ => return Err(Error::ParamRange(format!("{cls} has no swallowtail table entry"))),
    };
    let mut pts: Vec<(f64, f64)> = pts.into_iter().filter(|&(x, y)| domain.contains(x, y)).collect();
    pts.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.total_cmp(&b.1)));
    Ok(pts)
}

/// All solutions of the swallowtail conditions in closed form. For the
/// exponential families these are `x = 0`, `e^y = c₂ ± 1`; this includes
/// `(0, log(c₂ - 1))` for `B_T1`.
pub fn closed_form_swallowtails(cls: &SurfaceClass, domain: Rect) -> Result<Vec<(f64, f64)>> {
    let pts = match *cls {
        SurfaceClass::BonnetTimelike1 { c2 } => vec![(0.0, (c2 - 1.0).ln()), (0.0, (c2 + 1.0).ln())],
        _ => table_entries(cls, domain)?,
    };
    let mut pts: Vec<(f64, f64)> = pts.into_iter().filter(|&(x, y)| domain.contains(x, y)).collect();
    pts.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.total_cmp(&b.1)));
    Ok(pts)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SwallowtailScan {
    pub class: String,
    pub domain: Rect,
    pub curves: Vec<SingularCurve>,
    pub swallowtails: Vec<SingularPointClass>,
    /// Kinds of the curve samples farther than `exclusion` from every
    /// swallowtail.
    pub cuspidal: usize,
    pub unresolved: Vec<(f64, f64)>,
    pub stray_swallowtails: Vec<(f64, f64)>,
    pub undefined: usize,
    pub exclusion: f64,
}

/// Scans a table family for singular points and classifies them.
pub fn swallowtail_table(cls: &SurfaceClass, resolution: usize) -> Result<SwallowtailScan> {
    cls.validate()?;
    let domain = scan_domain(cls)?;
    let data = crate::catalog::weierstrass_data(cls)?;
    scan(&data, cls.to_string(), domain, resolution)
}

/// Singular curves, swallowtails and pointwise classification on `domain`.
pub fn scan(data: &WeierstrassData, label: String, domain: Rect, resolution: usize) -> Result<SwallowtailScan> {
    let mut curves = singular_set(data, domain, resolution);
    let swallowtails = find_swallowtails(data, &mut curves, domain);
    let cell = ((domain.x1 - domain.x0) / resolution as f64).max((domain.y1 - domain.y0) / resolution as f64);
    let exclusion = 2.0 * cell;
    let samples: Vec<(f64, f64)> = curves
        .iter()
        .flat_map(|c| c.points.iter().copied())
        .filter(|&(x, y)| swallowtails.iter().all(|s| (s.x - x).hypot(s.y - y) > exclusion))
        .collect();
    let kinds: Vec<Result<SingularPointClass>> = samples.par_iter().map(|&(x, y)| classify(data, x, y)).collect();
    let mut cuspidal = 0;
    let mut unresolved = Vec::new();
    let mut stray = Vec::new();
    let mut undefined = 0;
    for k in kinds {
        match k {
            Ok(c) => match c.kind {
                SingularKind::CuspidalEdge => cuspidal += 1,
                SingularKind::Unresolved => unresolved.push((c.x, c.y)),
                SingularKind::Swallowtail => stray.push((c.x, c.y)),
            },
            Err(Error::CriterionUndefined { .. }) => undefined += 1,
            Err(e) => return Err(e),
        }
    }
    Ok(SwallowtailScan {
        class: label,
        domain,
        curves,
        swallowtails,
        cuspidal,
        unresolved,
        stray_swallowtails: stray,
        undefined,
        exclusion,
    })
}

/// `F` of `B_L2` in closed form, normalized so that `F(0, 0) = (0, -1/2, 0)`.
pub fn bl2_closed_form(x: f64, y: f64) -> Vec21 {
    let (ex, emx) = (x.exp(), (-x).exp());
    Vec21::new(
        x + emx * y.sinh(),
        -y - 0.5 * ex * y.cosh(),
        -x - (emx + 0.5 * ex) * y.sinh(),
    )
}

/// Distance from `F(x, asinh(eˣ(-x-ỹ)))` to the point `(-ỹ, 0, ỹ)` of the
/// lightlike line that the singular set of `B_L2` approaches as `x → -∞`.
pub fn bl2_lightlike_probe(y_tilde: f64, xs: &[f64]) -> Vec<(f64, f64)> {
    let target = Vec21::new(-y_tilde, 0.0, y_tilde);
    xs.iter()
        .map(|&x| {
            let y = (x.exp() * (-x - y_tilde)).asinh();
            (x, (bl2_closed_form(x, y) - target).max_abs())
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::weierstrass_data;

    #[test]
    fn exp_family_psi_closed_form() {
        let c2 = 0.5;
        let d = weierstrass_data(&SurfaceClass::BonnetSpacelike { c2 }).unwrap();
        let z = ParaComplex::new(0.3, 0.2);
        let w = (ParaComplex::J * z).exp();
        let expect = (w * w * 2.0).checked_div((w - c2) * (w - c2)).unwrap();
        let p = psi(&d, z.re, z.im).unwrap();
        assert!((p - expect).re.abs() < 1e-12 && (p - expect).im.abs() < 1e-12);
    }

    #[test]
    fn table_rows() {
        let d = Rect::new(-2.0, 2.0, -1.5, 3.0);
        assert_eq!(table_entries(&SurfaceClass::BonnetLightlike1, d).unwrap(), vec![(0.0, 2f64.ln())]);
        assert!(table_entries(&SurfaceClass::BonnetLightlike2, d).unwrap().is_empty());
        assert!(table_entries(&SurfaceClass::Enneper, d).is_err());
        let t1 = closed_form_swallowtails(&SurfaceClass::BonnetTimelike1 { c2: 2.0 }, d).unwrap();
        assert_eq!(t1, vec![(0.0, 0.0), (0.0, 3f64.ln())]);
    }
}
