//! The five deformation branches joining every timelike minimal surface
//! with planar curvature lines, with their normalizations.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, SQRT_2};
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::analytic::{cosh_s, sinh_remainder, sinh_s};
use crate::error::{Error, Result};
use crate::minkowski::Vec21;
use crate::nullgeom::{CurveFn, NullCurve, Parametrization};
use crate::paracomplex::ParaComplex as P;
use crate::wrep::{entire, integrate, para_fn, GridSpec, Immersion, Jet, SurfaceGrid, WeierstrassData};

const J: P = P::J;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Branch {
    P,
    S2,
    CL,
    S4,
    BL2,
}

impl Branch {
    pub const ALL: [Branch; 5] = [Branch::P, Branch::S2, Branch::CL, Branch::S4, Branch::BL2];

    /// Closed parameter interval.
    pub fn range(self) -> (f64, f64) {
        match self {
            Branch::P => (-FRAC_PI_4, 3.0 * FRAC_PI_4),
            Branch::S2 => (-FRAC_PI_2, FRAC_PI_4),
            Branch::CL => (0.0, 1.0),
            Branch::S4 => (0.0, 2.0),
            Branch::BL2 => (0.0, 1.0),
        }
    }

    pub fn tag(self) -> &'static str {
        match self {
            Branch::P => "P",
            Branch::S2 => "S2",
            Branch::CL => "CL",
            Branch::S4 => "S4",
            Branch::BL2 => "BL2",
        }
    }

    fn check(self, theta: f64) -> Result<()> {
        let (a, b) = self.range();
        if theta.is_finite() && theta >= a && theta <= b {
            Ok(())
        } else {
            Err(Error::ParamRange(format!("{self} branch parameter {theta} outside [{a}, {b}]")))
        }
    }
}

impl fmt::Display for Branch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

impl FromStr for Branch {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Branch::ALL
            .into_iter()
            .find(|b| b.tag().eq_ignore_ascii_case(s.trim()))
            .ok_or_else(|| Error::ParseClass(format!("unknown branch {s:?}")))
    }
}

/// `(e^{a·w} - 1)/a` in the idempotent split, equal to `w` at `a = 0`.
fn expm1_ratio(a: f64, w: P) -> P {
    if a == 0.0 {
        w
    } else {
        w.map_split(|t| (a * t).exp_m1() / a)
    }
}

fn label(branch: Branch, theta: f64) -> String {
    format!("{branch}({theta})")
}

fn p_data(c1: f64) -> Result<WeierstrassData> {
    let lbl = label(Branch::P, c1);
    let (lo, hi) = Branch::P.range();
    if c1 == lo || c1 == hi {
        // The limit plane (0, 3·2^{-3/4}x, -3·2^{-3/4}y).
        let a = 3.0 * 2f64.powf(-0.75);
        return Ok(WeierstrassData::new(lbl, entire(|_| P::ZERO), entire(move |_| P::new(a, 0.0)))
            .with_h_z(entire(|_| P::ZERO)));
    }
    if c1 == FRAC_PI_4 {
        let k = 2f64.powf(-0.25);
        return Ok(WeierstrassData::new(lbl, entire(move |z| z * k), entire(|_| P::new(2f64.powf(-0.75), 0.0)))
            .with_h_z(entire(move |_| P::new(k, 0.0))));
    }
    // With σ = cos 2ĉ₁ and w = 2^{-3/4}z both cases of the data read
    // h = (cos ĉ₁ + sin ĉ₁)·S/C and η = C²/(2^{1/4}(cos ĉ₁ + sin ĉ₁)),
    // where C = cosh(√σ w) and S = sinh(√σ w)/√σ continue through σ = 0.
    let sigma = (2.0 * c1).cos();
    let cs = c1.cos() + c1.sin();
    let k = 2f64.powf(-0.75);
    let q = 2f64.powf(0.25);
    let cc = move |z: P| (z * k).map_split(|t| cosh_s(sigma, t));
    let ss = move |z: P| (z * k).map_split(|t| sinh_s(sigma, t));
    Ok(WeierstrassData::new(lbl, para_fn(move |z| Ok(ss(z).checked_div(cc(z))? * cs)), entire(move |z| {
        let c = cc(z);
        c * c / (q * cs)
    }))
    .with_h_z(para_fn(move |z| {
        let c = cc(z);
        Ok((c * c).recip()? * (cs * k))
    }))
    .with_products(entire(move |z| ss(z) * cc(z) / q), entire(move |z| {
        let s = ss(z);
        s * s * (cs / q)
    })))
}

fn s2_data(c2: f64) -> WeierstrassData {
    let lbl = label(Branch::S2, c2);
    if c2 == FRAC_PI_4 {
        let k = 2f64.powf(-0.25);
        return WeierstrassData::new(lbl, entire(move |z| z * k + J), entire(|_| P::new(2f64.powf(-0.75), 0.0)))
            .with_h_z(entire(move |_| P::new(k, 0.0)));
    }
    let a0 = if c2 == -FRAC_PI_2 { 0.0 } else { c2.cos().max(0.0).sqrt() };
    let a1 = (c2.cos() - c2.sin()).max(0.0).sqrt();
    // h = j((a₀/a₁ + 1)E - a₀/a₁) = j(E + a₀(E - 1)/a₁), E = e^{a₁jz}
    let e = move |z: P| (J * z * a1).exp();
    let h = move |z: P| J * (e(z) + expm1_ratio(a1, J * z) * a0);
    let s = a1 + a0;
    WeierstrassData::new(lbl, entire(h), entire(move |z| (J * z * -a1).exp() / (2.0 * s)))
        .with_h_z(entire(move |z| e(z) * s))
}

fn cl_data(c3: f64) -> WeierstrassData {
    // With E = e^{jĉ₃z} and Q = (E - 1)/ĉ₃:
    // (ĉ₃ + 1)E - 1 = ĉ₃(E + Q) and (ĉ₃ - 1)E + 1 = ĉ₃(E - Q).
    let e = move |z: P| (J * z * c3).exp();
    let q = move |z: P| expm1_ratio(c3, J * z);
    let hh = move |z: P| e(z) + q(z);
    let gg = move |z: P| e(z) - q(z);
    let einv = move |z: P| (J * z * -c3).exp();
    WeierstrassData::new(
        label(Branch::CL, c3),
        para_fn(move |z| Ok(J * hh(z).checked_div(gg(z))?)),
        entire(move |z| {
            let g = gg(z);
            einv(z) * g * g * 0.25
        }),
    )
    .with_h_z(para_fn(move |z| {
        let g = gg(z);
        Ok(e(z).checked_div(g * g)? * 2.0)
    }))
    .with_products(entire(move |z| J * hh(z) * gg(z) * einv(z) * 0.25), entire(move |z| {
        let h = hh(z);
        h * h * einv(z) * 0.25
    }))
    // (1 + |h|²)|η| = sgn(|G|²)e^{-ĉ₃y}(|G|² - |H|²)/4; drop the sign so
    // ρ stays smooth across the null lines of G.
    .with_rho(Arc::new(move |x, y| {
        let z = P::new(x, y);
        0.25 * (-c3 * y).exp() * (gg(z).sq_norm() - hh(z).sq_norm())
    }))
}

fn s4_data(c4: f64) -> WeierstrassData {
    let e = |z: P| (J * z).exp();
    WeierstrassData::new(label(Branch::S4, c4), entire(move |z| J * e(z) + c4), entire(move |z| (-(J * z)).exp() * 0.5))
        .with_h_z(entire(e))
}

fn bl2_data(c5: f64) -> WeierstrassData {
    let b = 2f64.powf(0.25);
    WeierstrassData::new(
        label(Branch::BL2, c5),
        entire(move |z| (z * b).exp() + J * c5),
        entire(move |z| (z * -b).exp() * 2f64.powf(-1.25)),
    )
    .with_h_z(entire(move |z| (z * b).exp() * b))
}

/// Weierstrass data of a branch at parameter `theta`.
pub fn family_data(branch: Branch, theta: f64) -> Result<WeierstrassData> {
    branch.check(theta)?;
    Ok(match branch {
        Branch::P => p_data(theta)?,
        Branch::S2 => s2_data(theta),
        Branch::CL => cl_data(theta),
        Branch::S4 => s4_data(theta),
        Branch::BL2 => bl2_data(theta),
    })
}

/// `R^{ĉ₁} = (1 - sin(ĉ₁ + π/4))|cos 2ĉ₁| + sin(ĉ₁ + π/4)`.
pub fn r_factor(c1: f64) -> f64 {
    let s = (c1 + FRAC_PI_4).sin();
    (1.0 - s) * (2.0 * c1).cos().abs() + s
}

/// Ambient map `p ↦ L(scale·p) + translation` applied after integrating
/// from the origin, where `L` is the identity or the quarter turn
/// `(ξ₁, ξ₂, ξ₀) ↦ (-ξ₂, ξ₁, ξ₀)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Normalization {
    pub scale: f64,
    pub quarter_turn: bool,
    pub translation: Vec21,
}

impl Normalization {
    pub const IDENTITY: Normalization = Normalization { scale: 1.0, quarter_turn: false, translation: Vec21::ZERO };

    pub fn linear(&self, v: Vec21) -> Vec21 {
        let v = v * self.scale;
        if self.quarter_turn {
            Vec21::new(-v.x2, v.x1, v.x0)
        } else {
            v
        }
    }

    pub fn apply(&self, p: Vec21) -> Vec21 {
        self.linear(p) + self.translation
    }
}

fn normalization(branch: Branch, theta: f64) -> Normalization {
    match branch {
        Branch::P => {
            let (lo, hi) = branch.range();
            let scale = if theta == lo || theta == hi { 1.0 } else { r_factor(theta) };
            Normalization { scale, ..Normalization::IDENTITY }
        }
        Branch::S2 | Branch::CL | Branch::S4 => Normalization::IDENTITY,
        Branch::BL2 => {
            // F_nat = F + (0, -(2 - ĉ₅²)/2^{3/2}, 0) is the primitive without
            // integration constant; then F̂ = F_nat·M - (1/√2, 0, 0).
            let lift = (2.0 - theta * theta) / 2f64.powf(1.5);
            Normalization { scale: 1.0, quarter_turn: true, translation: Vec21::new(lift - 1.0 / SQRT_2, 0.0, 0.0) }
        }
    }
}

/// A normalized member `F̂` of a branch.
#[derive(Debug, Clone)]
pub struct FamilyMember {
    pub branch: Branch,
    pub theta: f64,
    pub data: WeierstrassData,
    pub normalization: Normalization,
}

pub fn family_member(branch: Branch, theta: f64) -> Result<FamilyMember> {
    Ok(FamilyMember {
        branch,
        theta,
        data: family_data(branch, theta)?,
        normalization: normalization(branch, theta),
    })
}

impl FamilyMember {
    fn map_jet(&self, j: Jet) -> Jet {
        let l = |v| self.normalization.linear(v);
        Jet {
            f_x: l(j.f_x),
            f_y: l(j.f_y),
            f_xx: l(j.f_xx),
            f_xy: l(j.f_xy),
            f_yy: l(j.f_yy),
            f_xxx: l(j.f_xxx),
            f_xxy: l(j.f_xxy),
            f_xyy: l(j.f_xyy),
            f_yyy: l(j.f_yyy),
        }
    }
}

impl Immersion for FamilyMember {
    fn point(&self, x: f64, y: f64) -> Result<Vec21> {
        Ok(self.normalization.apply(self.data.integrate_point(x, y)?))
    }
    fn jet(&self, x: f64, y: f64) -> Result<Jet> {
        Ok(self.map_jet(self.data.jet(x, y)?))
    }
    fn rho(&self, x: f64, y: f64) -> Result<f64> {
        Ok(self.normalization.scale * self.data.rho(x, y)?)
    }
    fn normal(&self, x: f64, y: f64) -> Result<Vec21> {
        let n = self.data.normal(P::new(x, y))?;
        Ok(self.normalization.linear(n) / self.normalization.scale)
    }
    fn label(&self) -> String {
        self.data.label.clone()
    }
}

/// `F̂(x, y)` for one branch member.
pub fn family_point(branch: Branch, theta: f64, x: f64, y: f64) -> Result<Vec21> {
    family_member(branch, theta)?.point(x, y)
}

/// Samples the normalized member on a grid.
pub fn family_surface(branch: Branch, theta: f64, spec: &GridSpec) -> Result<SurfaceGrid> {
    let member = family_member(branch, theta)?;
    let raw = integrate(&member.data.clone().with_basepoint(0.0, 0.0), spec)?;
    let nm = member.normalization;
    Ok(SurfaceGrid {
        points: raw.points.iter().map(|p| nm.apply(*p)).collect(),
        jets: raw.jets.map(|js| js.into_iter().map(|j| member.map_jet(j)).collect()),
        rho: raw.rho.iter().map(|r| r * nm.scale).collect(),
        source: Arc::new(member),
        ..raw
    })
}

/// Generating null curves `α^{ĉ₁}` and `β^{ĉ₁} = α^{ĉ₁}·diag(1, 1, -1)` of
/// the P-branch, in pseudo-arclength on `s ∈ [-1, 1]`.
pub fn null_curve_family(c1: f64) -> Result<(NullCurve, NullCurve)> {
    if !(c1 > -FRAC_PI_4 && c1 < 3.0 * FRAC_PI_4) {
        return Err(Error::ParamRange(format!("null-curve family needs ĉ₁ in (-π/4, 3π/4), got {c1}")));
    }
    let sigma = (2.0 * c1).cos();
    let (sn, cn) = c1.sin_cos();
    let p = 1.0 / (2.0 * (cn + sn));
    let alpha = move |s: f64| {
        let sh = sinh_s(sigma, s);
        let k = 2.0 * s.powi(3) * sinh_remainder(4.0 * sigma * s * s);
        Vec21::new(sh * sh / 2.0, p * s - sn * k, -p * s - cn * k)
    };
    let alpha_d = move |s: f64| {
        let sh = sinh_s(sigma, s);
        let ch = cosh_s(sigma, s);
        Vec21::new(sh * ch, p - sn * sh * sh, -p - cn * sh * sh)
    };
    let flip = |v: Vec21| Vec21::new(v.x1, v.x2, -v.x0);
    let curve = |name: &str, pos: CurveFn, tan: CurveFn| {
        NullCurve::new(format!("{name}^{c1}"), pos, tan, (-1.0, 1.0))
            .with_parametrization(Parametrization::PseudoArclength)
            .with_closed_form(format!("{name}_P({c1})"))
    };
    Ok((
        curve("alpha", Arc::new(move |s| Ok(alpha(s))), Arc::new(move |s| Ok(alpha_d(s)))),
        curve("beta", Arc::new(move |s| Ok(flip(alpha(s)))), Arc::new(move |s| Ok(flip(alpha_d(s))))),
    ))
}

/// Largest jump `‖F̂(θᵢ₊₁) - F̂(θᵢ)‖` over consecutive parameters and probes.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ContinuityScan {
    pub branch: Branch,
    pub steps: usize,
    pub max_jump: f64,
    pub at_theta: f64,
}

pub fn continuity_scan(branch: Branch, thetas: &[f64], probes: &[(f64, f64)]) -> Result<ContinuityScan> {
    for &t in thetas {
        branch.check(t)?;
    }
    let frames: Vec<Vec<Vec21>> = thetas
        .par_iter()
        .map(|&t| {
            let m = family_member(branch, t)?;
            probes.iter().map(|&(x, y)| m.point(x, y)).collect::<Result<Vec<_>>>()
        })
        .collect::<Result<_>>()?;
    let mut best = (0.0f64, thetas.first().copied().unwrap_or(f64::NAN));
    for (k, w) in frames.windows(2).enumerate() {
        let jump = w[0].iter().zip(&w[1]).map(|(a, b)| (*b - *a).euclid_norm()).fold(0.0, f64::max);
        if jump > best.0 {
            best = (jump, thetas[k]);
        }
    }
    Ok(ContinuityScan { branch, steps: thetas.len().saturating_sub(1), max_jump: best.0, at_theta: best.1 })
}

/// Uniform parameter grid with `steps` intervals across the branch range.
pub fn uniform_thetas(branch: Branch, steps: usize) -> Vec<f64> {
    let (a, b) = branch.range();
    let mut v = crate::wrep::linspace(a, b, steps + 1);
    // pin the endpoints so the stored special values are hit exactly
    if let Some(last) = v.last_mut() {
        *last = b;
    }
    v
}

/// `5 × 5` probe points on `[-r, r]²`.
pub fn probe_points(r: f64) -> Vec<(f64, f64)> {
    let xs = crate::wrep::linspace(-r, r, 5);
    xs.iter().flat_map(|&y| xs.iter().map(move |&x| (x, y))).collect()
}

/// Jumps at `steps` and `2·steps` and their ratio.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Refinement {
    pub coarse: ContinuityScan,
    pub fine: ContinuityScan,
    pub ratio: f64,
}

pub fn refinement_study(branch: Branch, steps: usize, probes: &[(f64, f64)]) -> Result<Refinement> {
    let coarse = continuity_scan(branch, &uniform_thetas(branch, steps), probes)?;
    let fine = continuity_scan(branch, &uniform_thetas(branch, 2 * steps), probes)?;
    Ok(Refinement { coarse, fine, ratio: fine.max_jump / coarse.max_jump })
}

/// Alignment of the BL2 member `ĉ₅ ∈ (0, 1)` with `B_S(c₂)`:
/// `ρ_BL2(x, y) = scale·ρ_{B_S}(2^{1/4}x + x_shift, 2^{1/4}y + y_shift)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Bl2Alignment {
    pub c2: f64,
    pub scale: f64,
    pub x_shift: f64,
    pub y_shift: f64,
}

pub fn bl2_alignment(c5: f64) -> Result<Bl2Alignment> {
    if !(c5 > 0.0 && c5 < 1.0) {
        return Err(Error::ParamRange(format!("BL2 alignment needs ĉ₅ in (0, 1), got {c5}")));
    }
    let c2 = (1.0 - c5 * c5).sqrt();
    Ok(Bl2Alignment { c2, scale: 2f64.powf(-0.25), x_shift: -c2.ln(), y_shift: c5.ln() })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn branch_parse_roundtrip() {
        for b in Branch::ALL {
            assert_eq!(b.tag().parse::<Branch>().unwrap(), b);
        }
        assert!("Q".parse::<Branch>().is_err());
    }

    #[test]
    fn r_factor_values() {
        assert!((r_factor(FRAC_PI_4) - 1.0).abs() < 1e-15);
        assert!(r_factor(-FRAC_PI_4).abs() < 1e-15);
        assert!((r_factor(0.0) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn out_of_range() {
        assert!(family_data(Branch::CL, 1.5).is_err());
        assert!(family_data(Branch::P, f64::NAN).is_err());
        assert!(null_curve_family(-FRAC_PI_4).is_err());
    }

    #[test]
    fn expm1_ratio_limit() {
        let w = P::new(0.3, -0.2);
        let d = expm1_ratio(1e-9, w) - w;
        assert!(d.re.abs() < 1e-9 && d.im.abs() < 1e-9);
    }
}
