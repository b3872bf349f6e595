//! Closed forms for every timelike minimal surface with planar curvature
//! lines: the conformal-factor solutions and the Weierstrass data.

use std::f64::consts::SQRT_2;
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::analytic::{cosh_s, sinh_s};
use crate::error::{Error, Result};
use crate::fd;
use crate::minkowski::Vec21;
use crate::paracomplex::ParaComplex;
use crate::wrep::{entire, para_fn, Rect, SurfaceGrid, WeierstrassData, JET_STEP};

type P = ParaComplex;

const J: P = ParaComplex::J;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "tag")]
pub enum SurfaceClass {
    #[serde(rename = "P")]
    Plane,
    #[serde(rename = "C_T")]
    CatenoidTimelike,
    #[serde(rename = "B_Tper")]
    BonnetPeriodic { c1: f64 },
    #[serde(rename = "E")]
    Enneper,
    #[serde(rename = "B_T1")]
    BonnetTimelike1 { c2: f64 },
    #[serde(rename = "C_S1")]
    CatenoidSpacelike1,
    #[serde(rename = "B_L1")]
    BonnetLightlike1,
    #[serde(rename = "B_S")]
    BonnetSpacelike { c2: f64 },
    #[serde(rename = "C_S2")]
    CatenoidSpacelike2,
    #[serde(rename = "B_L2")]
    BonnetLightlike2,
    #[serde(rename = "B_T2")]
    BonnetTimelike2 { c4: f64 },
    #[serde(rename = "C_L")]
    CatenoidLightlike,
    #[serde(rename = "C_L_assoc")]
    CatenoidLightlikeAssoc { phi: f64 },
}

use SurfaceClass as S;

impl SurfaceClass {
    pub fn tag(&self) -> &'static str {
        match self {
            S::Plane => "P",
            S::CatenoidTimelike => "C_T",
            S::BonnetPeriodic { .. } => "B_Tper",
            S::Enneper => "E",
            S::BonnetTimelike1 { .. } => "B_T1",
            S::CatenoidSpacelike1 => "C_S1",
            S::BonnetLightlike1 => "B_L1",
            S::BonnetSpacelike { .. } => "B_S",
            S::CatenoidSpacelike2 => "C_S2",
            S::BonnetLightlike2 => "B_L2",
            S::BonnetTimelike2 { .. } => "B_T2",
            S::CatenoidLightlike => "C_L",
            S::CatenoidLightlikeAssoc { .. } => "C_L_assoc",
        }
    }

    pub fn params(&self) -> Vec<(&'static str, f64)> {
        match *self {
            S::BonnetPeriodic { c1 } => vec![("c1", c1)],
            S::BonnetTimelike1 { c2 } | S::BonnetSpacelike { c2 } => vec![("c2", c2)],
            S::BonnetTimelike2 { c4 } => vec![("c4", c4)],
            S::CatenoidLightlikeAssoc { phi } => vec![("phi", phi)],
            _ => vec![],
        }
    }

    /// Builds a class from its tag and named parameters.
    pub fn from_parts(tag: &str, params: &[(String, f64)]) -> Result<Self> {
        let get = |key: &str, default: Option<f64>| -> Result<f64> {
            params
                .iter()
                .find(|(k, _)| k == key)
                .map(|(_, v)| *v)
                .or(default)
                .ok_or_else(|| Error::ParseClass(format!("{tag} requires parameter `{key}`")))
        };
        let allowed: &[&str] = match tag {
            "B_Tper" => &["c1"],
            "B_T1" | "B_S" => &["c2"],
            "B_T2" => &["c4"],
            "C_L_assoc" => &["phi"],
            _ => &[],
        };
        if let Some((k, _)) = params.iter().find(|(k, _)| !allowed.contains(&k.as_str())) {
            return Err(Error::ParseClass(format!("unknown parameter `{k}` for {tag}")));
        }
        let cls = match tag {
            "P" => S::Plane,
            "C_T" => S::CatenoidTimelike,
            "B_Tper" => S::BonnetPeriodic { c1: get("c1", Some(2.0))? },
            "E" => S::Enneper,
            "B_T1" => S::BonnetTimelike1 { c2: get("c2", Some(2.0))? },
            "C_S1" => S::CatenoidSpacelike1,
            "B_L1" => S::BonnetLightlike1,
            "B_S" => S::BonnetSpacelike { c2: get("c2", Some(0.5))? },
            "C_S2" => S::CatenoidSpacelike2,
            "B_L2" => S::BonnetLightlike2,
            "B_T2" => S::BonnetTimelike2 { c4: get("c4", Some(1.0))? },
            "C_L" => S::CatenoidLightlike,
            "C_L_assoc" => S::CatenoidLightlikeAssoc { phi: get("phi", Some(0.5))? },
            _ => return Err(Error::ParseClass(tag.to_string())),
        };
        cls.validate()?;
        Ok(cls)
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::ParamRange(m));
        match *self {
            S::BonnetPeriodic { c1 } if !(c1 > 1.0 && c1.is_finite()) => {
                bad(format!("B_Tper needs c1 > 1, got {c1}"))
            }
            S::BonnetTimelike1 { c2 } if !(c2 > 1.0 && c2.is_finite()) => {
                bad(format!("B_T1 needs c2 > 1, got {c2}"))
            }
            S::BonnetSpacelike { c2 } if !(c2 > 0.0 && c2 < 1.0) => {
                bad(format!("B_S needs 0 < c2 < 1, got {c2}"))
            }
            S::BonnetTimelike2 { c4 } if !(c4 > 0.0 && c4.is_finite()) => {
                bad(format!("B_T2 needs c4 > 0, got {c4}"))
            }
            S::CatenoidLightlikeAssoc { phi } if !phi.is_finite() => {
                bad(format!("C_L_assoc needs a finite phi, got {phi}"))
            }
            _ => Ok(()),
        }
    }

    /// Every tag with the parameter samples used by the acceptance suite.
    pub fn acceptance_samples() -> Vec<SurfaceClass> {
        vec![
            S::Plane,
            S::CatenoidTimelike,
            S::BonnetPeriodic { c1: 1.5 },
            S::BonnetPeriodic { c1: 3.0 },
            S::Enneper,
            S::BonnetTimelike1 { c2: 1.5 },
            S::BonnetTimelike1 { c2: 3.0 },
            S::CatenoidSpacelike1,
            S::BonnetLightlike1,
            S::BonnetSpacelike { c2: 0.3 },
            S::BonnetSpacelike { c2: 0.7 },
            S::CatenoidSpacelike2,
            S::BonnetLightlike2,
            S::BonnetTimelike2 { c4: 0.5 },
            S::BonnetTimelike2 { c4: 2.0 },
            S::CatenoidLightlike,
            S::CatenoidLightlikeAssoc { phi: 0.5 },
        ]
    }

    /// A working rectangle on which the data and the unit normal are finite.
    pub fn default_domain(&self) -> Rect {
        match self {
            S::CatenoidTimelike | S::BonnetPeriodic { .. } => Rect::square(0.6),
            S::CatenoidLightlike => Rect::new(-0.4, 0.4, -0.5, 0.5),
            S::CatenoidLightlikeAssoc { .. } => Rect::square(0.25),
            _ => Rect::square(1.0),
        }
    }

    /// The conformal-factor solution and its coordinate alignment, or
    /// `None` for the plane.
    pub fn conformal(&self) -> Option<AlignedSolution> {
        let sol = |case, c, d| ConformalSolution { case, c, d, phi: 0.0 };
        let (solution, x_shift, y_shift) = match *self {
            S::Plane => return None,
            S::CatenoidTimelike => (sol(ConformalCase::Case1a, 0.0, 4.0), 0.0, 0.0),
            S::BonnetPeriodic { c1 } => {
                let c = (c1 - 1.0 / c1).powi(2);
                let d = (c1 + 1.0 / c1).powi(2);
                (sol(ConformalCase::Case1a, c, d), 0.0, 0.0)
            }
            S::Enneper => (sol(ConformalCase::Case1a, 2.0, 2.0), 0.0, 0.0),
            S::CatenoidSpacelike1 => (sol(ConformalCase::Case1a, 1.0, 0.0), 0.0, 0.0),
            S::BonnetTimelike1 { c2 } | S::BonnetSpacelike { c2 } => {
                (sol(ConformalCase::Case1b, c2 * c2, c2 * c2 - 1.0), 0.0, -(1.0 + c2).ln())
            }
            S::BonnetLightlike1 => (sol(ConformalCase::Case1b, 1.0, 0.0), 0.0, -(2.0f64).ln()),
            S::CatenoidSpacelike2 => (sol(ConformalCase::Case1b, 0.0, -1.0), 0.0, 0.0),
            S::BonnetLightlike2 => (sol(ConformalCase::Case1c, 0.0, -1.0), -(2.0f64).ln(), 0.0),
            S::BonnetTimelike2 { c4 } => {
                let c = -c4 * c4;
                (sol(ConformalCase::Case1d, c, c - 1.0), 0.0, -0.5 * (1.0 + c4 * c4).ln())
            }
            S::CatenoidLightlike => (
                ConformalSolution { case: ConformalCase::Case2, c: 0.0, d: 0.0, phi: 0.0 },
                0.0,
                0.0,
            ),
            S::CatenoidLightlikeAssoc { phi } => (
                ConformalSolution { case: ConformalCase::Case2, c: 0.0, d: 0.0, phi },
                0.0,
                0.0,
            ),
        };
        Some(AlignedSolution { solution, x_shift, y_shift })
    }

    /// `d - c` for case 1, zero for case 2, `None` for the plane.
    pub fn lightlike_curvature(&self) -> Option<f64> {
        self.conformal().map(|a| match a.solution.case {
            ConformalCase::Case2 => 0.0,
            _ => a.solution.d - a.solution.c,
        })
    }
}

impl fmt::Display for SurfaceClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.tag())?;
        let params = self.params();
        if !params.is_empty() {
            let body: Vec<String> = params.iter().map(|(k, v)| format!("{k}={v}")).collect();
            write!(f, "{{{}}}", body.join(","))?;
        }
        Ok(())
    }
}

impl FromStr for SurfaceClass {
    type Err = Error;

    /// Parses `TAG` or `TAG{key=value,...}`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let (tag, rest) = match s.find('{') {
            Some(i) => {
                let body = s[i + 1..]
                    .strip_suffix('}')
                    .ok_or_else(|| Error::ParseClass(s.to_string()))?;
                (&s[..i], Some(body))
            }
            None => (s, None),
        };
        let params = match rest {
            Some(body) => parse_params(body)?,
            None => Vec::new(),
        };
        SurfaceClass::from_parts(tag.trim(), &params)
    }
}

/// Parses `key=value,key=value`.
pub fn parse_params(body: &str) -> Result<Vec<(String, f64)>> {
    body.split(',')
        .map(str::trim)
        .filter(|p| !p.is_empty())
        .map(|p| {
            let (k, v) = p.split_once('=').ok_or_else(|| Error::ParseClass(p.to_string()))?;
            let v: f64 = v.trim().parse().map_err(|_| Error::ParseClass(p.to_string()))?;
            Ok((k.trim().to_string(), v))
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ConformalCase {
    Case1a,
    Case1b,
    Case1c,
    Case1d,
    Case2,
}

/// Explicit solution of the reduced system for `f(x)`, `g(y)` and
/// `ρ = (f² - g² + 1)/(f′ - g′)`, or `ρ = sinh φ·x - cosh φ·y` in case 2.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ConformalSolution {
    pub case: ConformalCase,
    pub c: f64,
    pub d: f64,
    pub phi: f64,
}

/// Value and first two derivatives of a function of one variable.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Jet1 {
    pub v: f64,
    pub d1: f64,
    pub d2: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct RhoJet {
    pub rho: f64,
    pub rx: f64,
    pub ry: f64,
    pub rxx: f64,
    pub rxy: f64,
    pub ryy: f64,
}

impl RhoJet {
    /// `ρ(ρₓₓ - ρ_yy) - (ρₓ² - ρ_y²) - 1`
    pub fn gauss_residual(&self) -> f64 {
        self.rho * (self.rxx - self.ryy) - (self.rx * self.rx - self.ry * self.ry) - 1.0
    }
}

pub fn conformal_solution(case: ConformalCase, c: f64, d: f64, phi: f64) -> Result<ConformalSolution> {
    let bad = |m: &str| Err(Error::ParamRange(format!("{case:?}: {m} (c = {c}, d = {d})")));
    match case {
        ConformalCase::Case1a if !(c >= 0.0 && d >= 0.0 && (c != 0.0 || d != 0.0)) => {
            return bad("needs c, d >= 0 and c² + d² != 0")
        }
        ConformalCase::Case1b if !(c >= 0.0 && (c != 0.0 || d != 0.0)) => {
            return bad("needs c >= 0 and c² + d² != 0")
        }
        ConformalCase::Case1c if !(c >= 0.0 && d < 2.0 * c) => return bad("needs c >= 0 and d < 2c"),
        ConformalCase::Case1d if !(d < c && c < 0.0) => return bad("needs d < c < 0"),
        ConformalCase::Case2 if !phi.is_finite() => return bad("needs finite phi"),
        _ => {}
    }
    if !(c.is_finite() && d.is_finite()) {
        return bad("non-finite parameter");
    }
    Ok(ConformalSolution { case, c, d, phi })
}

impl ConformalSolution {
    fn s(&self) -> f64 {
        self.c - self.d
    }

    /// `f`, `f′`, `f″` at `x`.
    pub fn f(&self, x: f64) -> Jet1 {
        let s = self.s();
        let (c, d) = (self.c, self.d);
        let (v, d1) = match self.case {
            ConformalCase::Case1a | ConformalCase::Case1b => {
                let k = c.sqrt();
                (k * sinh_s(s, x), k * cosh_s(s, x))
            }
            ConformalCase::Case1c => {
                let k = (2.0 * c - d).sqrt();
                (cosh_s(s, x) + k * sinh_s(s, x), s * sinh_s(s, x) + k * cosh_s(s, x))
            }
            ConformalCase::Case1d => {
                let r = s.sqrt();
                let k = (c / (d - c)).sqrt();
                (k * (r * x).cosh(), k * r * (r * x).sinh())
            }
            ConformalCase::Case2 => (1.0, 0.0),
        };
        let d2 = if self.case == ConformalCase::Case2 { 0.0 } else { s * v };
        Jet1 { v, d1, d2 }
    }

    /// `g`, `g′`, `g″` at `y`.
    pub fn g(&self, y: f64) -> Jet1 {
        let s = self.s();
        let (c, d) = (self.c, self.d);
        let (v, d1) = match self.case {
            ConformalCase::Case1a => {
                let k = d.sqrt();
                (-k * sinh_s(s, y), -k * cosh_s(s, y))
            }
            ConformalCase::Case1b | ConformalCase::Case1c => {
                let k = c.sqrt();
                (-cosh_s(s, y) - k * sinh_s(s, y), -s * sinh_s(s, y) - k * cosh_s(s, y))
            }
            ConformalCase::Case1d => {
                let r = s.sqrt();
                let k = (d / (d - c)).sqrt();
                (-k * (r * y).cosh(), -k * r * (r * y).sinh())
            }
            ConformalCase::Case2 => (0.0, 0.0),
        };
        let d2 = if self.case == ConformalCase::Case2 { 0.0 } else { s * v };
        Jet1 { v, d1, d2 }
    }

    /// Residuals of `f′² = (c-d)f² + c`, `f″ = (c-d)f` and the same for `g`
    /// with `d`.
    pub fn ode_residuals(&self, x: f64, y: f64) -> [f64; 4] {
        let s = self.s();
        let f = self.f(x);
        let g = self.g(y);
        [
            f.d1 * f.d1 - s * f.v * f.v - self.c,
            f.d2 - s * f.v,
            g.d1 * g.d1 - s * g.v * g.v - self.d,
            g.d2 - s * g.v,
        ]
    }

    pub fn rho(&self, x: f64, y: f64) -> f64 {
        self.rho_jet(x, y).rho
    }

    /// `ρ` and its derivatives through second order, by the quotient rule.
    pub fn rho_jet(&self, x: f64, y: f64) -> RhoJet {
        if self.case == ConformalCase::Case2 {
            let (sh, ch) = (self.phi.sinh(), self.phi.cosh());
            return RhoJet { rho: sh * x - ch * y, rx: sh, ry: -ch, ..Default::default() };
        }
        let s = self.s();
        let f = self.f(x);
        let g = self.g(y);
        let n = f.v * f.v - g.v * g.v + 1.0;
        let den = f.d1 - g.d1;
        let (nx, nxx) = (2.0 * f.v * f.d1, 2.0 * f.d1 * f.d1 + 2.0 * f.v * f.d2);
        let (ny, nyy) = (-2.0 * g.v * g.d1, -2.0 * g.d1 * g.d1 - 2.0 * g.v * g.d2);
        let (dx, dxx) = (f.d2, s * f.d1);
        let (dy, dyy) = (-g.d2, -s * g.d1);
        let rho = n / den;
        let rx = (nx - rho * dx) / den;
        let ry = (ny - rho * dy) / den;
        let rxx = (nxx - 2.0 * rx * dx - rho * dxx) / den;
        let ryy = (nyy - 2.0 * ry * dy - rho * dyy) / den;
        let rxy = -(rx * dy + ry * dx) / den;
        RhoJet { rho, rx, ry, rxx, rxy, ryy }
    }
}

/// A conformal solution together with the parameter shift that matches it
/// to the catalog data: `ρ_data(x, y) = ρ_sol(x + x_shift, y + y_shift)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AlignedSolution {
    pub solution: ConformalSolution,
    pub x_shift: f64,
    pub y_shift: f64,
}

impl AlignedSolution {
    pub fn rho_jet(&self, x: f64, y: f64) -> RhoJet {
        self.solution.rho_jet(x + self.x_shift, y + self.y_shift)
    }
}

fn exp_j(z: P) -> P {
    (J * z).exp()
}

fn exp_family(label: String, c2: f64) -> WeierstrassData {
    // h = j e^{jz} - j c₂, η = e^{-jz}/2
    WeierstrassData::new(label, entire(move |z| J * exp_j(z) - J * c2), entire(|z| exp_j(-z) * 0.5))
        .with_h_z(entire(exp_j))
        .with_products(
            entire(move |z| (J - J * c2 * exp_j(-z)) * 0.5),
            entire(move |z| (exp_j(z) - 2.0 * c2 + exp_j(-z) * (c2 * c2)) * 0.5),
        )
        .with_eta_abs(Arc::new(|_, y| 0.5 * (-y).exp()))
        .with_rho(Arc::new(move |x, y| {
            c2 * x.cosh() + 0.5 * ((1.0 - c2 * c2) * (-y).exp() - y.exp())
        }))
}

fn periodic(label: String, c1: f64) -> WeierstrassData {
    // h = c̃ tan z, η = cos²z/(2c̃)
    WeierstrassData::new(
        label,
        para_fn(move |z| Ok(z.tan()? * c1)),
        entire(move |z| {
            let c = z.cos();
            c * c / (2.0 * c1)
        }),
    )
    .with_h_z(para_fn(move |z| {
        let c = z.cos();
        Ok((c * c).recip()? * c1)
    }))
    .with_products(
        entire(|z| z.sin() * z.cos() * 0.5),
        entire(move |z| {
            let s = z.sin();
            s * s * (c1 / 2.0)
        }),
    )
    .with_eta_abs(Arc::new(move |x, y| (x + y).cos() * (x - y).cos() / (2.0 * c1)))
    .with_rho(Arc::new(move |x, y| {
        ((1.0 - c1 * c1) * (2.0 * x).cos() + (1.0 + c1 * c1) * (2.0 * y).cos()) / (4.0 * c1)
    }))
}

/// `h = (z + j)/(1 - jz)`, `η = (jz - 1)²/4`, reparametrized by `z ↦ λz`
/// and rescaled so the Hopf differential stays `-1/2`.
fn lightlike_catenoid(label: String, phi: f64) -> WeierstrassData {
    let lam = (J * -phi).exp();
    let lam_inv = (J * phi).exp();
    let h5 = |w: P| (w + J).checked_div(P::ONE - J * w);
    WeierstrassData::new(
        label,
        para_fn(move |z| h5(lam * z)),
        entire(move |z| {
            let w = lam * z;
            let t = J * w - 1.0;
            lam_inv * t * t * 0.25
        }),
    )
    .with_h_z(para_fn(move |z| {
        let t = P::ONE - J * (lam * z);
        Ok(lam * (t * t).recip()? * 2.0)
    }))
    .with_products(
        entire(move |z| {
            let w = lam * z;
            lam_inv * (w + J) * (P::ONE - J * w) * 0.25
        }),
        entire(move |z| {
            let w = lam * z + J;
            lam_inv * w * w * 0.25
        }),
    )
    .with_eta_abs(Arc::new(move |x, y| {
        let w = lam * P::new(x, y);
        (P::ONE - J * w).sq_norm() / 4.0
    }))
    .with_rho(Arc::new(move |x, y| phi.sinh() * x - phi.cosh() * y))
}

/// The associated-family member `(h, λ⁻²η)` with `λ = e^{-jφ}`, in the
/// original coordinates (Hopf differential `-λ⁻²/2`).
pub fn lightlike_catenoid_associate(phi: f64) -> WeierstrassData {
    crate::wrep::associate(&lightlike_catenoid("C_L".into(), 0.0), 2.0 * phi)
}

pub fn weierstrass_data(cls: &SurfaceClass) -> Result<WeierstrassData> {
    cls.validate()?;
    let label = cls.to_string();
    let data = match *cls {
        S::Plane => WeierstrassData::new(label, entire(|_| P::ZERO), entire(|_| P::ONE))
            .with_h_z(entire(|_| P::ZERO))
            .with_rho(Arc::new(|_, _| 1.0)),
        S::CatenoidTimelike => periodic(label, 1.0),
        S::BonnetPeriodic { c1 } => periodic(label, c1),
        S::Enneper => {
            let k = 1.0 / (2.0 * SQRT_2);
            WeierstrassData::new(label, entire(|z| z * SQRT_2), entire(move |_| P::new(k, 0.0)))
                .with_h_z(entire(|_| P::new(SQRT_2, 0.0)))
                .with_rho(Arc::new(move |x, y| (1.0 + 2.0 * (x * x - y * y)) * k))
        }
        S::BonnetTimelike1 { c2 } | S::BonnetSpacelike { c2 } => exp_family(label, c2),
        S::BonnetLightlike1 => exp_family(label, 1.0),
        S::CatenoidSpacelike2 => exp_family(label, 0.0),
        S::CatenoidSpacelike1 => {
            WeierstrassData::new(label, entire(P::exp), entire(|z| (-z).exp() * 0.5))
                .with_h_z(entire(P::exp))
                .with_products(entire(|_| P::new(0.5, 0.0)), entire(|z| z.exp() * 0.5))
                .with_eta_abs(Arc::new(|x, _| 0.5 * (-x).exp()))
                .with_rho(Arc::new(|x, _| x.cosh()))
        }
        S::BonnetLightlike2 => {
            WeierstrassData::new(label, entire(|z| z.exp() + J), entire(|z| (-z).exp() * 0.5))
                .with_h_z(entire(P::exp))
                .with_products(
                    entire(|z| (P::ONE + J * (-z).exp()) * 0.5),
                    entire(|z| (z.exp() + J * 2.0 + (-z).exp()) * 0.5),
                )
                .with_eta_abs(Arc::new(|x, _| 0.5 * (-x).exp()))
                .with_rho(Arc::new(|x, y| 0.5 * x.exp() - y.sinh()))
        }
        S::BonnetTimelike2 { c4 } => {
            // h = j e^{jz} + c₄, η = e^{-jz}/2
            WeierstrassData::new(label, entire(move |z| J * exp_j(z) + c4), entire(|z| exp_j(-z) * 0.5))
                .with_h_z(entire(exp_j))
                .with_products(
                    entire(move |z| (J + exp_j(-z) * c4) * 0.5),
                    entire(move |z| (exp_j(z) + J * (2.0 * c4) + exp_j(-z) * (c4 * c4)) * 0.5),
                )
                .with_eta_abs(Arc::new(|_, y| 0.5 * (-y).exp()))
                .with_rho(Arc::new(move |x, y| {
                    c4 * x.sinh() + 0.5 * ((1.0 + c4 * c4) * (-y).exp() - y.exp())
                }))
        }
        S::CatenoidLightlike => lightlike_catenoid(label, 0.0),
        S::CatenoidLightlikeAssoc { phi } => lightlike_catenoid(label, phi),
    };
    Ok(data.with_domain(cls.default_domain()))
}

/// Signed `(1 + |h|²)|η|` at `z` from the catalog closed forms.
pub fn rho_from_data(cls: &SurfaceClass, z: P) -> Result<f64> {
    weierstrass_data(cls)?.rho(z.re, z.im)
}

/// Axial directions, averaged over the nonsingular samples of a grid.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AxialDirections {
    pub v1: Option<Vec21>,
    pub v2: Option<Vec21>,
    /// Largest deviation of a sample from the averaged vector.
    pub spread1: f64,
    pub spread2: f64,
    pub samples: usize,
}

/// Evaluates the two axial-direction fields on `grid` and checks that they
/// are constant with `⟨v₁,v₁⟩ = c` and `⟨v₂,v₂⟩ = -d`.
///
/// Fails with `NotApplicable` if both `f` and `g` vanish identically.
pub fn axial_directions(grid: &SurfaceGrid, cls: &SurfaceClass) -> Result<AxialDirections> {
    let jets = grid
        .jets
        .as_ref()
        .ok_or_else(|| Error::NotApplicable("grid sampled without jets".into()))?;
    if cls.conformal().is_none() {
        return Err(Error::NotApplicable(format!("{cls} has no axial directions")));
    }
    let mask = grid.singular_mask(crate::checks::SINGULAR_BAND);
    let source = &grid.source;
    let mut v1s = Vec::new();
    let mut v2s = Vec::new();
    let mut max_rx = 0.0f64;
    let mut max_ry = 0.0f64;
    for (k, jet) in jets.iter().enumerate() {
        if mask[k] {
            continue;
        }
        let (x, y) = grid.coords(k);
        let rho = |x: f64, y: f64| source.rho(x, y);
        let [rx, rxx, _] = fd::derivatives3(|t| rho(t, y), x, JET_STEP)?;
        let [ry, ryy, _] = fd::derivatives3(|t| rho(x, t), y, JET_STEP)?;
        let r = grid.rho[k];
        let n = source.normal(x, y)?;
        let r2 = r * r;
        max_rx = max_rx.max(rx.abs());
        max_ry = max_ry.max(ry.abs());
        v1s.push(n * (-rx / r) - jet.f_x * ((rxx * r - rx * rx) / r2) + jet.f_y * (rx * ry / r2));
        v2s.push(n * (ry / r) - jet.f_x * (rx * ry / r2) + jet.f_y * ((ryy * r - ry * ry) / r2));
    }
    if v1s.is_empty() {
        return Err(Error::NotApplicable("no nonsingular samples".into()));
    }
    const VANISH: f64 = 1e-9;
    let average = |vs: &[Vec21]| -> (Vec21, f64) {
        let mean = vs.iter().copied().sum::<Vec21>() / vs.len() as f64;
        let spread = vs.iter().map(|v| (*v - mean).max_abs()).fold(0.0, f64::max);
        (mean, spread)
    };
    let (v1, spread1) = if max_rx > VANISH { let (m, s) = average(&v1s); (Some(m), s) } else { (None, 0.0) };
    let (v2, spread2) = if max_ry > VANISH { let (m, s) = average(&v2s); (Some(m), s) } else { (None, 0.0) };
    if v1.is_none() && v2.is_none() {
        return Err(Error::NotApplicable(format!("{cls}: f and g vanish identically")));
    }
    Ok(AxialDirections { v1, v2, spread1, spread2, samples: v1s.len() })
}
