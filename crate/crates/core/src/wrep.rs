//! Weierstrass-type representation of timelike minimal surfaces.
//!
//! Data `(h, η)` produce
//! `F = Re ∫ (2h, 1 - h², -j(1 + h²)) η dz` in component order (ξ₁, ξ₂, ξ₀).
//! With `Φ` the paracomplex integrand, `F_x = Re Φ` and `F_y = Re(jΦ)`; in
//! null coordinates `F = ½(A(u) + B(v))` where `A′ = Φ⁺`, `B′ = Φ⁻` are the
//! idempotent components.

use std::ops::{Add, Mul, Sub};
use std::sync::Arc;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fd::{self, Linear};
use crate::minkowski::{det3, Vec21};
use crate::paracomplex::{ParaComplex, ParaError};
use crate::quadrature::{self, Integrable, QuadOptions};

pub type ParaFn = Arc<dyn Fn(ParaComplex) -> std::result::Result<ParaComplex, ParaError> + Send + Sync>;
pub type RealFn2 = Arc<dyn Fn(f64, f64) -> f64 + Send + Sync>;

/// Step used for derivatives of the integrand.
pub const JET_STEP: f64 = 1e-3;

pub fn para_fn(
    f: impl Fn(ParaComplex) -> std::result::Result<ParaComplex, ParaError> + Send + Sync + 'static,
) -> ParaFn {
    Arc::new(f)
}

/// Infallible convenience wrapper.
pub fn entire(f: impl Fn(ParaComplex) -> ParaComplex + Send + Sync + 'static) -> ParaFn {
    Arc::new(move |z| Ok(f(z)))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Rect {
    pub x0: f64,
    pub x1: f64,
    pub y0: f64,
    pub y1: f64,
}

impl Rect {
    pub const fn new(x0: f64, x1: f64, y0: f64, y1: f64) -> Self {
        Rect { x0, x1, y0, y1 }
    }

    pub fn square(r: f64) -> Self {
        Rect::new(-r, r, -r, r)
    }

    pub fn contains(&self, x: f64, y: f64) -> bool {
        x >= self.x0 && x <= self.x1 && y >= self.y0 && y <= self.y1
    }

    pub fn is_valid(&self) -> bool {
        self.x0.is_finite() && self.x1.is_finite() && self.y0.is_finite() && self.y1.is_finite()
            && self.x0 < self.x1
            && self.y0 < self.y1
    }
}

/// Three paracomplex components, the integrand of the representation.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct ParaVec(pub [ParaComplex; 3]);

impl ParaVec {
    pub fn re(self) -> Vec21 {
        Vec21::new(self.0[0].re, self.0[1].re, self.0[2].re)
    }

    pub fn mul_j(self) -> Self {
        ParaVec(self.0.map(ParaComplex::mul_j))
    }

    pub fn scale(self, s: ParaComplex) -> Self {
        ParaVec(self.0.map(|c| c * s))
    }

    /// Idempotent `e⁺` components.
    pub fn plus(self) -> Vec21 {
        let [a, b, c] = self.0.map(|z| z.null().u);
        Vec21::new(a, b, c)
    }

    /// Idempotent `e⁻` components.
    pub fn minus(self) -> Vec21 {
        let [a, b, c] = self.0.map(|z| z.null().v);
        Vec21::new(a, b, c)
    }
}

impl Add for ParaVec {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        ParaVec([self.0[0] + o.0[0], self.0[1] + o.0[1], self.0[2] + o.0[2]])
    }
}

impl Sub for ParaVec {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        ParaVec([self.0[0] - o.0[0], self.0[1] - o.0[1], self.0[2] - o.0[2]])
    }
}

impl Mul<f64> for ParaVec {
    type Output = Self;
    fn mul(self, s: f64) -> Self {
        ParaVec(self.0.map(|c| c * s))
    }
}

impl Linear for ParaVec {
    fn zero() -> Self {
        ParaVec::default()
    }
}

impl Integrable for ParaVec {
    fn magnitude(&self) -> f64 {
        self.0.iter().map(|c| c.magnitude()).fold(0.0, f64::max)
    }
}

/// Weierstrass data with optional closed forms for products that stay
/// finite where `h` has poles.
#[derive(Clone)]
pub struct WeierstrassData {
    pub label: String,
    h: ParaFn,
    eta: ParaFn,
    h_z: Option<ParaFn>,
    h_eta: Option<ParaFn>,
    h2_eta: Option<ParaFn>,
    eta_abs: Option<RealFn2>,
    rho: Option<RealFn2>,
    pub domain: Rect,
    pub basepoint: (f64, f64),
    metric_sign: f64,
    pub quad: QuadOptions,
}

impl std::fmt::Debug for WeierstrassData {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("WeierstrassData")
            .field("label", &self.label)
            .field("domain", &self.domain)
            .field("basepoint", &self.basepoint)
            .field("metric_sign", &self.metric_sign)
            .finish_non_exhaustive()
    }
}

impl WeierstrassData {
    pub fn new(label: impl Into<String>, h: ParaFn, eta: ParaFn) -> Self {
        WeierstrassData {
            label: label.into(),
            h,
            eta,
            h_z: None,
            h_eta: None,
            h2_eta: None,
            eta_abs: None,
            rho: None,
            domain: Rect::square(1.0),
            basepoint: (0.0, 0.0),
            metric_sign: 1.0,
            quad: QuadOptions::default(),
        }
    }

    pub fn with_h_z(mut self, h_z: ParaFn) -> Self {
        self.h_z = Some(h_z);
        self
    }

    /// Closed forms of `hη` and `h²η`.
    pub fn with_products(mut self, h_eta: ParaFn, h2_eta: ParaFn) -> Self {
        self.h_eta = Some(h_eta);
        self.h2_eta = Some(h2_eta);
        self
    }

    /// Signed `|η|`, whose square is `η η̄`.
    pub fn with_eta_abs(mut self, f: RealFn2) -> Self {
        self.eta_abs = Some(f);
        self
    }

    /// Signed Lorentz conformal factor `(1 + |h|²)|η|`.
    pub fn with_rho(mut self, f: RealFn2) -> Self {
        self.rho = Some(f);
        self
    }

    pub fn with_domain(mut self, domain: Rect) -> Self {
        self.domain = domain;
        self
    }

    pub fn with_basepoint(mut self, x: f64, y: f64) -> Self {
        self.basepoint = (x, y);
        self
    }

    pub fn with_quad(mut self, quad: QuadOptions) -> Self {
        self.quad = quad;
        self
    }

    /// `+1`, or `-1` for conjugates whose metric is `-ρ²(dx² - dy²)`.
    pub fn metric_sign(&self) -> f64 {
        self.metric_sign
    }

    pub fn has_analytic_h_z(&self) -> bool {
        self.h_z.is_some()
    }

    pub fn h(&self, z: ParaComplex) -> Result<ParaComplex> {
        Ok((self.h)(z)?)
    }

    pub fn eta(&self, z: ParaComplex) -> Result<ParaComplex> {
        Ok((self.eta)(z)?)
    }

    pub fn h_eta(&self, z: ParaComplex) -> Result<ParaComplex> {
        match &self.h_eta {
            Some(f) => Ok(f(z)?),
            None => Ok(self.h(z)? * self.eta(z)?),
        }
    }

    pub fn h2_eta(&self, z: ParaComplex) -> Result<ParaComplex> {
        match &self.h2_eta {
            Some(f) => Ok(f(z)?),
            None => {
                let h = self.h(z)?;
                Ok(h * h * self.eta(z)?)
            }
        }
    }

    /// `h_z`, analytic when supplied, otherwise `∂ₓh` by a 7-point stencil.
    pub fn h_z(&self, z: ParaComplex) -> Result<ParaComplex> {
        match &self.h_z {
            Some(f) => Ok(f(z)?),
            None => fd::derivative(|t| self.h(ParaComplex::new(t, z.im)), z.re, JET_STEP, 1),
        }
    }

    pub fn eta_abs(&self, x: f64, y: f64) -> Result<f64> {
        match &self.eta_abs {
            Some(f) => Ok(f(x, y)),
            None => Ok(self.eta(ParaComplex::new(x, y))?.sq_norm().abs().sqrt()),
        }
    }

    /// Signed Lorentz conformal factor.
    pub fn rho(&self, x: f64, y: f64) -> Result<f64> {
        match &self.rho {
            Some(f) => Ok(f(x, y)),
            None => {
                let z = ParaComplex::new(x, y);
                Ok((1.0 + self.h(z)?.sq_norm()) * self.eta_abs(x, y)?)
            }
        }
    }

    /// `(2hη, η - h²η, -j(η + h²η))`
    pub fn integrand(&self, z: ParaComplex) -> Result<ParaVec> {
        let eta = self.eta(z)?;
        let he = self.h_eta(z)?;
        let hhe = self.h2_eta(z)?;
        Ok(ParaVec([he * 2.0, eta - hhe, -(eta + hhe).mul_j()]))
    }

    /// `α′(u) = Φ⁺(u)`, which depends on `u` alone.
    pub fn phi_plus(&self, u: f64) -> Result<Vec21> {
        let v = self.basepoint.0 - self.basepoint.1;
        Ok(self.integrand(ParaComplex::from_null(u, v))?.plus())
    }

    /// `β′(v) = Φ⁻(v)`.
    pub fn phi_minus(&self, v: f64) -> Result<Vec21> {
        let u = self.basepoint.0 + self.basepoint.1;
        Ok(self.integrand(ParaComplex::from_null(u, v))?.minus())
    }

    fn segment_x(&self, xa: f64, xb: f64, y: f64) -> Result<ParaVec> {
        quadrature::integrate(|t| self.integrand(ParaComplex::new(t, y)), xa, xb, self.quad)
    }

    fn segment_y(&self, x: f64, ya: f64, yb: f64) -> Result<ParaVec> {
        let v = quadrature::integrate(|t| self.integrand(ParaComplex::new(x, t)), ya, yb, self.quad)?;
        Ok(v.mul_j())
    }

    /// `F(x, y)` along basepoint → (x, y₀) → (x, y).
    pub fn integrate_point(&self, x: f64, y: f64) -> Result<Vec21> {
        let (bx, by) = self.basepoint;
        Ok((self.segment_x(bx, x, by)? + self.segment_y(x, by, y)?).re())
    }

    /// `F(x, y)` along basepoint → (x₀, y) → (x, y).
    pub fn integrate_point_alt(&self, x: f64, y: f64) -> Result<Vec21> {
        let (bx, by) = self.basepoint;
        Ok((self.segment_y(bx, by, y)? + self.segment_x(bx, x, y)?).re())
    }

    /// `F(x, y) = ½(A(u) + B(v))` by integrating the idempotent components.
    pub fn integrate_point_null(&self, x: f64, y: f64) -> Result<Vec21> {
        let (bx, by) = self.basepoint;
        let (u0, v0) = (bx + by, bx - by);
        let a = quadrature::integrate(|s| self.phi_plus(s), u0, x + y, self.quad)?;
        let b = quadrature::integrate(|s| self.phi_minus(s), v0, x - y, self.quad)?;
        Ok((a + b) * 0.5)
    }

    /// Derivative jets from the integrand.
    pub fn jet(&self, x: f64, y: f64) -> Result<Jet> {
        let z = ParaComplex::new(x, y);
        let phi = self.integrand(z)?;
        let [phi_z, phi_zz, _] =
            fd::derivatives3(|t| self.integrand(ParaComplex::new(t, y)), x, JET_STEP)?;
        Ok(Jet {
            f_x: phi.re(),
            f_y: phi.mul_j().re(),
            f_xx: phi_z.re(),
            f_xy: phi_z.mul_j().re(),
            f_yy: phi_z.re(),
            f_xxx: phi_zz.re(),
            f_xxy: phi_zz.mul_j().re(),
            f_xyy: phi_zz.re(),
            f_yyy: phi_zz.mul_j().re(),
        })
    }

    /// Unit normal recovered from `h`.
    pub fn normal(&self, z: ParaComplex) -> Result<Vec21> {
        normal_from_h(self.h(z)?).ok_or(Error::SingularPoint { x: z.re, y: z.im })
    }

    /// Hopf differential `q = -h_z η`.
    pub fn hopf(&self, z: ParaComplex) -> Result<ParaComplex> {
        Ok(-(self.h_z(z)? * self.eta(z)?))
    }

    /// Replaces `h` by `h + ε z²`, keeping `η`.
    pub fn perturb(&self, eps: f64) -> Self {
        let base = self.clone();
        let (b1, b2, b3) = (base.clone(), base.clone(), base.clone());
        let h = para_fn(move |z| Ok(b1.h(z).map_err(para_err)? + z * z * eps));
        let h_z = para_fn(move |z| Ok(b2.h_z(z).map_err(para_err)? + z * (2.0 * eps)));
        let h_eta = {
            let b = b3.clone();
            para_fn(move |z| {
                let eta = b.eta(z).map_err(para_err)?;
                Ok(b.h_eta(z).map_err(para_err)? + z * z * eta * eps)
            })
        };
        let h2_eta = para_fn(move |z| {
            let eta = b3.eta(z).map_err(para_err)?;
            let z2 = z * z;
            Ok(b3.h2_eta(z).map_err(para_err)?
                + z2 * b3.h_eta(z).map_err(para_err)? * (2.0 * eps)
                + z2 * z2 * eta * (eps * eps))
        });
        let mut out = WeierstrassData {
            label: format!("{}+perturb({eps})", self.label),
            h,
            eta: self.eta.clone(),
            h_z: Some(h_z),
            h_eta: Some(h_eta),
            h2_eta: Some(h2_eta),
            eta_abs: self.eta_abs.clone(),
            rho: None,
            ..self.clone()
        };
        out.metric_sign = self.metric_sign;
        out
    }
}

fn para_err(e: Error) -> ParaError {
    match e {
        Error::Para(p) => p,
        _ => ParaError::Domain { func: "composite", z: ParaComplex::ZERO },
    }
}

/// `N = ((|h|²-1)/(|h|²+1), 2 Re h/(|h|²+1), 2 Im h/(|h|²+1))`.
pub fn normal_from_h(h: ParaComplex) -> Option<Vec21> {
    let s = h.sq_norm() + 1.0;
    if s.abs() <= 1e-14 * (1.0 + h.re.abs() + h.im.abs()).powi(2) {
        return None;
    }
    Some(Vec21::new((s - 2.0) / s, 2.0 * h.re / s, 2.0 * h.im / s))
}

/// `η ↦ jη`.
pub fn conjugate(data: &WeierstrassData) -> WeierstrassData {
    let mut out = scale_eta(data, ParaComplex::J);
    out.label = format!("conj({})", data.label);
    out.metric_sign = -data.metric_sign;
    out
}

/// `η ↦ e^{jφ} η`.
pub fn associate(data: &WeierstrassData, phi: f64) -> WeierstrassData {
    if phi == 0.0 {
        return data.clone();
    }
    let mut out = scale_eta(data, (ParaComplex::J * phi).exp());
    out.label = format!("assoc({}, {phi})", data.label);
    out
}

fn scale_eta(data: &WeierstrassData, lambda: ParaComplex) -> WeierstrassData {
    let wrap = |f: &ParaFn| -> ParaFn {
        let f = f.clone();
        para_fn(move |z| Ok(f(z)? * lambda))
    };
    let d = data.clone();
    let (d1, d2) = (data.clone(), data.clone());
    WeierstrassData {
        eta: wrap(&data.eta),
        h_eta: Some(para_fn(move |z| Ok(d1.h_eta(z).map_err(para_err)? * lambda))),
        h2_eta: Some(para_fn(move |z| Ok(d2.h2_eta(z).map_err(para_err)? * lambda))),
        rho: d.rho.clone(),
        eta_abs: d.eta_abs.clone(),
        ..d
    }
}

/// Flat-point type from the Hopf differential.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum FlatPoint {
    None,
    Umbilic,
    QuasiUmbilic,
}

pub fn flat_point(q: ParaComplex, tol: f64) -> FlatPoint {
    let hopf_q = q.re + q.im;
    let hopf_r = q.re - q.im;
    if hopf_q.abs() < tol && hopf_r.abs() < tol {
        FlatPoint::Umbilic
    } else if hopf_q.abs() < tol || hopf_r.abs() < tol {
        FlatPoint::QuasiUmbilic
    } else {
        FlatPoint::None
    }
}

/// Partial derivatives of an immersion up to third order.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Jet {
    pub f_x: Vec21,
    pub f_y: Vec21,
    pub f_xx: Vec21,
    pub f_xy: Vec21,
    pub f_yy: Vec21,
    pub f_xxx: Vec21,
    pub f_xxy: Vec21,
    pub f_xyy: Vec21,
    pub f_yyy: Vec21,
}

impl Jet {
    /// Lorentz cross-product normal, `⟨N, c⟩ = det(F_x, F_y, c)` up to scale.
    pub fn cross_normal(&self) -> Option<Vec21> {
        let a = self.f_x;
        let b = self.f_y;
        let e = Vec21::new(
            a.x2 * b.x0 - a.x0 * b.x2,
            a.x0 * b.x1 - a.x1 * b.x0,
            a.x1 * b.x2 - a.x2 * b.x1,
        );
        let w = Vec21::new(e.x1, e.x2, -e.x0);
        let n2 = w.norm_sq();
        (n2 > 0.0).then(|| w / n2.sqrt())
    }

    pub fn det_x(&self) -> f64 {
        det3(self.f_x, self.f_xx, self.f_xxx)
    }

    pub fn det_y(&self) -> f64 {
        det3(self.f_y, self.f_yy, self.f_yyy)
    }
}

/// A parametrized surface that can be sampled.
pub trait Immersion: Send + Sync {
    fn point(&self, x: f64, y: f64) -> Result<Vec21>;
    fn jet(&self, x: f64, y: f64) -> Result<Jet>;
    /// Signed conformal factor.
    fn rho(&self, x: f64, y: f64) -> Result<f64>;
    fn normal(&self, x: f64, y: f64) -> Result<Vec21> {
        self.jet(x, y)?.cross_normal().ok_or(Error::SingularPoint { x, y })
    }
    fn metric_sign(&self) -> f64 {
        1.0
    }
    fn label(&self) -> String;
}

impl Immersion for WeierstrassData {
    fn point(&self, x: f64, y: f64) -> Result<Vec21> {
        self.integrate_point(x, y)
    }
    fn jet(&self, x: f64, y: f64) -> Result<Jet> {
        WeierstrassData::jet(self, x, y)
    }
    fn rho(&self, x: f64, y: f64) -> Result<f64> {
        WeierstrassData::rho(self, x, y)
    }
    fn normal(&self, x: f64, y: f64) -> Result<Vec21> {
        WeierstrassData::normal(self, ParaComplex::new(x, y))
    }
    fn metric_sign(&self) -> f64 {
        self.metric_sign
    }
    fn label(&self) -> String {
        self.label.clone()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    pub nx: usize,
    pub ny: usize,
    pub domain: Rect,
    pub jets: bool,
}

impl GridSpec {
    pub fn new(nx: usize, ny: usize, domain: Rect) -> Self {
        GridSpec { nx, ny, domain, jets: true }
    }

    pub fn without_jets(mut self) -> Self {
        self.jets = false;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.nx < 2 || self.ny < 2 || !self.domain.is_valid() {
            return Err(Error::GridShape(format!(
                "need nx, ny >= 2 and a non-empty domain, got {}x{} on {:?}",
                self.nx, self.ny, self.domain
            )));
        }
        Ok(())
    }

    pub fn xs(&self) -> Vec<f64> {
        linspace(self.domain.x0, self.domain.x1, self.nx)
    }

    pub fn ys(&self) -> Vec<f64> {
        linspace(self.domain.y0, self.domain.y1, self.ny)
    }
}

pub fn linspace(a: f64, b: f64, n: usize) -> Vec<f64> {
    if n == 1 {
        return vec![a];
    }
    (0..n).map(|i| a + (b - a) * i as f64 / (n - 1) as f64).collect()
}

/// Samples of an immersion on a rectangular grid, stored row-major in `y`.
#[derive(Clone)]
pub struct SurfaceGrid {
    pub nx: usize,
    pub ny: usize,
    pub xs: Vec<f64>,
    pub ys: Vec<f64>,
    pub points: Vec<Vec21>,
    pub jets: Option<Vec<Jet>>,
    pub rho: Vec<f64>,
    pub source: Arc<dyn Immersion>,
}

impl std::fmt::Debug for SurfaceGrid {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("SurfaceGrid")
            .field("nx", &self.nx)
            .field("ny", &self.ny)
            .field("source", &self.source.label())
            .finish_non_exhaustive()
    }
}

impl SurfaceGrid {
    pub fn index(&self, i: usize, j: usize) -> usize {
        j * self.nx + i
    }

    pub fn point(&self, i: usize, j: usize) -> Vec21 {
        self.points[self.index(i, j)]
    }

    pub fn coords(&self, k: usize) -> (f64, f64) {
        (self.xs[k % self.nx], self.ys[k / self.nx])
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn max_abs_rho(&self) -> f64 {
        self.rho.iter().fold(0.0f64, |m, r| m.max(r.abs()))
    }

    /// Samples inside the band `|ρ| < frac·max|ρ|`.
    pub fn singular_mask(&self, frac: f64) -> Vec<bool> {
        let cut = frac * self.max_abs_rho();
        self.rho.iter().map(|r| !r.is_finite() || r.abs() < cut).collect()
    }

    /// Metric residuals `max(|⟨F_x,F_y⟩|, |⟨F_x,F_x⟩ + ⟨F_y,F_y⟩|, |⟨F_x,F_x⟩ - sρ²|) / (1+ρ²)`.
    pub fn conformality_residual(&self) -> Option<f64> {
        let jets = self.jets.as_ref()?;
        let s = self.source.metric_sign();
        let r = jets
            .iter()
            .zip(&self.rho)
            .map(|(j, rho)| {
                let e = j.f_x.norm_sq();
                let g = j.f_y.norm_sq();
                let f = j.f_x.inner(j.f_y);
                let r2 = rho * rho;
                f.abs().max((e + g).abs()).max((e - s * r2).abs()) / (1.0 + r2)
            })
            .fold(0.0, f64::max);
        Some(r)
    }
}

/// Samples any immersion pointwise (in parallel).
pub fn sample(source: Arc<dyn Immersion>, spec: &GridSpec) -> Result<SurfaceGrid> {
    spec.validate()?;
    let xs = spec.xs();
    let ys = spec.ys();
    let n = spec.nx * spec.ny;
    let rows: Vec<(Vec21, Option<Jet>, f64)> = (0..n)
        .into_par_iter()
        .map(|k| {
            let (x, y) = (xs[k % spec.nx], ys[k / spec.nx]);
            let p = source.point(x, y)?;
            let jet = if spec.jets { Some(source.jet(x, y)?) } else { None };
            Ok((p, jet, source.rho(x, y)?))
        })
        .collect::<Result<_>>()?;
    Ok(assemble(spec, xs, ys, rows, source))
}

fn assemble(
    spec: &GridSpec,
    xs: Vec<f64>,
    ys: Vec<f64>,
    rows: Vec<(Vec21, Option<Jet>, f64)>,
    source: Arc<dyn Immersion>,
) -> SurfaceGrid {
    let mut points = Vec::with_capacity(rows.len());
    let mut jets = Vec::with_capacity(rows.len());
    let mut rho = Vec::with_capacity(rows.len());
    for (p, j, r) in rows {
        points.push(p);
        if let Some(j) = j {
            jets.push(j);
        }
        rho.push(r);
    }
    SurfaceGrid {
        nx: spec.nx,
        ny: spec.ny,
        xs,
        ys,
        points,
        jets: spec.jets.then_some(jets),
        rho,
        source,
    }
}

/// Integrates Weierstrass data on a grid: a serial spine along `y = y₀`
/// from the basepoint, then the columns in parallel.
pub fn integrate(data: &WeierstrassData, spec: &GridSpec) -> Result<SurfaceGrid> {
    spec.validate()?;
    let xs = spec.xs();
    let ys = spec.ys();
    let (bx, by) = data.basepoint;

    let mut spine = Vec::with_capacity(xs.len());
    let mut acc = ParaVec::default();
    let mut prev = bx;
    for &x in &xs {
        acc = acc + data.segment_x(prev, x, by)?;
        spine.push(acc);
        prev = x;
    }

    let columns: Vec<Vec<(Vec21, Option<Jet>, f64)>> = xs
        .par_iter()
        .zip(spine.par_iter())
        .map(|(&x, &start)| {
            let mut acc = start;
            let mut prev = by;
            let mut col = Vec::with_capacity(ys.len());
            for &y in &ys {
                acc = acc + data.segment_y(x, prev, y)?;
                prev = y;
                let jet = if spec.jets { Some(data.jet(x, y)?) } else { None };
                col.push((acc.re(), jet, data.rho(x, y)?));
            }
            Ok(col)
        })
        .collect::<Result<_>>()?;

    let mut rows = Vec::with_capacity(spec.nx * spec.ny);
    for j in 0..spec.ny {
        for col in &columns {
            rows.push(col[j]);
        }
    }
    Ok(assemble(spec, xs, ys, rows, Arc::new(data.clone())))
}
