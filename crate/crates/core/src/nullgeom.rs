//! Null curves in ℝ^{2,1}: decomposition of a surface into its generating
//! curves, pseudo-arclength, the null frame and the lightlike curvature.

use std::sync::Arc;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fd;
use crate::minkowski::Vec21;
use crate::paracomplex::ParaComplex;
use crate::quadrature::{self, QuadOptions};
use crate::wrep::{linspace, Immersion, Jet, WeierstrassData};

pub type CurveFn = Arc<dyn Fn(f64) -> Result<Vec21> + Send + Sync>;

/// Default step for derivatives of a curve's tangent.
pub const CURVE_STEP: f64 = 1e-2;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Parametrization {
    Raw,
    PseudoArclength,
}

#[derive(Clone)]
pub struct NullCurve {
    pub label: String,
    position: CurveFn,
    tangent: CurveFn,
    pub interval: (f64, f64),
    pub parametrization: Parametrization,
    pub closed_form: Option<String>,
    pub step: f64,
}

impl std::fmt::Debug for NullCurve {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("NullCurve")
            .field("label", &self.label)
            .field("interval", &self.interval)
            .field("parametrization", &self.parametrization)
            .field("closed_form", &self.closed_form)
            .finish_non_exhaustive()
    }
}

impl NullCurve {
    pub fn new(label: impl Into<String>, position: CurveFn, tangent: CurveFn, interval: (f64, f64)) -> Self {
        NullCurve {
            label: label.into(),
            position,
            tangent,
            interval,
            parametrization: Parametrization::Raw,
            closed_form: None,
            step: CURVE_STEP,
        }
    }

    /// A curve known only through its position; the tangent is taken by
    /// finite differences.
    pub fn from_position(label: impl Into<String>, position: CurveFn, interval: (f64, f64)) -> Self {
        let p = position.clone();
        let tangent: CurveFn = Arc::new(move |t| fd::derivative(|s| p(s), t, 1e-3, 1));
        NullCurve::new(label, position, tangent, interval)
    }

    /// A curve with tangent `γ′` integrated from `γ(t₀) = 0`.
    pub fn from_tangent(label: impl Into<String>, tangent: CurveFn, interval: (f64, f64)) -> Self {
        let tg = tangent.clone();
        let t0 = interval.0;
        let position: CurveFn = Arc::new(move |t| {
            quadrature::integrate(|s| tg(s), t0, t, QuadOptions::with_tol(1e-13))
        });
        NullCurve::new(label, position, tangent, interval)
    }

    pub fn with_parametrization(mut self, p: Parametrization) -> Self {
        self.parametrization = p;
        self
    }

    pub fn with_closed_form(mut self, tag: impl Into<String>) -> Self {
        self.closed_form = Some(tag.into());
        self
    }

    pub fn with_step(mut self, step: f64) -> Self {
        self.step = step;
        self
    }

    pub fn position(&self, t: f64) -> Result<Vec21> {
        (self.position)(t)
    }

    pub fn tangent(&self, t: f64) -> Result<Vec21> {
        (self.tangent)(t)
    }

    /// `γ′, γ″, γ‴, γ⁗` in the curve's own parameter.
    pub fn derivs(&self, t: f64) -> Result<[Vec21; 4]> {
        let d1 = self.tangent(t)?;
        let [d2, d3, d4] = fd::derivatives3(|s| self.tangent(s), t, self.step)?;
        Ok([d1, d2, d3, d4])
    }

    pub fn samples(&self, n: usize) -> Result<Vec<(f64, Vec21)>> {
        linspace(self.interval.0, self.interval.1, n)
            .into_iter()
            .map(|t| Ok((t, self.position(t)?)))
            .collect()
    }

    /// Largest `|⟨γ′,γ′⟩|/|γ′|²` over `n` samples.
    pub fn null_residual(&self, n: usize) -> Result<f64> {
        let mut worst = 0.0f64;
        for t in linspace(self.interval.0, self.interval.1, n) {
            let d = self.tangent(t)?;
            worst = worst.max(d.norm_sq().abs() / d.euclid_norm().powi(2).max(f64::MIN_POSITIVE));
        }
        Ok(worst)
    }

    /// `t ↦ γ(a t + b)` on the preimage of the interval.
    pub fn affine_reparam(&self, a: f64, b: f64) -> NullCurve {
        let (p, tg) = (self.position.clone(), self.tangent.clone());
        let (lo, hi) = ((self.interval.0 - b) / a, (self.interval.1 - b) / a);
        NullCurve {
            label: format!("{}∘({a}t+{b})", self.label),
            position: Arc::new(move |t| p(a * t + b)),
            tangent: Arc::new(move |t| Ok(tg(a * t + b)? * a)),
            interval: (lo.min(hi), lo.max(hi)),
            parametrization: if a == 1.0 { self.parametrization } else { Parametrization::Raw },
            closed_form: self.closed_form.clone(),
            step: self.step / a.abs(),
        }
    }

    /// `μγ`.
    pub fn scaled(&self, mu: f64) -> NullCurve {
        let (p, tg) = (self.position.clone(), self.tangent.clone());
        NullCurve {
            label: format!("{}·{mu}", self.label),
            position: Arc::new(move |t| Ok(p(t)? * mu)),
            tangent: Arc::new(move |t| Ok(tg(t)? * mu)),
            parametrization: if mu == 1.0 { self.parametrization } else { Parametrization::Raw },
            ..self.clone()
        }
    }

    /// `γ·diag(1, 1, -1)`.
    pub fn time_reflected(&self) -> NullCurve {
        let (p, tg) = (self.position.clone(), self.tangent.clone());
        NullCurve {
            label: format!("{}·diag(1,1,-1)", self.label),
            position: Arc::new(move |t| Ok(p(t)?.flip_time())),
            tangent: Arc::new(move |t| Ok(tg(t)?.flip_time())),
            ..self.clone()
        }
    }
}

/// Cumulative table of `s(t) = ∫ ⟨γ″,γ″⟩^{1/4}` and its inverse.
struct ArclengthTable {
    ts: Vec<f64>,
    ss: Vec<f64>,
    speed: Arc<dyn Fn(f64) -> Result<f64> + Send + Sync>,
    quad: QuadOptions,
}

impl ArclengthTable {
    fn s_of(&self, t: f64) -> Result<f64> {
        let k = self.node(t, &self.ts);
        Ok(self.ss[k] + quadrature::integrate(|r| (self.speed)(r), self.ts[k], t, self.quad)?)
    }

    fn node(&self, v: f64, table: &[f64]) -> usize {
        match table.binary_search_by(|p| p.total_cmp(&v)) {
            Ok(k) => k,
            Err(0) => 0,
            Err(k) => (k - 1).min(table.len() - 1),
        }
    }

    fn t_of(&self, s: f64) -> Result<f64> {
        let k = self.node(s, &self.ss).min(self.ts.len() - 2);
        let (s0, s1) = (self.ss[k], self.ss[k + 1]);
        let mut t = self.ts[k] + (self.ts[k + 1] - self.ts[k]) * (s - s0) / (s1 - s0);
        for _ in 0..30 {
            let dt = (self.s_of(t)? - s) / (self.speed)(t)?;
            t -= dt;
            if dt.abs() <= 1e-15 * (1.0 + t.abs()) {
                break;
            }
        }
        Ok(t)
    }
}

/// Reparametrizes by `ds/dt = ⟨γ″,γ″⟩^{1/4}` with `s(t₀) = t₀`.
///
/// Fails with `Degenerate` if `⟨γ″,γ″⟩ ≤ 0` on the interval.
pub fn pseudo_arclength(curve: &NullCurve) -> Result<NullCurve> {
    const NODES: usize = 128;
    let c = curve.clone();
    let speed: Arc<dyn Fn(f64) -> Result<f64> + Send + Sync> = Arc::new(move |t| {
        let w = fd::derivative(|s| c.tangent(s), t, c.step, 1)?.norm_sq();
        if w > 0.0 {
            Ok(w.powf(0.25))
        } else {
            Err(Error::Degenerate(format!("⟨γ″,γ″⟩ = {w:e} at t = {t}")))
        }
    });
    let (t0, t1) = curve.interval;
    let ts = linspace(t0, t1, NODES + 1);
    let quad = QuadOptions::with_tol(1e-14);
    let pieces: Vec<f64> = ts
        .par_windows(2)
        .map(|w| quadrature::integrate(|r| speed(r), w[0], w[1], quad))
        .collect::<Result<_>>()?;
    let mut ss = Vec::with_capacity(ts.len());
    let mut acc = t0;
    ss.push(acc);
    for p in pieces {
        acc += p;
        ss.push(acc);
    }
    let s1 = acc;
    let table = Arc::new(ArclengthTable { ts, ss, speed, quad });
    let (tp, pos) = (table.clone(), curve.position.clone());
    let (tt, tan) = (table.clone(), curve.tangent.clone());
    Ok(NullCurve {
        label: format!("{}[s]", curve.label),
        position: Arc::new(move |s| pos(tp.t_of(s)?)),
        tangent: Arc::new(move |s| {
            let t = tt.t_of(s)?;
            Ok(tan(t)? / (tt.speed)(t)?)
        }),
        interval: (t0, s1),
        parametrization: Parametrization::PseudoArclength,
        closed_form: curve.closed_form.clone(),
        step: curve.step,
    })
}

/// Null frame along a pseudo-arclength parametrized curve.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NullFrame {
    pub s: f64,
    pub sigma: Vec21,
    pub e: Vec21,
    pub n: Vec21,
    pub kappa: f64,
    /// `max(|ṅ + κe|, |ė + (κ/2)σ - n/2|)`.
    pub structure_residual: f64,
}

/// Solves `⟨n,σ⟩ = -2`, `⟨n,e⟩ = 0`, `⟨n,n⟩ = 0` in the basis `{σ, e, γ⃛}`.
///
/// The two linear conditions leave a line of solutions; the null condition
/// is then (up to rounding) linear along it.
fn null_normal(sigma: Vec21, e: Vec21, g3: Vec21) -> Option<Vec21> {
    let basis = [sigma, e, g3];
    let scale = sigma.euclid_norm() * e.euclid_norm() * g3.euclid_norm();
    if crate::minkowski::det3(sigma, e, g3).abs() <= 1e-10 * scale.max(f64::MIN_POSITIVE) {
        return None;
    }
    let mut gram = [[0.0; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            gram[i][j] = basis[i].inner(basis[j]);
        }
    }
    let (r0, r1) = (Vec21::from_array(gram[0]), Vec21::from_array(gram[1]));
    let k = cross(r0, r1).to_array();
    // Particular solution orthogonal to k.
    let p = crate::minkowski::solve3([gram[0], gram[1], k], [-2.0, 0.0, 0.0])?;
    let quad = |a: [f64; 3], b: [f64; 3]| -> f64 {
        (0..3).map(|i| (0..3).map(|j| a[i] * gram[i][j] * b[j]).sum::<f64>()).sum()
    };
    let (qa, qb, qc) = (quad(k, k), 2.0 * quad(p, k), quad(p, p));
    if qb.abs() <= 1e-12 * (qa.abs() + qc.abs()).max(1.0) {
        return None;
    }
    let lin = -qc / qb;
    let t = if qa.abs() <= 1e-12 * qb.abs() {
        lin
    } else {
        let disc = qb * qb - 4.0 * qa * qc;
        if disc < 0.0 {
            lin
        } else {
            let q = -0.5 * (qb + qb.signum() * disc.sqrt());
            let roots = [q / qa, qc / q];
            if (roots[0] - lin).abs() < (roots[1] - lin).abs() { roots[0] } else { roots[1] }
        }
    };
    let c: Vec<f64> = (0..3).map(|i| p[i] + t * k[i]).collect();
    Some(sigma * c[0] + e * c[1] + g3 * c[2])
}

fn cross(a: Vec21, b: Vec21) -> Vec21 {
    Vec21::new(a.x2 * b.x0 - a.x0 * b.x2, a.x0 * b.x1 - a.x1 * b.x0, a.x1 * b.x2 - a.x2 * b.x1)
}

fn frame_vectors(curve: &NullCurve, s: f64) -> Result<(Vec21, Vec21, Vec21, Vec21)> {
    let [sigma, e, g3, _] = curve.derivs(s)?;
    let n = null_normal(sigma, e, g3).ok_or(Error::FrameAmbiguous(s))?;
    Ok((sigma, e, g3, n))
}

/// The null frame and `κ = ⟨γ⃛,γ⃛⟩` at parameter `s`.
pub fn frame_at(curve: &NullCurve, s: f64) -> Result<NullFrame> {
    if curve.parametrization != Parametrization::PseudoArclength {
        return Err(Error::NotPseudoArclength);
    }
    let (sigma, e, g3, n) = frame_vectors(curve, s)?;
    let ee = e.norm_sq();
    if ee <= 0.0 {
        return Err(Error::Degenerate(format!("⟨γ̈,γ̈⟩ = {ee:e} at s = {s}")));
    }
    let kappa = g3.norm_sq();
    let n_dot = fd::derivative(|r| frame_vectors(curve, r).map(|f| f.3), s, curve.step, 1)?;
    let r1 = (n_dot + e * kappa).max_abs();
    let r2 = (g3 + sigma * (kappa / 2.0) - n * 0.5).max_abs();
    Ok(NullFrame { s, sigma, e, n, kappa, structure_residual: r1.max(r2) })
}

/// Frames at `samples` evenly spaced parameters.
pub fn frame_and_curvature(curve: &NullCurve, samples: usize) -> Result<Vec<NullFrame>> {
    linspace(curve.interval.0, curve.interval.1, samples)
        .into_par_iter()
        .map(|s| frame_at(curve, s))
        .collect()
}

/// Lightlike curvature at a raw parameter, by the chain rule through
/// `dt/ds = ⟨γ″,γ″⟩^{-1/4}`.
pub fn curvature_raw(curve: &NullCurve, t: f64) -> Result<f64> {
    let [d1, d2, d3, d4] = curve.derivs(t)?;
    let w = d2.norm_sq();
    if w <= 0.0 {
        return Err(Error::Degenerate(format!("⟨γ″,γ″⟩ = {w:e} at t = {t}")));
    }
    let w1 = 2.0 * d2.inner(d3);
    let w2 = 2.0 * d3.norm_sq() + 2.0 * d2.inner(d4);
    let phi = w.powf(-0.25);
    let phi1 = -0.25 * w.powf(-1.25) * w1;
    let phi2 = 5.0 / 16.0 * w.powf(-2.25) * w1 * w1 - 0.25 * w.powf(-1.25) * w2;
    let g3 = (d1 * (phi1 * phi1 + phi * phi2) + d2 * (3.0 * phi * phi1) + d3 * (phi * phi)) * phi;
    Ok(g3.norm_sq())
}

/// `κ` at `n` evenly spaced raw parameters.
pub fn curvature_profile(curve: &NullCurve, n: usize) -> Result<Vec<f64>> {
    linspace(curve.interval.0, curve.interval.1, n)
        .into_par_iter()
        .map(|t| curvature_raw(curve, t))
        .collect()
}

/// A rectangle in null coordinates `u = x + y`, `v = x - y`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NullRect {
    pub u0: f64,
    pub v0: f64,
    pub r: f64,
}

impl NullRect {
    pub fn centered(x: f64, y: f64, r: f64) -> Self {
        NullRect { u0: x + y, v0: x - y, r }
    }
}

/// Splits `F` into `α(u) = 2F(u, v₀) - F(u₀, v₀)` and
/// `β(v) = 2F(u₀, v) - F(u₀, v₀)`, so that `F = (α + β)/2`.
pub fn decompose(data: &WeierstrassData, rect: NullRect) -> Result<(NullCurve, NullCurve)> {
    let NullRect { u0, v0, r } = rect;
    for (u, v) in [(u0 - r, v0), (u0 + r, v0), (u0, v0 - r), (u0, v0 + r)] {
        let (x, y) = ((u + v) / 2.0, (u - v) / 2.0);
        if !data.domain.contains(x, y) {
            return Err(Error::GridShape(format!(
                "null rectangle {rect:?} leaves the domain {:?}",
                data.domain
            )));
        }
    }
    let at = |u: f64, v: f64| ((u + v) / 2.0, (u - v) / 2.0);
    let (cx, cy) = at(u0, v0);
    let f0 = data.integrate_point(cx, cy)?;
    let (da, db, dat, dbt) = (data.clone(), data.clone(), data.clone(), data.clone());
    let alpha = NullCurve::new(
        format!("α[{}]", data.label),
        Arc::new(move |u| {
            let (x, y) = at(u, v0);
            Ok(da.integrate_point(x, y)? * 2.0 - f0)
        }),
        Arc::new(move |u| Ok(dat.integrand(ParaComplex::from_null(u, v0))?.plus())),
        (u0 - r, u0 + r),
    );
    let beta = NullCurve::new(
        format!("β[{}]", data.label),
        Arc::new(move |v| {
            let (x, y) = at(u0, v);
            Ok(db.integrate_point(x, y)? * 2.0 - f0)
        }),
        Arc::new(move |v| Ok(dbt.integrand(ParaComplex::from_null(u0, v))?.minus())),
        (v0 - r, v0 + r),
    );
    Ok((alpha, beta))
}

/// `(μα, β/μ)`.
pub fn scale_curves(alpha: &NullCurve, beta: &NullCurve, mu: f64) -> Result<(NullCurve, NullCurve)> {
    if !(mu > 0.0 && mu.is_finite()) {
        return Err(Error::ParamRange(format!("scaling factor must be positive, got {mu}")));
    }
    Ok((alpha.scaled(mu), beta.scaled(1.0 / mu)))
}

/// The `μ` for which `κ_{μα} = κ_{β/μ}`: `μ = √(κ_α/κ_β)`.
pub fn balance_scaling(kappa_alpha: f64, kappa_beta: f64) -> Result<f64> {
    if kappa_alpha == 0.0 || kappa_beta == 0.0 || kappa_alpha.signum() != kappa_beta.signum() {
        return Err(Error::SignMismatch(kappa_alpha, kappa_beta));
    }
    Ok((kappa_alpha / kappa_beta).sqrt())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum HelixKind {
    Positive,
    Zero,
    Negative,
}

/// The null helices in pseudo-arclength, with `κ = c²`, `0`, `-c²`.
pub fn helix(kind: HelixKind, c: f64) -> Result<NullCurve> {
    if kind != HelixKind::Zero && !(c > 0.0 && c.is_finite()) {
        return Err(Error::ParamRange(format!("helix needs c > 0, got {c}")));
    }
    let (position, tangent, tag): (CurveFn, CurveFn, String) = match kind {
        HelixKind::Positive => {
            let k = c * c;
            (
                Arc::new(move |s| Ok(Vec21::new((c * s).cos(), (c * s).sin(), c * s) / k)),
                Arc::new(move |s| Ok(Vec21::new(-(c * s).sin(), (c * s).cos(), 1.0) / c)),
                format!("helix+({c})"),
            )
        }
        HelixKind::Zero => (
            Arc::new(|s| Ok(Vec21::new(s * s / 2.0, -s.powi(3) / 6.0 + s / 2.0, s.powi(3) / 6.0 + s / 2.0))),
            Arc::new(|s| Ok(Vec21::new(s, -s * s / 2.0 + 0.5, s * s / 2.0 + 0.5))),
            "helix0".to_string(),
        ),
        HelixKind::Negative => {
            let k = -c * c;
            (
                Arc::new(move |s| Ok(Vec21::new(c * s, (c * s).cosh(), (c * s).sinh()) / k)),
                Arc::new(move |s| Ok(Vec21::new(1.0, (c * s).sinh(), (c * s).cosh()) / -c)),
                format!("helix-({c})"),
            )
        }
    };
    Ok(NullCurve::new(tag.clone(), position, tangent, (0.0, 2.0))
        .with_parametrization(Parametrization::PseudoArclength)
        .with_closed_form(tag))
}

/// The curve with `γ′ = (cos θ, sin θ, 1)`, `γ(t₀) = 0`.
pub fn curve_from_angle(theta: impl Fn(f64) -> f64 + Send + Sync + 'static, interval: (f64, f64)) -> NullCurve {
    NullCurve::from_tangent(
        "γ[θ]",
        Arc::new(move |u| {
            let t = theta(u);
            Ok(Vec21::new(t.cos(), t.sin(), 1.0))
        }),
        interval,
    )
}

const ANGLE_STEP: f64 = 1e-2;

type OmegaJet = Arc<dyn Fn(f64) -> Result<[f64; 3]> + Send + Sync>;

/// `ω = θ′` and its first two derivatives, where `θ` is the angle of the
/// normalized tangent `(cos θ, sin θ, 1)`.
///
/// Samples are addressed by the parameter of the source (the curve
/// parameter, or the argument of `θ`).
#[derive(Clone)]
pub struct AngleFunction {
    pub label: String,
    jet: OmegaJet,
    pub interval: (f64, f64),
}

impl std::fmt::Debug for AngleFunction {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("AngleFunction")
            .field("label", &self.label)
            .field("interval", &self.interval)
            .finish_non_exhaustive()
    }
}

impl AngleFunction {
    pub fn from_theta(theta: impl Fn(f64) -> f64 + Send + Sync + 'static, interval: (f64, f64)) -> Self {
        AngleFunction {
            label: "θ".into(),
            jet: Arc::new(move |u| fd::derivatives3(|s| Ok::<_, Error>(theta(s)), u, ANGLE_STEP)),
            interval,
        }
    }

    pub fn from_omega(omega: impl Fn(f64) -> f64 + Send + Sync + 'static, interval: (f64, f64)) -> Self {
        AngleFunction {
            label: "ω".into(),
            jet: Arc::new(move |u| {
                let [d1, d2, _] = fd::derivatives3(|s| Ok::<_, Error>(omega(s)), u, ANGLE_STEP)?;
                Ok([omega(u), d1, d2])
            }),
            interval,
        }
    }

    /// Angle of the normalized tangent `γ′/γ′₀`, differentiated in
    /// `τ = γ₀ - γ₀(t₀)`. If `θ` decreases, the reflection `ξ₂ ↦ -ξ₂` is
    /// applied so that `ω > 0`.
    pub fn from_curve(curve: &NullCurve) -> Self {
        let c = curve.clone();
        AngleFunction {
            label: format!("θ[{}]", curve.label),
            jet: Arc::new(move |u| {
                let [t, t1, t2, t3] = c.derivs(u)?;
                let a = t.x1 * t1.x2 - t.x2 * t1.x1;
                let a1 = t.x1 * t2.x2 - t.x2 * t2.x1;
                let a2 = t1.x1 * t2.x2 + t.x1 * t3.x2 - t1.x2 * t2.x1 - t.x2 * t3.x1;
                let b = t.x1 * t.x1 + t.x2 * t.x2;
                let b1 = 2.0 * (t.x1 * t1.x1 + t.x2 * t1.x2);
                let b2 = 2.0 * (t1.x1 * t1.x1 + t.x1 * t2.x1 + t1.x2 * t1.x2 + t.x2 * t2.x2);
                let p = a / b;
                let p1 = (a1 - p * b1) / b;
                let p2 = (a2 - 2.0 * p1 * b1 - p * b2) / b;
                let q = 1.0 / t.x0;
                let q1 = -t1.x0 * q * q;
                let q2 = -t2.x0 * q * q + 2.0 * t1.x0 * t1.x0 * q * q * q;
                let w = p * q;
                let w_u = p1 * q + p * q1;
                let w_uu = p2 * q + 2.0 * p1 * q1 + p * q2;
                let sign = if w < 0.0 { -1.0 } else { 1.0 };
                Ok([sign * w, sign * w_u * q, sign * q * (w_uu * q + w_u * q1)])
            }),
            interval: curve.interval,
        }
    }

    /// `[ω, ω′, ω″]` at sample parameter `u`.
    pub fn omega_jet(&self, u: f64) -> Result<[f64; 3]> {
        (self.jet)(u)
    }
}

/// `κ = (2ω⁴ - (7/2)ω′² + 2ωω″)/(2ω³)` with `ω = θ′`.
pub fn curvature_from_angle(theta: &AngleFunction, u: f64) -> Result<f64> {
    let [w, w1, w2] = theta.omega_jet(u)?;
    if !(w > 0.0) {
        return Err(Error::Degenerate(format!("θ′ = {w:e} at {u}")));
    }
    Ok((2.0 * w.powi(4) - 3.5 * w1 * w1 + 2.0 * w * w2) / (2.0 * w.powi(3)))
}

/// The surface `F(x, y) = (α(x+y) + β(x-y))/2` of two null curves.
#[derive(Clone, Debug)]
pub struct NullSum {
    pub alpha: NullCurve,
    pub beta: NullCurve,
}

impl Immersion for NullSum {
    fn point(&self, x: f64, y: f64) -> Result<Vec21> {
        Ok((self.alpha.position(x + y)? + self.beta.position(x - y)?) * 0.5)
    }

    fn jet(&self, x: f64, y: f64) -> Result<Jet> {
        let [a1, a2, a3, _] = self.alpha.derivs(x + y)?;
        let [b1, b2, b3, _] = self.beta.derivs(x - y)?;
        let (p1, m1) = ((a1 + b1) * 0.5, (a1 - b1) * 0.5);
        let (p2, m2) = ((a2 + b2) * 0.5, (a2 - b2) * 0.5);
        let (p3, m3) = ((a3 + b3) * 0.5, (a3 - b3) * 0.5);
        Ok(Jet { f_x: p1, f_y: m1, f_xx: p2, f_xy: m2, f_yy: p2, f_xxx: p3, f_xxy: m3, f_xyy: p3, f_yyy: m3 })
    }

    fn rho(&self, x: f64, y: f64) -> Result<f64> {
        let a = self.alpha.tangent(x + y)?;
        let b = self.beta.tangent(x - y)?;
        Ok((a.inner(b).abs() / 2.0).sqrt())
    }

    fn label(&self) -> String {
        format!("({} + {})/2", self.alpha.label, self.beta.label)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cross_product_orthogonal() {
        let a = Vec21::new(1.0, 2.0, 3.0);
        let b = Vec21::new(-0.5, 0.1, 2.0);
        let c = cross(a, b);
        assert!((c.x1 * a.x1 + c.x2 * a.x2 + c.x0 * a.x0).abs() < 1e-14);
        assert!((c.x1 * b.x1 + c.x2 * b.x2 + c.x0 * b.x0).abs() < 1e-14);
    }

    #[test]
    fn null_normal_for_ideal_frame() {
        // σ = (0, 1, 1)/√2·√2 style frame with κ = 3
        let sigma = Vec21::new(0.0, 1.0, 1.0);
        let e = Vec21::new(1.0, 0.0, 0.0);
        let n_true = Vec21::new(0.0, -1.0, 1.0);
        let kappa = 3.0;
        let g3 = (n_true - sigma * kappa) * 0.5;
        let n = null_normal(sigma, e, g3).unwrap();
        assert!((n - n_true).max_abs() < 1e-13, "{n:?}");
    }

    #[test]
    fn balance_rejects_mixed_signs() {
        assert!(matches!(balance_scaling(1.0, -1.0), Err(Error::SignMismatch(..))));
        assert!(balance_scaling(0.0, 1.0).is_err());
        assert_eq!(balance_scaling(4.0, 1.0).unwrap(), 2.0);
    }
}
