//! Globally adaptive Gauss–Kronrod (7, 15) quadrature for vector-valued
//! integrands.

use crate::error::{Error, Result};
use crate::fd::Linear;
use crate::minkowski::Vec21;
use crate::paracomplex::ParaComplex;

pub trait Integrable: Linear {
    fn magnitude(&self) -> f64;
}

impl Integrable for f64 {
    fn magnitude(&self) -> f64 {
        self.abs()
    }
}

impl Integrable for Vec21 {
    fn magnitude(&self) -> f64 {
        self.max_abs()
    }
}

impl Integrable for ParaComplex {
    fn magnitude(&self) -> f64 {
        self.re.abs().max(self.im.abs())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadOptions {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_intervals: usize,
}

impl Default for QuadOptions {
    fn default() -> Self {
        QuadOptions { abs_tol: 1e-10, rel_tol: 1e-10, max_intervals: 500 }
    }
}

impl QuadOptions {
    pub fn with_tol(tol: f64) -> Self {
        QuadOptions { abs_tol: tol, rel_tol: tol, ..Default::default() }
    }
}

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_8,
];
// Gauss weights for XGK[1], XGK[3], XGK[5], XGK[7].
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

fn gk15<T: Integrable>(f: &impl Fn(f64) -> Result<T>, a: f64, b: f64) -> Result<(T, f64)> {
    let c = 0.5 * (a + b);
    let r = 0.5 * (b - a);
    let fc = f(c)?;
    let mut kron = fc * WGK[7];
    let mut gauss = fc * WG[3];
    for k in 0..7 {
        let dx = r * XGK[k];
        let s = f(c - dx)? + f(c + dx)?;
        kron = kron + s * WGK[k];
        if k % 2 == 1 {
            gauss = gauss + s * WG[k / 2];
        }
    }
    let err = ((kron - gauss) * r).magnitude();
    Ok((kron * r, err))
}

/// ∫ₐᵇ f with a global error target `max(abs_tol, rel_tol·|I|)`.
pub fn integrate<T: Integrable>(
    f: impl Fn(f64) -> Result<T>,
    a: f64,
    b: f64,
    opts: QuadOptions,
) -> Result<T> {
    if a == b {
        return Ok(T::zero());
    }
    let (v, e) = gk15(&f, a, b)?;
    let mut parts = vec![(a, b, v, e)];
    let mut total = v;
    let mut err = e;
    loop {
        let target = opts.abs_tol.max(opts.rel_tol * total.magnitude());
        if err <= target {
            return Ok(total);
        }
        if parts.len() >= opts.max_intervals || !err.is_finite() {
            return Err(Error::QuadratureFailure { tol: target, estimate: err });
        }
        let worst = parts
            .iter()
            .enumerate()
            .max_by(|x, y| x.1 .3.total_cmp(&y.1 .3))
            .map(|(i, _)| i)
            .unwrap_or(0);
        let (lo, hi, v, e) = parts.swap_remove(worst);
        let mid = 0.5 * (lo + hi);
        let (v1, e1) = gk15(&f, lo, mid)?;
        let (v2, e2) = gk15(&f, mid, hi)?;
        total = total - v + v1 + v2;
        err = err - e + e1 + e2;
        parts.push((lo, mid, v1, e1));
        parts.push((mid, hi, v2, e2));
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn polynomial_exact() {
        let v = integrate(|x| Ok(x.powi(5) - 3.0 * x * x), -1.0, 2.0, QuadOptions::default()).unwrap();
        let exact = (64.0 - 1.0) / 6.0 - (8.0 + 1.0);
        assert!((v - exact).abs() < 1e-13);
    }

    #[test]
    fn peaked_integrand() {
        let v = integrate(|x| Ok(1.0 / (1e-4 + x * x)), -1.0, 1.0, QuadOptions::default()).unwrap();
        let exact = 2.0 * (1.0f64 / 1e-2).atan() / 1e-2;
        assert!(((v - exact) / exact).abs() < 1e-10);
    }

    #[test]
    fn reversed_interval() {
        let a = integrate(|x| Ok(x.exp()), 0.0, 1.0, QuadOptions::default()).unwrap();
        let b = integrate(|x| Ok(x.exp()), 1.0, 0.0, QuadOptions::default()).unwrap();
        assert!((a + b).abs() < 1e-14);
    }

    #[test]
    fn failure_reported() {
        let opts = QuadOptions { max_intervals: 4, ..Default::default() };
        let r = integrate(|x: f64| Ok(x.abs().sqrt().recip()), -1.0, 1.0, opts);
        assert!(matches!(r, Err(Error::QuadratureFailure { .. })));
    }
}
