//! Paracomplex (split-complex) numbers `x + j y` with `j² = 1`.
//!
//! Every elementary function is evaluated in the idempotent basis
//! `e± = (1 ± j)/2`, where `z = u e⁺ + v e⁻` with `u = x + y`, `v = x - y`
//! and multiplication acts componentwise. A real-analytic `f` then extends
//! as `f(z) = f(u) e⁺ + f(v) e⁻`.

use std::fmt;
use std::iter::Sum;
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Default central-difference step.
pub const DEFAULT_FD_STEP: f64 = 1e-5;

#[derive(Debug, Clone, Copy, PartialEq, Error)]
pub enum ParaError {
    #[error("division by a null-cone element {0}")]
    ZeroDivisor(ParaComplex),
    #[error("{func} undefined at {z}")]
    Domain { func: &'static str, z: ParaComplex },
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct ParaComplex {
    pub re: f64,
    pub im: f64,
}

/// Idempotent (null) coordinates of a paracomplex number.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct NullPair {
    pub u: f64,
    pub v: f64,
}

impl NullPair {
    pub const fn new(u: f64, v: f64) -> Self {
        NullPair { u, v }
    }
}

impl From<ParaComplex> for NullPair {
    fn from(z: ParaComplex) -> Self {
        z.null()
    }
}

impl From<NullPair> for ParaComplex {
    fn from(p: NullPair) -> Self {
        ParaComplex::from_null(p.u, p.v)
    }
}

impl From<f64> for ParaComplex {
    fn from(x: f64) -> Self {
        ParaComplex::new(x, 0.0)
    }
}

impl ParaComplex {
    pub const ZERO: ParaComplex = ParaComplex { re: 0.0, im: 0.0 };
    pub const ONE: ParaComplex = ParaComplex { re: 1.0, im: 0.0 };
    pub const J: ParaComplex = ParaComplex { re: 0.0, im: 1.0 };

    pub const fn new(re: f64, im: f64) -> Self {
        ParaComplex { re, im }
    }

    pub fn from_null(u: f64, v: f64) -> Self {
        ParaComplex::new(0.5 * (u + v), 0.5 * (u - v))
    }

    pub fn null(self) -> NullPair {
        NullPair::new(self.re + self.im, self.re - self.im)
    }

    pub fn conj(self) -> Self {
        ParaComplex::new(self.re, -self.im)
    }

    /// `z z̄ = re² - im²`, computed as `u v` for accuracy near the null cone.
    pub fn sq_norm(self) -> f64 {
        (self.re + self.im) * (self.re - self.im)
    }

    pub fn is_finite(self) -> bool {
        self.re.is_finite() && self.im.is_finite()
    }

    /// Multiplication by `j` swaps the components.
    pub fn mul_j(self) -> Self {
        ParaComplex::new(self.im, self.re)
    }

    /// Applies a real function in the idempotent split.
    pub fn map_split(self, f: impl Fn(f64) -> f64) -> Self {
        let p = self.null();
        ParaComplex::from_null(f(p.u), f(p.v))
    }

    fn try_map_split(
        self,
        func: &'static str,
        f: impl Fn(f64) -> Option<f64>,
    ) -> Result<Self, ParaError> {
        let p = self.null();
        match (f(p.u), f(p.v)) {
            (Some(a), Some(b)) => Ok(ParaComplex::from_null(a, b)),
            _ => Err(ParaError::Domain { func, z: self }),
        }
    }

    pub fn recip(self) -> Result<Self, ParaError> {
        let p = self.null();
        let scale = p.u.abs() + p.v.abs();
        if p.u.abs() <= f64::EPSILON * scale || p.v.abs() <= f64::EPSILON * scale || scale == 0.0 {
            return Err(ParaError::ZeroDivisor(self));
        }
        Ok(ParaComplex::from_null(1.0 / p.u, 1.0 / p.v))
    }

    pub fn checked_div(self, rhs: Self) -> Result<Self, ParaError> {
        Ok(self * rhs.recip()?)
    }

    pub fn powi(self, n: i32) -> Self {
        let p = self.null();
        ParaComplex::from_null(p.u.powi(n), p.v.powi(n))
    }

    pub fn exp(self) -> Self {
        self.map_split(f64::exp)
    }

    pub fn cosh(self) -> Self {
        self.map_split(f64::cosh)
    }

    pub fn sinh(self) -> Self {
        self.map_split(f64::sinh)
    }

    pub fn tanh(self) -> Self {
        self.map_split(f64::tanh)
    }

    pub fn cos(self) -> Self {
        self.map_split(f64::cos)
    }

    pub fn sin(self) -> Self {
        self.map_split(f64::sin)
    }

    /// Fails only at poles, where `cos u · cos v = 0`.
    pub fn tan(self) -> Result<Self, ParaError> {
        self.try_map_split("tan", |t| {
            let c = t.cos();
            (c.abs() > 1e-14).then(|| t.sin() / c)
        })
    }

    /// `tan` restricted to the principal strip `|re ± im| < π/2`.
    pub fn tan_strict(self) -> Result<Self, ParaError> {
        let half_pi = std::f64::consts::FRAC_PI_2;
        self.try_map_split("tan", |t| (t.abs() < half_pi).then(|| t.tan()))
    }

    pub fn ln(self) -> Result<Self, ParaError> {
        self.try_map_split("ln", |t| (t > 0.0).then(|| t.ln()))
    }

    pub fn sqrt(self) -> Result<Self, ParaError> {
        self.try_map_split("sqrt", |t| (t >= 0.0).then(|| t.sqrt()))
    }
}

/// `½(∂ₓf + j∂_y f)` by central differences.
pub fn wirtinger_dz<E>(
    f: impl Fn(ParaComplex) -> Result<ParaComplex, E>,
    z: ParaComplex,
    step: f64,
) -> Result<ParaComplex, E> {
    let (fx, fy) = partials(&f, z, step)?;
    Ok((fx + fy.mul_j()) * 0.5)
}

/// `½(∂ₓf - j∂_y f)` by central differences.
pub fn wirtinger_dzbar<E>(
    f: impl Fn(ParaComplex) -> Result<ParaComplex, E>,
    z: ParaComplex,
    step: f64,
) -> Result<ParaComplex, E> {
    let (fx, fy) = partials(&f, z, step)?;
    Ok((fx - fy.mul_j()) * 0.5)
}

fn partials<E>(
    f: &impl Fn(ParaComplex) -> Result<ParaComplex, E>,
    z: ParaComplex,
    h: f64,
) -> Result<(ParaComplex, ParaComplex), E> {
    let dx = ParaComplex::new(h, 0.0);
    let dy = ParaComplex::new(0.0, h);
    let fx = (f(z + dx)? - f(z - dx)?) * (0.5 / h);
    let fy = (f(z + dy)? - f(z - dy)?) * (0.5 / h);
    Ok((fx, fy))
}

impl fmt::Display for ParaComplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.im.is_sign_negative() {
            write!(f, "{}-{}j", self.re, -self.im)
        } else {
            write!(f, "{}+{}j", self.re, self.im)
        }
    }
}

impl Add for ParaComplex {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        ParaComplex::new(self.re + rhs.re, self.im + rhs.im)
    }
}

impl Sub for ParaComplex {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        ParaComplex::new(self.re - rhs.re, self.im - rhs.im)
    }
}

impl Mul for ParaComplex {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        ParaComplex::new(
            self.re * rhs.re + self.im * rhs.im,
            self.re * rhs.im + self.im * rhs.re,
        )
    }
}

impl Neg for ParaComplex {
    type Output = Self;
    fn neg(self) -> Self {
        ParaComplex::new(-self.re, -self.im)
    }
}

impl Mul<f64> for ParaComplex {
    type Output = Self;
    fn mul(self, rhs: f64) -> Self {
        ParaComplex::new(self.re * rhs, self.im * rhs)
    }
}

impl Mul<ParaComplex> for f64 {
    type Output = ParaComplex;
    fn mul(self, rhs: ParaComplex) -> ParaComplex {
        rhs * self
    }
}

impl Div<f64> for ParaComplex {
    type Output = Self;
    fn div(self, rhs: f64) -> Self {
        ParaComplex::new(self.re / rhs, self.im / rhs)
    }
}

impl Add<f64> for ParaComplex {
    type Output = Self;
    fn add(self, rhs: f64) -> Self {
        ParaComplex::new(self.re + rhs, self.im)
    }
}

impl Sub<f64> for ParaComplex {
    type Output = Self;
    fn sub(self, rhs: f64) -> Self {
        ParaComplex::new(self.re - rhs, self.im)
    }
}

impl AddAssign for ParaComplex {
    fn add_assign(&mut self, rhs: Self) {
        *self = *self + rhs;
    }
}

impl SubAssign for ParaComplex {
    fn sub_assign(&mut self, rhs: Self) {
        *self = *self - rhs;
    }
}

impl MulAssign for ParaComplex {
    fn mul_assign(&mut self, rhs: Self) {
        *self = *self * rhs;
    }
}

impl Sum for ParaComplex {
    fn sum<I: Iterator<Item = Self>>(iter: I) -> Self {
        iter.fold(ParaComplex::ZERO, Add::add)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> ParaComplex {
        ParaComplex::new(re, im)
    }

    #[test]
    fn j_squared_is_one() {
        assert_eq!(ParaComplex::J * ParaComplex::J, ParaComplex::ONE);
        assert_eq!(c(1.0, 1.0) * c(1.0, -1.0), ParaComplex::ZERO);
        assert_eq!(c(2.0, 1.0) + c(-2.0, -1.0), ParaComplex::ZERO);
    }

    #[test]
    fn division() {
        assert_eq!(ParaComplex::ONE.checked_div(ParaComplex::J).unwrap(), ParaComplex::J);
        assert_eq!(c(4.0, 2.0).checked_div(c(2.0, 0.0)).unwrap(), c(2.0, 1.0));
        assert!(matches!(
            ParaComplex::ONE.checked_div(c(1.0, 1.0)),
            Err(ParaError::ZeroDivisor(_))
        ));
        assert!(ParaComplex::ONE.checked_div(ParaComplex::ZERO).is_err());
    }

    #[test]
    fn conj_and_norm() {
        assert_eq!(c(1.0, 2.0).conj(), c(1.0, -2.0));
        assert_eq!(c(1.0, 2.0).sq_norm(), -3.0);
        let e = (ParaComplex::J * 0.7).exp();
        assert!((e.sq_norm() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn euler_formula() {
        assert_eq!(ParaComplex::ZERO.exp(), ParaComplex::ONE);
        let t = 0.3;
        let e = (ParaComplex::J * t).exp();
        assert!((e.re - t.cosh()).abs() < 1e-15);
        assert!((e.im - t.sinh()).abs() < 1e-15);
    }

    #[test]
    fn tan_of_j_multiple() {
        let t = (ParaComplex::J * 0.5).tan().unwrap();
        assert!(t.re.abs() < 1e-15);
        assert!((t.im - 0.5f64.tan()).abs() < 1e-15);
    }

    #[test]
    fn tan_poles() {
        let half_pi = std::f64::consts::FRAC_PI_2;
        assert!(c(half_pi, 0.0).tan().is_err());
        assert!(c(1.0, 0.9).tan().is_ok());
        assert!(c(1.0, 0.9).tan_strict().is_err());
    }

    #[test]
    fn null_round_trip() {
        let z = c(0.3, -1.7);
        let back = ParaComplex::from(z.null());
        assert!((back - z).re.abs() <= 4.0 * f64::EPSILON);
        assert!((back - z).im.abs() <= 4.0 * f64::EPSILON);
        let w = ParaComplex::new(0.25, -1.5);
        assert_eq!(ParaComplex::from(w.null()), w);
    }

    #[test]
    fn wirtinger_examples() {
        let sq = |z: ParaComplex| Ok::<_, ParaError>(z * z);
        let d = wirtinger_dz(sq, c(1.0, 1.0), DEFAULT_FD_STEP).unwrap();
        assert!((d - c(2.0, 2.0)).re.abs() < 1e-9 && (d - c(2.0, 2.0)).im.abs() < 1e-9);

        let d = wirtinger_dz(|z: ParaComplex| Ok::<_, ParaError>(z.exp()), ParaComplex::ZERO, 1e-5)
            .unwrap();
        assert!((d.re - 1.0).abs() < 1e-9 && d.im.abs() < 1e-9);

        let cj = |z: ParaComplex| Ok::<_, ParaError>(z.conj());
        let z = c(0.4, -2.0);
        let d = wirtinger_dz(cj, z, 1e-5).unwrap();
        let db = wirtinger_dzbar(cj, z, 1e-5).unwrap();
        assert!(d.re.abs() < 1e-9 && d.im.abs() < 1e-9);
        assert!((db.re - 1.0).abs() < 1e-9 && db.im.abs() < 1e-9);
    }
}
