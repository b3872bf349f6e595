//! Vectors of ℝ^{2,1} in component order (ξ₁, ξ₂, ξ₀).

use std::iter::Sum;
use std::ops::{Add, AddAssign, Div, Index, Mul, Neg, Sub, SubAssign};

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Vec21 {
    pub x1: f64,
    pub x2: f64,
    pub x0: f64,
}

impl Vec21 {
    pub const ZERO: Vec21 = Vec21 { x1: 0.0, x2: 0.0, x0: 0.0 };

    pub const fn new(x1: f64, x2: f64, x0: f64) -> Self {
        Vec21 { x1, x2, x0 }
    }

    /// `x1 y1 + x2 y2 - x0 y0`
    pub fn inner(self, o: Self) -> f64 {
        self.x1 * o.x1 + self.x2 * o.x2 - self.x0 * o.x0
    }

    pub fn norm_sq(self) -> f64 {
        self.inner(self)
    }

    pub fn euclid_norm(self) -> f64 {
        (self.x1 * self.x1 + self.x2 * self.x2 + self.x0 * self.x0).sqrt()
    }

    pub fn to_array(self) -> [f64; 3] {
        [self.x1, self.x2, self.x0]
    }

    pub fn from_array(a: [f64; 3]) -> Self {
        Vec21::new(a[0], a[1], a[2])
    }

    pub fn is_finite(self) -> bool {
        self.x1.is_finite() && self.x2.is_finite() && self.x0.is_finite()
    }

    pub fn max_abs(self) -> f64 {
        self.x1.abs().max(self.x2.abs()).max(self.x0.abs())
    }

    /// Reflection in the ξ₀ slot, `diag(1, 1, -1)`.
    pub fn flip_time(self) -> Self {
        Vec21::new(self.x1, self.x2, -self.x0)
    }
}

/// Euclidean determinant of the matrix with columns `a, b, c`.
pub fn det3(a: Vec21, b: Vec21, c: Vec21) -> f64 {
    a.x1 * (b.x2 * c.x0 - b.x0 * c.x2) - a.x2 * (b.x1 * c.x0 - b.x0 * c.x1)
        + a.x0 * (b.x1 * c.x2 - b.x2 * c.x1)
}

/// Solves `M x = r` for a 3×3 system by Cramer's rule; `None` if singular.
pub fn solve3(m: [[f64; 3]; 3], r: [f64; 3]) -> Option<[f64; 3]> {
    let col = |k: usize| Vec21::new(m[0][k], m[1][k], m[2][k]);
    let rv = Vec21::from_array(r);
    let d = det3(col(0), col(1), col(2));
    let scale = (0..3).map(|k| col(k).euclid_norm()).product::<f64>();
    if d.abs() <= 1e-13 * scale || !d.is_finite() {
        return None;
    }
    Some([
        det3(rv, col(1), col(2)) / d,
        det3(col(0), rv, col(2)) / d,
        det3(col(0), col(1), rv) / d,
    ])
}

impl Index<usize> for Vec21 {
    type Output = f64;
    fn index(&self, i: usize) -> &f64 {
        match i {
            0 => &self.x1,
            1 => &self.x2,
            2 => &self.x0,
            _ => panic!("Vec21 index {i} out of range"),
        }
    }
}

impl Add for Vec21 {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        Vec21::new(self.x1 + o.x1, self.x2 + o.x2, self.x0 + o.x0)
    }
}

impl Sub for Vec21 {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        Vec21::new(self.x1 - o.x1, self.x2 - o.x2, self.x0 - o.x0)
    }
}

impl Neg for Vec21 {
    type Output = Self;
    fn neg(self) -> Self {
        Vec21::new(-self.x1, -self.x2, -self.x0)
    }
}

impl Mul<f64> for Vec21 {
    type Output = Self;
    fn mul(self, s: f64) -> Self {
        Vec21::new(self.x1 * s, self.x2 * s, self.x0 * s)
    }
}

impl Mul<Vec21> for f64 {
    type Output = Vec21;
    fn mul(self, v: Vec21) -> Vec21 {
        v * self
    }
}

impl Div<f64> for Vec21 {
    type Output = Self;
    fn div(self, s: f64) -> Self {
        Vec21::new(self.x1 / s, self.x2 / s, self.x0 / s)
    }
}

impl AddAssign for Vec21 {
    fn add_assign(&mut self, o: Self) {
        *self = *self + o;
    }
}

impl SubAssign for Vec21 {
    fn sub_assign(&mut self, o: Self) {
        *self = *self - o;
    }
}

impl Sum for Vec21 {
    fn sum<I: Iterator<Item = Self>>(iter: I) -> Self {
        iter.fold(Vec21::ZERO, Add::add)
    }
}
