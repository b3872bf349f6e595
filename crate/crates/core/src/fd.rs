//! Central finite-difference stencils on seven points.

use std::ops::{Add, Mul, Sub};

use crate::minkowski::Vec21;
use crate::paracomplex::ParaComplex;

/// Values that can be combined linearly by a stencil.
pub trait Linear: Copy + Add<Output = Self> + Sub<Output = Self> + Mul<f64, Output = Self> {
    fn zero() -> Self;
}

impl Linear for f64 {
    fn zero() -> Self {
        0.0
    }
}

impl Linear for Vec21 {
    fn zero() -> Self {
        Vec21::ZERO
    }
}

impl Linear for ParaComplex {
    fn zero() -> Self {
        ParaComplex::ZERO
    }
}

// Weights for offsets -3..=3 and the constant multiplying h^order below.
const D1: ([f64; 7], f64) = ([-1.0, 9.0, -45.0, 0.0, 45.0, -9.0, 1.0], 60.0);
const D2: ([f64; 7], f64) = ([2.0, -27.0, 270.0, -490.0, 270.0, -27.0, 2.0], 180.0);
const D3: ([f64; 7], f64) = ([1.0, -8.0, 13.0, 0.0, -13.0, 8.0, -1.0], 8.0);
const D4: ([f64; 7], f64) = ([-1.0, 12.0, -39.0, 56.0, -39.0, 12.0, -1.0], 6.0);

/// `order`-th derivative of `f` at `x` with step `h` (orders 1 to 4).
///
/// Orders 1 and 2 are sixth-order accurate, 3 and 4 fourth-order.
pub fn derivative<T: Linear, E>(
    f: impl Fn(f64) -> Result<T, E>,
    x: f64,
    h: f64,
    order: u32,
) -> Result<T, E> {
    let (w, denom) = match order {
        1 => D1,
        2 => D2,
        3 => D3,
        4 => D4,
        _ => panic!("finite-difference order {order} not supported"),
    };
    let mut acc = T::zero();
    for (k, wk) in w.iter().enumerate() {
        if *wk != 0.0 {
            acc = acc + f(x + (k as f64 - 3.0) * h)? * *wk;
        }
    }
    Ok(acc * (1.0 / (denom * h.powi(order as i32))))
}

/// All derivatives of orders 1 to 3 from one set of seven samples.
pub fn derivatives3<T: Linear, E>(
    f: impl Fn(f64) -> Result<T, E>,
    x: f64,
    h: f64,
) -> Result<[T; 3], E> {
    let mut s = [T::zero(); 7];
    for (k, sk) in s.iter_mut().enumerate() {
        *sk = f(x + (k as f64 - 3.0) * h)?;
    }
    let apply = |(w, denom): ([f64; 7], f64), p: i32| {
        let mut acc = T::zero();
        for k in 0..7 {
            acc = acc + s[k] * w[k];
        }
        acc * (1.0 / (denom * h.powi(p)))
    };
    Ok([apply(D1, 1), apply(D2, 2), apply(D3, 3)])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn polynomial_oracle() {
        // Exact on polynomials up to the stencil's degree.
        let p = |x: f64| Ok::<_, ()>(1.0 + x - 2.0 * x.powi(2) + 0.5 * x.powi(3) + 0.25 * x.powi(4));
        let x0: f64 = 0.3;
        let d1 = 1.0 - 4.0 * x0 + 1.5 * x0 * x0 + x0.powi(3);
        let d2 = -4.0 + 3.0 * x0 + 3.0 * x0 * x0;
        let d3 = 3.0 + 6.0 * x0;
        let d4 = 6.0;
        let h = 0.1;
        assert!((derivative(p, x0, h, 1).unwrap() - d1).abs() < 1e-12);
        assert!((derivative(p, x0, h, 2).unwrap() - d2).abs() < 1e-11);
        assert!((derivative(p, x0, h, 3).unwrap() - d3).abs() < 1e-10);
        assert!((derivative(p, x0, h, 4).unwrap() - d4).abs() < 1e-9);
        let all = derivatives3(p, x0, h).unwrap();
        assert!((all[0] - d1).abs() < 1e-12);
        assert!((all[1] - d2).abs() < 1e-11);
        assert!((all[2] - d3).abs() < 1e-10);
    }

    #[test]
    fn sine() {
        let f = |x: f64| Ok::<_, ()>(x.sin());
        let x = 0.7;
        assert!((derivative(f, x, 1e-2, 1).unwrap() - x.cos()).abs() < 1e-12);
        assert!((derivative(f, x, 1e-2, 3).unwrap() + x.cos()).abs() < 1e-8);
    }
}
