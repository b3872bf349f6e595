//! Real-analytic branch functions that stay smooth through `s = 0`.
//!
//! `cosh_s(s, t) = cosh(√s t)` and `sinh_s(s, t) = sinh(√s t)/√s`, read as
//! `cos(√-s t)` and `sin(√-s t)/√-s` for negative `s`.

const SERIES_CUT: f64 = 1e-4;

pub fn cosh_s(s: f64, t: f64) -> f64 {
    let w = s * t * t;
    if w.abs() < SERIES_CUT {
        1.0 + w / 2.0 + w * w / 24.0 + w * w * w / 720.0
    } else if s > 0.0 {
        (s.sqrt() * t).cosh()
    } else {
        ((-s).sqrt() * t).cos()
    }
}

pub fn sinh_s(s: f64, t: f64) -> f64 {
    let w = s * t * t;
    if w.abs() < SERIES_CUT {
        t * (1.0 + w / 6.0 + w * w / 120.0 + w * w * w / 5040.0)
    } else if s > 0.0 {
        let r = s.sqrt();
        (r * t).sinh() / r
    } else {
        let r = (-s).sqrt();
        (r * t).sin() / r
    }
}

/// `Σ tⁿ/(2n+3)! = (sinh √t - √t)/√t³`.
pub fn sinh_remainder(t: f64) -> f64 {
    if t.abs() < 0.5 {
        let mut term = 1.0 / 6.0;
        let mut sum = term;
        for n in 1..12 {
            let k = (2 * n + 3) as f64;
            term *= t / (k * (k - 1.0));
            sum += term;
        }
        sum
    } else if t > 0.0 {
        let r = t.sqrt();
        (r.sinh() - r) / (r * r * r)
    } else {
        let r = (-t).sqrt();
        (r - r.sin()) / (r * r * r)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn branches_agree_across_cut() {
        for &s in &[-2.0, -1e-6, 0.0, 1e-6, 3.0] {
            for &t in &[-1.3, 0.0, 0.02, 0.9] {
                let (c, sh) = (cosh_s(s, t), sinh_s(s, t));
                let (ce, se) = if s > 0.0 {
                    let r: f64 = f64::sqrt(s);
                    ((r * t).cosh(), (r * t).sinh() / r)
                } else if s < 0.0 {
                    let r: f64 = f64::sqrt(-s);
                    ((r * t).cos(), (r * t).sin() / r)
                } else {
                    (1.0, t)
                };
                assert!((c - ce).abs() < 1e-13, "cosh_s({s},{t})");
                assert!((sh - se).abs() < 1e-13, "sinh_s({s},{t})");
            }
        }
    }

    #[test]
    fn remainder_continuity() {
        for &t in &[-0.5, 0.5] {
            let a = sinh_remainder(t * (1.0 - 1e-12));
            let b = sinh_remainder(t * (1.0 + 1e-12));
            assert!((a - b).abs() < 1e-13);
        }
        assert!((sinh_remainder(0.0) - 1.0 / 6.0).abs() < 1e-16);
        let r: f64 = 2.0;
        assert!((sinh_remainder(4.0) - (r.sinh() - r) / 8.0).abs() < 1e-15);
    }
}
