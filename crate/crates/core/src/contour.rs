//! Zero-level curves of a function on a rectangle: marching squares, then
//! Newton projection onto the level set.

use std::collections::HashMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::wrep::{linspace, Rect};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Polyline {
    pub points: Vec<(f64, f64)>,
    pub closed: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
enum Edge {
    // (i, j)-(i+1, j)
    H(usize, usize),
    // (i, j)-(i, j+1)
    V(usize, usize),
}

/// Piecewise-linear approximation of `{f = 0}` from an `nx × ny` sample
/// grid. Non-finite samples suppress the cells that touch them.
pub fn marching_squares(f: impl Fn(f64, f64) -> f64 + Sync, domain: Rect, nx: usize, ny: usize) -> Vec<Polyline> {
    let xs = linspace(domain.x0, domain.x1, nx);
    let ys = linspace(domain.y0, domain.y1, ny);
    let vals: Vec<f64> = (0..nx * ny).into_par_iter().map(|k| f(xs[k % nx], ys[k / nx])).collect();
    let at = |i: usize, j: usize| vals[j * nx + i];

    let crossing = |e: Edge| -> (f64, f64) {
        let ((i0, j0), (i1, j1)) = match e {
            Edge::H(i, j) => ((i, j), (i + 1, j)),
            Edge::V(i, j) => ((i, j), (i, j + 1)),
        };
        let (a, b) = (at(i0, j0), at(i1, j1));
        let t = if a == b { 0.5 } else { a / (a - b) };
        (xs[i0] + t * (xs[i1] - xs[i0]), ys[j0] + t * (ys[j1] - ys[j0]))
    };

    let mut segments: Vec<(Edge, Edge)> = Vec::new();
    for j in 0..ny.saturating_sub(1) {
        for i in 0..nx.saturating_sub(1) {
            let c = [at(i, j), at(i + 1, j), at(i + 1, j + 1), at(i, j + 1)];
            if c.iter().any(|v| !v.is_finite()) {
                continue;
            }
            let case = c.iter().enumerate().fold(0u8, |m, (k, v)| m | (((*v > 0.0) as u8) << k));
            let (b, r, t, l) = (Edge::H(i, j), Edge::V(i + 1, j), Edge::H(i, j + 1), Edge::V(i, j));
            let centre_pos = c.iter().sum::<f64>() > 0.0;
            match case {
                0 | 15 => {}
                1 | 14 => segments.push((l, b)),
                2 | 13 => segments.push((b, r)),
                3 | 12 => segments.push((l, r)),
                4 | 11 => segments.push((r, t)),
                6 | 9 => segments.push((b, t)),
                7 | 8 => segments.push((l, t)),
                5 => {
                    if centre_pos {
                        segments.push((l, t));
                        segments.push((b, r));
                    } else {
                        segments.push((l, b));
                        segments.push((r, t));
                    }
                }
                10 => {
                    if centre_pos {
                        segments.push((l, b));
                        segments.push((r, t));
                    } else {
                        segments.push((l, t));
                        segments.push((b, r));
                    }
                }
                _ => unreachable!(),
            }
        }
    }
    stitch(&segments).into_iter().map(|(edges, closed)| Polyline {
        points: edges.into_iter().map(crossing).collect(),
        closed,
    })
    .collect()
}

fn stitch(segments: &[(Edge, Edge)]) -> Vec<(Vec<Edge>, bool)> {
    let mut by_edge: HashMap<Edge, Vec<usize>> = HashMap::new();
    for (k, (a, b)) in segments.iter().enumerate() {
        by_edge.entry(*a).or_default().push(k);
        by_edge.entry(*b).or_default().push(k);
    }
    let mut used = vec![false; segments.len()];
    let mut out = Vec::new();
    let next = |edge: Edge, used: &[bool]| -> Option<usize> {
        by_edge.get(&edge)?.iter().copied().find(|k| !used[*k])
    };
    // Open chains start at edges touched once; closed loops anywhere.
    let mut starts: Vec<usize> = (0..segments.len())
        .filter(|k| {
            let (a, b) = segments[*k];
            by_edge[&a].len() == 1 || by_edge[&b].len() == 1
        })
        .collect();
    starts.extend(0..segments.len());
    for s in starts {
        if used[s] {
            continue;
        }
        used[s] = true;
        let (a, b) = segments[s];
        let (first, mut tail) = if by_edge[&b].len() == 1 { (b, a) } else { (a, b) };
        let mut chain = vec![first, tail];
        while let Some(k) = next(tail, &used) {
            used[k] = true;
            let (p, q) = segments[k];
            tail = if p == tail { q } else { p };
            chain.push(tail);
        }
        let closed = chain.len() > 2 && chain.first() == chain.last();
        if closed {
            chain.pop();
        }
        out.push((chain, closed));
    }
    out
}

/// Projects `p` onto `{f = 0}` along the gradient. Returns `None` if the
/// iteration does not reach `|f| ≤ tol`.
pub fn newton_project(f: &(dyn Fn(f64, f64) -> f64 + Sync), p: (f64, f64), tol: f64) -> Option<(f64, f64)> {
    const H: f64 = 1e-6;
    let (mut x, mut y) = p;
    for _ in 0..30 {
        let v = f(x, y);
        if !v.is_finite() {
            return None;
        }
        if v.abs() <= tol {
            return Some((x, y));
        }
        let gx = (f(x + H, y) - f(x - H, y)) / (2.0 * H);
        let gy = (f(x, y + H) - f(x, y - H)) / (2.0 * H);
        let g2 = gx * gx + gy * gy;
        if !(g2 > 0.0) {
            return None;
        }
        x -= v * gx / g2;
        y -= v * gy / g2;
    }
    let v = f(x, y);
    (v.abs() <= tol).then_some((x, y))
}
