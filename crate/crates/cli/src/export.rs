//! Text artifacts. Every float is written with 17 significant digits so
//! identical jobs give byte-identical files.

use std::fmt::Write as _;
use std::io;
use std::path::Path;

use minlab_core::singular::SingularCurve;
use minlab_core::wrep::SurfaceGrid;
use serde::Serialize;
use serde_json::ser::Formatter;

pub fn fmt17(v: f64) -> String {
    format!("{v:.16e}")
}

/// Compact JSON with fixed-width floats.
struct Fixed17;

impl Formatter for Fixed17 {
    fn write_f64<W: ?Sized + io::Write>(&mut self, w: &mut W, v: f64) -> io::Result<()> {
        w.write_all(fmt17(v).as_bytes())
    }

    fn write_f32<W: ?Sized + io::Write>(&mut self, w: &mut W, v: f32) -> io::Result<()> {
        self.write_f64(w, f64::from(v))
    }
}

pub fn to_json<T: Serialize>(value: &T) -> String {
    let mut buf = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut buf, Fixed17);
    value.serialize(&mut ser).expect("report serializes");
    buf.push(b'\n');
    String::from_utf8(buf).expect("JSON is UTF-8")
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> io::Result<()> {
    std::fs::write(path, to_json(value))
}

/// A grid cell is dropped when a corner is non-finite, `ρ` changes sign
/// across it, or a corner lies in the singular band.
pub fn singular_cells(grid: &SurfaceGrid, band: f64) -> Vec<bool> {
    let mask = grid.singular_mask(band);
    let mut out = Vec::with_capacity((grid.nx - 1) * (grid.ny - 1));
    for j in 0..grid.ny - 1 {
        for i in 0..grid.nx - 1 {
            let ks = [grid.index(i, j), grid.index(i + 1, j), grid.index(i + 1, j + 1), grid.index(i, j + 1)];
            let bad = ks.iter().any(|&k| mask[k] || !grid.points[k].is_finite());
            let pos = ks.iter().filter(|&&k| grid.rho[k] > 0.0).count();
            out.push(bad || (pos != 0 && pos != 4));
        }
    }
    out
}

/// OBJ mesh: vertices `v ξ₁ ξ₂ ξ₀`, two triangles per kept cell.
pub fn obj_string(grid: &SurfaceGrid, band: f64) -> String {
    let cells = singular_cells(grid, band);
    let mut s = String::new();
    s.push_str("# signature ++-\n");
    let _ = writeln!(s, "# surface {}", grid.source.label());
    let _ = writeln!(s, "# vertices (xi1, xi2, xi0); grid {}x{}", grid.nx, grid.ny);
    let mut index = vec![0usize; grid.len()];
    let mut next = 1;
    for (k, p) in grid.points.iter().enumerate() {
        if p.is_finite() {
            let _ = writeln!(s, "v {} {} {}", fmt17(p.x1), fmt17(p.x2), fmt17(p.x0));
            index[k] = next;
            next += 1;
        }
    }
    let mut dropped = 0;
    for j in 0..grid.ny - 1 {
        for i in 0..grid.nx - 1 {
            if cells[j * (grid.nx - 1) + i] {
                dropped += 1;
                continue;
            }
            let [a, b, c, d] =
                [grid.index(i, j), grid.index(i + 1, j), grid.index(i + 1, j + 1), grid.index(i, j + 1)].map(|k| index[k]);
            let _ = writeln!(s, "f {a} {b} {c}");
            let _ = writeln!(s, "f {a} {c} {d}");
        }
    }
    let _ = writeln!(s, "# singular cells omitted: {dropped}");
    s
}

pub fn csv_string(grid: &SurfaceGrid) -> String {
    let mut s = String::from("x,y,F1,F2,F0,rho\n");
    for (k, p) in grid.points.iter().enumerate() {
        let (x, y) = grid.coords(k);
        let row = [x, y, p.x1, p.x2, p.x0, grid.rho[k]].map(fmt17);
        s.push_str(&row.join(","));
        s.push('\n');
    }
    s
}

/// Polylines as `curve,index,x,y`.
pub fn polylines_csv(curves: &[SingularCurve]) -> String {
    let mut s = String::from("curve,index,x,y\n");
    for (c, curve) in curves.iter().enumerate() {
        for (i, &(x, y)) in curve.points.iter().enumerate() {
            let _ = writeln!(s, "{c},{i},{},{}", fmt17(x), fmt17(y));
        }
    }
    s
}
