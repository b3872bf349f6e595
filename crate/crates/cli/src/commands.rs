use std::path::{Path, PathBuf};
use std::sync::Arc;

use minlab_core::checks::{
    affine_minimal_surface, default_null_rect, gauss_equation, gauss_equation_fd, grid_points, kappa_constancy,
    planar_curvature_lines, AffineOutcome, VerificationReport,
};
use minlab_core::deform::{self, Branch};
use minlab_core::singular::{self, is_table_family, swallowtail_table, SwallowtailScan};
use minlab_core::wrep::{self, conjugate, linspace, GridSpec, Immersion, Rect, SurfaceGrid};
use minlab_core::{ParaComplex, Vec21};
use rayon::prelude::*;
use serde::Serialize;

use crate::config::{CommandKind, JobConfig, SurfaceSpec, Tolerances};
use crate::export;
use crate::CliError;

/// Result of a job: whether it passed and which files it wrote.
#[derive(Debug, Clone, Default)]
pub struct Outcome {
    pub pass: bool,
    pub files: Vec<PathBuf>,
    pub lines: Vec<String>,
}

pub fn run(cfg: &JobConfig) -> Result<Outcome, CliError> {
    cfg.validate()?;
    match cfg.command {
        CommandKind::Generate => generate(cfg),
        CommandKind::Verify => verify(cfg),
        CommandKind::Singular => singular_cmd(cfg),
        CommandKind::Deform => deform_cmd(cfg),
    }
}

fn output_dir(cfg: &JobConfig) -> Result<PathBuf, CliError> {
    let dir = cfg.output.dir.clone();
    std::fs::create_dir_all(&dir).map_err(|e| CliError::Io(format!("{}: {e}", dir.display())))?;
    Ok(dir)
}

fn write(path: &Path, text: &str, files: &mut Vec<PathBuf>) -> Result<(), CliError> {
    std::fs::write(path, text).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    files.push(path.to_path_buf());
    Ok(())
}

/// Integrates on the grid; if a sample fails (a pole of `h` on a grid
/// point, say) falls back to pointwise evaluation with the failed samples
/// set to NaN, which drops them from meshes.
fn surface_grid(surface: &SurfaceSpec, spec: &GridSpec) -> Result<SurfaceGrid, CliError> {
    let (fast, source): (_, Arc<dyn Immersion>) = match surface {
        SurfaceSpec::Family { branch, theta } => {
            (deform::family_surface(*branch, *theta, spec), Arc::new(deform::family_member(*branch, *theta)?))
        }
        _ => {
            let data = surface.data()?;
            (wrep::integrate(&data, spec), Arc::new(data))
        }
    };
    match fast {
        Ok(g) => Ok(g),
        Err(_) => Ok(tolerant_grid(source, spec)?),
    }
}

pub fn tolerant_grid(source: Arc<dyn Immersion>, spec: &GridSpec) -> Result<SurfaceGrid, CliError> {
    spec.validate()?;
    let (xs, ys) = (spec.xs(), spec.ys());
    let nan = Vec21::new(f64::NAN, f64::NAN, f64::NAN);
    let rows: Vec<(Vec21, f64)> = (0..spec.nx * spec.ny)
        .into_par_iter()
        .map(|k| {
            let (x, y) = (xs[k % spec.nx], ys[k / spec.nx]);
            let p = source.point(x, y).unwrap_or(nan);
            let r = source.rho(x, y).unwrap_or(f64::NAN);
            (p, r)
        })
        .collect();
    let (points, rho) = rows.into_iter().unzip();
    Ok(SurfaceGrid { nx: spec.nx, ny: spec.ny, xs, ys, points, jets: None, rho, source })
}

fn write_mesh(grid: &SurfaceGrid, cfg: &JobConfig, dir: &Path, stem: &str, files: &mut Vec<PathBuf>) -> Result<(), CliError> {
    if cfg.format.obj {
        write(&dir.join(format!("{stem}.obj")), &export::obj_string(grid, cfg.tolerances.singular_band), files)?;
    }
    if cfg.format.csv {
        write(&dir.join(format!("{stem}.csv")), &export::csv_string(grid), files)?;
    }
    Ok(())
}

fn generate(cfg: &JobConfig) -> Result<Outcome, CliError> {
    let spec = GridSpec::new(cfg.grid.nx, cfg.grid.ny, cfg.domain()).without_jets();
    let grid = surface_grid(&cfg.surface, &spec)?;
    let dir = output_dir(cfg)?;
    let mut out = Outcome { pass: true, ..Default::default() };
    write_mesh(&grid, cfg, &dir, &cfg.stem(), &mut out.files)?;
    let dropped = export::singular_cells(&grid, cfg.tolerances.singular_band).iter().filter(|c| **c).count();
    out.lines.push(format!(
        "{}: {}x{} samples, {dropped} singular cells omitted",
        cfg.surface.label(),
        grid.nx,
        grid.ny
    ));
    Ok(out)
}

#[derive(Debug, Clone, Serialize)]
pub struct CheckEntry {
    pub name: String,
    pub pass: bool,
    pub max_residual: Option<f64>,
    pub tol: Option<f64>,
    pub note: Option<String>,
}

impl CheckEntry {
    fn report(name: &str, r: &VerificationReport, tol: f64) -> Self {
        CheckEntry {
            name: name.to_string(),
            pass: r.n > 0 && r.max_residual < tol,
            max_residual: Some(r.max_residual),
            tol: Some(tol),
            note: Some(format!("{} samples, {} excluded", r.n, r.n_excluded)),
        }
    }

    fn error(name: &str, e: impl std::fmt::Display) -> Self {
        CheckEntry { name: name.to_string(), pass: false, max_residual: None, tol: None, note: Some(e.to_string()) }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct VerifyReport {
    pub surface: String,
    pub conjugate: bool,
    pub perturb: Option<f64>,
    pub domain: Rect,
    pub nx: usize,
    pub ny: usize,
    pub checks: Vec<CheckEntry>,
    pub pass: bool,
}

fn verify(cfg: &JobConfig) -> Result<Outcome, CliError> {
    let opts = cfg.verify;
    let t: Tolerances = cfg.tolerances;
    let domain = cfg.domain();
    let mut data = cfg.surface.data()?.with_domain(domain);
    if let Some(eps) = opts.perturb {
        data = data.perturb(eps);
    }
    // η ↦ jη turns the Hopf differential -1/2 into -j/2.
    let q0 = if opts.conjugate {
        data = conjugate(&data);
        ParaComplex::J * -0.5
    } else {
        ParaComplex::new(-0.5, 0.0)
    };
    let grid = wrep::integrate(&data, &GridSpec::new(cfg.grid.nx, cfg.grid.ny, domain))?;
    let mut checks = Vec::new();

    let pts = grid_points(&domain, cfg.grid.nx.min(cfg.grid.ny));
    let hopf: Vec<Option<f64>> = pts
        .iter()
        .map(|&(x, y)| {
            data.hopf(ParaComplex::new(x, y))
                .ok()
                .map(|q| (q.re - q0.re).abs().max((q.im - q0.im).abs()))
                .or(Some(f64::INFINITY))
        })
        .collect();
    checks.push(CheckEntry::report("hopf_normalization", &VerificationReport::from_residuals("hopf", &hopf, t.hopf), t.hopf));

    let q_sq = data.metric_sign() * q0.sq_norm();
    let rho = |x: f64, y: f64| data.rho(x, y);
    checks.push(match gauss_equation_fd(&data.label, &rho, &grid, q_sq, t.gauss) {
        Ok(r) => CheckEntry::report("gauss_equation_fd", &r, t.gauss),
        Err(e) => CheckEntry::error("gauss_equation_fd", e),
    });
    if let (SurfaceSpec::Class(cls), None, false) = (&cfg.surface, opts.perturb, opts.conjugate) {
        if let Some(sol) = cls.conformal() {
            checks.push(CheckEntry::report("gauss_equation", &gauss_equation(&sol, &grid, t.gauss), t.gauss));
        }
    }

    checks.push(match planar_curvature_lines(&grid, t.planarity) {
        Ok(r) => CheckEntry::report("planar_curvature_lines", &r.determinants, t.planarity),
        Err(e) => CheckEntry::error("planar_curvature_lines", e),
    });

    let rect = default_null_rect(&domain);
    if !opts.conjugate {
        let expected = match (&cfg.surface, opts.perturb) {
            (SurfaceSpec::Class(cls), None) => cls.lightlike_curvature(),
            _ => None,
        };
        match kappa_constancy(&data, rect, expected, 16) {
            Ok(r) => {
                let mut e = CheckEntry::report("kappa_constancy", &r.spread, t.kappa_spread);
                e.note = Some(format!("kappa_alpha {}, kappa_beta {}", r.kappa_alpha, r.kappa_beta));
                checks.push(e);
                if let Some(v) = &r.value {
                    checks.push(CheckEntry::report("kappa_value", v, t.kappa_value));
                }
            }
            Err(e) => checks.push(CheckEntry::error("kappa_constancy", e)),
        }
    }

    match affine_minimal_surface(&data, rect, 41) {
        Ok(outcomes) => {
            for (name, o) in ["affine_minimal_alpha", "affine_minimal_beta"].iter().zip(&outcomes) {
                checks.push(match o {
                    AffineOutcome::Fitted { k, report } => {
                        let mut e = CheckEntry::report(name, report, t.affine);
                        e.note = Some(format!("fitted k {k}"));
                        e
                    }
                    AffineOutcome::Straight => CheckEntry {
                        name: name.to_string(),
                        pass: true,
                        max_residual: None,
                        tol: None,
                        note: Some("straight line".into()),
                    },
                });
            }
        }
        Err(e) => checks.push(CheckEntry::error("affine_minimal", e)),
    }

    let pass = checks.iter().all(|c| c.pass);
    let report = VerifyReport {
        surface: data.label.clone(),
        conjugate: opts.conjugate,
        perturb: opts.perturb,
        domain,
        nx: cfg.grid.nx,
        ny: cfg.grid.ny,
        checks,
        pass,
    };
    let dir = output_dir(cfg)?;
    let mut out = Outcome { pass, ..Default::default() };
    write(&dir.join(format!("{}_verify.json", cfg.stem())), &export::to_json(&report), &mut out.files)?;
    for c in &report.checks {
        let res = c.max_residual.map_or("-".to_string(), |r| format!("{r:.3e}"));
        let tol = c.tol.map_or("-".to_string(), |r| format!("{r:.1e}"));
        let note = c.note.as_deref().unwrap_or("");
        out.lines.push(format!("{} {:<24} max {res} (tol {tol}) {note}", if c.pass { "PASS" } else { "FAIL" }, c.name));
    }
    Ok(out)
}

fn singular_cmd(cfg: &JobConfig) -> Result<Outcome, CliError> {
    let res = cfg.singular.resolution;
    let scan: SwallowtailScan = match (&cfg.surface, cfg.grid.domain) {
        (SurfaceSpec::Class(cls), None) if is_table_family(cls) => swallowtail_table(cls, res)?,
        _ => {
            let domain = cfg.domain();
            let data = cfg.surface.data()?.with_domain(domain);
            singular::scan(&data, cfg.surface.label(), domain, res)?
        }
    };
    let dir = output_dir(cfg)?;
    let stem = cfg.stem();
    let mut out = Outcome { pass: true, ..Default::default() };
    write(&dir.join(format!("{stem}_singular.json")), &export::to_json(&scan), &mut out.files)?;
    write(&dir.join(format!("{stem}_polylines.csv")), &export::polylines_csv(&scan.curves), &mut out.files)?;
    out.lines.push(format!(
        "{}: {} curves, {} swallowtails, {} cuspidal edge samples, {} unresolved, {} undefined",
        scan.class,
        scan.curves.len(),
        scan.swallowtails.len(),
        scan.cuspidal,
        scan.unresolved.len(),
        scan.undefined
    ));
    for s in &scan.swallowtails {
        out.lines.push(format!("swallowtail at ({}, {})", export::fmt17(s.x), export::fmt17(s.y)));
    }
    Ok(out)
}

#[derive(Debug, Clone, Serialize)]
pub struct Frame {
    pub index: usize,
    pub theta: f64,
    pub files: Vec<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct Manifest {
    pub branch: Branch,
    pub steps: usize,
    pub domain: Rect,
    pub frames: Vec<Frame>,
}

/// `steps` parameters spanning the branch range, endpoints exact.
pub fn frame_thetas(branch: Branch, steps: usize) -> Vec<f64> {
    let (a, b) = branch.range();
    let mut v = linspace(a, b, steps);
    if let Some(last) = v.last_mut() {
        *last = b;
    }
    v
}

fn deform_cmd(cfg: &JobConfig) -> Result<Outcome, CliError> {
    let SurfaceSpec::Branch(branch) = cfg.surface else {
        return Err(CliError::Config("deform needs a branch".into()));
    };
    let domain = cfg.domain();
    let spec = GridSpec::new(cfg.grid.nx, cfg.grid.ny, domain).without_jets();
    let dir = output_dir(cfg)?.join(format!("{}_frames", cfg.stem()));
    std::fs::create_dir_all(&dir).map_err(|e| CliError::Io(format!("{}: {e}", dir.display())))?;
    let mut out = Outcome { pass: true, ..Default::default() };
    let mut frames = Vec::new();
    for (index, theta) in frame_thetas(branch, cfg.deform.steps).into_iter().enumerate() {
        let grid = surface_grid(&SurfaceSpec::Family { branch, theta }, &spec)?;
        let stem = format!("frame_{index:04}");
        let before = out.files.len();
        write_mesh(&grid, cfg, &dir, &stem, &mut out.files)?;
        let files = out.files[before..]
            .iter()
            .filter_map(|p| p.file_name().map(|n| n.to_string_lossy().into_owned()))
            .collect();
        frames.push(Frame { index, theta, files });
    }
    let manifest = Manifest { branch, steps: cfg.deform.steps, domain, frames };
    write(&dir.join("manifest.json"), &export::to_json(&manifest), &mut out.files)?;
    out.lines.push(format!("{branch}: {} frames in {}", manifest.frames.len(), dir.display()));
    Ok(out)
}
