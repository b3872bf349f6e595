//! `minlab` command-line front end.

pub mod commands;
pub mod config;
pub mod export;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use minlab_core::catalog::{parse_params, SurfaceClass};
use minlab_core::deform::Branch;
use minlab_core::wrep::Rect;
use thiserror::Error;

use config::{CommandKind, JobConfig, SurfaceSpec};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("usage: {0}")]
    Usage(String),
    #[error("config: {0}")]
    Config(String),
    #[error("io: {0}")]
    Io(String),
    #[error(transparent)]
    Core(#[from] minlab_core::Error),
}

pub const EXIT_PASS: u8 = 0;
pub const EXIT_FAIL: u8 = 1;
pub const EXIT_USAGE: u8 = 2;

#[derive(Debug, Parser)]
#[command(name = "minlab", version, about = "Timelike minimal surfaces in Minkowski 3-space")]
pub struct Cli {
    /// Run the job described by a JSON config instead of a subcommand.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Print the resolved job config as JSON and exit.
    #[arg(long, global = true)]
    pub print_config: bool,
    #[command(subcommand)]
    pub command: Option<Cmd>,
}

#[derive(Debug, Subcommand)]
pub enum Cmd {
    /// Sample a surface and write an OBJ mesh and a CSV table.
    Generate {
        #[command(flatten)]
        surface: SurfaceArgs,
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Run the verification checks; exit 1 if any fails.
    Verify {
        #[command(flatten)]
        surface: SurfaceArgs,
        #[command(flatten)]
        common: CommonArgs,
        /// Replace h by h + eps z^2 first.
        #[arg(long, allow_hyphen_values = true)]
        perturb: Option<f64>,
        /// Check the conjugate surface.
        #[arg(long)]
        conjugate: bool,
    },
    /// Trace the singular set and classify its points.
    Singular {
        #[command(flatten)]
        surface: SurfaceArgs,
        #[command(flatten)]
        common: CommonArgs,
        #[arg(long, default_value_t = 200)]
        resolution: usize,
    },
    /// Sweep a deformation branch into a directory of frames.
    Deform {
        #[arg(long)]
        branch: String,
        #[arg(long, default_value_t = 20)]
        steps: usize,
        #[command(flatten)]
        common: CommonArgs,
    },
}

#[derive(Debug, Clone, Args)]
pub struct SurfaceArgs {
    /// Catalog class, e.g. `E`, `B_S` or `B_T1{c2=2}`.
    #[arg(long)]
    pub class: Option<String>,
    /// Class parameters, e.g. `c2=0.5`.
    #[arg(long)]
    pub params: Option<String>,
    /// Deformation branch (P, S2, CL, S4, BL2).
    #[arg(long)]
    pub family: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub theta: Option<f64>,
}

#[derive(Debug, Clone, Args)]
pub struct CommonArgs {
    #[arg(long, default_value_t = 60)]
    pub nx: usize,
    #[arg(long, default_value_t = 60)]
    pub ny: usize,
    /// `x0,x1,y0,y1`.
    #[arg(long, allow_hyphen_values = true)]
    pub domain: Option<String>,
    #[arg(long, default_value = ".")]
    pub out: PathBuf,
    #[arg(long)]
    pub stem: Option<String>,
    #[arg(long)]
    pub no_obj: bool,
    #[arg(long)]
    pub no_csv: bool,
    #[arg(long)]
    pub tol_hopf: Option<f64>,
    #[arg(long)]
    pub tol_gauss: Option<f64>,
    #[arg(long)]
    pub tol_planarity: Option<f64>,
    #[arg(long)]
    pub tol_kappa_spread: Option<f64>,
    #[arg(long)]
    pub tol_kappa_value: Option<f64>,
    #[arg(long)]
    pub tol_affine: Option<f64>,
    #[arg(long)]
    pub singular_band: Option<f64>,
}

pub fn parse_domain(s: &str) -> Result<Rect, CliError> {
    let v: Vec<f64> = s
        .split(',')
        .map(|p| p.trim().parse::<f64>())
        .collect::<Result<_, _>>()
        .map_err(|_| CliError::Usage(format!("bad domain `{s}`, expected x0,x1,y0,y1")))?;
    match v[..] {
        [x0, x1, y0, y1] => Ok(Rect::new(x0, x1, y0, y1)),
        _ => Err(CliError::Usage(format!("bad domain `{s}`, expected four numbers"))),
    }
}

fn parse_branch(s: &str) -> Result<Branch, CliError> {
    s.parse().map_err(|e: minlab_core::Error| CliError::Usage(e.to_string()))
}

fn surface_spec(a: &SurfaceArgs) -> Result<SurfaceSpec, CliError> {
    match (&a.class, &a.family) {
        (Some(_), Some(_)) => Err(CliError::Usage("give either --class or --family".into())),
        (None, None) => Err(CliError::Usage("missing --class or --family".into())),
        (Some(c), None) => {
            if a.theta.is_some() {
                return Err(CliError::Usage("--theta applies to --family only".into()));
            }
            let cls = match &a.params {
                Some(_) if c.contains('{') => {
                    return Err(CliError::Usage("parameters given both inline and with --params".into()))
                }
                Some(p) => {
                    let params = parse_params(p).map_err(|e| CliError::Usage(e.to_string()))?;
                    SurfaceClass::from_parts(c.trim(), &params)
                }
                None => c.parse(),
            }
            .map_err(|e| CliError::Usage(e.to_string()))?;
            Ok(SurfaceSpec::Class(cls))
        }
        (None, Some(f)) => {
            if a.params.is_some() {
                return Err(CliError::Usage("--params applies to --class only".into()));
            }
            let theta = a.theta.ok_or_else(|| CliError::Usage("--family needs --theta".into()))?;
            Ok(SurfaceSpec::Family { branch: parse_branch(f)?, theta })
        }
    }
}

fn apply_common(cfg: &mut JobConfig, c: &CommonArgs) -> Result<(), CliError> {
    cfg.grid.nx = c.nx;
    cfg.grid.ny = c.ny;
    cfg.grid.domain = c.domain.as_deref().map(parse_domain).transpose()?;
    cfg.output.dir = c.out.clone();
    cfg.output.stem = c.stem.clone();
    cfg.format.obj = !c.no_obj;
    cfg.format.csv = !c.no_csv;
    let t = &mut cfg.tolerances;
    for (slot, v) in [
        (&mut t.hopf, c.tol_hopf),
        (&mut t.gauss, c.tol_gauss),
        (&mut t.planarity, c.tol_planarity),
        (&mut t.kappa_spread, c.tol_kappa_spread),
        (&mut t.kappa_value, c.tol_kappa_value),
        (&mut t.affine, c.tol_affine),
        (&mut t.singular_band, c.singular_band),
    ] {
        if let Some(v) = v {
            *slot = v;
        }
    }
    Ok(())
}

/// Builds the job from parsed arguments.
pub fn job_from_cli(cli: &Cli) -> Result<JobConfig, CliError> {
    match (&cli.config, &cli.command) {
        (Some(_), Some(_)) => Err(CliError::Usage("give either --config or a subcommand".into())),
        (None, None) => Err(CliError::Usage("missing subcommand (generate, verify, singular, deform)".into())),
        (Some(path), None) => JobConfig::load(path),
        (None, Some(cmd)) => {
            let cfg = match cmd {
                Cmd::Generate { surface, common } => {
                    let mut cfg = JobConfig::new(CommandKind::Generate, surface_spec(surface)?);
                    apply_common(&mut cfg, common)?;
                    cfg
                }
                Cmd::Verify { surface, common, perturb, conjugate } => {
                    let mut cfg = JobConfig::new(CommandKind::Verify, surface_spec(surface)?);
                    apply_common(&mut cfg, common)?;
                    cfg.verify.perturb = *perturb;
                    cfg.verify.conjugate = *conjugate;
                    cfg
                }
                Cmd::Singular { surface, common, resolution } => {
                    let mut cfg = JobConfig::new(CommandKind::Singular, surface_spec(surface)?);
                    apply_common(&mut cfg, common)?;
                    cfg.singular.resolution = *resolution;
                    cfg
                }
                Cmd::Deform { branch, steps, common } => {
                    let mut cfg = JobConfig::new(CommandKind::Deform, SurfaceSpec::Branch(parse_branch(branch)?));
                    apply_common(&mut cfg, common)?;
                    cfg.deform.steps = *steps;
                    cfg
                }
            };
            cfg.validate()?;
            Ok(cfg)
        }
    }
}

fn init_threads() -> Result<(), CliError> {
    let Ok(v) = std::env::var("MINLAB_THREADS") else {
        return Ok(());
    };
    let n: usize = v
        .trim()
        .parse()
        .ok()
        .filter(|n| *n > 0)
        .ok_or_else(|| CliError::Config(format!("MINLAB_THREADS must be a positive integer, got `{v}`")))?;
    // a pool that is already set up (e.g. in tests) is left alone
    let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    Ok(())
}

/// Entry point shared by the binary and the tests.
pub fn main_with<I, T>(args: I) -> ExitCode
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_USAGE } else { EXIT_PASS });
        }
    };
    let result = init_threads().and_then(|()| job_from_cli(&cli)).and_then(|cfg| {
        if cli.print_config {
            println!("{}", cfg.to_json());
            return Ok(commands::Outcome { pass: true, ..Default::default() });
        }
        commands::run(&cfg)
    });
    match result {
        Ok(out) => {
            for l in &out.lines {
                println!("{l}");
            }
            for f in &out.files {
                println!("wrote {}", f.display());
            }
            ExitCode::from(if out.pass { EXIT_PASS } else { EXIT_FAIL })
        }
        Err(e) => {
            eprintln!("minlab: {e}");
            ExitCode::from(EXIT_USAGE)
        }
    }
}
