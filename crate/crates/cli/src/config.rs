use std::path::{Path, PathBuf};

use minlab_core::catalog::{weierstrass_data, SurfaceClass};
use minlab_core::checks::tol;
use minlab_core::deform::{self, Branch};
use minlab_core::wrep::{Rect, WeierstrassData};
use serde::{Deserialize, Serialize};

use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CommandKind {
    Generate,
    Verify,
    Singular,
    Deform,
}

/// What to evaluate: a catalog class, one member of a deformation branch,
/// or a whole branch (for sweeps).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SurfaceSpec {
    Class(SurfaceClass),
    Family { branch: Branch, theta: f64 },
    Branch(Branch),
}

impl SurfaceSpec {
    pub fn label(&self) -> String {
        match self {
            SurfaceSpec::Class(c) => c.to_string(),
            SurfaceSpec::Family { branch, theta } => format!("{branch}(theta={theta})"),
            SurfaceSpec::Branch(b) => b.to_string(),
        }
    }

    /// File-name friendly label.
    pub fn stem(&self) -> String {
        self.label()
            .chars()
            .map(|c| if c.is_ascii_alphanumeric() || c == '.' || c == '-' { c } else { '_' })
            .collect::<String>()
            .trim_end_matches('_')
            .to_string()
    }

    pub fn data(&self) -> minlab_core::Result<WeierstrassData> {
        match self {
            SurfaceSpec::Class(c) => weierstrass_data(c),
            SurfaceSpec::Family { branch, theta } => deform::family_data(*branch, *theta),
            SurfaceSpec::Branch(b) => {
                Err(minlab_core::Error::NotApplicable(format!("branch {b} names a sweep, not a single surface")))
            }
        }
    }

    pub fn default_domain(&self) -> Rect {
        match self {
            SurfaceSpec::Class(c) => c.default_domain(),
            _ => Rect::square(1.0),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridConfig {
    pub nx: usize,
    pub ny: usize,
    /// Falls back to the surface's default domain.
    pub domain: Option<Rect>,
}

impl Default for GridConfig {
    fn default() -> Self {
        GridConfig { nx: 60, ny: 60, domain: None }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct Tolerances {
    pub hopf: f64,
    pub gauss: f64,
    pub planarity: f64,
    pub kappa_spread: f64,
    pub kappa_value: f64,
    pub affine: f64,
    /// Cells with a corner inside `|ρ| < singular_band·max|ρ|` are dropped
    /// from meshes.
    pub singular_band: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            hopf: tol::HOPF,
            gauss: tol::GAUSS,
            planarity: tol::PLANARITY,
            kappa_spread: tol::KAPPA_SPREAD,
            kappa_value: tol::KAPPA_VALUE,
            affine: tol::AFFINE,
            singular_band: minlab_core::checks::SINGULAR_BAND,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OutputConfig {
    pub dir: PathBuf,
    /// File-name stem; derived from the surface when absent.
    pub stem: Option<String>,
}

impl Default for OutputConfig {
    fn default() -> Self {
        OutputConfig { dir: PathBuf::from("."), stem: None }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct FormatFlags {
    pub obj: bool,
    pub csv: bool,
}

impl Default for FormatFlags {
    fn default() -> Self {
        FormatFlags { obj: true, csv: true }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct VerifyOptions {
    /// Replace `h` by `h + ε z²` before checking.
    pub perturb: Option<f64>,
    /// Check the conjugate surface (`η ↦ jη`).
    pub conjugate: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SingularOptions {
    pub resolution: usize,
}

impl Default for SingularOptions {
    fn default() -> Self {
        SingularOptions { resolution: 200 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct DeformOptions {
    pub steps: usize,
}

impl Default for DeformOptions {
    fn default() -> Self {
        DeformOptions { steps: 20 }
    }
}

/// One job, as given on the command line or in a `--config` file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct JobConfig {
    pub command: CommandKind,
    pub surface: SurfaceSpec,
    #[serde(default)]
    pub grid: GridConfig,
    #[serde(default)]
    pub tolerances: Tolerances,
    #[serde(default)]
    pub output: OutputConfig,
    #[serde(default)]
    pub format: FormatFlags,
    #[serde(default)]
    pub verify: VerifyOptions,
    #[serde(default)]
    pub singular: SingularOptions,
    #[serde(default)]
    pub deform: DeformOptions,
}

impl JobConfig {
    pub fn new(command: CommandKind, surface: SurfaceSpec) -> Self {
        JobConfig {
            command,
            surface,
            grid: GridConfig::default(),
            tolerances: Tolerances::default(),
            output: OutputConfig::default(),
            format: FormatFlags::default(),
            verify: VerifyOptions::default(),
            singular: SingularOptions::default(),
            deform: DeformOptions::default(),
        }
    }

    pub fn from_json(s: &str) -> Result<Self, CliError> {
        let cfg: JobConfig = serde_json::from_str(s).map_err(|e| CliError::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("config serializes")
    }

    pub fn domain(&self) -> Rect {
        self.grid.domain.unwrap_or_else(|| self.surface.default_domain())
    }

    pub fn stem(&self) -> String {
        self.output.stem.clone().unwrap_or_else(|| self.surface.stem())
    }

    pub fn validate(&self) -> Result<(), CliError> {
        let bad = |m: String| Err(CliError::Config(m));
        match (self.command, &self.surface) {
            (CommandKind::Deform, SurfaceSpec::Branch(_)) => {}
            (CommandKind::Deform, _) => return bad("deform needs a branch".into()),
            (_, SurfaceSpec::Branch(b)) => return bad(format!("branch {b} given without a parameter; pass a theta")),
            _ => {}
        }
        if let SurfaceSpec::Class(c) = &self.surface {
            c.validate().map_err(|e| CliError::Config(e.to_string()))?;
        }
        if self.grid.nx < 2 || self.grid.ny < 2 {
            return bad(format!("grid needs nx, ny >= 2, got {}x{}", self.grid.nx, self.grid.ny));
        }
        if let Some(d) = self.grid.domain {
            if !d.is_valid() {
                return bad(format!("empty or non-finite domain {d:?}"));
            }
        }
        let t = &self.tolerances;
        for (name, v) in [
            ("hopf", t.hopf),
            ("gauss", t.gauss),
            ("planarity", t.planarity),
            ("kappa_spread", t.kappa_spread),
            ("kappa_value", t.kappa_value),
            ("affine", t.affine),
            ("singular_band", t.singular_band),
        ] {
            if !(v > 0.0 && v.is_finite()) {
                return bad(format!("tolerance {name} must be positive, got {v}"));
            }
        }
        if self.singular.resolution < 4 {
            return bad("singular resolution must be at least 4".into());
        }
        if self.deform.steps < 2 {
            return bad("deform needs at least 2 steps".into());
        }
        if let Some(eps) = self.verify.perturb {
            if !eps.is_finite() {
                return bad(format!("perturbation must be finite, got {eps}"));
            }
        }
        Ok(())
    }
}
