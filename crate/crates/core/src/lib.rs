//! Timelike minimal surfaces in Minkowski 3-space ℝ^{2,1}.
//!
//! Paracomplex arithmetic, the Weierstrass-type representation, the catalog
//! of surfaces with planar curvature lines, null-curve geometry, numerical
//! checks, singularity classification and the deformation families that
//! connect the catalog.

pub mod analytic;
pub mod catalog;
pub mod checks;
pub mod contour;
pub mod deform;
pub mod error;
pub mod fd;
pub mod minkowski;
pub mod nullgeom;
pub mod paracomplex;
pub mod quadrature;
pub mod singular;
pub mod wrep;

pub use error::{Error, Result};
pub use minkowski::Vec21;
pub use paracomplex::{NullPair, ParaComplex};
