use thiserror::Error;

use crate::paracomplex::ParaError;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error(transparent)]
    Para(#[from] ParaError),

    #[error("quadrature did not reach tolerance {tol:e} (estimate {estimate:e})")]
    QuadratureFailure { tol: f64, estimate: f64 },

    #[error("singular point at ({x}, {y}): |h|^2 = -1")]
    SingularPoint { x: f64, y: f64 },

    #[error("parameter out of range: {0}")]
    ParamRange(String),

    #[error("degenerate curve: {0}")]
    Degenerate(String),

    #[error("null frame undetermined at t = {0}")]
    FrameAmbiguous(f64),

    #[error("grid does not cover the requested region: {0}")]
    GridShape(String),

    #[error("lightlike curvatures differ in sign or vanish ({0}, {1})")]
    SignMismatch(f64, f64),

    #[error("not applicable: {0}")]
    NotApplicable(String),

    #[error("classification criterion undefined at ({x}, {y})")]
    CriterionUndefined { x: f64, y: f64 },

    #[error("curve is not parametrized by pseudo-arclength")]
    NotPseudoArclength,

    #[error("cannot parse surface class `{0}`")]
    ParseClass(String),
}

pub type Result<T> = std::result::Result<T, Error>;
