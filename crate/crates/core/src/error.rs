use crate::expr::{EvalError, ParseError};
use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error(transparent)]
    Eval(#[from] EvalError),
    #[error("degenerate immersion at ({u}, {v}): |r_u x r_v| = {norm:e}")]
    DegenerateImmersion { u: f64, v: f64, norm: f64 },
    #[error("degenerate metric at ({u}, {v}): det = {det:e}")]
    DegenerateMetric { u: f64, v: f64, det: f64 },
    #[error("point ({u}, {v}) lies outside the chart domain or too close to a singular locus")]
    OutsideDomain { u: f64, v: f64 },
    #[error("conformal factor λ² = {value} is not positive at ({u}, {v})")]
    NonPositiveLambda { u: f64, v: f64, value: f64 },
    #[error("surface is not CMC: |grad H| = {grad_norm:e} at ({u}, {v})")]
    NotCmc { u: f64, v: f64, grad_norm: f64 },
    #[error("unsupported ambient pairing: {0}")]
    Unsupported(String),
    #[error("mean curvature vanishes at u = {u} (|H| = {h:e})")]
    VanishingMeanCurvature { u: f64, h: f64 },
    #[error("profile is not arclength parametrized at u = {u}: |f'² + g'² - 1| = {defect:e}")]
    NotArclength { u: f64, defect: f64 },
    #[error("profile meets the rotation axis at u = {u} (f = {f:e})")]
    AxisContact { u: f64, f: f64 },
    #[error("solution blew up near u = {u}")]
    Blowup { u: f64 },
    #[error("step underflow: {0}")]
    StepUnderflow(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
}

/// Coarse failure classes, used by front ends to pick exit codes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorClass {
    Config,
    Math,
    Degenerate,
}

impl Error {
    pub fn class(&self) -> ErrorClass {
        match self {
            Error::Parse(_)
            | Error::Unsupported(_)
            | Error::InvalidInput(_)
            | Error::OutsideDomain { .. }
            | Error::NotArclength { .. }
            | Error::StepUnderflow(_) => ErrorClass::Config,
            Error::Eval(_)
            | Error::NonPositiveLambda { .. }
            | Error::NotCmc { .. }
            | Error::VanishingMeanCurvature { .. }
            | Error::Blowup { .. } => ErrorClass::Math,
            Error::DegenerateImmersion { .. }
            | Error::DegenerateMetric { .. }
            | Error::AxisContact { .. } => ErrorClass::Degenerate,
        }
    }
}
