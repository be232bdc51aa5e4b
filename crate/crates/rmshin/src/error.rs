//! Error type shared by every module.

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("domain error: {0}")]
    Domain(String),
    #[error("not reduced")]
    NotReduced,
    #[error("not in Gamma_r")]
    NotInGammaR,
    #[error("parabolic pole")]
    ParabolicPole,
    #[error("pole: {0}")]
    Pole(String),
    #[error("outside continuation domain")]
    OutsideDomain,
    #[error("numerical failure: {0}")]
    Numeric(String),
}

pub type Result<T> = std::result::Result<T, Error>;
