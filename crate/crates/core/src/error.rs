use thiserror::Error;

use crate::params::Family;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("{family}: parameter {name} = {value} outside its domain ({reason})")]
    ParameterDomain {
        family: Family,
        name: &'static str,
        value: f64,
        reason: &'static str,
    },

    #[error("{family} expects {expected} parameters, got {got}")]
    Dimension { family: Family, expected: usize, got: usize },

    #[error("argument {t} outside the domain [{lower}, {upper}] of the cumulant generating function")]
    CgfDomain { t: f64, lower: f64, upper: f64 },

    #[error("{operation} is not available for the {family} family")]
    UnsupportedFamily { operation: &'static str, family: Family },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("unknown family {0:?}")]
    UnknownFamily(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
