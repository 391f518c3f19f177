use std::fmt;

use thiserror::Error;

use crate::model::Violation;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    /// Operand dimensions or measure spaces do not line up.
    #[error("shape error: {0}")]
    Shape(String),

    /// A family failed validation; every violated invariant is listed.
    #[error("invalid family: {}", Violations(.0))]
    Invalid(Vec<Violation>),

    /// An operation required an invertible operator and got a singular one.
    #[error("singular operator: {0}")]
    Singular(String),

    /// A named hypothesis of a construction does not hold.
    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("numeric failure: {0}")]
    Numeric(String),

    #[error("generation failed: {0}")]
    Generation(String),

    #[error("parse error at {path}: {message}")]
    Parse { path: String, message: String },

    #[error("unknown family `{0}`")]
    UnknownFamily(String),

    #[error("invalid tolerance policy: {0}")]
    Tolerance(String),
}

impl Error {
    pub(crate) fn shape(msg: impl Into<String>) -> Self {
        Error::Shape(msg.into())
    }

    pub(crate) fn precondition(msg: impl Into<String>) -> Self {
        Error::Precondition(msg.into())
    }
}

struct Violations<'a>(&'a [Violation]);

impl fmt::Display for Violations<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, v) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str("; ")?;
            }
            write!(f, "{v}")?;
        }
        Ok(())
    }
}
