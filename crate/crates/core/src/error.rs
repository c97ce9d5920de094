use thiserror::Error;

use crate::region::Cell;
use crate::toric::FanViolation;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid fan: {}", format_violations(.0))]
    InvalidFan(Vec<FanViolation>),

    #[error("class group has torsion (invariant factors {0:?})")]
    Torsion(Vec<i64>),

    #[error("no subset of rays gives a basis of the class group")]
    NoUnimodularBasis,

    #[error("the zero ideal has no Klyachko diagram")]
    ZeroIdeal,

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("regions live over different cones ({left:?} vs {right:?})")]
    ConeMismatch { left: Vec<usize>, right: Vec<usize> },

    #[error("region is infinite (witness cell {0})")]
    Infinite(Cell),

    #[error("grading not pointed for this fan: lattice point set is unbounded")]
    Unbounded,

    #[error("arithmetic overflow in exact integer computation")]
    Overflow,

    #[error("diagrams belong to different fans")]
    FanMismatch,

    #[error("unknown cone {0:?}")]
    UnknownCone(Vec<usize>),

    #[error("invalid Klyachko diagram: {0}")]
    InvalidDiagram(String),

    #[error("search box too small: monomial {monomial} of degree {degree:?} is missed")]
    SearchBoxTooSmall { degree: Vec<i64>, monomial: String },

    #[error("parse error: {0}")]
    Parse(String),
}

fn format_violations(v: &[FanViolation]) -> String {
    v.iter()
        .map(|x| x.to_string())
        .collect::<Vec<_>>()
        .join("; ")
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Parse(e.to_string())
    }
}
