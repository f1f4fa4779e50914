use thiserror::Error;

/// Errors raised by the numerical routines and solvers.
#[derive(Debug, Clone, Error, PartialEq)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("invalid interpolation data: {0}")]
    InvalidData(String),

    #[error(
        "families are not isometric: Gram entry ({i}, {j}) differs by {deviation:e} (tol {tol:e})"
    )]
    NotIsometric {
        i: usize,
        j: usize,
        deviation: f64,
        tol: f64,
    },

    #[error("pole: denominator modulus {modulus:e} below threshold")]
    Pole { modulus: f64 },

    #[error("point |lambda| = {modulus} outside the admissible domain (max {max})")]
    OutOfDomain { modulus: f64, max: f64 },

    #[error("contract violation: {0}")]
    ContractViolation(String),

    #[error("resolvent is singular at lambda = ({re}, {im})")]
    BoundaryPole { re: f64, im: f64 },

    #[error("problem is infeasible: {0}")]
    Infeasible(String),

    #[error("numerical failure: {0}")]
    NumericalFailure(String),

    #[error("hypothesis violated: {0}")]
    HypothesisViolation(String),

    #[error("cannot rescale off-diagonal at node {node}: |b| = {modulus:e}")]
    RescalingDegenerate { node: usize, modulus: f64 },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
