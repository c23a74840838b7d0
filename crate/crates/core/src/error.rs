use thiserror::Error;

/// Errors raised while validating inputs or running the solvers.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("distance matrix is not square: {rows} rows, row {row} has {len} entries")]
    NotSquare { rows: usize, row: usize, len: usize },

    #[error("empty space: at least one point is required")]
    EmptySpace,

    #[error("non-finite distance at ({row}, {col})")]
    NonFiniteDistance { row: usize, col: usize },

    #[error("negative distance {value} at ({row}, {col})")]
    NegativeDistance { row: usize, col: usize, value: f64 },

    #[error("nonzero diagonal entry {value} at ({index}, {index})")]
    NonzeroDiagonal { index: usize, value: f64 },

    #[error("asymmetric distance matrix: d[{row}][{col}] = {forward} but d[{col}][{row}] = {backward}")]
    Asymmetric { row: usize, col: usize, forward: f64, backward: f64 },

    #[error("distinct points {row} and {col} are at distance zero")]
    ZeroDistance { row: usize, col: usize },

    #[error("triangle inequality fails: d[{i}][{k}] = {direct} > d[{i}][{j}] + d[{j}][{k}] = {detour}")]
    TriangleViolation { i: usize, j: usize, k: usize, direct: f64, detour: f64 },

    #[error("{what}: expected length {expected}, got {actual}")]
    LengthMismatch { what: &'static str, expected: usize, actual: usize },

    #[error("invalid mass {value} at index {index}")]
    InvalidMass { index: usize, value: f64 },

    #[error("mass vector sums to {sum}, not 1")]
    MassNotNormalized { sum: f64 },

    #[error("pair ({row}, {col}) is out of range for a {rows}x{cols} product")]
    IndexOutOfRange { row: usize, col: usize, rows: usize, cols: usize },

    #[error("point index {index} is out of range for a space of {len} points")]
    PointOutOfRange { index: usize, len: usize },

    #[error("marginal mismatch at index {index}: {left} vs {right}")]
    MarginalMismatch { index: usize, left: f64, right: f64 },

    #[error("invalid coupling: {0}")]
    InvalidCoupling(String),

    #[error("instance too large: {what} needs {size}, budget is {budget}")]
    InstanceTooLarge { what: &'static str, size: u128, budget: u128 },

    #[error("instance cannot be certified: {0}")]
    Uncertified(&'static str),

    #[error("invalid argument: {0}")]
    InvalidArgument(&'static str),
}

pub type Result<T> = std::result::Result<T, Error>;
