//! Error type shared by all modules.

use core::fmt;

/// Errors produced by construction and pipeline operations.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// A tensor product was requested over an empty factor list.
    EmptyFactorList,
    /// Operand dimensions disagree.
    DimensionMismatch { expected: usize, got: usize },
    /// A partial trace referenced a mode label that is not present.
    UnknownMode { mode: usize },
    /// A partial trace was asked to keep no modes at all.
    EmptyKeepSet,
    /// A matrix that must be square is not.
    NotSquare { rows: usize, cols: usize },
    /// A matrix that must be Hermitian deviates beyond tolerance.
    NotHermitian { deviation: f64 },
    /// A density operator trace deviates from 1 beyond tolerance.
    TraceDeviation { deviation: f64 },
    /// A state that must be normalized is not (squared norm given).
    Unnormalized { norm_sqr: f64 },
    /// A scalar parameter lies outside its legal interval.
    OutOfRange { name: &'static str, value: f64 },
    /// The machine-vector inner-product constraints admit no realization.
    Infeasible {
        lambda: f64,
        y: f64,
        min_eigenvalue: f64,
    },
    /// Quadrature node count must be odd and at least 3.
    QuadratureNodes { nodes: usize },
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::EmptyFactorList => write!(f, "tensor product of an empty factor list"),
            Error::DimensionMismatch { expected, got } => {
                write!(f, "dimension mismatch: expected {expected}, got {got}")
            }
            Error::UnknownMode { mode } => write!(f, "mode label {mode} is not present"),
            Error::EmptyKeepSet => write!(f, "partial trace must keep at least one mode"),
            Error::NotSquare { rows, cols } => {
                write!(f, "matrix must be square, got {rows}x{cols}")
            }
            Error::NotHermitian { deviation } => {
                write!(f, "matrix is not Hermitian (max deviation {deviation:e})")
            }
            Error::TraceDeviation { deviation } => {
                write!(f, "trace deviates from 1 by {deviation:e}")
            }
            Error::Unnormalized { norm_sqr } => {
                write!(f, "state is not normalized (squared norm {norm_sqr})")
            }
            Error::OutOfRange { name, value } => {
                write!(f, "parameter {name} = {value} is out of range")
            }
            Error::Infeasible {
                lambda,
                y,
                min_eigenvalue,
            } => write!(
                f,
                "infeasible: 3Y^2 > 1-2*lambda at lambda = {lambda}, Y = {y} \
                 (Gram min eigenvalue {min_eigenvalue:e})"
            ),
            Error::QuadratureNodes { nodes } => {
                write!(f, "quadrature nodes must be odd and >= 3, got {nodes}")
            }
        }
    }
}

impl core::error::Error for Error {}

pub type Result<T> = core::result::Result<T, Error>;
