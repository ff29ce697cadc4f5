use thiserror::Error;

/// Errors raised by the toric, series and mirror-map layers.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("invalid fan: {0}")]
    InvalidFan(String),

    #[error("ray index {index} out of range (fan has {count} rays)")]
    RayIndex { index: usize, count: usize },

    #[error("cone index {index} out of range (fan has {count} maximal cones)")]
    ConeIndex { index: usize, count: usize },

    #[error("ray {ray} belongs to cone {cone:?}")]
    RayInCone { ray: usize, cone: Vec<usize> },

    #[error("class {class:?} is not in the curve lattice: sum d_i v_i = {image:?}")]
    NotInKernel { class: Vec<i64>, image: Vec<i64> },

    #[error("curve class basis: {0}")]
    Basis(String),

    #[error("basis is not nef: wall class {witness:?} has basis coordinates {coords:?}")]
    NotNef { witness: Vec<i64>, coords: Vec<i64> },

    #[error("negative q-exponent {exponent:?} for class {class:?}")]
    NegativeExponent { class: Vec<i64>, exponent: Vec<i64> },

    #[error("arity mismatch: {left} vs {right} variables")]
    Arity { left: usize, right: usize },

    #[error("truncation boxes differ: {left:?} vs {right:?}")]
    BoxMismatch { left: Vec<u32>, right: Vec<u32> },

    #[error("constant term must be {expected}, found {found}")]
    ConstantTerm { expected: String, found: String },

    #[error("non-integer invariant {value} at exponent {exponent:?} of ray {ray}")]
    NonInteger {
        ray: usize,
        exponent: Vec<u32>,
        value: String,
    },

    #[error("{0} requires a two-dimensional fan")]
    NotSurface(&'static str),

    #[error("fan is not semi-Fano: wall class {witness:?} has c1 pairing {c1}")]
    NotSemiFano { witness: Vec<i64>, c1: i64 },

    #[error("input: {0}")]
    Input(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
