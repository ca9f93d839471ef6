use alloc::boxed::Box;
use alloc::string::String;
use core::fmt;

pub type Result<T, E = Error> = core::result::Result<T, E>;

/// A neuron whose orbit never entered the stimulus neighbourhood.
#[derive(Debug, Clone, PartialEq)]
pub struct NonConvergence {
    pub q: f64,
    pub stimulus: f64,
    pub epsilon: f64,
    pub max_iters: usize,
    /// Data coordinates, when the failure happened inside a matrix.
    pub row: Option<usize>,
    pub col: Option<usize>,
}

#[derive(Debug, Clone, PartialEq)]
#[non_exhaustive]
pub enum Error {
    /// Map argument outside `[0, 1)`.
    OutOfDomain(f64),
    /// Stimulus outside `[0, 1]` or not finite.
    InvalidStimulus(f64),
    InvalidParameter {
        name: &'static str,
        value: f64,
    },
    NonConvergence(Box<NonConvergence>),
    ShapeMismatch {
        expected: usize,
        found: usize,
    },
    RaggedRows {
        row: usize,
        expected: usize,
        found: usize,
    },
    EmptyClass(String),
    EmptyInput,
    UnknownLabel(String),
    InsufficientSamples {
        class: String,
        available: usize,
        requested: usize,
    },
    WeightSum {
        neuron: usize,
        sum: f64,
    },
    NegativeWeight {
        neuron: usize,
    },
    SourceOutOfRange {
        neuron: usize,
        source: usize,
        available: usize,
    },
    InconsistentPlane {
        plane: usize,
        expected: usize,
        found: usize,
    },
    QuantizationOverflow {
        span: f64,
        scale: u64,
    },
}

impl Error {
    pub(crate) fn param(name: &'static str, value: f64) -> Self {
        Error::InvalidParameter { name, value }
    }

    /// Attaches matrix coordinates to a non-convergence error.
    pub(crate) fn at(self, row: usize, col: usize) -> Self {
        match self {
            Error::NonConvergence(mut nc) => {
                nc.row = Some(row);
                nc.col = Some(col);
                Error::NonConvergence(nc)
            }
            other => other,
        }
    }

    /// Sets only the row of a non-convergence error.
    pub(crate) fn in_row(self, row: usize) -> Self {
        match self {
            Error::NonConvergence(mut nc) => {
                nc.row = Some(row);
                Error::NonConvergence(nc)
            }
            other => other,
        }
    }
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::OutOfDomain(x) => write!(f, "map argument {x} is outside [0, 1)"),
            Error::InvalidStimulus(x) => write!(f, "stimulus {x} is outside [0, 1]; normalize the data first"),
            Error::InvalidParameter { name, value } => write!(f, "invalid value {value} for `{name}`"),
            Error::NonConvergence(nc) => {
                write!(
                    f,
                    "neuron starting at q={} did not reach the {}-neighbourhood of stimulus {} within {} iterations",
                    nc.q, nc.epsilon, nc.stimulus, nc.max_iters
                )?;
                if let (Some(r), Some(c)) = (nc.row, nc.col) {
                    write!(f, " (row {r}, column {c})")?;
                }
                write!(f, "; q may lie on a periodic orbit, try a different initial activity")
            }
            Error::ShapeMismatch { expected, found } => {
                write!(f, "expected {expected} columns, found {found}")
            }
            Error::RaggedRows { row, expected, found } => {
                write!(f, "row {row} has {found} values, expected {expected}")
            }
            Error::EmptyClass(c) => write!(f, "class `{c}` has no training rows"),
            Error::EmptyInput => write!(f, "input is empty"),
            Error::UnknownLabel(l) => write!(f, "label `{l}` is not one of the model's classes"),
            Error::InsufficientSamples { class, available, requested } => {
                write!(f, "class `{class}` has {available} rows but {requested} were requested")
            }
            Error::WeightSum { neuron, sum } => {
                write!(f, "hidden neuron {neuron}: coupling weights plus self weight sum to {sum}, expected 1")
            }
            Error::NegativeWeight { neuron } => write!(f, "hidden neuron {neuron} has a negative weight"),
            Error::SourceOutOfRange { neuron, source, available } => {
                write!(f, "hidden neuron {neuron} reads source {source} but the previous layer has {available} neurons")
            }
            Error::InconsistentPlane { plane, expected, found } => {
                write!(f, "bitplane {plane} holds {found} samples, expected {expected}")
            }
            Error::QuantizationOverflow { span, scale } => {
                write!(f, "sample span {span} at scale {scale} does not fit in 63-bit quantization levels")
            }
        }
    }
}

impl core::error::Error for Error {}
