use thiserror::Error;

use crate::simplex::Simplex;

/// A simplex that breaks the Morse conditions, with the sizes of its
/// offending upper and lower sets.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    pub simplex: Simplex,
    pub upper: usize,
    pub lower: usize,
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum DmtError {
    #[error("empty input: at least one simplex is required")]
    EmptyInput,

    #[error("malformed simplex {vertices:?}: {reason}")]
    MalformedSimplex { vertices: Vec<usize>, reason: String },

    #[error("simplex {0} is not in the complex")]
    SimplexNotInComplex(Simplex),

    #[error("chain dimension mismatch: expected {expected}, found {found}")]
    ChainDimensionMismatch { expected: usize, found: usize },

    #[error("integer overflow in chain arithmetic")]
    Overflow,

    #[error("complex has {size} simplices, above the enumeration bound {bound}")]
    TooLargeForEnumeration { size: usize, bound: usize },

    #[error("Morse conditions violated at {} simplices", .0.len())]
    MorseConditionViolated(Vec<Violation>),

    #[error("no value given for simplex {0}")]
    MissingValue(Simplex),

    #[error("value for simplex {0} is not finite")]
    NonFiniteValue(Simplex),

    #[error("internal: gradient field has a closed V-path")]
    AcyclicityBug,

    #[error("functions are defined on different complexes")]
    ComplexMismatch,

    #[error("invalid matching: {0}")]
    InvalidMatching(String),

    #[error("{face} is not a free face of {coface}")]
    NotFreeFace { face: Simplex, coface: Simplex },

    #[error("complex does not collapse onto the target")]
    NotCollapsible,

    #[error("critical value {0} lies in the window")]
    CriticalValueInWindow(f64),

    #[error("precondition violated: {0}")]
    PreconditionViolated(String),

    #[error("internal proof step failed: {0}")]
    ProofFailure(String),

    #[error("Betti signature mismatch: {0}")]
    SignatureMismatch(String),

    #[error("{0} is not a critical vertex")]
    NotACriticalVertex(Simplex),

    #[error("property violated: {0}")]
    PropertyViolation(String),

    #[error("family of sets is empty or has an empty member")]
    EmptyFamily,

    #[error("theorem violated: {0}")]
    TheoremViolation(String),

    #[error("family not closed under {map}: image {image} is not a member")]
    ClosureViolated { map: String, image: String },

    #[error("no map pushes the sublevel set below regular value {0}")]
    DeformationViolated(f64),

    #[error("vertices must be distinct critical vertices with f(min0) < f(min1): {0}")]
    NotLocalMinima(String),

    #[error("no admissible edge path exists")]
    NoPathExists,

    #[error("could not reassemble flowed set as an edge path: {0}")]
    ReassemblyFailure(String),

    #[error("parse error at line {line}: {reason}")]
    Parse { line: usize, reason: String },
}

impl DmtError {
    /// Stable machine-readable name used in JSON error objects.
    pub fn kind(&self) -> &'static str {
        match self {
            DmtError::EmptyInput => "EmptyInput",
            DmtError::MalformedSimplex { .. } => "MalformedSimplex",
            DmtError::SimplexNotInComplex(_) => "SimplexNotInComplex",
            DmtError::ChainDimensionMismatch { .. } => "ChainDimensionMismatch",
            DmtError::Overflow => "Overflow",
            DmtError::TooLargeForEnumeration { .. } => "TooLargeForEnumeration",
            DmtError::MorseConditionViolated(_) => "MorseConditionViolated",
            DmtError::MissingValue(_) => "MissingValue",
            DmtError::NonFiniteValue(_) => "NonFiniteValue",
            DmtError::AcyclicityBug => "AcyclicityBug",
            DmtError::ComplexMismatch => "ComplexMismatch",
            DmtError::InvalidMatching(_) => "InvalidMatching",
            DmtError::NotFreeFace { .. } => "NotFreeFace",
            DmtError::NotCollapsible => "NotCollapsible",
            DmtError::CriticalValueInWindow(_) => "CriticalValueInWindow",
            DmtError::PreconditionViolated(_) => "PreconditionViolated",
            DmtError::ProofFailure(_) => "ProofFailure",
            DmtError::SignatureMismatch(_) => "SignatureMismatch",
            DmtError::NotACriticalVertex(_) => "NotACriticalVertex",
            DmtError::PropertyViolation(_) => "PropertyViolation",
            DmtError::EmptyFamily => "EmptyFamily",
            DmtError::TheoremViolation(_) => "TheoremViolation",
            DmtError::ClosureViolated { .. } => "ClosureViolated",
            DmtError::DeformationViolated(_) => "DeformationViolated",
            DmtError::NotLocalMinima(_) => "NotLocalMinima",
            DmtError::NoPathExists => "NoPathExists",
            DmtError::ReassemblyFailure(_) => "ReassemblyFailure",
            DmtError::Parse { .. } => "ParseError",
        }
    }
}

pub type Result<T> = std::result::Result<T, DmtError>;
