use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum TangleError {
    #[error("line {line}, column {col}: {msg}")]
    Syntax { line: usize, col: usize, msg: String },
    #[error("slice {slice} (line {line}): expected word {expected}, found {found}")]
    Stacking { slice: usize, line: usize, expected: String, found: String },
    #[error("slice {slice} (line {line}): {msg}")]
    Pole { slice: usize, line: usize, msg: String },
    #[error("cannot compose: target {0} differs from source {1}")]
    Incomposable(String, String),
    #[error("both tensor factors carry the pole")]
    DoublePole,
    #[error("N must be at least 1, got {0}")]
    BadN(i64),
    #[error("move {mv} does not match at site {site}")]
    MoveMismatch { mv: String, site: usize },
    #[error("word is singular")]
    Singular,
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum DiagramError {
    #[error("invalid skeleton: {0}")]
    Skeleton(String),
    #[error("cannot compose: target {0} differs from source {1}")]
    Incomposable(String, String),
    #[error("the right tensor factor carries the pole")]
    PoleOnRight,
    #[error("chord {0} has both endpoints on the pole")]
    PolePoleChord(usize),
    #[error("invalid diagram: {0}")]
    Invalid(String),
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum AlgebraError {
    #[error("constant term must be {expected}")]
    ConstantTerm { expected: &'static str },
    #[error("expected {expected} images, got {got}")]
    Arity { expected: usize, got: usize },
    #[error("image of letter {0} has a degree-0 part")]
    DegreeZeroImage(usize),
    #[error("linear system infeasible at degree {degree} ({what})")]
    Infeasible { degree: usize, what: String },
    #[error("{0} does not divide {1}")]
    NotDivisor(usize, usize),
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("resource cap exceeded at degree {degree}: {what}")]
    ResourceCap { degree: usize, what: String },
    #[error("degree {got} exceeds the cap {cap}")]
    DegreeOverflow { got: usize, cap: usize },
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum EvalError {
    #[error(transparent)]
    Tangle(#[from] TangleError),
    #[error(transparent)]
    Diagram(#[from] DiagramError),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error("link word is not closed (source {0})")]
    NotClosed(String),
    #[error("invalid Lie datum: {0}")]
    LieDatum(String),
    #[error("{0}")]
    Other(String),
}
