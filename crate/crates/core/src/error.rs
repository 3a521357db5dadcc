use alloc::string::String;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PolyError {
    #[error("syntax error at byte {position}: {message}")]
    Syntax { position: usize, message: String },
    #[error("variable x{index} is out of range for {nvars} variable(s)")]
    VariableOutOfRange { index: usize, nvars: usize },
    #[error("variable count mismatch: {left} vs {right}")]
    VariableCountMismatch { left: usize, right: usize },
    #[error("expected {expected} coordinate(s), got {got}")]
    PointLength { expected: usize, got: usize },
    #[error("scale factor must be nonzero")]
    ZeroScale,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CertificateError {
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error("sum-of-squares weight {0} is negative")]
    NegativeWeight(String),
    #[error("expected {expected} multiplier(s), got {got}")]
    MultiplierCount { expected: usize, got: usize },
    #[error("subset index {index} out of range for {m} generator(s)")]
    SubsetIndex { index: usize, m: usize },
    #[error("generator set is labelled {found}, expected {expected}")]
    WrongLabel {
        expected: &'static str,
        found: &'static str,
    },
    #[error("invalid generator parameters: {0}")]
    Parameters(String),
    #[error("cannot keep {keep} of {n} variables")]
    Keep { keep: usize, n: usize },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ChebyshevError {
    #[error("precondition violated: {0}")]
    Precondition(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum IdentityError {
    #[error("invalid parameters: {0}")]
    Parameters(String),
    #[error(transparent)]
    Certificate(#[from] CertificateError),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LiftError {
    #[error("generator mismatch: {0}")]
    GeneratorMismatch(String),
    #[error("input certificate fails: {0}")]
    InputCertificate(String),
    #[error("stage {stage} failed: {detail}")]
    Stage { stage: &'static str, detail: String },
    #[error(transparent)]
    Certificate(#[from] CertificateError),
    #[error(transparent)]
    Identity(#[from] IdentityError),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BoundsError {
    #[error("invalid bound inputs: {0}")]
    Inputs(String),
    #[error("the Schmudgen constant C(n,d) is required (or pass the illustrative flag)")]
    MissingSchmudgenConstant,
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("certificate does not verify: {0}")]
    Certificate(String),
    #[error(transparent)]
    Chebyshev(#[from] ChebyshevError),
    #[error(transparent)]
    Poly(#[from] PolyError),
}
