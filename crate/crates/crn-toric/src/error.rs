//! Error type shared by all analysis stages.

use thiserror::Error;

/// Crate-wide error enumeration. Variants are structured so callers (in
/// particular the command-line front end) can map failures to stable
/// categories.
#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum CrnError {
    /// Text input could not be parsed. Positions are 1-based.
    #[error("parse error at line {line}, column {col}: {msg}")]
    Parse {
        line: usize,
        col: usize,
        msg: String,
    },
    /// Two reactions share a rate symbol.
    #[error("duplicate rate symbol '{0}'")]
    DuplicateRateSymbol(String),
    /// A reaction's reactant and product complexes coincide.
    #[error("reaction {0}: reactant and product complexes are identical")]
    SelfReaction(usize),
    /// A species was declared but appears in no complex.
    #[error("species '{0}' is declared but never used")]
    UnusedSpecies(String),
    /// A rate constant (or state value) is missing for a symbol.
    #[error("missing value for '{0}'")]
    MissingValue(String),
    /// A name does not refer to anything in the network.
    #[error("unknown {kind} '{name}'")]
    UnknownName { kind: &'static str, name: String },
    /// Vector/matrix dimensions do not line up.
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    /// The operation needs a weakly reversible network.
    #[error("{0} requires a weakly reversible network")]
    NotWeaklyReversible(&'static str),
    /// A configured enumeration limit was hit.
    #[error("enumeration cap exceeded: {0}")]
    CapExceeded(String),
    /// The translation search exhausted its budget without a result.
    #[error("no valid translation found within the search budget")]
    NoTranslation,
    /// A deficiency-zero hypothesis needed by the requested computation fails.
    #[error("deficiency hypothesis fails: {0}")]
    DeficiencyHypothesis(String),
    /// A candidate translation violates the defining conditions.
    #[error("invalid translation: {0}")]
    InvalidTranslation(String),
    /// Rate constants of an improper translation cannot be adjusted
    /// consistently.
    #[error("translation is not resolvable: {0}")]
    NotResolvable(String),
    /// A kinetic-order vector is missing for a complex that needs one.
    #[error("missing kinetic assignment for complex {0}")]
    MissingKinetic(usize),
    /// A numeric routine failed (for example, the steady-state solver did
    /// not converge).
    #[error("numeric failure: {0}")]
    Numeric(String),
    /// Anything else that makes the request ill-posed.
    #[error("invalid input: {0}")]
    Invalid(String),
}

pub type Result<T> = std::result::Result<T, CrnError>;
