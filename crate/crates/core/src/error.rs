use std::fmt;

use thiserror::Error;

/// Mathematical hypotheses that gate the presentation engines.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Hypothesis {
    /// The coefficient prime must differ from the characteristic.
    CoprimeCharacteristic,
    /// `H^*(G_C; Z)` must have no l-torsion.
    TorsionFree,
    /// The Chow ring theorem for GL_n needs an odd prime.
    OddPrime,
    /// Coefficients mod l^b with b >= 2 need the l^b-th roots of unity in F_q.
    RootsOfUnity,
}

impl fmt::Display for Hypothesis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Hypothesis::CoprimeCharacteristic => "l must differ from the characteristic p",
            Hypothesis::TorsionFree => "H^*(G_C; Z) must have no l-torsion (torsion-free hypothesis)",
            Hypothesis::OddPrime => "l must be odd (thm hypothesis of the GL Chow ring theorem)",
            Hypothesis::RootsOfUnity => {
                "F_q must contain the l^b-th roots of unity, i.e. l^b | q - 1 (mod l^b corollary hypothesis)"
            }
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// Malformed or out-of-domain input.
    #[error("invalid input: {0}")]
    Input(String),

    /// A hypothesis of one of the theorems is violated.
    #[error("{hypothesis}: {detail}")]
    Precondition {
        hypothesis: Hypothesis,
        detail: String,
    },

    /// An oracle instance is larger than the configured monomial budget.
    #[error("resource limit: degree {degree} has {count} monomials, limit is {limit}")]
    Resource {
        degree: u32,
        count: usize,
        limit: usize,
    },

    #[error("registry line {line}: {message}")]
    Registry { line: usize, message: String },

    /// An error raised while running one instance of a verification sweep.
    #[error("{instance}: {source}")]
    Instance {
        instance: String,
        source: Box<Error>,
    },
}

impl Error {
    pub(crate) fn input(msg: impl Into<String>) -> Self {
        Error::Input(msg.into())
    }

    pub(crate) fn precondition(hypothesis: Hypothesis, detail: impl Into<String>) -> Self {
        Error::Precondition {
            hypothesis,
            detail: detail.into(),
        }
    }

    /// True for violations of a mathematical hypothesis (as opposed to bad usage).
    pub fn is_precondition(&self) -> bool {
        match self {
            Error::Precondition { .. } => true,
            Error::Instance { source, .. } => source.is_precondition(),
            _ => false,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
