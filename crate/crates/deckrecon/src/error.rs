//! Error types for the crate, grouped by subsystem.

use std::fmt;
use std::io;

/// Errors from graph construction and graph6 handling.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GraphError {
    /// The input is not a valid graph6 line (bad length, bad characters,
    /// nonzero padding bits, or an unsupported zero-vertex header).
    MalformedEncoding(String),
    /// The encoded order exceeds the 62-vertex limit of this crate.
    OrderTooLarge(usize),
}

impl fmt::Display for GraphError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GraphError::MalformedEncoding(msg) => write!(f, "malformed graph6 encoding: {msg}"),
            GraphError::OrderTooLarge(n) => write!(f, "graph order {n} exceeds the supported maximum of 62"),
        }
    }
}

impl std::error::Error for GraphError {}

/// Errors from deck construction and deck file I/O.
#[derive(Debug)]
pub enum DeckError {
    /// `hide` could not find a card isomorphic to the requested one.
    CardNotFound,
    /// The deck file is structurally invalid.
    MalformedFile(String),
    /// The number of card lines disagrees with the header or with n-1.
    WrongCardCount { expected: usize, found: usize },
    /// The card lines do not all have the same order n-1.
    MixedOrders,
    Io(io::Error),
    Graph(GraphError),
}

impl fmt::Display for DeckError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DeckError::CardNotFound => write!(f, "no card isomorphic to the requested one is present"),
            DeckError::MalformedFile(msg) => write!(f, "malformed deck file: {msg}"),
            DeckError::WrongCardCount { expected, found } => {
                write!(f, "wrong card count: expected {expected}, found {found}")
            }
            DeckError::MixedOrders => write!(f, "deck mixes cards of different orders"),
            DeckError::Io(e) => write!(f, "deck I/O error: {e}"),
            DeckError::Graph(e) => write!(f, "deck card error: {e}"),
        }
    }
}

impl std::error::Error for DeckError {}

impl From<io::Error> for DeckError {
    fn from(e: io::Error) -> Self {
        DeckError::Io(e)
    }
}

impl From<GraphError> for DeckError {
    fn from(e: GraphError) -> Self {
        DeckError::Graph(e)
    }
}

/// Errors from degree and clique-count reconstruction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ReconError {
    /// Degree reconstruction from n-1 cards requires n >= 7; below that the
    /// answer is not unique.
    UnsupportedOrder(usize),
    /// More than one edge-count candidate survived every consistency filter.
    /// Diagnostic: expected never to fire at n >= 7.
    AmbiguousDegreeSequence { candidates: Vec<u64> },
    /// No edge-count candidate survived: the input is not a legitimate
    /// partial deck of any graph.
    InconsistentDeck,
    /// An owner degree or clique degree came out negative.
    NegativeDegree,
    /// An exact division required by a counting identity failed.
    NonDivisible,
    /// The hidden-vertex identification search found zero or several values
    /// where exactly one must exist. Diagnostic.
    IdentificationAmbiguous,
    /// Two resolvers (or a resolver and an invariant) disagreed. Soundness
    /// alarm: never expected on legitimate decks.
    InternalContradiction(String),
}

impl fmt::Display for ReconError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ReconError::UnsupportedOrder(n) => {
                write!(f, "reconstruction from n-1 cards requires n >= 7, got n = {n}")
            }
            ReconError::AmbiguousDegreeSequence { candidates } => {
                write!(f, "ambiguous degree sequence: edge-count candidates {candidates:?} all survive")
            }
            ReconError::InconsistentDeck => write!(f, "no graph is consistent with this partial deck"),
            ReconError::NegativeDegree => write!(f, "a reconstructed degree is negative"),
            ReconError::NonDivisible => write!(f, "a counting identity produced a non-integral quotient"),
            ReconError::IdentificationAmbiguous => {
                write!(f, "hidden-vertex clique-degree identification is ambiguous")
            }
            ReconError::InternalContradiction(msg) => write!(f, "internal contradiction: {msg}"),
        }
    }
}

impl std::error::Error for ReconError {}

/// Errors from the verification harness.
#[derive(Debug)]
pub enum VerifyError {
    /// The instance is too large for the brute-force oracle or the built-in
    /// enumerator (supply a corpus file for n >= 8).
    TooLarge(String),
    Io(io::Error),
    Graph(GraphError),
}

impl fmt::Display for VerifyError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            VerifyError::TooLarge(msg) => write!(f, "instance too large: {msg}"),
            VerifyError::Io(e) => write!(f, "verification I/O error: {e}"),
            VerifyError::Graph(e) => write!(f, "verification input error: {e}"),
        }
    }
}

impl std::error::Error for VerifyError {}

impl From<io::Error> for VerifyError {
    fn from(e: io::Error) -> Self {
        VerifyError::Io(e)
    }
}

impl From<GraphError> for VerifyError {
    fn from(e: GraphError) -> Self {
        VerifyError::Graph(e)
    }
}
