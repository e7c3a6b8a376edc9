//! Renewal systems as computable objects.
//!
//! A renewal system is the shift space whose language is the set of factors
//! of free concatenations of a finite list of words. This crate builds the
//! standard loop graph of such a list, decides whether the shift is of
//! finite type, constructs the left Fischer cover from scratch via m-block
//! predecessor classes, classifies border points and modularity, performs
//! the sum and diagonal surgeries on covers, and computes the signed
//! Bowen-Franks flow-equivalence invariant with exact integer arithmetic.
//!
//! The top-level pipeline is
//!
//! ```text
//! list --> loop graph --> right-resolving presentation --> SFT certificate
//!      --> left Fischer cover --> adjacency matrix --> signed Bowen-Franks
//! ```
//!
//! Every stage is a pure function of its inputs; all outputs are
//! deterministic byte-for-byte.

mod bits;

pub mod algebra;
pub mod border;
pub mod cli;
pub mod cover;
pub mod family;
pub mod graph;
pub mod lang;

pub use algebra::{BowenFranksClass, Entropy, IntMatrix, SmithDecomposition};
pub use border::{BorderReport, Modularity, ModularPresentation};
pub use cover::{Cover, CoverKind, SftCertificate, SftVerdict};
pub use graph::LabelledGraph;
pub use lang::{GeneratingList, Partitioning, Symbol, Word};

/// Errors shared by the whole pipeline.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("empty list: no generating words")]
    EmptyList,
    #[error("empty word at line {0}")]
    EmptyWord(usize),
    #[error("malformed line {0}")]
    MalformedLine(usize),
    #[error("symbol `{0}` is not in the alphabet")]
    SymbolNotInAlphabet(String),
    #[error("fresh symbol `{0}` collides with the alphabet")]
    FreshSymbolCollision(String),
    #[error("expansion arity must be at least 2, got {0}")]
    ExpansionTooShort(usize),
    #[error("word `{0}` is not in the language")]
    NotInLanguage(String),
    #[error("graph has no vertices")]
    EmptyGraph,
    #[error("unknown vertex id {0}")]
    UnknownVertexId(usize),
    #[error("shift is not of finite type: cycles `{0}` and `{1}` share label `{2}`")]
    NotSft(String, String, String),
    #[error("edge target depends on the class representative (memory miscomputed)")]
    NotWellDefined,
    #[error("presentation is not irreducible")]
    NotIrreducible,
    #[error("no universal border point")]
    UniversalPointMissing,
    #[error("list is not modular: path `{0}`")]
    NotModular(String),
    #[error("alphabets overlap on `{0}`")]
    AlphabetsOverlap(String),
    #[error("missing weight for symbol `{0}`")]
    MissingWeight(String),
    #[error("matrix has a negative entry")]
    NotNonnegative,
    #[error("invalid family parameters: {0}")]
    InvalidParams(String),
    #[error("no closed form for this family variant")]
    NoClosedForm,
}

pub type Result<T> = std::result::Result<T, Error>;
