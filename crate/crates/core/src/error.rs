use thiserror::Error;

/// Everything that can go wrong inside the workbench.
///
/// Variants carry vertex *ids* (not indices) so diagnostics stay meaningful
/// after a graph has been reloaded from disk.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("graph has no vertices")]
    EmptyGraph,
    #[error("graph is disconnected: {0:?} and {1:?} lie in different components")]
    DisconnectedGraph(String, String),
    #[error("duplicate vertex id {0:?}")]
    DuplicateVertex(String),
    #[error("duplicate edge {{{0:?}, {1:?}}}")]
    DuplicateEdge(String, String),
    #[error("self-loop at {0:?}")]
    SelfLoop(String),
    #[error("vertex {0:?} not found")]
    VertexNotFound(String),
    #[error("{operation} refused: {vertices} vertices exceeds the cap of {cap}")]
    SizeLimitExceeded {
        operation: &'static str,
        vertices: usize,
        cap: usize,
    },
    #[error("word left the truncation at letter {letter} (applied to {vertex:?})")]
    OutOfTruncation { letter: usize, vertex: String },
    #[error("space is not a tree")]
    NotATree,
    #[error("space is not a quasitree at the requested constant (bottleneck {constant} > {c_max})")]
    NotAQuasitree { constant: u32, c_max: u32 },
    #[error("end is not invariant: {0}")]
    EndNotInvariant(String),
    #[error("center {0:?} not found")]
    CenterNotFound(String),
    #[error("radius {radius} swallows every boundary vertex; end count is uninformative")]
    RadiusTooLarge { radius: u32 },
    #[error("invalid subgroup chain: {0}")]
    InvalidChain(String),
    #[error("unknown Cayley family {0:?}")]
    UnknownFamily(String),
    #[error("generator {name:?} is not injective: {first:?} and {second:?} both map to {image:?}")]
    NonInjectiveMap {
        name: String,
        first: String,
        second: String,
        image: String,
    },
    #[error("generator {name:?} does not preserve {what} on ({u:?}, {v:?})")]
    NotAnIsometry {
        name: String,
        what: &'static str,
        u: String,
        v: String,
    },
    #[error("unknown generator {0:?}")]
    UnknownGenerator(String),
    #[error("malformed word: {0}")]
    MalformedWord(String),
    #[error("dimension mismatch: expected {expected} coordinates, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("operation requires the {expected} norm")]
    NormMismatch { expected: &'static str },
    #[error("factor mismatch: {0}")]
    FactorMismatch(String),
    #[error("map is not a distance-preserving bijection: {0}")]
    NotAProductIsometry(String),
    #[error("negative exponent {0} on an integer matrix")]
    NegativeExponent(i64),
    #[error("degenerate samples: {0}")]
    DegenerateSamples(String),
    #[error("unknown fixture {0:?}")]
    UnknownFixture(String),
    #[error("format error: {0}")]
    Format(String),
}

impl Error {
    /// True for refusals caused by a configured size cap rather than bad input.
    pub fn is_size_refusal(&self) -> bool {
        matches!(self, Error::SizeLimitExceeded { .. })
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
