use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("degree mismatch: {0} vs {1}")]
    DegreeMismatch(usize, usize),

    #[error("not a permutation: {0}")]
    NotAPermutation(String),

    #[error("group closure exceeds order cap {cap}")]
    CapExceeded { cap: usize },

    #[error("count {predicted} exceeds cap {cap}")]
    CountCapExceeded { predicted: String, cap: usize },

    #[error("label set is not invariant under the group")]
    NotInvariant,

    #[error("subgroup is not normal")]
    NotNormal,

    #[error("invalid orbit structure: {0}")]
    InvalidOrbitStructure(String),

    #[error("invalid graph: {0}")]
    InvalidGraph(String),

    #[error("orbit structure is not unimodular: |block {0}| != |block {1}|")]
    NotUnimodular(usize, usize),

    #[error("vertex {0} is not internal")]
    NotInternal(String),

    #[error("ball is not materialized far enough: {0}")]
    NotMaterialized(String),

    #[error("materialization ceiling of {0} vertices reached")]
    VertexCeiling(usize),

    #[error("no element of F maps {from} to {to} at vertex {vertex}")]
    NoCandidate { vertex: String, from: usize, to: usize },

    #[error("permutation {0} is not in the group")]
    NotInGroup(String),

    #[error("local actions are not uniform: {0}")]
    NotUniform(String),

    #[error("labelling is not legal: {0}")]
    NotLegal(String),

    #[error("arcs project to different graph arcs")]
    DifferentProjection,

    #[error("ball has no covering projection")]
    NoProjection,

    #[error("invalid basis: {0}")]
    BasisInvalid(String),

    #[error("verification failed: {0}")]
    VerificationFailed(String),

    #[error("fin ceiling exceeded: {fins} fins per vertex > {ceiling}")]
    FinCeiling { fins: usize, ceiling: usize },

    #[error("commutative diagram fails: {0}")]
    DiagramFailure(String),

    #[error("invalid map: {0}")]
    InvalidMap(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

impl Error {
    pub(crate) fn parse(line: usize, msg: impl Into<String>) -> Self {
        Error::Parse {
            line,
            msg: msg.into(),
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
