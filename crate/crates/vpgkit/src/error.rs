use thiserror::Error;

/// Errors shared across the toolkit.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("letter `{0}` declared in more than one part of the alphabet")]
    PartitionOverlap(String),
    #[error("alphabet has no letters")]
    EmptyAlphabet,
    #[error("letter `{0}` is not part of the alphabet")]
    UnknownLetter(String),
    #[error("inverse pairing is invalid: {0}")]
    BadInversePairing(String),
    #[error("operands carry different alphabet partitions")]
    PartitionMismatch,
    #[error("renaming does not respect the partition: `{0}` -> `{1}`")]
    PartitionViolation(String, String),
    #[error("word `{0}` is not admissible for this congruence")]
    InadmissibleWord(String),
    #[error("subgroup has infinite index")]
    InfiniteIndex,
    #[error("subgroup has finite index")]
    FiniteIndex,
    #[error("a letter of the automaton does not act as a compatible bijection: {0}")]
    NotPermutationDfa(String),
    #[error("generated permutation group exceeds the cap of {0} elements")]
    GroupTooLarge(usize),
    #[error("multiplication table is not a group: {0}")]
    InvalidGroup(String),
    #[error("partition is symmetric; no lifting construction applies")]
    SymmetricPartition,
    #[error("automaton is invalid: {0}")]
    InvalidAutomaton(String),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
