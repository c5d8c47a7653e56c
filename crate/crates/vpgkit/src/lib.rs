//! Visibly pushdown automata over partitioned alphabets, their closure
//! algebra and decision procedures, bounded congruence exploration, and a
//! group-language layer: free reduction, Stallings core graphs,
//! coset decompositions of recognisable sets, and bounded word-equation
//! solving with language constraints.

pub mod alphabet;
pub mod congruence;
pub mod determinize;
pub mod dfa;
pub mod dot;
pub mod emptiness;
pub mod equations;
pub mod error;
pub mod gallery;
pub mod json;
pub mod ops;
pub mod oracle;
pub mod recognisable;
pub mod stallings;
pub mod vpa;

pub use alphabet::{classify_word, GroupAlphabet, Letter, LetterKind, MatchProfile, PartitionedAlphabet, Word};
pub use error::{Error, Result};
pub use vpa::Vpa;
