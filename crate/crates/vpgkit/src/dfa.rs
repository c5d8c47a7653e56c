//! Plain complete deterministic finite automata, used for word-problem
//! languages and subgroup preimages. The alphabet keeps its partition type
//! for uniformity, but a DFA ignores the parts.

use std::collections::BTreeSet;

use crate::alphabet::{Letter, PartitionedAlphabet, Word};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Dfa {
    alphabet: PartitionedAlphabet,
    n_states: usize,
    start: usize,
    accepts: BTreeSet<usize>,
    /// transition per (state, letter), dense
    trans: Vec<usize>,
}

impl Dfa {
    pub fn new(
        alphabet: PartitionedAlphabet,
        n_states: usize,
        start: usize,
        accepts: impl IntoIterator<Item = usize>,
        trans: Vec<usize>,
    ) -> Self {
        assert_eq!(trans.len(), n_states * alphabet.len());
        assert!(trans.iter().all(|&q| q < n_states));
        Dfa {
            alphabet,
            n_states,
            start,
            accepts: accepts.into_iter().collect(),
            trans,
        }
    }

    pub fn alphabet(&self) -> &PartitionedAlphabet {
        &self.alphabet
    }

    pub fn num_states(&self) -> usize {
        self.n_states
    }

    pub fn start(&self) -> usize {
        self.start
    }

    pub fn accepts(&self) -> &BTreeSet<usize> {
        &self.accepts
    }

    pub fn step(&self, q: usize, l: Letter) -> usize {
        self.trans[q * self.alphabet.len() + l.index()]
    }

    pub fn run(&self, w: &[Letter]) -> usize {
        w.iter().fold(self.start, |q, &l| self.step(q, l))
    }

    pub fn accepts_word(&self, w: &[Letter]) -> bool {
        self.accepts.contains(&self.run(w))
    }

    /// The permutation induced by `l` on states, if it is a bijection.
    pub fn letter_permutation(&self, l: Letter) -> Option<Vec<usize>> {
        let perm: Vec<usize> = (0..self.n_states).map(|q| self.step(q, l)).collect();
        let mut seen = vec![false; self.n_states];
        for &q in &perm {
            if seen[q] {
                return None;
            }
            seen[q] = true;
        }
        Some(perm)
    }

    pub fn is_permutation_dfa(&self) -> bool {
        self.alphabet
            .letters()
            .all(|l| self.letter_permutation(l).is_some())
    }

    /// Accepted words of length at most `max_len`, shortest first then
    /// lexicographic.
    pub fn enumerate_accepted(&self, max_len: usize) -> Vec<Word> {
        self.alphabet
            .words_up_to(max_len)
            .filter(|w| self.accepts_word(w))
            .collect()
    }
}
