//! Membership oracles: a uniform interface over automaton-backed, finite,
//! and rule-backed languages. Rule-backed oracles matter because the
//! interesting negative results concern languages (like the word problem of
//! the integers) that have no visibly pushdown automaton at all.

use std::collections::BTreeSet;

use crate::alphabet::{GroupAlphabet, Letter, LetterKind, PartitionedAlphabet, Word};
use crate::determinize::determinize;
use crate::vpa::{Vpa, BOTTOM};

/// A total membership predicate over words of a fixed partitioned alphabet.
/// Implementations must be pure: safe to query concurrently, same answer
/// every time.
pub trait LangOracle {
    fn alphabet(&self) -> &PartitionedAlphabet;
    fn contains(&self, w: &[Letter]) -> bool;
}

/// Automaton-backed oracle. The automaton is determinized and compiled to
/// dense tables once, so membership is a linear scan with no hashing.
pub struct VpaOracle {
    alphabet: PartitionedAlphabet,
    kinds: Vec<LetterKind>,
    start: usize,
    accept: Vec<bool>,
    n_letters: usize,
    n_syms: usize,
    /// call table: (target, pushed symbol) per (state, letter)
    call: Vec<(u32, u32)>,
    internal: Vec<u32>,
    /// return table per (state, letter, top symbol)
    ret: Vec<u32>,
}

impl VpaOracle {
    pub fn new(v: &Vpa) -> Self {
        let d = if v.is_deterministic() && v.is_complete() {
            v.clone()
        } else {
            determinize(v)
        };
        let alphabet = d.alphabet().clone();
        let n_letters = alphabet.len();
        let n_states = d.num_states();
        let n_syms = d.num_stack_syms();
        let kinds = alphabet.letters().map(|l| alphabet.kind(l)).collect();
        let mut call = vec![(0u32, 0u32); n_states * n_letters];
        let mut internal = vec![0u32; n_states * n_letters];
        let mut ret = vec![0u32; n_states * n_letters * n_syms];
        for q in 0..n_states {
            for l in alphabet.letters() {
                let i = q * n_letters + l.index();
                match alphabet.kind(l) {
                    LetterKind::Call => {
                        let &(to, push) = &d.call_targets(q, l)[0];
                        call[i] = (to as u32, push as u32);
                    }
                    LetterKind::Internal => {
                        internal[i] = d.internal_targets(q, l)[0] as u32;
                    }
                    LetterKind::Return => {
                        for s in 0..n_syms {
                            ret[i * n_syms + s] = d.return_targets(q, l, s)[0] as u32;
                        }
                    }
                }
            }
        }
        let accept = (0..n_states).map(|q| d.accepts().contains(&q)).collect();
        let start = *d.initials().iter().next().unwrap();
        VpaOracle {
            alphabet,
            kinds,
            start,
            accept,
            n_letters,
            n_syms,
            call,
            internal,
            ret,
        }
    }
}

impl LangOracle for VpaOracle {
    fn alphabet(&self) -> &PartitionedAlphabet {
        &self.alphabet
    }

    fn contains(&self, w: &[Letter]) -> bool {
        let mut q = self.start;
        let mut stack: Vec<u32> = Vec::new();
        for &l in w {
            let i = q * self.n_letters + l.index();
            match self.kinds[l.index()] {
                LetterKind::Call => {
                    let (to, push) = self.call[i];
                    stack.push(push);
                    q = to as usize;
                }
                LetterKind::Internal => q = self.internal[i] as usize,
                LetterKind::Return => {
                    let top = stack.pop().unwrap_or(BOTTOM as u32);
                    q = self.ret[i * self.n_syms + top as usize] as usize;
                }
            }
        }
        self.accept[q]
    }
}

/// Rule-backed oracle.
pub struct FnOracle {
    alphabet: PartitionedAlphabet,
    rule: Box<dyn Fn(&[Letter]) -> bool>,
}

impl FnOracle {
    pub fn new(alphabet: PartitionedAlphabet, rule: impl Fn(&[Letter]) -> bool + 'static) -> Self {
        FnOracle {
            alphabet,
            rule: Box::new(rule),
        }
    }
}

impl LangOracle for FnOracle {
    fn alphabet(&self) -> &PartitionedAlphabet {
        &self.alphabet
    }

    fn contains(&self, w: &[Letter]) -> bool {
        (self.rule)(w)
    }
}

/// Finite-language oracle.
pub struct FiniteOracle {
    alphabet: PartitionedAlphabet,
    words: BTreeSet<Word>,
}

impl FiniteOracle {
    pub fn new(alphabet: PartitionedAlphabet, words: impl IntoIterator<Item = Word>) -> Self {
        FiniteOracle {
            alphabet,
            words: words.into_iter().collect(),
        }
    }
}

impl LangOracle for FiniteOracle {
    fn alphabet(&self) -> &PartitionedAlphabet {
        &self.alphabet
    }

    fn contains(&self, w: &[Letter]) -> bool {
        self.words.contains(w)
    }
}

/// The word problem of the infinite cyclic group generated by `gen`: words
/// whose exponent sum in `gen` is zero (other letters must not occur, and
/// none exist when the alphabet is `{gen, gen^-1}`).
pub fn wp_z_oracle(g: &GroupAlphabet, gen: Letter) -> FnOracle {
    let inv = g.inv(gen);
    FnOracle::new(g.base().clone(), move |w| {
        let mut sum = 0i64;
        for &l in w {
            if l == gen {
                sum += 1;
            } else if l == inv {
                sum -= 1;
            }
        }
        sum == 0
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gallery;

    #[test]
    fn vpa_oracle_matches_direct_membership() {
        for v in gallery::suite() {
            let o = VpaOracle::new(&v);
            for w in v.alphabet().clone().words_up_to(6) {
                assert_eq!(o.contains(&w), v.accepts_word(&w).unwrap());
            }
        }
    }

    #[test]
    fn wp_z_counts_exponent_sum() {
        let g = gallery::symmetric_z_alphabet();
        let a = g.base().lookup("a").unwrap();
        let o = wp_z_oracle(&g, a);
        let w = |s: &str| g.parse_word(s).unwrap();
        assert!(o.contains(&w("")));
        assert!(o.contains(&w("aA")));
        assert!(o.contains(&w("Aa")));
        assert!(o.contains(&w("aaAA")));
        assert!(!o.contains(&w("a")));
        assert!(!o.contains(&w("AAa")));
    }
}
