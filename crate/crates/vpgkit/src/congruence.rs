//! Bounded brute-force exploration of the three matched-word congruences
//! against any membership oracle.
//!
//! The three congruences, over a language `L`:
//!   - `Equiv`: words from all of Σ*, tested by right contexts from MR;
//!   - `Sim0`: words from MC, tested by arbitrary right contexts;
//!   - `Approx`: words from WM, tested by arbitrary two-sided contexts.
//!
//! Because both words and contexts are cut off at a length bound, reported
//! class counts are lower bounds on the true index, monotone nondecreasing
//! in either bound. That is exactly what the impossibility arguments need:
//! a profile that keeps growing certifies infinite index, while the class
//! count of a genuinely visibly-pushdown language stabilizes.

use std::collections::HashMap;

use crate::alphabet::{classify_word, Letter, PartitionedAlphabet, Word};
use crate::error::{Error, Result};
use crate::oracle::LangOracle;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CongruenceKind {
    Equiv,
    Sim0,
    Approx,
}

/// A separating experiment: a right context, or a two-sided context.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TestContext {
    Right(Word),
    Around(Word, Word),
}

impl TestContext {
    pub fn apply(&self, u: &[Letter]) -> Word {
        match self {
            TestContext::Right(v) => {
                let mut w = u.to_vec();
                w.extend_from_slice(v);
                w
            }
            TestContext::Around(v, w) => {
                let mut out = v.clone();
                out.extend_from_slice(u);
                out.extend_from_slice(w);
                out
            }
        }
    }

    pub fn len(&self) -> usize {
        match self {
            TestContext::Right(v) => v.len(),
            TestContext::Around(v, w) => v.len() + w.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

#[derive(Debug, Clone)]
pub struct CongruenceTable {
    pub kind: CongruenceKind,
    pub word_bound: usize,
    pub context_bound: usize,
    /// Each class lists its words, shortest-then-lex; the first word is the
    /// representative.
    pub classes: Vec<Vec<Word>>,
    /// For every class pair (i, j), i < j, the first context (in
    /// length-then-lex order) separating their representatives.
    pub witnesses: Vec<(usize, usize, TestContext)>,
}

pub fn word_admissible(kind: CongruenceKind, alphabet: &PartitionedAlphabet, w: &[Letter]) -> bool {
    let m = classify_word(alphabet, w).expect("word over the oracle alphabet");
    match kind {
        CongruenceKind::Equiv => true,
        CongruenceKind::Sim0 => m.is_mc,
        CongruenceKind::Approx => m.is_wm,
    }
}

/// All admissible contexts for `kind` up to total length `bound`, shortest
/// first, lexicographic within a length (for two-sided contexts: by total
/// length, then left length, then lexicographic).
pub fn contexts(kind: CongruenceKind, alphabet: &PartitionedAlphabet, bound: usize) -> Vec<TestContext> {
    let mut out = Vec::new();
    match kind {
        CongruenceKind::Equiv => {
            for v in alphabet.words_up_to(bound) {
                if classify_word(alphabet, &v).unwrap().is_mr {
                    out.push(TestContext::Right(v));
                }
            }
        }
        CongruenceKind::Sim0 => {
            for v in alphabet.words_up_to(bound) {
                out.push(TestContext::Right(v));
            }
        }
        CongruenceKind::Approx => {
            for total in 0..=bound {
                for left in 0..=total {
                    for v in alphabet.words_of_length(left) {
                        for w in alphabet.words_of_length(total - left) {
                            out.push(TestContext::Around(v.clone(), w));
                        }
                    }
                }
            }
        }
    }
    out
}

fn signature(oracle: &dyn LangOracle, ctxs: &[TestContext], u: &[Letter]) -> Vec<bool> {
    ctxs.iter().map(|c| oracle.contains(&c.apply(u))).collect()
}

/// Partition the admissible words of length ≤ `word_bound` by their behavior
/// under all admissible contexts of length ≤ `context_bound`.
pub fn explore_classes(
    oracle: &dyn LangOracle,
    kind: CongruenceKind,
    word_bound: usize,
    context_bound: usize,
) -> CongruenceTable {
    let alphabet = oracle.alphabet().clone();
    let ctxs = contexts(kind, &alphabet, context_bound);
    let mut classes: Vec<Vec<Word>> = Vec::new();
    let mut sigs: Vec<Vec<bool>> = Vec::new();
    let mut by_sig: HashMap<Vec<bool>, usize> = HashMap::new();
    for u in alphabet.words_up_to(word_bound) {
        if !word_admissible(kind, &alphabet, &u) {
            continue;
        }
        let sig = signature(oracle, &ctxs, &u);
        match by_sig.get(&sig) {
            Some(&i) => classes[i].push(u),
            None => {
                by_sig.insert(sig.clone(), classes.len());
                sigs.push(sig);
                classes.push(vec![u]);
            }
        }
    }
    let mut witnesses = Vec::new();
    for i in 0..classes.len() {
        for j in (i + 1)..classes.len() {
            let pos = sigs[i]
                .iter()
                .zip(&sigs[j])
                .position(|(a, b)| a != b)
                .expect("distinct classes differ on some context");
            witnesses.push((i, j, ctxs[pos].clone()));
        }
    }
    CongruenceTable {
        kind,
        word_bound,
        context_bound,
        classes,
        witnesses,
    }
}

/// The shortest admissible context separating `u1` from `u2`, or `None` if
/// no context within the bound does.
pub fn distinguish(
    oracle: &dyn LangOracle,
    kind: CongruenceKind,
    u1: &[Letter],
    u2: &[Letter],
    context_bound: usize,
) -> Result<Option<TestContext>> {
    let alphabet = oracle.alphabet();
    for u in [u1, u2] {
        if !word_admissible(kind, alphabet, u) {
            return Err(Error::InadmissibleWord(alphabet.format_word(u)));
        }
    }
    for c in contexts(kind, alphabet, context_bound) {
        if oracle.contains(&c.apply(u1)) != oracle.contains(&c.apply(u2)) {
            return Ok(Some(c));
        }
    }
    Ok(None)
}

/// Lower-bound class counts for word bounds `1..=max_bound`, each explored
/// with context bound two more than the word bound.
pub fn growth_profile(oracle: &dyn LangOracle, kind: CongruenceKind, max_bound: usize) -> Vec<usize> {
    (1..=max_bound)
        .map(|b| explore_classes(oracle, kind, b, b + 2).classes.len())
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gallery;
    use crate::oracle::{wp_z_oracle, FnOracle, VpaOracle};

    #[test]
    fn sigma_star_has_one_class() {
        let o = VpaOracle::new(&gallery::sigma_star());
        for kind in [CongruenceKind::Equiv, CongruenceKind::Sim0, CongruenceKind::Approx] {
            let t = explore_classes(&o, kind, 4, 4);
            assert_eq!(t.classes.len(), 1);
            assert!(t.witnesses.is_empty());
        }
    }

    #[test]
    fn anbn_separator_and_stabilization() {
        // with b internal, every right context is MR, so the ≡-separator
        // between a and aa is the bare suffix b (ab is in L, aab is not)
        let p = PartitionedAlphabet::new::<&str>(&[], &["a", "b"], &[]).unwrap();
        let (a, b) = (p.lookup("a").unwrap(), p.lookup("b").unwrap());
        let o = FnOracle::new(p, move |w| {
            let n = w.iter().take_while(|&&l| l == a).count();
            2 * n == w.len() && w[n..].iter().all(|&l| l == b)
        });
        let u1 = vec![a];
        let u2 = vec![a, a];
        let c = distinguish(&o, CongruenceKind::Equiv, &u1, &u2, 4)
            .unwrap()
            .unwrap();
        assert_eq!(c, TestContext::Right(vec![b]));
        assert_eq!(distinguish(&o, CongruenceKind::Equiv, &u1, &u1, 4).unwrap(), None);
        // approx profile flattens out for a visibly pushdown language
        let vo = VpaOracle::new(&gallery::an_bn());
        let profile = growth_profile(&vo, CongruenceKind::Approx, 8);
        assert!(profile.windows(2).all(|p| p[0] <= p[1]));
        assert_eq!(profile[5], profile[7]);
    }

    #[test]
    fn wp_z_sim0_keeps_growing() {
        // the A^k are pairwise separated by suffixes a^k, so the class count
        // at word bound n is at least n+1
        let g = gallery::symmetric_z_alphabet();
        let a = g.base().lookup("a").unwrap();
        let o = wp_z_oracle(&g, a);
        let profile = growth_profile(&o, CongruenceKind::Sim0, 6);
        for (i, &count) in profile.iter().enumerate() {
            assert!(count >= i + 2, "bound {} count {}", i + 1, count);
        }
        assert!(profile.windows(2).all(|p| p[0] < p[1]));
    }

    #[test]
    fn witnesses_separate_and_inadmissible_words_error() {
        let o = VpaOracle::new(&gallery::an_bn());
        let t = explore_classes(&o, CongruenceKind::Sim0, 4, 6);
        for (i, j, c) in &t.witnesses {
            let u1 = &t.classes[*i][0];
            let u2 = &t.classes[*j][0];
            assert_ne!(o.contains(&c.apply(u1)), o.contains(&c.apply(u2)));
        }
        let p = gallery::ab_alphabet();
        let a = p.parse_word("a").unwrap();
        let e = distinguish(&o, CongruenceKind::Approx, &a, &a, 3);
        assert!(matches!(e, Err(Error::InadmissibleWord(_))));
    }

    #[test]
    fn approx_refines_equiv_on_wm_words() {
        let o = VpaOracle::new(&gallery::an_bn());
        let p = gallery::ab_alphabet();
        let approx = explore_classes(&o, CongruenceKind::Approx, 6, 6);
        let equiv = explore_classes(&o, CongruenceKind::Equiv, 6, 6);
        let class_of = |t: &CongruenceTable, w: &Word| {
            t.classes.iter().position(|c| c.contains(w)).unwrap()
        };
        for c in &approx.classes {
            for w in c {
                assert!(word_admissible(CongruenceKind::Approx, &p, w));
                assert_eq!(class_of(&equiv, w), class_of(&equiv, &c[0]));
            }
        }
    }

    #[test]
    fn monotone_in_both_bounds() {
        let o = FnOracle::new(gallery::ab_alphabet(), |w| w.len() % 3 == 0);
        for kind in [CongruenceKind::Equiv, CongruenceKind::Sim0, CongruenceKind::Approx] {
            let mut prev = 0;
            for b in 1..=6 {
                let n = explore_classes(&o, kind, b, b).classes.len();
                assert!(n >= prev);
                prev = n;
                assert!(explore_classes(&o, kind, b, b + 2).classes.len() >= n);
            }
        }
    }
}
