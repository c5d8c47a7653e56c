//! Partitioned alphabets, words, match profiles, and free-group structure.
//!
//! Letters are interned: an alphabet owns the letter names, and a [`Letter`]
//! is an index into it. Declaration order is the canonical letter order, so
//! everything downstream (enumeration, witness extraction, serialization)
//! is deterministic.

use std::collections::BTreeSet;
use std::fmt;

use crate::error::{Error, Result};

/// Which part of the visible partition a letter belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum LetterKind {
    Call,
    Internal,
    Return,
}

/// An interned letter of some alphabet.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Letter(pub(crate) u16);

impl Letter {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

/// A word is a sequence of interned letters.
pub type Word = Vec<Letter>;

/// A finite alphabet split into call, internal and return letters.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PartitionedAlphabet {
    names: Vec<String>,
    kinds: Vec<LetterKind>,
}

impl PartitionedAlphabet {
    /// Build a partition from the three (disjoint, jointly nonempty) parts.
    /// Letters are interned in the order calls, internals, returns, each in
    /// the order given.
    pub fn new<S: AsRef<str>>(calls: &[S], internals: &[S], returns: &[S]) -> Result<Self> {
        let mut names = Vec::new();
        let mut kinds = Vec::new();
        let mut seen = BTreeSet::new();
        for (part, kind) in [
            (calls, LetterKind::Call),
            (internals, LetterKind::Internal),
            (returns, LetterKind::Return),
        ] {
            for name in part {
                let name = name.as_ref().to_owned();
                if !seen.insert(name.clone()) {
                    return Err(Error::PartitionOverlap(name));
                }
                names.push(name);
                kinds.push(kind);
            }
        }
        if names.is_empty() {
            return Err(Error::EmptyAlphabet);
        }
        Ok(Self { names, kinds })
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn letters(&self) -> impl Iterator<Item = Letter> + '_ {
        (0..self.names.len() as u16).map(Letter)
    }

    pub fn name(&self, l: Letter) -> &str {
        &self.names[l.index()]
    }

    pub fn kind(&self, l: Letter) -> LetterKind {
        self.kinds[l.index()]
    }

    pub fn lookup(&self, name: &str) -> Result<Letter> {
        self.names
            .iter()
            .position(|n| n == name)
            .map(|i| Letter(i as u16))
            .ok_or_else(|| Error::UnknownLetter(name.to_owned()))
    }

    pub fn part(&self, kind: LetterKind) -> Vec<Letter> {
        self.letters().filter(|&l| self.kind(l) == kind).collect()
    }

    /// Parse a word. Tokens may be separated by whitespace; inside a token,
    /// letter names are matched greedily (longest name first).
    pub fn parse_word(&self, text: &str) -> Result<Word> {
        self.parse_word_with(text, None)
    }

    pub(crate) fn parse_word_with(&self, text: &str, inverse: Option<&[Letter]>) -> Result<Word> {
        let mut word = Vec::new();
        for chunk in text.split_whitespace() {
            let mut rest = chunk;
            while !rest.is_empty() {
                // Greedy longest-match over the declared names.
                let mut best: Option<(usize, Letter)> = None;
                for l in self.letters() {
                    let name = self.name(l);
                    if rest.starts_with(name) {
                        match best {
                            Some((len, _)) if len >= name.len() => {}
                            _ => best = Some((name.len(), l)),
                        }
                    }
                }
                let (len, mut letter) =
                    best.ok_or_else(|| Error::UnknownLetter(rest.to_owned()))?;
                rest = &rest[len..];
                // Explicit `^-1` escape hatch maps through the inverse pairing.
                if let Some(stripped) = rest.strip_prefix("^-1") {
                    let inv = inverse.ok_or_else(|| {
                        Error::Parse("`^-1` requires a group alphabet".to_owned())
                    })?;
                    letter = inv[letter.index()];
                    rest = stripped;
                }
                word.push(letter);
            }
        }
        Ok(word)
    }

    /// Render a word. Single-character names are concatenated; otherwise the
    /// letters are space-separated.
    pub fn format_word(&self, w: &[Letter]) -> String {
        if w.is_empty() {
            return "ε".to_owned();
        }
        let sep = if self.names.iter().all(|n| n.chars().count() == 1) {
            ""
        } else {
            " "
        };
        w.iter()
            .map(|&l| self.name(l))
            .collect::<Vec<_>>()
            .join(sep)
    }

    /// All words of length `len`, in lexicographic order by letter index.
    pub fn words_of_length(&self, len: usize) -> WordIter<'_> {
        WordIter {
            alphabet: self,
            len,
            next: Some(vec![Letter(0); len].into_iter().map(|_| 0).collect()),
        }
    }

    /// All words of length `0..=max`, shortest first, lexicographic within a
    /// length.
    pub fn words_up_to(&self, max: usize) -> impl Iterator<Item = Word> + '_ {
        (0..=max).flat_map(move |len| self.words_of_length(len))
    }
}

pub struct WordIter<'a> {
    alphabet: &'a PartitionedAlphabet,
    len: usize,
    next: Option<Vec<usize>>,
}

impl Iterator for WordIter<'_> {
    type Item = Word;

    fn next(&mut self) -> Option<Word> {
        let digits = self.next.take()?;
        let word = digits.iter().map(|&d| Letter(d as u16)).collect();
        let n = self.alphabet.len();
        let mut digits = digits;
        for i in (0..self.len).rev() {
            digits[i] += 1;
            if digits[i] < n {
                self.next = Some(digits);
                return Some(word);
            }
            digits[i] = 0;
        }
        Some(word)
    }
}

/// Prefix/suffix matching profile of a word relative to a partition.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MatchProfile {
    pub is_mr: bool,
    pub is_mc: bool,
    pub is_wm: bool,
    pub unmatched_calls: usize,
    pub unmatched_returns: usize,
}

/// Classify a word as matched-response / matched-call / well-matched and
/// count its unmatched letters. The empty word is MR, MC and WM by vacuity.
pub fn classify_word(alphabet: &PartitionedAlphabet, w: &[Letter]) -> Result<MatchProfile> {
    let mut height = 0usize;
    let mut unmatched_returns = 0usize;
    for &l in w {
        if l.index() >= alphabet.len() {
            return Err(Error::UnknownLetter(format!("#{}", l.index())));
        }
        match alphabet.kind(l) {
            LetterKind::Call => height += 1,
            LetterKind::Return => {
                if height > 0 {
                    height -= 1;
                } else {
                    unmatched_returns += 1;
                }
            }
            LetterKind::Internal => {}
        }
    }
    let unmatched_calls = height;
    let is_mr = unmatched_returns == 0;
    let is_mc = unmatched_calls == 0;
    Ok(MatchProfile {
        is_mr,
        is_mc,
        is_wm: is_mr && is_mc,
        unmatched_calls,
        unmatched_returns,
    })
}

/// A partitioned alphabet with free-group structure: an involutive inverse
/// pairing without fixed points, and a (possibly infinite) order per letter.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroupAlphabet {
    base: PartitionedAlphabet,
    inverse: Vec<Letter>,
    /// `None` means infinite order.
    order: Vec<Option<u32>>,
}

impl GroupAlphabet {
    pub fn new(
        base: PartitionedAlphabet,
        pairs: &[(&str, &str)],
        orders: &[(&str, Option<u32>)],
    ) -> Result<Self> {
        let n = base.len();
        let mut inverse: Vec<Option<Letter>> = vec![None; n];
        for (a, b) in pairs {
            let la = base.lookup(a)?;
            let lb = base.lookup(b)?;
            if la == lb {
                return Err(Error::BadInversePairing(format!("{a} paired with itself")));
            }
            for l in [la, lb] {
                if inverse[l.index()].is_some() {
                    return Err(Error::BadInversePairing(format!(
                        "{} paired twice",
                        base.name(l)
                    )));
                }
            }
            inverse[la.index()] = Some(lb);
            inverse[lb.index()] = Some(la);
        }
        let inverse: Vec<Letter> = inverse
            .into_iter()
            .enumerate()
            .map(|(i, o)| {
                o.ok_or_else(|| Error::BadInversePairing(format!("{} unpaired", base.names[i])))
            })
            .collect::<Result<_>>()?;
        let mut order: Vec<Option<u32>> = vec![None; n];
        for (name, ord) in orders {
            let l = base.lookup(name)?;
            if let Some(k) = ord {
                if *k == 0 {
                    return Err(Error::BadInversePairing(format!("{name} has order 0")));
                }
            }
            order[l.index()] = *ord;
            order[inverse[l.index()].index()] = *ord;
        }
        // order(a) must equal order(a^-1); setting both above enforces it,
        // but reject contradictory explicit declarations.
        for (name, ord) in orders {
            let l = base.lookup(name)?;
            if order[l.index()] != *ord {
                return Err(Error::BadInversePairing(format!(
                    "{name} and its inverse declare different orders"
                )));
            }
        }
        Ok(Self {
            base,
            inverse,
            order,
        })
    }

    /// The standard free-group alphabet: for every name `x` in `positives`,
    /// a letter `x` and a letter `X` (uppercased name) as its inverse, all of
    /// infinite order, all internal.
    pub fn free(positives: &[&str]) -> Result<Self> {
        let mut names = Vec::new();
        for p in positives {
            names.push(p.to_string());
            names.push(p.to_uppercase());
        }
        let base = PartitionedAlphabet::new(&[], &names, &[])?;
        let pairs: Vec<(String, String)> = positives
            .iter()
            .map(|p| (p.to_string(), p.to_uppercase()))
            .collect();
        let pairs_ref: Vec<(&str, &str)> =
            pairs.iter().map(|(a, b)| (a.as_str(), b.as_str())).collect();
        Self::new(base, &pairs_ref, &[])
    }

    pub fn base(&self) -> &PartitionedAlphabet {
        &self.base
    }

    pub fn inv(&self, l: Letter) -> Letter {
        self.inverse[l.index()]
    }

    pub fn order(&self, l: Letter) -> Option<u32> {
        self.order[l.index()]
    }

    /// The positive half of the pairing: letters `l` with `l < inv(l)`.
    pub fn positive_letters(&self) -> Vec<Letter> {
        self.base
            .letters()
            .filter(|&l| l < self.inv(l))
            .collect()
    }

    pub fn parse_word(&self, text: &str) -> Result<Word> {
        self.base.parse_word_with(text, Some(&self.inverse))
    }

    pub fn format_word(&self, w: &[Letter]) -> String {
        self.base.format_word(w)
    }

    /// Free reduction: a single left-to-right pass with a pushdown of
    /// survivors. Linear time; the unique reduced word with the same image.
    pub fn free_reduce(&self, w: &[Letter]) -> Result<Word> {
        let mut out: Word = Vec::with_capacity(w.len());
        for &l in w {
            if l.index() >= self.base.len() {
                return Err(Error::UnknownLetter(format!("#{}", l.index())));
            }
            if out.last() == Some(&self.inv(l)) {
                out.pop();
            } else {
                out.push(l);
            }
        }
        Ok(out)
    }

    pub fn is_reduced(&self, w: &[Letter]) -> bool {
        w.windows(2).all(|p| p[1] != self.inv(p[0]))
    }

    /// The formal inverse of a word: reversed, letterwise inverted.
    pub fn invert_word(&self, w: &[Letter]) -> Word {
        w.iter().rev().map(|&l| self.inv(l)).collect()
    }

    /// Exponent sum of the positive letter `l` (occurrences of `l` minus
    /// occurrences of `inv(l)`).
    pub fn exponent_sum(&self, w: &[Letter], l: Letter) -> i64 {
        let inv = self.inv(l);
        w.iter()
            .map(|&x| {
                if x == l {
                    1
                } else if x == inv {
                    -1
                } else {
                    0
                }
            })
            .sum()
    }
}

impl fmt::Display for LetterKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LetterKind::Call => write!(f, "call"),
            LetterKind::Internal => write!(f, "internal"),
            LetterKind::Return => write!(f, "return"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ab_partition() -> PartitionedAlphabet {
        PartitionedAlphabet::new(&["a"], &[], &["b"]).unwrap()
    }

    #[test]
    fn partition_construction() {
        assert!(ab_partition().len() == 2);
        // all-internal is a legal (regular) partition
        assert!(PartitionedAlphabet::new::<&str>(&[], &["a", "b"], &[]).is_ok());
        assert_eq!(
            PartitionedAlphabet::new(&["a"], &["a"], &["b"]).unwrap_err(),
            Error::PartitionOverlap("a".into())
        );
        assert_eq!(
            PartitionedAlphabet::new::<&str>(&[], &[], &[]).unwrap_err(),
            Error::EmptyAlphabet
        );
    }

    #[test]
    fn classify_examples() {
        let p = ab_partition();
        let cls = |s: &str| classify_word(&p, &p.parse_word(s).unwrap()).unwrap();
        let ab = cls("ab");
        assert!(ab.is_mr && ab.is_mc && ab.is_wm);
        let ba = cls("ba");
        assert!(!ba.is_mr && !ba.is_mc && !ba.is_wm);
        assert_eq!(ba.unmatched_calls, 1);
        assert_eq!(ba.unmatched_returns, 1);
        let aab = cls("aab");
        assert!(aab.is_mr && !aab.is_mc && !aab.is_wm);
        assert_eq!(aab.unmatched_calls, 1);
        let empty = cls("");
        assert!(empty.is_wm);
    }

    #[test]
    fn wm_iff_mr_and_mc_exhaustive() {
        // 4-letter alphabet, all words of length <= 8
        let p = PartitionedAlphabet::new(&["a"], &["c", "d"], &["b"]).unwrap();
        for w in p.words_up_to(8) {
            let m = classify_word(&p, &w).unwrap();
            assert_eq!(m.is_wm, m.is_mr && m.is_mc);
            if m.is_wm {
                assert_eq!(m.unmatched_calls, 0);
                assert_eq!(m.unmatched_returns, 0);
            }
        }
    }

    #[test]
    fn free_reduce_examples() {
        let g = GroupAlphabet::free(&["a", "b"]).unwrap();
        let r = |s: &str| {
            let w = g.parse_word(s).unwrap();
            g.format_word(&g.free_reduce(&w).unwrap())
        };
        assert_eq!(r("aA"), "ε");
        assert_eq!(r("aaAbb"), "abb");
        assert_eq!(r("bAaB"), "ε");
        assert_eq!(r("a^-1"), "A");
    }

    /// Naive rescanning reducer used as an independent oracle.
    fn rescan_reduce(g: &GroupAlphabet, w: &[Letter]) -> Word {
        let mut w = w.to_vec();
        loop {
            let mut changed = false;
            let mut i = 0;
            while i + 1 < w.len() {
                if w[i + 1] == g.inv(w[i]) {
                    w.drain(i..=i + 1);
                    changed = true;
                } else {
                    i += 1;
                }
            }
            if !changed {
                return w;
            }
        }
    }

    #[test]
    fn free_reduce_properties() {
        let g = GroupAlphabet::free(&["a", "b"]).unwrap();
        // idempotence + parity + oracle agreement, exhaustive up to length 5
        // over the 4-letter alphabet (4^5 words), plus spot lengths beyond.
        for w in g.base().words_up_to(5) {
            let r = g.free_reduce(&w).unwrap();
            assert_eq!(g.free_reduce(&r).unwrap(), r);
            assert_eq!(r.len() % 2, w.len() % 2);
            assert_eq!(r, rescan_reduce(&g, &w));
            assert!(g.is_reduced(&r));
        }
        // homomorphism compatibility r(uv) = r(r(u) r(v)), lengths <= 3 each
        let words: Vec<Word> = g.base().words_up_to(3).collect();
        for u in &words {
            for v in &words {
                let mut uv = u.clone();
                uv.extend_from_slice(v);
                let mut ruv = g.free_reduce(u).unwrap();
                ruv.extend(g.free_reduce(v).unwrap());
                assert_eq!(
                    g.free_reduce(&uv).unwrap(),
                    g.free_reduce(&ruv).unwrap()
                );
            }
        }
    }

    #[test]
    fn group_alphabet_validation() {
        let base = PartitionedAlphabet::new(&["a"], &["A"], &[]).unwrap();
        assert!(GroupAlphabet::new(base.clone(), &[("a", "a")], &[]).is_err());
        assert!(GroupAlphabet::new(base.clone(), &[], &[]).is_err());
        let g = GroupAlphabet::new(base, &[("a", "A")], &[("a", Some(3))]).unwrap();
        let a = g.base().lookup("a").unwrap();
        assert_eq!(g.order(a), Some(3));
        assert_eq!(g.order(g.inv(a)), Some(3));
    }
}
