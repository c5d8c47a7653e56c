//! Recognisable sets and word problems: word-problem automata from Cayley
//! tables, coset-union decompositions of permutation automata, symmetric
//! partition checking, matched-word lifting, and the two-letter witness
//! families built from generator orders.

use std::collections::{BTreeSet, HashMap, VecDeque};

use crate::alphabet::{classify_word, GroupAlphabet, Letter, LetterKind, Word};
use crate::dfa::Dfa;
use crate::error::{Error, Result};

/// A finite group as a multiplication table, with letters of a group
/// alphabet mapped onto elements.
#[derive(Debug, Clone)]
pub struct CayleyTable {
    alphabet: GroupAlphabet,
    element_names: Vec<String>,
    identity: usize,
    /// row-major: product[i * n + j] = element i * element j
    product: Vec<usize>,
    /// image element per letter
    gen_map: Vec<usize>,
}

impl CayleyTable {
    pub fn new(
        alphabet: GroupAlphabet,
        element_names: Vec<String>,
        identity: usize,
        product: Vec<usize>,
        gen_map: Vec<usize>,
    ) -> Result<Self> {
        let n = element_names.len();
        let err = |m: String| Err(Error::InvalidGroup(m));
        if identity >= n || product.len() != n * n || product.iter().any(|&x| x >= n) {
            return err("table shape or entry out of range".into());
        }
        let mul = |i: usize, j: usize| product[i * n + j];
        for i in 0..n {
            if mul(identity, i) != i || mul(i, identity) != i {
                return err(format!("identity law fails at {}", element_names[i]));
            }
            if !(0..n).any(|j| mul(i, j) == identity && mul(j, i) == identity) {
                return err(format!("{} has no inverse", element_names[i]));
            }
        }
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    if mul(mul(i, j), k) != mul(i, mul(j, k)) {
                        return err(format!(
                            "associativity fails on ({}, {}, {})",
                            element_names[i], element_names[j], element_names[k]
                        ));
                    }
                }
            }
        }
        if gen_map.len() != alphabet.base().len() || gen_map.iter().any(|&x| x >= n) {
            return err("generator map does not cover the alphabet".into());
        }
        for l in alphabet.base().letters() {
            let li = gen_map[l.index()];
            let ii = gen_map[alphabet.inv(l).index()];
            if mul(li, ii) != identity {
                return err(format!(
                    "letter {} and its inverse do not map to inverse elements",
                    alphabet.base().name(l)
                ));
            }
            if let Some(k) = alphabet.order(l) {
                let mut p = identity;
                for _ in 0..k {
                    p = mul(p, li);
                }
                if p != identity {
                    return err(format!(
                        "letter {} does not satisfy its declared order {k}",
                        alphabet.base().name(l)
                    ));
                }
            }
        }
        Ok(CayleyTable {
            alphabet,
            element_names,
            identity,
            product,
            gen_map,
        })
    }

    pub fn alphabet(&self) -> &GroupAlphabet {
        &self.alphabet
    }

    pub fn size(&self) -> usize {
        self.element_names.len()
    }

    pub fn identity(&self) -> usize {
        self.identity
    }

    pub fn element_names(&self) -> &[String] {
        &self.element_names
    }

    pub fn mul(&self, i: usize, j: usize) -> usize {
        self.product[i * self.element_names.len() + j]
    }

    pub fn letter_image(&self, l: Letter) -> usize {
        self.gen_map[l.index()]
    }

    /// Evaluate a word to a group element.
    pub fn eval(&self, w: &[Letter]) -> Result<usize> {
        let mut e = self.identity;
        for &l in w {
            if l.index() >= self.gen_map.len() {
                return Err(Error::UnknownLetter(format!("#{}", l.index())));
            }
            e = self.mul(e, self.gen_map[l.index()]);
        }
        Ok(e)
    }

    pub fn is_trivial_word(&self, w: &[Letter]) -> Result<bool> {
        Ok(self.eval(w)? == self.identity)
    }
}

/// The word-problem automaton: states are group elements, letters act by
/// right multiplication, start and accept at the identity.
pub fn wp_dfa_from_cayley(t: &CayleyTable) -> Dfa {
    let alphabet = t.alphabet().base().clone();
    let nl = alphabet.len();
    let n = t.size();
    let mut trans = vec![0usize; n * nl];
    for e in 0..n {
        for l in alphabet.letters() {
            trans[e * nl + l.index()] = t.mul(e, t.letter_image(l));
        }
    }
    Dfa::new(alphabet, n, t.identity(), [t.identity()], trans)
}

/// A recognized set presented as a finite union of cosets of the kernel of
/// the permutation action: the kernel has index `group_size` and the listed
/// (reduced, shortest) representatives pick out the accepted cosets.
#[derive(Debug, Clone)]
pub struct CosetUnion {
    pub group_size: usize,
    pub coset_representatives: Vec<Word>,
    alphabet: GroupAlphabet,
    perms: Vec<Vec<usize>>,
    letter_elem: Vec<usize>,
    accepting: BTreeSet<usize>,
}

const PERM_GROUP_CAP: usize = 100_000;

fn compose(first: &[usize], then: &[usize]) -> Vec<usize> {
    first.iter().map(|&q| then[q]).collect()
}

/// Decompose a permutation automaton over an inverse-closed alphabet into a
/// coset union: materialize the permutation group generated by the letter
/// actions (breadth-first, shortest word per element) and keep the elements
/// that carry the start state into the accept set.
pub fn to_coset_representation(d: &Dfa, g: &GroupAlphabet) -> Result<CosetUnion> {
    let alphabet = d.alphabet();
    let mut letter_perm: Vec<Vec<usize>> = Vec::new();
    for l in alphabet.letters() {
        let p = d
            .letter_permutation(l)
            .ok_or_else(|| Error::NotPermutationDfa(alphabet.name(l).to_owned()))?;
        letter_perm.push(p);
    }
    for l in alphabet.letters() {
        let p = &letter_perm[l.index()];
        let q = &letter_perm[g.inv(l).index()];
        if compose(p, q) != (0..d.num_states()).collect::<Vec<_>>() {
            return Err(Error::NotPermutationDfa(format!(
                "{} does not act inversely to {}",
                alphabet.name(g.inv(l)),
                alphabet.name(l)
            )));
        }
    }

    let id: Vec<usize> = (0..d.num_states()).collect();
    let mut perms: Vec<Vec<usize>> = vec![id.clone()];
    let mut words: Vec<Word> = vec![Vec::new()];
    let mut ids: HashMap<Vec<usize>, usize> = HashMap::from([(id, 0)]);
    let mut queue = VecDeque::from([0usize]);
    while let Some(i) = queue.pop_front() {
        for l in alphabet.letters() {
            let p = compose(&perms[i], &letter_perm[l.index()]);
            if !ids.contains_key(&p) {
                if perms.len() >= PERM_GROUP_CAP {
                    return Err(Error::GroupTooLarge(PERM_GROUP_CAP));
                }
                let mut w = words[i].clone();
                w.push(l);
                ids.insert(p.clone(), perms.len());
                perms.push(p);
                words.push(w);
                queue.push_back(perms.len() - 1);
            }
        }
    }

    let accepting: BTreeSet<usize> = (0..perms.len())
        .filter(|&i| d.accepts().contains(&perms[i][d.start()]))
        .collect();
    let coset_representatives: Vec<Word> = accepting
        .iter()
        .map(|&i| g.free_reduce(&words[i]).expect("generator word over alphabet"))
        .collect();
    let letter_elem = alphabet
        .letters()
        .map(|l| ids[&letter_perm[l.index()]])
        .collect();
    Ok(CosetUnion {
        group_size: perms.len(),
        coset_representatives,
        alphabet: g.clone(),
        perms,
        letter_elem,
        accepting,
    })
}

impl CosetUnion {
    /// Rebuild an automaton from the decomposition: the kernel action on the
    /// permutation group itself, accepting the chosen cosets.
    pub fn rebuild_dfa(&self) -> Dfa {
        let alphabet = self.alphabet.base().clone();
        let nl = alphabet.len();
        let n = self.perms.len();
        let ids: HashMap<&Vec<usize>, usize> =
            self.perms.iter().enumerate().map(|(i, p)| (p, i)).collect();
        let mut trans = vec![0usize; n * nl];
        for i in 0..n {
            for l in alphabet.letters() {
                let p = compose(&self.perms[i], &self.perms[self.letter_elem[l.index()]]);
                trans[i * nl + l.index()] = ids[&p];
            }
        }
        Dfa::new(alphabet, n, 0, self.accepting.iter().copied(), trans)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SymmetryViolation {
    /// A call letter of finite order.
    TorsionCall(Letter),
    /// A return letter of finite order.
    TorsionReturn(Letter),
    /// A call whose inverse is not a return.
    CallInverseNotReturn(Letter),
    /// A return whose inverse is not a call.
    ReturnInverseNotCall(Letter),
}

/// A partition is symmetric when every call has infinite order, inverses of
/// calls are returns, and inverses of returns are calls. An all-internal
/// partition is symmetric by vacuity. Returns all violations; empty means
/// symmetric.
pub fn symmetry_violations(g: &GroupAlphabet) -> Vec<SymmetryViolation> {
    let p = g.base();
    let mut out = Vec::new();
    for l in p.letters() {
        match p.kind(l) {
            LetterKind::Call => {
                if g.order(l).is_some() {
                    out.push(SymmetryViolation::TorsionCall(l));
                }
                if p.kind(g.inv(l)) != LetterKind::Return {
                    out.push(SymmetryViolation::CallInverseNotReturn(l));
                }
            }
            LetterKind::Return => {
                if g.order(l).is_some() {
                    out.push(SymmetryViolation::TorsionReturn(l));
                }
                if p.kind(g.inv(l)) != LetterKind::Call {
                    out.push(SymmetryViolation::ReturnInverseNotCall(l));
                }
            }
            LetterKind::Internal => {}
        }
    }
    out
}

pub fn is_symmetric_partition(g: &GroupAlphabet) -> bool {
    symmetry_violations(g)
        .iter()
        .all(|v| matches!(v, SymmetryViolation::TorsionReturn(_)))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MatchSide {
    Mr,
    Mc,
}

/// Pad `w` with a group-trivial prefix (for MR) or suffix (for MC) built
/// from a partition asymmetry, so the result lands in the requested class
/// with the same group image: a call `x` whose inverse is not a return gives
/// the prefix `x^n x^-n`; a torsion call `z` of order `k` gives the prefix
/// `z^(k n)`; symmetrically with returns for MC. Here `n = |w|`.
pub fn lift_to_matched(g: &GroupAlphabet, w: &[Letter], side: MatchSide) -> Result<Word> {
    let m = classify_word(g.base(), w)?;
    let already = match side {
        MatchSide::Mr => m.is_mr,
        MatchSide::Mc => m.is_mc,
    };
    if already {
        return Ok(w.to_vec());
    }
    let n = w.len();
    for v in symmetry_violations(g) {
        match (side, v) {
            (MatchSide::Mr, SymmetryViolation::CallInverseNotReturn(x)) => {
                let mut out = vec![x; n];
                out.extend(std::iter::repeat(g.inv(x)).take(n));
                out.extend_from_slice(w);
                return Ok(out);
            }
            (MatchSide::Mr, SymmetryViolation::TorsionCall(z)) => {
                let k = g.order(z).unwrap() as usize;
                let mut out = vec![z; k * n];
                out.extend_from_slice(w);
                return Ok(out);
            }
            (MatchSide::Mc, SymmetryViolation::ReturnInverseNotCall(y)) => {
                let mut out = w.to_vec();
                out.extend(std::iter::repeat(y).take(n));
                out.extend(std::iter::repeat(g.inv(y)).take(n));
                return Ok(out);
            }
            (MatchSide::Mc, SymmetryViolation::TorsionReturn(z)) => {
                let k = g.order(z).unwrap() as usize;
                let mut out = w.to_vec();
                out.extend(std::iter::repeat(z).take(k * n));
                return Ok(out);
            }
            _ => {}
        }
    }
    Err(Error::SymmetricPartition)
}

/// The two words `(xy)^k (y^(n-1) x^(m-1))^k` and `(yx)^k (x^(m-1) y^(n-1))^k`,
/// both trivial in any group where `x` has order `m` and `y` has order `n`.
pub fn wp_witness_family(x: Letter, y: Letter, m: u32, n: u32, k: u32) -> (Word, Word) {
    let block = |first: Letter, second: Letter, reps: u32| -> Word {
        let mut w = Vec::new();
        for _ in 0..reps {
            w.push(first);
            w.push(second);
        }
        w
    };
    let tail = |first: Letter, f_reps: u32, second: Letter, s_reps: u32, k: u32| -> Word {
        let mut w = Vec::new();
        for _ in 0..k {
            w.extend(std::iter::repeat(first).take(f_reps as usize));
            w.extend(std::iter::repeat(second).take(s_reps as usize));
        }
        w
    };
    let mut w1 = block(x, y, k);
    w1.extend(tail(y, n - 1, x, m - 1, k));
    let mut w2 = block(y, x, k);
    w2.extend(tail(x, m - 1, y, n - 1, k));
    (w1, w2)
}

/// ℤ/n with letters `x`, `X` (declared order n, all internal).
pub fn cyclic_table(n: u32) -> CayleyTable {
    let base = crate::alphabet::PartitionedAlphabet::new::<&str>(&[], &["x", "X"], &[]).unwrap();
    let g = GroupAlphabet::new(base, &[("x", "X")], &[("x", Some(n))]).unwrap();
    let n = n as usize;
    let names = (0..n).map(|i| format!("g{i}")).collect();
    let mut product = vec![0usize; n * n];
    for i in 0..n {
        for j in 0..n {
            product[i * n + j] = (i + j) % n;
        }
    }
    CayleyTable::new(g, names, 0, product, vec![1 % n, (n - 1) % n]).unwrap()
}

fn perm_group_table(
    g: GroupAlphabet,
    degree: usize,
    letter_perms: Vec<Vec<usize>>,
) -> CayleyTable {
    // materialize the group generated by the letter images
    let id: Vec<usize> = (0..degree).collect();
    let mut elems = vec![id.clone()];
    let mut ids: HashMap<Vec<usize>, usize> = HashMap::from([(id, 0)]);
    let mut queue = VecDeque::from([0usize]);
    while let Some(i) = queue.pop_front() {
        for p in &letter_perms {
            let q = compose(&elems[i], p);
            if !ids.contains_key(&q) {
                ids.insert(q.clone(), elems.len());
                elems.push(q);
                queue.push_back(elems.len() - 1);
            }
        }
    }
    let n = elems.len();
    let mut product = vec![0usize; n * n];
    for i in 0..n {
        for j in 0..n {
            product[i * n + j] = ids[&compose(&elems[i], &elems[j])];
        }
    }
    let names = (0..n).map(|i| format!("p{i}")).collect();
    let gen_map = letter_perms.iter().map(|p| ids[p]).collect();
    CayleyTable::new(g, names, 0, product, gen_map).unwrap()
}

/// The symmetric group on three points, generated by the transpositions
/// `x = (1 2)` and `y = (2 3)`, both of order 2.
pub fn s3_table() -> CayleyTable {
    let base =
        crate::alphabet::PartitionedAlphabet::new::<&str>(&[], &["x", "X", "y", "Y"], &[]).unwrap();
    let g = GroupAlphabet::new(
        base,
        &[("x", "X"), ("y", "Y")],
        &[("x", Some(2)), ("y", Some(2))],
    )
    .unwrap();
    let x = vec![1, 0, 2];
    let y = vec![0, 2, 1];
    perm_group_table(g, 3, vec![x.clone(), x, y.clone(), y])
}

/// ℤ/6 with `x` of order 2 (the element 3) and `y` of order 3 (the
/// element 2).
pub fn z6_table() -> CayleyTable {
    let base =
        crate::alphabet::PartitionedAlphabet::new::<&str>(&[], &["x", "X", "y", "Y"], &[]).unwrap();
    let g = GroupAlphabet::new(
        base,
        &[("x", "X"), ("y", "Y")],
        &[("x", Some(2)), ("y", Some(3))],
    )
    .unwrap();
    let shift = |s: usize| -> Vec<usize> { (0..6).map(|i| (i + s) % 6).collect() };
    perm_group_table(g, 6, vec![shift(3), shift(3), shift(2), shift(4)])
}
