//! Core graphs of finitely generated subgroups of free groups: wedge
//! construction, folding, membership, index, Schreier preimage automata,
//! and witness families for infinite index.
//!
//! Edges are stored once per inverse pair, labeled by the positive letter
//! and directed; reading the inverse letter traverses the edge backwards.
//! Vertices are canonically renumbered breadth-first from the base over
//! sorted labels, so two graphs are isomorphic exactly when they are equal.

use std::collections::{BTreeSet, HashMap, VecDeque};

use crate::alphabet::{GroupAlphabet, Letter, Word};
use crate::dfa::Dfa;
use crate::error::{Error, Result};

/// A folded, based, labeled graph. Vertex 0 is the base.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoreGraph {
    alphabet: GroupAlphabet,
    n_vertices: usize,
    /// (source, positive label, target)
    edges: BTreeSet<(usize, Letter, usize)>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum IndexVerdict {
    Finite(usize),
    /// Some vertex cannot read `letter` (a base-alphabet letter, possibly an
    /// inverse letter): the subgroup has infinite index.
    Infinite { vertex: usize, letter: Letter },
}

/// The two halves of the infinite-index witness family: `w1` labels a path
/// base → witness vertex, `w2` a path back, and the family is
/// `{ w1 α w2 : α over {letter, letter^-1} }`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WitnessFamily {
    pub w1: Word,
    pub w2: Word,
    pub letter: Letter,
}

struct UnionFind(Vec<usize>);

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind((0..n).collect())
    }
    fn find(&mut self, x: usize) -> usize {
        if self.0[x] != x {
            let r = self.find(self.0[x]);
            self.0[x] = r;
        }
        self.0[x]
    }
    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.0[ra.max(rb)] = ra.min(rb);
        }
    }
}

fn positive(g: &GroupAlphabet, l: Letter) -> (Letter, bool) {
    let inv = g.inv(l);
    if l < inv {
        (l, true)
    } else {
        (inv, false)
    }
}

/// Fold an edge list to a fixed point, then prune hanging vertices and
/// renumber canonically. `base` names the base vertex in the input indexing.
fn fold_prune_canonicalize(
    g: &GroupAlphabet,
    n: usize,
    base: usize,
    edges: &[(usize, Letter, usize)],
) -> CoreGraph {
    let mut uf = UnionFind::new(n);
    let mut current: BTreeSet<(usize, Letter, usize)> = edges.iter().copied().collect();
    loop {
        // merge targets of equal (source, label), sources of equal (label, target)
        let mut merged = false;
        let mut by_src: HashMap<(usize, Letter), usize> = HashMap::new();
        let mut by_tgt: HashMap<(Letter, usize), usize> = HashMap::new();
        for &(s, l, t) in &current {
            if let Some(&t2) = by_src.get(&(s, l)) {
                if t2 != t {
                    uf.union(t, t2);
                    merged = true;
                }
            } else {
                by_src.insert((s, l), t);
            }
            if let Some(&s2) = by_tgt.get(&(l, t)) {
                if s2 != s {
                    uf.union(s, s2);
                    merged = true;
                }
            } else {
                by_tgt.insert((l, t), s);
            }
        }
        current = current
            .into_iter()
            .map(|(s, l, t)| (uf.find(s), l, uf.find(t)))
            .collect();
        if !merged {
            break;
        }
    }
    let base = uf.find(base);

    // prune degree-1 vertices other than the base until stable
    loop {
        let mut degree: HashMap<usize, usize> = HashMap::new();
        for &(s, _, t) in &current {
            *degree.entry(s).or_default() += 1;
            *degree.entry(t).or_default() += 1;
        }
        let hanging: BTreeSet<usize> = degree
            .iter()
            .filter(|&(&v, &d)| d == 1 && v != base)
            .map(|(&v, _)| v)
            .collect();
        if hanging.is_empty() {
            break;
        }
        current.retain(|&(s, _, t)| !hanging.contains(&s) && !hanging.contains(&t));
    }

    // canonical breadth-first renumbering from the base
    let mut fwd: HashMap<(usize, Letter), usize> = HashMap::new();
    let mut bwd: HashMap<(usize, Letter), usize> = HashMap::new();
    for &(s, l, t) in &current {
        fwd.insert((s, l), t);
        bwd.insert((t, l), s);
    }
    let labels: Vec<Letter> = g.positive_letters();
    let mut order: HashMap<usize, usize> = HashMap::new();
    let mut queue = VecDeque::new();
    order.insert(base, 0);
    queue.push_back(base);
    while let Some(v) = queue.pop_front() {
        for &l in &labels {
            for next in [fwd.get(&(v, l)), bwd.get(&(v, l))].into_iter().flatten() {
                if !order.contains_key(next) {
                    order.insert(*next, order.len());
                    queue.push_back(*next);
                }
            }
        }
    }
    let edges: BTreeSet<(usize, Letter, usize)> = current
        .iter()
        .map(|&(s, l, t)| (order[&s], l, order[&t]))
        .collect();
    CoreGraph {
        alphabet: g.clone(),
        n_vertices: order.len().max(1),
        edges,
    }
}

/// Build the core graph of the subgroup generated by `generators`:
/// generators are freely reduced, wedged as loops at the base, folded and
/// pruned. Generators reducing to the empty word are skipped and returned.
pub fn build_core_graph(g: &GroupAlphabet, generators: &[Word]) -> Result<(CoreGraph, Vec<Word>)> {
    let mut skipped = Vec::new();
    let mut edges: Vec<(usize, Letter, usize)> = Vec::new();
    let mut n = 1; // vertex 0 is the base
    for gen in generators {
        let red = g.free_reduce(gen)?;
        if red.is_empty() {
            skipped.push(gen.clone());
            continue;
        }
        let mut cur = 0;
        for (i, &l) in red.iter().enumerate() {
            let next = if i + 1 == red.len() {
                0
            } else {
                n += 1;
                n - 1
            };
            let (lab, forward) = positive(g, l);
            if forward {
                edges.push((cur, lab, next));
            } else {
                edges.push((next, lab, cur));
            }
            cur = next;
        }
    }
    Ok((fold_prune_canonicalize(g, n, 0, &edges), skipped))
}

impl CoreGraph {
    /// Reassemble a core graph from raw parts: labels are normalized to the
    /// positive letter of each pair, then the graph is refolded, pruned and
    /// renumbered, so equal subgroups compare equal.
    pub fn from_parts(
        alphabet: &GroupAlphabet,
        n_vertices: usize,
        base: usize,
        edges: &[(usize, Letter, usize)],
    ) -> Result<CoreGraph> {
        if base >= n_vertices.max(1) {
            return Err(Error::Parse(format!("base vertex {base} out of range")));
        }
        let mut normalized = Vec::with_capacity(edges.len());
        for &(s, l, t) in edges {
            if s >= n_vertices || t >= n_vertices {
                return Err(Error::Parse(format!("edge ({s}, {t}) out of range")));
            }
            if l.index() >= alphabet.base().len() {
                return Err(Error::UnknownLetter(format!("#{}", l.index())));
            }
            let (lab, forward) = positive(alphabet, l);
            normalized.push(if forward { (s, lab, t) } else { (t, lab, s) });
        }
        Ok(fold_prune_canonicalize(alphabet, n_vertices.max(1), base, &normalized))
    }

    pub fn alphabet(&self) -> &GroupAlphabet {
        &self.alphabet
    }

    pub fn num_vertices(&self) -> usize {
        self.n_vertices
    }

    pub fn base(&self) -> usize {
        0
    }

    pub fn edges(&self) -> &BTreeSet<(usize, Letter, usize)> {
        &self.edges
    }

    fn maps(&self) -> (HashMap<(usize, Letter), usize>, HashMap<(usize, Letter), usize>) {
        let mut fwd = HashMap::new();
        let mut bwd = HashMap::new();
        for &(s, l, t) in &self.edges {
            fwd.insert((s, l), t);
            bwd.insert((t, l), s);
        }
        (fwd, bwd)
    }

    /// Trace a reduced word from `from`; `None` when the path leaves the
    /// graph.
    pub fn trace(&self, from: usize, w: &[Letter]) -> Option<usize> {
        let (fwd, bwd) = self.maps();
        let mut v = from;
        for &l in w {
            let (lab, forward) = positive(&self.alphabet, l);
            let map = if forward { &fwd } else { &bwd };
            v = *map.get(&(v, lab))?;
        }
        Some(v)
    }

    /// True iff the free reduction of `w` labels a loop at the base.
    pub fn subgroup_membership(&self, w: &[Letter]) -> Result<bool> {
        let red = self.alphabet.free_reduce(w)?;
        Ok(self.trace(0, &red) == Some(0))
    }

    /// Finite iff every vertex reads every letter in both directions; then
    /// the index equals the vertex count.
    pub fn index(&self) -> IndexVerdict {
        let (fwd, bwd) = self.maps();
        for v in 0..self.n_vertices {
            for &lab in &self.alphabet.positive_letters() {
                if !fwd.contains_key(&(v, lab)) {
                    return IndexVerdict::Infinite { vertex: v, letter: lab };
                }
                if !bwd.contains_key(&(v, lab)) {
                    return IndexVerdict::Infinite {
                        vertex: v,
                        letter: self.alphabet.inv(lab),
                    };
                }
            }
        }
        IndexVerdict::Finite(self.n_vertices)
    }

    /// The Schreier automaton on cosets: states are vertices, start and
    /// accept the base, letters act by edge traversal. Accepts the full
    /// preimage of the subgroup, unreduced words included, because every
    /// letter acts as a permutation.
    pub fn preimage_dfa(&self) -> Result<Dfa> {
        if !matches!(self.index(), IndexVerdict::Finite(_)) {
            return Err(Error::InfiniteIndex);
        }
        let (fwd, bwd) = self.maps();
        let alphabet = self.alphabet.base().clone();
        let nl = alphabet.len();
        let mut trans = vec![0usize; self.n_vertices * nl];
        for v in 0..self.n_vertices {
            for l in alphabet.letters() {
                let (lab, forward) = positive(&self.alphabet, l);
                let map = if forward { &fwd } else { &bwd };
                trans[v * nl + l.index()] = map[&(v, lab)];
            }
        }
        Ok(Dfa::new(alphabet, self.n_vertices, 0, [0], trans))
    }

    /// Shortest path base → `to` as a word, by breadth-first search over
    /// sorted labels.
    fn path_from_base(&self, to: usize) -> Word {
        let (fwd, bwd) = self.maps();
        let mut prev: HashMap<usize, (usize, Letter)> = HashMap::new();
        let mut queue = VecDeque::new();
        queue.push_back(0);
        while let Some(v) = queue.pop_front() {
            if v == to {
                break;
            }
            for &lab in &self.alphabet.positive_letters() {
                let steps = [
                    (fwd.get(&(v, lab)), lab),
                    (bwd.get(&(v, lab)), self.alphabet.inv(lab)),
                ];
                for (next, letter) in steps {
                    if let Some(&u) = next {
                        if u != 0 && !prev.contains_key(&u) {
                            prev.insert(u, (v, letter));
                            queue.push_back(u);
                        }
                    }
                }
            }
        }
        let mut w = Vec::new();
        let mut v = to;
        while v != 0 {
            let (p, l) = prev[&v];
            w.push(l);
            v = p;
        }
        w.reverse();
        w
    }

    /// For an infinite-index subgroup: words `w1`, `w2` and the missing
    /// letter `a` such that `w1 α w2` lies in the subgroup's full preimage
    /// exactly when `α ∈ {a, a^-1}*` has exponent sum zero.
    pub fn infinite_index_witness(&self) -> Result<WitnessFamily> {
        let IndexVerdict::Infinite { vertex, letter } = self.index() else {
            return Err(Error::FiniteIndex);
        };
        let w1 = self.path_from_base(vertex);
        let w2 = self.alphabet.invert_word(&w1);
        Ok(WitnessFamily { w1, w2, letter })
    }
}

/// Brute-force coset enumeration over reduced words, identifying `u`, `u'`
/// when `u' u^-1` lies in the subgroup. Returns the coset count, or `None`
/// once more than `cap` cosets appear (infinite index at desk scale).
pub fn coset_enumeration(g: &CoreGraph, cap: usize) -> Option<usize> {
    let alph = g.alphabet().clone();
    let mut reps: Vec<Word> = vec![Vec::new()];
    let mut queue: VecDeque<Word> = VecDeque::from([Vec::new()]);
    while let Some(u) = queue.pop_front() {
        for l in alph.base().letters() {
            let mut ul = u.clone();
            ul.push(l);
            let v = alph.free_reduce(&ul).unwrap();
            let known = reps.iter().any(|r| {
                let mut w = v.clone();
                w.extend(alph.invert_word(r));
                g.subgroup_membership(&w).unwrap()
            });
            if !known {
                if reps.len() >= cap {
                    return None;
                }
                reps.push(v.clone());
                queue.push_back(v);
            }
        }
    }
    Some(reps.len())
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::prelude::*;
    use rand_chacha::ChaCha8Rng;

    fn f2() -> GroupAlphabet {
        GroupAlphabet::free(&["a", "b"]).unwrap()
    }

    fn build(gens: &[&str]) -> CoreGraph {
        let g = f2();
        let words: Vec<Word> = gens.iter().map(|s| g.parse_word(s).unwrap()).collect();
        build_core_graph(&g, &words).unwrap().0
    }

    #[test]
    fn whole_group_and_single_generator() {
        let whole = build(&["a", "b"]);
        assert_eq!(whole.num_vertices(), 1);
        assert_eq!(whole.edges().len(), 2);
        assert_eq!(whole.index(), IndexVerdict::Finite(1));

        let za = build(&["a"]);
        assert_eq!(za.num_vertices(), 1);
        assert_eq!(za.edges().len(), 1);
        let g = f2();
        let b = g.base().lookup("b").unwrap();
        assert_eq!(za.index(), IndexVerdict::Infinite { vertex: 0, letter: b });
    }

    #[test]
    fn index_two_subgroup() {
        // <b, a^2, a b a^-1>
        let h = build(&["b", "aa", "abA"]);
        assert_eq!(h.num_vertices(), 2);
        assert_eq!(h.index(), IndexVerdict::Finite(2));
        let g = f2();
        let w = |s: &str| g.parse_word(s).unwrap();
        assert!(h.subgroup_membership(&w("")).unwrap());
        assert!(h.subgroup_membership(&w("aab")).unwrap());
        assert!(!h.subgroup_membership(&w("a")).unwrap());
        // powers of generators stay inside
        for s in ["bbb", "aaaaaa", "abAabAabA"] {
            assert!(h.subgroup_membership(&w(s)).unwrap());
        }
        let d = h.preimage_dfa().unwrap();
        for s in ["aa", "aA", "b"] {
            assert!(d.accepts_word(&w(s)), "{s}");
        }
        for s in ["a", "ab"] {
            assert!(!d.accepts_word(&w(s)), "{s}");
        }
        // DFA agrees with reduce + membership everywhere
        for u in g.base().words_up_to(6) {
            assert_eq!(d.accepts_word(&u), h.subgroup_membership(&u).unwrap());
        }
        assert!(d.is_permutation_dfa());
    }

    #[test]
    fn duplicate_and_empty_generators() {
        assert_eq!(build(&["ab", "ab"]), build(&["ab"]));
        let g = f2();
        let gens = vec![g.parse_word("aA").unwrap(), g.parse_word("ab").unwrap()];
        let (h, skipped) = build_core_graph(&g, &gens).unwrap();
        assert_eq!(skipped, vec![g.parse_word("aA").unwrap()]);
        assert_eq!(h, build(&["ab"]));
    }

    #[test]
    fn shared_prefix_folds() {
        let h = build(&["abA", "abbA"]);
        let g = f2();
        let w = |s: &str| g.parse_word(s).unwrap();
        // the folded graph recognizes the subgroup generated by both loops
        assert!(h.subgroup_membership(&w("abA")).unwrap());
        assert!(h.subgroup_membership(&w("abbA")).unwrap());
        assert!(h.subgroup_membership(&w("abAabbA")).unwrap());
        assert!(!h.subgroup_membership(&w("a")).unwrap());
        assert!(!h.subgroup_membership(&w("bb")).unwrap());
    }

    #[test]
    fn membership_invariant_under_reduction() {
        let h = build(&["b", "aa", "abA"]);
        let g = f2();
        for u in g.base().words_up_to(5) {
            let r = g.free_reduce(&u).unwrap();
            assert_eq!(
                h.subgroup_membership(&u).unwrap(),
                h.subgroup_membership(&r).unwrap()
            );
        }
    }

    #[test]
    fn folding_is_confluent() {
        // canonical renumbering makes isomorphism equality; shuffling the
        // wedge edge order changes the merge order inside folding
        let g = f2();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..50 {
            let n_gens = rng.gen_range(1..=4);
            let gens: Vec<Word> = (0..n_gens)
                .map(|_| {
                    let len = rng.gen_range(1..=6);
                    (0..len)
                        .map(|_| Letter(rng.gen_range(0..4u16)))
                        .collect()
                })
                .collect();
            let reference = build_core_graph(&g, &gens).unwrap().0;
            let mut shuffled = gens.clone();
            shuffled.shuffle(&mut rng);
            assert_eq!(build_core_graph(&g, &shuffled).unwrap().0, reference);
        }
    }

    #[test]
    fn witness_family_contract() {
        let g = f2();
        for gens in [vec!["a"], vec!["ab"], vec!["a", "bab"]] {
            let h = build(&gens);
            let IndexVerdict::Infinite { .. } = h.index() else {
                panic!("expected infinite index for {gens:?}");
            };
            let fam = h.infinite_index_witness().unwrap();
            // w1 w2 is a loop at the base
            let mut loop_word = fam.w1.clone();
            loop_word.extend_from_slice(&fam.w2);
            assert!(h.subgroup_membership(&loop_word).unwrap());
            let inv = g.inv(fam.letter);
            for alpha in words_over(&[fam.letter, inv], 8) {
                let mut w = fam.w1.clone();
                w.extend_from_slice(&alpha);
                w.extend_from_slice(&fam.w2);
                let expsum = alpha.iter().filter(|&&l| l == fam.letter).count() as i64
                    - alpha.iter().filter(|&&l| l == inv).count() as i64;
                assert_eq!(
                    h.subgroup_membership(&w).unwrap(),
                    expsum == 0,
                    "gens {gens:?} alpha {alpha:?}"
                );
            }
        }
    }

    fn words_over(letters: &[Letter], max_len: usize) -> Vec<Word> {
        let mut out: Vec<Word> = vec![Vec::new()];
        let mut layer: Vec<Word> = vec![Vec::new()];
        for _ in 0..max_len {
            let mut next = Vec::new();
            for w in &layer {
                for &l in letters {
                    let mut w2 = w.clone();
                    w2.push(l);
                    next.push(w2);
                }
            }
            out.extend(next.iter().cloned());
            layer = next;
        }
        out
    }

    #[test]
    fn coset_enumeration_agrees() {
        for (gens, expect) in [
            (vec!["a", "b"], Some(1)),
            (vec!["b", "aa", "abA"], Some(2)),
            (vec!["a"], None),
            (vec!["ab"], None),
        ] {
            let h = build(&gens);
            assert_eq!(coset_enumeration(&h, 30), expect, "{gens:?}");
            match h.index() {
                IndexVerdict::Finite(n) => assert_eq!(expect, Some(n)),
                IndexVerdict::Infinite { .. } => assert_eq!(expect, None),
            }
        }
    }
}
