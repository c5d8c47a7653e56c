//! Exact emptiness with shortest-witness extraction.
//!
//! Saturates well-matched summary pairs `(q, q')` and closes the initial
//! states under well-matched segments, bottom-returns, and pending calls.
//! Witnesses are built Dijkstra-style with cost `(length, word)`, so the
//! returned witness is a shortest accepted word and lexicographically least
//! (by letter order) among those.

use std::cmp::Reverse;
use std::collections::{BinaryHeap, HashMap, HashSet};

use crate::alphabet::{Letter, Word};
use crate::vpa::{State, Vpa, BOTTOM};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
enum Item {
    /// A well-matched word can take the first state to the second at equal
    /// stack level.
    Wm(State, State),
    /// Reachable from an initial configuration by a word with no pending
    /// calls (well-matched blocks interleaved with bottom-returns).
    NoPending(State),
    /// Reachable from an initial configuration by an arbitrary word.
    Reach(State),
}

/// Shortest accepted word, or `None` when the language is empty.
pub fn shortest_witness(v: &Vpa) -> Option<Word> {
    let mut dist: HashMap<Item, (usize, Word)> = HashMap::new();
    let mut heap: BinaryHeap<Reverse<((usize, Word), Item)>> = BinaryHeap::new();
    let mut done: HashSet<Item> = HashSet::new();
    // finalized summaries indexed by endpoint
    let mut wm_by_left: HashMap<State, Vec<State>> = HashMap::new();
    let mut wm_by_right: HashMap<State, Vec<State>> = HashMap::new();
    let mut nopending_done: Vec<State> = Vec::new();
    let mut reach_done: Vec<State> = Vec::new();

    // static edge indexes
    let mut internal_from: HashMap<State, Vec<(Letter, State)>> = HashMap::new();
    for r in v.internal_rules() {
        internal_from.entry(r.from).or_default().push((r.letter, r.to));
    }
    let mut calls_into: HashMap<State, Vec<(State, Letter, usize)>> = HashMap::new();
    let mut calls_from: HashMap<State, Vec<(Letter, State)>> = HashMap::new();
    for r in v.call_rules() {
        calls_into.entry(r.to).or_default().push((r.from, r.letter, r.push));
        calls_from.entry(r.from).or_default().push((r.letter, r.to));
    }
    let mut returns_from: HashMap<State, Vec<(Letter, usize, State)>> = HashMap::new();
    let mut bottom_returns_from: HashMap<State, Vec<(Letter, State)>> = HashMap::new();
    for r in v.return_rules() {
        if r.pop == BOTTOM {
            bottom_returns_from.entry(r.from).or_default().push((r.letter, r.to));
        } else {
            returns_from.entry(r.from).or_default().push((r.letter, r.pop, r.to));
        }
    }

    macro_rules! relax {
        ($item:expr, $cost:expr) => {{
            let item = $item;
            let cost: (usize, Word) = $cost;
            if !done.contains(&item)
                && dist.get(&item).map_or(true, |old| *old > cost)
            {
                dist.insert(item, cost.clone());
                heap.push(Reverse((cost, item)));
            }
        }};
    }

    for q in 0..v.num_states() {
        relax!(Item::Wm(q, q), (0, Vec::new()));
    }
    for &q in v.initials() {
        relax!(Item::NoPending(q), (0, Vec::new()));
    }

    while let Some(Reverse((cost, item))) = heap.pop() {
        if !done.insert(item) {
            continue;
        }
        if dist.get(&item) != Some(&cost) {
            // stale entry superseded by a better one
            done.remove(&item);
            continue;
        }
        let (len, word) = cost;
        let ext = |w: &Word, l: Letter| {
            let mut w2 = w.clone();
            w2.push(l);
            w2
        };
        let join = |a: &Word, b: &Word| {
            let mut w = a.clone();
            w.extend_from_slice(b);
            w
        };
        match item {
            Item::Wm(q, r) => {
                if let Some(edges) = internal_from.get(&r) {
                    for &(x, r2) in edges {
                        relax!(Item::Wm(q, r2), (len + 1, ext(&word, x)));
                    }
                }
                // compose with finalized summaries on either side
                if let Some(lefts) = wm_by_right.get(&q) {
                    for &p in lefts.clone().iter() {
                        let (l2, w2) = dist[&Item::Wm(p, q)].clone();
                        relax!(Item::Wm(p, r), (l2 + len, join(&w2, &word)));
                    }
                }
                if let Some(rights) = wm_by_left.get(&r) {
                    for &t in rights.clone().iter() {
                        let (l2, w2) = dist[&Item::Wm(r, t)].clone();
                        relax!(Item::Wm(q, t), (len + l2, join(&word, &w2)));
                    }
                }
                // wrap in a matching call/return pair
                if let (Some(ins), Some(outs)) = (calls_into.get(&q), returns_from.get(&r)) {
                    for &(p, a, gamma) in ins {
                        for &(b, pop, t) in outs {
                            if pop == gamma {
                                let mut w2 = Vec::with_capacity(len + 2);
                                w2.push(a);
                                w2.extend_from_slice(&word);
                                w2.push(b);
                                relax!(Item::Wm(p, t), (len + 2, w2));
                            }
                        }
                    }
                }
                // extend reachability through this summary
                if nopending_done.contains(&q) {
                    let (l2, w2) = dist[&Item::NoPending(q)].clone();
                    relax!(Item::NoPending(r), (l2 + len, join(&w2, &word)));
                }
                if reach_done.contains(&q) {
                    let (l2, w2) = dist[&Item::Reach(q)].clone();
                    relax!(Item::Reach(r), (l2 + len, join(&w2, &word)));
                }
                wm_by_left.entry(q).or_default().push(r);
                wm_by_right.entry(r).or_default().push(q);
            }
            Item::NoPending(q) => {
                if let Some(edges) = bottom_returns_from.get(&q) {
                    for &(b, q2) in edges {
                        relax!(Item::NoPending(q2), (len + 1, ext(&word, b)));
                    }
                }
                if let Some(rights) = wm_by_left.get(&q) {
                    for &r in rights.clone().iter() {
                        let (l2, w2) = dist[&Item::Wm(q, r)].clone();
                        relax!(Item::NoPending(r), (len + l2, join(&word, &w2)));
                    }
                }
                relax!(Item::Reach(q), (len, word.clone()));
                nopending_done.push(q);
            }
            Item::Reach(q) => {
                if v.accepts().contains(&q) {
                    return Some(word);
                }
                if let Some(edges) = calls_from.get(&q) {
                    for &(a, q2) in edges {
                        relax!(Item::Reach(q2), (len + 1, ext(&word, a)));
                    }
                }
                if let Some(rights) = wm_by_left.get(&q) {
                    for &r in rights.clone().iter() {
                        let (l2, w2) = dist[&Item::Wm(q, r)].clone();
                        relax!(Item::Reach(r), (len + l2, join(&word, &w2)));
                    }
                }
                reach_done.push(q);
            }
        }
    }
    None
}

pub fn is_empty(v: &Vpa) -> bool {
    shortest_witness(v).is_none()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gallery;

    #[test]
    fn gallery_witnesses() {
        assert_eq!(shortest_witness(&gallery::unreduced_doubling()), Some(vec![]));
        assert_eq!(shortest_witness(&gallery::an_bn()), Some(vec![]));
        assert_eq!(shortest_witness(&gallery::empty_language()), None);
    }

    #[test]
    fn witness_is_shortest_and_lex_least() {
        for v in gallery::suite() {
            match shortest_witness(&v) {
                None => assert!(v.enumerate_accepted(10).is_empty()),
                Some(w) => {
                    assert!(v.accepts_word(&w).unwrap());
                    // agreement with brute-force enumeration
                    let all = v.enumerate_accepted(w.len());
                    assert_eq!(all.first(), Some(&w));
                }
            }
        }
    }

    #[test]
    fn nonempty_needs_unmatched_call_closure() {
        // language a^+ (pending calls only): witness must pass through the
        // pending-call closure
        let p = gallery::ab_alphabet();
        let a = p.lookup("a").unwrap();
        let v = crate::vpa::Vpa::new(
            p,
            vec!["i".into(), "f".into()],
            [0],
            [1],
            vec!["$".into()],
            vec![
                crate::vpa::CallRule { from: 0, letter: a, push: 1, to: 1 },
                crate::vpa::CallRule { from: 1, letter: a, push: 1, to: 1 },
            ],
            vec![],
            vec![],
        );
        assert_eq!(shortest_witness(&v), Some(vec![a]));
    }

    #[test]
    fn nonempty_needs_bottom_return_closure() {
        // language b^+ via bottom reads
        let p = gallery::ab_alphabet();
        let b = p.lookup("b").unwrap();
        let v = crate::vpa::Vpa::new(
            p,
            vec!["i".into(), "f".into()],
            [0],
            [1],
            vec![],
            vec![],
            vec![],
            vec![
                crate::vpa::ReturnRule { from: 0, letter: b, pop: BOTTOM, to: 1 },
                crate::vpa::ReturnRule { from: 1, letter: b, pop: BOTTOM, to: 1 },
            ],
        );
        assert_eq!(shortest_witness(&v), Some(vec![b]));
    }
}
