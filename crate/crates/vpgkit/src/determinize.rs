//! Determinization via the summary-pair subset construction.
//!
//! A constructed control state is a pair `(S, R)`: `R` is the set of states
//! reachable on the input so far, and `S` is the set of summary pairs
//! `(q, q')` meaning the well-matched segment since the last pending call
//! can take `q` to `q'` without consuming anything below its own pushes.
//! A call pushes the current `(S, R)` together with the call letter and
//! restarts the summary; a return pops it and splices the summary across
//! the matching push. Since well-matched segments never inspect the symbol
//! below them, `S` needs no stack-symbol component.
//!
//! The result is deterministic and complete (the empty pair acts as sink)
//! and accepts the same language; its state count is bounded by
//! 2^(|Q|^2 + |Q|).

use std::collections::{BTreeSet, HashMap};

use crate::alphabet::LetterKind;
use crate::vpa::{CallRule, InternalRule, ReturnRule, State, Vpa, BOTTOM};

type Summary = BTreeSet<(State, State)>;
type DState = (Summary, BTreeSet<State>);

pub fn determinize(v: &Vpa) -> Vpa {
    let alphabet = v.alphabet().clone();
    let mut states: Vec<DState> = Vec::new();
    let mut ids: HashMap<DState, usize> = HashMap::new();
    // a pushed symbol is the source state paired with the call letter
    let mut syms: Vec<(usize, crate::alphabet::Letter)> = Vec::new();
    let mut sym_ids: HashMap<(usize, crate::alphabet::Letter), usize> = HashMap::new();

    let init: DState = (
        v.initials().iter().map(|&q| (q, q)).collect(),
        v.initials().clone(),
    );
    states.push(init.clone());
    ids.insert(init, 0);

    let mut calls: BTreeSet<CallRule> = BTreeSet::new();
    let mut internals: BTreeSet<InternalRule> = BTreeSet::new();
    let mut returns: BTreeSet<ReturnRule> = BTreeSet::new();

    let intern = |st: DState,
                      states: &mut Vec<DState>,
                      ids: &mut HashMap<DState, usize>|
     -> usize {
        if let Some(&id) = ids.get(&st) {
            id
        } else {
            states.push(st.clone());
            ids.insert(st, states.len() - 1);
            states.len() - 1
        }
    };

    loop {
        let n_states = states.len();
        let n_syms = syms.len();
        for ds in 0..states.len() {
            for l in alphabet.letters() {
                let cur = states[ds].clone();
                match alphabet.kind(l) {
                    LetterKind::Internal => {
                        let (s, r) = (&cur.0, &cur.1);
                        let mut s2 = Summary::new();
                        for &(q, q1) in s {
                            for &q2 in v.internal_targets(q1, l) {
                                s2.insert((q, q2));
                            }
                        }
                        let mut r2 = BTreeSet::new();
                        for &q in r {
                            r2.extend(v.internal_targets(q, l).iter().copied());
                        }
                        let to = intern((s2, r2), &mut states, &mut ids);
                        internals.insert(InternalRule { from: ds, letter: l, to });
                    }
                    LetterKind::Call => {
                        let r = &cur.1;
                        let mut r2 = BTreeSet::new();
                        for &q in r {
                            for &(q2, _) in v.call_targets(q, l) {
                                r2.insert(q2);
                            }
                        }
                        let s2: Summary = r2.iter().map(|&q| (q, q)).collect();
                        let to = intern((s2, r2), &mut states, &mut ids);
                        let sym = *sym_ids.entry((ds, l)).or_insert_with(|| {
                            syms.push((ds, l));
                            syms.len() - 1
                        });
                        // +1: result symbol indices are 1-based over `syms`
                        calls.insert(CallRule { from: ds, letter: l, push: sym + 1, to });
                    }
                    LetterKind::Return => {
                        // on the bottom symbol the summary extends like an
                        // internal move
                        let (s, r) = (&cur.0, &cur.1);
                        let mut s2 = Summary::new();
                        for &(q, q1) in s {
                            for &q2 in v.return_targets(q1, l, BOTTOM) {
                                s2.insert((q, q2));
                            }
                        }
                        let mut r2 = BTreeSet::new();
                        for &q in r {
                            r2.extend(v.return_targets(q, l, BOTTOM).iter().copied());
                        }
                        let to = intern((s2, r2), &mut states, &mut ids);
                        returns.insert(ReturnRule { from: ds, letter: l, pop: BOTTOM, to });

                        for sym in 0..syms.len() {
                            let (src, a) = syms[sym];
                            let (s1, r1) = states[src].clone();
                            let s = &cur.0;
                            let mut s2 = Summary::new();
                            let mut r2 = BTreeSet::new();
                            for &(q, q1) in s1.iter() {
                                for &(q2, gamma) in v.call_targets(q1, a) {
                                    for &(p2, q3) in s.iter() {
                                        if p2 != q2 {
                                            continue;
                                        }
                                        for &q4 in v.return_targets(q3, l, gamma) {
                                            s2.insert((q, q4));
                                            if r1.contains(&q1) {
                                                r2.insert(q4);
                                            }
                                        }
                                    }
                                }
                            }
                            let to = intern((s2, r2), &mut states, &mut ids);
                            returns.insert(ReturnRule { from: ds, letter: l, pop: sym + 1, to });
                        }
                    }
                }
            }
        }
        if states.len() == n_states && syms.len() == n_syms {
            break;
        }
    }

    let accepts: Vec<State> = states
        .iter()
        .enumerate()
        .filter(|(_, (_, r))| r.iter().any(|q| v.accepts().contains(q)))
        .map(|(i, _)| i)
        .collect();
    let state_names = (0..states.len()).map(|i| format!("d{i}")).collect();
    let stack_names = syms
        .iter()
        .map(|(src, l)| format!("d{src}_{}", alphabet.name(*l)))
        .collect();
    Vpa::new(
        alphabet,
        state_names,
        [0],
        accepts,
        stack_names,
        calls.into_iter().collect(),
        internals.into_iter().collect(),
        returns.into_iter().collect(),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gallery;
    use crate::vpa::Vpa;

    fn check(v: &Vpa, max_len: usize) {
        let d = determinize(v);
        assert!(d.validate().is_valid());
        assert!(d.is_deterministic(), "not deterministic");
        assert!(d.is_complete(), "not complete");
        assert_eq!(v.find_disagreement(&d, max_len), None);
        let q = v.num_states();
        assert!(d.num_states() <= 1usize << (q * q + q).min(60));
    }

    #[test]
    fn determinize_gallery() {
        check(&gallery::an_bn(), 12);
        check(&gallery::unreduced_doubling(), 12);
        check(&gallery::mr_language(), 10);
        check(&gallery::even_a_inverses(), 8);
    }

    #[test]
    fn determinize_identity_case() {
        // already-deterministic single-state all-internal automaton
        let p = crate::alphabet::PartitionedAlphabet::new::<&str>(&[], &["x"], &[]).unwrap();
        let x = p.lookup("x").unwrap();
        let v = Vpa::new(
            p,
            vec!["q".into()],
            [0],
            [0],
            vec![],
            vec![],
            vec![crate::vpa::InternalRule { from: 0, letter: x, to: 0 }],
            vec![],
        );
        check(&v, 8);
    }

    #[test]
    fn determinize_nondeterministic_two_initials() {
        // union-by-juxtaposition of {a^n b^n} and {a^n b^2n}'s shapes:
        // nondeterministic via two initial states
        let v1 = gallery::an_bn_marked();
        let v2 = gallery::unreduced_doubling();
        let u = crate::ops::union(&v1, &v2).unwrap();
        check(&u, 12);
    }
}
