//! Closure algebra: union, intersection, complement, concatenation, star,
//! letter renaming, stack-top tracking, finite quotients, and equivalence
//! with counterexample extraction.
//!
//! All binary operations require both operands to share the same partitioned
//! alphabet; a mismatch is an error, not a coercion.

use std::collections::{BTreeMap, HashMap};

use crate::alphabet::{Letter, PartitionedAlphabet, Word};
use crate::determinize::determinize;
use crate::emptiness::shortest_witness;
use crate::error::{Error, Result};
use crate::vpa::{CallRule, Configuration, InternalRule, ReturnRule, StackSym, State, Vpa, BOTTOM};

fn require_same_alphabet(a: &Vpa, b: &Vpa) -> Result<()> {
    if a.alphabet() == b.alphabet() {
        Ok(())
    } else {
        Err(Error::PartitionMismatch)
    }
}

/// Disjoint juxtaposition: both state sets and stack alphabets side by side,
/// all initial states kept.
pub fn union(a: &Vpa, b: &Vpa) -> Result<Vpa> {
    require_same_alphabet(a, b)?;
    let n1 = a.num_states();
    // non-bottom symbols of `a` keep their indices, `b`'s are shifted
    let shift = a.num_stack_syms() - 1;
    let sh_sym = |s: StackSym| if s == BOTTOM { BOTTOM } else { s + shift };

    let mut state_names: Vec<String> =
        a.state_names().iter().map(|s| format!("l_{s}")).collect();
    state_names.extend(b.state_names().iter().map(|s| format!("r_{s}")));
    let mut stack_names: Vec<String> = a.stack_names()[1..].to_vec();
    stack_names.extend(b.stack_names()[1..].iter().cloned());

    let mut calls: Vec<CallRule> = a.call_rules().to_vec();
    let mut internals: Vec<InternalRule> = a.internal_rules().to_vec();
    let mut returns: Vec<ReturnRule> = a.return_rules().to_vec();
    for r in b.call_rules() {
        calls.push(CallRule { from: r.from + n1, letter: r.letter, push: r.push + shift, to: r.to + n1 });
    }
    for r in b.internal_rules() {
        internals.push(InternalRule { from: r.from + n1, letter: r.letter, to: r.to + n1 });
    }
    for r in b.return_rules() {
        returns.push(ReturnRule { from: r.from + n1, letter: r.letter, pop: sh_sym(r.pop), to: r.to + n1 });
    }
    let initials: Vec<State> = a
        .initials()
        .iter()
        .copied()
        .chain(b.initials().iter().map(|&q| q + n1))
        .collect();
    let accepts: Vec<State> = a
        .accepts()
        .iter()
        .copied()
        .chain(b.accepts().iter().map(|&q| q + n1))
        .collect();
    Ok(Vpa::new(
        a.alphabet().clone(),
        state_names,
        initials,
        accepts,
        stack_names,
        calls,
        internals,
        returns,
    ))
}

/// Synchronous product. Both operands read the same letters, so their stack
/// heights agree and pushed symbols pair up; the bottom symbol is fused.
pub fn intersection(a: &Vpa, b: &Vpa) -> Result<Vpa> {
    require_same_alphabet(a, b)?;
    let n2 = b.num_states();
    let m2 = b.num_stack_syms() - 1;
    let st = |q1: State, q2: State| q1 * n2 + q2;
    let sym = |s1: StackSym, s2: StackSym| (s1 - 1) * m2 + (s2 - 1) + 1;

    let state_names = (0..a.num_states())
        .flat_map(|q1| {
            (0..n2).map(move |q2| (q1, q2))
        })
        .map(|(q1, q2)| format!("{}*{}", a.state_name(q1), b.state_name(q2)))
        .collect();
    let stack_names = a.stack_names()[1..]
        .iter()
        .flat_map(|s1| b.stack_names()[1..].iter().map(move |s2| format!("{s1}*{s2}")))
        .collect();

    let mut calls = Vec::new();
    for r1 in a.call_rules() {
        for r2 in b.call_rules() {
            if r1.letter == r2.letter {
                calls.push(CallRule {
                    from: st(r1.from, r2.from),
                    letter: r1.letter,
                    push: sym(r1.push, r2.push),
                    to: st(r1.to, r2.to),
                });
            }
        }
    }
    let mut internals = Vec::new();
    for r1 in a.internal_rules() {
        for r2 in b.internal_rules() {
            if r1.letter == r2.letter {
                internals.push(InternalRule {
                    from: st(r1.from, r2.from),
                    letter: r1.letter,
                    to: st(r1.to, r2.to),
                });
            }
        }
    }
    let mut returns = Vec::new();
    for r1 in a.return_rules() {
        for r2 in b.return_rules() {
            if r1.letter != r2.letter {
                continue;
            }
            // mixed bottom/non-bottom pops cannot happen in a synchronized run
            let pop = match (r1.pop, r2.pop) {
                (BOTTOM, BOTTOM) => BOTTOM,
                (BOTTOM, _) | (_, BOTTOM) => continue,
                (s1, s2) => sym(s1, s2),
            };
            returns.push(ReturnRule {
                from: st(r1.from, r2.from),
                letter: r1.letter,
                pop,
                to: st(r1.to, r2.to),
            });
        }
    }
    let initials: Vec<State> = a
        .initials()
        .iter()
        .flat_map(|&q1| b.initials().iter().map(move |&q2| st(q1, q2)))
        .collect();
    let accepts: Vec<State> = a
        .accepts()
        .iter()
        .flat_map(|&q1| b.accepts().iter().map(move |&q2| st(q1, q2)))
        .collect();
    Ok(Vpa::new(
        a.alphabet().clone(),
        state_names,
        initials,
        accepts,
        stack_names,
        calls,
        internals,
        returns,
    ))
}

/// Determinize, then flip acceptance. The determinized automaton is complete,
/// so flipping is sound.
pub fn complement(a: &Vpa) -> Vpa {
    let d = determinize(a);
    let accepts: Vec<State> = (0..d.num_states()).filter(|q| !d.accepts().contains(q)).collect();
    Vpa::new(
        d.alphabet().clone(),
        d.state_names().to_vec(),
        d.initials().iter().copied(),
        accepts,
        d.stack_names()[1..].to_vec(),
        d.call_rules().to_vec(),
        d.internal_rules().to_vec(),
        d.return_rules().to_vec(),
    )
}

/// Concatenation. The two stack alphabets stay disjoint, so a symbol's
/// identity reveals which part pushed it: when the second part reads a
/// return over a first-part symbol or the bottom, its bottom-return rules
/// apply (popping the foreign symbol, reading the bottom in place). The seam
/// is crossed by duplicating the second part's initial moves onto the first
/// part's accepting states.
pub fn concat(a: &Vpa, b: &Vpa) -> Result<Vpa> {
    require_same_alphabet(a, b)?;
    let n1 = a.num_states();
    let shift = a.num_stack_syms() - 1;
    let m1 = a.num_stack_syms();

    let mut state_names: Vec<String> =
        a.state_names().iter().map(|s| format!("l_{s}")).collect();
    state_names.extend(b.state_names().iter().map(|s| format!("r_{s}")));
    let mut stack_names: Vec<String> = a.stack_names()[1..].to_vec();
    stack_names.extend(b.stack_names()[1..].iter().cloned());

    let mut calls: Vec<CallRule> = a.call_rules().to_vec();
    let mut internals: Vec<InternalRule> = a.internal_rules().to_vec();
    let mut returns: Vec<ReturnRule> = a.return_rules().to_vec();

    for r in b.call_rules() {
        calls.push(CallRule { from: r.from + n1, letter: r.letter, push: r.push + shift, to: r.to + n1 });
    }
    for r in b.internal_rules() {
        internals.push(InternalRule { from: r.from + n1, letter: r.letter, to: r.to + n1 });
    }
    for r in b.return_rules() {
        if r.pop == BOTTOM {
            // the second part's floor: the true bottom or any leftover
            // first-part symbol
            returns.push(ReturnRule { from: r.from + n1, letter: r.letter, pop: BOTTOM, to: r.to + n1 });
            for s1 in 1..m1 {
                returns.push(ReturnRule { from: r.from + n1, letter: r.letter, pop: s1, to: r.to + n1 });
            }
        } else {
            returns.push(ReturnRule { from: r.from + n1, letter: r.letter, pop: r.pop + shift, to: r.to + n1 });
        }
    }

    // seam: from an accepting state of the first part, act as an initial
    // state of the second part
    for &p in a.accepts() {
        for r in b.call_rules() {
            if b.initials().contains(&r.from) {
                calls.push(CallRule { from: p, letter: r.letter, push: r.push + shift, to: r.to + n1 });
            }
        }
        for r in b.internal_rules() {
            if b.initials().contains(&r.from) {
                internals.push(InternalRule { from: p, letter: r.letter, to: r.to + n1 });
            }
        }
        for r in b.return_rules() {
            if b.initials().contains(&r.from) && r.pop == BOTTOM {
                returns.push(ReturnRule { from: p, letter: r.letter, pop: BOTTOM, to: r.to + n1 });
                for s1 in 1..m1 {
                    returns.push(ReturnRule { from: p, letter: r.letter, pop: s1, to: r.to + n1 });
                }
            }
        }
    }

    let eps_in_a = a.initials().iter().any(|q| a.accepts().contains(q));
    let eps_in_b = b.initials().iter().any(|q| b.accepts().contains(q));
    let mut initials: Vec<State> = a.initials().iter().copied().collect();
    if eps_in_a {
        initials.extend(b.initials().iter().map(|&q| q + n1));
    }
    let mut accepts: Vec<State> = b.accepts().iter().map(|&q| q + n1).collect();
    if eps_in_b {
        accepts.extend(a.accepts().iter().copied());
    }
    Ok(Vpa::new(
        a.alphabet().clone(),
        state_names,
        initials,
        accepts,
        stack_names,
        calls,
        internals,
        returns,
    ))
}

/// Kleene star. States carry a bit telling whether the current stack top was
/// pushed during the current iteration; each pushed symbol stores the bit it
/// replaces. With the bit clear the top belongs to an earlier iteration and
/// the automaton treats it as its floor: bottom-return rules apply, popping
/// stale symbols. Restarting an iteration is allowed exactly in accepting
/// states and clears the bit.
pub fn star(a: &Vpa) -> Vpa {
    let n = a.num_states();
    let m = a.num_stack_syms() - 1;
    let st = |q: State, t: usize| q * 2 + t;
    let start = 2 * n;
    let sym = |s: StackSym, bit: usize| (s - 1) * 2 + bit + 1;

    let mut state_names: Vec<String> = Vec::with_capacity(2 * n + 1);
    for q in 0..n {
        state_names.push(format!("{}|0", a.state_name(q)));
        state_names.push(format!("{}|1", a.state_name(q)));
    }
    state_names.push("start".into());
    let mut stack_names = Vec::with_capacity(2 * m);
    for s in &a.stack_names()[1..] {
        stack_names.push(format!("{s}|0"));
        stack_names.push(format!("{s}|1"));
    }

    let mut calls = Vec::new();
    let mut internals = Vec::new();
    let mut returns = Vec::new();

    for r in a.call_rules() {
        for t in 0..2 {
            calls.push(CallRule { from: st(r.from, t), letter: r.letter, push: sym(r.push, t), to: st(r.to, 1) });
        }
    }
    for r in a.internal_rules() {
        for t in 0..2 {
            internals.push(InternalRule { from: st(r.from, t), letter: r.letter, to: st(r.to, t) });
        }
    }
    for r in a.return_rules() {
        if r.pop == BOTTOM {
            // floor behaviour: true bottom, or any stale symbol to discard
            returns.push(ReturnRule { from: st(r.from, 0), letter: r.letter, pop: BOTTOM, to: st(r.to, 0) });
            for s in 1..=m {
                for bit in 0..2 {
                    returns.push(ReturnRule { from: st(r.from, 0), letter: r.letter, pop: sym(s, bit), to: st(r.to, 0) });
                }
            }
        } else {
            for bit in 0..2 {
                returns.push(ReturnRule { from: st(r.from, 1), letter: r.letter, pop: sym(r.pop, bit), to: st(r.to, bit) });
            }
        }
    }

    // restart moves: in an accepting state, behave like an initial state of a
    // fresh iteration (bit cleared, pushes store a clear bit)
    let restart_sources: Vec<State> = a
        .accepts()
        .iter()
        .flat_map(|&q| [st(q, 0), st(q, 1)])
        .chain([start])
        .collect();
    for &p in &restart_sources {
        for r in a.call_rules() {
            if a.initials().contains(&r.from) {
                calls.push(CallRule { from: p, letter: r.letter, push: sym(r.push, 0), to: st(r.to, 1) });
            }
        }
        for r in a.internal_rules() {
            if a.initials().contains(&r.from) {
                internals.push(InternalRule { from: p, letter: r.letter, to: st(r.to, 0) });
            }
        }
        for r in a.return_rules() {
            if a.initials().contains(&r.from) && r.pop == BOTTOM {
                returns.push(ReturnRule { from: p, letter: r.letter, pop: BOTTOM, to: st(r.to, 0) });
                for s in 1..=m {
                    for bit in 0..2 {
                        returns.push(ReturnRule { from: p, letter: r.letter, pop: sym(s, bit), to: st(r.to, 0) });
                    }
                }
            }
        }
    }

    let mut accepts: Vec<State> = a
        .accepts()
        .iter()
        .flat_map(|&q| [st(q, 0), st(q, 1)])
        .collect();
    accepts.push(start);
    Vpa::new(
        a.alphabet().clone(),
        state_names,
        [start],
        accepts,
        stack_names,
        calls,
        internals,
        returns,
    )
}

/// Apply a letter-to-letter map into `target`. Every letter of the source
/// alphabet must be mapped, and each image must sit in the same part of the
/// partition as its preimage.
pub fn rename(v: &Vpa, target: &PartitionedAlphabet, map: &[(String, String)]) -> Result<Vpa> {
    let src = v.alphabet();
    let mut table: BTreeMap<Letter, Letter> = BTreeMap::new();
    for (from, to) in map {
        let lf = src.lookup(from)?;
        let lt = target.lookup(to)?;
        if src.kind(lf) != target.kind(lt) {
            return Err(Error::PartitionViolation(from.clone(), to.clone()));
        }
        table.insert(lf, lt);
    }
    for l in src.letters() {
        if !table.contains_key(&l) {
            return Err(Error::UnknownLetter(src.name(l).to_owned()));
        }
    }
    let calls = v
        .call_rules()
        .iter()
        .map(|r| CallRule { letter: table[&r.letter], ..*r })
        .collect();
    let internals = v
        .internal_rules()
        .iter()
        .map(|r| InternalRule { letter: table[&r.letter], ..*r })
        .collect();
    let returns = v
        .return_rules()
        .iter()
        .map(|r| ReturnRule { letter: table[&r.letter], ..*r })
        .collect();
    Ok(Vpa::new(
        target.clone(),
        v.state_names().to_vec(),
        v.initials().iter().copied(),
        v.accepts().iter().copied(),
        v.stack_names()[1..].to_vec(),
        calls,
        internals,
        returns,
    ))
}

/// The stack-top tracking construction: states are pairs of an original
/// state and the window of up to `k` topmost stack symbols.
pub struct Tracked {
    pub vpa: Vpa,
    pub k: usize,
    /// Tracked-state index per (original state, window). Windows list the
    /// topmost symbol first.
    pub ids: HashMap<(State, Vec<StackSym>), State>,
}

fn window_push(w: &[StackSym], s: StackSym, k: usize) -> Vec<StackSym> {
    let mut out = Vec::with_capacity(k.min(w.len() + 1));
    out.push(s);
    out.extend_from_slice(&w[..w.len().min(k.saturating_sub(1))]);
    out
}

/// Reconstruct the original state and top-`k` window alongside each state.
/// Accepts the same language; extra seed pairs become additional tracked
/// states (used by the quotients to start with a remembered window over an
/// empty stack). A return read over the true bottom while the window is
/// nonempty consumes the window head instead; such states are unreachable
/// from the standard initial states, so the language is unchanged.
pub fn track_stack_top(v: &Vpa, k: usize, seeds: &[(State, Vec<StackSym>)]) -> Tracked {
    let mut pairs: Vec<(State, Vec<StackSym>)> = Vec::new();
    let mut ids: HashMap<(State, Vec<StackSym>), State> = HashMap::new();
    let mut syms: Vec<(StackSym, Vec<StackSym>)> = Vec::new();
    let mut sym_ids: HashMap<(StackSym, Vec<StackSym>), usize> = HashMap::new();
    let add_pair = |p: (State, Vec<StackSym>),
                        pairs: &mut Vec<(State, Vec<StackSym>)>,
                        ids: &mut HashMap<(State, Vec<StackSym>), State>| {
        *ids.entry(p.clone()).or_insert_with(|| {
            pairs.push(p);
            pairs.len() - 1
        })
    };
    for &q in v.initials() {
        add_pair((q, Vec::new()), &mut pairs, &mut ids);
    }
    for seed in seeds {
        add_pair(seed.clone(), &mut pairs, &mut ids);
    }

    let mut calls = Vec::new();
    let mut internals = Vec::new();
    let mut returns = Vec::new();

    loop {
        let np = pairs.len();
        let ns = syms.len();
        for i in 0..pairs.len() {
            let (q, win) = pairs[i].clone();
            for r in v.internal_rules() {
                if r.from == q {
                    let to = add_pair((r.to, win.clone()), &mut pairs, &mut ids);
                    internals.push(InternalRule { from: i, letter: r.letter, to });
                }
            }
            for r in v.call_rules() {
                if r.from == q {
                    let key = (r.push, win.clone());
                    let sid = *sym_ids.entry(key.clone()).or_insert_with(|| {
                        syms.push(key);
                        syms.len() - 1
                    });
                    let to = add_pair((r.to, window_push(&win, r.push, k)), &mut pairs, &mut ids);
                    calls.push(CallRule { from: i, letter: r.letter, push: sid + 1, to });
                }
            }
            for r in v.return_rules() {
                if r.from != q {
                    continue;
                }
                if r.pop == BOTTOM {
                    if win.is_empty() {
                        let to = add_pair((r.to, Vec::new()), &mut pairs, &mut ids);
                        returns.push(ReturnRule { from: i, letter: r.letter, pop: BOTTOM, to });
                    }
                } else if win.first() == Some(&r.pop) {
                    // pop a real symbol whose saved window rebuilds ours
                    for sid in 0..syms.len() {
                        let (s, saved) = syms[sid].clone();
                        if s == r.pop && window_push(&saved, s, k) == win {
                            let to = add_pair((r.to, saved), &mut pairs, &mut ids);
                            returns.push(ReturnRule { from: i, letter: r.letter, pop: sid + 1, to });
                        }
                    }
                    // window head over the true bottom (seeded starts only)
                    let to = add_pair((r.to, win[1..].to_vec()), &mut pairs, &mut ids);
                    returns.push(ReturnRule { from: i, letter: r.letter, pop: BOTTOM, to });
                }
            }
        }
        if pairs.len() == np && syms.len() == ns {
            break;
        }
        calls.clear();
        internals.clear();
        returns.clear();
    }

    let fmt_win = |w: &[StackSym]| {
        w.iter()
            .map(|&s| v.stack_names()[s].clone())
            .collect::<Vec<_>>()
            .join(".")
    };
    let state_names = pairs
        .iter()
        .map(|(q, w)| format!("{}[{}]", v.state_name(*q), fmt_win(w)))
        .collect();
    let stack_names = syms
        .iter()
        .map(|(s, w)| format!("{}[{}]", v.stack_names()[*s], fmt_win(w)))
        .collect();
    let initials: Vec<State> = v.initials().iter().map(|&q| ids[&(q, Vec::new())]).collect();
    let accepts: Vec<State> = pairs
        .iter()
        .enumerate()
        .filter(|(_, (q, _))| v.accepts().contains(q))
        .map(|(i, _)| i)
        .collect();
    let vpa = Vpa::new(
        v.alphabet().clone(),
        state_names,
        initials,
        accepts,
        stack_names,
        calls,
        internals,
        returns,
    );
    Tracked { vpa, k, ids }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Left,
    Right,
}

/// Quotient by a finite word set: `Left` gives `{ u : w u in L, w in words }`,
/// `Right` gives `{ u : u w in L, w in words }`.
pub fn quotient_finite(v: &Vpa, words: &[Word], side: Side) -> Result<Vpa> {
    let maxlen = words.iter().map(Vec::len).max().unwrap_or(0);
    // one spare slot so a suffix can never pop the window dry while real
    // symbols remain below it
    let k = maxlen + 1;
    match side {
        Side::Left => {
            // states reached after each prefix word, with the stack top
            // remembered in the window
            let mut seeds: Vec<(State, Vec<StackSym>)> = Vec::new();
            for w in words {
                let run = v.run(w)?;
                for c in &run.final_configs {
                    let win: Vec<StackSym> =
                        c.stack.iter().rev().take_while(|&&s| s != BOTTOM).take(k).copied().collect();
                    seeds.push((c.state, win));
                }
            }
            let tracked = track_stack_top(v, k, &seeds);
            let initials: Vec<State> = seeds.iter().map(|s| tracked.ids[s]).collect();
            if initials.is_empty() {
                // no prefix survives: empty language
                return Ok(Vpa::new(
                    v.alphabet().clone(),
                    vec!["dead".into()],
                    [0],
                    [],
                    vec![],
                    vec![],
                    vec![],
                    vec![],
                ));
            }
            let t = &tracked.vpa;
            Ok(Vpa::new(
                t.alphabet().clone(),
                t.state_names().to_vec(),
                initials,
                t.accepts().iter().copied(),
                t.stack_names()[1..].to_vec(),
                t.call_rules().to_vec(),
                t.internal_rules().to_vec(),
                t.return_rules().to_vec(),
            ))
        }
        Side::Right => {
            let tracked = track_stack_top(v, k, &[]);
            let mut pairs: Vec<(State, Vec<StackSym>)> =
                vec![Default::default(); tracked.ids.len()];
            for (p, &i) in &tracked.ids {
                pairs[i] = p.clone();
            }
            let mut accepts: Vec<State> = Vec::new();
            'pair: for (i, (q, win)) in pairs.iter().enumerate() {
                let mut stack = vec![BOTTOM];
                stack.extend(win.iter().rev());
                let cfg = Configuration { state: *q, stack };
                for w in words {
                    if v.run_from(vec![cfg.clone()], w)?.accepted {
                        accepts.push(i);
                        continue 'pair;
                    }
                }
            }
            let t = &tracked.vpa;
            Ok(Vpa::new(
                t.alphabet().clone(),
                t.state_names().to_vec(),
                t.initials().iter().copied(),
                accepts,
                t.stack_names()[1..].to_vec(),
                t.call_rules().to_vec(),
                t.internal_rules().to_vec(),
                t.return_rules().to_vec(),
            ))
        }
    }
}

/// Exact equivalence: `None` when the languages agree, otherwise a shortest
/// (then lexicographically least) word in the symmetric difference.
pub fn equivalent(a: &Vpa, b: &Vpa) -> Result<Option<Word>> {
    require_same_alphabet(a, b)?;
    let w1 = shortest_witness(&intersection(a, &complement(b))?);
    let w2 = shortest_witness(&intersection(b, &complement(a))?);
    Ok(match (w1, w2) {
        (None, None) => None,
        (Some(w), None) | (None, Some(w)) => Some(w),
        (Some(x), Some(y)) => Some(if (x.len(), &x) <= (y.len(), &y) { x } else { y }),
    })
}
