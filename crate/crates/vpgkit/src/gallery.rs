//! A small gallery of shipped automata and alphabets used by the test
//! suites, the pipelines, and the documentation.

use crate::alphabet::{GroupAlphabet, PartitionedAlphabet};
use crate::vpa::{CallRule, InternalRule, ReturnRule, Vpa, BOTTOM};

/// Two letters, `a` a call and `b` a return.
pub fn ab_alphabet() -> PartitionedAlphabet {
    PartitionedAlphabet::new(&["a"], &[], &["b"]).unwrap()
}

/// The rank-2 free-group alphabet `{a, b, A, B}` (uppercase = inverse)
/// partitioned with `a` a call, `b` a return, and both inverses internal.
pub fn fg_alphabet() -> PartitionedAlphabet {
    PartitionedAlphabet::new(&["a"], &["A", "B"], &["b"]).unwrap()
}

/// [`fg_alphabet`] with its inverse pairing and infinite orders.
pub fn fg_group_alphabet() -> GroupAlphabet {
    GroupAlphabet::new(fg_alphabet(), &[("a", "A"), ("b", "B")], &[]).unwrap()
}

/// `{a, A}` with `a` a call and `A = a^-1` a return: the symmetric partition
/// on one generator.
pub fn symmetric_z_alphabet() -> GroupAlphabet {
    let base = PartitionedAlphabet::new(&["a"], &[], &["A"]).unwrap();
    GroupAlphabet::new(base, &[("a", "A")], &[]).unwrap()
}

fn anbn_on(p: PartitionedAlphabet) -> Vpa {
    let a = p.lookup("a").unwrap();
    let b = p.lookup("b").unwrap();
    // stack: 1 = "#" marks the first call, 2 = "$" the rest
    Vpa::new(
        p,
        vec!["q0".into(), "q1".into(), "q2".into(), "q3".into()],
        [0],
        [0, 3],
        vec!["#".into(), "$".into()],
        vec![
            CallRule { from: 0, letter: a, push: 1, to: 1 },
            CallRule { from: 1, letter: a, push: 2, to: 1 },
        ],
        vec![],
        vec![
            ReturnRule { from: 1, letter: b, pop: 2, to: 2 },
            ReturnRule { from: 1, letter: b, pop: 1, to: 3 },
            ReturnRule { from: 2, letter: b, pop: 2, to: 2 },
            ReturnRule { from: 2, letter: b, pop: 1, to: 3 },
        ],
    )
}

/// `{a^n b^n : n >= 0}` over the two-letter alphabet.
pub fn an_bn() -> Vpa {
    anbn_on(ab_alphabet())
}

/// `{a^n b^n : n >= 0}` over the four-letter alphabet (the inverse letters
/// never occur).
pub fn an_bn_marked() -> Vpa {
    anbn_on(fg_alphabet())
}

/// The six-state automaton over `{a, A, B, b}` accepting
/// `{(a a a^-1)^n b^(2n) : n >= 0}` — each block `aaA` nets two pushes that
/// the `b`-run pops again. Its freely reduced language is `{a^n b^(2n)}`.
pub fn unreduced_doubling() -> Vpa {
    let p = fg_alphabet();
    let a = p.lookup("a").unwrap();
    let ainv = p.lookup("A").unwrap();
    let b = p.lookup("b").unwrap();
    // stack: 1 = "#" (outermost block), 2 = "$"
    Vpa::new(
        p,
        (0..6).map(|i| format!("q{i}")).collect(),
        [0],
        [0, 5],
        vec!["#".into(), "$".into()],
        vec![
            CallRule { from: 0, letter: a, push: 1, to: 1 },
            CallRule { from: 1, letter: a, push: 2, to: 2 },
            CallRule { from: 3, letter: a, push: 2, to: 1 },
        ],
        vec![InternalRule { from: 2, letter: ainv, to: 3 }],
        vec![
            ReturnRule { from: 3, letter: b, pop: 2, to: 4 },
            ReturnRule { from: 4, letter: b, pop: 2, to: 4 },
            ReturnRule { from: 4, letter: b, pop: 1, to: 5 },
        ],
    )
}

/// Accepts every word over the four-letter alphabet.
pub fn sigma_star() -> Vpa {
    let p = fg_alphabet();
    let a = p.lookup("a").unwrap();
    let ainv = p.lookup("A").unwrap();
    let binv = p.lookup("B").unwrap();
    let b = p.lookup("b").unwrap();
    Vpa::new(
        p,
        vec!["q".into()],
        [0],
        [0],
        vec!["$".into()],
        vec![CallRule { from: 0, letter: a, push: 1, to: 0 }],
        vec![
            InternalRule { from: 0, letter: ainv, to: 0 },
            InternalRule { from: 0, letter: binv, to: 0 },
        ],
        vec![
            ReturnRule { from: 0, letter: b, pop: 1, to: 0 },
            ReturnRule { from: 0, letter: b, pop: BOTTOM, to: 0 },
        ],
    )
}

/// Accepts nothing (no accepting state).
pub fn empty_language() -> Vpa {
    let p = fg_alphabet();
    let a = p.lookup("a").unwrap();
    Vpa::new(
        p,
        vec!["q".into()],
        [0],
        [],
        vec!["$".into()],
        vec![CallRule { from: 0, letter: a, push: 1, to: 0 }],
        vec![],
        vec![],
    )
}

/// Words with an even number of `A`s (the other letters are free).
pub fn even_a_inverses() -> Vpa {
    let p = fg_alphabet();
    let a = p.lookup("a").unwrap();
    let ainv = p.lookup("A").unwrap();
    let binv = p.lookup("B").unwrap();
    let b = p.lookup("b").unwrap();
    let mut calls = Vec::new();
    let mut internals = Vec::new();
    let mut returns = Vec::new();
    for q in 0..2 {
        calls.push(CallRule { from: q, letter: a, push: 1, to: q });
        internals.push(InternalRule { from: q, letter: ainv, to: 1 - q });
        internals.push(InternalRule { from: q, letter: binv, to: q });
        returns.push(ReturnRule { from: q, letter: b, pop: 1, to: q });
        returns.push(ReturnRule { from: q, letter: b, pop: BOTTOM, to: q });
    }
    Vpa::new(
        fg_alphabet(),
        vec!["even".into(), "odd".into()],
        [0],
        [0],
        vec!["$".into()],
        calls,
        internals,
        returns,
    )
}

/// All matched-response words: every return is matched by an earlier call.
pub fn mr_language() -> Vpa {
    let p = fg_alphabet();
    let a = p.lookup("a").unwrap();
    let ainv = p.lookup("A").unwrap();
    let binv = p.lookup("B").unwrap();
    let b = p.lookup("b").unwrap();
    Vpa::new(
        p,
        vec!["q".into()],
        [0],
        [0],
        vec!["$".into()],
        vec![CallRule { from: 0, letter: a, push: 1, to: 0 }],
        vec![
            InternalRule { from: 0, letter: ainv, to: 0 },
            InternalRule { from: 0, letter: binv, to: 0 },
        ],
        // no bottom-return rule: an unmatched return blocks
        vec![ReturnRule { from: 0, letter: b, pop: 1, to: 0 }],
    )
}

/// The fixed six-automaton suite over the shared four-letter partition used
/// by the closure-algebra tests.
pub fn suite() -> Vec<Vpa> {
    vec![
        unreduced_doubling(),
        an_bn_marked(),
        sigma_star(),
        empty_language(),
        even_a_inverses(),
        mr_language(),
    ]
}
