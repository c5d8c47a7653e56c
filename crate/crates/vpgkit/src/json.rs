//! JSON descriptors for the persistent objects: alphabets, automata, core
//! graphs, and Cayley tables. All names are symbolic so files stay readable
//! and diffable; indices are resolved on load.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::alphabet::{GroupAlphabet, LetterKind, PartitionedAlphabet};
use crate::dfa::Dfa;
use crate::error::{Error, Result};
use crate::recognisable::CayleyTable;
use crate::stallings::CoreGraph;
use crate::vpa::{CallRule, InternalRule, ReturnRule, Vpa, BOTTOM_NAME};

#[derive(Serialize, Deserialize, Debug, Clone, Default, PartialEq, Eq)]
pub struct AlphabetJson {
    #[serde(default)]
    pub calls: Vec<String>,
    #[serde(default)]
    pub internals: Vec<String>,
    #[serde(default)]
    pub returns: Vec<String>,
    /// Positive letter to its inverse; presence makes this a group alphabet.
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub inverses: BTreeMap<String, String>,
    /// Order per positive letter: a number, or "inf".
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub orders: BTreeMap<String, OrderJson>,
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq, Eq)]
#[serde(untagged)]
pub enum OrderJson {
    Finite(u32),
    Named(String),
}

pub fn alphabet_to_json(p: &PartitionedAlphabet) -> AlphabetJson {
    let names = |k: LetterKind| p.part(k).into_iter().map(|l| p.name(l).to_owned()).collect();
    AlphabetJson {
        calls: names(LetterKind::Call),
        internals: names(LetterKind::Internal),
        returns: names(LetterKind::Return),
        inverses: BTreeMap::new(),
        orders: BTreeMap::new(),
    }
}

pub fn group_alphabet_to_json(g: &GroupAlphabet) -> AlphabetJson {
    let mut j = alphabet_to_json(g.base());
    for l in g.positive_letters() {
        let name = g.base().name(l).to_owned();
        j.inverses.insert(name.clone(), g.base().name(g.inv(l)).to_owned());
        let order = match g.order(l) {
            Some(k) => OrderJson::Finite(k),
            None => OrderJson::Named("inf".into()),
        };
        j.orders.insert(name, order);
    }
    j
}

pub fn alphabet_from_json(j: &AlphabetJson) -> Result<PartitionedAlphabet> {
    PartitionedAlphabet::new(&j.calls, &j.internals, &j.returns)
}

pub fn group_alphabet_from_json(j: &AlphabetJson) -> Result<GroupAlphabet> {
    let base = alphabet_from_json(j)?;
    let pairs: Vec<(&str, &str)> = j
        .inverses
        .iter()
        .map(|(a, b)| (a.as_str(), b.as_str()))
        .collect();
    let mut orders: Vec<(&str, Option<u32>)> = Vec::new();
    for (name, o) in &j.orders {
        let ord = match o {
            OrderJson::Finite(k) => Some(*k),
            OrderJson::Named(s) if s == "inf" => None,
            OrderJson::Named(s) => {
                return Err(Error::Parse(format!("order {s:?} is not a number or \"inf\"")))
            }
        };
        orders.push((name, ord));
    }
    GroupAlphabet::new(base, &pairs, &orders)
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq, Eq)]
pub struct VpaJson {
    pub alphabet: AlphabetJson,
    pub states: Vec<String>,
    pub initials: Vec<String>,
    pub accepts: Vec<String>,
    /// Non-bottom stack symbols; rules may also name the bottom symbol.
    pub stack: Vec<String>,
    /// (from, letter, push, to)
    #[serde(default)]
    pub calls: Vec<(String, String, String, String)>,
    /// (from, letter, to)
    #[serde(default)]
    pub internals: Vec<(String, String, String)>,
    /// (from, letter, pop, to)
    #[serde(default)]
    pub returns: Vec<(String, String, String, String)>,
}

pub fn vpa_to_json(v: &Vpa) -> VpaJson {
    let p = v.alphabet();
    let st = |q: usize| v.state_name(q).to_owned();
    let sym = |s: usize| v.stack_names()[s].clone();
    VpaJson {
        alphabet: alphabet_to_json(p),
        states: v.state_names().to_vec(),
        initials: v.initials().iter().map(|&q| st(q)).collect(),
        accepts: v.accepts().iter().map(|&q| st(q)).collect(),
        stack: v.stack_names()[1..].to_vec(),
        calls: v
            .call_rules()
            .iter()
            .map(|r| (st(r.from), p.name(r.letter).to_owned(), sym(r.push), st(r.to)))
            .collect(),
        internals: v
            .internal_rules()
            .iter()
            .map(|r| (st(r.from), p.name(r.letter).to_owned(), st(r.to)))
            .collect(),
        returns: v
            .return_rules()
            .iter()
            .map(|r| (st(r.from), p.name(r.letter).to_owned(), sym(r.pop), st(r.to)))
            .collect(),
    }
}

pub fn vpa_from_json(j: &VpaJson) -> Result<Vpa> {
    let p = alphabet_from_json(&j.alphabet)?;
    let state = |name: &str| -> Result<usize> {
        j.states
            .iter()
            .position(|s| s == name)
            .ok_or_else(|| Error::Parse(format!("unknown state {name:?}")))
    };
    let sym = |name: &str| -> Result<usize> {
        if name == BOTTOM_NAME {
            return Ok(0);
        }
        j.stack
            .iter()
            .position(|s| s == name)
            .map(|i| i + 1)
            .ok_or_else(|| Error::Parse(format!("unknown stack symbol {name:?}")))
    };
    let initials = j.initials.iter().map(|s| state(s)).collect::<Result<Vec<_>>>()?;
    let accepts = j.accepts.iter().map(|s| state(s)).collect::<Result<Vec<_>>>()?;
    let mut calls = Vec::new();
    for (f, l, s, t) in &j.calls {
        calls.push(CallRule {
            from: state(f)?,
            letter: p.lookup(l)?,
            push: sym(s)?,
            to: state(t)?,
        });
    }
    let mut internals = Vec::new();
    for (f, l, t) in &j.internals {
        internals.push(InternalRule {
            from: state(f)?,
            letter: p.lookup(l)?,
            to: state(t)?,
        });
    }
    let mut returns = Vec::new();
    for (f, l, s, t) in &j.returns {
        returns.push(ReturnRule {
            from: state(f)?,
            letter: p.lookup(l)?,
            pop: sym(s)?,
            to: state(t)?,
        });
    }
    Ok(Vpa::new(
        p,
        j.states.clone(),
        initials,
        accepts,
        j.stack.clone(),
        calls,
        internals,
        returns,
    ))
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq, Eq)]
pub struct CoreGraphJson {
    pub alphabet: AlphabetJson,
    pub vertices: usize,
    pub base: usize,
    /// (source, letter, target), letters positive
    pub edges: Vec<(usize, String, usize)>,
}

pub fn core_graph_to_json(g: &CoreGraph) -> CoreGraphJson {
    let p = g.alphabet().base();
    CoreGraphJson {
        alphabet: group_alphabet_to_json(g.alphabet()),
        vertices: g.num_vertices(),
        base: g.base(),
        edges: g
            .edges()
            .iter()
            .map(|&(s, l, t)| (s, p.name(l).to_owned(), t))
            .collect(),
    }
}

pub fn core_graph_from_json(j: &CoreGraphJson) -> Result<CoreGraph> {
    let g = group_alphabet_from_json(&j.alphabet)?;
    let mut edges = Vec::new();
    for (s, l, t) in &j.edges {
        edges.push((*s, g.base().lookup(l)?, *t));
    }
    CoreGraph::from_parts(&g, j.vertices, j.base, &edges)
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq, Eq)]
pub struct CayleyJson {
    pub alphabet: AlphabetJson,
    pub elements: Vec<String>,
    pub identity: String,
    /// rows[i][j] names the product of elements i and j
    pub rows: Vec<Vec<String>>,
    /// letter to element
    pub generator_map: BTreeMap<String, String>,
}

pub fn cayley_to_json(t: &CayleyTable) -> CayleyJson {
    let names = t.element_names();
    let n = t.size();
    CayleyJson {
        alphabet: group_alphabet_to_json(t.alphabet()),
        elements: names.to_vec(),
        identity: names[t.identity()].clone(),
        rows: (0..n)
            .map(|i| (0..n).map(|j| names[t.mul(i, j)].clone()).collect())
            .collect(),
        generator_map: t
            .alphabet()
            .base()
            .letters()
            .map(|l| {
                (
                    t.alphabet().base().name(l).to_owned(),
                    names[t.letter_image(l)].clone(),
                )
            })
            .collect(),
    }
}

pub fn cayley_from_json(j: &CayleyJson) -> Result<CayleyTable> {
    let g = group_alphabet_from_json(&j.alphabet)?;
    let elem = |name: &str| -> Result<usize> {
        j.elements
            .iter()
            .position(|e| e == name)
            .ok_or_else(|| Error::InvalidGroup(format!("unknown element {name:?}")))
    };
    let n = j.elements.len();
    if j.rows.len() != n || j.rows.iter().any(|r| r.len() != n) {
        return Err(Error::InvalidGroup("table is not square".into()));
    }
    let mut product = Vec::with_capacity(n * n);
    for row in &j.rows {
        for e in row {
            product.push(elem(e)?);
        }
    }
    let mut gen_map = vec![0usize; g.base().len()];
    for l in g.base().letters() {
        let name = g.base().name(l);
        let target = j
            .generator_map
            .get(name)
            .ok_or_else(|| Error::InvalidGroup(format!("letter {name} missing from generator map")))?;
        gen_map[l.index()] = elem(target)?;
    }
    CayleyTable::new(g, j.elements.clone(), elem(&j.identity)?, product, gen_map)
}

/// DFA descriptor with symbolic state names.
#[derive(Serialize, Deserialize, Debug, Clone, PartialEq, Eq)]
pub struct DfaJson {
    pub alphabet: AlphabetJson,
    pub states: Vec<String>,
    pub start: String,
    pub accepts: Vec<String>,
    /// (from, letter, to)
    pub transitions: Vec<(String, String, String)>,
}

pub fn dfa_to_json(d: &Dfa) -> DfaJson {
    let p = d.alphabet();
    let name = |q: usize| format!("q{q}");
    let mut transitions = Vec::new();
    for q in 0..d.num_states() {
        for l in p.letters() {
            transitions.push((name(q), p.name(l).to_owned(), name(d.step(q, l))));
        }
    }
    DfaJson {
        alphabet: alphabet_to_json(p),
        states: (0..d.num_states()).map(name).collect(),
        start: name(d.start()),
        accepts: d.accepts().iter().map(|&q| name(q)).collect(),
        transitions,
    }
}

pub fn dfa_from_json(j: &DfaJson) -> Result<Dfa> {
    let p = alphabet_from_json(&j.alphabet)?;
    let state = |name: &str| -> Result<usize> {
        j.states
            .iter()
            .position(|s| s == name)
            .ok_or_else(|| Error::Parse(format!("unknown state {name:?}")))
    };
    let n = j.states.len();
    let nl = p.len();
    let mut trans = vec![usize::MAX; n * nl];
    for (f, l, t) in &j.transitions {
        trans[state(f)? * nl + p.lookup(l)?.index()] = state(t)?;
    }
    if trans.contains(&usize::MAX) {
        return Err(Error::Parse("transition table is incomplete".into()));
    }
    let accepts = j.accepts.iter().map(|s| state(s)).collect::<Result<Vec<_>>>()?;
    Ok(Dfa::new(p, n, state(&j.start)?, accepts, trans))
}
