//! The visibly pushdown automaton core: configurations, runs, membership,
//! validation.
//!
//! Nondeterminism is the primitive representation; determinism is a checkable
//! property. Acceptance is by final state only — the stack may be nonempty.
//! Returns on the empty stack read the bottom symbol and leave it in place;
//! an automaton may simply lack bottom-return transitions, which blocks such
//! runs. Missing transitions block runs.

use std::collections::{BTreeSet, HashMap, HashSet};

use crate::alphabet::{Letter, LetterKind, PartitionedAlphabet, Word};
use crate::error::{Error, Result};

pub type State = usize;
/// Stack symbols are indices into the stack alphabet; index 0 is the bottom
/// symbol, which is never pushed.
pub type StackSym = usize;

pub const BOTTOM: StackSym = 0;
pub const BOTTOM_NAME: &str = "bot";

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CallRule {
    pub from: State,
    pub letter: Letter,
    pub push: StackSym,
    pub to: State,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct InternalRule {
    pub from: State,
    pub letter: Letter,
    pub to: State,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ReturnRule {
    pub from: State,
    pub letter: Letter,
    /// Symbol read from the top of the stack; may be [`BOTTOM`].
    pub pop: StackSym,
    pub to: State,
}

/// A configuration: control state plus stack contents, bottom first.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Configuration {
    pub state: State,
    /// `stack[0]` is always the bottom symbol.
    pub stack: Vec<StackSym>,
}

impl Configuration {
    pub fn initial(state: State) -> Self {
        Configuration {
            state,
            stack: vec![BOTTOM],
        }
    }
}

#[derive(Debug, Clone)]
pub struct RunResult {
    pub accepted: bool,
    pub final_configs: Vec<Configuration>,
    /// One accepting run, as a configuration per consumed prefix, when the
    /// word is accepted.
    pub trace: Option<Vec<Configuration>>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    /// A call rule pushes the bottom symbol.
    BottomPushed(CallRule),
    /// A rule is keyed by a letter outside its part of the partition.
    VisibilityBroken {
        letter: String,
        expected: LetterKind,
        actual: LetterKind,
    },
    UnknownState(State),
    UnknownStackSymbol(StackSym),
    NoInitialState,
}

#[derive(Debug, Clone, Default)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

/// A (non)deterministic visibly pushdown automaton.
#[derive(Debug, Clone)]
pub struct Vpa {
    alphabet: PartitionedAlphabet,
    state_names: Vec<String>,
    initials: BTreeSet<State>,
    accepts: BTreeSet<State>,
    /// Stack symbol names; index 0 is the bottom symbol.
    stack_names: Vec<String>,
    calls: Vec<CallRule>,
    internals: Vec<InternalRule>,
    returns: Vec<ReturnRule>,
    call_idx: HashMap<(State, Letter), Vec<(State, StackSym)>>,
    int_idx: HashMap<(State, Letter), Vec<State>>,
    ret_idx: HashMap<(State, Letter, StackSym), Vec<State>>,
}

impl Vpa {
    /// Assemble an automaton. `stack_names` lists the non-bottom stack
    /// symbols; stack symbol indices in the rules are 1-based into it, with
    /// 0 denoting the bottom symbol. No validation happens here; see
    /// [`Vpa::validate`].
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        alphabet: PartitionedAlphabet,
        state_names: Vec<String>,
        initials: impl IntoIterator<Item = State>,
        accepts: impl IntoIterator<Item = State>,
        stack_names: Vec<String>,
        mut calls: Vec<CallRule>,
        mut internals: Vec<InternalRule>,
        mut returns: Vec<ReturnRule>,
    ) -> Self {
        calls.sort_unstable();
        calls.dedup();
        internals.sort_unstable();
        internals.dedup();
        returns.sort_unstable();
        returns.dedup();
        let mut all_stack_names = vec![BOTTOM_NAME.to_owned()];
        all_stack_names.extend(stack_names);
        let mut vpa = Vpa {
            alphabet,
            state_names,
            initials: initials.into_iter().collect(),
            accepts: accepts.into_iter().collect(),
            stack_names: all_stack_names,
            calls,
            internals,
            returns,
            call_idx: HashMap::new(),
            int_idx: HashMap::new(),
            ret_idx: HashMap::new(),
        };
        for r in &vpa.calls {
            vpa.call_idx
                .entry((r.from, r.letter))
                .or_default()
                .push((r.to, r.push));
        }
        for r in &vpa.internals {
            vpa.int_idx.entry((r.from, r.letter)).or_default().push(r.to);
        }
        for r in &vpa.returns {
            vpa.ret_idx
                .entry((r.from, r.letter, r.pop))
                .or_default()
                .push(r.to);
        }
        vpa
    }

    pub fn alphabet(&self) -> &PartitionedAlphabet {
        &self.alphabet
    }

    pub fn num_states(&self) -> usize {
        self.state_names.len()
    }

    pub fn state_name(&self, q: State) -> &str {
        &self.state_names[q]
    }

    pub fn state_names(&self) -> &[String] {
        &self.state_names
    }

    pub fn initials(&self) -> &BTreeSet<State> {
        &self.initials
    }

    pub fn accepts(&self) -> &BTreeSet<State> {
        &self.accepts
    }

    /// Stack symbol names including the bottom symbol at index 0.
    pub fn stack_names(&self) -> &[String] {
        &self.stack_names
    }

    pub fn num_stack_syms(&self) -> usize {
        self.stack_names.len()
    }

    pub fn call_rules(&self) -> &[CallRule] {
        &self.calls
    }

    pub fn internal_rules(&self) -> &[InternalRule] {
        &self.internals
    }

    pub fn return_rules(&self) -> &[ReturnRule] {
        &self.returns
    }

    pub fn call_targets(&self, q: State, l: Letter) -> &[(State, StackSym)] {
        self.call_idx.get(&(q, l)).map(Vec::as_slice).unwrap_or(&[])
    }

    pub fn internal_targets(&self, q: State, l: Letter) -> &[State] {
        self.int_idx.get(&(q, l)).map(Vec::as_slice).unwrap_or(&[])
    }

    pub fn return_targets(&self, q: State, l: Letter, s: StackSym) -> &[State] {
        self.ret_idx
            .get(&(q, l, s))
            .map(Vec::as_slice)
            .unwrap_or(&[])
    }

    /// Check the visibility conditions and bottom-symbol handling; every
    /// violation is reported with the offending transition.
    pub fn validate(&self) -> ValidationReport {
        let mut violations = Vec::new();
        let n = self.num_states();
        let nsyms = self.stack_names.len();
        let check_state = |q: State, violations: &mut Vec<Violation>| {
            if q >= n {
                violations.push(Violation::UnknownState(q));
            }
        };
        if self.initials.is_empty() {
            violations.push(Violation::NoInitialState);
        }
        for &q in self.initials.iter().chain(self.accepts.iter()) {
            check_state(q, &mut violations);
        }
        for r in &self.calls {
            check_state(r.from, &mut violations);
            check_state(r.to, &mut violations);
            if r.push == BOTTOM {
                violations.push(Violation::BottomPushed(*r));
            } else if r.push >= nsyms {
                violations.push(Violation::UnknownStackSymbol(r.push));
            }
            if self.alphabet.kind(r.letter) != LetterKind::Call {
                violations.push(Violation::VisibilityBroken {
                    letter: self.alphabet.name(r.letter).to_owned(),
                    expected: LetterKind::Call,
                    actual: self.alphabet.kind(r.letter),
                });
            }
        }
        for r in &self.internals {
            check_state(r.from, &mut violations);
            check_state(r.to, &mut violations);
            if self.alphabet.kind(r.letter) != LetterKind::Internal {
                violations.push(Violation::VisibilityBroken {
                    letter: self.alphabet.name(r.letter).to_owned(),
                    expected: LetterKind::Internal,
                    actual: self.alphabet.kind(r.letter),
                });
            }
        }
        for r in &self.returns {
            check_state(r.from, &mut violations);
            check_state(r.to, &mut violations);
            if r.pop >= nsyms {
                violations.push(Violation::UnknownStackSymbol(r.pop));
            }
            if self.alphabet.kind(r.letter) != LetterKind::Return {
                violations.push(Violation::VisibilityBroken {
                    letter: self.alphabet.name(r.letter).to_owned(),
                    expected: LetterKind::Return,
                    actual: self.alphabet.kind(r.letter),
                });
            }
        }
        ValidationReport { violations }
    }

    pub fn initial_configs(&self) -> Vec<Configuration> {
        self.initials.iter().map(|&q| Configuration::initial(q)).collect()
    }

    /// All successor configurations of `c` on `l`, sorted and deduplicated.
    pub fn step_config(&self, c: &Configuration, l: Letter, out: &mut BTreeSet<Configuration>) {
        match self.alphabet.kind(l) {
            LetterKind::Call => {
                for &(to, push) in self.call_targets(c.state, l) {
                    let mut stack = c.stack.clone();
                    stack.push(push);
                    out.insert(Configuration { state: to, stack });
                }
            }
            LetterKind::Internal => {
                for &to in self.internal_targets(c.state, l) {
                    out.insert(Configuration {
                        state: to,
                        stack: c.stack.clone(),
                    });
                }
            }
            LetterKind::Return => {
                let top = *c.stack.last().expect("stack always holds bottom");
                for &to in self.return_targets(c.state, l, top) {
                    let mut stack = c.stack.clone();
                    if top != BOTTOM {
                        stack.pop();
                    }
                    out.insert(Configuration { state: to, stack });
                }
            }
        }
    }

    pub fn step_configs(&self, configs: &[Configuration], l: Letter) -> Vec<Configuration> {
        let mut out = BTreeSet::new();
        for c in configs {
            self.step_config(c, l, &mut out);
        }
        out.into_iter().collect()
    }

    /// Run the automaton on `w` from its initial configurations.
    pub fn run(&self, w: &[Letter]) -> Result<RunResult> {
        self.run_from(self.initial_configs(), w)
    }

    /// Run from explicit start configurations (used by quotients).
    pub fn run_from(&self, start: Vec<Configuration>, w: &[Letter]) -> Result<RunResult> {
        for &l in w {
            if l.index() >= self.alphabet.len() {
                return Err(Error::UnknownLetter(format!("#{}", l.index())));
            }
        }
        // levels[i] holds (config, parent index into levels[i-1])
        let mut levels: Vec<Vec<(Configuration, Option<usize>)>> = Vec::with_capacity(w.len() + 1);
        levels.push(start.into_iter().map(|c| (c, None)).collect());
        for &l in w {
            let prev = levels.last().unwrap();
            let mut seen: HashSet<Configuration> = HashSet::new();
            let mut next: Vec<(Configuration, Option<usize>)> = Vec::new();
            let mut step = BTreeSet::new();
            for (i, (c, _)) in prev.iter().enumerate() {
                step.clear();
                self.step_config(c, l, &mut step);
                for succ in &step {
                    if seen.insert(succ.clone()) {
                        next.push((succ.clone(), Some(i)));
                    }
                }
            }
            levels.push(next);
        }
        let last = levels.last().unwrap();
        let mut final_configs: Vec<Configuration> =
            last.iter().map(|(c, _)| c.clone()).collect();
        final_configs.sort();
        let accept_pos = last
            .iter()
            .position(|(c, _)| self.accepts.contains(&c.state));
        let trace = accept_pos.map(|mut pos| {
            let mut path = Vec::with_capacity(levels.len());
            for level in levels.iter().rev() {
                let (c, parent) = &level[pos];
                path.push(c.clone());
                if let Some(p) = parent {
                    pos = *p;
                }
            }
            path.reverse();
            path
        });
        Ok(RunResult {
            accepted: accept_pos.is_some(),
            final_configs,
            trace,
        })
    }

    /// Membership without trace bookkeeping.
    pub fn accepts_word(&self, w: &[Letter]) -> Result<bool> {
        for &l in w {
            if l.index() >= self.alphabet.len() {
                return Err(Error::UnknownLetter(format!("#{}", l.index())));
            }
        }
        let mut configs: Vec<Configuration> = self.initial_configs();
        for &l in w {
            configs = self.step_configs(&configs, l);
            if configs.is_empty() {
                return Ok(false);
            }
        }
        Ok(configs.iter().any(|c| self.accepts.contains(&c.state)))
    }

    /// Exactly one initial state and at most one successor per
    /// (state, letter[, stack symbol]).
    pub fn is_deterministic(&self) -> bool {
        self.initials.len() == 1
            && self.call_idx.values().all(|v| v.len() <= 1)
            && self.int_idx.values().all(|v| v.len() <= 1)
            && self.ret_idx.values().all(|v| v.len() <= 1)
    }

    /// At least one successor for every (state, letter[, stack symbol]).
    pub fn is_complete(&self) -> bool {
        for q in 0..self.num_states() {
            for l in self.alphabet.letters() {
                match self.alphabet.kind(l) {
                    LetterKind::Call => {
                        if self.call_targets(q, l).is_empty() {
                            return false;
                        }
                    }
                    LetterKind::Internal => {
                        if self.internal_targets(q, l).is_empty() {
                            return false;
                        }
                    }
                    LetterKind::Return => {
                        for s in 0..self.num_stack_syms() {
                            if self.return_targets(q, l, s).is_empty() {
                                return false;
                            }
                        }
                    }
                }
            }
        }
        true
    }

    /// All accepted words of length at most `max_len`, shortest first,
    /// lexicographic within a length.
    pub fn enumerate_accepted(&self, max_len: usize) -> Vec<Word> {
        let mut out = Vec::new();
        let mut prefix = Vec::new();
        self.enumerate_rec(&self.initial_configs(), max_len, &mut prefix, &mut out);
        out.sort_by(|a, b| (a.len(), a.clone()).cmp(&(b.len(), b.clone())));
        out
    }

    fn enumerate_rec(
        &self,
        configs: &[Configuration],
        budget: usize,
        prefix: &mut Word,
        out: &mut Vec<Word>,
    ) {
        if configs.is_empty() {
            return;
        }
        if configs.iter().any(|c| self.accepts.contains(&c.state)) {
            out.push(prefix.clone());
        }
        if budget == 0 {
            return;
        }
        for l in self.alphabet.letters() {
            let next = self.step_configs(configs, l);
            if next.is_empty() {
                continue;
            }
            prefix.push(l);
            self.enumerate_rec(&next, budget - 1, prefix, out);
            prefix.pop();
        }
    }

    /// Walk the full prefix tree up to `max_len` and report the first word
    /// (in depth-first order) on which `self` and `other` disagree. Subtrees
    /// in which both sides have no live configuration are skipped — both
    /// reject every extension, so they agree there.
    pub fn find_disagreement(&self, other: &Vpa, max_len: usize) -> Option<Word> {
        let mut prefix = Vec::new();
        self.disagree_rec(
            other,
            &self.initial_configs(),
            &other.initial_configs(),
            max_len,
            &mut prefix,
        )
    }

    fn disagree_rec(
        &self,
        other: &Vpa,
        mine: &[Configuration],
        theirs: &[Configuration],
        budget: usize,
        prefix: &mut Word,
    ) -> Option<Word> {
        let a = mine.iter().any(|c| self.accepts.contains(&c.state));
        let b = theirs.iter().any(|c| other.accepts.contains(&c.state));
        if a != b {
            return Some(prefix.clone());
        }
        if budget == 0 || (mine.is_empty() && theirs.is_empty()) {
            return None;
        }
        for l in self.alphabet.letters() {
            let next_mine = self.step_configs(mine, l);
            let next_theirs = other.step_configs(theirs, l);
            prefix.push(l);
            let r = self.disagree_rec(other, &next_mine, &next_theirs, budget - 1, prefix);
            if r.is_some() {
                return r;
            }
            prefix.pop();
        }
        None
    }
}
