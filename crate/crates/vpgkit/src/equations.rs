//! Bounded solving of word equations with rational language constraints,
//! over a free monoid or a free group.
//!
//! Sides are sequences of constants, variables, and (in group mode)
//! inverted variables. Solving enumerates every assignment of candidate
//! words up to a length bound per variable: monoid mode draws candidates
//! from words over the positive letters and compares sides literally, group
//! mode draws reduced words over the whole alphabet and compares free
//! reductions. The search is exhaustive within the bound, so an empty
//! result certifies that no solution exists with all values that short.

use std::rc::Rc;

use crate::alphabet::{GroupAlphabet, Letter, Word};
use crate::error::{Error, Result};
use crate::oracle::{FnOracle, LangOracle};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EqMode {
    Monoid,
    Group,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EqSym {
    Const(Letter),
    Var(usize),
    VarInv(usize),
}

pub struct EquationSystem {
    mode: EqMode,
    alphabet: GroupAlphabet,
    n_vars: usize,
    equations: Vec<(Vec<EqSym>, Vec<EqSym>)>,
    constraints: Vec<Option<Rc<dyn LangOracle>>>,
}

/// All satisfying assignments with every value of length at most
/// `exhausted_bound`, sorted by the candidate order of each variable
/// (shortest first, then lexicographic).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SolutionSet {
    pub assignments: Vec<Vec<Word>>,
    pub exhausted_bound: usize,
}

impl EquationSystem {
    pub fn new(mode: EqMode, alphabet: GroupAlphabet, n_vars: usize) -> Self {
        EquationSystem {
            mode,
            alphabet,
            n_vars,
            equations: Vec::new(),
            constraints: vec![None; n_vars],
        }
    }

    pub fn mode(&self) -> EqMode {
        self.mode
    }

    pub fn alphabet(&self) -> &GroupAlphabet {
        &self.alphabet
    }

    pub fn num_vars(&self) -> usize {
        self.n_vars
    }

    pub fn add_equation(&mut self, lhs: Vec<EqSym>, rhs: Vec<EqSym>) -> Result<()> {
        for side in [&lhs, &rhs] {
            for s in side {
                match *s {
                    EqSym::Const(l) => {
                        if l.index() >= self.alphabet.base().len() {
                            return Err(Error::UnknownLetter(format!("#{}", l.index())));
                        }
                    }
                    EqSym::Var(v) => {
                        if v >= self.n_vars {
                            return Err(Error::Parse(format!("variable #{v} out of range")));
                        }
                    }
                    EqSym::VarInv(v) => {
                        if v >= self.n_vars {
                            return Err(Error::Parse(format!("variable #{v} out of range")));
                        }
                        if self.mode == EqMode::Monoid {
                            return Err(Error::Parse(
                                "inverted variables need group mode".into(),
                            ));
                        }
                    }
                }
            }
        }
        self.equations.push((lhs, rhs));
        Ok(())
    }

    pub fn set_constraint(&mut self, var: usize, oracle: Rc<dyn LangOracle>) {
        self.constraints[var] = Some(oracle);
    }

    /// Parse one equation side: whitespace-separated tokens, each either a
    /// declared variable name, a variable name suffixed `^-1`, or a letter.
    pub fn parse_side(&self, text: &str, var_names: &[&str]) -> Result<Vec<EqSym>> {
        let mut out = Vec::new();
        for tok in text.split_whitespace() {
            let (name, inverted) = match tok.strip_suffix("^-1") {
                Some(base) => (base, true),
                None => (tok, false),
            };
            if let Some(v) = var_names.iter().position(|&n| n == name) {
                out.push(if inverted { EqSym::VarInv(v) } else { EqSym::Var(v) });
            } else if inverted {
                out.push(EqSym::Const(self.alphabet.inv(self.alphabet.base().lookup(name)?)));
            } else {
                out.push(EqSym::Const(self.alphabet.base().lookup(name)?));
            }
        }
        Ok(out)
    }

    pub fn substitute(&self, side: &[EqSym], assign: &[Vec<Letter>]) -> Word {
        let mut w = Vec::new();
        for s in side {
            match *s {
                EqSym::Const(l) => w.push(l),
                EqSym::Var(v) => w.extend_from_slice(&assign[v]),
                EqSym::VarInv(v) => w.extend(self.alphabet.invert_word(&assign[v])),
            }
        }
        w
    }

    fn sides_agree(&self, assign: &[Word]) -> bool {
        self.equations.iter().all(|(lhs, rhs)| {
            let l = self.substitute(lhs, assign);
            let r = self.substitute(rhs, assign);
            match self.mode {
                EqMode::Monoid => l == r,
                EqMode::Group => {
                    self.alphabet.free_reduce(&l).unwrap() == self.alphabet.free_reduce(&r).unwrap()
                }
            }
        })
    }

    fn candidates(&self, var: usize, bound: usize) -> Vec<Word> {
        let base = self.alphabet.base();
        let letters: Vec<Letter> = match self.mode {
            EqMode::Monoid => self.alphabet.positive_letters(),
            EqMode::Group => base.letters().collect(),
        };
        let mut out = Vec::new();
        let mut layer = vec![Vec::new()];
        for len in 0..=bound {
            if len > 0 {
                let mut next = Vec::new();
                for w in &layer {
                    for &l in &letters {
                        let mut v: Word = w.clone();
                        v.push(l);
                        next.push(v);
                    }
                }
                layer = next;
            }
            for w in &layer {
                if self.mode == EqMode::Group && !self.alphabet.is_reduced(w) {
                    continue;
                }
                if let Some(o) = &self.constraints[var] {
                    if !o.contains(w) {
                        continue;
                    }
                }
                out.push(w.clone());
            }
        }
        out
    }

    /// Exhaustively test every assignment of candidate words of length at
    /// most `bound`.
    pub fn solve_bounded(&self, bound: usize) -> SolutionSet {
        let cands: Vec<Vec<Word>> = (0..self.n_vars).map(|v| self.candidates(v, bound)).collect();
        let mut assignments = Vec::new();
        if cands.iter().all(|c| !c.is_empty()) || self.n_vars == 0 {
            let mut idx = vec![0usize; self.n_vars];
            'outer: loop {
                let assign: Vec<Word> =
                    idx.iter().enumerate().map(|(v, &i)| cands[v][i].clone()).collect();
                if self.sides_agree(&assign) {
                    assignments.push(assign);
                }
                for v in (0..self.n_vars).rev() {
                    idx[v] += 1;
                    if idx[v] < cands[v].len() {
                        continue 'outer;
                    }
                    idx[v] = 0;
                }
                break;
            }
        }
        SolutionSet {
            assignments,
            exhausted_bound: bound,
        }
    }

    /// Reinterpret a monoid system over the free group: same equations in
    /// group mode, with every variable constrained to words in positive
    /// letters (intersected with any existing constraint). Positive words
    /// are reduced and multiply in the group exactly as in the monoid, so
    /// bounded solution sets coincide.
    pub fn encode_monoid_to_group(&self) -> Result<EquationSystem> {
        if self.mode != EqMode::Monoid {
            return Err(Error::Parse("encoding starts from a monoid system".into()));
        }
        let mut sys = EquationSystem::new(EqMode::Group, self.alphabet.clone(), self.n_vars);
        for (lhs, rhs) in &self.equations {
            sys.add_equation(lhs.clone(), rhs.clone())?;
        }
        let mut positive = vec![false; self.alphabet.base().len()];
        for l in self.alphabet.positive_letters() {
            positive[l.index()] = true;
        }
        for v in 0..self.n_vars {
            let positive = positive.clone();
            let inner = self.constraints[v].clone();
            sys.set_constraint(
                v,
                Rc::new(FnOracle::new(self.alphabet.base().clone(), move |w| {
                    w.iter().all(|l| positive[l.index()])
                        && inner.as_ref().map_or(true, |o| o.contains(w))
                })),
            );
        }
        Ok(sys)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn free_ab() -> GroupAlphabet {
        GroupAlphabet::free(&["a", "b"]).unwrap()
    }

    #[test]
    fn commuting_prefix_equation() {
        // X a b = a X b forces X to be a power of a
        let g = free_ab();
        let mut sys = EquationSystem::new(EqMode::Monoid, g.clone(), 1);
        let lhs = sys.parse_side("X a b", &["X"]).unwrap();
        let rhs = sys.parse_side("a X b", &["X"]).unwrap();
        sys.add_equation(lhs, rhs).unwrap();
        let sol = sys.solve_bounded(3);
        let words: Vec<String> = sol.assignments.iter().map(|a| g.format_word(&a[0])).collect();
        assert_eq!(words, vec!["ε", "a", "aa", "aaa"]);
        assert_eq!(sol.exhausted_bound, 3);
    }

    #[test]
    fn conjugation_fixes_the_centralizer() {
        let g = free_ab();
        let mut sys = EquationSystem::new(EqMode::Group, g.clone(), 1);
        let lhs = sys.parse_side("X a X^-1", &["X"]).unwrap();
        let rhs = sys.parse_side("a", &["X"]).unwrap();
        sys.add_equation(lhs, rhs).unwrap();
        let sol = sys.solve_bounded(2);
        let words: Vec<String> = sol.assignments.iter().map(|a| g.format_word(&a[0])).collect();
        assert_eq!(words, vec!["ε", "a", "A", "aa", "AA"]);

        // positivity constraint keeps only monoid powers
        let mut con = EquationSystem::new(EqMode::Group, g.clone(), 1);
        let lhs = con.parse_side("X a X^-1", &["X"]).unwrap();
        let rhs = con.parse_side("a", &["X"]).unwrap();
        con.add_equation(lhs, rhs).unwrap();
        let positives = g.positive_letters();
        con.set_constraint(
            0,
            Rc::new(FnOracle::new(g.base().clone(), move |w| {
                w.iter().all(|l| positives.contains(l))
            })),
        );
        let sol = con.solve_bounded(2);
        let words: Vec<String> = sol.assignments.iter().map(|a| g.format_word(&a[0])).collect();
        assert_eq!(words, vec!["ε", "a", "aa"]);
    }

    #[test]
    fn conjunction_and_contradiction() {
        let g = free_ab();
        let mut sys = EquationSystem::new(EqMode::Monoid, g.clone(), 1);
        let e1 = (sys.parse_side("X b", &["X"]).unwrap(), sys.parse_side("a b", &["X"]).unwrap());
        sys.add_equation(e1.0, e1.1).unwrap();
        let sol = sys.solve_bounded(3);
        assert_eq!(sol.assignments, vec![vec![g.parse_word("a").unwrap()]]);

        let contra = (sys.parse_side("X", &["X"]).unwrap(), sys.parse_side("b", &["X"]).unwrap());
        sys.add_equation(contra.0, contra.1).unwrap();
        assert!(sys.solve_bounded(3).assignments.is_empty());
    }

    #[test]
    fn inverted_variables_rejected_in_monoid_mode() {
        let g = free_ab();
        let mut sys = EquationSystem::new(EqMode::Monoid, g, 1);
        let r = sys.add_equation(vec![EqSym::VarInv(0)], vec![]);
        assert!(matches!(r, Err(Error::Parse(_))));
    }

    fn random_reduced(g: &GroupAlphabet, rng: &mut ChaCha8Rng, max_len: usize) -> Word {
        let letters: Vec<Letter> = g.base().letters().collect();
        loop {
            let len = rng.gen_range(0..=max_len);
            let w: Word = (0..len).map(|_| letters[rng.gen_range(0..letters.len())]).collect();
            if g.is_reduced(&w) {
                return w;
            }
        }
    }

    #[test]
    fn planted_solutions_are_found() {
        // build the right side as the literal value of the left under a
        // planted assignment, then check the solver recovers it
        let g = free_ab();
        let letters: Vec<Letter> = g.base().letters().collect();
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..20 {
            let n_vars = rng.gen_range(1..=2);
            let planted: Vec<Word> =
                (0..n_vars).map(|_| random_reduced(&g, &mut rng, 2)).collect();
            let mut sys = EquationSystem::new(EqMode::Group, g.clone(), n_vars);
            let lhs: Vec<EqSym> = (0..rng.gen_range(1..=4))
                .map(|_| match rng.gen_range(0..3) {
                    0 => EqSym::Const(letters[rng.gen_range(0..letters.len())]),
                    1 => EqSym::Var(rng.gen_range(0..n_vars)),
                    _ => EqSym::VarInv(rng.gen_range(0..n_vars)),
                })
                .collect();
            let value = g.free_reduce(&sys.substitute(&lhs, &planted)).unwrap();
            let rhs: Vec<EqSym> = value.iter().map(|&l| EqSym::Const(l)).collect();
            sys.add_equation(lhs, rhs).unwrap();
            let sol = sys.solve_bounded(2);
            assert!(sol.assignments.contains(&planted));
            for a in &sol.assignments {
                assert!(sys.sides_agree(a));
            }
        }
    }

    #[test]
    fn group_encoding_is_faithful() {
        let g = free_ab();
        let mut rng = ChaCha8Rng::seed_from_u64(23);
        let positives = g.positive_letters();
        for _ in 0..20 {
            let n_vars = rng.gen_range(1..=2);
            let mut sys = EquationSystem::new(EqMode::Monoid, g.clone(), n_vars);
            for _ in 0..rng.gen_range(1..=2) {
                let side = |rng: &mut ChaCha8Rng| -> Vec<EqSym> {
                    (0..rng.gen_range(0..=3))
                        .map(|_| {
                            if rng.gen_range(0..2) == 0 {
                                EqSym::Const(positives[rng.gen_range(0..positives.len())])
                            } else {
                                EqSym::Var(rng.gen_range(0..n_vars))
                            }
                        })
                        .collect()
                };
                let (lhs, rhs) = (side(&mut rng), side(&mut rng));
                sys.add_equation(lhs, rhs).unwrap();
            }
            let direct = sys.solve_bounded(4);
            let encoded = sys.encode_monoid_to_group().unwrap().solve_bounded(4);
            assert_eq!(direct.assignments, encoded.assignments);
        }
    }
}
