//! Named artifact registry and the pipeline interpreter. A pipeline is a
//! line-oriented script of verbs executed in order; the report echoes one
//! line per verb and is byte-deterministic for fixed inputs. The first
//! failing verb aborts the run.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::rc::Rc;

use anyhow::{anyhow, bail, Context, Result};

use vpgkit::alphabet::{GroupAlphabet, Letter, PartitionedAlphabet, Word};
use vpgkit::congruence::{self, CongruenceKind, TestContext};
use vpgkit::dfa::Dfa;
use vpgkit::dot;
use vpgkit::emptiness;
use vpgkit::equations::{EqMode, EquationSystem};
use vpgkit::gallery;
use vpgkit::json;
use vpgkit::ops::{self, Side};
use vpgkit::oracle::{wp_z_oracle, FnOracle, VpaOracle};
use vpgkit::recognisable::{
    self, symmetry_violations, to_coset_representation, wp_dfa_from_cayley, CayleyTable,
    MatchSide, SymmetryViolation,
};
use vpgkit::stallings::{build_core_graph, CoreGraph, IndexVerdict};
use vpgkit::vpa::Vpa;

pub enum Artifact {
    Vpa(Vpa),
    Dfa(Dfa),
    Core(CoreGraph),
    Cayley(CayleyTable),
    Alphabet(PartitionedAlphabet),
    Group(GroupAlphabet),
}

impl Artifact {
    fn kind(&self) -> &'static str {
        match self {
            Artifact::Vpa(_) => "vpa",
            Artifact::Dfa(_) => "dfa",
            Artifact::Core(_) => "core",
            Artifact::Cayley(_) => "cayley",
            Artifact::Alphabet(_) => "alphabet",
            Artifact::Group(_) => "group",
        }
    }
}

pub struct Workspace {
    items: BTreeMap<String, Artifact>,
    base_dir: PathBuf,
}

fn error_name(e: &vpgkit::Error) -> &'static str {
    use vpgkit::Error::*;
    match e {
        PartitionOverlap(_) => "PartitionOverlap",
        EmptyAlphabet => "EmptyAlphabet",
        UnknownLetter(_) => "UnknownLetter",
        BadInversePairing(_) => "BadInversePairing",
        PartitionMismatch => "PartitionMismatch",
        PartitionViolation(_, _) => "PartitionViolation",
        InadmissibleWord(_) => "InadmissibleWord",
        InfiniteIndex => "InfiniteIndex",
        FiniteIndex => "FiniteIndex",
        NotPermutationDfa(_) => "NotPermutationDfa",
        GroupTooLarge(_) => "GroupTooLarge",
        InvalidGroup(_) => "InvalidGroup",
        SymmetricPartition => "SymmetricPartition",
        InvalidAutomaton(_) => "InvalidAutomaton",
        Parse(_) => "Parse",
    }
}

fn parse_word(p: &PartitionedAlphabet, text: &str) -> Result<Word> {
    if text == "ε" || text == "eps" {
        return Ok(Vec::new());
    }
    Ok(p.parse_word(text)?)
}

fn parse_group_word(g: &GroupAlphabet, text: &str) -> Result<Word> {
    if text == "ε" || text == "eps" {
        return Ok(Vec::new());
    }
    Ok(g.parse_word(text)?)
}

fn parse_kind(text: &str) -> Result<CongruenceKind> {
    match text {
        "equiv" => Ok(CongruenceKind::Equiv),
        "sim0" => Ok(CongruenceKind::Sim0),
        "approx" => Ok(CongruenceKind::Approx),
        other => bail!("unknown congruence kind {other:?}"),
    }
}

impl Workspace {
    pub fn new(base_dir: &Path) -> Self {
        Workspace {
            items: BTreeMap::new(),
            base_dir: base_dir.to_path_buf(),
        }
    }

    fn put(&mut self, name: &str, a: Artifact) -> Result<()> {
        if self.items.contains_key(name) {
            bail!("name {name:?} already bound");
        }
        self.items.insert(name.to_owned(), a);
        Ok(())
    }

    fn get(&self, name: &str) -> Result<&Artifact> {
        self.items.get(name).ok_or_else(|| anyhow!("no artifact named {name:?}"))
    }

    fn vpa(&self, name: &str) -> Result<&Vpa> {
        match self.get(name)? {
            Artifact::Vpa(v) => Ok(v),
            other => bail!("{name:?} is a {}, expected a vpa", other.kind()),
        }
    }

    fn dfa(&self, name: &str) -> Result<&Dfa> {
        match self.get(name)? {
            Artifact::Dfa(d) => Ok(d),
            other => bail!("{name:?} is a {}, expected a dfa", other.kind()),
        }
    }

    fn core(&self, name: &str) -> Result<&CoreGraph> {
        match self.get(name)? {
            Artifact::Core(c) => Ok(c),
            other => bail!("{name:?} is a {}, expected a core graph", other.kind()),
        }
    }

    fn cayley(&self, name: &str) -> Result<&CayleyTable> {
        match self.get(name)? {
            Artifact::Cayley(t) => Ok(t),
            other => bail!("{name:?} is a {}, expected a cayley table", other.kind()),
        }
    }

    fn group(&self, name: &str) -> Result<&GroupAlphabet> {
        match self.get(name)? {
            Artifact::Group(g) => Ok(g),
            Artifact::Cayley(t) => Ok(t.alphabet()),
            other => bail!("{name:?} is a {}, expected a group alphabet", other.kind()),
        }
    }

    fn alphabet(&self, name: &str) -> Result<&PartitionedAlphabet> {
        match self.get(name)? {
            Artifact::Alphabet(p) => Ok(p),
            Artifact::Group(g) => Ok(g.base()),
            other => bail!("{name:?} is a {}, expected an alphabet", other.kind()),
        }
    }

    fn resolve(&self, path: &str) -> PathBuf {
        let p = Path::new(path);
        if p.is_absolute() {
            p.to_path_buf()
        } else {
            self.base_dir.join(p)
        }
    }

    pub fn load(&mut self, kind: &str, name: &str, path: &str) -> Result<()> {
        let full = self.resolve(path);
        let text = std::fs::read_to_string(&full)
            .with_context(|| format!("reading {}", full.display()))?;
        let artifact = match kind {
            "vpa" => Artifact::Vpa(json::vpa_from_json(&serde_json::from_str(&text)?)?),
            "dfa" => Artifact::Dfa(json::dfa_from_json(&serde_json::from_str(&text)?)?),
            "core" => Artifact::Core(json::core_graph_from_json(&serde_json::from_str(&text)?)?),
            "cayley" => Artifact::Cayley(json::cayley_from_json(&serde_json::from_str(&text)?)?),
            "alphabet" => {
                Artifact::Alphabet(json::alphabet_from_json(&serde_json::from_str(&text)?)?)
            }
            "group" => {
                Artifact::Group(json::group_alphabet_from_json(&serde_json::from_str(&text)?)?)
            }
            other => bail!("unknown artifact kind {other:?}"),
        };
        self.put(name, artifact)
    }

    pub fn save(&self, name: &str, path: &str) -> Result<()> {
        let text = match self.get(name)? {
            Artifact::Vpa(v) => serde_json::to_string_pretty(&json::vpa_to_json(v))?,
            Artifact::Dfa(d) => serde_json::to_string_pretty(&json::dfa_to_json(d))?,
            Artifact::Core(c) => serde_json::to_string_pretty(&json::core_graph_to_json(c))?,
            Artifact::Cayley(t) => serde_json::to_string_pretty(&json::cayley_to_json(t))?,
            Artifact::Alphabet(p) => serde_json::to_string_pretty(&json::alphabet_to_json(p))?,
            Artifact::Group(g) => serde_json::to_string_pretty(&json::group_alphabet_to_json(g))?,
        };
        let full = self.resolve(path);
        std::fs::write(&full, text + "\n").with_context(|| format!("writing {}", full.display()))?;
        Ok(())
    }

    fn gallery_item(which: &str) -> Result<Artifact> {
        Ok(match which {
            "unreduced-doubling" => Artifact::Vpa(gallery::unreduced_doubling()),
            "an-bn" => Artifact::Vpa(gallery::an_bn()),
            "an-bn-marked" => Artifact::Vpa(gallery::an_bn_marked()),
            "sigma-star" => Artifact::Vpa(gallery::sigma_star()),
            "empty" => Artifact::Vpa(gallery::empty_language()),
            "even-a-inverses" => Artifact::Vpa(gallery::even_a_inverses()),
            "mr-language" => Artifact::Vpa(gallery::mr_language()),
            "ab-alphabet" => Artifact::Alphabet(gallery::ab_alphabet()),
            "fg-alphabet" => Artifact::Alphabet(gallery::fg_alphabet()),
            "fg-group" => Artifact::Group(gallery::fg_group_alphabet()),
            "z-symmetric" => Artifact::Group(gallery::symmetric_z_alphabet()),
            "free-ab" => Artifact::Group(GroupAlphabet::free(&["a", "b"])?),
            "cyclic-2" => Artifact::Cayley(recognisable::cyclic_table(2)),
            "cyclic-3" => Artifact::Cayley(recognisable::cyclic_table(3)),
            "sym-3" => Artifact::Cayley(recognisable::s3_table()),
            "z-6" => Artifact::Cayley(recognisable::z6_table()),
            other => bail!("unknown gallery item {other:?}"),
        })
    }

    /// Execute one verb; the returned line goes into the report.
    pub fn exec(&mut self, tokens: &[&str]) -> Result<String> {
        let verb = tokens[0];
        let args = &tokens[1..];
        let need = |n: usize| -> Result<()> {
            if args.len() != n {
                bail!("{verb}: expected {n} arguments, got {}", args.len());
            }
            Ok(())
        };
        match verb {
            "print" => Ok(args.join(" ")),
            "load" => {
                need(3)?;
                self.load(args[0], args[1], args[2])?;
                Ok(format!("loaded {} {} from {}", args[0], args[1], args[2]))
            }
            "gallery" => {
                need(2)?;
                let item = Self::gallery_item(args[0])?;
                let kind = item.kind();
                self.put(args[1], item)?;
                Ok(format!("gallery {} -> {} ({kind})", args[0], args[1]))
            }
            "save" => {
                need(2)?;
                self.save(args[0], args[1])?;
                Ok(format!("saved {} to {}", args[0], args[1]))
            }
            "export-dot" => {
                need(2)?;
                let text = match self.get(args[0])? {
                    Artifact::Vpa(v) => dot::vpa_to_dot(v),
                    Artifact::Core(c) => dot::core_graph_to_dot(c),
                    other => bail!("cannot render a {} as DOT", other.kind()),
                };
                let full = self.resolve(args[1]);
                std::fs::write(&full, text)
                    .with_context(|| format!("writing {}", full.display()))?;
                Ok(format!("wrote DOT for {} to {}", args[0], args[1]))
            }
            "assert-dot-contains" => {
                need(2)?;
                let text = match self.get(args[0])? {
                    Artifact::Vpa(v) => dot::vpa_to_dot(v),
                    Artifact::Core(c) => dot::core_graph_to_dot(c),
                    other => bail!("cannot render a {} as DOT", other.kind()),
                };
                if !text.contains(args[1]) {
                    bail!("DOT for {} does not contain {:?}", args[0], args[1]);
                }
                Ok(format!("DOT for {} contains {:?}", args[0], args[1]))
            }
            "validate" => {
                need(1)?;
                let report = self.vpa(args[0])?.validate();
                if !report.is_valid() {
                    bail!("{} is invalid: {:?}", args[0], report.violations);
                }
                Ok(format!("{} is well formed", args[0]))
            }
            "assert-accepts" | "assert-rejects" => {
                need(2)?;
                let v = self.vpa(args[0])?;
                let w = parse_word(v.alphabet(), args[1])?;
                let got = v.accepts_word(&w)?;
                let want = verb == "assert-accepts";
                if got != want {
                    bail!("{} on {:?}: expected {want}, got {got}", args[0], args[1]);
                }
                Ok(format!("{} {} {}", args[0], if want { "accepts" } else { "rejects" }, args[1]))
            }
            "determinize" => {
                need(2)?;
                let d = vpgkit::determinize::determinize(self.vpa(args[0])?);
                let states = d.num_states();
                self.put(args[1], Artifact::Vpa(d))?;
                Ok(format!("determinized {} -> {} ({states} states)", args[0], args[1]))
            }
            "assert-deterministic" => {
                need(1)?;
                let v = self.vpa(args[0])?;
                if !v.is_deterministic() {
                    bail!("{} is not deterministic", args[0]);
                }
                Ok(format!("{} is deterministic", args[0]))
            }
            "union" | "intersect" | "concat" => {
                need(3)?;
                let a = self.vpa(args[0])?;
                let b = self.vpa(args[1])?;
                let r = match verb {
                    "union" => ops::union(a, b)?,
                    "intersect" => ops::intersection(a, b)?,
                    _ => ops::concat(a, b)?,
                };
                self.put(args[2], Artifact::Vpa(r))?;
                Ok(format!("{verb} {} {} -> {}", args[0], args[1], args[2]))
            }
            "complement" | "star" => {
                need(2)?;
                let a = self.vpa(args[0])?;
                let r = if verb == "complement" { ops::complement(a) } else { ops::star(a) };
                self.put(args[1], Artifact::Vpa(r))?;
                Ok(format!("{verb} {} -> {}", args[0], args[1]))
            }
            "rename" => {
                need(4)?;
                let target = self.alphabet(args[1])?.clone();
                let map: Vec<(String, String)> = args[3]
                    .split(',')
                    .map(|pair| {
                        pair.split_once('=')
                            .map(|(a, b)| (a.to_owned(), b.to_owned()))
                            .ok_or_else(|| anyhow!("bad rename pair {pair:?}"))
                    })
                    .collect::<Result<_>>()?;
                let r = ops::rename(self.vpa(args[0])?, &target, &map)?;
                self.put(args[2], Artifact::Vpa(r))?;
                Ok(format!("renamed {} -> {}", args[0], args[2]))
            }
            "quotient" => {
                need(4)?;
                let v = self.vpa(args[0])?;
                let side = match args[2] {
                    "left" => Side::Left,
                    "right" => Side::Right,
                    other => bail!("unknown side {other:?}"),
                };
                let words: Vec<Word> = args[3]
                    .split(',')
                    .map(|s| parse_word(v.alphabet(), s))
                    .collect::<Result<_>>()?;
                let r = ops::quotient_finite(v, &words, side)?;
                self.put(args[1], Artifact::Vpa(r))?;
                Ok(format!("{} quotient of {} by {} -> {}", args[2], args[0], args[3], args[1]))
            }
            "witness" => {
                need(1)?;
                let v = self.vpa(args[0])?;
                Ok(match emptiness::shortest_witness(v) {
                    Some(w) => format!("shortest witness of {}: {}", args[0], v.alphabet().format_word(&w)),
                    None => format!("{} is empty", args[0]),
                })
            }
            "assert-empty" | "assert-nonempty" => {
                need(1)?;
                let empty = emptiness::is_empty(self.vpa(args[0])?);
                let want = verb == "assert-empty";
                if empty != want {
                    bail!("{}: expected {}", args[0], if want { "empty" } else { "nonempty" });
                }
                Ok(format!("{} is {}", args[0], if want { "empty" } else { "nonempty" }))
            }
            "assert-equivalent" | "assert-inequivalent" => {
                need(2)?;
                let diff = ops::equivalent(self.vpa(args[0])?, self.vpa(args[1])?)?;
                match (verb, diff) {
                    ("assert-equivalent", Some(w)) => {
                        let shown = self.vpa(args[0])?.alphabet().format_word(&w);
                        bail!("{} and {} differ on {}", args[0], args[1], shown)
                    }
                    ("assert-inequivalent", None) => {
                        bail!("{} and {} are equivalent", args[0], args[1])
                    }
                    ("assert-equivalent", None) => {
                        Ok(format!("{} and {} are equivalent", args[0], args[1]))
                    }
                    (_, Some(w)) => {
                        let shown = self.vpa(args[0])?.alphabet().format_word(&w);
                        Ok(format!("{} and {} differ on {}", args[0], args[1], shown))
                    }
                    _ => unreachable!(),
                }
            }
            "enumerate" => {
                need(2)?;
                let v = self.vpa(args[0])?;
                let max: usize = args[1].parse()?;
                let shown: Vec<String> = v
                    .enumerate_accepted(max)
                    .iter()
                    .map(|w| v.alphabet().format_word(w))
                    .collect();
                Ok(format!("{} up to {}: {}", args[0], max, shown.join(" ")))
            }
            "assert-enum" => {
                need(3)?;
                let v = self.vpa(args[0])?;
                let max: usize = args[1].parse()?;
                let got: Vec<Word> = v.enumerate_accepted(max);
                let want: Vec<Word> = args[2]
                    .split(',')
                    .map(|s| parse_word(v.alphabet(), s))
                    .collect::<Result<_>>()?;
                if got != want {
                    let shown: Vec<String> =
                        got.iter().map(|w| v.alphabet().format_word(w)).collect();
                    bail!("{} enumerates {:?}", args[0], shown);
                }
                Ok(format!("{} enumerates the expected {} words up to {}", args[0], want.len(), max))
            }
            "assert-reduced-enum" => {
                need(5)?;
                let v = self.vpa(args[0])?;
                let g = self.group(args[1])?;
                let enum_len: usize = args[2].parse()?;
                let keep_len: usize = args[3].parse()?;
                let mut got: Vec<Word> = v
                    .enumerate_accepted(enum_len)
                    .iter()
                    .map(|w| g.free_reduce(w))
                    .collect::<vpgkit::Result<_>>()?;
                got.retain(|w| w.len() <= keep_len);
                got.sort_by(|a, b| (a.len(), a.clone()).cmp(&(b.len(), b.clone())));
                got.dedup();
                let want: Vec<Word> = args[4]
                    .split(',')
                    .map(|s| parse_group_word(g, s))
                    .collect::<Result<_>>()?;
                if got != want {
                    let shown: Vec<String> = got.iter().map(|w| g.format_word(w)).collect();
                    bail!("{}: reduced language is {:?}", args[0], shown);
                }
                Ok(format!(
                    "reduced members of {} up to {} match the expected {} words",
                    args[0],
                    keep_len,
                    want.len()
                ))
            }
            "profile-csv" => {
                need(3)?;
                let v = self.vpa(args[0])?;
                let kind = parse_kind(args[1])?;
                let max: usize = args[2].parse()?;
                let profile = congruence::growth_profile(&VpaOracle::new(v), kind, max);
                let mut out = String::from("bound,classes");
                for (i, c) in profile.iter().enumerate() {
                    out.push_str(&format!("\n{},{}", i + 1, c));
                }
                Ok(out)
            }
            "wp-profile-csv" => {
                need(4)?;
                let g = self.group(args[0])?;
                let l = g.base().lookup(args[1])?;
                let kind = parse_kind(args[2])?;
                let max: usize = args[3].parse()?;
                let profile = congruence::growth_profile(&wp_z_oracle(g, l), kind, max);
                let mut out = String::from("bound,classes");
                for (i, c) in profile.iter().enumerate() {
                    out.push_str(&format!("\n{},{}", i + 1, c));
                }
                Ok(out)
            }
            "assert-profile-growth" => {
                // strict growth certifies ever finer separation within bounds
                need(4)?;
                let g = self.group(args[0])?;
                let l = g.base().lookup(args[1])?;
                let kind = parse_kind(args[2])?;
                let max: usize = args[3].parse()?;
                let profile = congruence::growth_profile(&wp_z_oracle(g, l), kind, max);
                if !profile.windows(2).all(|p| p[0] < p[1]) {
                    bail!("profile {profile:?} is not strictly increasing");
                }
                Ok(format!("word-problem {} profile strictly increases over {max} bounds", args[2]))
            }
            "assert-profile-stable" => {
                need(4)?;
                let v = self.vpa(args[0])?;
                let kind = parse_kind(args[1])?;
                let from: usize = args[2].parse()?;
                let to: usize = args[3].parse()?;
                let profile = congruence::growth_profile(&VpaOracle::new(v), kind, to);
                if profile[from - 1] != profile[to - 1] {
                    bail!("profile {profile:?} still grows after bound {from}");
                }
                Ok(format!("{} {} profile constant from bound {from} to {to}", args[0], args[1]))
            }
            "distinguish" => {
                need(5)?;
                let v = self.vpa(args[0])?;
                let kind = parse_kind(args[1])?;
                let u1 = parse_word(v.alphabet(), args[2])?;
                let u2 = parse_word(v.alphabet(), args[3])?;
                let bound: usize = args[4].parse()?;
                let o = VpaOracle::new(v);
                Ok(match congruence::distinguish(&o, kind, &u1, &u2, bound)? {
                    Some(TestContext::Right(w)) => {
                        format!("separated {} from {} by suffix {}", args[2], args[3], v.alphabet().format_word(&w))
                    }
                    Some(TestContext::Around(l, r)) => format!(
                        "separated {} from {} by context ({}, {})",
                        args[2],
                        args[3],
                        v.alphabet().format_word(&l),
                        v.alphabet().format_word(&r)
                    ),
                    None => format!("no separating context within {bound}"),
                })
            }
            "stallings" => {
                need(3)?;
                let g = self.group(args[0])?.clone();
                let gens: Vec<Word> = args[2]
                    .split(',')
                    .map(|s| parse_group_word(&g, s))
                    .collect::<Result<_>>()?;
                let (core, skipped) = build_core_graph(&g, &gens)?;
                let (nv, ne) = (core.num_vertices(), core.edges().len());
                self.put(args[1], Artifact::Core(core))?;
                let mut line = format!("core graph {} built: {nv} vertices, {ne} edges", args[1]);
                if !skipped.is_empty() {
                    line.push_str(&format!(", {} trivial generators skipped", skipped.len()));
                }
                Ok(line)
            }
            "assert-index" => {
                need(2)?;
                let got = self.core(args[0])?.index();
                match (args[1], got) {
                    ("infinite", IndexVerdict::Infinite { .. }) => {
                        Ok(format!("{} has infinite index", args[0]))
                    }
                    ("infinite", IndexVerdict::Finite(n)) => {
                        bail!("{} has finite index {n}", args[0])
                    }
                    (want, IndexVerdict::Finite(n)) if want.parse() == Ok(n) => {
                        Ok(format!("{} has index {n}", args[0]))
                    }
                    (want, got) => bail!("{}: expected index {want}, got {got:?}", args[0]),
                }
            }
            "preimage-dfa" => {
                need(2)?;
                let d = self.core(args[0])?.preimage_dfa()?;
                let states = d.num_states();
                self.put(args[1], Artifact::Dfa(d))?;
                Ok(format!("preimage automaton {} -> {} ({states} states)", args[0], args[1]))
            }
            "witness-family" => {
                need(1)?;
                let core = self.core(args[0])?;
                let fam = core.infinite_index_witness()?;
                let g = core.alphabet();
                Ok(format!(
                    "witness family for {}: {} · {}^k · {}",
                    args[0],
                    g.format_word(&fam.w1),
                    g.base().name(fam.letter),
                    g.format_word(&fam.w2)
                ))
            }
            "assert-membership" => {
                need(3)?;
                let core = self.core(args[0])?;
                let w = parse_group_word(core.alphabet(), args[1])?;
                let got = core.subgroup_membership(&w)?;
                let want = match args[2] {
                    "in" => true,
                    "out" => false,
                    other => bail!("expected in or out, got {other:?}"),
                };
                if got != want {
                    bail!("{} membership of {}: expected {want}, got {got}", args[0], args[1]);
                }
                Ok(format!("{} is {} {}", args[1], if want { "in" } else { "outside" }, args[0]))
            }
            "assert-dfa-accepts" | "assert-dfa-rejects" => {
                need(2)?;
                let d = self.dfa(args[0])?;
                let w = parse_word(d.alphabet(), args[1])?;
                let got = d.accepts_word(&w);
                let want = verb == "assert-dfa-accepts";
                if got != want {
                    bail!("{} on {}: expected {want}, got {got}", args[0], args[1]);
                }
                Ok(format!("{} {} {}", args[0], if want { "accepts" } else { "rejects" }, args[1]))
            }
            "wp-dfa" => {
                need(2)?;
                let d = wp_dfa_from_cayley(self.cayley(args[0])?);
                let states = d.num_states();
                self.put(args[1], Artifact::Dfa(d))?;
                Ok(format!("word-problem automaton {} -> {} ({states} states)", args[0], args[1]))
            }
            "decompose" => {
                need(2)?;
                let d = self.dfa(args[0])?;
                let g = self.group(args[1])?;
                let cu = to_coset_representation(d, g)?;
                let reps: Vec<String> =
                    cu.coset_representatives.iter().map(|w| g.format_word(w)).collect();
                Ok(format!(
                    "{} is a union of {} cosets of an index-{} normal subgroup; representatives: {}",
                    args[0],
                    reps.len(),
                    cu.group_size,
                    reps.join(" ")
                ))
            }
            "assert-decomposition-roundtrip" => {
                need(3)?;
                let d = self.dfa(args[0])?;
                let g = self.group(args[1])?;
                let max: usize = args[2].parse()?;
                let r = to_coset_representation(d, g)?.rebuild_dfa();
                for w in d.alphabet().words_up_to(max) {
                    if d.accepts_word(&w) != r.accepts_word(&w) {
                        bail!("round trip of {} differs on {}", args[0], d.alphabet().format_word(&w));
                    }
                }
                Ok(format!("coset decomposition of {} round-trips up to length {max}", args[0]))
            }
            "partition-check" => {
                need(1)?;
                let g = self.group(args[0])?;
                let vs = symmetry_violations(g);
                if vs.is_empty() {
                    return Ok(format!("{} is a symmetric partition", args[0]));
                }
                let shown: Vec<String> = vs
                    .iter()
                    .map(|v| match v {
                        SymmetryViolation::TorsionCall(l) => {
                            format!("torsion call {}", g.base().name(*l))
                        }
                        SymmetryViolation::TorsionReturn(l) => {
                            format!("torsion return {}", g.base().name(*l))
                        }
                        SymmetryViolation::CallInverseNotReturn(l) => {
                            format!("inverse of call {} is not a return", g.base().name(*l))
                        }
                        SymmetryViolation::ReturnInverseNotCall(l) => {
                            format!("inverse of return {} is not a call", g.base().name(*l))
                        }
                    })
                    .collect();
                Ok(format!("{} is not symmetric: {}", args[0], shown.join("; ")))
            }
            "assert-symmetric" | "assert-asymmetric" => {
                need(1)?;
                let vs = symmetry_violations(self.group(args[0])?);
                let symmetric = vs.is_empty();
                let want = verb == "assert-symmetric";
                if symmetric != want {
                    bail!("{}: expected {}", args[0], if want { "symmetric" } else { "asymmetric" });
                }
                Ok(format!("{} is {}", args[0], if want { "symmetric" } else { "asymmetric" }))
            }
            "lift" => {
                need(3)?;
                let g = self.group(args[0])?;
                let w = parse_group_word(g, args[1])?;
                let side = match args[2] {
                    "mr" => MatchSide::Mr,
                    "mc" => MatchSide::Mc,
                    other => bail!("expected mr or mc, got {other:?}"),
                };
                let lifted = recognisable::lift_to_matched(g, &w, side)?;
                Ok(format!("lifted {} to {}: {}", args[1], args[2], g.format_word(&lifted)))
            }
            "solve-eq" => {
                // solve-eq <group> <monoid|group|group-positive> <vars> <bound> <lhs> = <rhs> [expect <v1,v2,...>]
                if args.len() < 6 {
                    bail!("solve-eq: too few arguments");
                }
                let g = self.group(args[0])?.clone();
                let (mode, positive) = match args[1] {
                    "monoid" => (EqMode::Monoid, false),
                    "group" => (EqMode::Group, false),
                    "group-positive" => (EqMode::Group, true),
                    other => bail!("unknown equation mode {other:?}"),
                };
                let vars: Vec<&str> = args[2].split(',').collect();
                let bound: usize = args[3].parse()?;
                let rest = &args[4..];
                let eq_pos = rest
                    .iter()
                    .position(|&t| t == "=")
                    .ok_or_else(|| anyhow!("solve-eq: missing ="))?;
                let expect_pos = rest.iter().position(|&t| t == "expect");
                let rhs_end = expect_pos.unwrap_or(rest.len());
                let mut sys = EquationSystem::new(mode, g.clone(), vars.len());
                let lhs = sys.parse_side(&rest[..eq_pos].join(" "), &vars)?;
                let rhs = sys.parse_side(&rest[eq_pos + 1..rhs_end].join(" "), &vars)?;
                sys.add_equation(lhs, rhs)?;
                if positive {
                    let positives = g.positive_letters();
                    for v in 0..vars.len() {
                        let positives = positives.clone();
                        sys.set_constraint(
                            v,
                            Rc::new(FnOracle::new(g.base().clone(), move |w: &[Letter]| {
                                w.iter().all(|l| positives.contains(l))
                            })),
                        );
                    }
                }
                let sol = sys.solve_bounded(bound);
                let shown: Vec<String> = sol
                    .assignments
                    .iter()
                    .map(|a| {
                        a.iter()
                            .enumerate()
                            .map(|(i, w)| format!("{}={}", vars[i], g.format_word(w)))
                            .collect::<Vec<_>>()
                            .join(" ")
                    })
                    .collect();
                if let Some(ep) = expect_pos {
                    if ep + 2 != rest.len() {
                        bail!("solve-eq: expect takes one comma-separated list");
                    }
                    let want: Vec<&str> = rest[ep + 1].split(',').collect();
                    if vars.len() != 1 {
                        bail!("solve-eq: expect requires a single variable");
                    }
                    let got: Vec<String> =
                        sol.assignments.iter().map(|a| g.format_word(&a[0])).collect();
                    if got != want {
                        bail!("solutions {got:?} do not match expected {want:?}");
                    }
                }
                Ok(format!(
                    "solutions within bound {bound}: {}",
                    if shown.is_empty() { "none".to_owned() } else { shown.join("; ") }
                ))
            }
            "assert-error" => {
                if args.len() < 2 {
                    bail!("assert-error: expected an error name and a verb");
                }
                let want = args[0];
                match self.exec(&args[1..]) {
                    Ok(line) => bail!("expected {want} but verb succeeded: {line}"),
                    Err(e) => {
                        let got = e
                            .downcast_ref::<vpgkit::Error>()
                            .map(error_name)
                            .unwrap_or("other");
                        if got != want {
                            bail!("expected {want}, got {got}: {e}");
                        }
                        Ok(format!("{} raised {want} as expected", args[1]))
                    }
                }
            }
            other => bail!("unknown verb {other:?}"),
        }
    }

    /// Run a script: one verb per line, `#` comments, blank lines skipped.
    /// Returns the report. The first failing verb aborts with context.
    pub fn run_pipeline(&mut self, script: &str) -> Result<String> {
        let mut report = String::new();
        for (i, raw) in script.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let tokens: Vec<&str> = line.split_whitespace().collect();
            match self.exec(&tokens) {
                Ok(msg) => {
                    report.push_str(&format!("ok   line {:>3}: {msg}\n", i + 1));
                }
                Err(e) => {
                    report.push_str(&format!("FAIL line {:>3}: {line}\n", i + 1));
                    return Err(e.context(format!("line {}: {line}\n{report}", i + 1)));
                }
            }
        }
        Ok(report)
    }
}
