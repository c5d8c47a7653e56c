//! `vpgkit <noun> <verb>`: file-level front end over the library, plus the
//! pipeline runner. All output is deterministic for fixed inputs.

mod workspace;

use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand};

use vpgkit::congruence;
use vpgkit::dot;
use vpgkit::emptiness;
use vpgkit::json;
use vpgkit::ops;
use vpgkit::oracle::VpaOracle;
use vpgkit::recognisable::{symmetry_violations, to_coset_representation, wp_dfa_from_cayley};
use vpgkit::stallings::{build_core_graph, IndexVerdict};

use workspace::Workspace;

#[derive(Parser)]
#[command(name = "vpgkit", about = "visibly pushdown automata and group-language toolkit")]
struct Cli {
    #[command(subcommand)]
    noun: Noun,
}

#[derive(Subcommand)]
enum Noun {
    /// Inspect and transform visibly pushdown automata
    #[command(subcommand)]
    Vpa(VpaVerb),
    /// Binary closure operations on automata files
    #[command(subcommand)]
    Ops(OpsVerb),
    /// Bounded congruence exploration
    #[command(subcommand)]
    Cong(CongVerb),
    /// Subgroup core graphs over free-group alphabets
    #[command(subcommand)]
    Stallings(StallingsVerb),
    /// Word problems of finite groups
    #[command(subcommand)]
    Wp(WpVerb),
    /// Recognisable subsets and partitions
    #[command(subcommand)]
    Rec(RecVerb),
    /// Pipeline scripts
    #[command(subcommand)]
    Pipeline(PipelineVerb),
}

#[derive(Subcommand)]
enum VpaVerb {
    /// Check well-formedness of an automaton file
    Validate { file: PathBuf },
    /// Test one word for membership (exit 1 on reject)
    Run { file: PathBuf, word: String },
    /// Determinize and write the result
    Determinize { file: PathBuf, out: PathBuf },
    /// Print the shortest accepted word, or report emptiness
    Witness { file: PathBuf },
    /// Print all accepted words up to a length
    Enumerate { file: PathBuf, max_len: usize },
    /// Write a Graphviz rendering
    Dot { file: PathBuf, out: PathBuf },
}

#[derive(Subcommand)]
enum OpsVerb {
    Union { a: PathBuf, b: PathBuf, out: PathBuf },
    Intersect { a: PathBuf, b: PathBuf, out: PathBuf },
    Concat { a: PathBuf, b: PathBuf, out: PathBuf },
    Complement { a: PathBuf, out: PathBuf },
    Star { a: PathBuf, out: PathBuf },
}

#[derive(Subcommand)]
enum CongVerb {
    /// Print a CSV growth profile of class counts per word-length bound
    Profile {
        file: PathBuf,
        /// equiv, sim0, or approx
        kind: String,
        max_bound: usize,
    },
}

#[derive(Subcommand)]
enum StallingsVerb {
    /// Fold generators over a group alphabet file and report the index
    Index {
        alphabet: PathBuf,
        /// comma-separated generator words
        generators: String,
    },
}

#[derive(Subcommand)]
enum WpVerb {
    /// Build the word-problem automaton of a Cayley table file
    Dfa { table: PathBuf, out: PathBuf },
}

#[derive(Subcommand)]
enum RecVerb {
    /// Decompose a permutation automaton into a union of cosets
    Decompose { dfa: PathBuf, alphabet: PathBuf },
    /// Report whether a partitioned group alphabet is symmetric
    Partition { alphabet: PathBuf },
}

#[derive(Subcommand)]
enum PipelineVerb {
    /// Execute a script and print its report
    Run { script: PathBuf },
}

fn read_json<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T> {
    let text =
        std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    Ok(serde_json::from_str(&text)?)
}

fn load_vpa(path: &Path) -> Result<vpgkit::Vpa> {
    Ok(json::vpa_from_json(&read_json(path)?)?)
}

fn write_vpa(v: &vpgkit::Vpa, path: &Path) -> Result<()> {
    let text = serde_json::to_string_pretty(&json::vpa_to_json(v))?;
    std::fs::write(path, text + "\n").with_context(|| format!("writing {}", path.display()))
}

fn parse_kind(text: &str) -> Result<congruence::CongruenceKind> {
    match text {
        "equiv" => Ok(congruence::CongruenceKind::Equiv),
        "sim0" => Ok(congruence::CongruenceKind::Sim0),
        "approx" => Ok(congruence::CongruenceKind::Approx),
        other => bail!("unknown congruence kind {other:?}"),
    }
}

fn main() -> Result<()> {
    match Cli::parse().noun {
        Noun::Vpa(verb) => match verb {
            VpaVerb::Validate { file } => {
                let v = load_vpa(&file)?;
                let report = v.validate();
                if !report.is_valid() {
                    bail!("invalid automaton: {:?}", report.violations);
                }
                println!("ok");
            }
            VpaVerb::Run { file, word } => {
                let v = load_vpa(&file)?;
                let w = v.alphabet().parse_word(&word)?;
                if v.accepts_word(&w)? {
                    println!("accept");
                } else {
                    println!("reject");
                    std::process::exit(1);
                }
            }
            VpaVerb::Determinize { file, out } => {
                let d = vpgkit::determinize::determinize(&load_vpa(&file)?);
                write_vpa(&d, &out)?;
                println!("{} states", d.num_states());
            }
            VpaVerb::Witness { file } => {
                let v = load_vpa(&file)?;
                match emptiness::shortest_witness(&v) {
                    Some(w) => println!("{}", v.alphabet().format_word(&w)),
                    None => println!("empty"),
                }
            }
            VpaVerb::Enumerate { file, max_len } => {
                let v = load_vpa(&file)?;
                for w in v.enumerate_accepted(max_len) {
                    println!("{}", v.alphabet().format_word(&w));
                }
            }
            VpaVerb::Dot { file, out } => {
                let v = load_vpa(&file)?;
                std::fs::write(&out, dot::vpa_to_dot(&v))
                    .with_context(|| format!("writing {}", out.display()))?;
            }
        },
        Noun::Ops(verb) => {
            let (r, out) = match verb {
                OpsVerb::Union { a, b, out } => {
                    (ops::union(&load_vpa(&a)?, &load_vpa(&b)?)?, out)
                }
                OpsVerb::Intersect { a, b, out } => {
                    (ops::intersection(&load_vpa(&a)?, &load_vpa(&b)?)?, out)
                }
                OpsVerb::Concat { a, b, out } => {
                    (ops::concat(&load_vpa(&a)?, &load_vpa(&b)?)?, out)
                }
                OpsVerb::Complement { a, out } => (ops::complement(&load_vpa(&a)?), out),
                OpsVerb::Star { a, out } => (ops::star(&load_vpa(&a)?), out),
            };
            write_vpa(&r, &out)?;
            println!("{} states", r.num_states());
        }
        Noun::Cong(CongVerb::Profile { file, kind, max_bound }) => {
            let v = load_vpa(&file)?;
            let profile =
                congruence::growth_profile(&VpaOracle::new(&v), parse_kind(&kind)?, max_bound);
            println!("bound,classes");
            for (i, c) in profile.iter().enumerate() {
                println!("{},{}", i + 1, c);
            }
        }
        Noun::Stallings(StallingsVerb::Index { alphabet, generators }) => {
            let g = json::group_alphabet_from_json(&read_json(&alphabet)?)?;
            let gens = generators
                .split(',')
                .map(|s| Ok(g.parse_word(s)?))
                .collect::<Result<Vec<_>>>()?;
            let (core, _) = build_core_graph(&g, &gens)?;
            match core.index() {
                IndexVerdict::Finite(n) => println!("finite index {n}"),
                IndexVerdict::Infinite { vertex, letter } => println!(
                    "infinite index (vertex {vertex} missing {})",
                    g.base().name(letter)
                ),
            }
        }
        Noun::Wp(WpVerb::Dfa { table, out }) => {
            let t = json::cayley_from_json(&read_json(&table)?)?;
            let d = wp_dfa_from_cayley(&t);
            let text = serde_json::to_string_pretty(&json::dfa_to_json(&d))?;
            std::fs::write(&out, text + "\n")
                .with_context(|| format!("writing {}", out.display()))?;
            println!("{} states", d.num_states());
        }
        Noun::Rec(verb) => match verb {
            RecVerb::Decompose { dfa, alphabet } => {
                let d = json::dfa_from_json(&read_json(&dfa)?)?;
                let g = json::group_alphabet_from_json(&read_json(&alphabet)?)?;
                let cu = to_coset_representation(&d, &g)?;
                println!("group size {}", cu.group_size);
                for w in &cu.coset_representatives {
                    println!("{}", g.format_word(w));
                }
            }
            RecVerb::Partition { alphabet } => {
                let g = json::group_alphabet_from_json(&read_json(&alphabet)?)?;
                let vs = symmetry_violations(&g);
                if vs.is_empty() {
                    println!("symmetric");
                } else {
                    println!("asymmetric ({} violations)", vs.len());
                    std::process::exit(1);
                }
            }
        },
        Noun::Pipeline(PipelineVerb::Run { script }) => {
            let text = std::fs::read_to_string(&script)
                .with_context(|| format!("reading {}", script.display()))?;
            let base = script.parent().unwrap_or(Path::new("."));
            let mut ws = Workspace::new(base);
            let report = ws.run_pipeline(&text)?;
            print!("{report}");
            println!("PASS {}", script.file_name().unwrap_or_default().to_string_lossy());
        }
    }
    Ok(())
}
