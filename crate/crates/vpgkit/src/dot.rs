//! Graphviz DOT rendering for automata and core graphs. Output is fully
//! deterministic: rules are emitted in their stored sorted order.

use std::fmt::Write;

use crate::stallings::CoreGraph;
use crate::vpa::Vpa;

fn quote(s: &str) -> String {
    format!("\"{}\"", s.replace('\\', "\\\\").replace('"', "\\\""))
}

/// Render an automaton: double circles for accepting states, an arrow from
/// a point for each initial state, call and return edges labeled
/// "letter,symbol", internal edges labeled by the letter alone.
pub fn vpa_to_dot(v: &Vpa) -> String {
    let p = v.alphabet();
    let mut out = String::from("digraph vpa {\n  rankdir=LR;\n");
    for q in 0..v.num_states() {
        let shape = if v.accepts().contains(&q) {
            "doublecircle"
        } else {
            "circle"
        };
        let _ = writeln!(out, "  {} [shape={shape}];", quote(v.state_name(q)));
    }
    for (i, &q) in v.initials().iter().enumerate() {
        let _ = writeln!(out, "  init{i} [shape=point];");
        let _ = writeln!(out, "  init{i} -> {};", quote(v.state_name(q)));
    }
    for r in v.call_rules() {
        let _ = writeln!(
            out,
            "  {} -> {} [label={}];",
            quote(v.state_name(r.from)),
            quote(v.state_name(r.to)),
            quote(&format!("{},{}", p.name(r.letter), v.stack_names()[r.push]))
        );
    }
    for r in v.internal_rules() {
        let _ = writeln!(
            out,
            "  {} -> {} [label={}];",
            quote(v.state_name(r.from)),
            quote(v.state_name(r.to)),
            quote(p.name(r.letter))
        );
    }
    for r in v.return_rules() {
        let _ = writeln!(
            out,
            "  {} -> {} [label={}, style=dashed];",
            quote(v.state_name(r.from)),
            quote(v.state_name(r.to)),
            quote(&format!("{},{}", p.name(r.letter), v.stack_names()[r.pop]))
        );
    }
    out.push_str("}\n");
    out
}

/// Render a core graph: one edge per positive letter, base vertex doubled.
pub fn core_graph_to_dot(g: &CoreGraph) -> String {
    let p = g.alphabet().base();
    let mut out = String::from("digraph core {\n");
    for v in 0..g.num_vertices() {
        let shape = if v == g.base() { "doublecircle" } else { "circle" };
        let _ = writeln!(out, "  v{v} [shape={shape}];");
    }
    for &(s, l, t) in g.edges() {
        let _ = writeln!(out, "  v{s} -> v{t} [label={}];", quote(p.name(l)));
    }
    out.push_str("}\n");
    out
}
