use std::fmt::Write;

use crate::prob::Weight;

use super::{Gpts, Output};

fn quote(s: &str) -> String {
    format!("\"{}\"", s.replace('\\', "\\\\").replace('"', "\\\""))
}

/// Graphviz rendering. Steps are labelled `a | p`; termination is drawn as a
/// double edge into a per-state ✓ node. Output only, never read back.
pub fn to_dot<W: Weight>(g: &Gpts<W>) -> String {
    let mut out = String::new();
    writeln!(out, "digraph gpts {{").unwrap();
    writeln!(out, "  rankdir=LR;").unwrap();
    writeln!(out, "  node [shape=circle];").unwrap();
    for x in 0..g.num_states() {
        let shape = if g.start().contains(&x) {
            " [shape=doublecircle]"
        } else {
            ""
        };
        writeln!(out, "  {}{};", quote(g.state_name(x)), shape).unwrap();
    }
    for x in 0..g.num_states() {
        let from = quote(g.state_name(x));
        for (o, w) in g.transitions(x).sorted_by_key(|o| o.clone()) {
            match o {
                Output::Term => {
                    let tick = quote(&format!("{}/✓", g.state_name(x)));
                    writeln!(out, "  {tick} [shape=plaintext, label=\"✓\"];").unwrap();
                    writeln!(
                        out,
                        "  {from} -> {tick} [label={}, color=\"black:invis:black\"];",
                        quote(&w.to_string())
                    )
                    .unwrap();
                }
                Output::Step(a, y) => {
                    let label = quote(&format!("{a} | {w}"));
                    writeln!(out, "  {from} -> {} [label={label}];", quote(g.state_name(*y))).unwrap();
                }
            }
        }
    }
    writeln!(out, "}}").unwrap();
    out
}
