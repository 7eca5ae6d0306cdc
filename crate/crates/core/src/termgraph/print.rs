//! Linear-notation printer, the inverse of the parser.

use super::{validate_strict, RootedTermgraph, StrictViolation};
use crate::sym::Sym;
use std::collections::BTreeSet;
use std::fmt::Write;

/// Print a strict termgraph in linear notation. Reparsing the output
/// reproduces the graph exactly, including node names; the root heads the
/// first summand. Nodes unreachable from the root are emitted as extra
/// summands in name order.
pub fn print_termgraph(g: &RootedTermgraph) -> Result<String, Vec<StrictViolation>> {
    let violations = validate_strict(g);
    if !violations.is_empty() {
        return Err(violations);
    }
    let mut visited = BTreeSet::new();
    let mut summands = Vec::new();
    summands.push(print_node(g, g.root(), &mut visited));
    for n in g.nodes() {
        if !visited.contains(n) {
            summands.push(print_node(g, n, &mut visited));
        }
    }
    Ok(summands.join(" + "))
}

fn feature_key(f: &Sym) -> (u8, u64, String) {
    match f.as_str().parse::<u64>() {
        Ok(k) => (0, k, String::new()),
        Err(_) => (1, 0, f.to_string()),
    }
}

fn print_node(g: &RootedTermgraph, n: &Sym, visited: &mut BTreeSet<Sym>) -> String {
    if !visited.insert(n.clone()) {
        return n.to_string();
    }
    let mut out = String::new();
    write!(out, "{n}").unwrap();
    let label = g.label_of(n);
    let mut edges = g.out_edges(n);
    edges.sort_by_key(|(_, f, _)| feature_key(f));
    match (label, edges.is_empty()) {
        (Some(l), true) => {
            write!(out, ":{l}").unwrap();
        }
        (Some(l), false) => {
            write!(out, ":{l}").unwrap();
            print_args(g, &edges, &mut out, visited);
        }
        (None, true) => {
            write!(out, ":_").unwrap();
        }
        (None, false) => {
            write!(out, ":_").unwrap();
            print_args(g, &edges, &mut out, visited);
        }
    }
    out
}

fn print_args(
    g: &RootedTermgraph,
    edges: &[(Sym, Sym, Sym)],
    out: &mut String,
    visited: &mut BTreeSet<Sym>,
) {
    // Positional shorthand when the features are exactly 1..k.
    let positional = edges
        .iter()
        .enumerate()
        .all(|(i, (_, f, _))| f.as_str() == (i + 1).to_string());
    out.push('(');
    for (i, (_, f, t)) in edges.iter().enumerate() {
        if i > 0 {
            out.push_str(", ");
        }
        if !positional {
            write!(out, "{f} => ").unwrap();
        }
        out.push_str(&print_node(g, t, visited));
    }
    out.push(')');
}

/// Plain DOT adjacency dump, with no layout logic.
pub fn to_dot(g: &RootedTermgraph) -> String {
    let mut out = String::from("digraph termgraph {\n");
    for n in g.nodes() {
        let labels: Vec<String> = g.labels_of(n).map(|l| l.to_string()).collect();
        let shown = if labels.is_empty() {
            format!("{n}")
        } else {
            format!("{n}:{}", labels.join(","))
        };
        let style = if n == g.root() { ", penwidth=2" } else { "" };
        writeln!(out, "  \"{n}\" [label=\"{shown}\"{style}];").unwrap();
    }
    for (s, f, t) in g.edges() {
        writeln!(out, "  \"{s}\" -> \"{t}\" [label=\"{f}\"];").unwrap();
    }
    out.push_str("}\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::termgraph::{canonical_key, parse_termgraph};

    #[test]
    fn single_node() {
        let g = parse_termgraph("n:_").unwrap();
        assert_eq!(print_termgraph(&g).unwrap(), "n:_");
    }

    #[test]
    fn round_trip_is_exact() {
        for text in [
            "p1:cons(1 => g:a, 2 => p2) + p2:cons(1 => g, 2 => p1)",
            "r:+(n:0, m:_)",
            "n1:g(b => n2:_, a => n3:_)",
            "n:_(a => m:_) + k:c",
        ] {
            let g = parse_termgraph(text).unwrap();
            let printed = print_termgraph(&g).unwrap();
            let back = parse_termgraph(&printed).unwrap();
            assert_eq!(back, g, "round trip failed for {text} -> {printed}");
            assert_eq!(canonical_key(&back), canonical_key(&g));
        }
    }

    #[test]
    fn positional_features_print_positionally() {
        let g = parse_termgraph("r:+(n:0, m:_)").unwrap();
        let printed = print_termgraph(&g).unwrap();
        assert_eq!(printed, "r:+(n:0, m:_)");
    }

    #[test]
    fn named_features_keep_their_names() {
        let g = parse_termgraph("n1:g(b => n2:_, a => n3:_)").unwrap();
        let printed = print_termgraph(&g).unwrap();
        assert_eq!(printed, "n1:g(a => n3:_, b => n2:_)");
    }

    #[test]
    fn non_strict_graphs_are_rejected() {
        let mut g = parse_termgraph("n:_").unwrap();
        g.add_label(&crate::sym::sym("n"), crate::sym::sym("a"));
        g.add_label(&crate::sym::sym("n"), crate::sym::sym("b"));
        assert!(print_termgraph(&g).is_err());
    }
}
