//! Shared helpers for the integration and acceptance suites: asset
//! loading, exhaustive graph enumeration, and independent graph-algorithm
//! oracles. Everything here is deliberately implementation-naive so it
//! can serve as a cross-check for the engine and the encodings.

#![allow(dead_code)]

use modgraph_core::sym::Sym;
use modgraph_core::termgraph::{
    apply_match, canonical_key, find_homomorphisms, parse_rules, parse_termgraph, MatchOptions,
    RewriteSystem, RootPolicy, RootedTermgraph,
};
use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::path::PathBuf;

pub fn assets_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../assets")
}

pub fn load_graph(name: &str) -> RootedTermgraph {
    let text = std::fs::read_to_string(assets_dir().join(name))
        .unwrap_or_else(|e| panic!("reading {name}: {e}"));
    parse_termgraph(&text).unwrap_or_else(|e| panic!("parsing {name}: {e}"))
}

pub fn load_rules(name: &str) -> RewriteSystem {
    let text = std::fs::read_to_string(assets_dir().join(name))
        .unwrap_or_else(|e| panic!("reading {name}: {e}"));
    parse_rules(&text).unwrap_or_else(|e| panic!("parsing {name}: {e}"))
}

/// A Peano chain `succ^k(0)` read off from the root; `None` when the
/// reachable part is not exactly such a chain.
pub fn peano_value(g: &RootedTermgraph) -> Option<usize> {
    let mut count = 0usize;
    let mut cur = g.root().clone();
    let mut seen = BTreeSet::new();
    loop {
        if !seen.insert(cur.clone()) {
            return None;
        }
        let labels: Vec<&Sym> = g.labels_of(&cur).collect();
        if labels.len() != 1 {
            return None;
        }
        match labels[0].as_str() {
            "0" => {
                if !g.out_edges(&cur).is_empty() {
                    return None;
                }
                return Some(count);
            }
            "succ" => {
                let out = g.out_edges(&cur);
                if out.len() != 1 || out[0].1.as_str() != "1" {
                    return None;
                }
                count += 1;
                cur = out[0].2.clone();
            }
            _ => return None,
        }
    }
}

/// The labels of a nil-terminated cons list read off from the root;
/// `None` if the shape is not a plain list.
pub fn list_values(g: &RootedTermgraph) -> Option<Vec<Sym>> {
    let mut out = Vec::new();
    let mut cur = g.root().clone();
    let mut seen = BTreeSet::new();
    loop {
        if !seen.insert(cur.clone()) {
            return None;
        }
        let labels: Vec<&Sym> = g.labels_of(&cur).collect();
        if labels.len() != 1 {
            return None;
        }
        match labels[0].as_str() {
            "nil" => return Some(out),
            "cons" => {
                let heads = g.successors(&cur, &Sym::new("1"));
                let tails = g.successors(&cur, &Sym::new("2"));
                if heads.len() != 1 || tails.len() != 1 {
                    return None;
                }
                let value: Vec<&Sym> = g.labels_of(&heads[0]).collect();
                if value.len() != 1 {
                    return None;
                }
                out.push(value[0].clone());
                cur = tails[0].clone();
            }
            _ => return None,
        }
    }
}

/// Build the start graph `double(succ^k(0))`.
pub fn double_of(k: usize) -> RootedTermgraph {
    let mut text = String::from("d:double(");
    for i in 0..k {
        text.push_str(&format!("s{i}:succ("));
    }
    text.push_str("z:0");
    for _ in 0..k {
        text.push(')');
    }
    text.push(')');
    parse_termgraph(&text).unwrap()
}

/// Build `+(succ^i(0), succ^j(0))`.
pub fn plus_of(i: usize, j: usize) -> RootedTermgraph {
    fn numeral(prefix: &str, k: usize) -> String {
        let mut text = String::new();
        for d in 0..k {
            text.push_str(&format!("{prefix}{d}:succ("));
        }
        text.push_str(&format!("{prefix}z:0"));
        for _ in 0..k {
            text.push(')');
        }
        text
    }
    let text = format!("r:+({}, {})", numeral("x", i), numeral("y", j));
    parse_termgraph(&text).unwrap()
}

/// Enumerate every strict rooted termgraph on at most `max_nodes` nodes
/// over the given alphabets, rooted at the first node. Each node carries
/// at most one label (or none) and each `(node, feature)` slot points at
/// one node or nowhere.
pub fn for_each_strict_graph(
    max_nodes: usize,
    features: &[Sym],
    labels: &[Sym],
    f: &mut dyn FnMut(&RootedTermgraph),
) {
    for n in 1..=max_nodes {
        let names: Vec<Sym> = (0..n).map(|i| Sym::new(format!("n{i}"))).collect();
        let label_choices = labels.len() + 1;
        let target_choices = n + 1;
        let slots = n * features.len();
        let mut label_digits = vec![0usize; n];
        loop {
            let mut edge_digits = vec![0usize; slots];
            loop {
                let mut g = RootedTermgraph::single(names[0].clone());
                for name in &names {
                    g.add_node(name.clone());
                }
                for (i, &d) in label_digits.iter().enumerate() {
                    if d > 0 {
                        g.add_label(&names[i], labels[d - 1].clone());
                    }
                }
                for (slot, &d) in edge_digits.iter().enumerate() {
                    if d > 0 {
                        let node = slot / features.len();
                        let feat = slot % features.len();
                        g.add_edge(
                            names[node].clone(),
                            features[feat].clone(),
                            names[d - 1].clone(),
                        );
                    }
                }
                f(&g);
                if !increment(&mut edge_digits, target_choices) {
                    break;
                }
            }
            if !increment(&mut label_digits, label_choices) {
                break;
            }
        }
    }
}

/// Enumerate every generalized rooted termgraph (label sets, arbitrary
/// edge sets) on at most `max_nodes` nodes. Stops early when `f` returns
/// `false`.
pub fn for_each_generalized_graph(
    max_nodes: usize,
    features: &[Sym],
    labels: &[Sym],
    f: &mut dyn FnMut(&RootedTermgraph) -> bool,
) {
    for n in 1..=max_nodes {
        let names: Vec<Sym> = (0..n).map(|i| Sym::new(format!("n{i}"))).collect();
        let label_bits = n * labels.len();
        let edge_bits = n * features.len() * n;
        assert!(label_bits < 63 && edge_bits < 63, "alphabet too large to enumerate");
        for label_mask in 0u64..(1 << label_bits) {
            for edge_mask in 0u64..(1 << edge_bits) {
                let mut g = RootedTermgraph::single(names[0].clone());
                for name in &names {
                    g.add_node(name.clone());
                }
                for bit in 0..label_bits {
                    if label_mask & (1 << bit) != 0 {
                        let node = bit / labels.len();
                        let label = bit % labels.len();
                        g.add_label(&names[node], labels[label].clone());
                    }
                }
                for bit in 0..edge_bits {
                    if edge_mask & (1 << bit) != 0 {
                        let src = bit / (features.len() * n);
                        let rest = bit % (features.len() * n);
                        let feat = rest / n;
                        let dst = rest % n;
                        g.add_edge(
                            names[src].clone(),
                            features[feat].clone(),
                            names[dst].clone(),
                        );
                    }
                }
                if !f(&g) {
                    return;
                }
            }
        }
    }
}

fn increment(digits: &mut [usize], base: usize) -> bool {
    for d in digits.iter_mut() {
        *d += 1;
        if *d < base {
            return true;
        }
        *d = 0;
    }
    false
}

// ---- direct graph-algorithm oracles ----

pub fn irreflexive_oracle(g: &RootedTermgraph, a: &Sym) -> bool {
    g.nodes().all(|n| !g.has_edge(n, a, n))
}

pub fn deterministic_oracle(g: &RootedTermgraph, a: &Sym) -> bool {
    g.nodes().all(|n| g.successors(n, a).len() <= 1)
}

pub fn locally_reflexive_oracle(g: &RootedTermgraph, a: &Sym) -> bool {
    g.has_edge(g.root(), a, g.root())
}

fn reachable_via(g: &RootedTermgraph, start: &Sym, feats: &[Sym]) -> BTreeSet<Sym> {
    let mut seen = BTreeSet::new();
    let mut stack = vec![start.clone()];
    while let Some(n) = stack.pop() {
        if !seen.insert(n.clone()) {
            continue;
        }
        for f in feats {
            for t in g.successors(&n, f) {
                if !seen.contains(&t) {
                    stack.push(t);
                }
            }
        }
    }
    seen
}

/// No node lies on a cycle of `a`-edges.
pub fn acyclic_oracle(g: &RootedTermgraph, a: &Sym) -> bool {
    g.nodes().all(|n| {
        !g.successors(n, a)
            .into_iter()
            .any(|t| t == *n || reachable_via(g, &t, &[a.clone()]).contains(n))
    })
}

/// Every node lies on an `a`-cycle.
pub fn circular_oracle(g: &RootedTermgraph, a: &Sym) -> bool {
    g.nodes().all(|n| {
        g.successors(n, a)
            .into_iter()
            .any(|t| t == *n || reachable_via(g, &t, &[a.clone()]).contains(n))
    })
}

/// Walk the unique `a`-path from the root of an `a`-deterministic graph:
/// number of steps before it stops, and whether it stopped by closing a
/// cycle rather than by running out of edges.
pub fn path_walk(g: &RootedTermgraph, a: &Sym) -> (usize, bool) {
    let mut seen = BTreeSet::new();
    let mut cur = g.root().clone();
    let mut steps = 0usize;
    loop {
        seen.insert(cur.clone());
        match g.successors(&cur, a).first().cloned() {
            None => return (steps, false),
            Some(next) => {
                if seen.contains(&next) {
                    return (steps, true);
                }
                steps += 1;
                cur = next;
            }
        }
    }
}

/// Every node's `a`-subtree and `b`-subtree are disjoint.
pub fn binary_oracle(g: &RootedTermgraph, a: &Sym, b: &Sym) -> bool {
    let walk = [a.clone(), b.clone()];
    g.nodes().all(|n| {
        g.successors(n, a).into_iter().all(|ca| {
            g.successors(n, b).into_iter().all(|cb| {
                let da = reachable_via(g, &ca, &walk);
                let db = reachable_via(g, &cb, &walk);
                da.intersection(&db).next().is_none()
            })
        })
    })
}

/// All normal forms reachable from `g` (any rule, any match, garbage
/// collected after each step), keyed by canonical form. `None` when the
/// exploration exceeds `cap` states.
pub fn all_normal_forms(
    g: &RootedTermgraph,
    system: &RewriteSystem,
    cap: usize,
) -> Option<BTreeMap<String, RootedTermgraph>> {
    let mut seen: BTreeMap<String, RootedTermgraph> = BTreeMap::new();
    let mut queue = VecDeque::new();
    let mut normal = BTreeMap::new();
    seen.insert(canonical_key(g), g.clone());
    queue.push_back(g.clone());
    while let Some(cur) = queue.pop_front() {
        let mut any = false;
        for rule in system.rules() {
            for h in find_homomorphisms(rule.lhs(), &cur, &MatchOptions::all()) {
                any = true;
                let next = apply_match(&cur, rule, &h, RootPolicy::Conditional)
                    .expect("rule application failed")
                    .garbage_collected();
                let key = canonical_key(&next);
                if !seen.contains_key(&key) {
                    if seen.len() >= cap {
                        return None;
                    }
                    seen.insert(key, next.clone());
                    queue.push_back(next);
                }
            }
        }
        if !any {
            normal.insert(canonical_key(&cur), cur);
        }
    }
    Some(normal)
}
