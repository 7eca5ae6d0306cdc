//! Homomorphism search between termgraphs.
//!
//! A homomorphism is determined by its node map: labelled pattern nodes
//! must map to nodes carrying the same label, unlabelled pattern nodes may
//! map anywhere, and every pattern edge `(m, a, w)` must have an image
//! edge `(h(m), a, h(w))`.

use super::RootedTermgraph;
use crate::sym::Sym;
use std::collections::BTreeMap;

/// A node map from pattern to target.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct Homomorphism {
    map: BTreeMap<Sym, Sym>,
}

impl Homomorphism {
    pub fn new(map: BTreeMap<Sym, Sym>) -> Self {
        Homomorphism { map }
    }

    pub fn identity(g: &RootedTermgraph) -> Self {
        Homomorphism { map: g.nodes().map(|n| (n.clone(), n.clone())).collect() }
    }

    pub fn map(&self) -> &BTreeMap<Sym, Sym> {
        &self.map
    }

    pub fn apply(&self, n: &Sym) -> Option<&Sym> {
        self.map.get(n)
    }

    pub fn is_injective(&self) -> bool {
        let mut seen = std::collections::BTreeSet::new();
        self.map.values().all(|v| seen.insert(v.clone()))
    }

    /// Check label and edge preservation directly.
    pub fn preserves(&self, pattern: &RootedTermgraph, target: &RootedTermgraph) -> bool {
        for n in pattern.nodes() {
            let Some(img) = self.map.get(n) else { return false };
            if !target.contains_node(img) {
                return false;
            }
            for l in pattern.labels_of(n) {
                if !target.has_label(img, l) {
                    return false;
                }
            }
        }
        pattern.edges().all(|(s, f, t)| {
            target.has_edge(&self.map[s], f, &self.map[t])
        })
    }
}

/// Search mode: plain, injective, and/or anchored at a target node (the
/// pattern root must map to the anchor).
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct MatchOptions {
    pub injective: bool,
    pub anchor: Option<Sym>,
}

impl MatchOptions {
    pub fn all() -> Self {
        MatchOptions::default()
    }

    pub fn injective() -> Self {
        MatchOptions { injective: true, anchor: None }
    }

    pub fn anchored(node: Sym) -> Self {
        MatchOptions { injective: false, anchor: Some(node) }
    }

    pub fn injective_anchored(node: Sym) -> Self {
        MatchOptions { injective: true, anchor: Some(node) }
    }
}

/// All homomorphisms from `pattern` into `target`, in lexicographic order
/// of the node map (pattern nodes in name order).
pub fn find_homomorphisms(
    pattern: &RootedTermgraph,
    target: &RootedTermgraph,
    options: &MatchOptions,
) -> Vec<Homomorphism> {
    let pattern_nodes: Vec<Sym> = pattern.nodes().cloned().collect();
    let target_nodes: Vec<Sym> = target.nodes().cloned().collect();
    let mut out = Vec::new();
    let mut partial: BTreeMap<Sym, Sym> = BTreeMap::new();
    extend(
        pattern,
        target,
        options,
        &pattern_nodes,
        &target_nodes,
        0,
        &mut partial,
        &mut out,
    );
    out
}

#[allow(clippy::too_many_arguments)]
fn extend(
    pattern: &RootedTermgraph,
    target: &RootedTermgraph,
    options: &MatchOptions,
    pattern_nodes: &[Sym],
    target_nodes: &[Sym],
    i: usize,
    partial: &mut BTreeMap<Sym, Sym>,
    out: &mut Vec<Homomorphism>,
) {
    if i == pattern_nodes.len() {
        out.push(Homomorphism::new(partial.clone()));
        return;
    }
    let p = &pattern_nodes[i];
    for t in target_nodes {
        if options.injective && partial.values().any(|v| v == t) {
            continue;
        }
        if let Some(anchor) = &options.anchor {
            if p == pattern.root() && t != anchor {
                continue;
            }
        }
        if !pattern.labels_of(p).all(|l| target.has_label(t, l)) {
            continue;
        }
        // Edge constraints against already-assigned endpoints.
        let ok = pattern.edges().all(|(s, f, w)| {
            let s_img = if s == p { Some(t) } else { partial.get(s) };
            let w_img = if w == p { Some(t) } else { partial.get(w) };
            match (s_img, w_img) {
                (Some(si), Some(wi)) => target.has_edge(si, f, wi),
                _ => true,
            }
        });
        if !ok {
            continue;
        }
        partial.insert(p.clone(), t.clone());
        extend(pattern, target, options, pattern_nodes, target_nodes, i + 1, partial, out);
        partial.remove(p);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sym::sym;
    use crate::termgraph::parse_termgraph;

    fn chain(n: usize) -> RootedTermgraph {
        let edges: Vec<_> = (0..n - 1)
            .map(|i| (Sym::new(format!("b{i}")), sym("a"), Sym::new(format!("b{}", i + 1))))
            .collect();
        let mut g = RootedTermgraph::build(sym("b0"), [], edges);
        for i in 0..n {
            g.add_node(Sym::new(format!("b{i}")));
        }
        g
    }

    fn cycle2() -> RootedTermgraph {
        RootedTermgraph::build(
            sym("c0"),
            [],
            [(sym("c0"), sym("a"), sym("c1")), (sym("c1"), sym("a"), sym("c0"))],
        )
    }

    #[test]
    fn chains_fold_onto_cycles_but_not_back() {
        let path = chain(3);
        let cyc = cycle2();
        assert!(!find_homomorphisms(&path, &cyc, &MatchOptions::all()).is_empty());
        assert!(find_homomorphisms(&cyc, &path, &MatchOptions::all()).is_empty());
    }

    #[test]
    fn unlabelled_single_node_matches_everywhere() {
        let pat = RootedTermgraph::single(sym("x"));
        let tgt = parse_termgraph("r:+(n:0, m:_)").unwrap();
        let homs = find_homomorphisms(&pat, &tgt, &MatchOptions::all());
        assert_eq!(homs.len(), tgt.node_count());
    }

    #[test]
    fn unique_match_is_found() {
        let pat = parse_termgraph("n1:g(a => n2:_, b => n3:_)").unwrap();
        let tgt = parse_termgraph("m:g(a => p:c1, b => q:c2)").unwrap();
        let homs = find_homomorphisms(&pat, &tgt, &MatchOptions::all());
        assert_eq!(homs.len(), 1);
        let h = &homs[0];
        assert_eq!(h.apply(&sym("n1")), Some(&sym("m")));
        assert_eq!(h.apply(&sym("n2")), Some(&sym("p")));
        assert_eq!(h.apply(&sym("n3")), Some(&sym("q")));
    }

    #[test]
    fn anchored_mode_pins_the_pattern_root() {
        let pat = RootedTermgraph::single(sym("x"));
        let tgt = parse_termgraph("r:+(n:0, m:_)").unwrap();
        let homs = find_homomorphisms(&pat, &tgt, &MatchOptions::anchored(sym("n")));
        assert_eq!(homs.len(), 1);
        assert_eq!(homs[0].apply(&sym("x")), Some(&sym("n")));
    }

    #[test]
    fn injective_mode_filters() {
        let pat = chain(2); // two nodes, one a-edge
        let loop1 = RootedTermgraph::build(sym("u"), [], [(sym("u"), sym("a"), sym("u"))]);
        assert_eq!(find_homomorphisms(&pat, &loop1, &MatchOptions::all()).len(), 1);
        assert!(find_homomorphisms(&pat, &loop1, &MatchOptions::injective()).is_empty());
    }

    #[test]
    fn results_preserve_structure() {
        let pat = parse_termgraph("n1:g(a => n2:_, b => n3:_)").unwrap();
        let tgt = parse_termgraph("m:g(a => p:c1, b => q:c2) + k:g(a => p, b => q)").unwrap();
        for h in find_homomorphisms(&pat, &tgt, &MatchOptions::all()) {
            assert!(h.preserves(&pat, &tgt));
        }
    }
}
