//! Rooted termgraphs and their elementary transformations.
//!
//! A termgraph is a finite, edge-labelled, node-labelled directed graph.
//! Edges are stored as `(source, feature, target)` triples, so parallel
//! edges with identical labels collapse by construction. Node labelling is
//! generalized to *sets* of labels; the strict discipline (at most one
//! label per node, at most one outgoing edge per `(node, feature)`) is a
//! validation concern, not a structural one — the modifier logic can and
//! does produce non-strict graphs.

mod canon;
mod homo;
mod parse;
mod print;
mod rewrite;

pub use canon::{canonical_key, canonical_key_unrooted};
pub use homo::{find_homomorphisms, Homomorphism, MatchOptions};
pub use parse::{parse_actions, parse_rules, parse_termgraph};
pub use print::{print_termgraph, to_dot};
pub use rewrite::{
    all_matches, apply_match, fresh_assignment, normalize, rewrite_step, rewrite_step_with,
    substitute_actions, NormalizeOptions, NormalizeOutcome, RewriteError, RewriteRule,
    RewriteSystem, Strategy,
};

use crate::sym::Sym;
use std::collections::{BTreeMap, BTreeSet};
use thiserror::Error;

/// An edge triple `(source, feature, target)`.
pub type Edge = (Sym, Sym, Sym);

/// The shared structure of a graph: everything except the root. Cheap to
/// clone the handle; mutation copies on write, so moving the root around
/// (which the universal action does a lot) costs nothing.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
struct GraphCore {
    nodes: BTreeSet<Sym>,
    labels: BTreeMap<Sym, BTreeSet<Sym>>,
    edges: BTreeSet<Edge>,
}

/// A rooted termgraph.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RootedTermgraph {
    core: std::sync::Arc<GraphCore>,
    root: Sym,
}

/// A violation of the strictness discipline.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum StrictViolation {
    /// Node carries more than one label.
    MultiLabel { node: Sym, labels: Vec<Sym> },
    /// Node has two outgoing edges with the same feature.
    MultiEdge { node: Sym, feature: Sym, targets: Vec<Sym> },
}

impl std::fmt::Display for StrictViolation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            StrictViolation::MultiLabel { node, labels } => {
                write!(f, "node {node} has multiple labels: ")?;
                let strs: Vec<_> = labels.iter().map(|l| l.to_string()).collect();
                write!(f, "{}", strs.join(", "))
            }
            StrictViolation::MultiEdge { node, feature, targets } => {
                write!(f, "node {node} has multiple {feature}-successors: ")?;
                let strs: Vec<_> = targets.iter().map(|l| l.to_string()).collect();
                write!(f, "{}", strs.join(", "))
            }
        }
    }
}

/// Errors from applying elementary actions.
#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum ActionError {
    #[error("local redirection {node} >{feature}> {target}: node {node} has no outgoing {feature}-edge")]
    MissingEdge { node: Sym, feature: Sym, target: Sym },
    #[error("node definition for {node} repeats feature {feature}")]
    DuplicateFeature { node: Sym, feature: Sym },
    #[error("action {index} failed: {source}")]
    AtIndex {
        index: usize,
        #[source]
        source: Box<ActionError>,
    },
}

/// How global redirection `n >> m` treats the root.
///
/// The conditional policy moves the root only when it *is* the redirected
/// node; the literal policy always moves it. The conditional reading is
/// the default: it is what the list and arithmetic programs need when a
/// redex sits below the global root.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum RootPolicy {
    #[default]
    Conditional,
    Literal,
}

/// An elementary action on termgraphs.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum ElementaryAction {
    /// `n : f(a1 => n1, ..., ak => nk)` — (re)define node `n`: set its
    /// label to `f` and install the listed outgoing edges. Nodes that do
    /// not exist yet are created.
    NodeDefinition {
        node: Sym,
        label: Sym,
        args: Vec<(Sym, Sym)>,
    },
    /// `n >a> m` — retarget the outgoing `a`-edge of `n` to `m`.
    LocalRedirection { node: Sym, feature: Sym, target: Sym },
    /// `n >> m` — retarget every edge pointing to `n` so it points to `m`.
    GlobalRedirection { node: Sym, target: Sym },
}

impl ElementaryAction {
    /// All node identifiers mentioned by the action, in order of occurrence.
    pub fn nodes(&self) -> Vec<Sym> {
        match self {
            ElementaryAction::NodeDefinition { node, args, .. } => {
                let mut out = vec![node.clone()];
                out.extend(args.iter().map(|(_, n)| n.clone()));
                out
            }
            ElementaryAction::LocalRedirection { node, target, .. } => {
                vec![node.clone(), target.clone()]
            }
            ElementaryAction::GlobalRedirection { node, target } => {
                vec![node.clone(), target.clone()]
            }
        }
    }

    /// Rename every node of the action through `map`; nodes absent from
    /// the map are reported.
    pub fn rename(&self, map: &BTreeMap<Sym, Sym>) -> Result<ElementaryAction, Sym> {
        let get = |n: &Sym| map.get(n).cloned().ok_or_else(|| n.clone());
        Ok(match self {
            ElementaryAction::NodeDefinition { node, label, args } => {
                ElementaryAction::NodeDefinition {
                    node: get(node)?,
                    label: label.clone(),
                    args: args
                        .iter()
                        .map(|(f, n)| Ok((f.clone(), get(n)?)))
                        .collect::<Result<_, Sym>>()?,
                }
            }
            ElementaryAction::LocalRedirection { node, feature, target } => {
                ElementaryAction::LocalRedirection {
                    node: get(node)?,
                    feature: feature.clone(),
                    target: get(target)?,
                }
            }
            ElementaryAction::GlobalRedirection { node, target } => {
                ElementaryAction::GlobalRedirection { node: get(node)?, target: get(target)? }
            }
        })
    }
}

impl std::fmt::Display for ElementaryAction {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            ElementaryAction::NodeDefinition { node, label, args } => {
                write!(f, "{node}:{label}")?;
                if !args.is_empty() {
                    let parts: Vec<_> =
                        args.iter().map(|(a, n)| format!("{a} => {n}")).collect();
                    write!(f, "({})", parts.join(", "))?;
                }
                Ok(())
            }
            ElementaryAction::LocalRedirection { node, feature, target } => {
                write!(f, "{node} >{feature}> {target}")
            }
            ElementaryAction::GlobalRedirection { node, target } => {
                write!(f, "{node} >> {target}")
            }
        }
    }
}

impl RootedTermgraph {
    fn core(&self) -> &GraphCore {
        &self.core
    }

    fn core_mut(&mut self) -> &mut GraphCore {
        std::sync::Arc::make_mut(&mut self.core)
    }

    /// Graph with a single unlabelled node serving as the root.
    pub fn single(root: Sym) -> Self {
        let mut core = GraphCore::default();
        core.nodes.insert(root.clone());
        RootedTermgraph { core: std::sync::Arc::new(core), root }
    }

    /// Assemble a graph from parts. Endpoints of edges and labelled nodes
    /// are added to the node set; the root is added as well.
    pub fn build<I, J>(root: Sym, labelled: I, edges: J) -> Self
    where
        I: IntoIterator<Item = (Sym, Sym)>,
        J: IntoIterator<Item = Edge>,
    {
        let mut g = RootedTermgraph::single(root);
        for (n, l) in labelled {
            g.nodes.insert(n.clone());
            g.labels.entry(n).or_default().insert(l);
        }
        for (s, f, t) in edges {
            g.nodes.insert(s.clone());
            g.nodes.insert(t.clone());
            g.edges.insert((s, f, t));
        }
        g
    }

    pub fn root(&self) -> &Sym {
        &self.root
    }

    /// Move the root to an existing node.
    pub fn with_root(&self, root: Sym) -> Self {
        debug_assert!(self.nodes.contains(&root));
        let mut g = self.clone();
        g.root = root;
        g
    }

    pub fn nodes(&self) -> impl Iterator<Item = &Sym> {
        self.nodes.iter()
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn contains_node(&self, n: &Sym) -> bool {
        self.nodes.contains(n)
    }

    pub fn edges(&self) -> impl Iterator<Item = &Edge> {
        self.edges.iter()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn has_edge(&self, s: &Sym, f: &Sym, t: &Sym) -> bool {
        self.edges.contains(&(s.clone(), f.clone(), t.clone()))
    }

    /// Label set of a node (empty for unlabelled nodes).
    pub fn labels_of(&self, n: &Sym) -> impl Iterator<Item = &Sym> {
        self.labels.get(n).into_iter().flatten()
    }

    pub fn has_label(&self, n: &Sym, l: &Sym) -> bool {
        self.labels.get(n).is_some_and(|s| s.contains(l))
    }

    /// The unique label of a strict node, if any.
    pub fn label_of(&self, n: &Sym) -> Option<&Sym> {
        self.labels.get(n).and_then(|s| s.iter().next())
    }

    /// All features appearing on edges.
    pub fn features(&self) -> BTreeSet<Sym> {
        self.edges.iter().map(|(_, f, _)| f.clone()).collect()
    }

    /// All label symbols appearing on nodes.
    pub fn label_alphabet(&self) -> BTreeSet<Sym> {
        self.labels.values().flatten().cloned().collect()
    }

    /// Targets of `feature`-edges leaving `n`, in order.
    pub fn successors(&self, n: &Sym, feature: &Sym) -> Vec<Sym> {
        self.edges
            .range((n.clone(), feature.clone(), first_sym())..)
            .take_while(|(s, f, _)| s == n && f == feature)
            .map(|(_, _, t)| t.clone())
            .collect()
    }

    /// Outgoing edges of `n`, in feature order.
    pub fn out_edges(&self, n: &Sym) -> Vec<Edge> {
        self.edges
            .range((n.clone(), first_sym(), first_sym())..)
            .take_while(|(s, _, _)| s == n)
            .cloned()
            .collect()
    }

    pub fn add_node(&mut self, n: Sym) {
        self.nodes.insert(n);
    }

    pub fn set_labels(&mut self, n: &Sym, labels: BTreeSet<Sym>) {
        debug_assert!(self.nodes.contains(n));
        if labels.is_empty() {
            self.labels.remove(n);
        } else {
            self.labels.insert(n.clone(), labels);
        }
    }

    pub fn add_label(&mut self, n: &Sym, l: Sym) {
        debug_assert!(self.nodes.contains(n));
        self.labels.entry(n.clone()).or_default().insert(l);
    }

    pub fn remove_label(&mut self, n: &Sym, l: &Sym) {
        if let Some(set) = self.labels.get_mut(n) {
            set.remove(l);
            if set.is_empty() {
                self.labels.remove(n);
            }
        }
    }

    pub fn add_edge(&mut self, s: Sym, f: Sym, t: Sym) {
        debug_assert!(self.nodes.contains(&s) && self.nodes.contains(&t));
        self.edges.insert((s, f, t));
    }

    pub fn remove_edge(&mut self, e: &Edge) {
        self.edges.remove(e);
    }

    pub fn set_edges(&mut self, edges: BTreeSet<Edge>) {
        self.edges = edges;
    }

    /// A node identifier of the form `fN` not yet present in the graph.
    /// Nodes are never removed, so repeated calls after insertion yield a
    /// monotone sequence.
    pub fn fresh_node_id(&self) -> Sym {
        for k in 0u64.. {
            let cand = Sym::new(format!("f{k}"));
            if !self.nodes.contains(&cand) {
                return cand;
            }
        }
        unreachable!()
    }

    /// Nodes reachable from the root by following edges.
    pub fn reachable_from_root(&self) -> BTreeSet<Sym> {
        let mut seen = BTreeSet::new();
        let mut stack = vec![self.root.clone()];
        while let Some(n) = stack.pop() {
            if !seen.insert(n.clone()) {
                continue;
            }
            for (_, _, t) in self.out_edges(&n) {
                if !seen.contains(&t) {
                    stack.push(t);
                }
            }
        }
        seen
    }

    /// Drop everything unreachable from the root.
    pub fn garbage_collected(&self) -> Self {
        let keep = self.reachable_from_root();
        let mut g = RootedTermgraph::single(self.root.clone());
        for n in &keep {
            g.nodes.insert(n.clone());
            if let Some(ls) = self.labels.get(n) {
                g.labels.insert(n.clone(), ls.clone());
            }
        }
        g.edges = self
            .edges
            .iter()
            .filter(|(s, _, t)| keep.contains(s) && keep.contains(t))
            .cloned()
            .collect();
        g
    }

    /// Remove every label starting with `$` (encoder markers).
    pub fn erase_marker_labels(&self) -> Self {
        let mut g = self.clone();
        g.labels = self
            .labels
            .iter()
            .filter_map(|(n, ls)| {
                let kept: BTreeSet<Sym> =
                    ls.iter().filter(|l| !l.is_reserved()).cloned().collect();
                if kept.is_empty() {
                    None
                } else {
                    Some((n.clone(), kept))
                }
            })
            .collect();
        g
    }
}

fn first_sym() -> Sym {
    Sym::new("")
}

/// Check the strictness discipline. An empty result means the graph is a
/// termgraph in the sense of the rewriting engine: every node carries at
/// most one label and no node has two outgoing edges with the same feature.
pub fn validate_strict(g: &RootedTermgraph) -> Vec<StrictViolation> {
    let mut out = Vec::new();
    for (n, ls) in &g.labels {
        if ls.len() > 1 {
            out.push(StrictViolation::MultiLabel {
                node: n.clone(),
                labels: ls.iter().cloned().collect(),
            });
        }
    }
    let mut per_slot: BTreeMap<(Sym, Sym), Vec<Sym>> = BTreeMap::new();
    for (s, f, t) in &g.edges {
        per_slot.entry((s.clone(), f.clone())).or_default().push(t.clone());
    }
    for ((n, f), ts) in per_slot {
        if ts.len() > 1 {
            out.push(StrictViolation::MultiEdge { node: n, feature: f, targets: ts });
        }
    }
    out
}

/// Apply one elementary action with the default (conditional) root policy.
pub fn apply_action(
    g: &RootedTermgraph,
    action: &ElementaryAction,
) -> Result<RootedTermgraph, ActionError> {
    apply_action_with(g, action, RootPolicy::Conditional)
}

/// Apply one elementary action.
///
/// * Node definition: creates missing nodes, replaces the node's label set
///   with the given label, and installs the listed edges. A feature that
///   already has outgoing edges from the node is retargeted (the old edges
///   are dropped) so that strict graphs stay strict.
/// * Local redirection: retargets the outgoing `feature`-edges of `node`
///   to `target`; it is an error if there is none.
/// * Global redirection: retargets every edge pointing to `node`. The root
///   follows according to `policy`.
pub fn apply_action_with(
    g: &RootedTermgraph,
    action: &ElementaryAction,
    policy: RootPolicy,
) -> Result<RootedTermgraph, ActionError> {
    let mut out = g.clone();
    match action {
        ElementaryAction::NodeDefinition { node, label, args } => {
            let mut seen = BTreeSet::new();
            for (f, _) in args {
                if !seen.insert(f.clone()) {
                    return Err(ActionError::DuplicateFeature {
                        node: node.clone(),
                        feature: f.clone(),
                    });
                }
            }
            out.add_node(node.clone());
            for (_, t) in args {
                out.add_node(t.clone());
            }
            let mut ls = BTreeSet::new();
            ls.insert(label.clone());
            out.set_labels(node, ls);
            for (f, t) in args {
                for old in out.successors(node, f) {
                    out.remove_edge(&(node.clone(), f.clone(), old));
                }
                out.add_edge(node.clone(), f.clone(), t.clone());
            }
        }
        ElementaryAction::LocalRedirection { node, feature, target } => {
            let old = out.successors(node, feature);
            if old.is_empty() {
                return Err(ActionError::MissingEdge {
                    node: node.clone(),
                    feature: feature.clone(),
                    target: target.clone(),
                });
            }
            for t in old {
                out.remove_edge(&(node.clone(), feature.clone(), t));
            }
            out.add_edge(node.clone(), feature.clone(), target.clone());
        }
        ElementaryAction::GlobalRedirection { node, target } => {
            out.add_node(target.clone());
            let incoming: Vec<Edge> =
                out.edges.iter().filter(|(_, _, t)| t == node).cloned().collect();
            for (s, f, _) in incoming {
                out.remove_edge(&(s.clone(), f.clone(), node.clone()));
                out.add_edge(s, f, target.clone());
            }
            match policy {
                RootPolicy::Conditional => {
                    if out.root == *node {
                        out.root = target.clone();
                    }
                }
                RootPolicy::Literal => {
                    out.root = target.clone();
                }
            }
        }
    }
    Ok(out)
}

/// Fold a sequence of actions left to right; the empty sequence is the
/// identity. Failures report the index of the offending action.
pub fn apply_actions(
    g: &RootedTermgraph,
    actions: &[ElementaryAction],
) -> Result<RootedTermgraph, ActionError> {
    apply_actions_with(g, actions, RootPolicy::Conditional)
}

pub fn apply_actions_with(
    g: &RootedTermgraph,
    actions: &[ElementaryAction],
    policy: RootPolicy,
) -> Result<RootedTermgraph, ActionError> {
    let mut cur = g.clone();
    for (i, a) in actions.iter().enumerate() {
        cur = apply_action_with(&cur, a, policy)
            .map_err(|e| ActionError::AtIndex { index: i, source: Box::new(e) })?;
    }
    Ok(cur)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sym::sym;

    fn example_24_h2() -> RootedTermgraph {
        parse_termgraph("n1:g(b => n2:_, a => n3:_)").unwrap()
    }

    #[test]
    fn node_definition_adds_a_labelled_node() {
        // A fresh node labelled h with a positional edge back to n1.
        let h2 = example_24_h2();
        let act = ElementaryAction::NodeDefinition {
            node: sym("n0"),
            label: sym("h"),
            args: vec![(sym("1"), sym("n1"))],
        };
        let h3 = apply_action(&h2, &act).unwrap();
        assert!(h3.contains_node(&sym("n0")));
        assert!(h3.has_label(&sym("n0"), &sym("h")));
        assert!(h3.has_edge(&sym("n0"), &sym("1"), &sym("n1")));
        assert_eq!(h3.root(), &sym("n1"));
        assert_eq!(h3.node_count(), 4);
    }

    #[test]
    fn local_redirection_moves_one_edge() {
        let h2 = example_24_h2();
        let h3 = apply_action(
            &h2,
            &ElementaryAction::NodeDefinition {
                node: sym("n0"),
                label: sym("h"),
                args: vec![(sym("1"), sym("n1"))],
            },
        )
        .unwrap();
        let h4 = apply_action(
            &h3,
            &ElementaryAction::LocalRedirection {
                node: sym("n1"),
                feature: sym("a"),
                target: sym("n2"),
            },
        )
        .unwrap();
        assert!(h4.has_edge(&sym("n1"), &sym("a"), &sym("n2")));
        assert!(!h4.has_edge(&sym("n1"), &sym("a"), &sym("n3")));
        // n3 is now unreferenced but still present.
        assert!(h4.contains_node(&sym("n3")));
    }

    #[test]
    fn global_redirection_moves_incoming_edges() {
        let h2 = example_24_h2();
        let actions = parse_actions("n0:h(1 => n1); n1 >a> n2; n2 >> n0").unwrap();
        let h5 = apply_actions(&h2, &actions).unwrap();
        // Both former edges into n2 now point at n0.
        assert!(h5.has_edge(&sym("n1"), &sym("a"), &sym("n0")));
        assert!(h5.has_edge(&sym("n1"), &sym("b"), &sym("n0")));
        assert!(h5.successors(&sym("n1"), &sym("a")) == vec![sym("n0")]);
        assert_eq!(h5.root(), &sym("n1"));
    }

    #[test]
    fn global_redirection_of_the_root_moves_the_root() {
        let g = parse_termgraph("r:+(n:0, m:_)").unwrap();
        let step = ElementaryAction::GlobalRedirection { node: sym("r"), target: sym("m") };
        let out = apply_action(&g, &step).unwrap();
        assert_eq!(out.root(), &sym("m"));

        // Under the literal policy the root moves even when it is elsewhere.
        let g2 = g.with_root(sym("n"));
        let cond = apply_action_with(&g2, &step, RootPolicy::Conditional).unwrap();
        assert_eq!(cond.root(), &sym("n"));
        let lit = apply_action_with(&g2, &step, RootPolicy::Literal).unwrap();
        assert_eq!(lit.root(), &sym("m"));
    }

    #[test]
    fn local_redirection_requires_an_edge() {
        let g = RootedTermgraph::single(sym("n"));
        let err = apply_action(
            &g,
            &ElementaryAction::LocalRedirection {
                node: sym("n"),
                feature: sym("a"),
                target: sym("n"),
            },
        )
        .unwrap_err();
        assert!(matches!(err, ActionError::MissingEdge { .. }));
    }

    #[test]
    fn node_definition_rejects_duplicate_features() {
        let g = RootedTermgraph::single(sym("n"));
        let err = apply_action(
            &g,
            &ElementaryAction::NodeDefinition {
                node: sym("n"),
                label: sym("f"),
                args: vec![(sym("1"), sym("n")), (sym("1"), sym("n"))],
            },
        )
        .unwrap_err();
        assert!(matches!(err, ActionError::DuplicateFeature { .. }));
    }

    #[test]
    fn node_definition_retargets_colliding_features() {
        let g = parse_termgraph("n:f(a => m:_)").unwrap();
        let out = apply_action(
            &g,
            &ElementaryAction::NodeDefinition {
                node: sym("n"),
                label: sym("g"),
                args: vec![(sym("a"), sym("k"))],
            },
        )
        .unwrap();
        assert_eq!(out.successors(&sym("n"), &sym("a")), vec![sym("k")]);
        assert!(validate_strict(&out).is_empty());
        // The previous label is replaced, not accumulated.
        assert_eq!(out.label_of(&sym("n")), Some(&sym("g")));
    }

    #[test]
    fn empty_sequence_is_identity() {
        let g = example_24_h2();
        assert_eq!(apply_actions(&g, &[]).unwrap(), g);
    }

    #[test]
    fn failing_index_is_reported() {
        let g = RootedTermgraph::single(sym("n"));
        let acts = vec![
            ElementaryAction::GlobalRedirection { node: sym("n"), target: sym("n") },
            ElementaryAction::LocalRedirection {
                node: sym("n"),
                feature: sym("a"),
                target: sym("n"),
            },
        ];
        match apply_actions(&g, &acts).unwrap_err() {
            ActionError::AtIndex { index, .. } => assert_eq!(index, 1),
            other => panic!("unexpected error {other:?}"),
        }
    }

    #[test]
    fn strictness_violations_are_reported() {
        let mut g = RootedTermgraph::single(sym("n"));
        g.add_node(sym("m"));
        g.add_edge(sym("n"), sym("a"), sym("n"));
        g.add_edge(sym("n"), sym("a"), sym("m"));
        g.add_label(&sym("n"), sym("cons"));
        g.add_label(&sym("n"), sym("nil"));
        let violations = validate_strict(&g);
        assert_eq!(violations.len(), 2);
        assert!(violations
            .iter()
            .any(|v| matches!(v, StrictViolation::MultiLabel { .. })));
        assert!(violations
            .iter()
            .any(|v| matches!(v, StrictViolation::MultiEdge { .. })));
    }

    #[test]
    fn fresh_ids_skip_taken_names() {
        let mut g = RootedTermgraph::single(sym("f0"));
        assert_eq!(g.fresh_node_id(), sym("f1"));
        g.add_node(sym("f1"));
        assert_eq!(g.fresh_node_id(), sym("f2"));
    }
}
