//! Rewrite rules, single steps and normal-form computation.

use super::homo::{find_homomorphisms, Homomorphism, MatchOptions};
use super::{
    apply_actions_with, validate_strict, ActionError, ElementaryAction, RootPolicy,
    RootedTermgraph,
};
use crate::sym::Sym;
use rand::prelude::*;
use rand_chacha::ChaCha8Rng;
use std::collections::{BTreeMap, BTreeSet};
use thiserror::Error;

/// A rewrite rule: a strict pattern termgraph whose unlabelled nodes act
/// as anonymous variables, and a sequence of elementary actions. Nodes
/// named by the actions but absent from the pattern are *fresh*: each
/// application creates them anew.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RewriteRule {
    lhs: RootedTermgraph,
    rhs: Vec<ElementaryAction>,
    fresh: Vec<Sym>,
}

impl RewriteRule {
    pub fn new(lhs: RootedTermgraph, rhs: Vec<ElementaryAction>) -> Result<Self, String> {
        let violations = validate_strict(&lhs);
        if !violations.is_empty() {
            return Err(format!("rule pattern is not strict: {}", violations[0]));
        }
        let mut fresh = Vec::new();
        for action in &rhs {
            for n in action.nodes() {
                if !lhs.contains_node(&n) && !fresh.contains(&n) {
                    fresh.push(n);
                }
            }
        }
        Ok(RewriteRule { lhs, rhs, fresh })
    }

    pub fn lhs(&self) -> &RootedTermgraph {
        &self.lhs
    }

    pub fn rhs(&self) -> &[ElementaryAction] {
        &self.rhs
    }

    /// Right-hand-side nodes that do not occur in the pattern, in order of
    /// first occurrence.
    pub fn fresh_nodes(&self) -> &[Sym] {
        &self.fresh
    }
}

/// An ordered set of rewrite rules.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct RewriteSystem {
    rules: Vec<RewriteRule>,
}

impl RewriteSystem {
    pub fn new(rules: Vec<RewriteRule>) -> Self {
        RewriteSystem { rules }
    }

    pub fn rules(&self) -> &[RewriteRule] {
        &self.rules
    }

    /// Every feature mentioned by patterns or actions.
    pub fn feature_alphabet(&self) -> BTreeSet<Sym> {
        let mut out = BTreeSet::new();
        for rule in &self.rules {
            out.extend(rule.lhs.features());
            for action in &rule.rhs {
                match action {
                    ElementaryAction::NodeDefinition { args, .. } => {
                        out.extend(args.iter().map(|(f, _)| f.clone()));
                    }
                    ElementaryAction::LocalRedirection { feature, .. } => {
                        out.insert(feature.clone());
                    }
                    ElementaryAction::GlobalRedirection { .. } => {}
                }
            }
        }
        out
    }

    /// Every node label mentioned by patterns or actions.
    pub fn label_alphabet(&self) -> BTreeSet<Sym> {
        let mut out = BTreeSet::new();
        for rule in &self.rules {
            out.extend(rule.lhs.label_alphabet());
            for action in &rule.rhs {
                if let ElementaryAction::NodeDefinition { label, .. } = action {
                    out.insert(label.clone());
                }
            }
        }
        out
    }
}

#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum RewriteError {
    #[error("the rule pattern has no match in the graph")]
    NoMatch,
    #[error("match index {index} out of range ({found} matches)")]
    BadMatchIndex { index: usize, found: usize },
    #[error("node {0} is not mapped by the homomorphism or the fresh-node table")]
    Unmapped(Sym),
    #[error(transparent)]
    Action(#[from] ActionError),
}

/// Substitute action nodes through a homomorphism extended by a table for
/// fresh nodes.
pub fn substitute_actions(
    h: &Homomorphism,
    actions: &[ElementaryAction],
    fresh: &BTreeMap<Sym, Sym>,
) -> Result<Vec<ElementaryAction>, RewriteError> {
    let mut combined = h.map().clone();
    for (k, v) in fresh {
        combined.insert(k.clone(), v.clone());
    }
    actions
        .iter()
        .map(|a| a.rename(&combined).map_err(RewriteError::Unmapped))
        .collect()
}

/// Allocate identifiers for the rule's fresh nodes, disjoint from the
/// graph's node names.
pub fn fresh_assignment(g: &RootedTermgraph, rule: &RewriteRule) -> BTreeMap<Sym, Sym> {
    let mut taken: BTreeSet<Sym> = g.nodes().cloned().collect();
    let mut out = BTreeMap::new();
    for node in rule.fresh_nodes() {
        let mut k = 0u64;
        let id = loop {
            let cand = Sym::new(format!("f{k}"));
            if !taken.contains(&cand) {
                break cand;
            }
            k += 1;
        };
        taken.insert(id.clone());
        out.insert(node.clone(), id);
    }
    out
}

/// Apply one rewrite step using the match with the given index in the
/// deterministic match order (0 picks the first).
pub fn rewrite_step(
    g: &RootedTermgraph,
    rule: &RewriteRule,
    choice: usize,
) -> Result<RootedTermgraph, RewriteError> {
    rewrite_step_with(g, rule, choice, RootPolicy::Conditional)
}

pub fn rewrite_step_with(
    g: &RootedTermgraph,
    rule: &RewriteRule,
    choice: usize,
    policy: RootPolicy,
) -> Result<RootedTermgraph, RewriteError> {
    let matches = find_homomorphisms(rule.lhs(), g, &MatchOptions::all());
    if matches.is_empty() {
        return Err(RewriteError::NoMatch);
    }
    let h = matches
        .get(choice)
        .ok_or(RewriteError::BadMatchIndex { index: choice, found: matches.len() })?;
    apply_match(g, rule, h, policy)
}

/// Apply the rule at an explicit match.
pub fn apply_match(
    g: &RootedTermgraph,
    rule: &RewriteRule,
    h: &Homomorphism,
    policy: RootPolicy,
) -> Result<RootedTermgraph, RewriteError> {
    let fresh = fresh_assignment(g, rule);
    let actions = substitute_actions(h, rule.rhs(), &fresh)?;
    Ok(apply_actions_with(g, &actions, policy)?)
}

/// Rule and match selection order for [`normalize`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Strategy {
    /// First rule in file order, first match in the deterministic match
    /// order.
    FirstRuleFirstMatch,
    /// Uniformly random among all (rule, match) pairs, reproducible for a
    /// fixed seed.
    Random(u64),
}

#[derive(Clone, Debug)]
pub struct NormalizeOptions {
    pub strategy: Strategy,
    pub max_steps: usize,
    pub root_policy: RootPolicy,
    /// Drop nodes unreachable from the root after each step. Without
    /// this, consumed redexes stay matchable and the list and arithmetic
    /// programs never reach a normal form.
    pub garbage_collect: bool,
}

impl Default for NormalizeOptions {
    fn default() -> Self {
        NormalizeOptions {
            strategy: Strategy::FirstRuleFirstMatch,
            max_steps: 10_000,
            root_policy: RootPolicy::Conditional,
            garbage_collect: true,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum NormalizeOutcome {
    /// No rule matches the final graph.
    NormalForm { graph: RootedTermgraph, steps: usize },
    /// The step bound was exhausted first.
    BoundExceeded { graph: RootedTermgraph, steps: usize },
}

impl NormalizeOutcome {
    pub fn graph(&self) -> &RootedTermgraph {
        match self {
            NormalizeOutcome::NormalForm { graph, .. } => graph,
            NormalizeOutcome::BoundExceeded { graph, .. } => graph,
        }
    }

    pub fn is_normal_form(&self) -> bool {
        matches!(self, NormalizeOutcome::NormalForm { .. })
    }
}

/// All (rule index, match) pairs applicable to `g`.
pub fn all_matches(g: &RootedTermgraph, system: &RewriteSystem) -> Vec<(usize, Homomorphism)> {
    let mut out = Vec::new();
    for (i, rule) in system.rules().iter().enumerate() {
        for h in find_homomorphisms(rule.lhs(), g, &MatchOptions::all()) {
            out.push((i, h));
        }
    }
    out
}

/// Iterate rewrite steps until no rule matches or the bound is hit.
pub fn normalize(
    g: &RootedTermgraph,
    system: &RewriteSystem,
    options: &NormalizeOptions,
) -> Result<NormalizeOutcome, RewriteError> {
    let mut rng = match options.strategy {
        Strategy::Random(seed) => Some(ChaCha8Rng::seed_from_u64(seed)),
        Strategy::FirstRuleFirstMatch => None,
    };
    let mut cur = g.clone();
    let mut steps = 0usize;
    loop {
        let pick: Option<(usize, Homomorphism)> = match &mut rng {
            None => system.rules().iter().enumerate().find_map(|(i, rule)| {
                find_homomorphisms(rule.lhs(), &cur, &MatchOptions::all())
                    .into_iter()
                    .next()
                    .map(|h| (i, h))
            }),
            Some(rng) => {
                let mut candidates = all_matches(&cur, system);
                if candidates.is_empty() {
                    None
                } else {
                    let k = rng.gen_range(0..candidates.len());
                    Some(candidates.swap_remove(k))
                }
            }
        };
        let Some((rule_idx, h)) = pick else {
            return Ok(NormalizeOutcome::NormalForm { graph: cur, steps });
        };
        if steps == options.max_steps {
            return Ok(NormalizeOutcome::BoundExceeded { graph: cur, steps });
        }
        cur = apply_match(&cur, &system.rules()[rule_idx], &h, options.root_policy)?;
        if options.garbage_collect {
            cur = cur.garbage_collected();
        }
        steps += 1;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sym::sym;
    use crate::termgraph::{canonical_key, parse_rules, parse_termgraph};

    fn example_26_rule() -> RewriteRule {
        parse_rules("n1:g(a => n2:_, b => n3:_) -> n0:h(1 => n1); n1 >a> n2; n2 >> n0")
            .unwrap()
            .rules()[0]
            .clone()
    }

    #[test]
    fn substitution_renames_nodes() {
        let mut map = BTreeMap::new();
        map.insert(sym("n1"), sym("m"));
        map.insert(sym("n2"), sym("p"));
        let h = Homomorphism::new(map);
        let actions = vec![ElementaryAction::LocalRedirection {
            node: sym("n1"),
            feature: sym("a"),
            target: sym("n2"),
        }];
        let out = substitute_actions(&h, &actions, &BTreeMap::new()).unwrap();
        assert_eq!(
            out,
            vec![ElementaryAction::LocalRedirection {
                node: sym("m"),
                feature: sym("a"),
                target: sym("p"),
            }]
        );
    }

    #[test]
    fn identity_substitution_is_identity() {
        let g = parse_termgraph("n1:g(a => n2:_, b => n3:_)").unwrap();
        let h = Homomorphism::identity(&g);
        let actions = vec![ElementaryAction::GlobalRedirection {
            node: sym("n2"),
            target: sym("n1"),
        }];
        assert_eq!(substitute_actions(&h, &actions, &BTreeMap::new()).unwrap(), actions);
    }

    #[test]
    fn unmapped_nodes_are_reported() {
        let h = Homomorphism::new(BTreeMap::new());
        let actions =
            vec![ElementaryAction::GlobalRedirection { node: sym("x"), target: sym("y") }];
        assert!(matches!(
            substitute_actions(&h, &actions, &BTreeMap::new()),
            Err(RewriteError::Unmapped(_))
        ));
    }

    #[test]
    fn example_rewrite_step() {
        // The redex is the whole graph; a fresh h-node appears, the a-edge
        // of n1 moves to it.
        let h2 = parse_termgraph("n1:g(a => n2:_, b => n3:_)").unwrap();
        let out = rewrite_step(&h2, &example_26_rule(), 0).unwrap();
        let expected = parse_termgraph(
            "n1:g(a => f0:h(1 => n1), b => n3:_) + n2:_",
        )
        .unwrap();
        assert_eq!(canonical_key(&out), canonical_key(&expected));
    }

    #[test]
    fn root_redirection_rule() {
        let system = parse_rules("r:+(n:0, m:_) -> r >> m").unwrap();
        let g = parse_termgraph("r:+(n:0, m:succ(k:0))").unwrap();
        let out = rewrite_step(&g, &system.rules()[0], 0).unwrap();
        assert_eq!(out.root(), &sym("m"));
        let nf = out.garbage_collected();
        let expected = parse_termgraph("m:succ(k:0)").unwrap();
        assert_eq!(canonical_key(&nf), canonical_key(&expected));
    }

    #[test]
    fn empty_rhs_leaves_graph_unchanged() {
        let rule = RewriteRule::new(parse_termgraph("n:_").unwrap(), vec![]).unwrap();
        let g = parse_termgraph("r:+(n:0, m:_)").unwrap();
        assert_eq!(rewrite_step(&g, &rule, 0).unwrap(), g);
    }

    #[test]
    fn no_match_is_an_error() {
        let rule = example_26_rule();
        let g = parse_termgraph("x:c").unwrap();
        assert_eq!(rewrite_step(&g, &rule, 0), Err(RewriteError::NoMatch));
        let h2 = parse_termgraph("n1:g(a => n2:_, b => n3:_)").unwrap();
        assert!(matches!(
            rewrite_step(&h2, &rule, 99),
            Err(RewriteError::BadMatchIndex { .. })
        ));
    }

    #[test]
    fn non_strict_patterns_are_rejected() {
        let mut g = parse_termgraph("n:_").unwrap();
        g.add_edge(sym("n"), sym("a"), sym("n"));
        g.add_node(sym("m"));
        g.add_edge(sym("n"), sym("a"), sym("m"));
        assert!(RewriteRule::new(g, vec![]).is_err());
    }
}
