//! Transition semantics of modifier actions and the bounded model checker.
//!
//! Every action clause is implemented literally over rooted termgraphs:
//! features branch over the root's outgoing edges, `U` over all nodes,
//! tests filter, node creation adds one fresh unlabelled node, the
//! assignment and edge-bundle actions evaluate their parameter formulas on
//! the *original* graph, and `*` takes a reflexive-transitive closure by
//! worklist over canonical keys. Closures are bounded by `max_states` per
//! star and by a cap on fresh nodes relative to the initial graph; a
//! truncated exploration can still refute a box (a witness is a witness)
//! but never confirms one — the verdict degrades to `Unknown` instead.

use super::{Formula, ModalAction};
use crate::termgraph::{canonical_key, RootedTermgraph};
use std::collections::{BTreeMap, VecDeque};

/// Exploration limits.
#[derive(Clone, Copy, Debug)]
pub struct Budget {
    /// Cap on the visited set of each star closure.
    pub max_states: usize,
    /// Cap on nodes added beyond the initial graph.
    pub max_fresh_nodes: usize,
}

impl Default for Budget {
    fn default() -> Self {
        Budget { max_states: 5_000, max_fresh_nodes: 3 }
    }
}

/// Exploration counters, cumulative per top-level call.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Stats {
    pub states_explored: usize,
    pub fresh_nodes: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    True,
    False,
    /// An exploration budget was exhausted before the verdict settled.
    Unknown,
}

impl Verdict {
    fn negate(self) -> Verdict {
        match self {
            Verdict::True => Verdict::False,
            Verdict::False => Verdict::True,
            Verdict::Unknown => Verdict::Unknown,
        }
    }
}

/// One step of a refutation trace: the action taken and the canonical key
/// of the graph it led to.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TraceStep {
    pub action: String,
    pub key: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CheckResult {
    pub verdict: Verdict,
    pub witness: Option<Vec<TraceStep>>,
}

/// The graphs reachable by one action. `exact` is false when a budget was
/// hit somewhere, in which case the set is a subset of the true one.
#[derive(Clone, Debug)]
pub struct SuccessorSet {
    pub graphs: Vec<RootedTermgraph>,
    pub exact: bool,
}

struct Ctx<'a> {
    budget: &'a Budget,
    node_limit: usize,
    stats: Stats,
}

/// Deterministic successor-set builder. Dedup is structural (same nodes,
/// labels, edges, root); isomorphic-but-renamed duplicates are collapsed
/// only by star closures, which work over canonical keys.
#[derive(Default)]
struct SetBuilder {
    set: std::collections::BTreeSet<RootedTermgraph>,
    exact: bool,
}

impl SetBuilder {
    fn new() -> Self {
        SetBuilder { set: Default::default(), exact: true }
    }

    fn insert(&mut self, g: RootedTermgraph) {
        self.set.insert(g);
    }

    fn finish(self) -> SuccessorSet {
        SuccessorSet { graphs: self.set.into_iter().collect(), exact: self.exact }
    }
}

/// All graphs reachable from `g` by `action`.
pub fn successors(g: &RootedTermgraph, action: &ModalAction, budget: &Budget) -> SuccessorSet {
    let (set, _) = successors_with_stats(g, action, budget);
    set
}

pub fn successors_with_stats(
    g: &RootedTermgraph,
    action: &ModalAction,
    budget: &Budget,
) -> (SuccessorSet, Stats) {
    let mut ctx = Ctx {
        budget,
        node_limit: g.node_count() + budget.max_fresh_nodes,
        stats: Stats::default(),
    };
    let set = succ(&mut ctx, g, action);
    let stats = ctx.stats;
    (set, stats)
}

/// Check `g ⊨ φ` with the given budget.
pub fn model_check(g: &RootedTermgraph, f: &Formula, budget: &Budget) -> CheckResult {
    model_check_with_stats(g, f, budget).0
}

pub fn model_check_with_stats(
    g: &RootedTermgraph,
    f: &Formula,
    budget: &Budget,
) -> (CheckResult, Stats) {
    let mut ctx = Ctx {
        budget,
        node_limit: g.node_count() + budget.max_fresh_nodes,
        stats: Stats::default(),
    };
    let result = check(&mut ctx, g, f);
    let stats = ctx.stats;
    (result, stats)
}

fn check(ctx: &mut Ctx, g: &RootedTermgraph, f: &Formula) -> CheckResult {
    match f {
        Formula::Prop(p) => verdict_only(if g.has_label(g.root(), p) {
            Verdict::True
        } else {
            Verdict::False
        }),
        Formula::False => verdict_only(Verdict::False),
        Formula::Not(inner) => {
            let r = check(ctx, g, inner);
            CheckResult { verdict: r.verdict.negate(), witness: r.witness }
        }
        Formula::Or(a, b) => {
            let ra = check(ctx, g, a);
            if ra.verdict == Verdict::True {
                return verdict_only(Verdict::True);
            }
            let rb = check(ctx, g, b);
            match (ra.verdict, rb.verdict) {
                (_, Verdict::True) => verdict_only(Verdict::True),
                (Verdict::False, Verdict::False) => {
                    CheckResult { verdict: Verdict::False, witness: ra.witness.or(rb.witness) }
                }
                _ => verdict_only(Verdict::Unknown),
            }
        }
        Formula::Box(action, body) => {
            let set = succ(ctx, g, action);
            let mut unknown = false;
            for g1 in &set.graphs {
                let r = check(ctx, g1, body);
                match r.verdict {
                    Verdict::False => {
                        let mut trace = vec![TraceStep {
                            action: action.to_string(),
                            key: canonical_key(g1),
                        }];
                        trace.extend(r.witness.unwrap_or_default());
                        return CheckResult { verdict: Verdict::False, witness: Some(trace) };
                    }
                    Verdict::Unknown => unknown = true,
                    Verdict::True => {}
                }
            }
            if unknown || !set.exact {
                verdict_only(Verdict::Unknown)
            } else {
                verdict_only(Verdict::True)
            }
        }
    }
}

fn verdict_only(v: Verdict) -> CheckResult {
    CheckResult { verdict: v, witness: None }
}

/// Evaluate `f` at every node of `g`; `None` when some evaluation was
/// `Unknown`.
fn eval_at_all(ctx: &mut Ctx, g: &RootedTermgraph, f: &Formula) -> Option<BTreeMap<crate::sym::Sym, bool>> {
    let mut out = BTreeMap::new();
    for n in g.nodes().cloned().collect::<Vec<_>>() {
        let r = check(ctx, &g.with_root(n.clone()), f);
        match r.verdict {
            Verdict::True => {
                out.insert(n, true);
            }
            Verdict::False => {
                out.insert(n, false);
            }
            Verdict::Unknown => return None,
        }
    }
    Some(out)
}

fn succ(ctx: &mut Ctx, g: &RootedTermgraph, action: &ModalAction) -> SuccessorSet {
    match action {
        ModalAction::Feature(a) => {
            let mut set = SetBuilder::new();
            for t in g.successors(g.root(), a) {
                set.insert(g.with_root(t));
            }
            set.finish()
        }
        ModalAction::Universal => {
            let mut set = SetBuilder::new();
            for n in g.nodes().cloned().collect::<Vec<_>>() {
                set.insert(g.with_root(n));
            }
            set.finish()
        }
        ModalAction::Test(f) => {
            let r = check(ctx, g, f);
            let mut set = SetBuilder::new();
            match r.verdict {
                Verdict::True => set.insert(g.clone()),
                Verdict::False => {}
                Verdict::Unknown => set.exact = false,
            }
            set.finish()
        }
        ModalAction::NewNode | ModalAction::NewNodeGo => {
            let mut set = SetBuilder::new();
            if g.node_count() >= ctx.node_limit {
                set.exact = false;
            } else {
                ctx.stats.fresh_nodes += 1;
                let fresh = g.fresh_node_id();
                let mut g1 = g.clone();
                g1.add_node(fresh.clone());
                if *action == ModalAction::NewNodeGo {
                    g1 = g1.with_root(fresh);
                }
                set.insert(g1);
            }
            set.finish()
        }
        ModalAction::AssignGlobal(p, f) => {
            let mut set = SetBuilder::new();
            match eval_at_all(ctx, g, f) {
                None => set.exact = false,
                Some(values) => {
                    let mut g1 = g.clone();
                    for (n, v) in values {
                        if v {
                            g1.add_label(&n, p.clone());
                        } else {
                            g1.remove_label(&n, p);
                        }
                    }
                    set.insert(g1);
                }
            }
            set.finish()
        }
        ModalAction::AssignLocal(p, f) => {
            let mut set = SetBuilder::new();
            let r = check(ctx, g, f);
            match r.verdict {
                Verdict::Unknown => set.exact = false,
                v => {
                    let mut g1 = g.clone();
                    let root = g1.root().clone();
                    if v == Verdict::True {
                        g1.add_label(&root, p.clone());
                    } else {
                        g1.remove_label(&root, p);
                    }
                    set.insert(g1);
                }
            }
            set.finish()
        }
        ModalAction::AddEdges(a, from, to) | ModalAction::DelEdges(a, from, to) => {
            let mut set = SetBuilder::new();
            let sources = eval_at_all(ctx, g, from);
            let targets = eval_at_all(ctx, g, to);
            match (sources, targets) {
                (Some(sources), Some(targets)) => {
                    let mut g1 = g.clone();
                    let adding = matches!(action, ModalAction::AddEdges(..));
                    for (s, sv) in &sources {
                        if !sv {
                            continue;
                        }
                        for (t, tv) in &targets {
                            if !tv {
                                continue;
                            }
                            if adding {
                                g1.add_edge(s.clone(), a.clone(), t.clone());
                            } else {
                                g1.remove_edge(&(s.clone(), a.clone(), t.clone()));
                            }
                        }
                    }
                    set.insert(g1);
                }
                _ => set.exact = false,
            }
            set.finish()
        }
        ModalAction::Seq(first, second) => {
            let sa = succ(ctx, g, first);
            let mut set = SetBuilder::new();
            set.exact = sa.exact;
            for mid in &sa.graphs {
                let sb = succ(ctx, mid, second);
                if !sb.exact {
                    set.exact = false;
                }
                for out in sb.graphs {
                    set.insert(out);
                }
            }
            set.finish()
        }
        ModalAction::Choice(left, right) => {
            let sl = succ(ctx, g, left);
            let sr = succ(ctx, g, right);
            let mut set = SetBuilder::new();
            set.exact = sl.exact && sr.exact;
            for out in sl.graphs.into_iter().chain(sr.graphs) {
                set.insert(out);
            }
            set.finish()
        }
        ModalAction::Star(body) => {
            let mut visited: BTreeMap<String, RootedTermgraph> = BTreeMap::new();
            let mut queue: VecDeque<RootedTermgraph> = VecDeque::new();
            let mut exact = true;
            visited.insert(canonical_key(g), g.clone());
            queue.push_back(g.clone());
            while let Some(cur) = queue.pop_front() {
                let step = succ(ctx, &cur, body);
                if !step.exact {
                    exact = false;
                }
                for next in step.graphs {
                    let key = canonical_key(&next);
                    if visited.contains_key(&key) {
                        continue;
                    }
                    if visited.len() >= ctx.budget.max_states {
                        exact = false;
                        queue.clear();
                        break;
                    }
                    visited.insert(key, next.clone());
                    queue.push_back(next);
                }
            }
            ctx.stats.states_explored += visited.len();
            SuccessorSet { graphs: visited.into_values().collect(), exact }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::logic::{parse_action, parse_formula};
    use crate::sym::sym;
    use crate::termgraph::parse_termgraph;

    fn check_str(graph: &str, formula: &str) -> Verdict {
        let g = parse_termgraph(graph).unwrap();
        let f = parse_formula(formula).unwrap();
        model_check(&g, &f, &Budget::default()).verdict
    }

    #[test]
    fn proposition_at_the_root() {
        assert_eq!(check_str("n:w", "w"), Verdict::True);
        assert_eq!(check_str("n:v", "w"), Verdict::False);
    }

    #[test]
    fn new_node_go_lands_on_an_unlabelled_node() {
        let g = parse_termgraph("n:_").unwrap();
        let set = successors(&g, &parse_action("new!").unwrap(), &Budget::default());
        assert!(set.exact);
        assert_eq!(set.graphs.len(), 1);
        let g1 = &set.graphs[0];
        assert_eq!(g1.node_count(), 2);
        assert_eq!(g1.labels_of(g1.root()).count(), 0);
        assert_ne!(g1.root(), g.root());
        // A fresh node never carries any label.
        assert_eq!(check_str("n:w(a => m:w)", "<new!>~w"), Verdict::True);
        assert_eq!(check_str("n:_", "<new!>~q"), Verdict::True);
    }

    #[test]
    fn add_edges_everywhere() {
        let g = parse_termgraph("n:_ + m:_").unwrap();
        let set = successors(&g, &parse_action("add(a, true, true)").unwrap(), &Budget::default());
        assert_eq!(set.graphs.len(), 1);
        assert_eq!(set.graphs[0].edge_count(), 4);
    }

    #[test]
    fn star_of_a_failing_test_is_reflexive_only() {
        let g = parse_termgraph("n:_ + m:_").unwrap();
        let set = successors(&g, &parse_action("test(false)*").unwrap(), &Budget::default());
        assert!(set.exact);
        assert_eq!(set.graphs.len(), 1);
        assert_eq!(canonical_key(&set.graphs[0]), canonical_key(&g));
    }

    #[test]
    fn feature_steps_follow_root_edges() {
        let g = parse_termgraph("n:_(a => m:_, b => k:_)").unwrap();
        let set = successors(&g, &parse_action("a").unwrap(), &Budget::default());
        assert_eq!(set.graphs.len(), 1);
        assert_eq!(set.graphs[0].root(), &sym("m"));
        let set_u = successors(&g, &parse_action("U").unwrap(), &Budget::default());
        assert_eq!(set_u.graphs.len(), 3);
    }

    #[test]
    fn irreflexivity_formula_detects_self_loops() {
        let formula = "[setg(w,false)][U][setl(w,true)][a]~w";
        assert_eq!(check_str("n:_(a => n)", formula), Verdict::False);
        assert_eq!(check_str("n:_(a => m:_)", formula), Verdict::True);
    }

    #[test]
    fn update_actions_are_deterministic() {
        let g = parse_termgraph("n:p(a => m:_)").unwrap();
        for action in ["new", "new!", "setg(w, p)", "setl(w, ~p)", "add(b, p, true)", "del(a, true, true)"] {
            let set = successors(&g, &parse_action(action).unwrap(), &Budget::default());
            assert_eq!(set.graphs.len(), 1, "{action}");
            assert!(set.exact);
        }
    }

    #[test]
    fn budget_exhaustion_reports_unknown_not_wrong() {
        // new* keeps growing; the closure must truncate.
        let g = parse_termgraph("n:_").unwrap();
        let budget = Budget { max_states: 50, max_fresh_nodes: 3 };
        let set = successors(&g, &parse_action("new*").unwrap(), &budget);
        assert!(!set.exact);
        let f = parse_formula("[new*]true").unwrap();
        assert_eq!(model_check(&g, &f, &budget).verdict, Verdict::Unknown);
        // A refutation inside the explored region is still found.
        let f2 = parse_formula("[new*]<U>w").unwrap();
        assert_eq!(model_check(&g, &f2, &budget).verdict, Verdict::False);
    }

    #[test]
    fn refutation_traces_name_the_successor() {
        let g = parse_termgraph("n:_(a => m:q)").unwrap();
        let f = parse_formula("[a]~q").unwrap();
        let r = model_check(&g, &f, &Budget::default());
        assert_eq!(r.verdict, Verdict::False);
        let w = r.witness.unwrap();
        assert_eq!(w.len(), 1);
        assert_eq!(w[0].action, "a");
    }

    #[test]
    fn assignments_evaluate_on_the_original_graph() {
        // setg(w, ~w) flips every node's w simultaneously.
        let g = parse_termgraph("n:w + m:_").unwrap();
        let set = successors(&g, &parse_action("setg(w, ~w)").unwrap(), &Budget::default());
        let g1 = &set.graphs[0];
        let n_has = g1.has_label(&sym("n"), &sym("w"));
        let m_has = g1.has_label(&sym("m"), &sym("w"));
        assert!(!n_has && m_has);
    }
}
