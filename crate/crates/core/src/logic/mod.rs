//! Formulas and actions of the graph-modifier logic.
//!
//! Formulas are built from propositions (node labels), falsity, negation,
//! disjunction and action boxes; everything else is derived. Actions
//! traverse edges, jump anywhere, create nodes, test formulas, assign a
//! label's truth value globally or locally, add or delete edge bundles
//! between definable node sets, and compose under `;`, `|` and `*`.

mod parse;
mod print;
mod random;
mod semantics;

pub use parse::{parse_action, parse_formula, FormulaParseError};
pub use random::{random_termgraph, RandomGraphParams};
pub use semantics::{
    model_check, model_check_with_stats, successors, successors_with_stats, Budget, CheckResult,
    Stats, SuccessorSet, TraceStep, Verdict,
};

use crate::sym::Sym;

/// A formula of the modifier logic.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Formula {
    /// A proposition: the current node carries this label.
    Prop(Sym),
    False,
    Not(Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    /// `[α]φ` — after every terminating execution of `α`, `φ` holds.
    Box(ModalAction, Box<Formula>),
}

/// An action of the modifier logic.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ModalAction {
    /// Traverse one edge with this feature from the current node.
    Feature(Sym),
    /// Jump to any node.
    Universal,
    /// Add a fresh unlabelled node; stay put.
    NewNode,
    /// Add a fresh unlabelled node and move there.
    NewNodeGo,
    /// `φ?` — proceed iff `φ` holds here.
    Test(Box<Formula>),
    /// `ω :=_g φ` — relabel every node: `ω` becomes the truth value of
    /// `φ` evaluated at that node.
    AssignGlobal(Sym, Box<Formula>),
    /// `ω :=_l φ` — same, at the current node only.
    AssignLocal(Sym, Box<Formula>),
    /// `a + (φ, ψ)` — add `a`-edges from all `φ`-nodes to all `ψ`-nodes.
    AddEdges(Sym, Box<Formula>, Box<Formula>),
    /// `a - (φ, ψ)` — delete `a`-edges from `φ`-nodes to `ψ`-nodes.
    DelEdges(Sym, Box<Formula>, Box<Formula>),
    Seq(Box<ModalAction>, Box<ModalAction>),
    Choice(Box<ModalAction>, Box<ModalAction>),
    Star(Box<ModalAction>),
}

impl Formula {
    pub fn prop(name: impl AsRef<str>) -> Formula {
        Formula::Prop(Sym::new(name))
    }

    pub fn truth() -> Formula {
        Formula::Not(Box::new(Formula::False))
    }

    pub fn not(f: Formula) -> Formula {
        Formula::Not(Box::new(f))
    }

    pub fn or(a: Formula, b: Formula) -> Formula {
        Formula::Or(Box::new(a), Box::new(b))
    }

    pub fn and(a: Formula, b: Formula) -> Formula {
        Formula::not(Formula::or(Formula::not(a), Formula::not(b)))
    }

    pub fn implies(a: Formula, b: Formula) -> Formula {
        Formula::or(Formula::not(a), b)
    }

    pub fn iff(a: Formula, b: Formula) -> Formula {
        Formula::and(Formula::implies(a.clone(), b.clone()), Formula::implies(b, a))
    }

    pub fn boxed(action: ModalAction, f: Formula) -> Formula {
        Formula::Box(action, Box::new(f))
    }

    pub fn diamond(action: ModalAction, f: Formula) -> Formula {
        Formula::not(Formula::boxed(action, Formula::not(f)))
    }

    /// Conjunction over a list; empty list is truth.
    pub fn conj(fs: impl IntoIterator<Item = Formula>) -> Formula {
        let mut it = fs.into_iter();
        match it.next() {
            None => Formula::truth(),
            Some(first) => it.fold(first, Formula::and),
        }
    }

    /// Disjunction over a list; empty list is falsity.
    pub fn disj(fs: impl IntoIterator<Item = Formula>) -> Formula {
        let mut it = fs.into_iter();
        match it.next() {
            None => Formula::False,
            Some(first) => it.fold(first, Formula::or),
        }
    }

    /// Does any update action (anything but features, jumps and tests)
    /// occur in the formula?
    pub fn has_update(&self) -> bool {
        match self {
            Formula::Prop(_) | Formula::False => false,
            Formula::Not(f) => f.has_update(),
            Formula::Or(a, b) => a.has_update() || b.has_update(),
            Formula::Box(action, f) => action.has_update() || f.has_update(),
        }
    }

    pub fn has_star(&self) -> bool {
        match self {
            Formula::Prop(_) | Formula::False => false,
            Formula::Not(f) => f.has_star(),
            Formula::Or(a, b) => a.has_star() || b.has_star(),
            Formula::Box(action, f) => action.has_star() || f.has_star(),
        }
    }

    pub fn has_local_assign(&self) -> bool {
        match self {
            Formula::Prop(_) | Formula::False => false,
            Formula::Not(f) => f.has_local_assign(),
            Formula::Or(a, b) => a.has_local_assign() || b.has_local_assign(),
            Formula::Box(action, f) => action.has_local_assign() || f.has_local_assign(),
        }
    }

    /// Propositions occurring anywhere in the formula.
    pub fn propositions(&self) -> std::collections::BTreeSet<Sym> {
        let mut out = std::collections::BTreeSet::new();
        self.collect_props(&mut out);
        out
    }

    /// Features occurring anywhere in the formula.
    pub fn features(&self) -> std::collections::BTreeSet<Sym> {
        let mut out = std::collections::BTreeSet::new();
        self.collect_features(&mut out);
        out
    }

    fn collect_props(&self, out: &mut std::collections::BTreeSet<Sym>) {
        match self {
            Formula::Prop(p) => {
                out.insert(p.clone());
            }
            Formula::False => {}
            Formula::Not(f) => f.collect_props(out),
            Formula::Or(a, b) => {
                a.collect_props(out);
                b.collect_props(out);
            }
            Formula::Box(action, f) => {
                action.collect_props(out);
                f.collect_props(out);
            }
        }
    }

    fn collect_features(&self, out: &mut std::collections::BTreeSet<Sym>) {
        match self {
            Formula::Prop(_) | Formula::False => {}
            Formula::Not(f) => f.collect_features(out),
            Formula::Or(a, b) => {
                a.collect_features(out);
                b.collect_features(out);
            }
            Formula::Box(action, f) => {
                action.collect_features(out);
                f.collect_features(out);
            }
        }
    }
}

impl ModalAction {
    pub fn feature(name: impl AsRef<str>) -> ModalAction {
        ModalAction::Feature(Sym::new(name))
    }

    pub fn test(f: Formula) -> ModalAction {
        ModalAction::Test(Box::new(f))
    }

    pub fn assign_global(p: Sym, f: Formula) -> ModalAction {
        ModalAction::AssignGlobal(p, Box::new(f))
    }

    pub fn assign_local(p: Sym, f: Formula) -> ModalAction {
        ModalAction::AssignLocal(p, Box::new(f))
    }

    pub fn add_edges(a: Sym, from: Formula, to: Formula) -> ModalAction {
        ModalAction::AddEdges(a, Box::new(from), Box::new(to))
    }

    pub fn del_edges(a: Sym, from: Formula, to: Formula) -> ModalAction {
        ModalAction::DelEdges(a, Box::new(from), Box::new(to))
    }

    pub fn seq(a: ModalAction, b: ModalAction) -> ModalAction {
        ModalAction::Seq(Box::new(a), Box::new(b))
    }

    /// Right-nested sequence over a list. The empty list is `true?`.
    pub fn seq_all(actions: impl IntoIterator<Item = ModalAction>) -> ModalAction {
        let mut v: Vec<ModalAction> = actions.into_iter().collect();
        match v.pop() {
            None => ModalAction::test(Formula::truth()),
            Some(last) => v.into_iter().rev().fold(last, |acc, a| ModalAction::seq(a, acc)),
        }
    }

    pub fn choice(a: ModalAction, b: ModalAction) -> ModalAction {
        ModalAction::Choice(Box::new(a), Box::new(b))
    }

    pub fn choice_all(actions: impl IntoIterator<Item = ModalAction>) -> Option<ModalAction> {
        let mut it = actions.into_iter();
        let first = it.next()?;
        Some(it.fold(first, ModalAction::choice))
    }

    pub fn star(a: ModalAction) -> ModalAction {
        ModalAction::Star(Box::new(a))
    }

    /// `a+` — one or more steps of a feature.
    pub fn plus(a: ModalAction) -> ModalAction {
        ModalAction::seq(a.clone(), ModalAction::star(a))
    }

    /// Is this one of the update forms (new node, assignment, edge
    /// addition/deletion)?
    pub fn is_update(&self) -> bool {
        matches!(
            self,
            ModalAction::NewNode
                | ModalAction::NewNodeGo
                | ModalAction::AssignGlobal(..)
                | ModalAction::AssignLocal(..)
                | ModalAction::AddEdges(..)
                | ModalAction::DelEdges(..)
        )
    }

    pub fn has_update(&self) -> bool {
        match self {
            ModalAction::Feature(_) | ModalAction::Universal => false,
            ModalAction::NewNode
            | ModalAction::NewNodeGo
            | ModalAction::AssignGlobal(..)
            | ModalAction::AssignLocal(..)
            | ModalAction::AddEdges(..)
            | ModalAction::DelEdges(..) => true,
            ModalAction::Test(f) => f.has_update(),
            ModalAction::Seq(a, b) | ModalAction::Choice(a, b) => {
                a.has_update() || b.has_update()
            }
            ModalAction::Star(a) => a.has_update(),
        }
    }

    pub fn has_star(&self) -> bool {
        match self {
            ModalAction::Star(_) => true,
            ModalAction::Feature(_)
            | ModalAction::Universal
            | ModalAction::NewNode
            | ModalAction::NewNodeGo => false,
            ModalAction::Test(f) => f.has_star(),
            ModalAction::AssignGlobal(_, f) | ModalAction::AssignLocal(_, f) => f.has_star(),
            ModalAction::AddEdges(_, a, b) | ModalAction::DelEdges(_, a, b) => {
                a.has_star() || b.has_star()
            }
            ModalAction::Seq(a, b) | ModalAction::Choice(a, b) => a.has_star() || b.has_star(),
        }
    }

    pub fn has_local_assign(&self) -> bool {
        match self {
            ModalAction::AssignLocal(..) => true,
            ModalAction::Feature(_)
            | ModalAction::Universal
            | ModalAction::NewNode
            | ModalAction::NewNodeGo => false,
            ModalAction::Test(f) => f.has_local_assign(),
            ModalAction::AssignGlobal(_, f) => f.has_local_assign(),
            ModalAction::AddEdges(_, a, b) | ModalAction::DelEdges(_, a, b) => {
                a.has_local_assign() || b.has_local_assign()
            }
            ModalAction::Seq(a, b) | ModalAction::Choice(a, b) => {
                a.has_local_assign() || b.has_local_assign()
            }
            ModalAction::Star(a) => a.has_local_assign(),
        }
    }

    fn collect_props(&self, out: &mut std::collections::BTreeSet<Sym>) {
        match self {
            ModalAction::Feature(_) | ModalAction::Universal => {}
            ModalAction::NewNode | ModalAction::NewNodeGo => {}
            ModalAction::Test(f) => f.collect_props(out),
            ModalAction::AssignGlobal(p, f) | ModalAction::AssignLocal(p, f) => {
                out.insert(p.clone());
                f.collect_props(out);
            }
            ModalAction::AddEdges(_, a, b) | ModalAction::DelEdges(_, a, b) => {
                a.collect_props(out);
                b.collect_props(out);
            }
            ModalAction::Seq(a, b) | ModalAction::Choice(a, b) => {
                a.collect_props(out);
                b.collect_props(out);
            }
            ModalAction::Star(a) => a.collect_props(out),
        }
    }

    fn collect_features(&self, out: &mut std::collections::BTreeSet<Sym>) {
        match self {
            ModalAction::Feature(a) => {
                out.insert(a.clone());
            }
            ModalAction::Universal | ModalAction::NewNode | ModalAction::NewNodeGo => {}
            ModalAction::Test(f) => f.collect_features(out),
            ModalAction::AssignGlobal(_, f) | ModalAction::AssignLocal(_, f) => {
                f.collect_features(out)
            }
            ModalAction::AddEdges(a, x, y) | ModalAction::DelEdges(a, x, y) => {
                out.insert(a.clone());
                x.collect_features(out);
                y.collect_features(out);
            }
            ModalAction::Seq(a, b) | ModalAction::Choice(a, b) => {
                a.collect_features(out);
                b.collect_features(out);
            }
            ModalAction::Star(a) => a.collect_features(out),
        }
    }
}
