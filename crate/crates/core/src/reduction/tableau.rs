//! Labelled tableau for the star-free, update-free fragment: multimodal K
//! with a universal modality.
//!
//! Programs (tests, sequences, choices) are compiled away first, the
//! formula goes to negation normal form, and the solver saturates a set
//! of worlds. Universal boxes become branch-global constraints; universal
//! diamonds and feature diamonds spawn worlds, memoized by their creation
//! content so repeated demands reuse the same witness (which is also what
//! makes saturation terminate when global constraints keep injecting
//! diamonds). Disjunctions branch with full backtracking.

use super::ReductionError;
use crate::logic::{Formula, ModalAction};
use crate::sym::Sym;
use crate::termgraph::RootedTermgraph;
use std::collections::{BTreeMap, BTreeSet};
use std::rc::Rc;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TableauOutcome {
    /// Satisfiable, with a finite rooted termgraph model (the first world
    /// is the root).
    Sat(RootedTermgraph),
    Unsat,
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
enum Rel {
    Feature(Sym),
    Universal,
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
enum Nnf {
    True,
    False,
    Lit(Sym, bool),
    And(Rc<Nnf>, Rc<Nnf>),
    Or(Rc<Nnf>, Rc<Nnf>),
    Box(Rel, Rc<Nnf>),
    Dia(Rel, Rc<Nnf>),
}

fn to_nnf(f: &Formula, positive: bool) -> Result<Rc<Nnf>, ReductionError> {
    Ok(Rc::new(match (f, positive) {
        (Formula::False, true) => Nnf::False,
        (Formula::False, false) => Nnf::True,
        (Formula::Prop(p), pos) => Nnf::Lit(p.clone(), pos),
        (Formula::Not(inner), pos) => return to_nnf(inner, !pos),
        (Formula::Or(a, b), true) => Nnf::Or(to_nnf(a, true)?, to_nnf(b, true)?),
        (Formula::Or(a, b), false) => Nnf::And(to_nnf(a, false)?, to_nnf(b, false)?),
        (Formula::Box(action, body), pos) => {
            let rel = match action {
                ModalAction::Feature(a) => Rel::Feature(a.clone()),
                ModalAction::Universal => Rel::Universal,
                _ => return Err(ReductionError::UpdatePresent),
            };
            if pos {
                Nnf::Box(rel, to_nnf(body, true)?)
            } else {
                Nnf::Dia(rel, to_nnf(body, false)?)
            }
        }
    }))
}

#[derive(Clone, Default)]
struct World {
    formulas: BTreeSet<Rc<Nnf>>,
    processed: BTreeSet<Rc<Nnf>>,
}

impl World {
    fn clashes(&self) -> bool {
        if self.formulas.contains(&Rc::new(Nnf::False)) {
            return true;
        }
        self.formulas.iter().any(|f| match &**f {
            Nnf::Lit(p, true) => self.formulas.contains(&Rc::new(Nnf::Lit(p.clone(), false))),
            _ => false,
        })
    }
}

#[derive(Clone, Default)]
struct Branch {
    worlds: Vec<World>,
    edges: Vec<(usize, Sym, usize)>,
    /// Payloads of universal boxes seen anywhere on the branch.
    global: BTreeSet<Rc<Nnf>>,
    /// Creation content -> world index, for witness reuse.
    spawned: BTreeMap<BTreeSet<Rc<Nnf>>, usize>,
    steps: usize,
}

const MAX_WORLDS: usize = 10_000;
const MAX_STEPS: usize = 2_000_000;

impl Branch {
    fn add(&mut self, w: usize, f: Rc<Nnf>) {
        self.worlds[w].formulas.insert(f);
    }

    fn spawn(&mut self, content: BTreeSet<Rc<Nnf>>) -> Result<usize, ReductionError> {
        if let Some(&w) = self.spawned.get(&content) {
            return Ok(w);
        }
        if self.worlds.len() >= MAX_WORLDS {
            return Err(ReductionError::Resource);
        }
        let id = self.worlds.len();
        let mut world = World::default();
        world.formulas = content.clone();
        self.worlds.push(world);
        self.spawned.insert(content, id);
        Ok(id)
    }

    fn next_pending(&self) -> Option<(usize, Rc<Nnf>)> {
        for (i, w) in self.worlds.iter().enumerate() {
            for f in &w.formulas {
                if !w.processed.contains(f) {
                    return Some((i, f.clone()));
                }
            }
        }
        None
    }

    fn solve(mut self) -> Result<Option<Branch>, ReductionError> {
        loop {
            self.steps += 1;
            if self.steps > MAX_STEPS {
                return Err(ReductionError::Resource);
            }
            if self.worlds.iter().any(World::clashes) {
                return Ok(None);
            }
            let Some((w, f)) = self.next_pending() else {
                return Ok(Some(self));
            };
            self.worlds[w].processed.insert(f.clone());
            match &*f {
                Nnf::True | Nnf::Lit(..) => {}
                Nnf::False => return Ok(None),
                Nnf::And(a, b) => {
                    self.add(w, a.clone());
                    self.add(w, b.clone());
                }
                Nnf::Or(a, b) => {
                    let mut left = self.clone();
                    left.add(w, a.clone());
                    if let Some(done) = left.solve()? {
                        return Ok(Some(done));
                    }
                    self.add(w, b.clone());
                }
                Nnf::Box(Rel::Feature(a), body) => {
                    let succs: Vec<usize> = self
                        .edges
                        .iter()
                        .filter(|(s, l, _)| *s == w && l == a)
                        .map(|(_, _, t)| *t)
                        .collect();
                    for t in succs {
                        self.add(t, body.clone());
                    }
                }
                Nnf::Box(Rel::Universal, body) => {
                    if self.global.insert(body.clone()) {
                        for i in 0..self.worlds.len() {
                            self.add(i, body.clone());
                        }
                    }
                }
                Nnf::Dia(Rel::Feature(a), body) => {
                    let mut content: BTreeSet<Rc<Nnf>> = BTreeSet::new();
                    content.insert(body.clone());
                    for g in &self.worlds[w].formulas {
                        if let Nnf::Box(Rel::Feature(b), payload) = &**g {
                            if b == a {
                                content.insert(payload.clone());
                            }
                        }
                    }
                    content.extend(self.global.iter().cloned());
                    let t = self.spawn(content)?;
                    self.edges.push((w, a.clone(), t));
                    // Boxes processed later at w re-propagate over this
                    // edge; boxes already processed are in the content.
                    let reprocess: Vec<Rc<Nnf>> = self.worlds[w]
                        .processed
                        .iter()
                        .filter(|g| matches!(&***g, Nnf::Box(Rel::Feature(b), _) if b == a))
                        .cloned()
                        .collect();
                    for g in reprocess {
                        if let Nnf::Box(_, payload) = &*g {
                            self.add(t, payload.clone());
                        }
                    }
                }
                Nnf::Dia(Rel::Universal, body) => {
                    let satisfied =
                        self.worlds.iter().any(|world| world.formulas.contains(body));
                    if !satisfied {
                        let mut content: BTreeSet<Rc<Nnf>> = BTreeSet::new();
                        content.insert(body.clone());
                        content.extend(self.global.iter().cloned());
                        self.spawn(content)?;
                    }
                }
            }
        }
    }

    fn extract_model(&self) -> RootedTermgraph {
        let name = |i: usize| Sym::new(format!("w{i}"));
        let mut g = RootedTermgraph::single(name(0));
        for (i, world) in self.worlds.iter().enumerate() {
            g.add_node(name(i));
            for f in &world.formulas {
                if let Nnf::Lit(p, true) = &**f {
                    g.add_label(&name(i), p.clone());
                }
            }
        }
        for (s, a, t) in &self.edges {
            g.add_edge(name(*s), a.clone(), name(*t));
        }
        g
    }
}

/// Satisfiability of a star-free, update-free formula over rooted
/// termgraphs. Tests, sequences and choices are compiled away first.
pub fn tableau_sat(f: &Formula) -> Result<TableauOutcome, ReductionError> {
    let compiled = super::eliminate_updates(f)?;
    if compiled.has_update() {
        return Err(ReductionError::UpdatePresent);
    }
    let nnf = to_nnf(&compiled, true)?;
    let mut branch = Branch::default();
    branch.worlds.push(World::default());
    let mut root_content = BTreeSet::new();
    root_content.insert(nnf.clone());
    branch.spawned.insert(root_content, 0);
    branch.add(0, nnf);
    match branch.solve()? {
        Some(done) => Ok(TableauOutcome::Sat(done.extract_model())),
        None => Ok(TableauOutcome::Unsat),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::logic::{model_check, parse_formula, Budget, Verdict};

    fn sat(text: &str) -> TableauOutcome {
        tableau_sat(&parse_formula(text).unwrap()).unwrap()
    }

    #[test]
    fn propositional_contradiction() {
        assert_eq!(sat("p & ~p"), TableauOutcome::Unsat);
    }

    #[test]
    fn k_contradiction() {
        assert_eq!(sat("<a>p & [a]~p"), TableauOutcome::Unsat);
    }

    #[test]
    fn distinct_successors_are_satisfiable() {
        match sat("<a>p & <a>~p") {
            TableauOutcome::Sat(model) => {
                let f = parse_formula("<a>p & <a>~p").unwrap();
                let r = model_check(&model, &f, &Budget::default());
                assert_eq!(r.verdict, Verdict::True);
                assert!(model.node_count() <= 3);
            }
            TableauOutcome::Unsat => panic!("expected satisfiable"),
        }
    }

    #[test]
    fn universal_modality_constrains_every_world() {
        assert_eq!(sat("[U]p & <U>~p"), TableauOutcome::Unsat);
        assert_eq!(sat("[U](p -> q) & <a>(p & ~q)"), TableauOutcome::Unsat);
    }

    #[test]
    fn global_diamonds_reuse_witnesses() {
        // Forces a cycle: every world needs an a-successor with p.
        match sat("[U]<a>p") {
            TableauOutcome::Sat(model) => {
                let f = parse_formula("[U]<a>p").unwrap();
                assert_eq!(model_check(&model, &f, &Budget::default()).verdict, Verdict::True);
            }
            TableauOutcome::Unsat => panic!("expected satisfiable"),
        }
        assert_eq!(sat("[U]<a>p & [U][a]~p"), TableauOutcome::Unsat);
    }

    #[test]
    fn extracted_models_check_out() {
        for text in [
            "p",
            "~p & <a>(p & [b]false)",
            "<U>(p & q) & <U>~q",
            "[a]false & <b>true",
            "<a><b><a>p",
        ] {
            match sat(text) {
                TableauOutcome::Sat(model) => {
                    let f = parse_formula(text).unwrap();
                    assert_eq!(
                        model_check(&model, &f, &Budget::default()).verdict,
                        Verdict::True,
                        "{text}"
                    );
                }
                TableauOutcome::Unsat => panic!("{text} should be satisfiable"),
            }
        }
    }
}
