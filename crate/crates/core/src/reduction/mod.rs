//! Formula simplification and update elimination.
//!
//! The validity equivalences are oriented left to right: boxes are pushed
//! through tests, sequences and choices; update boxes commute inward past
//! feature and universal boxes; and at atoms and falsity the update boxes
//! dissolve. [`simplify`] applies them wherever they fit and leaves the
//! rest alone (local assignments stuck on a modality, anything above a
//! star). [`eliminate_updates`] requires a star-free input without local
//! assignments and guarantees an update-free result.
//!
//! The commutation of a node-creating box across `[U]` used here is
//! `[new][U]φ ↔ [new!]φ ∧ [U][new]φ` (and the same right-hand side for
//! `[new!][U]φ`): the universal step ranges over the freshly created node
//! too, so the first conjunct must evaluate φ *at* the fresh node. The
//! weaker variants with `[new]φ` (resp. `[U][new!]φ`) as conjuncts are
//! refuted by the model checker; see the law catalogue.

pub mod laws;
mod tableau;

pub use tableau::{tableau_sat, TableauOutcome};

use crate::logic::{Formula, ModalAction};
use thiserror::Error;

#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum ReductionError {
    #[error("the formula contains a local assignment, which cannot be eliminated")]
    LocalAssignPresent,
    #[error("the formula contains an iteration, which cannot be eliminated")]
    StarPresent,
    #[error("the formula contains update actions")]
    UpdatePresent,
    #[error("rewriting fuel exhausted; the input is too large")]
    Fuel,
    #[error("tableau resource limit exceeded")]
    Resource,
}

const FUEL: u64 = 50_000_000;

struct Engine {
    strict: bool,
    fuel: u64,
}

impl Engine {
    fn tick(&mut self) -> Result<(), ReductionError> {
        if self.fuel == 0 {
            return Err(ReductionError::Fuel);
        }
        self.fuel -= 1;
        Ok(())
    }

    fn norm(&mut self, f: &Formula) -> Result<Formula, ReductionError> {
        self.tick()?;
        Ok(match f {
            Formula::Prop(_) | Formula::False => f.clone(),
            Formula::Not(inner) => Formula::not(self.norm(inner)?),
            Formula::Or(a, b) => Formula::or(self.norm(a)?, self.norm(b)?),
            Formula::Box(action, body) => self.norm_box(action, body)?,
        })
    }

    fn norm_box(
        &mut self,
        action: &ModalAction,
        body: &Formula,
    ) -> Result<Formula, ReductionError> {
        self.tick()?;
        Ok(match action {
            ModalAction::Seq(a, b) => {
                let inner = Formula::Box((**b).clone(), Box::new(body.clone()));
                self.norm_box(a, &inner)?
            }
            ModalAction::Choice(a, b) => Formula::and(
                self.norm_box(a, body)?,
                self.norm_box(b, body)?,
            ),
            ModalAction::Test(cond) => {
                Formula::implies(self.norm(cond)?, self.norm(body)?)
            }
            ModalAction::Star(inner) => {
                if self.strict {
                    return Err(ReductionError::StarPresent);
                }
                Formula::boxed(
                    ModalAction::star(self.norm_action(inner)?),
                    self.norm(body)?,
                )
            }
            ModalAction::Feature(_) | ModalAction::Universal => {
                Formula::boxed(action.clone(), self.norm(body)?)
            }
            update => {
                let update = self.norm_action(update)?;
                let body = self.norm(body)?;
                match self.push(&update, &body)? {
                    Some(out) => out,
                    None => {
                        if self.strict {
                            // Strict inputs are star-free and free of local
                            // assignments, so the push cannot get stuck.
                            unreachable!("update elimination got stuck on {update}");
                        }
                        Formula::boxed(update, body)
                    }
                }
            }
        })
    }

    /// Normalize the formulas inside an atomic update action.
    fn norm_action(&mut self, action: &ModalAction) -> Result<ModalAction, ReductionError> {
        Ok(match action {
            ModalAction::Feature(_)
            | ModalAction::Universal
            | ModalAction::NewNode
            | ModalAction::NewNodeGo => action.clone(),
            ModalAction::Test(f) => ModalAction::test(self.norm(f)?),
            ModalAction::AssignGlobal(p, f) => {
                ModalAction::assign_global(p.clone(), self.norm(f)?)
            }
            ModalAction::AssignLocal(p, f) => {
                if self.strict {
                    return Err(ReductionError::LocalAssignPresent);
                }
                ModalAction::assign_local(p.clone(), self.norm(f)?)
            }
            ModalAction::AddEdges(a, x, y) => {
                ModalAction::add_edges(a.clone(), self.norm(x)?, self.norm(y)?)
            }
            ModalAction::DelEdges(a, x, y) => {
                ModalAction::del_edges(a.clone(), self.norm(x)?, self.norm(y)?)
            }
            ModalAction::Seq(a, b) => {
                ModalAction::seq(self.norm_action(a)?, self.norm_action(b)?)
            }
            ModalAction::Choice(a, b) => {
                ModalAction::choice(self.norm_action(a)?, self.norm_action(b)?)
            }
            ModalAction::Star(a) => ModalAction::star(self.norm_action(a)?),
        })
    }

    /// Push an atomic update box into an already-normalized body. `None`
    /// means no equivalence applies.
    fn push(
        &mut self,
        update: &ModalAction,
        body: &Formula,
    ) -> Result<Option<Formula>, ReductionError> {
        self.tick()?;
        Ok(match body {
            Formula::False => Some(Formula::False),
            Formula::Prop(p) => Some(match update {
                ModalAction::NewNode => Formula::Prop(p.clone()),
                ModalAction::NewNodeGo => Formula::False,
                ModalAction::AssignGlobal(q, f) | ModalAction::AssignLocal(q, f) => {
                    if q == p {
                        (**f).clone()
                    } else {
                        Formula::Prop(p.clone())
                    }
                }
                ModalAction::AddEdges(..) | ModalAction::DelEdges(..) => {
                    Formula::Prop(p.clone())
                }
                _ => unreachable!("push called with a non-update action"),
            }),
            Formula::Not(inner) => self.push(update, inner)?.map(Formula::not),
            Formula::Or(a, b) => match (self.push(update, a)?, self.push(update, b)?) {
                (Some(x), Some(y)) => Some(Formula::or(x, y)),
                _ => None,
            },
            Formula::Box(ModalAction::Feature(b), inner) => match update {
                ModalAction::NewNode | ModalAction::AssignGlobal(..) => self
                    .push(update, inner)?
                    .map(|pushed| Formula::boxed(ModalAction::Feature(b.clone()), pushed)),
                ModalAction::NewNodeGo => Some(Formula::truth()),
                ModalAction::AddEdges(a, from, to) => {
                    let Some(pushed) = self.push(update, inner)? else { return Ok(None) };
                    if a != b {
                        Some(Formula::boxed(ModalAction::Feature(b.clone()), pushed))
                    } else {
                        Some(Formula::and(
                            Formula::boxed(ModalAction::Feature(b.clone()), pushed.clone()),
                            Formula::implies(
                                (**from).clone(),
                                Formula::boxed(
                                    ModalAction::Universal,
                                    Formula::implies((**to).clone(), pushed),
                                ),
                            ),
                        ))
                    }
                }
                ModalAction::DelEdges(a, from, to) => {
                    let Some(pushed) = self.push(update, inner)? else { return Ok(None) };
                    if a != b {
                        Some(Formula::boxed(ModalAction::Feature(b.clone()), pushed))
                    } else {
                        Some(Formula::or(
                            Formula::and(
                                Formula::not((**from).clone()),
                                Formula::boxed(ModalAction::Feature(b.clone()), pushed.clone()),
                            ),
                            Formula::and(
                                (**from).clone(),
                                Formula::boxed(
                                    ModalAction::Feature(b.clone()),
                                    Formula::implies(Formula::not((**to).clone()), pushed),
                                ),
                            ),
                        ))
                    }
                }
                _ => None,
            },
            Formula::Box(ModalAction::Universal, inner) => match update {
                ModalAction::NewNode | ModalAction::NewNodeGo => {
                    let at_fresh = self.push(&ModalAction::NewNodeGo, inner)?;
                    let at_old = self.push(&ModalAction::NewNode, inner)?;
                    match (at_fresh, at_old) {
                        (Some(x), Some(y)) => Some(Formula::and(
                            x,
                            Formula::boxed(ModalAction::Universal, y),
                        )),
                        _ => None,
                    }
                }
                ModalAction::AssignGlobal(..)
                | ModalAction::AddEdges(..)
                | ModalAction::DelEdges(..) => self
                    .push(update, inner)?
                    .map(|pushed| Formula::boxed(ModalAction::Universal, pushed)),
                _ => None,
            },
            Formula::Box(..) => None,
        })
    }
}

/// Apply the validity equivalences as left-to-right rewrites, to a
/// fixpoint. Total: whatever cannot be moved stays put. The output is
/// semantically equivalent to the input on all rooted termgraphs.
pub fn simplify(f: &Formula) -> Formula {
    let mut engine = Engine { strict: false, fuel: FUEL };
    engine.norm(f).expect("lenient normalization cannot fail")
}

/// Eliminate every update action from a star-free formula without local
/// assignments. The result contains only feature and universal boxes over
/// propositional structure (tests, sequences and choices are compiled away
/// too).
pub fn eliminate_updates(f: &Formula) -> Result<Formula, ReductionError> {
    if f.has_local_assign() {
        return Err(ReductionError::LocalAssignPresent);
    }
    if f.has_star() {
        return Err(ReductionError::StarPresent);
    }
    let mut engine = Engine { strict: true, fuel: FUEL };
    let out = engine.norm(f)?;
    debug_assert!(!out.has_update(), "elimination left an update in {out}");
    Ok(out)
}

/// Validity over all rooted termgraphs for the star-free fragment without
/// local assignments: eliminate updates from the negation and run the
/// tableau.
pub fn decide_valid(f: &Formula) -> Result<bool, ReductionError> {
    let negated = eliminate_updates(&Formula::not(f.clone()))?;
    Ok(matches!(tableau_sat(&negated)?, TableauOutcome::Unsat))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::logic::{model_check, parse_formula, random_termgraph, Budget, RandomGraphParams, Verdict};

    fn simp(text: &str) -> String {
        simplify(&parse_formula(text).unwrap()).to_string()
    }

    #[test]
    fn test_boxes_become_implications() {
        assert_eq!(simp("[test(p)]q"), "p -> q");
    }

    #[test]
    fn new_node_boxes_dissolve_at_atoms() {
        assert_eq!(simp("[new]w"), "w");
        assert_eq!(simp("[new!]w"), "false");
    }

    #[test]
    fn global_assignment_at_atoms() {
        assert_eq!(simp("[setg(w, p & q)]w"), "p & q");
        assert_eq!(simp("[setg(w, p & q)]v"), "v");
        assert_eq!(simp("[setl(w, p)]w"), "p");
        assert_eq!(simp("[setl(w, p)]v"), "v");
    }

    #[test]
    fn local_assignment_sticks_on_modalities() {
        assert_eq!(simp("[setl(w, p)][a]w"), "[setl(w, p)][a]w");
        assert!(matches!(
            eliminate_updates(&parse_formula("[setl(w, p)][a]w").unwrap()),
            Err(ReductionError::LocalAssignPresent)
        ));
    }

    #[test]
    fn stars_are_left_alone_by_simplify_but_rejected_by_elimination() {
        assert_eq!(simp("[a*][new]p"), "[a*]p");
        assert!(matches!(
            eliminate_updates(&parse_formula("[a*]p").unwrap()),
            Err(ReductionError::StarPresent)
        ));
    }

    #[test]
    fn new_commutes_past_features() {
        assert_eq!(simp("[new][a]p"), "[a]p");
        assert_eq!(simp("[new!][a]p"), "true");
    }

    #[test]
    fn elimination_outputs_are_update_free_and_equivalent() {
        let inputs = [
            "[new][a]p",
            "[new!][a]p",
            "[new][U]p",
            "[new!][U](p | ~q)",
            "[add(a, p, q)][a]w",
            "[add(a, p, q)][b]w",
            "[del(a, p, q)][a](w -> p)",
            "[setg(w, <a>p)][U][a]w",
            "[add(a, p, q)][a][a]p",
            "<new!>(~p & [a]false)",
            "[test(p); (a | U)][new]q",
        ];
        let budget = Budget::default();
        for text in inputs {
            let f = parse_formula(text).unwrap();
            let out = eliminate_updates(&f).unwrap();
            assert!(!out.has_update(), "{text} -> {out}");
            for seed in 0..40 {
                let g = random_termgraph(&RandomGraphParams::new(1 + (seed as usize % 4), 2, 3, 0.4), seed);
                let a = model_check(&g, &f, &budget).verdict;
                let b = model_check(&g, &out, &budget).verdict;
                assert!(a != Verdict::Unknown && b != Verdict::Unknown);
                assert_eq!(a, b, "{text} vs {out} differ on seed {seed}");
            }
        }
    }

    #[test]
    fn decide_valid_examples() {
        let valid = [
            "[test(p)]q <-> (p -> q)",
            "[U]p -> [a]p",
            "[new][a]p <-> [a]p",
            "[a](p & q) <-> ([a]p & [a]q)",
        ];
        for text in valid {
            assert!(decide_valid(&parse_formula(text).unwrap()).unwrap(), "{text}");
        }
        let invalid = ["[a]p -> p", "p -> [a]p", "<a>true", "[U]p -> ~p"];
        for text in invalid {
            assert!(!decide_valid(&parse_formula(text).unwrap()).unwrap(), "{text}");
        }
    }
}
