//! Modal encodings of graphs, elementary actions and rewrite rules.
//!
//! Marker propositions from the reserved `$` namespace name nodes: `$piN`
//! identifies the node with index `N` in the scheme (index 0 is the
//! pattern root), `$w` and `$p` are scratch markers, `$lam_a` is the
//! per-feature scratch used by global redirection, and `$root`/`$r` track
//! the evaluation root and root-reachability across a translated rewrite
//! step.

pub mod hybrid;

use crate::logic::{Formula, ModalAction};
use crate::sym::Sym;
use crate::termgraph::{
    validate_strict, ElementaryAction, RewriteRule, RewriteSystem, RootedTermgraph,
};
use std::collections::{BTreeMap, BTreeSet};
use thiserror::Error;

#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum EncodeError {
    #[error("the pattern graph is not strict: {0}")]
    NonStrict(String),
    #[error("marker symbol {0} collides with a symbol used by the input")]
    MarkerCollision(Sym),
    #[error("node {0} has no marker in the scheme")]
    UnmappedNode(Sym),
    #[error("global redirection needs a non-empty feature alphabet")]
    EmptyFeatureAlphabet,
}

/// Node-marker assignment for one encoding.
#[derive(Clone, Debug)]
pub struct MarkerScheme {
    order: Vec<Sym>,
    markers: BTreeMap<Sym, Sym>,
}

impl MarkerScheme {
    /// Enumerate the graph's nodes, root first, the rest in name order.
    pub fn for_graph(g: &RootedTermgraph) -> Self {
        let mut order = vec![g.root().clone()];
        order.extend(g.nodes().filter(|n| *n != g.root()).cloned());
        Self::from_order(order)
    }

    /// Markers for a rule: pattern nodes (root first), then the fresh
    /// right-hand-side nodes in order of first occurrence.
    pub fn for_rule(rule: &RewriteRule) -> Self {
        let mut order = vec![rule.lhs().root().clone()];
        order.extend(rule.lhs().nodes().filter(|n| *n != rule.lhs().root()).cloned());
        order.extend(rule.fresh_nodes().iter().cloned());
        Self::from_order(order)
    }

    fn from_order(order: Vec<Sym>) -> Self {
        let markers = order
            .iter()
            .enumerate()
            .map(|(i, n)| (n.clone(), Sym::new(format!("$pi{i}"))))
            .collect();
        MarkerScheme { order, markers }
    }

    pub fn marker(&self, node: &Sym) -> Result<&Sym, EncodeError> {
        self.markers.get(node).ok_or_else(|| EncodeError::UnmappedNode(node.clone()))
    }

    pub fn node_order(&self) -> &[Sym] {
        &self.order
    }

    /// All marker symbols this scheme can emit, including the scratch ones.
    pub fn all_markers(&self, features: &BTreeSet<Sym>) -> BTreeSet<Sym> {
        let mut out: BTreeSet<Sym> = self.markers.values().cloned().collect();
        out.insert(scratch_w());
        out.insert(scratch_p());
        out.insert(root_tracker());
        out.insert(reach_marker());
        for f in features {
            out.insert(lambda_marker(f));
        }
        out
    }
}

pub fn scratch_w() -> Sym {
    Sym::new("$w")
}

pub fn scratch_p() -> Sym {
    Sym::new("$p")
}

pub fn root_tracker() -> Sym {
    Sym::new("$root")
}

pub fn reach_marker() -> Sym {
    Sym::new("$r")
}

pub fn lambda_marker(feature: &Sym) -> Sym {
    Sym::new(format!("$lam_{feature}"))
}

fn check_user_symbols(symbols: impl IntoIterator<Item = Sym>) -> Result<(), EncodeError> {
    for s in symbols {
        if s.is_reserved() {
            return Err(EncodeError::MarkerCollision(s));
        }
    }
    Ok(())
}

/// How the homomorphism encoding treats the pattern root and node
/// distinctness.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum HomVariant {
    /// The construction as stated: the pattern root maps to the
    /// evaluation root, and the guards force pairwise-distinct images.
    Faithful,
    /// A universal step before the first marker lets the root map
    /// anywhere; the distinctness guards stay.
    Anywhere,
    /// Root anywhere and no distinctness guards: exactly the
    /// homomorphisms of the rewriting engine.
    AnywhereNonInjective,
}

impl HomVariant {
    fn anchored(self) -> bool {
        self == HomVariant::Faithful
    }

    fn injective(self) -> bool {
        !matches!(self, HomVariant::AnywhereNonInjective)
    }
}

/// The marker-placement action and check formula characterizing the
/// existence of a homomorphism from `g` into the evaluated graph.
pub fn hom_encoding(
    g: &RootedTermgraph,
    variant: HomVariant,
) -> Result<(ModalAction, Formula), EncodeError> {
    let scheme = MarkerScheme::for_graph(g);
    hom_encoding_with(g, variant, &scheme)
}

pub fn hom_encoding_with(
    g: &RootedTermgraph,
    variant: HomVariant,
    scheme: &MarkerScheme,
) -> Result<(ModalAction, Formula), EncodeError> {
    let violations = validate_strict(g);
    if !violations.is_empty() {
        return Err(EncodeError::NonStrict(violations[0].to_string()));
    }
    check_user_symbols(g.label_alphabet())?;

    let nodes: Vec<Sym> = {
        let mut order = vec![g.root().clone()];
        order.extend(g.nodes().filter(|n| *n != g.root()).cloned());
        order
    };

    let mut parts: Vec<ModalAction> = Vec::new();
    // Reset every marker.
    for n in &nodes {
        parts.push(ModalAction::assign_global(scheme.marker(n)?.clone(), Formula::False));
    }
    if !variant.anchored() {
        parts.push(ModalAction::Universal);
    }
    // Guess one node per marker.
    for (i, n) in nodes.iter().enumerate() {
        let guard = if variant.injective() {
            Formula::conj(
                nodes[..i]
                    .iter()
                    .map(|m| Ok(Formula::not(Formula::Prop(scheme.marker(m)?.clone()))))
                    .collect::<Result<Vec<_>, EncodeError>>()?,
            )
        } else {
            Formula::truth()
        };
        parts.push(ModalAction::test(guard));
        parts.push(ModalAction::assign_local(scheme.marker(n)?.clone(), Formula::truth()));
        parts.push(ModalAction::Universal);
    }
    let action = ModalAction::seq_all(parts);

    // The check: labels are present at the marked nodes and every pattern
    // edge has an image.
    let mut conjuncts = Vec::new();
    for n in &nodes {
        if let Some(label) = g.label_of(n) {
            conjuncts.push(Formula::diamond(
                ModalAction::Universal,
                Formula::and(
                    Formula::Prop(scheme.marker(n)?.clone()),
                    Formula::Prop(label.clone()),
                ),
            ));
        }
    }
    for (s, a, t) in g.edges() {
        conjuncts.push(Formula::diamond(
            ModalAction::Universal,
            Formula::and(
                Formula::Prop(scheme.marker(s)?.clone()),
                Formula::diamond(
                    ModalAction::Feature(a.clone()),
                    Formula::Prop(scheme.marker(t)?.clone()),
                ),
            ),
        ));
    }
    Ok((action, Formula::conj(conjuncts)))
}

/// The modal counterpart of one elementary action, assuming every node it
/// names is identified by its scheme marker.
pub fn encode_elementary(
    action: &ElementaryAction,
    scheme: &MarkerScheme,
    features: &BTreeSet<Sym>,
) -> Result<ModalAction, EncodeError> {
    let pi = |n: &Sym| scheme.marker(n).cloned();
    Ok(match action {
        // nl: move to the marked node, set the label locally, bundle in
        // the edges. The label is added to the set, not substituted; see
        // the module tests for where this diverges from the direct
        // semantics on already-labelled redexes.
        ElementaryAction::NodeDefinition { node, label, args } => {
            check_user_symbols([label.clone()])?;
            let mut parts = vec![
                ModalAction::Universal,
                ModalAction::test(Formula::Prop(pi(node)?)),
                ModalAction::assign_local(label.clone(), Formula::truth()),
            ];
            for (a, t) in args {
                parts.push(ModalAction::add_edges(
                    a.clone(),
                    Formula::Prop(pi(node)?),
                    Formula::Prop(pi(t)?),
                ));
            }
            ModalAction::seq_all(parts)
        }
        ElementaryAction::LocalRedirection { node, feature, target } => ModalAction::seq(
            ModalAction::del_edges(feature.clone(), Formula::Prop(pi(node)?), Formula::truth()),
            ModalAction::add_edges(
                feature.clone(),
                Formula::Prop(pi(node)?),
                Formula::Prop(pi(target)?),
            ),
        ),
        ElementaryAction::GlobalRedirection { node, target } => {
            if features.is_empty() {
                return Err(EncodeError::EmptyFeatureAlphabet);
            }
            let pi_n = pi(node)?;
            let pi_m = pi(target)?;
            let parts =
                features.iter().map(|a| gr_one_feature(a, &pi_n, &pi_m)).collect::<Vec<_>>();
            ModalAction::seq_all(parts)
        }
    })
}

/// gr(n, a, m): remember the sources of `a`-edges into the `n` node, drop
/// those edges, and re-aim them at the `m` node.
fn gr_one_feature(feature: &Sym, pi_n: &Sym, pi_m: &Sym) -> ModalAction {
    let lam = lambda_marker(feature);
    ModalAction::seq_all([
        ModalAction::assign_global(lam.clone(), Formula::False),
        ModalAction::assign_global(
            lam.clone(),
            Formula::diamond(ModalAction::Feature(feature.clone()), Formula::Prop(pi_n.clone())),
        ),
        ModalAction::del_edges(feature.clone(), Formula::truth(), Formula::Prop(pi_n.clone())),
        ModalAction::add_edges(feature.clone(), Formula::Prop(lam), Formula::Prop(pi_m.clone())),
    ])
}

/// The root-redirection action: every `a`-edge into the current root is
/// redirected onto a freshly created node, which becomes the new root.
pub fn encode_root_redirect(feature: &Sym) -> ModalAction {
    let w = scratch_w();
    let p = scratch_p();
    ModalAction::seq_all([
        ModalAction::assign_global(w.clone(), Formula::False),
        ModalAction::assign_local(w.clone(), Formula::truth()),
        ModalAction::assign_global(p.clone(), Formula::False),
        ModalAction::assign_global(
            p.clone(),
            Formula::diamond(ModalAction::Feature(feature.clone()), Formula::Prop(w.clone())),
        ),
        ModalAction::del_edges(feature.clone(), Formula::truth(), Formula::Prop(w.clone())),
        ModalAction::NewNodeGo,
        ModalAction::assign_global(w.clone(), Formula::False),
        ModalAction::assign_local(w.clone(), Formula::truth()),
        ModalAction::add_edges(feature.clone(), Formula::Prop(p), Formula::Prop(w)),
    ])
}

/// What a translated rule does about the nodes a step strands.
///
/// `Keep` is the construction as stated. Under `Neutralize`, a step ends
/// by stripping labels and edges from everything unreachable from the
/// (tracked) root, restoring the root, and clearing all markers. Without
/// this, a consumed redex stays matchable forever: iterating the
/// translated step then generates fresh nodes without bound and the
/// normal-form formula can never be decided by finite exploration.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GarbageMode {
    Keep,
    Neutralize,
}

/// The symbol alphabet a translation must know about: `gr` quantifies
/// over features, and neutralization must strip every label the system or
/// the start graph can exhibit.
#[derive(Clone, Debug, Default)]
pub struct Alphabet {
    pub features: BTreeSet<Sym>,
    pub labels: BTreeSet<Sym>,
}

impl Alphabet {
    pub fn from_system(system: &RewriteSystem) -> Self {
        Alphabet { features: system.feature_alphabet(), labels: system.label_alphabet() }
    }

    pub fn from_graph(g: &RootedTermgraph) -> Self {
        Alphabet { features: g.features(), labels: g.label_alphabet() }
    }

    pub fn union(mut self, other: &Alphabet) -> Self {
        self.features.extend(other.features.iter().cloned());
        self.labels.extend(other.labels.iter().cloned());
        self
    }
}

/// A translated rewrite rule.
#[derive(Clone, Debug)]
pub struct RuleTranslation {
    /// The full step: match, guard, fresh-node blocks, encoded actions,
    /// and (under `Neutralize`) the cleanup suffix.
    pub action: ModalAction,
    /// Match-and-guard only (`α_G; φ_G?`), used for normal-form guards.
    pub guard: ModalAction,
}

/// Translate a rewrite rule into a modal action.
pub fn translate_rule(
    rule: &RewriteRule,
    variant: HomVariant,
    garbage: GarbageMode,
    alphabet: &Alphabet,
) -> Result<RuleTranslation, EncodeError> {
    check_user_symbols(alphabet.labels.iter().cloned())?;
    let scheme = MarkerScheme::for_rule(rule);
    let (match_action, check) = hom_encoding_with(rule.lhs(), variant, &scheme)?;

    let mut parts = Vec::new();
    if garbage == GarbageMode::Neutralize {
        parts.push(ModalAction::assign_global(root_tracker(), Formula::False));
        parts.push(ModalAction::assign_local(root_tracker(), Formula::truth()));
    }
    parts.push(match_action.clone());
    parts.push(ModalAction::test(check.clone()));
    for fresh in rule.fresh_nodes() {
        let pi = scheme.marker(fresh)?.clone();
        parts.push(ModalAction::NewNodeGo);
        parts.push(ModalAction::assign_global(pi.clone(), Formula::False));
        parts.push(ModalAction::assign_local(pi, Formula::truth()));
    }
    for action in rule.rhs() {
        parts.push(encode_elementary(action, &scheme, &alphabet.features)?);
        if garbage == GarbageMode::Neutralize {
            if let ElementaryAction::GlobalRedirection { node, target } = action {
                // Mirror the engine's root rule: the tracked root moves to
                // the target only if it sat on the redirected node.
                let pi_n = Formula::Prop(scheme.marker(node)?.clone());
                let pi_m = Formula::Prop(scheme.marker(target)?.clone());
                let tracker = Formula::Prop(root_tracker());
                parts.push(ModalAction::assign_global(
                    root_tracker(),
                    Formula::or(
                        Formula::and(Formula::not(pi_n.clone()), tracker.clone()),
                        Formula::and(
                            pi_m,
                            Formula::diamond(
                                ModalAction::Universal,
                                Formula::and(pi_n, tracker),
                            ),
                        ),
                    ),
                ));
            }
        }
    }
    if garbage == GarbageMode::Neutralize {
        parts.extend(neutralization_suffix(&scheme, alphabet));
    }
    Ok(RuleTranslation {
        action: ModalAction::seq_all(parts),
        guard: ModalAction::seq(match_action, ModalAction::test(check)),
    })
}

fn neutralization_suffix(scheme: &MarkerScheme, alphabet: &Alphabet) -> Vec<ModalAction> {
    let reach = reach_marker();
    let mut parts = Vec::new();
    // Seed reachability at the tracked root.
    parts.push(ModalAction::assign_global(reach.clone(), Formula::Prop(root_tracker())));
    if !alphabet.features.is_empty() {
        let any_feature = ModalAction::choice_all(
            alphabet.features.iter().map(|a| ModalAction::Feature(a.clone())),
        )
        .expect("nonempty");
        // Walk edges from marked nodes, marking as we go, until no marked
        // node has an unmarked successor.
        parts.push(ModalAction::star(ModalAction::seq_all([
            ModalAction::Universal,
            ModalAction::test(Formula::Prop(reach.clone())),
            any_feature,
            ModalAction::test(Formula::not(Formula::Prop(reach.clone()))),
            ModalAction::assign_local(reach.clone(), Formula::truth()),
        ])));
        let incomplete = Formula::diamond(
            ModalAction::Universal,
            Formula::and(
                Formula::Prop(reach.clone()),
                Formula::disj(alphabet.features.iter().map(|a| {
                    Formula::diamond(
                        ModalAction::Feature(a.clone()),
                        Formula::not(Formula::Prop(reach.clone())),
                    )
                })),
            ),
        );
        parts.push(ModalAction::test(Formula::not(incomplete)));
    }
    // Strip labels and edges from unreachable nodes.
    for label in &alphabet.labels {
        parts.push(ModalAction::assign_global(
            label.clone(),
            Formula::and(Formula::Prop(label.clone()), Formula::Prop(reach.clone())),
        ));
    }
    for feature in &alphabet.features {
        parts.push(ModalAction::del_edges(
            feature.clone(),
            Formula::not(Formula::Prop(reach.clone())),
            Formula::truth(),
        ));
        parts.push(ModalAction::del_edges(
            feature.clone(),
            Formula::truth(),
            Formula::not(Formula::Prop(reach.clone())),
        ));
    }
    // Home the evaluation root, then clear every marker.
    parts.push(ModalAction::Universal);
    parts.push(ModalAction::test(Formula::Prop(root_tracker())));
    for marker in scheme.all_markers(&alphabet.features) {
        parts.push(ModalAction::assign_global(marker, Formula::False));
    }
    parts
}

/// The formula stating that every normal form reachable by the system
/// satisfies `goal`.
pub fn normal_form_formula(
    system: &RewriteSystem,
    goal: &Formula,
    variant: HomVariant,
    garbage: GarbageMode,
    alphabet: &Alphabet,
) -> Result<Formula, EncodeError> {
    let translations = system
        .rules()
        .iter()
        .map(|rule| translate_rule(rule, variant, garbage, alphabet))
        .collect::<Result<Vec<_>, _>>()?;
    let step = ModalAction::choice_all(translations.iter().map(|t| t.action.clone()))
        .expect("a system needs at least one rule");
    let in_normal_form = Formula::conj(
        translations
            .iter()
            .map(|t| Formula::boxed(t.guard.clone(), Formula::False)),
    );
    Ok(Formula::boxed(
        ModalAction::star(step),
        Formula::implies(in_normal_form, goal.clone()),
    ))
}

/// The formula whose validity states that one application of the rule
/// preserves `goal`.
pub fn invariant_formula(
    rule: &RewriteRule,
    goal: &Formula,
    variant: HomVariant,
    alphabet: &Alphabet,
) -> Result<Formula, EncodeError> {
    let translation = translate_rule(rule, variant, GarbageMode::Keep, alphabet)?;
    Ok(Formula::implies(goal.clone(), Formula::boxed(translation.action, goal.clone())))
}

/// The shape catalogue.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Shape {
    Deterministic(Sym),
    Irreflexive(Sym),
    LocallyReflexive(Sym),
    Infinite,
    Acyclic(Sym),
    Circular(Sym),
    PathLeq(Sym, Sym),
    Binary(Sym, Sym),
}

/// Build the defining formula of a shape, using the scratch markers.
pub fn shape_formula(shape: &Shape) -> Formula {
    let w = scratch_w();
    let p = scratch_p();
    let wf = Formula::Prop(w.clone());
    let pf = Formula::Prop(p.clone());
    let set_g = |m: &Sym, v: Formula| ModalAction::assign_global(m.clone(), v);
    let set_l = |m: &Sym, v: Formula| ModalAction::assign_local(m.clone(), v);
    let feat = |a: &Sym| ModalAction::Feature(a.clone());
    match shape {
        Shape::Deterministic(a) => Formula::boxed(
            set_g(&w, Formula::False),
            Formula::boxed(
                set_g(&p, Formula::False),
                Formula::boxed(
                    ModalAction::Universal,
                    Formula::boxed(
                        set_l(&w, Formula::truth()),
                        Formula::boxed(
                            feat(a),
                            Formula::boxed(
                                set_l(&p, Formula::truth()),
                                Formula::boxed(
                                    ModalAction::Universal,
                                    Formula::implies(
                                        wf.clone(),
                                        Formula::boxed(feat(a), pf.clone()),
                                    ),
                                ),
                            ),
                        ),
                    ),
                ),
            ),
        ),
        Shape::Irreflexive(a) => Formula::boxed(
            set_g(&w, Formula::False),
            Formula::boxed(
                ModalAction::Universal,
                Formula::boxed(
                    set_l(&w, Formula::truth()),
                    Formula::boxed(feat(a), Formula::not(wf.clone())),
                ),
            ),
        ),
        Shape::LocallyReflexive(a) => Formula::boxed(
            set_g(&w, Formula::False),
            Formula::boxed(
                set_l(&w, Formula::truth()),
                Formula::diamond(feat(a), wf.clone()),
            ),
        ),
        Shape::Infinite => Formula::boxed(
            set_g(&w, Formula::truth()),
            Formula::boxed(
                ModalAction::star(ModalAction::seq_all([
                    ModalAction::Universal,
                    ModalAction::test(wf.clone()),
                    set_l(&w, Formula::False),
                ])),
                Formula::diamond(ModalAction::Universal, wf.clone()),
            ),
        ),
        Shape::Acyclic(a) => Formula::boxed(
            set_g(&w, Formula::truth()),
            Formula::boxed(
                ModalAction::Universal,
                Formula::boxed(
                    set_l(&w, Formula::False),
                    Formula::boxed(ModalAction::plus(feat(a)), wf.clone()),
                ),
            ),
        ),
        Shape::Circular(a) => Formula::boxed(
            set_g(&w, Formula::False),
            Formula::boxed(
                ModalAction::Universal,
                Formula::boxed(
                    set_l(&w, Formula::truth()),
                    Formula::diamond(ModalAction::plus(feat(a)), wf.clone()),
                ),
            ),
        ),
        Shape::PathLeq(a, b) => {
            let extend = |marker: &Sym, edge: &Sym| {
                ModalAction::seq_all([
                    ModalAction::Universal,
                    ModalAction::test(Formula::Prop(marker.clone())),
                    feat(edge),
                    ModalAction::test(Formula::not(Formula::Prop(marker.clone()))),
                    set_l(marker, Formula::truth()),
                ])
            };
            let stuck = |marker: &Formula, edge: &Sym| {
                Formula::diamond(
                    ModalAction::Universal,
                    Formula::and(marker.clone(), Formula::boxed(feat(edge), Formula::False)),
                )
            };
            Formula::boxed(
                set_g(&w, Formula::False),
                Formula::boxed(
                    set_l(&w, Formula::truth()),
                    Formula::boxed(
                        set_g(&p, Formula::False),
                        Formula::boxed(
                            set_l(&p, Formula::truth()),
                            Formula::boxed(
                                ModalAction::star(ModalAction::seq(
                                    extend(&w, a),
                                    extend(&p, b),
                                )),
                                Formula::implies(stuck(&pf, b), stuck(&wf, a)),
                            ),
                        ),
                    ),
                ),
            )
        }
        Shape::Binary(a, b) => {
            let walk = ModalAction::choice(feat(a), feat(b));
            Formula::boxed(
                set_g(&w, Formula::False),
                Formula::boxed(
                    ModalAction::Universal,
                    Formula::boxed(
                        set_l(&w, Formula::truth()),
                        Formula::boxed(
                            feat(a),
                            Formula::boxed(
                                set_g(&p, Formula::truth()),
                                Formula::boxed(
                                    ModalAction::star(walk.clone()),
                                    Formula::boxed(
                                        set_l(&p, Formula::False),
                                        Formula::boxed(
                                            ModalAction::Universal,
                                            Formula::implies(
                                                wf.clone(),
                                                Formula::boxed(
                                                    feat(b),
                                                    Formula::boxed(
                                                        ModalAction::star(walk),
                                                        pf.clone(),
                                                    ),
                                                ),
                                            ),
                                        ),
                                    ),
                                ),
                            ),
                        ),
                    ),
                ),
            )
        }
    }
}
