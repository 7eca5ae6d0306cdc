//! The catalogue of validity equivalences, as instantiable law schemas.
//!
//! Each law produces `(lhs, rhs)` formula pairs from a fixed pool of
//! atomic formulas and actions; the test suites check that both sides
//! agree under the model checker on random graphs. Laws marked
//! `sound: false` are deliberately broken variants kept for
//! documentation: the suite asserts that a counterexample *is* found.

use crate::logic::{Formula, ModalAction};
use crate::sym::Sym;

pub struct Law {
    pub name: &'static str,
    /// Whether both sides are equivalent on all rooted termgraphs.
    pub sound: bool,
    pub instances: Vec<(Formula, Formula)>,
}

/// Metavariable pools: five atomic formulas and four atomic actions, plus
/// the features and propositions the update laws quantify over.
pub struct Pool {
    pub formulas: Vec<Formula>,
    pub actions: Vec<ModalAction>,
    pub features: Vec<Sym>,
    pub props: Vec<Sym>,
}

impl Default for Pool {
    fn default() -> Self {
        Pool {
            formulas: vec![
                Formula::prop("p"),
                Formula::prop("q"),
                Formula::prop("w"),
                Formula::False,
                Formula::or(Formula::prop("p"), Formula::prop("q")),
            ],
            actions: vec![
                ModalAction::feature("a"),
                ModalAction::Universal,
                ModalAction::test(Formula::prop("p")),
                ModalAction::assign_global(Sym::new("w"), Formula::prop("p")),
            ],
            features: vec![Sym::new("a"), Sym::new("b")],
            props: vec![Sym::new("p"), Sym::new("q"), Sym::new("w")],
        }
    }
}

impl Pool {
    /// The update actions the commutation and elimination laws range over.
    fn updates(&self) -> Vec<ModalAction> {
        vec![
            ModalAction::NewNode,
            ModalAction::NewNodeGo,
            ModalAction::assign_global(Sym::new("w"), Formula::prop("p")),
            ModalAction::add_edges(Sym::new("a"), Formula::prop("p"), Formula::prop("q")),
            ModalAction::del_edges(Sym::new("a"), Formula::prop("p"), Formula::prop("q")),
        ]
    }
}

fn boxed(a: &ModalAction, f: Formula) -> Formula {
    Formula::boxed(a.clone(), f)
}

/// All laws, instantiated over the pool.
pub fn catalogue(pool: &Pool) -> Vec<Law> {
    let mut laws = Vec::new();
    let fs = &pool.formulas;

    // Program laws.
    laws.push(Law {
        name: "box-test",
        sound: true,
        instances: pairs2(fs, fs, |a, b| {
            (
                Formula::boxed(ModalAction::test(a.clone()), b.clone()),
                Formula::implies(a.clone(), b.clone()),
            )
        }),
    });
    laws.push(Law {
        name: "box-seq",
        sound: true,
        instances: cross2(&pool.actions, &pool.actions)
            .into_iter()
            .flat_map(|(x, y)| {
                fs.iter().map(move |f| {
                    (
                        Formula::boxed(
                            ModalAction::seq(x.clone(), y.clone()),
                            f.clone(),
                        ),
                        boxed(&x, boxed(&y, f.clone())),
                    )
                })
            })
            .collect(),
    });
    laws.push(Law {
        name: "box-choice",
        sound: true,
        instances: cross2(&pool.actions, &pool.actions)
            .into_iter()
            .flat_map(|(x, y)| {
                fs.iter().map(move |f| {
                    (
                        Formula::boxed(
                            ModalAction::choice(x.clone(), y.clone()),
                            f.clone(),
                        ),
                        Formula::and(boxed(&x, f.clone()), boxed(&y, f.clone())),
                    )
                })
            })
            .collect(),
    });
    laws.push(Law {
        name: "box-star-unfold",
        sound: true,
        instances: pool
            .actions
            .iter()
            .flat_map(|x| {
                fs.iter().map(move |f| {
                    let star = ModalAction::star(x.clone());
                    (
                        Formula::boxed(star.clone(), f.clone()),
                        Formula::and(
                            f.clone(),
                            boxed(x, Formula::boxed(star.clone(), f.clone())),
                        ),
                    )
                })
            })
            .collect(),
    });

    // Normality of update boxes.
    for (name, make) in [
        ("update-box-false", 0usize),
        ("update-box-negation", 1),
        ("update-box-disjunction", 2),
    ] {
        let mut instances = Vec::new();
        for u in pool.updates() {
            match make {
                0 => instances.push((boxed(&u, Formula::False), Formula::False)),
                1 => {
                    for f in fs {
                        instances.push((
                            boxed(&u, Formula::not(f.clone())),
                            Formula::not(boxed(&u, f.clone())),
                        ));
                    }
                }
                _ => {
                    for (f, g) in cross2(fs, fs) {
                        instances.push((
                            boxed(&u, Formula::or(f.clone(), g.clone())),
                            Formula::or(boxed(&u, f.clone()), boxed(&u, g.clone())),
                        ));
                    }
                }
            }
        }
        laws.push(Law { name, sound: true, instances });
    }

    // Commutation of update boxes across features and the universal jump.
    let feat = |s: &Sym| ModalAction::Feature(s.clone());
    laws.push(Law {
        name: "new-commutes-feature",
        sound: true,
        instances: pool
            .features
            .iter()
            .flat_map(|a| {
                fs.iter().map(move |f| {
                    (
                        Formula::boxed(
                            ModalAction::NewNode,
                            Formula::boxed(feat(a), f.clone()),
                        ),
                        Formula::boxed(
                            feat(a),
                            Formula::boxed(ModalAction::NewNode, f.clone()),
                        ),
                    )
                })
            })
            .collect(),
    });
    laws.push(Law {
        name: "newgo-feature-vacuous",
        sound: true,
        instances: pool
            .features
            .iter()
            .flat_map(|a| {
                fs.iter().map(move |f| {
                    (
                        Formula::boxed(
                            ModalAction::NewNodeGo,
                            Formula::boxed(feat(a), f.clone()),
                        ),
                        Formula::truth(),
                    )
                })
            })
            .collect(),
    });
    // The corrected universal commutations: the jump reaches the fresh
    // node, so the residue needs a [new!] conjunct.
    laws.push(Law {
        name: "new-commutes-universal",
        sound: true,
        instances: fs
            .iter()
            .map(|f| {
                (
                    Formula::boxed(
                        ModalAction::NewNode,
                        Formula::boxed(ModalAction::Universal, f.clone()),
                    ),
                    Formula::and(
                        Formula::boxed(ModalAction::NewNodeGo, f.clone()),
                        Formula::boxed(
                            ModalAction::Universal,
                            Formula::boxed(ModalAction::NewNode, f.clone()),
                        ),
                    ),
                )
            })
            .collect(),
    });
    laws.push(Law {
        name: "newgo-commutes-universal",
        sound: true,
        instances: fs
            .iter()
            .map(|f| {
                (
                    Formula::boxed(
                        ModalAction::NewNodeGo,
                        Formula::boxed(ModalAction::Universal, f.clone()),
                    ),
                    Formula::and(
                        Formula::boxed(ModalAction::NewNodeGo, f.clone()),
                        Formula::boxed(
                            ModalAction::Universal,
                            Formula::boxed(ModalAction::NewNode, f.clone()),
                        ),
                    ),
                )
            })
            .collect(),
    });
    // The weak variants: refuted on graphs where the fresh node's lack of
    // labels matters.
    laws.push(Law {
        name: "new-commutes-universal-weak",
        sound: false,
        instances: fs
            .iter()
            .map(|f| {
                (
                    Formula::boxed(
                        ModalAction::NewNode,
                        Formula::boxed(ModalAction::Universal, f.clone()),
                    ),
                    Formula::and(
                        Formula::boxed(ModalAction::NewNode, f.clone()),
                        Formula::boxed(
                            ModalAction::Universal,
                            Formula::boxed(ModalAction::NewNode, f.clone()),
                        ),
                    ),
                )
            })
            .collect(),
    });
    laws.push(Law {
        name: "newgo-commutes-universal-weak",
        sound: false,
        instances: fs
            .iter()
            .map(|f| {
                (
                    Formula::boxed(
                        ModalAction::NewNodeGo,
                        Formula::boxed(ModalAction::Universal, f.clone()),
                    ),
                    Formula::and(
                        Formula::boxed(ModalAction::NewNodeGo, f.clone()),
                        Formula::boxed(
                            ModalAction::Universal,
                            Formula::boxed(ModalAction::NewNodeGo, f.clone()),
                        ),
                    ),
                )
            })
            .collect(),
    });
    laws.push(Law {
        name: "setg-commutes-feature",
        sound: true,
        instances: pool
            .features
            .iter()
            .flat_map(|a| {
                cross2(fs, fs).into_iter().map(move |(f, g)| {
                    let u = ModalAction::assign_global(Sym::new("w"), f.clone());
                    (
                        Formula::boxed(u.clone(), Formula::boxed(feat(a), g.clone())),
                        Formula::boxed(feat(a), Formula::boxed(u, g.clone())),
                    )
                })
            })
            .collect(),
    });
    laws.push(Law {
        name: "setg-commutes-universal",
        sound: true,
        instances: cross2(fs, fs)
            .into_iter()
            .map(|(f, g)| {
                let u = ModalAction::assign_global(Sym::new("w"), f.clone());
                (
                    Formula::boxed(u.clone(), Formula::boxed(ModalAction::Universal, g.clone())),
                    Formula::boxed(ModalAction::Universal, Formula::boxed(u, g.clone())),
                )
            })
            .collect(),
    });

    // add/del across a *different* feature and across the universal jump.
    let add = |a: &Sym, f: &Formula, g: &Formula| {
        ModalAction::add_edges(a.clone(), f.clone(), g.clone())
    };
    let del = |a: &Sym, f: &Formula, g: &Formula| {
        ModalAction::del_edges(a.clone(), f.clone(), g.clone())
    };
    let a0 = pool.features[0].clone();
    let b0 = pool.features[1].clone();
    laws.push(Law {
        name: "add-commutes-other-feature",
        sound: true,
        instances: cross3(fs)
            .into_iter()
            .map(|(f, g, h)| {
                let u = add(&a0, &f, &g);
                (
                    Formula::boxed(u.clone(), Formula::boxed(feat(&b0), h.clone())),
                    Formula::boxed(feat(&b0), Formula::boxed(u, h)),
                )
            })
            .collect(),
    });
    laws.push(Law {
        name: "add-same-feature",
        sound: true,
        instances: cross3(fs)
            .into_iter()
            .map(|(f, g, h)| {
                let u = add(&a0, &f, &g);
                (
                    Formula::boxed(u.clone(), Formula::boxed(feat(&a0), h.clone())),
                    Formula::and(
                        Formula::boxed(feat(&a0), Formula::boxed(u.clone(), h.clone())),
                        Formula::implies(
                            f.clone(),
                            Formula::boxed(
                                ModalAction::Universal,
                                Formula::implies(g.clone(), Formula::boxed(u, h)),
                            ),
                        ),
                    ),
                )
            })
            .collect(),
    });
    laws.push(Law {
        name: "add-commutes-universal",
        sound: true,
        instances: cross3(fs)
            .into_iter()
            .map(|(f, g, h)| {
                let u = add(&a0, &f, &g);
                (
                    Formula::boxed(u.clone(), Formula::boxed(ModalAction::Universal, h.clone())),
                    Formula::boxed(ModalAction::Universal, Formula::boxed(u, h)),
                )
            })
            .collect(),
    });
    laws.push(Law {
        name: "del-commutes-other-feature",
        sound: true,
        instances: cross3(fs)
            .into_iter()
            .map(|(f, g, h)| {
                let u = del(&a0, &f, &g);
                (
                    Formula::boxed(u.clone(), Formula::boxed(feat(&b0), h.clone())),
                    Formula::boxed(feat(&b0), Formula::boxed(u, h)),
                )
            })
            .collect(),
    });
    laws.push(Law {
        name: "del-same-feature",
        sound: true,
        instances: cross3(fs)
            .into_iter()
            .map(|(f, g, h)| {
                let u = del(&a0, &f, &g);
                (
                    Formula::boxed(u.clone(), Formula::boxed(feat(&a0), h.clone())),
                    Formula::or(
                        Formula::and(
                            Formula::not(f.clone()),
                            Formula::boxed(feat(&a0), Formula::boxed(u.clone(), h.clone())),
                        ),
                        Formula::and(
                            f.clone(),
                            Formula::boxed(
                                feat(&a0),
                                Formula::implies(
                                    Formula::not(g.clone()),
                                    Formula::boxed(u, h),
                                ),
                            ),
                        ),
                    ),
                )
            })
            .collect(),
    });
    laws.push(Law {
        name: "del-commutes-universal",
        sound: true,
        instances: cross3(fs)
            .into_iter()
            .map(|(f, g, h)| {
                let u = del(&a0, &f, &g);
                (
                    Formula::boxed(u.clone(), Formula::boxed(ModalAction::Universal, h.clone())),
                    Formula::boxed(ModalAction::Universal, Formula::boxed(u, h)),
                )
            })
            .collect(),
    });

    // Elimination at atoms.
    let props: Vec<Formula> = pool.props.iter().map(|p| Formula::Prop(p.clone())).collect();
    laws.push(Law {
        name: "new-at-atom",
        sound: true,
        instances: props
            .iter()
            .map(|p| (Formula::boxed(ModalAction::NewNode, p.clone()), p.clone()))
            .collect(),
    });
    laws.push(Law {
        name: "newgo-at-atom",
        sound: true,
        instances: props
            .iter()
            .map(|p| (Formula::boxed(ModalAction::NewNodeGo, p.clone()), Formula::False))
            .collect(),
    });
    laws.push(Law {
        name: "setg-at-atom",
        sound: true,
        instances: pool
            .props
            .iter()
            .flat_map(|w| {
                let props = props.clone();
                fs.iter().flat_map(move |f| {
                    let u = ModalAction::assign_global(w.clone(), f.clone());
                    let w = w.clone();
                    props.clone().into_iter().map(move |p| {
                        let rhs = if p == Formula::Prop(w.clone()) { f.clone() } else { p.clone() };
                        (Formula::boxed(u.clone(), p), rhs)
                    })
                })
            })
            .collect(),
    });
    laws.push(Law {
        name: "add-at-atom",
        sound: true,
        instances: cross2(fs, fs)
            .into_iter()
            .flat_map(|(f, g)| {
                let u = add(&a0, &f, &g);
                props
                    .clone()
                    .into_iter()
                    .map(move |p| (Formula::boxed(u.clone(), p.clone()), p))
            })
            .collect(),
    });
    laws.push(Law {
        name: "del-at-atom",
        sound: true,
        instances: cross2(fs, fs)
            .into_iter()
            .flat_map(|(f, g)| {
                let u = del(&a0, &f, &g);
                props
                    .clone()
                    .into_iter()
                    .map(move |p| (Formula::boxed(u.clone(), p.clone()), p))
            })
            .collect(),
    });

    // Local assignment: normality plus atoms.
    laws.push(Law {
        name: "setl-box-false",
        sound: true,
        instances: fs
            .iter()
            .map(|f| {
                let u = ModalAction::assign_local(Sym::new("w"), f.clone());
                (Formula::boxed(u, Formula::False), Formula::False)
            })
            .collect(),
    });
    laws.push(Law {
        name: "setl-box-negation",
        sound: true,
        instances: cross2(fs, fs)
            .into_iter()
            .map(|(f, g)| {
                let u = ModalAction::assign_local(Sym::new("w"), f.clone());
                (
                    Formula::boxed(u.clone(), Formula::not(g.clone())),
                    Formula::not(Formula::boxed(u, g)),
                )
            })
            .collect(),
    });
    laws.push(Law {
        name: "setl-box-disjunction",
        sound: true,
        instances: cross3(fs)
            .into_iter()
            .map(|(f, g, h)| {
                let u = ModalAction::assign_local(Sym::new("w"), f.clone());
                (
                    Formula::boxed(u.clone(), Formula::or(g.clone(), h.clone())),
                    Formula::or(Formula::boxed(u.clone(), g), Formula::boxed(u, h)),
                )
            })
            .collect(),
    });
    laws.push(Law {
        name: "setl-at-atom",
        sound: true,
        instances: pool
            .props
            .iter()
            .flat_map(|w| {
                let props = props.clone();
                fs.iter().flat_map(move |f| {
                    let u = ModalAction::assign_local(w.clone(), f.clone());
                    let w = w.clone();
                    props.clone().into_iter().map(move |p| {
                        let rhs = if p == Formula::Prop(w.clone()) { f.clone() } else { p.clone() };
                        (Formula::boxed(u.clone(), p), rhs)
                    })
                })
            })
            .collect(),
    });

    laws
}

fn cross2<'a, T: Clone>(xs: &'a [T], ys: &'a [T]) -> Vec<(T, T)> {
    xs.iter()
        .flat_map(|x| ys.iter().map(move |y| (x.clone(), y.clone())))
        .collect()
}

fn cross3<T: Clone>(xs: &[T]) -> Vec<(T, T, T)> {
    let mut out = Vec::new();
    for x in xs {
        for y in xs {
            for z in xs {
                out.push((x.clone(), y.clone(), z.clone()));
            }
        }
    }
    out
}

fn pairs2(
    xs: &[Formula],
    ys: &[Formula],
    make: impl Fn(&Formula, &Formula) -> (Formula, Formula),
) -> Vec<(Formula, Formula)> {
    xs.iter().flat_map(|x| ys.iter().map(|y| make(x, y))).collect::<Vec<_>>()
}
