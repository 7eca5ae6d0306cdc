//! The bundled rewrite programs, checked against structural oracles.

mod support;

use modgraph_core::sym::Sym;
use modgraph_core::termgraph::{
    canonical_key, normalize, NormalizeOptions, NormalizeOutcome, Strategy,
};
use support::*;

#[test]
fn doubling_doubles() {
    let system = load_rules("arith.rules");
    for k in 0..=3 {
        let outcome = normalize(&double_of(k), &system, &NormalizeOptions::default()).unwrap();
        match outcome {
            NormalizeOutcome::NormalForm { graph, .. } => {
                assert_eq!(peano_value(&graph), Some(2 * k), "double({k})");
            }
            NormalizeOutcome::BoundExceeded { .. } => panic!("double({k}) did not terminate"),
        }
    }
}

#[test]
fn addition_adds() {
    let system = load_rules("arith.rules");
    for i in 0..=2 {
        for j in 0..=2 {
            let outcome =
                normalize(&plus_of(i, j), &system, &NormalizeOptions::default()).unwrap();
            assert_eq!(peano_value(outcome.graph()), Some(i + j), "{i} + {j}");
        }
    }
}

#[test]
fn length_of_circular_lists() {
    let system = load_rules("length.rules");
    for (file, expected) in [("circular1.tg", 1), ("circular2.tg", 2)] {
        let outcome =
            normalize(&load_graph(file), &system, &NormalizeOptions::default()).unwrap();
        assert!(outcome.is_normal_form(), "{file} did not terminate");
        assert_eq!(peano_value(outcome.graph()), Some(expected), "{file}");
    }
}

#[test]
fn in_situ_reversal_reverses() {
    let system = load_rules("reverse.rules");
    let outcome =
        normalize(&load_graph("list123.tg"), &system, &NormalizeOptions::default()).unwrap();
    assert!(outcome.is_normal_form());
    let values = list_values(outcome.graph()).expect("result is a plain list");
    let names: Vec<&str> = values.iter().map(|s| s.as_str()).collect();
    assert_eq!(names, vec!["3", "2", "1"]);
}

#[test]
fn insert_grows_a_circular_list() {
    let system = load_rules("insert.rules");
    let outcome =
        normalize(&load_graph("insert1.tg"), &system, &NormalizeOptions::default()).unwrap();
    assert!(outcome.is_normal_form());
    let g = outcome.graph();
    // The result is a 2-cell circular list containing both elements.
    let root = g.root().clone();
    assert!(g.has_label(&root, &Sym::new("cons")));
    let tail = g.successors(&root, &Sym::new("2"));
    assert_eq!(tail.len(), 1);
    let other = tail[0].clone();
    assert_ne!(other, root);
    assert!(g.has_label(&other, &Sym::new("cons")));
    assert_eq!(g.successors(&other, &Sym::new("2")), vec![root.clone()]);
    let mut elements: Vec<String> = [&root, &other]
        .iter()
        .map(|cell| {
            let heads = g.successors(cell, &Sym::new("1"));
            assert_eq!(heads.len(), 1);
            g.labels_of(&heads[0]).map(|l| l.to_string()).collect::<String>()
        })
        .collect();
    elements.sort();
    assert_eq!(elements, vec!["5".to_string(), "7".to_string()]);
}

#[test]
fn random_strategy_is_reproducible_and_confluent_here() {
    let system = load_rules("arith.rules");
    let options = |seed| NormalizeOptions {
        strategy: Strategy::Random(seed),
        ..NormalizeOptions::default()
    };
    let a = normalize(&double_of(2), &system, &options(11)).unwrap();
    let b = normalize(&double_of(2), &system, &options(11)).unwrap();
    assert_eq!(canonical_key(a.graph()), canonical_key(b.graph()));
    for seed in 0..5 {
        let out = normalize(&double_of(2), &system, &options(seed)).unwrap();
        assert_eq!(peano_value(out.graph()), Some(4), "seed {seed}");
    }
}

#[test]
fn all_reachable_normal_forms_agree_with_the_strategy_result() {
    let system = load_rules("arith.rules");
    for k in 0..=2 {
        let start = double_of(k);
        let normal_forms = all_normal_forms(&start, &system, 20_000).expect("bounded");
        assert!(!normal_forms.is_empty());
        for nf in normal_forms.values() {
            assert_eq!(peano_value(nf), Some(2 * k));
        }
    }
}
