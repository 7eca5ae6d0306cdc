//! Seeded random termgraph generation for property tests.

use crate::sym::Sym;
use crate::termgraph::RootedTermgraph;
use rand::prelude::*;
use rand_chacha::ChaCha8Rng;

#[derive(Clone, Debug)]
pub struct RandomGraphParams {
    pub nodes: usize,
    pub features: Vec<Sym>,
    pub labels: Vec<Sym>,
    pub edge_prob: f64,
    pub label_prob: f64,
    /// Sample at most one label per node and one target per
    /// `(node, feature)` slot, so the result satisfies the strictness
    /// discipline by construction.
    pub strict: bool,
}

impl RandomGraphParams {
    /// Convenience constructor: features `a, b, ...` and labels `p, q, w, ...`.
    pub fn new(nodes: usize, features: usize, labels: usize, edge_prob: f64) -> Self {
        const FEATURES: [&str; 6] = ["a", "b", "c", "d", "e", "g"];
        const LABELS: [&str; 6] = ["p", "q", "w", "u", "v", "t"];
        assert!(features <= FEATURES.len() && labels <= LABELS.len());
        RandomGraphParams {
            nodes,
            features: FEATURES[..features].iter().map(Sym::new).collect(),
            labels: LABELS[..labels].iter().map(Sym::new).collect(),
            edge_prob,
            label_prob: 0.5,
            strict: false,
        }
    }

    pub fn strict(mut self) -> Self {
        self.strict = true;
        self
    }
}

/// Generate a termgraph; identical for identical `(params, seed)`.
pub fn random_termgraph(params: &RandomGraphParams, seed: u64) -> RootedTermgraph {
    assert!(params.nodes >= 1, "a rooted termgraph needs at least one node");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let names: Vec<Sym> = (0..params.nodes).map(|i| Sym::new(format!("n{i}"))).collect();
    let mut g = RootedTermgraph::single(names[0].clone());
    for n in &names {
        g.add_node(n.clone());
    }
    if params.strict {
        for n in &names {
            if !params.labels.is_empty() && rng.gen_bool(params.label_prob) {
                let l = params.labels[rng.gen_range(0..params.labels.len())].clone();
                g.add_label(n, l);
            }
            for f in &params.features {
                if rng.gen_bool(params.edge_prob) {
                    let t = names[rng.gen_range(0..names.len())].clone();
                    g.add_edge(n.clone(), f.clone(), t);
                }
            }
        }
    } else {
        for n in &names {
            for l in &params.labels {
                if rng.gen_bool(params.label_prob) {
                    g.add_label(n, l.clone());
                }
            }
            for f in &params.features {
                for t in &names {
                    if rng.gen_bool(params.edge_prob) {
                        g.add_edge(n.clone(), f.clone(), t.clone());
                    }
                }
            }
        }
    }
    g
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::termgraph::{canonical_key, validate_strict};

    #[test]
    fn trivial_parameters_yield_a_bare_node() {
        let g = random_termgraph(&RandomGraphParams::new(1, 1, 1, 0.0), 123);
        assert_eq!(g.node_count(), 1);
        assert_eq!(g.edge_count(), 0);
    }

    #[test]
    fn same_seed_same_graph() {
        let params = RandomGraphParams::new(4, 2, 2, 0.5);
        let a = random_termgraph(&params, 7);
        let b = random_termgraph(&params, 7);
        assert_eq!(a, b);
        let c = random_termgraph(&params, 8);
        assert!(a != c || canonical_key(&a) == canonical_key(&c));
    }

    #[test]
    fn snapshot_of_seed_seven() {
        // Frozen at first run; a change here means generation drifted and
        // every seeded test in the suite would silently shift.
        let g = random_termgraph(&RandomGraphParams::new(4, 2, 2, 0.5), 7);
        assert_eq!(
            canonical_key(&g),
            "r3;L:p|p,q|q|p,q|E:0-a>0;0-a>1;0-a>2;0-a>3;0-b>0;0-b>1;1-a>0;1-a>1;1-b>0;\
             1-b>1;1-b>2;1-b>3;2-a>0;2-a>1;2-b>1;2-b>2;2-b>3;3-a>2;3-b>0;3-b>3;"
        );
    }

    #[test]
    fn strict_mode_is_strict() {
        for seed in 0..50 {
            let g = random_termgraph(&RandomGraphParams::new(5, 3, 3, 0.7).strict(), seed);
            assert!(validate_strict(&g).is_empty(), "seed {seed}");
        }
    }
}
