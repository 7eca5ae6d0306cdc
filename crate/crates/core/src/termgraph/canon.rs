//! Canonical keys for rooted termgraphs.
//!
//! Two graphs get the same key exactly when a bijective node renaming
//! preserving root, label sets and edge triples exists between them. The
//! key is computed by iterative partition refinement on node invariants
//! with backtracking on ties, taking the lexicographically smallest
//! serialization over all discrete refinements.

use super::RootedTermgraph;
use crate::sym::Sym;
use std::collections::BTreeMap;

/// Canonical key; the root participates in the invariants.
pub fn canonical_key(g: &RootedTermgraph) -> String {
    Canonicalizer::new(g, true).run()
}

/// Canonical key ignoring the root. Used when comparing encoder output
/// against engine output, where roots are tracked separately.
pub fn canonical_key_unrooted(g: &RootedTermgraph) -> String {
    Canonicalizer::new(g, false).run()
}

struct Canonicalizer {
    n: usize,
    rooted: bool,
    root: usize,
    /// Rank of each node's label set among the distinct label sets.
    label_ids: Vec<u32>,
    label_text: Vec<String>,
    out: Vec<Vec<(u32, usize)>>,
    inc: Vec<Vec<(u32, usize)>>,
    edges: Vec<(usize, u32, usize)>,
    feature_text: Vec<String>,
}

impl Canonicalizer {
    fn new(g: &RootedTermgraph, rooted: bool) -> Self {
        let nodes: Vec<Sym> = g.nodes().cloned().collect();
        let index: BTreeMap<&Sym, usize> =
            nodes.iter().enumerate().map(|(i, n)| (n, i)).collect();
        let n = nodes.len();

        let mut label_sets: Vec<Vec<String>> = Vec::with_capacity(n);
        for node in &nodes {
            let mut ls: Vec<String> = g.labels_of(node).map(|l| l.to_string()).collect();
            ls.sort();
            label_sets.push(ls);
        }
        let mut distinct: Vec<Vec<String>> = label_sets.clone();
        distinct.sort();
        distinct.dedup();
        let label_ids: Vec<u32> = label_sets
            .iter()
            .map(|ls| distinct.binary_search(ls).unwrap() as u32)
            .collect();
        let label_text: Vec<String> = label_sets.iter().map(|ls| ls.join(",")).collect();

        let mut features: Vec<Sym> = g.edges().map(|(_, f, _)| f.clone()).collect();
        features.sort();
        features.dedup();
        let feature_id: BTreeMap<&Sym, u32> =
            features.iter().enumerate().map(|(i, f)| (f, i as u32)).collect();

        let mut out = vec![Vec::new(); n];
        let mut inc = vec![Vec::new(); n];
        let mut edges = Vec::new();
        for (s, f, t) in g.edges() {
            let (si, ti, fi) = (index[s], index[t], feature_id[f]);
            out[si].push((fi, ti));
            inc[ti].push((fi, si));
            edges.push((si, fi, ti));
        }
        Canonicalizer {
            n,
            rooted,
            root: index[g.root()],
            label_ids,
            label_text,
            out,
            inc,
            edges,
            feature_text: features.iter().map(|f| f.to_string()).collect(),
        }
    }

    fn run(&self) -> String {
        // Initial invariant: root flag plus label set.
        let mut sigs: Vec<(bool, u32)> = Vec::with_capacity(self.n);
        for i in 0..self.n {
            sigs.push((self.rooted && i == self.root, self.label_ids[i]));
        }
        let mut sorted = sigs.clone();
        sorted.sort_unstable();
        sorted.dedup();
        let colors: Vec<usize> =
            (0..self.n).map(|i| sorted.binary_search(&sigs[i]).unwrap()).collect();
        self.search(colors).expect("at least one discrete refinement")
    }

    fn refine(&self, colors: &mut Vec<usize>) {
        loop {
            let mut sigs: Vec<(usize, Vec<(u32, usize)>, Vec<(u32, usize)>)> =
                Vec::with_capacity(self.n);
            for i in 0..self.n {
                let mut o: Vec<(u32, usize)> =
                    self.out[i].iter().map(|&(f, t)| (f, colors[t])).collect();
                o.sort_unstable();
                let mut inn: Vec<(u32, usize)> =
                    self.inc[i].iter().map(|&(f, s)| (f, colors[s])).collect();
                inn.sort_unstable();
                sigs.push((colors[i], o, inn));
            }
            let mut sorted = sigs.clone();
            sorted.sort_unstable();
            sorted.dedup();
            let classes_before =
                colors.iter().collect::<std::collections::BTreeSet<_>>().len();
            for i in 0..self.n {
                colors[i] = sorted.binary_search(&sigs[i]).unwrap();
            }
            if sorted.len() == classes_before {
                return;
            }
        }
    }

    fn search(&self, mut colors: Vec<usize>) -> Option<String> {
        self.refine(&mut colors);
        let mut count: BTreeMap<usize, usize> = BTreeMap::new();
        for &c in &colors {
            *count.entry(c).or_insert(0) += 1;
        }
        let split = count.iter().find(|(_, &k)| k > 1).map(|(&c, _)| c);
        match split {
            None => Some(self.serialize(&colors)),
            Some(cell) => {
                let max = colors.iter().copied().max().unwrap_or(0);
                let members: Vec<usize> =
                    (0..self.n).filter(|&i| colors[i] == cell).collect();
                let mut best: Option<String> = None;
                for m in members {
                    let mut next = colors.clone();
                    next[m] = max + 1;
                    if let Some(key) = self.search(next) {
                        best = match best {
                            None => Some(key),
                            Some(b) => Some(b.min(key)),
                        };
                    }
                }
                best
            }
        }
    }

    fn serialize(&self, colors: &[usize]) -> String {
        // colors is a bijection onto 0..n here.
        let pos = colors;
        let mut by_pos = vec![0usize; self.n];
        for i in 0..self.n {
            by_pos[pos[i]] = i;
        }
        let mut s = String::new();
        if self.rooted {
            s.push_str(&format!("r{};", pos[self.root]));
        }
        s.push_str("L:");
        for p in 0..self.n {
            s.push_str(&self.label_text[by_pos[p]]);
            s.push('|');
        }
        s.push_str("E:");
        let mut es: Vec<(usize, u32, usize)> =
            self.edges.iter().map(|&(a, f, b)| (pos[a], f, pos[b])).collect();
        es.sort_unstable();
        for (a, f, b) in es {
            s.push_str(&format!("{a}-{}>{b};", self.feature_text[f as usize]));
        }
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sym::sym;
    use crate::termgraph::parse_termgraph;

    #[test]
    fn renaming_is_invisible() {
        let g = parse_termgraph("p1:cons(1 => g:a, 2 => p2) + p2:cons(1 => g, 2 => p1)").unwrap();
        let h = parse_termgraph("x:cons(1 => y:a, 2 => z) + z:cons(1 => y, 2 => x)").unwrap();
        assert_eq!(canonical_key(&g), canonical_key(&h));
    }

    #[test]
    fn cycle_and_path_differ() {
        let cycle = RootedTermgraph::build(
            sym("a0"),
            [],
            [(sym("a0"), sym("a"), sym("a1")), (sym("a1"), sym("a"), sym("a0"))],
        );
        let path = RootedTermgraph::build(sym("a0"), [], [(sym("a0"), sym("a"), sym("a1"))]);
        assert_ne!(canonical_key(&cycle), canonical_key(&path));
    }

    #[test]
    fn root_placement_matters_for_rooted_keys() {
        let g = parse_termgraph("n:f(a => m:_)").unwrap();
        let h = g.with_root(sym("m"));
        assert_ne!(canonical_key(&g), canonical_key(&h));
        assert_eq!(canonical_key_unrooted(&g), canonical_key_unrooted(&h));
    }
}
