//! Simple undirected graphs and the exact and greedy primitives built on them.

pub(crate) mod biclique;
pub mod families;
mod kst;
mod matching;

use std::collections::{BTreeSet, VecDeque};

use serde::{Deserialize, Serialize};

use crate::bits::{self, Mask, MASK_BITS};
use crate::error::{Error, Result};

pub use biclique::{find_biclique, find_side_biclique, Biclique, BicliqueMode};
pub use kst::{kst_bound_holds, kst_edge_bound, kst_threshold};
pub use matching::{
    contract_matching, is_induced_matching, max_matching, max_matching_with_limit, Matching,
};

/// Vertex subsets. Ordered, so `Ord` is the lexicographic order on sorted
/// member lists, which is the tie-break used throughout the crate.
pub type VertexSet = BTreeSet<usize>;

/// Default vertex limit for exact independence-number computations.
pub const ALPHA_LIMIT: usize = 24;

/// Finite simple undirected graph on vertices `0..n`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Graph {
    n: usize,
    adj: Vec<Vec<usize>>,
    m: usize,
}

impl Graph {
    /// Builds a graph from an edge list. Duplicate edges (in either
    /// orientation) collapse into one.
    pub fn new(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let mut adj = vec![Vec::new(); n];
        for &(u, v) in edges {
            for w in [u, v] {
                if w >= n {
                    return Err(Error::VertexOutOfRange { vertex: w, n });
                }
            }
            if u == v {
                return Err(Error::SelfLoop(u));
            }
            adj[u].push(v);
            adj[v].push(u);
        }
        let mut m = 0;
        for list in &mut adj {
            list.sort_unstable();
            list.dedup();
            m += list.len();
        }
        Ok(Graph { n, adj, m: m / 2 })
    }

    pub fn empty(n: usize) -> Self {
        Graph {
            n,
            adj: vec![Vec::new(); n],
            m: 0,
        }
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.m
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adj[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        u < self.n && v < self.n && self.adj[u].binary_search(&v).is_ok()
    }

    /// Edges as `(u, v)` with `u < v`, sorted.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.adj
            .iter()
            .enumerate()
            .flat_map(|(u, list)| list.iter().filter(move |&&v| v > u).map(move |&v| (u, v)))
    }

    pub fn vertices(&self) -> VertexSet {
        (0..self.n).collect()
    }

    pub fn check_vertex(&self, v: usize) -> Result<()> {
        if v < self.n {
            Ok(())
        } else {
            Err(Error::VertexOutOfRange {
                vertex: v,
                n: self.n,
            })
        }
    }

    pub fn check_set(&self, x: &VertexSet) -> Result<()> {
        match x.last() {
            Some(&v) => self.check_vertex(v),
            None => Ok(()),
        }
    }

    /// `N(X)`: vertices outside `x` with a neighbor in `x`.
    pub fn neighborhood(&self, x: &VertexSet) -> Result<VertexSet> {
        self.check_set(x)?;
        Ok(x.iter()
            .flat_map(|&v| self.adj[v].iter().copied())
            .filter(|w| !x.contains(w))
            .collect())
    }

    /// `N[v] = N(v) ∪ {v}`.
    pub fn closed_neighborhood(&self, v: usize) -> Result<VertexSet> {
        self.check_vertex(v)?;
        let mut out: VertexSet = self.adj[v].iter().copied().collect();
        out.insert(v);
        Ok(out)
    }

    pub fn induced_subgraph(&self, x: &VertexSet) -> Result<InducedSubgraph> {
        self.check_set(x)?;
        let to_old: Vec<usize> = x.iter().copied().collect();
        let mut to_new = vec![None; self.n];
        for (i, &v) in to_old.iter().enumerate() {
            to_new[v] = Some(i);
        }
        let edges: Vec<(usize, usize)> = self
            .edges()
            .filter_map(|(u, v)| Some((to_new[u]?, to_new[v]?)))
            .collect();
        let graph = Graph::new(to_old.len(), &edges)?;
        Ok(InducedSubgraph {
            graph,
            to_new,
            to_old,
        })
    }

    pub fn is_independent_set(&self, x: &VertexSet) -> bool {
        x.iter()
            .all(|&v| v < self.n && self.adj[v].iter().all(|w| !x.contains(w)))
    }

    /// Connected components of `G - removed`, each sorted, ordered by smallest member.
    pub fn components_without(&self, removed: &VertexSet) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.n];
        for &v in removed {
            if v < self.n {
                seen[v] = true;
            }
        }
        let mut out = Vec::new();
        for start in 0..self.n {
            if seen[start] {
                continue;
            }
            seen[start] = true;
            let mut comp = vec![start];
            let mut queue = VecDeque::from([start]);
            while let Some(u) = queue.pop_front() {
                for &w in &self.adj[u] {
                    if !seen[w] {
                        seen[w] = true;
                        comp.push(w);
                        queue.push_back(w);
                    }
                }
            }
            comp.sort_unstable();
            out.push(comp);
        }
        out
    }

    /// True when no component of `G - s` has more than `n/2` vertices.
    pub fn is_balanced_separator(&self, s: &VertexSet) -> bool {
        self.components_without(s)
            .iter()
            .all(|c| 2 * c.len() <= self.n)
    }

    pub(crate) fn masks(&self) -> Result<Vec<Mask>> {
        if self.n > MASK_BITS {
            return Err(Error::TooLarge {
                what: "bitmask kernel",
                size: self.n,
                limit: MASK_BITS,
            });
        }
        Ok(self
            .adj
            .iter()
            .map(|list| bits::from_iter(list.iter().copied()))
            .collect())
    }

    /// Two-colouring by breadth-first layering from the lowest uncoloured
    /// vertex; isolated vertices land on side A.
    pub fn bipartition(&self) -> Bipartiteness {
        let mut colour: Vec<Option<bool>> = vec![None; self.n];
        let mut parent = vec![usize::MAX; self.n];
        for start in 0..self.n {
            if colour[start].is_some() {
                continue;
            }
            colour[start] = Some(false);
            let mut queue = VecDeque::from([start]);
            while let Some(u) = queue.pop_front() {
                let cu = colour[u].unwrap();
                for &w in &self.adj[u] {
                    match colour[w] {
                        None => {
                            colour[w] = Some(!cu);
                            parent[w] = u;
                            queue.push_back(w);
                        }
                        Some(cw) if cw == cu => {
                            return Bipartiteness::OddCycle(odd_cycle(&parent, u, w));
                        }
                        Some(_) => {}
                    }
                }
            }
        }
        let side_a = (0..self.n).filter(|&v| colour[v] == Some(false)).collect();
        let side_b = (0..self.n).filter(|&v| colour[v] == Some(true)).collect();
        Bipartiteness::Bipartite(Bipartition { side_a, side_b })
    }
}

/// Closes the BFS-tree paths from `u` and `w` at their lowest common ancestor.
fn odd_cycle(parent: &[usize], u: usize, w: usize) -> Vec<usize> {
    let path = |mut x: usize| {
        let mut p = vec![x];
        while parent[x] != usize::MAX {
            x = parent[x];
            p.push(x);
        }
        p
    };
    let pu = path(u);
    let pw = path(w);
    let on_pw: VertexSet = pw.iter().copied().collect();
    let meet = *pu.iter().find(|x| on_pw.contains(x)).unwrap();
    let mut cycle: Vec<usize> = pu.iter().copied().take_while(|&x| x != meet).collect();
    cycle.push(meet);
    let back: Vec<usize> = pw.iter().copied().take_while(|&x| x != meet).collect();
    cycle.extend(back.into_iter().rev());
    cycle
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InducedSubgraph {
    pub graph: Graph,
    /// Old index to new index, `None` outside the kept set.
    pub to_new: Vec<Option<usize>>,
    pub to_old: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Bipartition {
    pub side_a: VertexSet,
    pub side_b: VertexSet,
}

impl Bipartition {
    pub fn is_valid_for(&self, g: &Graph) -> bool {
        self.side_a.is_disjoint(&self.side_b)
            && self.side_a.len() + self.side_b.len() == g.vertex_count()
            && g.check_set(&self.side_a).is_ok()
            && g.check_set(&self.side_b).is_ok()
            && g.is_independent_set(&self.side_a)
            && g.is_independent_set(&self.side_b)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Bipartiteness {
    Bipartite(Bipartition),
    /// Vertices of an odd cycle, in cyclic order.
    OddCycle(Vec<usize>),
}

impl Bipartiteness {
    pub fn into_option(self) -> Option<Bipartition> {
        match self {
            Bipartiteness::Bipartite(b) => Some(b),
            Bipartiteness::OddCycle(_) => None,
        }
    }
}

pub fn max_independent_set(g: &Graph) -> Result<VertexSet> {
    max_independent_set_with_limit(g, ALPHA_LIMIT)
}

/// A maximum independent set; the lexicographically smallest one when several exist.
pub fn max_independent_set_with_limit(g: &Graph, limit: usize) -> Result<VertexSet> {
    if g.vertex_count() > limit {
        return Err(Error::TooLarge {
            what: "maximum independent set",
            size: g.vertex_count(),
            limit,
        });
    }
    let adj = g.masks()?;
    let set = bits::canonical_max_independent(&adj, bits::full(g.vertex_count()));
    Ok(bits::ones(set).collect())
}

/// `α(G[x])`, subject to the default exact limit on `|x|`.
pub fn independence_number(g: &Graph, x: &VertexSet) -> Result<usize> {
    g.check_set(x)?;
    if x.len() > ALPHA_LIMIT {
        return Err(Error::TooLarge {
            what: "independence number",
            size: x.len(),
            limit: ALPHA_LIMIT,
        });
    }
    let adj = g.masks()?;
    Ok(bits::alpha(&adj, bits::from_iter(x.iter().copied())))
}

/// A maximum independent set of `G[x]`, lexicographically smallest.
pub fn max_independent_subset(g: &Graph, x: &VertexSet) -> Result<VertexSet> {
    g.check_set(x)?;
    if x.len() > ALPHA_LIMIT {
        return Err(Error::TooLarge {
            what: "independence number",
            size: x.len(),
            limit: ALPHA_LIMIT,
        });
    }
    let adj = g.masks()?;
    let set = bits::canonical_max_independent(&adj, bits::from_iter(x.iter().copied()));
    Ok(bits::ones(set).collect())
}

/// Repeatedly takes a minimum-degree vertex (lowest index on ties) of the
/// remaining graph and deletes its closed neighbourhood.
pub fn greedy_turan_independent_set(g: &Graph) -> VertexSet {
    let n = g.vertex_count();
    let mut alive = vec![true; n];
    let mut deg: Vec<usize> = (0..n).map(|v| g.degree(v)).collect();
    let mut left = n;
    let mut out = VertexSet::new();
    while left > 0 {
        let v = (0..n)
            .filter(|&v| alive[v])
            .min_by_key(|&v| (deg[v], v))
            .unwrap();
        out.insert(v);
        let mut gone = vec![v];
        gone.extend(g.neighbors(v).iter().copied().filter(|&w| alive[w]));
        for &x in &gone {
            alive[x] = false;
            left -= 1;
        }
        for &x in &gone {
            for &y in g.neighbors(x) {
                if alive[y] {
                    deg[y] -= 1;
                }
            }
        }
    }
    out
}

/// `⌈n / (2σ + 1)⌉` with `σ = max(1, m/n)`, evaluated exactly.
pub fn turan_guarantee(n: usize, m: usize) -> usize {
    if n == 0 {
        0
    } else if m <= n {
        n.div_ceil(3)
    } else {
        // n / (2m/n + 1) = n² / (2m + n)
        (n * n).div_ceil(2 * m + n)
    }
}

#[cfg(test)]
mod tests {
    use super::families::*;
    use super::*;

    fn set(xs: &[usize]) -> VertexSet {
        xs.iter().copied().collect()
    }

    /// Independent oracle: scan all 2^n subsets.
    fn alpha_by_enumeration(g: &Graph) -> usize {
        let n = g.vertex_count();
        (0u32..1 << n)
            .filter(|&s| {
                g.edges()
                    .all(|(u, v)| s & (1 << u) == 0 || s & (1 << v) == 0)
            })
            .map(|s| s.count_ones() as usize)
            .max()
            .unwrap_or(0)
    }

    #[test]
    fn build_graph_examples() {
        let g = Graph::new(2, &[(0, 1)]).unwrap();
        assert_eq!((g.vertex_count(), g.edge_count()), (2, 1));
        let g = Graph::new(3, &[(0, 1), (1, 2), (0, 2)]).unwrap();
        assert_eq!(g.edge_count(), 3);
        let g = Graph::new(4, &[(0, 1), (0, 1)]).unwrap();
        assert_eq!(g.edge_count(), 1);
        let g = Graph::new(4, &[(0, 1), (1, 0)]).unwrap();
        assert_eq!(g.edge_count(), 1);
    }

    #[test]
    fn build_graph_rejects_bad_pairs() {
        assert!(matches!(
            Graph::new(3, &[(0, 3)]),
            Err(Error::VertexOutOfRange { vertex: 3, n: 3 })
        ));
        assert!(matches!(Graph::new(3, &[(1, 1)]), Err(Error::SelfLoop(1))));
    }

    #[test]
    fn neighborhoods() {
        let tri = complete(3);
        assert_eq!(tri.neighborhood(&set(&[0])).unwrap(), set(&[1, 2]));
        let p = path(3);
        assert_eq!(p.neighborhood(&set(&[0, 2])).unwrap(), set(&[1]));
        let e = Graph::empty(4);
        assert!(e.neighborhood(&set(&[0, 1, 3])).unwrap().is_empty());
        assert!(e.neighborhood(&set(&[4])).is_err());

        assert_eq!(
            complete_bipartite(1, 3).closed_neighborhood(0).unwrap(),
            set(&[0, 1, 2, 3])
        );
        assert_eq!(e.closed_neighborhood(2).unwrap(), set(&[2]));
        assert_eq!(cycle(4).closed_neighborhood(0).unwrap().len(), 3);
    }

    #[test]
    fn induced_subgraphs() {
        let sub = cycle(5).induced_subgraph(&set(&[1, 2, 3])).unwrap();
        assert_eq!(sub.graph, path(3));
        assert_eq!(sub.to_old, vec![1, 2, 3]);
        assert_eq!(sub.to_new[2], Some(1));
        assert_eq!(sub.to_new[0], None);

        let pet = petersen();
        assert_eq!(pet.induced_subgraph(&pet.vertices()).unwrap().graph, pet);
        let sub = pet.induced_subgraph(&VertexSet::new()).unwrap();
        assert_eq!(sub.graph.vertex_count(), 0);
    }

    #[test]
    fn independent_sets() {
        let c4 = cycle(4);
        assert!(c4.is_independent_set(&set(&[0, 2])));
        assert!(!c4.is_independent_set(&set(&[0, 1])));
        assert!(c4.is_independent_set(&VertexSet::new()));
    }

    #[test]
    fn max_independent_set_examples() {
        assert_eq!(alpha_by_enumeration(&cycle(5)), 2);
        assert_eq!(max_independent_set(&cycle(5)).unwrap().len(), 2);
        let k33 = complete_bipartite(3, 3);
        assert_eq!(max_independent_set(&k33).unwrap(), set(&[0, 1, 2]));
        assert_eq!(max_independent_set(&Graph::empty(4)).unwrap().len(), 4);
        assert!(max_independent_set(&Graph::empty(0)).unwrap().is_empty());
        assert!(matches!(
            max_independent_set(&Graph::empty(25)),
            Err(Error::TooLarge { .. })
        ));
        assert_eq!(max_independent_set(&petersen()).unwrap().len(), 4);
    }

    #[test]
    fn greedy_turan_examples() {
        let c5 = cycle(5);
        let s = greedy_turan_independent_set(&c5);
        assert!(c5.is_independent_set(&s));
        assert!(s.len() >= 2 && turan_guarantee(5, 5) == 2);

        assert_eq!(greedy_turan_independent_set(&Graph::empty(7)).len(), 7);

        let pet = petersen();
        let s = greedy_turan_independent_set(&pet);
        assert!(pet.is_independent_set(&s));
        assert_eq!(turan_guarantee(10, 15), 3);
        assert!(s.len() >= 3);
    }

    #[test]
    fn bipartiteness() {
        match cycle(4).bipartition() {
            Bipartiteness::Bipartite(b) => {
                assert_eq!(b.side_a, set(&[0, 2]));
                assert!(b.is_valid_for(&cycle(4)));
            }
            other => panic!("{other:?}"),
        }
        match cycle(5).bipartition() {
            Bipartiteness::OddCycle(c) => {
                assert_eq!(c.len() % 2, 1);
                let g = cycle(5);
                for i in 0..c.len() {
                    assert!(g.has_edge(c[i], c[(i + 1) % c.len()]));
                }
            }
            other => panic!("{other:?}"),
        }
        match Graph::empty(3).bipartition() {
            Bipartiteness::Bipartite(b) => {
                assert_eq!(b.side_a, set(&[0, 1, 2]));
                assert!(b.side_b.is_empty());
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn odd_cycle_witness_in_larger_graph() {
        // triangle 3-4-5 hanging off a path 0-1-2-3
        let g = Graph::new(6, &[(0, 1), (1, 2), (2, 3), (3, 4), (4, 5), (3, 5)]).unwrap();
        let Bipartiteness::OddCycle(c) = g.bipartition() else {
            panic!()
        };
        assert_eq!(c.iter().copied().collect::<VertexSet>(), set(&[3, 4, 5]));
    }

    #[test]
    fn balanced_separators() {
        assert!(path(3).is_balanced_separator(&set(&[1])));
        assert!(cycle(4).is_balanced_separator(&set(&[0, 2])));
        assert!(!complete(4).is_balanced_separator(&VertexSet::new()));
        assert!(Graph::empty(0).is_balanced_separator(&VertexSet::new()));
    }

    #[test]
    fn mis_matches_enumeration_on_all_graphs_up_to_5() {
        for n in 0..=5usize {
            let pairs: Vec<(usize, usize)> = (0..n)
                .flat_map(|u| (u + 1..n).map(move |v| (u, v)))
                .collect();
            for code in 0u32..1 << pairs.len() {
                let edges: Vec<_> = pairs
                    .iter()
                    .enumerate()
                    .filter(|(i, _)| code & (1 << i) != 0)
                    .map(|(_, &e)| e)
                    .collect();
                let g = Graph::new(n, &edges).unwrap();
                let s = max_independent_set(&g).unwrap();
                assert!(g.is_independent_set(&s));
                assert_eq!(s.len(), alpha_by_enumeration(&g));
            }
        }
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn arb_graph(max_n: usize) -> impl Strategy<Value = Graph> {
            (0..=max_n).prop_flat_map(|n| {
                proptest::collection::vec((0..n.max(1), 0..n.max(1)), 0..=n * n).prop_map(
                    move |pairs| {
                        let edges: Vec<_> = pairs.into_iter().filter(|(u, v)| u != v).collect();
                        Graph::new(n, &edges).unwrap()
                    },
                )
            })
        }

        proptest! {
            #[test]
            fn mis_is_maximum_and_canonical(g in arb_graph(16)) {
                let s = max_independent_set(&g).unwrap();
                prop_assert!(g.is_independent_set(&s));
                prop_assert_eq!(s.len(), alpha_by_enumeration(&g));
                // lexicographically smallest among all maximum independent sets
                let n = g.vertex_count();
                if n <= 12 {
                    let best = (0u32..1 << n)
                        .map(|code| (0..n).filter(|v| code & (1 << v) != 0).collect::<VertexSet>())
                        .filter(|x| x.len() == s.len() && g.is_independent_set(x))
                        .min()
                        .unwrap();
                    prop_assert_eq!(s, best);
                }
            }

            #[test]
            fn greedy_meets_turan_bound(g in arb_graph(30)) {
                let s = greedy_turan_independent_set(&g);
                prop_assert!(g.is_independent_set(&s));
                prop_assert!(s.len() >= turan_guarantee(g.vertex_count(), g.edge_count()));
            }
        }
    }
}
