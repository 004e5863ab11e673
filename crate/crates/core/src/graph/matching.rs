use std::fmt;

use serde::{Deserialize, Serialize};

use super::{Bipartiteness, Graph, VertexSet, ALPHA_LIMIT};
use crate::bits::{self, Mask};
use crate::error::{Error, Result};

/// A set of edges, each stored as `(u, v)` with `u < v`, in insertion order.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Matching {
    edges: Vec<(usize, usize)>,
}

impl Matching {
    pub fn new<I: IntoIterator<Item = (usize, usize)>>(edges: I) -> Self {
        Matching {
            edges: edges
                .into_iter()
                .map(|(u, v)| (u.min(v), u.max(v)))
                .collect(),
        }
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    pub fn vertices(&self) -> VertexSet {
        self.edges.iter().flat_map(|&(u, v)| [u, v]).collect()
    }

    /// Checks that the edges exist in `g` and are pairwise vertex-disjoint.
    pub fn check(&self, g: &Graph) -> Result<()> {
        let mut used = VertexSet::new();
        for &(u, v) in &self.edges {
            if !g.has_edge(u, v) {
                return Err(Error::InvalidMatching(format!("({u}, {v}) is not an edge")));
            }
            if !used.insert(u) || !used.insert(v) {
                return Err(Error::InvalidMatching(format!(
                    "({u}, {v}) shares an endpoint with an earlier edge"
                )));
            }
        }
        Ok(())
    }
}

impl fmt::Display for Matching {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.edges.iter().map(|(u, v)| format!("{u}-{v}")).collect();
        write!(f, "{{{}}}", parts.join(", "))
    }
}

/// A matching is induced when it is a matching and no edge of `g` joins
/// endpoints of two distinct matching edges.
pub fn is_induced_matching(g: &Graph, m: &Matching) -> bool {
    if m.check(g).is_err() {
        return false;
    }
    let e = m.edges();
    for i in 0..e.len() {
        for j in i + 1..e.len() {
            let (a, b) = e[i];
            let (c, d) = e[j];
            if g.has_edge(a, c) || g.has_edge(a, d) || g.has_edge(b, c) || g.has_edge(b, d) {
                return false;
            }
        }
    }
    true
}

pub fn max_matching(g: &Graph) -> Result<Matching> {
    max_matching_with_limit(g, ALPHA_LIMIT)
}

/// Maximum-cardinality matching. Bipartite graphs use augmenting paths and
/// have no size limit; other graphs are solved by exhaustive search up to
/// `limit` vertices.
pub fn max_matching_with_limit(g: &Graph, limit: usize) -> Result<Matching> {
    match g.bipartition() {
        Bipartiteness::Bipartite(bip) => Ok(bipartite_matching(g, &bip.side_a)),
        Bipartiteness::OddCycle(_) if g.vertex_count() <= limit => {
            let adj = g.masks()?;
            let mut best = Vec::new();
            brute_matching(
                &adj,
                bits::full(g.vertex_count()),
                &mut Vec::new(),
                &mut best,
            );
            best.sort_unstable();
            Ok(Matching::new(best))
        }
        Bipartiteness::OddCycle(_) => Err(Error::TooLarge {
            what: "maximum matching on a non-bipartite graph",
            size: g.vertex_count(),
            limit,
        }),
    }
}

fn bipartite_matching(g: &Graph, left: &VertexSet) -> Matching {
    let n = g.vertex_count();
    let mut mate = vec![usize::MAX; n];
    for &u in left {
        let mut seen = vec![false; n];
        augment(g, u, &mut mate, &mut seen);
    }
    Matching::new(
        left.iter()
            .filter(|&&u| mate[u] != usize::MAX)
            .map(|&u| (u, mate[u])),
    )
}

fn augment(g: &Graph, u: usize, mate: &mut [usize], seen: &mut [bool]) -> bool {
    for &w in g.neighbors(u) {
        if seen[w] {
            continue;
        }
        seen[w] = true;
        if mate[w] == usize::MAX || augment(g, mate[w], mate, seen) {
            mate[w] = u;
            mate[u] = w;
            return true;
        }
    }
    false
}

fn brute_matching(
    adj: &[Mask],
    free: Mask,
    cur: &mut Vec<(usize, usize)>,
    best: &mut Vec<(usize, usize)>,
) {
    if cur.len() + bits::count(free) / 2 <= best.len() {
        return;
    }
    let Some(v) = bits::ones(free).find(|&v| adj[v] & free != 0) else {
        if cur.len() > best.len() {
            best.clone_from(cur);
        }
        return;
    };
    let rest = free & !bits::bit(v);
    for w in bits::ones(adj[v] & rest) {
        cur.push((v, w));
        brute_matching(adj, rest & !bits::bit(w), cur, best);
        cur.pop();
    }
    brute_matching(adj, rest, cur, best);
}

/// Contracts every edge of a perfect matching of `g`. Vertex `i` of the
/// result is the `i`-th matching edge; no loops or parallel edges arise.
pub fn contract_matching(g: &Graph, m: &Matching) -> Result<Graph> {
    m.check(g)?;
    if 2 * m.len() != g.vertex_count() {
        return Err(Error::InvalidMatching(format!(
            "matching of size {} is not perfect on {} vertices",
            m.len(),
            g.vertex_count()
        )));
    }
    let mut owner = vec![0; g.vertex_count()];
    for (i, &(u, v)) in m.edges().iter().enumerate() {
        owner[u] = i;
        owner[v] = i;
    }
    let edges: Vec<(usize, usize)> = g
        .edges()
        .map(|(u, v)| (owner[u], owner[v]))
        .filter(|(a, b)| a != b)
        .collect();
    Graph::new(m.len(), &edges)
}

#[cfg(test)]
mod tests {
    use super::super::families::*;
    use super::*;

    /// Oracle: largest vertex-disjoint subset of edges, by enumeration.
    fn matching_number_by_enumeration(g: &Graph) -> usize {
        let edges: Vec<_> = g.edges().collect();
        (0u32..1 << edges.len())
            .filter(|code| {
                let mut used = VertexSet::new();
                edges
                    .iter()
                    .enumerate()
                    .filter(|(i, _)| code & (1 << i) != 0)
                    .all(|(_, &(u, v))| used.insert(u) && used.insert(v))
            })
            .map(|c| c.count_ones() as usize)
            .max()
            .unwrap_or(0)
    }

    #[test]
    fn max_matching_examples() {
        let p4 = path(4);
        assert_eq!(matching_number_by_enumeration(&p4), 2);
        let m = max_matching(&p4).unwrap();
        assert_eq!(m.len(), 2);
        m.check(&p4).unwrap();

        let k33 = complete_bipartite(3, 3);
        assert_eq!(max_matching(&k33).unwrap().len(), 3);
        assert!(max_matching(&Graph::empty(5)).unwrap().is_empty());
    }

    #[test]
    fn max_matching_general_graphs() {
        for n in 3..9 {
            let c = cycle(n);
            assert_eq!(max_matching(&c).unwrap().len(), n / 2);
            assert_eq!(max_matching(&complete(n)).unwrap().len(), n / 2);
        }
        assert_eq!(max_matching(&petersen()).unwrap().len(), 5);
        assert!(matches!(
            max_matching_with_limit(&complete(9), 8),
            Err(Error::TooLarge { .. })
        ));
        // bipartite graphs are not subject to the limit
        assert_eq!(
            max_matching_with_limit(&complete_bipartite(9, 9), 8)
                .unwrap()
                .len(),
            9
        );
    }

    #[test]
    fn max_matching_agrees_with_enumeration() {
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
                let m = max_matching(&g).unwrap();
                m.check(&g).unwrap();
                assert_eq!(m.len(), matching_number_by_enumeration(&g));
            }
        }
    }

    #[test]
    fn induced_matching_examples() {
        let c6 = cycle(6);
        // edges 0-1 and 3-4 are at distance 2; check every cross pair by hand
        for (a, b) in [(0, 3), (0, 4), (1, 3), (1, 4)] {
            assert!(!c6.has_edge(a, b));
        }
        assert!(is_induced_matching(&c6, &Matching::new([(0, 1), (3, 4)])));
        let c4 = cycle(4);
        assert!(!is_induced_matching(&c4, &Matching::new([(0, 1), (2, 3)])));
        assert!(is_induced_matching(&c4, &Matching::new([(0, 1)])));
        assert!(is_induced_matching(&c4, &Matching::default()));
        // not a matching at all
        assert!(!is_induced_matching(&c4, &Matching::new([(0, 1), (1, 2)])));
        assert!(!is_induced_matching(&c4, &Matching::new([(0, 2)])));
    }

    #[test]
    fn contraction_examples() {
        let q = contract_matching(&path(4), &Matching::new([(0, 1), (2, 3)])).unwrap();
        assert_eq!((q.vertex_count(), q.edge_count()), (2, 1));

        let q = contract_matching(&disjoint_edges(2), &Matching::new([(0, 1), (2, 3)])).unwrap();
        assert_eq!((q.vertex_count(), q.edge_count()), (2, 0));

        let q = contract_matching(&cycle(4), &Matching::new([(0, 1), (2, 3)])).unwrap();
        assert_eq!((q.vertex_count(), q.edge_count()), (2, 1));

        assert!(contract_matching(&path(4), &Matching::new([(1, 2)])).is_err());
    }

    #[test]
    fn contraction_never_adds_edges() {
        for k in 1..=4usize {
            let n = 2 * k;
            let m = Matching::new((0..k).map(|i| (2 * i, 2 * i + 1)));
            let extra: Vec<(usize, usize)> = (0..n)
                .flat_map(|u| (u + 1..n).map(move |v| (u, v)))
                .filter(|&(u, v)| !(u % 2 == 0 && v == u + 1))
                .collect();
            let limit = 1u32 << extra.len().min(12);
            for code in 0..limit {
                let mut edges: Vec<_> = m.edges().to_vec();
                edges.extend(
                    extra
                        .iter()
                        .enumerate()
                        .filter(|(i, _)| code & (1 << i) != 0)
                        .map(|(_, &e)| e),
                );
                let g = Graph::new(n, &edges).unwrap();
                let q = contract_matching(&g, &m).unwrap();
                assert!(q.edge_count() <= g.edge_count());
            }
        }
    }
}
