//! Tree decompositions, their validity conditions, and the two bag measures:
//! the independence number of a decomposition and its induced matching number.

use std::collections::VecDeque;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::bits;
use crate::error::{Error, Result};
use crate::graph::{max_independent_subset, Graph, Matching, VertexSet};

/// Vertex limit of the host graph for exact `μ(G, X)` computations.
pub const MU_LIMIT: usize = 64;

/// A tree over nodes `0..node_count` plus one bag per node.
///
/// Nothing here enforces that the edges actually form a tree; parsers accept
/// whatever a file says and [`validate`] reports what is wrong.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct TreeDecomposition {
    bags: Vec<VertexSet>,
    edges: Vec<(usize, usize)>,
}

impl TreeDecomposition {
    pub fn new(bags: Vec<VertexSet>, edges: Vec<(usize, usize)>) -> Self {
        TreeDecomposition { bags, edges }
    }

    /// One node holding every vertex.
    pub fn trivial(g: &Graph) -> Self {
        TreeDecomposition {
            bags: vec![g.vertices()],
            edges: Vec::new(),
        }
    }

    pub fn node_count(&self) -> usize {
        self.bags.len()
    }

    pub fn bags(&self) -> &[VertexSet] {
        &self.bags
    }

    pub fn bag(&self, node: usize) -> &VertexSet {
        &self.bags[node]
    }

    pub fn tree_edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn max_bag_size(&self) -> usize {
        self.bags.iter().map(VertexSet::len).max().unwrap_or(0)
    }

    /// Adds a node and returns its id.
    pub fn push_node(&mut self, bag: VertexSet) -> usize {
        self.bags.push(bag);
        self.bags.len() - 1
    }

    pub fn push_edge(&mut self, a: usize, b: usize) {
        self.edges.push((a, b));
    }

    pub fn bag_mut(&mut self, node: usize) -> &mut VertexSet {
        &mut self.bags[node]
    }

    /// Nodes whose bag contains `v`, in increasing order.
    pub fn subtree_of_vertex(&self, v: usize) -> Vec<usize> {
        (0..self.bags.len())
            .filter(|&x| self.bags[x].contains(&v))
            .collect()
    }

    fn node_adjacency(&self) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.bags.len()];
        for &(a, b) in &self.edges {
            if a < self.bags.len() && b < self.bags.len() {
                adj[a].push(b);
                adj[b].push(a);
            }
        }
        adj
    }
}

/// First failed condition of a tree decomposition, with a witness.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "violation", rename_all = "snake_case")]
pub enum Violation {
    NoNodes,
    /// A tree edge names a node id that does not exist.
    UnknownNode {
        edge: (usize, usize),
    },
    /// The tree edges close a cycle (a loop or a repeated edge counts).
    Cycle {
        nodes: Vec<usize>,
    },
    /// Some node cannot be reached from node 0.
    Disconnected {
        unreachable: usize,
    },
    BagOutOfRange {
        node: usize,
        vertex: usize,
    },
    UncoveredEdge {
        u: usize,
        v: usize,
    },
    VertexMissing {
        vertex: usize,
    },
    /// The nodes holding `vertex` split into several components of the tree.
    DisconnectedSubtree {
        vertex: usize,
        components: Vec<Vec<usize>>,
    },
}

impl Violation {
    /// The same violation with every vertex and node id increased by one,
    /// for reporting in the 1-based file convention.
    pub fn one_based(&self) -> Violation {
        let pair = |(a, b): (usize, usize)| (a + 1, b + 1);
        let list = |v: &[usize]| v.iter().map(|x| x + 1).collect::<Vec<_>>();
        match self {
            Violation::NoNodes => Violation::NoNodes,
            Violation::UnknownNode { edge } => Violation::UnknownNode { edge: pair(*edge) },
            Violation::Cycle { nodes } => Violation::Cycle { nodes: list(nodes) },
            Violation::Disconnected { unreachable } => Violation::Disconnected {
                unreachable: unreachable + 1,
            },
            Violation::BagOutOfRange { node, vertex } => Violation::BagOutOfRange {
                node: node + 1,
                vertex: vertex + 1,
            },
            Violation::UncoveredEdge { u, v } => Violation::UncoveredEdge { u: u + 1, v: v + 1 },
            Violation::VertexMissing { vertex } => Violation::VertexMissing { vertex: vertex + 1 },
            Violation::DisconnectedSubtree { vertex, components } => {
                Violation::DisconnectedSubtree {
                    vertex: vertex + 1,
                    components: components.iter().map(|c| list(c)).collect(),
                }
            }
        }
    }
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::NoNodes => write!(f, "decomposition has no nodes"),
            Violation::UnknownNode { edge } => {
                write!(f, "tree edge {edge:?} references an unknown node")
            }
            Violation::Cycle { nodes } => write!(f, "tree edges contain the cycle {nodes:?}"),
            Violation::Disconnected { unreachable } => {
                write!(
                    f,
                    "tree is disconnected: node {unreachable} unreachable from the first node"
                )
            }
            Violation::BagOutOfRange { node, vertex } => {
                write!(f, "bag of node {node} holds out-of-range vertex {vertex}")
            }
            Violation::UncoveredEdge { u, v } => write!(f, "edge ({u}, {v}) is in no bag"),
            Violation::VertexMissing { vertex } => write!(f, "vertex {vertex} is in no bag"),
            Violation::DisconnectedSubtree { vertex, components } => write!(
                f,
                "nodes holding vertex {vertex} are not connected: {components:?}"
            ),
        }
    }
}

/// Checks the tree structure, edge coverage and subtree connectivity.
pub fn validate(g: &Graph, td: &TreeDecomposition) -> std::result::Result<(), Violation> {
    check_tree(td)?;
    let n = g.vertex_count();
    for (node, bag) in td.bags.iter().enumerate() {
        if let Some(&vertex) = bag.iter().find(|&&v| v >= n) {
            return Err(Violation::BagOutOfRange { node, vertex });
        }
    }
    for (u, v) in g.edges() {
        if !td.bags.iter().any(|b| b.contains(&u) && b.contains(&v)) {
            return Err(Violation::UncoveredEdge { u, v });
        }
    }
    let adj = td.node_adjacency();
    for vertex in 0..n {
        let holding = td.subtree_of_vertex(vertex);
        if holding.is_empty() {
            return Err(Violation::VertexMissing { vertex });
        }
        let components = components_within(&adj, &holding);
        if components.len() > 1 {
            return Err(Violation::DisconnectedSubtree { vertex, components });
        }
    }
    Ok(())
}

fn check_tree(td: &TreeDecomposition) -> std::result::Result<(), Violation> {
    let k = td.node_count();
    if k == 0 {
        return Err(Violation::NoNodes);
    }
    let mut forest: Vec<Vec<usize>> = vec![Vec::new(); k];
    for &(a, b) in &td.edges {
        if a >= k || b >= k {
            return Err(Violation::UnknownNode { edge: (a, b) });
        }
        if let Some(path) = tree_path(&forest, a, b) {
            return Err(Violation::Cycle { nodes: path });
        }
        forest[a].push(b);
        forest[b].push(a);
    }
    let reach = components_within(&forest, &(0..k).collect::<Vec<_>>());
    if reach.len() > 1 {
        return Err(Violation::Disconnected {
            unreachable: reach[1][0],
        });
    }
    Ok(())
}

/// Path from `a` to `b` in the forest, if they are already connected.
fn tree_path(forest: &[Vec<usize>], a: usize, b: usize) -> Option<Vec<usize>> {
    if a == b {
        return Some(vec![a]);
    }
    let mut prev = vec![usize::MAX; forest.len()];
    prev[a] = a;
    let mut queue = VecDeque::from([a]);
    while let Some(x) = queue.pop_front() {
        for &y in &forest[x] {
            if prev[y] == usize::MAX {
                prev[y] = x;
                if y == b {
                    let mut path = vec![b];
                    let mut cur = b;
                    while cur != a {
                        cur = prev[cur];
                        path.push(cur);
                    }
                    path.reverse();
                    return Some(path);
                }
                queue.push_back(y);
            }
        }
    }
    None
}

/// Components of the subgraph of the tree induced by `nodes` (sorted input).
fn components_within(adj: &[Vec<usize>], nodes: &[usize]) -> Vec<Vec<usize>> {
    let mut inside = vec![false; adj.len()];
    for &x in nodes {
        inside[x] = true;
    }
    let mut seen = vec![false; adj.len()];
    let mut out = Vec::new();
    for &start in nodes {
        if seen[start] {
            continue;
        }
        seen[start] = true;
        let mut comp = vec![start];
        let mut queue = VecDeque::from([start]);
        while let Some(x) = queue.pop_front() {
            for &y in &adj[x] {
                if inside[y] && !seen[y] {
                    seen[y] = true;
                    comp.push(y);
                    queue.push_back(y);
                }
            }
        }
        comp.sort_unstable();
        out.push(comp);
    }
    out
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MeasureWitness {
    IndependentSet(VertexSet),
    InducedMatching(Matching),
}

/// Value of a bag measure together with the node and object certifying it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MeasureReport {
    pub value: usize,
    pub node: usize,
    pub witness: MeasureWitness,
}

impl MeasureReport {
    /// Re-checks the witness: an independent set inside the bag, or an
    /// induced matching each of whose edges meets the bag.
    pub fn certify(&self, g: &Graph, td: &TreeDecomposition) -> bool {
        if self.node >= td.node_count() {
            return false;
        }
        let bag = td.bag(self.node);
        match &self.witness {
            MeasureWitness::IndependentSet(s) => {
                s.len() == self.value && s.is_subset(bag) && g.is_independent_set(s)
            }
            MeasureWitness::InducedMatching(m) => {
                m.len() == self.value
                    && crate::graph::is_induced_matching(g, m)
                    && m.edges()
                        .iter()
                        .all(|(u, v)| bag.contains(u) || bag.contains(v))
            }
        }
    }
}

fn check_bags(g: &Graph, td: &TreeDecomposition) -> Result<()> {
    if td.node_count() == 0 {
        return Err(Error::InvalidDecomposition(Violation::NoNodes));
    }
    td.bags.iter().try_for_each(|b| g.check_set(b))
}

/// `α(T)`: the largest independence number of a bag. Ties go to the lowest node id.
pub fn alpha_of_decomposition(g: &Graph, td: &TreeDecomposition) -> Result<MeasureReport> {
    check_bags(g, td)?;
    let mut best: Option<MeasureReport> = None;
    for (node, bag) in td.bags.iter().enumerate() {
        let set = max_independent_subset(g, bag)?;
        if best.as_ref().is_none_or(|b| set.len() > b.value) {
            best = Some(MeasureReport {
                value: set.len(),
                node,
                witness: MeasureWitness::IndependentSet(set),
            });
        }
    }
    Ok(best.expect("at least one node"))
}

/// `μ(G, X)`: the largest induced matching all of whose edges meet `x`.
pub fn mu_of_bag(g: &Graph, x: &VertexSet) -> Result<Matching> {
    g.check_set(x)?;
    if g.vertex_count() > MU_LIMIT {
        return Err(Error::TooLarge {
            what: "induced matching number",
            size: g.vertex_count(),
            limit: MU_LIMIT,
        });
    }
    let adj = g.masks()?;
    let edges: Vec<(usize, usize)> = g.edges().collect();
    let target = bits::from_iter(x.iter().copied());
    Ok(Matching::new(bits::max_induced_matching(
        &adj,
        &edges,
        target,
        usize::MAX,
    )))
}

/// `μ(T)`: the largest `μ(G, β(x))` over nodes. Ties go to the lowest node id.
pub fn mu_of_decomposition(g: &Graph, td: &TreeDecomposition) -> Result<MeasureReport> {
    check_bags(g, td)?;
    let mut best: Option<MeasureReport> = None;
    for (node, bag) in td.bags.iter().enumerate() {
        let m = mu_of_bag(g, bag)?;
        if best.as_ref().is_none_or(|b| m.len() > b.value) {
            best = Some(MeasureReport {
                value: m.len(),
                node,
                witness: MeasureWitness::InducedMatching(m),
            });
        }
    }
    Ok(best.expect("at least one node"))
}

/// A node whose bag is a balanced separator of `g`. Nonempty bags are
/// preferred; an empty bag can only separate when every bag does.
pub fn find_balanced_separator_bag(g: &Graph, td: &TreeDecomposition) -> Result<usize> {
    validate(g, td).map_err(Error::InvalidDecomposition)?;
    let order = (0..td.node_count())
        .filter(|&x| !td.bag(x).is_empty())
        .chain((0..td.node_count()).filter(|&x| td.bag(x).is_empty()));
    for node in order {
        if g.is_balanced_separator(td.bag(node)) {
            return Ok(node);
        }
    }
    Err(Error::GuaranteeViolated(
        "a valid tree decomposition without a balanced-separator bag".into(),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::families::*;

    fn set(xs: &[usize]) -> VertexSet {
        xs.iter().copied().collect()
    }

    /// Oracle: all edge subsets of size <= 4, keep induced matchings meeting x.
    fn mu_by_enumeration(g: &Graph, x: &VertexSet) -> usize {
        let edges: Vec<(usize, usize)> = g
            .edges()
            .filter(|(u, v)| x.contains(u) || x.contains(v))
            .collect();
        let mut best = 0;
        let mut stack: Vec<(usize, Vec<(usize, usize)>)> = vec![(0, Vec::new())];
        while let Some((from, chosen)) = stack.pop() {
            if crate::graph::is_induced_matching(g, &Matching::new(chosen.clone())) {
                best = best.max(chosen.len());
            } else {
                continue;
            }
            if chosen.len() == 4 {
                continue;
            }
            for (i, &e) in edges.iter().enumerate().skip(from) {
                let mut next = chosen.clone();
                next.push(e);
                stack.push((i + 1, next));
            }
        }
        best
    }

    #[test]
    fn validate_examples() {
        let p3 = path(3);
        let td = TreeDecomposition::new(vec![set(&[0, 1]), set(&[1, 2])], vec![(0, 1)]);
        assert_eq!(validate(&p3, &td), Ok(()));

        // {0,1} - {0} - ... with vertex 1 also in a third bag {1} hanging off node 1
        let td = TreeDecomposition::new(
            vec![set(&[0, 1]), set(&[2]), set(&[1]), set(&[1, 2])],
            vec![(0, 1), (1, 2), (1, 3)],
        );
        // node 3 = {1,2} covers 1-2; node 0 and node 2/3 hold 1 but node 1 does not
        assert!(matches!(
            validate(&p3, &td),
            Err(Violation::DisconnectedSubtree { vertex: 1, .. })
        ));

        let tri = complete(3);
        assert_eq!(validate(&tri, &TreeDecomposition::trivial(&tri)), Ok(()));
    }

    #[test]
    fn validate_reports_structural_failures() {
        let p3 = path(3);
        let bags = vec![set(&[0, 1]), set(&[1, 2]), set(&[1])];
        let cyc = TreeDecomposition::new(bags.clone(), vec![(0, 1), (1, 2), (2, 0)]);
        assert_eq!(
            validate(&p3, &cyc),
            Err(Violation::Cycle {
                nodes: vec![2, 1, 0]
            })
        );
        let dup = TreeDecomposition::new(bags.clone(), vec![(0, 1), (1, 0)]);
        assert!(matches!(validate(&p3, &dup), Err(Violation::Cycle { .. })));
        let split = TreeDecomposition::new(bags.clone(), vec![(0, 1)]);
        assert_eq!(
            validate(&p3, &split),
            Err(Violation::Disconnected { unreachable: 2 })
        );
        let unknown = TreeDecomposition::new(bags, vec![(0, 1), (1, 7)]);
        assert!(matches!(
            validate(&p3, &unknown),
            Err(Violation::UnknownNode { .. })
        ));
        assert_eq!(
            validate(&p3, &TreeDecomposition::default()),
            Err(Violation::NoNodes)
        );
        let uncovered = TreeDecomposition::new(vec![set(&[0, 1]), set(&[2])], vec![(0, 1)]);
        assert_eq!(
            validate(&p3, &uncovered),
            Err(Violation::UncoveredEdge { u: 1, v: 2 })
        );
        let missing = TreeDecomposition::new(vec![set(&[0, 1])], vec![]);
        assert!(matches!(
            validate(&Graph::new(3, &[(0, 1)]).unwrap(), &missing),
            Err(Violation::VertexMissing { vertex: 2 })
        ));
        let out = TreeDecomposition::new(vec![set(&[0, 1, 2, 5])], vec![]);
        assert_eq!(
            validate(&p3, &out),
            Err(Violation::BagOutOfRange { node: 0, vertex: 5 })
        );
    }

    #[test]
    fn trivial_decompositions() {
        let k33 = complete_bipartite(3, 3);
        let td = TreeDecomposition::trivial(&k33);
        assert_eq!(alpha_of_decomposition(&k33, &td).unwrap().value, 3);
        let empty = Graph::empty(0);
        let td = TreeDecomposition::trivial(&empty);
        assert_eq!(td.node_count(), 1);
        assert!(td.bag(0).is_empty());
        assert_eq!(validate(&empty, &td), Ok(()));
        assert_eq!(alpha_of_decomposition(&empty, &td).unwrap().value, 0);
    }

    #[test]
    fn subtrees() {
        let c5 = cycle(5);
        assert_eq!(
            TreeDecomposition::trivial(&c5).subtree_of_vertex(3),
            vec![0]
        );
        let td = TreeDecomposition::new(
            vec![set(&[0]), set(&[0, 1]), set(&[1, 2]), set(&[2])],
            vec![(0, 1), (1, 2), (2, 3)],
        );
        assert_eq!(td.subtree_of_vertex(1), vec![1, 2]);
        assert!(td.subtree_of_vertex(4).is_empty());
    }

    #[test]
    fn alpha_examples() {
        let c4 = cycle(4);
        let r = alpha_of_decomposition(&c4, &TreeDecomposition::trivial(&c4)).unwrap();
        assert_eq!(r.value, 2);
        assert!(r.certify(&c4, &TreeDecomposition::trivial(&c4)));

        // chordal: two triangles sharing an edge, clique tree
        let g = Graph::new(4, &[(0, 1), (0, 2), (1, 2), (1, 3), (2, 3)]).unwrap();
        let td = TreeDecomposition::new(vec![set(&[0, 1, 2]), set(&[1, 2, 3])], vec![(0, 1)]);
        assert_eq!(validate(&g, &td), Ok(()));
        assert_eq!(alpha_of_decomposition(&g, &td).unwrap().value, 1);

        let e5 = Graph::empty(5);
        let td = TreeDecomposition::trivial(&e5);
        assert_eq!(alpha_of_decomposition(&e5, &td).unwrap().value, 5);
    }

    #[test]
    fn mu_of_bag_examples() {
        let k2 = path(2);
        assert_eq!(mu_of_bag(&k2, &set(&[0])).unwrap().len(), 1);
        let c6 = cycle(6);
        assert_eq!(mu_by_enumeration(&c6, &c6.vertices()), 2);
        assert_eq!(mu_of_bag(&c6, &c6.vertices()).unwrap().len(), 2);
        let k33 = complete_bipartite(3, 3);
        assert_eq!(mu_by_enumeration(&k33, &set(&[0, 1, 2])), 1);
        assert_eq!(mu_of_bag(&k33, &set(&[0, 1, 2])).unwrap().len(), 1);
        assert_eq!(mu_of_bag(&k33, &VertexSet::new()).unwrap().len(), 0);
    }

    #[test]
    fn mu_of_decomposition_examples() {
        let k33 = complete_bipartite(3, 3);
        let td = TreeDecomposition::trivial(&k33);
        let r = mu_of_decomposition(&k33, &td).unwrap();
        assert_eq!(r.value, 1);
        assert!(r.certify(&k33, &td));
        let e = Graph::empty(4);
        assert_eq!(
            mu_of_decomposition(&e, &TreeDecomposition::trivial(&e))
                .unwrap()
                .value,
            0
        );
        let c6 = cycle(6);
        let td = TreeDecomposition::trivial(&c6);
        let r = mu_of_decomposition(&c6, &td).unwrap();
        assert_eq!(r.value, 2);
        assert!(r.certify(&c6, &td));
    }

    #[test]
    fn mu_matches_enumeration_on_small_graphs() {
        for n in 2..=6usize {
            let pairs: Vec<(usize, usize)> = (0..n)
                .flat_map(|u| (u + 1..n).map(move |v| (u, v)))
                .collect();
            for code in (0u32..1 << pairs.len()).step_by(11) {
                let edges: Vec<_> = pairs
                    .iter()
                    .enumerate()
                    .filter(|(i, _)| code & (1 << i) != 0)
                    .map(|(_, &e)| e)
                    .collect();
                let g = Graph::new(n, &edges).unwrap();
                for xcode in 0u32..1 << n {
                    let x: VertexSet = (0..n).filter(|v| xcode & (1 << v) != 0).collect();
                    let m = mu_of_bag(&g, &x).unwrap();
                    assert!(crate::graph::is_induced_matching(&g, &m));
                    assert!(m
                        .edges()
                        .iter()
                        .all(|(u, v)| x.contains(u) || x.contains(v)));
                    assert_eq!(m.len(), mu_by_enumeration(&g, &x));
                }
            }
        }
    }

    #[test]
    fn balanced_separator_bags() {
        let p3 = path(3);
        let td = TreeDecomposition::new(vec![set(&[0, 1]), set(&[1, 2])], vec![(0, 1)]);
        for node in 0..2 {
            assert!(p3.is_balanced_separator(td.bag(node)));
        }
        assert_eq!(find_balanced_separator_bag(&p3, &td).unwrap(), 0);

        let c5 = cycle(5);
        assert_eq!(
            find_balanced_separator_bag(&c5, &TreeDecomposition::trivial(&c5)).unwrap(),
            0
        );

        let c4 = cycle(4);
        let td = TreeDecomposition::new(vec![set(&[0, 1, 2]), set(&[0, 2, 3])], vec![(0, 1)]);
        assert!(c4.is_balanced_separator(td.bag(0)) && c4.is_balanced_separator(td.bag(1)));
        assert_eq!(find_balanced_separator_bag(&c4, &td).unwrap(), 0);

        // empty bags lose to nonempty ones
        let e2 = Graph::empty(2);
        let td = TreeDecomposition::new(vec![set(&[]), set(&[0]), set(&[1])], vec![(0, 1), (0, 2)]);
        assert_eq!(find_balanced_separator_bag(&e2, &td).unwrap(), 1);
    }
}
