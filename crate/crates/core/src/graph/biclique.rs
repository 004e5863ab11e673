use std::fmt;

use serde::{Deserialize, Serialize};

use super::{Bipartition, Graph};
use crate::bits;
use crate::error::{Error, Result};

/// Whether a `K_{t,t}` occurrence must be induced or may carry extra edges
/// inside its parts.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BicliqueMode {
    Subgraph,
    Induced,
}

/// Two disjoint vertex lists, every cross pair adjacent.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Biclique {
    pub left: Vec<usize>,
    pub right: Vec<usize>,
}

impl Biclique {
    pub fn verify(&self, g: &Graph, mode: BicliqueMode) -> bool {
        let disjoint = self.left.iter().all(|v| !self.right.contains(v));
        let complete = self
            .left
            .iter()
            .all(|&p| self.right.iter().all(|&q| g.has_edge(p, q)));
        let independent = |part: &[usize]| {
            part.iter()
                .enumerate()
                .all(|(i, &a)| part[i + 1..].iter().all(|&b| a != b && !g.has_edge(a, b)))
        };
        let distinct = |part: &[usize]| {
            part.iter()
                .enumerate()
                .all(|(i, a)| !part[i + 1..].contains(a))
        };
        disjoint
            && complete
            && distinct(&self.left)
            && distinct(&self.right)
            && match mode {
                BicliqueMode::Subgraph => true,
                BicliqueMode::Induced => independent(&self.left) && independent(&self.right),
            }
    }
}

impl fmt::Display for Biclique {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?} x {:?}", self.left, self.right)
    }
}

/// Looks for `K_{t,t}` anywhere in `g`, as a subgraph or as an induced subgraph.
pub fn find_biclique(g: &Graph, t: usize, mode: BicliqueMode) -> Result<Option<Biclique>> {
    if t == 0 {
        return Err(Error::InvalidArgument(
            "biclique size must be at least 1".into(),
        ));
    }
    if 2 * t > g.vertex_count() {
        return Ok(None);
    }
    let adj = g.masks()?;
    let all = bits::full(g.vertex_count());
    let found = bits::find_biclique(&adj, all, all, t, mode == BicliqueMode::Induced);
    Ok(found.map(to_biclique))
}

/// Looks for `K_{t,t}` with one part inside each side of `bip`. Such a
/// subgraph is automatically induced because the sides are independent.
/// Works on adjacency lists, so there is no vertex limit.
pub fn find_side_biclique(g: &Graph, bip: &Bipartition, t: usize) -> Result<Option<Biclique>> {
    if t == 0 {
        return Err(Error::InvalidArgument(
            "biclique size must be at least 1".into(),
        ));
    }
    let left: Vec<usize> = bip.side_a.iter().copied().collect();
    let right: Vec<usize> = bip.side_b.iter().copied().collect();
    Ok(side_biclique(&left, &right, t, |v| {
        g.neighbors(v)
            .iter()
            .copied()
            .filter(|w| bip.side_b.contains(w))
            .collect()
    }))
}

/// Enumerates t-subsets of `left` in lexicographic order, keeping the sorted
/// common neighbourhood inside `right`; `nbrs(v)` must return a sorted subset
/// of `right`.
pub(crate) fn side_biclique(
    left: &[usize],
    right: &[usize],
    t: usize,
    nbrs: impl Fn(usize) -> Vec<usize>,
) -> Option<Biclique> {
    if t > left.len() || t > right.len() {
        return None;
    }
    let lists: Vec<Vec<usize>> = left.iter().map(|&v| nbrs(v)).collect();
    let mut chosen = Vec::with_capacity(t);
    side_rec(left, &lists, 0, right.to_vec(), t, &mut chosen)
}

fn side_rec(
    left: &[usize],
    lists: &[Vec<usize>],
    from: usize,
    common: Vec<usize>,
    t: usize,
    chosen: &mut Vec<usize>,
) -> Option<Biclique> {
    if chosen.len() == t {
        return Some(Biclique {
            left: chosen.clone(),
            right: common[..t].to_vec(),
        });
    }
    let need = t - chosen.len();
    for i in from..left.len() {
        if left.len() - i < need {
            break;
        }
        if lists[i].len() < t {
            continue;
        }
        let next: Vec<usize> = common
            .iter()
            .copied()
            .filter(|w| lists[i].binary_search(w).is_ok())
            .collect();
        if next.len() < t {
            continue;
        }
        chosen.push(left[i]);
        if let Some(found) = side_rec(left, lists, i + 1, next, t, chosen) {
            return Some(found);
        }
        chosen.pop();
    }
    None
}

fn to_biclique((p, q): (bits::Mask, bits::Mask)) -> Biclique {
    Biclique {
        left: bits::ones(p).collect(),
        right: bits::ones(q).collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::super::families::*;
    use super::*;

    /// Oracle: every pair of disjoint t-subsets.
    fn has_biclique_by_enumeration(g: &Graph, t: usize, mode: BicliqueMode) -> bool {
        let n = g.vertex_count();
        let subsets: Vec<Vec<usize>> = (0u32..1 << n)
            .filter(|c| c.count_ones() as usize == t)
            .map(|c| (0..n).filter(|v| c & (1 << v) != 0).collect())
            .collect();
        subsets.iter().any(|p| {
            subsets.iter().any(|q| {
                Biclique {
                    left: p.clone(),
                    right: q.clone(),
                }
                .verify(g, mode)
            })
        })
    }

    #[test]
    fn examples() {
        let k22 = complete_bipartite(2, 2);
        for mode in [BicliqueMode::Subgraph, BicliqueMode::Induced] {
            let w = find_biclique(&k22, 2, mode).unwrap().unwrap();
            assert!(w.verify(&k22, mode));
        }
        assert_eq!(
            find_biclique(&cycle(5), 2, BicliqueMode::Subgraph).unwrap(),
            None
        );
        let c6 = cycle(6);
        let w = find_biclique(&c6, 1, BicliqueMode::Induced)
            .unwrap()
            .unwrap();
        assert!(c6.has_edge(w.left[0], w.right[0]));
        assert_eq!(find_biclique(&c6, 4, BicliqueMode::Subgraph).unwrap(), None);
        assert!(find_biclique(&c6, 0, BicliqueMode::Subgraph).is_err());
    }

    #[test]
    fn subgraph_versus_induced() {
        // K_4 contains K_{2,2} as a subgraph but not induced.
        let k4 = complete(4);
        assert!(find_biclique(&k4, 2, BicliqueMode::Subgraph)
            .unwrap()
            .is_some());
        assert!(find_biclique(&k4, 2, BicliqueMode::Induced)
            .unwrap()
            .is_none());
    }

    #[test]
    fn side_respecting_witness_is_induced() {
        let g = complete_bipartite(3, 4);
        let bip = g.bipartition().into_option().unwrap();
        let w = find_side_biclique(&g, &bip, 3).unwrap().unwrap();
        assert!(w.verify(&g, BicliqueMode::Induced));
        assert!(find_side_biclique(&g, &bip, 4).unwrap().is_none());
    }

    #[test]
    fn side_search_has_no_vertex_limit() {
        let g = disjoint_edges(100);
        let bip = g.bipartition().into_option().unwrap();
        assert!(find_side_biclique(&g, &bip, 2).unwrap().is_none());
        let w = find_side_biclique(&g, &bip, 1).unwrap().unwrap();
        assert!(w.verify(&g, BicliqueMode::Induced));
        let big = complete_bipartite(70, 70);
        let bip = big.bipartition().into_option().unwrap();
        let w = find_side_biclique(&big, &bip, 5).unwrap().unwrap();
        assert!(w.verify(&big, BicliqueMode::Induced));
    }

    #[test]
    fn agrees_with_enumeration_up_to_6() {
        for n in 0..=6usize {
            let pairs: Vec<(usize, usize)> = (0..n)
                .flat_map(|u| (u + 1..n).map(move |v| (u, v)))
                .collect();
            // every 7th labelled graph keeps the oracle cheap
            for code in (0u32..1 << pairs.len()).step_by(7) {
                let edges: Vec<_> = pairs
                    .iter()
                    .enumerate()
                    .filter(|(i, _)| code & (1 << i) != 0)
                    .map(|(_, &e)| e)
                    .collect();
                let g = Graph::new(n, &edges).unwrap();
                for t in 1..=3 {
                    for mode in [BicliqueMode::Subgraph, BicliqueMode::Induced] {
                        let found = find_biclique(&g, t, mode).unwrap();
                        if let Some(w) = &found {
                            assert!(w.verify(&g, mode));
                        }
                        assert_eq!(found.is_some(), has_biclique_by_enumeration(&g, t, mode));
                    }
                }
            }
        }
    }
}
