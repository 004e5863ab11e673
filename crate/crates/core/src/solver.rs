//! Exact tree-independence number and induced matching treewidth on small graphs.
//!
//! Both widths are minimised over elimination orderings. That loses nothing:
//! every tree decomposition can be refined to a minimal triangulation whose
//! maximal cliques each sit inside one of its bags, and both bag measures are
//! monotone under inclusion (`α(G[X]) <= α(G[X'])`, `μ(G,X) <= μ(G,X')` for
//! `X ⊆ X'`). Every minimal triangulation is the fill-in graph of some ordering.
//!
//! Two search routes are provided. [`Strategy::SubsetDp`] uses the fact that the
//! bag created when eliminating `v` after the set `S` is `{v}` plus everything
//! outside `S` reachable from `v` through `S`, so it only depends on `(S, v)`.
//! [`Strategy::Permutations`] walks orderings depth-first and maintains the
//! fill-in graph explicitly. Both return the lexicographically smallest optimal
//! ordering.

use std::collections::{BTreeSet, HashMap};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::bits::{self, Mask};
use crate::decomposition::{self, TreeDecomposition};
use crate::error::{Error, Result};
use crate::graph::{Graph, VertexSet};

pub const PERMUTATION_LIMIT: usize = 9;
pub const SUBSET_LIMIT: usize = 11;

/// Which bag measure a width minimises.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Measure {
    /// Independence number of the bag: tree-independence number.
    Alpha,
    /// `μ(G, bag)`: induced matching treewidth.
    Mu,
}

impl fmt::Display for Measure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Measure::Alpha => "treealpha",
            Measure::Mu => "mutw",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Strategy {
    Permutations,
    SubsetDp,
}

impl Strategy {
    pub fn default_limit(self) -> usize {
        match self {
            Strategy::Permutations => PERMUTATION_LIMIT,
            Strategy::SubsetDp => SUBSET_LIMIT,
        }
    }
}

/// A permutation of `0..n`; position `i` holds the `i`-th eliminated vertex.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct EliminationOrdering(Vec<usize>);

impl EliminationOrdering {
    pub fn new(order: Vec<usize>) -> Result<Self> {
        let mut seen = vec![false; order.len()];
        for &v in &order {
            if v >= order.len() || std::mem::replace(&mut seen[v], true) {
                return Err(Error::InvalidArgument(format!(
                    "{order:?} is not a permutation of 0..{}",
                    order.len()
                )));
            }
        }
        Ok(EliminationOrdering(order))
    }

    pub fn identity(n: usize) -> Self {
        EliminationOrdering((0..n).collect())
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SolverResult {
    pub measure: Measure,
    pub value: usize,
    pub witness: TreeDecomposition,
    pub ordering: EliminationOrdering,
    /// Complete orderings reached by the permutation search, or
    /// `(remaining set, next vertex)` transitions evaluated by the subset DP.
    pub explored: u64,
}

/// Clique tree of the fill-in graph of `ord`.
///
/// Eliminating `v` creates the bag `{v} ∪` (its neighbours not yet
/// eliminated) and turns those neighbours into a clique. Each bag hangs off the
/// bag of its earliest-eliminated higher neighbour; roots of different
/// components are chained. Bags contained in a neighbouring bag are then
/// contracted away, leaving the maximal cliques.
pub fn elimination_to_decomposition(g: &Graph, ord: &EliminationOrdering) -> TreeDecomposition {
    let n = g.vertex_count();
    assert_eq!(ord.len(), n, "ordering must cover every vertex");
    if n == 0 {
        return TreeDecomposition::new(vec![VertexSet::new()], Vec::new());
    }
    let mut adj: Vec<BTreeSet<usize>> = (0..n)
        .map(|v| g.neighbors(v).iter().copied().collect())
        .collect();
    let mut pos = vec![0; n];
    for (i, &v) in ord.as_slice().iter().enumerate() {
        pos[v] = i;
    }
    let mut bags = Vec::with_capacity(n);
    let mut edges = Vec::new();
    let mut last_root: Option<usize> = None;
    for (i, &v) in ord.as_slice().iter().enumerate() {
        let higher: Vec<usize> = adj[v].iter().copied().filter(|&w| pos[w] > i).collect();
        for (a, &x) in higher.iter().enumerate() {
            for &y in &higher[a + 1..] {
                adj[x].insert(y);
                adj[y].insert(x);
            }
        }
        let mut bag: VertexSet = higher.iter().copied().collect();
        bag.insert(v);
        bags.push(bag);
        match higher.iter().map(|&w| pos[w]).min() {
            Some(p) => edges.push((i, p)),
            None => {
                if let Some(r) = last_root {
                    edges.push((r, i));
                }
                last_root = Some(i);
            }
        }
    }
    contract_nested_bags(bags, edges)
}

/// Contracts tree edges whose one bag is contained in the other, keeping the
/// larger bag, then renumbers the surviving nodes in increasing order.
fn contract_nested_bags(bags: Vec<VertexSet>, mut edges: Vec<(usize, usize)>) -> TreeDecomposition {
    let mut alive = vec![true; bags.len()];
    while let Some(idx) = edges
        .iter()
        .position(|&(a, b)| bags[a].is_subset(&bags[b]) || bags[b].is_subset(&bags[a]))
    {
        let (a, b) = edges.swap_remove(idx);
        let (gone, keep) = if bags[a].is_subset(&bags[b]) {
            (a, b)
        } else {
            (b, a)
        };
        alive[gone] = false;
        for e in &mut edges {
            if e.0 == gone {
                e.0 = keep;
            }
            if e.1 == gone {
                e.1 = keep;
            }
        }
    }
    let mut id = vec![usize::MAX; bags.len()];
    let mut kept = Vec::new();
    for (x, bag) in bags.into_iter().enumerate() {
        if alive[x] {
            id[x] = kept.len();
            kept.push(bag);
        }
    }
    let mut edges: Vec<(usize, usize)> = edges
        .into_iter()
        .map(|(a, b)| (id[a].min(id[b]), id[a].max(id[b])))
        .collect();
    edges.sort_unstable();
    TreeDecomposition::new(kept, edges)
}

pub fn tree_independence_number(g: &Graph) -> Result<SolverResult> {
    Solver::new(Measure::Alpha).solve(g)
}

pub fn induced_matching_treewidth(g: &Graph) -> Result<SolverResult> {
    Solver::new(Measure::Mu).solve(g)
}

/// Configurable exact solver. Defaults to the subset DP with its default limit.
#[derive(Clone, Debug)]
pub struct Solver {
    measure: Measure,
    strategy: Strategy,
    limit: usize,
}

impl Solver {
    pub fn new(measure: Measure) -> Self {
        Solver {
            measure,
            strategy: Strategy::SubsetDp,
            limit: SUBSET_LIMIT,
        }
    }

    /// Switches strategy and resets the vertex limit to that strategy's default.
    pub fn strategy(mut self, strategy: Strategy) -> Self {
        self.strategy = strategy;
        self.limit = strategy.default_limit();
        self
    }

    pub fn limit(mut self, limit: usize) -> Self {
        self.limit = limit;
        self
    }

    pub fn solve(&self, g: &Graph) -> Result<SolverResult> {
        let n = g.vertex_count();
        if n > self.limit {
            return Err(Error::TooLarge {
                what: "exact width solver",
                size: n,
                limit: self.limit,
            });
        }
        let mut eval = BagEvaluator::new(g, self.measure)?;
        let (value, order, explored) = match self.strategy {
            Strategy::SubsetDp => subset_dp(&mut eval, n),
            Strategy::Permutations => permutation_search(&mut eval, n),
        };
        let ordering = EliminationOrdering(order);
        let witness = elimination_to_decomposition(g, &ordering);
        let measured = match self.measure {
            Measure::Alpha => decomposition::alpha_of_decomposition(g, &witness)?.value,
            Measure::Mu => decomposition::mu_of_decomposition(g, &witness)?.value,
        };
        if measured != value {
            return Err(Error::GuaranteeViolated(format!(
                "search value {value} but witness measures {measured}"
            )));
        }
        Ok(SolverResult {
            measure: self.measure,
            value,
            witness,
            ordering,
            explored,
        })
    }
}

/// Memoised bag measure on bitmasks.
struct BagEvaluator {
    adj: Vec<Mask>,
    edges: Vec<(usize, usize)>,
    measure: Measure,
    memo: HashMap<Mask, usize>,
}

impl BagEvaluator {
    fn new(g: &Graph, measure: Measure) -> Result<Self> {
        Ok(BagEvaluator {
            adj: g.masks()?,
            edges: g.edges().collect(),
            measure,
            memo: HashMap::new(),
        })
    }

    fn eval(&mut self, bag: Mask) -> usize {
        if let Some(&v) = self.memo.get(&bag) {
            return v;
        }
        let v = match self.measure {
            Measure::Alpha => bits::alpha(&self.adj, bag),
            Measure::Mu => {
                bits::max_induced_matching(&self.adj, &self.edges, bag, usize::MAX).len()
            }
        };
        self.memo.insert(bag, v);
        v
    }

    /// Bag created by eliminating `v` once `eliminated` is gone.
    fn bag_after(&self, eliminated: Mask, v: usize) -> Mask {
        let mut comp = bits::bit(v);
        let mut reach = self.adj[v];
        loop {
            let fresh = reach & eliminated & !comp;
            if fresh == 0 {
                break;
            }
            comp |= fresh;
            for u in bits::ones(fresh) {
                reach |= self.adj[u];
            }
        }
        (reach & !eliminated & !bits::bit(v)) | bits::bit(v)
    }
}

fn subset_dp(eval: &mut BagEvaluator, n: usize) -> (usize, Vec<usize>, u64) {
    let all = bits::full(n);
    // best[r]: optimal cost of eliminating the remaining set r last
    let size = 1usize << n;
    let mut best = vec![0u16; size];
    let mut explored = 0u64;
    for r in 1..size {
        let rem = r as Mask;
        let eliminated = all & !rem;
        let mut cost = u16::MAX;
        for v in bits::ones(rem) {
            explored += 1;
            let sub = best[r & !(1usize << v)];
            if sub >= cost {
                continue;
            }
            let w = eval.eval(eval.bag_after(eliminated, v)) as u16;
            cost = cost.min(w.max(sub));
        }
        best[r] = cost;
    }
    let opt = best[size - 1];
    let mut order = Vec::with_capacity(n);
    let mut rem = all;
    while rem != 0 {
        let eliminated = all & !rem;
        let v = bits::ones(rem)
            .find(|&v| {
                let w = eval.eval(eval.bag_after(eliminated, v)) as u16;
                w.max(best[(rem & !bits::bit(v)) as usize]) <= opt
            })
            .expect("an optimal continuation exists");
        order.push(v);
        rem &= !bits::bit(v);
    }
    (usize::from(opt), order, explored)
}

fn permutation_search(eval: &mut BagEvaluator, n: usize) -> (usize, Vec<usize>, u64) {
    struct Search<'a> {
        eval: &'a mut BagEvaluator,
        best: usize,
        best_order: Vec<usize>,
        order: Vec<usize>,
        explored: u64,
    }

    impl Search<'_> {
        fn go(&mut self, adj: &[Mask], remaining: Mask, cost: usize) {
            if remaining == 0 {
                self.explored += 1;
                self.best = cost;
                self.best_order.clone_from(&self.order);
                return;
            }
            for v in bits::ones(remaining) {
                let nb = adj[v] & remaining & !bits::bit(v);
                let c = cost.max(self.eval.eval(nb | bits::bit(v)));
                if c >= self.best {
                    continue;
                }
                let mut filled = adj.to_vec();
                for u in bits::ones(nb) {
                    filled[u] |= nb & !bits::bit(u);
                }
                self.order.push(v);
                self.go(&filled, remaining & !bits::bit(v), c);
                self.order.pop();
            }
        }
    }

    let adj = eval.adj.clone();
    let mut s = Search {
        eval,
        best: usize::MAX,
        best_order: Vec::new(),
        order: Vec::new(),
        explored: 0,
    };
    s.go(&adj, bits::full(n), 0);
    (s.best, s.best_order, s.explored)
}
