//! Random instances, the three-property check and separator lower bound for
//! random bipartite graphs, and exhaustive edge-count checks on small graphs.

use num_bigint::BigUint;
use num_traits::ToPrimitive;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::bits;
use crate::error::{Error, Result};
use crate::graph::biclique::side_biclique;
use crate::graph::{
    find_biclique, find_side_biclique, kst_bound_holds, kst_edge_bound, Biclique, BicliqueMode,
    Bipartition, Graph, Matching, VertexSet,
};

/// Largest `max_n` accepted by [`kst_exhaustive_check`]: 2^21 labelled graphs.
pub const KST_MAX_N: usize = 7;
/// Removed sets enumerated by [`separator_lower_bound`] before giving up.
pub const SEPARATOR_ENUMERATION_LIMIT: u64 = 5_000_000;

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn check_probability(p: f64) -> Result<()> {
    if (0.0..=1.0).contains(&p) {
        Ok(())
    } else {
        Err(Error::InvalidArgument(format!(
            "probability {p} outside [0, 1]"
        )))
    }
}

/// `G(n, p)`: each of the `n(n-1)/2` pairs independently, in lexicographic order.
pub fn random_graph(n: usize, p: f64, seed: u64) -> Result<Graph> {
    check_probability(p)?;
    let mut r = rng(seed);
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            if r.gen_bool(p) {
                edges.push((u, v));
            }
        }
    }
    Graph::new(n, &edges)
}

/// Sides `A = 0..n` and `B = n..2n`; each cross pair independently with probability `p`.
pub fn random_bipartite(n: usize, p: f64, seed: u64) -> Result<(Graph, Bipartition)> {
    check_probability(p)?;
    let mut r = rng(seed);
    let mut edges = Vec::new();
    for a in 0..n {
        for b in n..2 * n {
            if r.gen_bool(p) {
                edges.push((a, b));
            }
        }
    }
    let bip = Bipartition {
        side_a: (0..n).collect(),
        side_b: (n..2 * n).collect(),
    };
    Ok((Graph::new(2 * n, &edges)?, bip))
}

/// A random k-tree on `n` vertices with shuffled labels: a `(k+1)`-clique,
/// then each new vertex joined to a uniformly chosen existing `k`-clique.
/// For `n <= k + 1` this is the complete graph.
pub fn random_k_tree(n: usize, k: usize, seed: u64) -> Result<Graph> {
    if k == 0 {
        return Err(Error::InvalidArgument("k-trees need k >= 1".into()));
    }
    let mut r = rng(seed);
    let base = n.min(k + 1);
    let mut edges = Vec::new();
    for u in 0..base {
        for v in u + 1..base {
            edges.push((u, v));
        }
    }
    let mut cliques: Vec<Vec<usize>> = Vec::new();
    if n > k {
        for skip in 0..=k {
            cliques.push((0..=k).filter(|&v| v != skip).collect());
        }
    }
    for v in base..n {
        let c = cliques[r.gen_range(0..cliques.len())].clone();
        edges.extend(c.iter().map(|&u| (u, v)));
        for i in 0..c.len() {
            let mut next = c.clone();
            next[i] = v;
            next.sort_unstable();
            cliques.push(next);
        }
    }
    let mut label: Vec<usize> = (0..n).collect();
    label.shuffle(&mut r);
    let edges: Vec<_> = edges.iter().map(|&(u, v)| (label[u], label[v])).collect();
    Graph::new(n, &edges)
}

/// Parameters of a batch of random bipartite instances.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ExperimentConfig {
    pub t: usize,
    pub p: f64,
    pub seed: u64,
    pub samples: usize,
    /// Also run the induced `K_{t,t}` search over all vertex sets.
    pub strict: bool,
}

impl ExperimentConfig {
    pub fn new(t: usize, seed: u64, samples: usize) -> Self {
        ExperimentConfig {
            t,
            p: 0.5,
            seed,
            samples,
            strict: false,
        }
    }

    /// Seed of sample `i`, derived from the master seed only.
    pub fn sample_seed(&self, i: usize) -> u64 {
        self.seed.wrapping_add(i as u64)
    }
}

/// `⌊2^{t/3}⌋`, the side size of the random construction.
pub fn lemma51_side(t: usize) -> usize {
    let cube = BigUint::from(2u32).pow(t as u32).cbrt();
    cube.to_usize().expect("side size fits in usize")
}

pub fn lemma51_instance(t: usize, seed: u64) -> Result<(Graph, Bipartition)> {
    random_bipartite(lemma51_side(t), 0.5, seed)
}

/// The three properties of a random bipartite instance, with a witness for
/// each failure.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PropertyReport {
    pub t: usize,
    /// (i) no `K_{t,t}` with one part in each side.
    pub biclique_free: bool,
    /// (ii) every `X ⊆ A`, `Y ⊆ B` with `|X| = |Y| = t` has an edge between them.
    pub co_biclique_free: bool,
    /// (iii) no induced matching with `t` edges.
    pub no_t_matching: bool,
    pub biclique: Option<Biclique>,
    /// `X × Y` with no edge between the parts.
    pub co_biclique: Option<Biclique>,
    pub matching: Option<Matching>,
    /// Strict check of (i) over all vertex sets, induced, when requested.
    pub strict_biclique_free: Option<bool>,
}

impl PropertyReport {
    pub fn all_hold(&self) -> bool {
        self.biclique_free && self.co_biclique_free && self.no_t_matching
    }

    /// Re-checks every witness against `g`.
    pub fn witnesses_verify(&self, g: &Graph, bip: &Bipartition) -> bool {
        let on_sides = |b: &Biclique| {
            b.left.len() == self.t
                && b.right.len() == self.t
                && b.left.iter().all(|v| bip.side_a.contains(v))
                && b.right.iter().all(|v| bip.side_b.contains(v))
        };
        let bic = self
            .biclique
            .as_ref()
            .is_none_or(|b| on_sides(b) && b.verify(g, BicliqueMode::Induced));
        let co = self.co_biclique.as_ref().is_none_or(|b| {
            on_sides(b)
                && b.left
                    .iter()
                    .all(|&x| b.right.iter().all(|&y| !g.has_edge(x, y)))
        });
        let mat = self
            .matching
            .as_ref()
            .is_none_or(|m| m.len() == self.t && crate::graph::is_induced_matching(g, m));
        bic && co && mat
    }
}

pub fn check_three_properties(g: &Graph, bip: &Bipartition, t: usize) -> Result<PropertyReport> {
    check_three_properties_with(g, bip, t, false)
}

/// As [`check_three_properties`]; with `strict` also searches for an induced
/// `K_{t,t}` anywhere in the graph.
pub fn check_three_properties_with(
    g: &Graph,
    bip: &Bipartition,
    t: usize,
    strict: bool,
) -> Result<PropertyReport> {
    if t == 0 {
        return Err(Error::InvalidArgument("t must be at least 1".into()));
    }
    if !bip.is_valid_for(g) {
        return Err(Error::InvalidArgument(
            "sides do not form a bipartition".into(),
        ));
    }
    let adj = g.masks()?;
    let biclique = find_side_biclique(g, bip, t)?;
    let co_biclique = co_biclique(g, bip, t);
    let edges: Vec<_> = g.edges().collect();
    let found = bits::max_induced_matching(&adj, &edges, bits::full(g.vertex_count()), t);
    let matching = (found.len() >= t).then(|| Matching::new(found));
    let strict_biclique_free = if strict {
        Some(find_biclique(g, t, BicliqueMode::Induced)?.is_none())
    } else {
        None
    };
    Ok(PropertyReport {
        t,
        biclique_free: biclique.is_none(),
        co_biclique_free: co_biclique.is_none(),
        no_t_matching: matching.is_none(),
        biclique,
        co_biclique,
        matching,
        strict_biclique_free,
    })
}

fn co_biclique(g: &Graph, bip: &Bipartition, t: usize) -> Option<Biclique> {
    let left: Vec<usize> = bip.side_a.iter().copied().collect();
    let right: Vec<usize> = bip.side_b.iter().copied().collect();
    side_biclique(&left, &right, t, |v| {
        right
            .iter()
            .copied()
            .filter(|&w| !g.has_edge(v, w))
            .collect()
    })
}

/// A removed set and a split of the rest into two parts with no edge between them.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PartitionWitness {
    pub removed: VertexSet,
    pub part_w: VertexSet,
    pub part_z: VertexSet,
}

impl PartitionWitness {
    pub fn verify(&self, g: &Graph) -> bool {
        let disjoint = self.removed.is_disjoint(&self.part_w)
            && self.removed.is_disjoint(&self.part_z)
            && self.part_w.is_disjoint(&self.part_z);
        let covers = self.removed.len() + self.part_w.len() + self.part_z.len() == g.vertex_count()
            && [&self.removed, &self.part_w, &self.part_z]
                .iter()
                .all(|s| g.check_set(s).is_ok());
        let separated = self
            .part_w
            .iter()
            .all(|&w| g.neighbors(w).iter().all(|z| !self.part_z.contains(z)));
        disjoint && covers && separated
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum LowerBoundOutcome {
    /// `n - 2t <= 0`: the argument gives nothing.
    Vacuous,
    /// No removed set smaller than `n - 2t` splits the rest into two parts of
    /// size at least `2t`, and none is a balanced separator.
    Certified,
    /// A removed set smaller than `n - 2t` with a `2t`/`2t` split.
    Partition { witness: PartitionWitness },
    /// A balanced separator smaller than `n - 2t`.
    SmallSeparator { separator: VertexSet },
}

/// A lower bound on the tree-independence number together with its justification.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SeparatorBound {
    pub t: usize,
    /// Side size `n`.
    pub side: usize,
    /// `n - 2t`, the separator size below which nothing separates.
    pub separator_limit: i64,
    /// `⌈(n - 2t)/2⌉` when certified, otherwise 0.
    pub bound: usize,
    /// Removed sets examined.
    pub checked: u64,
    pub outcome: LowerBoundOutcome,
}

fn binomial(n: u64, k: u64) -> u64 {
    (0..k).fold(1u64, |acc, i| acc.saturating_mul(n - i) / (i + 1))
}

/// Certifies `treeα(G) >= ⌈(n - 2t)/2⌉` for a bipartite graph with sides of
/// size `n` in which every pair of `t`-subsets from opposite sides has an
/// edge between them. Every removed set `S` with `|S| < n - 2t` is enumerated:
/// none may leave two edge-free parts of size at least `2t`, and none may be a
/// balanced separator. Some bag of any decomposition is a balanced separator,
/// so some bag has at least `n - 2t` vertices and, the graph being bipartite,
/// an independent subset of half that size.
pub fn separator_lower_bound(g: &Graph, bip: &Bipartition, t: usize) -> Result<SeparatorBound> {
    if t == 0 {
        return Err(Error::InvalidArgument("t must be at least 1".into()));
    }
    if !bip.is_valid_for(g) || bip.side_a.len() != bip.side_b.len() {
        return Err(Error::InvalidArgument(
            "sides must form a bipartition with equal sizes".into(),
        ));
    }
    if let Some(w) = co_biclique(g, bip, t) {
        return Err(Error::InvalidArgument(format!(
            "precondition fails: no edge between the {t}-subsets {w}"
        )));
    }
    let n = bip.side_a.len();
    let limit = n as i64 - 2 * t as i64;
    let mut report = SeparatorBound {
        t,
        side: n,
        separator_limit: limit,
        bound: 0,
        checked: 0,
        outcome: LowerBoundOutcome::Vacuous,
    };
    if limit <= 0 {
        return Ok(report);
    }
    let total = g.vertex_count();
    let limit = limit as usize;
    let sets: u64 = (0..limit as u64)
        .map(|k| binomial(total as u64, k))
        .fold(0u64, u64::saturating_add);
    if sets > SEPARATOR_ENUMERATION_LIMIT {
        return Err(Error::TooLarge {
            what: "separator enumeration",
            size: sets.min(usize::MAX as u64) as usize,
            limit: SEPARATOR_ENUMERATION_LIMIT as usize,
        });
    }
    for k in 0..limit {
        let mut chosen = Vec::with_capacity(k);
        if let Some(outcome) = scan_removed(g, t, k, 0, &mut chosen, &mut report.checked) {
            report.outcome = outcome;
            return Ok(report);
        }
    }
    report.bound = limit.div_ceil(2);
    report.outcome = LowerBoundOutcome::Certified;
    Ok(report)
}

fn scan_removed(
    g: &Graph,
    t: usize,
    k: usize,
    from: usize,
    chosen: &mut Vec<usize>,
    checked: &mut u64,
) -> Option<LowerBoundOutcome> {
    if chosen.len() == k {
        *checked += 1;
        let removed: VertexSet = chosen.iter().copied().collect();
        if let Some(witness) = two_sided_split(g, &removed, 2 * t) {
            return Some(LowerBoundOutcome::Partition { witness });
        }
        if g.is_balanced_separator(&removed) {
            return Some(LowerBoundOutcome::SmallSeparator { separator: removed });
        }
        return None;
    }
    for v in from..g.vertex_count() {
        if g.vertex_count() - v < k - chosen.len() {
            break;
        }
        chosen.push(v);
        let found = scan_removed(g, t, k, v + 1, chosen, checked);
        chosen.pop();
        if found.is_some() {
            return found;
        }
    }
    None
}

/// Groups the components of `G - removed` into two sides of size at least
/// `min` each, by subset sum over component sizes.
fn two_sided_split(g: &Graph, removed: &VertexSet, min: usize) -> Option<PartitionWitness> {
    let comps = g.components_without(removed);
    let rest: usize = comps.iter().map(Vec::len).sum();
    if comps.len() < 2 || rest < 2 * min {
        return None;
    }
    // via[s] = component index that first reached sum s
    let mut via: Vec<Option<usize>> = vec![None; rest + 1];
    let mut reach = vec![false; rest + 1];
    reach[0] = true;
    for (i, c) in comps.iter().enumerate() {
        for s in (c.len()..=rest).rev() {
            if !reach[s] && reach[s - c.len()] {
                reach[s] = true;
                via[s] = Some(i);
            }
        }
    }
    let target = (min..=rest - min).find(|&s| reach[s])?;
    let mut part_w = VertexSet::new();
    let mut s = target;
    while s > 0 {
        let i = via[s].expect("reachable sums have a last component");
        part_w.extend(comps[i].iter().copied());
        s -= comps[i].len();
    }
    let part_z = comps
        .iter()
        .flatten()
        .copied()
        .filter(|v| !part_w.contains(v))
        .collect();
    Some(PartitionWitness {
        removed: removed.clone(),
        part_w,
        part_z,
    })
}

/// One instance of a batch run.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Lemma51Record {
    pub seed: u64,
    pub t: usize,
    pub side: usize,
    pub edges: usize,
    pub properties: PropertyReport,
    /// Present when property (ii) holds and the enumeration was feasible.
    pub lower_bound: Option<SeparatorBound>,
    pub note: Option<String>,
}

pub fn lemma51_record(t: usize, seed: u64, strict: bool) -> Result<Lemma51Record> {
    let (g, bip) = lemma51_instance(t, seed)?;
    let properties = check_three_properties_with(&g, &bip, t, strict)?;
    let (lower_bound, note) = if !properties.co_biclique_free {
        (None, Some("property (ii) fails; no bound".to_string()))
    } else {
        match separator_lower_bound(&g, &bip, t) {
            Ok(b) => (Some(b), None),
            Err(e @ Error::TooLarge { .. }) => (None, Some(e.to_string())),
            Err(e) => return Err(e),
        }
    };
    Ok(Lemma51Record {
        seed,
        t,
        side: bip.side_a.len(),
        edges: g.edge_count(),
        properties,
        lower_bound,
        note,
    })
}

pub fn lemma51_batch(config: &ExperimentConfig) -> Result<Vec<Lemma51Record>> {
    check_probability(config.p)?;
    (0..config.samples)
        .map(|i| lemma51_record(config.t, config.sample_seed(i), config.strict))
        .collect()
}

/// Exhaustive results for one vertex count.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct KstRow {
    pub n: usize,
    pub graphs: u64,
    /// Most edges in a `K_{t,t}`-subgraph-free graph on `n` vertices.
    pub max_free_edges: usize,
    pub bound: f64,
    /// Edge lists of free graphs exceeding the bound.
    pub violations: Vec<Vec<(usize, usize)>>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct KstReport {
    pub max_n: usize,
    pub t: usize,
    pub rows: Vec<KstRow>,
}

impl KstReport {
    pub fn violation_count(&self) -> usize {
        self.rows.iter().map(|r| r.violations.len()).sum()
    }
}

/// Runs over every labelled graph on `1..=max_n` vertices and checks the
/// Kővári–Sós–Turán bound on those without a `K_{t,t}` subgraph.
pub fn kst_exhaustive_check(max_n: usize, t: usize) -> Result<KstReport> {
    if t == 0 {
        return Err(Error::InvalidArgument("t must be at least 1".into()));
    }
    if max_n > KST_MAX_N {
        return Err(Error::TooLarge {
            what: "exhaustive graph enumeration",
            size: max_n,
            limit: KST_MAX_N,
        });
    }
    let mut rows = Vec::new();
    for n in 1..=max_n {
        let pairs: Vec<(usize, usize)> = (0..n)
            .flat_map(|u| (u + 1..n).map(move |v| (u, v)))
            .collect();
        let mut row = KstRow {
            n,
            graphs: 0,
            max_free_edges: 0,
            bound: kst_edge_bound(n as u64, t as u32),
            violations: Vec::new(),
        };
        let all = bits::full(n);
        let within_bound: Vec<bool> = (0..=pairs.len())
            .map(|m| kst_bound_holds(n as u64, t as u32, m as u64))
            .collect();
        for code in 0u32..1 << pairs.len() {
            row.graphs += 1;
            let m = code.count_ones() as usize;
            let within = within_bound[m];
            // Only graphs that could raise the maximum or break the bound need the search.
            if m <= row.max_free_edges && within {
                continue;
            }
            let mut adj = vec![0 as bits::Mask; n];
            for (i, &(u, v)) in pairs.iter().enumerate() {
                if code >> i & 1 == 1 {
                    adj[u] |= bits::bit(v);
                    adj[v] |= bits::bit(u);
                }
            }
            if bits::find_biclique(&adj, all, all, t, false).is_some() {
                continue;
            }
            row.max_free_edges = row.max_free_edges.max(m);
            if !within {
                row.violations.push(
                    pairs
                        .iter()
                        .enumerate()
                        .filter(|(i, _)| code >> i & 1 == 1)
                        .map(|(_, &e)| e)
                        .collect(),
                );
            }
        }
        rows.push(row);
    }
    Ok(KstReport { max_n, t, rows })
}
