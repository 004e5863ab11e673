//! Threshold constants and the two extraction procedures: an induced matching
//! out of a large matching in a biclique-free bipartite graph, and a common
//! independent transversal out of several large independent sets.

use std::fmt;

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::Zero;
use rand::seq::index;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::graph::{
    contract_matching, find_side_biclique, greedy_turan_independent_set, is_induced_matching,
    kst_threshold, Biclique, BicliqueMode, Bipartiteness, Graph, Matching, VertexSet,
};

pub(crate) fn big_to_string<S: Serializer>(v: &BigUint, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&v.to_string())
}

/// `M(s, t) = max(n_t, (12(s+1))^t)`.
pub fn threshold_m(s: &BigUint, t: u32) -> BigUint {
    let base = (s + 1u32) * 12u32;
    base.pow(t).max(BigUint::from(kst_threshold(t)))
}

/// `N(s, t, m) = max(n_t, (8 s m (m-1))^t)`.
pub fn threshold_n(s: &BigUint, t: u32, m: &BigUint) -> BigUint {
    let pairs = if m.is_zero() {
        BigUint::zero()
    } else {
        m * (m - 1u32)
    };
    let base = s * pairs * 8u32;
    base.pow(t).max(BigUint::from(kst_threshold(t)))
}

/// The constants of the width bound for parameters `(μ, t)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Thresholds {
    pub mu: u64,
    pub t: u32,
    pub n_t: u64,
    /// `M(μ, t)`.
    #[serde(serialize_with = "big_to_string")]
    pub matching: BigUint,
    /// `C(μ, t) = N(M, t, M)`, the light/heavy cut-off.
    #[serde(serialize_with = "big_to_string")]
    pub light: BigUint,
    /// `K(μ, t) = 2M + μC`, the bound on the transformed decomposition.
    #[serde(serialize_with = "big_to_string")]
    pub width: BigUint,
}

pub fn threshold_k(mu: u64, t: u32) -> Thresholds {
    let m = threshold_m(&BigUint::from(mu), t);
    let c = threshold_n(&m, t, &m);
    let k = &m * 2u32 + &c * mu;
    Thresholds {
        mu,
        t,
        n_t: kst_threshold(t),
        matching: m,
        light: c,
        width: k,
    }
}

/// `max(1, edges / vertices)` kept as a reduced fraction.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Sigma {
    pub num: usize,
    pub den: usize,
}

impl Sigma {
    pub fn of(edges: usize, vertices: usize) -> Self {
        if vertices == 0 || edges <= vertices {
            return Sigma { num: 1, den: 1 };
        }
        let g = edges.gcd(&vertices);
        Sigma {
            num: edges / g,
            den: vertices / g,
        }
    }

    pub fn as_f64(self) -> f64 {
        self.num as f64 / self.den as f64
    }
}

impl fmt::Display for Sigma {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den == 1 {
            write!(f, "{}", self.num)
        } else {
            write!(f, "{}/{}", self.num, self.den)
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum MatchingOutcome {
    /// A `K_{t,t}` among the matched vertices. `induced` records whether the
    /// witness is also induced; in a bipartite graph it always is, since a
    /// subgraph copy must put each part on one side.
    Biclique { witness: Biclique, induced: bool },
    InducedMatching {
        matching: Matching,
        /// `s + 1`.
        target: u64,
        /// Set when the input matching is smaller than `M(s, t)`, so reaching
        /// the target is not promised.
        insufficient: Option<InsufficientInput>,
    },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct InsufficientInput {
    pub matching_size: usize,
    #[serde(serialize_with = "big_to_string")]
    pub required: BigUint,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MatchingExtractionRecord {
    pub matching_size: usize,
    /// The graph obtained by contracting every matching edge; absent when a
    /// biclique ended the search first.
    pub contracted: Option<Graph>,
    pub sigma: Option<Sigma>,
    /// Whether `|result| >= n^{1/t}/12` was required to hold (the matched
    /// subgraph is `K_{t,t}`-subgraph-free and `2n >= n_t`).
    pub root_bound_checked: bool,
    pub outcome: MatchingOutcome,
}

/// Restricts `g` to the matched vertices, looks for `K_{t,t}`, and otherwise
/// contracts the matching and lifts a greedy independent set of the
/// contracted graph back to an induced matching.
pub fn extract_induced_matching(
    g: &Graph,
    matching: &Matching,
    s: u64,
    t: u32,
) -> Result<MatchingExtractionRecord> {
    if t == 0 {
        return Err(Error::InvalidArgument("t must be at least 1".into()));
    }
    if let Bipartiteness::OddCycle(odd_cycle) = g.bipartition() {
        return Err(Error::NotBipartite { odd_cycle });
    }
    matching.check(g)?;
    let n = matching.len();
    let sub = g.induced_subgraph(&matching.vertices())?;
    let local = Matching::new(
        matching
            .edges()
            .iter()
            .map(|&(u, v)| (sub.to_new[u].unwrap(), sub.to_new[v].unwrap())),
    );
    let lift = |b: Biclique| Biclique {
        left: b.left.iter().map(|&v| sub.to_old[v]).collect(),
        right: b.right.iter().map(|&v| sub.to_old[v]).collect(),
    };

    // In a bipartite graph every K_{t,t} subgraph has one part per side, so
    // the side-respecting search settles both the subgraph and induced forms.
    let sides = match sub.graph.bipartition() {
        Bipartiteness::Bipartite(b) => b,
        Bipartiteness::OddCycle(odd_cycle) => return Err(Error::NotBipartite { odd_cycle }),
    };
    if let Some(w) = find_side_biclique(&sub.graph, &sides, t as usize)? {
        let witness = lift(w);
        if !witness.verify(g, BicliqueMode::Subgraph) {
            return Err(Error::GuaranteeViolated(format!(
                "biclique witness {witness} does not verify"
            )));
        }
        let induced = witness.verify(g, BicliqueMode::Induced);
        return Ok(MatchingExtractionRecord {
            matching_size: n,
            contracted: None,
            sigma: None,
            root_bound_checked: false,
            outcome: MatchingOutcome::Biclique { witness, induced },
        });
    }

    let q = contract_matching(&sub.graph, &local)?;
    let sigma = Sigma::of(q.edge_count(), q.vertex_count());
    let chosen = greedy_turan_independent_set(&q);
    let lifted = Matching::new(chosen.iter().map(|&i| matching.edges()[i]));
    if !is_induced_matching(g, &lifted) {
        return Err(Error::GuaranteeViolated(format!(
            "lifted matching {lifted} is not induced"
        )));
    }

    let size = lifted.len();
    let root_bound_checked = 2 * n as u64 >= kst_threshold(t);
    // |lifted| >= n^{1/t} / 12  <=>  (12 |lifted|)^t >= n
    if root_bound_checked && BigUint::from(12 * size).pow(t) < BigUint::from(n) {
        return Err(Error::GuaranteeViolated(format!(
            "induced matching of size {size} from a matching of size {n} is below n^(1/{t})/12"
        )));
    }
    let required = threshold_m(&BigUint::from(s), t);
    let insufficient = if BigUint::from(n) >= required {
        if (size as u64) < s + 1 {
            return Err(Error::GuaranteeViolated(format!(
                "matching of size {n} >= M(s,t) yielded only {size} < s+1 induced edges"
            )));
        }
        None
    } else {
        Some(InsufficientInput {
            matching_size: n,
            required,
        })
    };
    Ok(MatchingExtractionRecord {
        matching_size: n,
        contracted: Some(q),
        sigma: Some(sigma),
        root_bound_checked,
        outcome: MatchingOutcome::InducedMatching {
            matching: lifted,
            target: s + 1,
            insufficient,
        },
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IndependentExtractionRecord {
    /// The successful draw `X_i ⊆ I_i`, `|X_i| = 2s`.
    pub samples: Vec<VertexSet>,
    /// `U_i ⊆ X_i` after deleting the lower endpoint of every sampled edge.
    pub survivors: Vec<VertexSet>,
    pub iterations: usize,
    /// Edges inside the union of the samples, per iteration.
    pub edge_counts: Vec<usize>,
    /// Whether every input set reached `N(s, t, m)`.
    pub meets_size_threshold: bool,
    #[serde(serialize_with = "big_to_string")]
    pub required_size: BigUint,
}

impl IndependentExtractionRecord {
    pub fn union(&self) -> VertexSet {
        self.survivors.iter().flatten().copied().collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IndependentExtractionFailure {
    pub iterations: usize,
    pub min_edges: usize,
    pub edge_counts: Vec<usize>,
    /// `(i, j, edges)`: the pair of input sets spanning the most edges.
    pub densest_pair: Option<(usize, usize, usize)>,
}

impl fmt::Display for IndependentExtractionFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "no draw with few enough edges in {} iterations (fewest {})",
            self.iterations, self.min_edges
        )?;
        if let Some((i, j, e)) = self.densest_pair {
            write!(f, "; densest pair of sets ({i}, {j}) spans {e} edges")?;
        }
        Ok(())
    }
}

/// Las Vegas search for `U_i ⊆ I_i`, `|U_i| >= s`, with independent union.
///
/// Each iteration draws `X_i ⊆ I_i` of size `2s` uniformly and independently;
/// if the union spans at most `s` edges, deleting one endpoint per edge
/// finishes. Output is always correct; only the iteration count is random.
pub fn extract_independent_sets(
    g: &Graph,
    sets: &[VertexSet],
    s: usize,
    t: u32,
    seed: u64,
    max_iterations: usize,
) -> Result<IndependentExtractionRecord> {
    if sets.is_empty() {
        return Err(Error::InvalidArgument(
            "at least one set is required".into(),
        ));
    }
    if t == 0 {
        return Err(Error::InvalidArgument("t must be at least 1".into()));
    }
    for (i, set) in sets.iter().enumerate() {
        g.check_set(set)?;
        if !g.is_independent_set(set) {
            return Err(Error::InvalidArgument(format!(
                "set {i} is not independent"
            )));
        }
        if set.len() < 2 * s {
            return Err(Error::InvalidArgument(format!(
                "set {i} has {} < 2s = {} vertices",
                set.len(),
                2 * s
            )));
        }
    }
    let required_size = threshold_n(&BigUint::from(s), t, &BigUint::from(sets.len()));
    let meets_size_threshold = sets.iter().all(|x| BigUint::from(x.len()) >= required_size);
    let members: Vec<Vec<usize>> = sets.iter().map(|x| x.iter().copied().collect()).collect();

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut edge_counts = Vec::new();
    for iteration in 1..=max_iterations {
        let samples: Vec<VertexSet> = members
            .iter()
            .map(|m| {
                index::sample(&mut rng, m.len(), 2 * s)
                    .iter()
                    .map(|i| m[i])
                    .collect()
            })
            .collect();
        let union: Vec<usize> = samples
            .iter()
            .flatten()
            .copied()
            .collect::<VertexSet>()
            .into_iter()
            .collect();
        let edges: Vec<(usize, usize)> = union
            .iter()
            .enumerate()
            .flat_map(|(i, &u)| union[i + 1..].iter().map(move |&v| (u, v)))
            .filter(|&(u, v)| g.has_edge(u, v))
            .collect();
        edge_counts.push(edges.len());
        if edges.len() > s {
            continue;
        }
        let mut removed = VertexSet::new();
        for &(u, v) in &edges {
            if !removed.contains(&u) && !removed.contains(&v) {
                removed.insert(u);
            }
        }
        let survivors: Vec<VertexSet> = samples
            .iter()
            .map(|x| x.difference(&removed).copied().collect())
            .collect();
        let record = IndependentExtractionRecord {
            samples,
            survivors,
            iterations: iteration,
            edge_counts,
            meets_size_threshold,
            required_size,
        };
        if record.survivors.iter().any(|u| u.len() < s) || !g.is_independent_set(&record.union()) {
            return Err(Error::GuaranteeViolated(
                "surviving sets are too small or not jointly independent".into(),
            ));
        }
        return Ok(record);
    }

    let densest_pair = (0..sets.len())
        .flat_map(|i| (i + 1..sets.len()).map(move |j| (i, j)))
        .map(|(i, j)| {
            let span: VertexSet = sets[i].union(&sets[j]).copied().collect();
            let e = span
                .iter()
                .map(|&u| {
                    g.neighbors(u)
                        .iter()
                        .filter(|&&w| w > u && span.contains(&w))
                        .count()
                })
                .sum::<usize>();
            (i, j, e)
        })
        .max_by_key(|&(i, j, e)| (e, std::cmp::Reverse((i, j))));
    Err(Error::ExtractionFailed(Box::new(
        IndependentExtractionFailure {
            iterations: max_iterations,
            min_edges: edge_counts.iter().copied().min().unwrap_or(0),
            edge_counts,
            densest_pair,
        },
    )))
}

/// `(24 s)^t`, an explicit envelope for `M(s, t)` once `s >= 1` and
/// `(12(s+1))^t >= n_t`.
pub fn threshold_m_upper(s: &BigUint, t: u32) -> BigUint {
    (s * 24u32).pow(t)
}
