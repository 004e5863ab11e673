//! Rebuilding a decomposition of bounded induced-matching width into one of
//! bounded independence width: vertices of a maximum independent set with a
//! small neighbourhood ("light") are pulled out of the bags into private
//! leaves, and their neighbourhoods are pushed into the bags instead.

use std::collections::BTreeMap;

use num_bigint::BigUint;
use serde::Serialize;

use crate::decomposition::{
    alpha_of_decomposition, mu_of_decomposition, validate, MeasureReport, MeasureWitness,
    TreeDecomposition, Violation,
};
use crate::error::{Error, Result};
use crate::extraction::{big_to_string, threshold_k, Thresholds};
use crate::graph::{
    find_biclique, independence_number, max_independent_set, BicliqueMode, Graph, VertexSet,
};

/// The independent set, its light/heavy split and where each light vertex's
/// leaf hangs.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TransformState {
    pub s: VertexSet,
    #[serde(serialize_with = "big_to_string")]
    pub light_threshold: BigUint,
    pub s_light: VertexSet,
    pub s_heavy: VertexSet,
    /// Light vertex → lowest-id node whose bag contains it.
    pub attach: BTreeMap<usize, usize>,
    /// Light vertex → id of its new leaf in the transformed decomposition.
    pub leaves: BTreeMap<usize, usize>,
}

impl TransformState {
    /// Classifies `s` against `c` and fixes attach points and leaf ids for `td`.
    pub fn new(g: &Graph, td: &TreeDecomposition, s: VertexSet, c: BigUint) -> Result<Self> {
        let (s_light, s_heavy) = classify_light_heavy(g, &s, &c)?;
        let mut attach = BTreeMap::new();
        let mut leaves = BTreeMap::new();
        for (i, &v) in s_light.iter().enumerate() {
            let node = td.subtree_of_vertex(v).first().copied().ok_or_else(|| {
                Error::InvalidArgument(format!("light vertex {v} appears in no bag"))
            })?;
            attach.insert(v, node);
            leaves.insert(v, td.node_count() + i);
        }
        Ok(TransformState {
            s,
            light_threshold: c,
            s_light,
            s_heavy,
            attach,
            leaves,
        })
    }

    fn check(&self, g: &Graph, td: &TreeDecomposition) -> Result<()> {
        g.check_set(&self.s)?;
        let inconsistent = |msg: String| Err(Error::InvalidArgument(msg));
        if !g.is_independent_set(&self.s) {
            return inconsistent("S is not independent".into());
        }
        if !self.s_light.is_disjoint(&self.s_heavy)
            || self
                .s_light
                .union(&self.s_heavy)
                .copied()
                .collect::<VertexSet>()
                != self.s
        {
            return inconsistent("light and heavy sets do not partition S".into());
        }
        if self.attach.keys().ne(self.s_light.iter()) || self.leaves.keys().ne(self.s_light.iter())
        {
            return inconsistent("attach points and leaves must cover exactly S_light".into());
        }
        for (&v, &x) in &self.attach {
            if x >= td.node_count() || !td.bag(x).contains(&v) {
                return inconsistent(format!("attach node {x} of light vertex {v} misses it"));
            }
        }
        let expected = td.node_count()..td.node_count() + self.s_light.len();
        if !self.leaves.values().copied().eq(expected) {
            return inconsistent("leaf ids must follow the existing nodes in vertex order".into());
        }
        Ok(())
    }
}

/// Splits `s` into vertices with `α(N(v)) < c` and the rest.
pub fn classify_light_heavy(
    g: &Graph,
    s: &VertexSet,
    c: &BigUint,
) -> Result<(VertexSet, VertexSet)> {
    g.check_set(s)?;
    if !g.is_independent_set(s) {
        return Err(Error::InvalidArgument("S is not independent".into()));
    }
    let mut light = VertexSet::new();
    let mut heavy = VertexSet::new();
    for &v in s {
        let nbrs: VertexSet = g.neighbors(v).iter().copied().collect();
        if BigUint::from(independence_number(g, &nbrs)?) < *c {
            light.insert(v);
        } else {
            heavy.insert(v);
        }
    }
    Ok((light, heavy))
}

/// Old nodes keep their ids and get `(β(x) ∖ S_ℓ) ∪ N(β(x) ∩ S_ℓ)`; each light
/// `s` gets a leaf with bag `N[s]` hanging off its attach node.
pub fn build_transformed_decomposition(
    g: &Graph,
    td: &TreeDecomposition,
    state: &TransformState,
) -> Result<TreeDecomposition> {
    state.check(g, td)?;
    let mut out = TreeDecomposition::new(Vec::new(), td.tree_edges().to_vec());
    for bag in td.bags() {
        let light: VertexSet = bag.intersection(&state.s_light).copied().collect();
        let mut next: VertexSet = bag.difference(&light).copied().collect();
        next.extend(g.neighborhood(&light)?);
        out.push_node(next);
    }
    for (&v, &x) in &state.attach {
        let leaf = out.push_node(g.closed_neighborhood(v)?);
        debug_assert_eq!(leaf, state.leaves[&v]);
        out.push_edge(x, leaf);
    }
    Ok(out)
}

/// Per-node values of one bag bound, checked strictly: `value < bound`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ClaimReport {
    pub claim: &'static str,
    #[serde(serialize_with = "big_to_string")]
    pub bound: BigUint,
    pub values: Vec<usize>,
    /// Nodes whose value reaches the bound.
    pub violations: Vec<usize>,
}

impl ClaimReport {
    fn new(claim: &'static str, bound: &BigUint, values: Vec<usize>) -> Self {
        let violations = values
            .iter()
            .enumerate()
            .filter(|(_, &v)| BigUint::from(v) >= *bound)
            .map(|(i, _)| i)
            .collect();
        ClaimReport {
            claim,
            bound: bound.clone(),
            values,
            violations,
        }
    }

    pub fn holds(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn max_value(&self) -> usize {
        self.values.iter().copied().max().unwrap_or(0)
    }
}

fn per_node(td: &TreeDecomposition, f: impl Fn(&VertexSet) -> Result<usize>) -> Result<Vec<usize>> {
    td.bags().iter().map(f).collect()
}

/// `α(β(x) ∖ S)` for every node.
pub fn check_claim_33(
    g: &Graph,
    td: &TreeDecomposition,
    s: &VertexSet,
    bound: &BigUint,
) -> Result<ClaimReport> {
    let values = per_node(td, |bag| {
        independence_number(g, &bag.difference(s).copied().collect())
    })?;
    Ok(ClaimReport::new("outside_s", bound, values))
}

/// `α(N(β(x) ∩ S_ℓ))` for every node.
pub fn check_claim_34(
    g: &Graph,
    td: &TreeDecomposition,
    s_light: &VertexSet,
    bound: &BigUint,
) -> Result<ClaimReport> {
    let values = per_node(td, |bag| {
        let light: VertexSet = bag.intersection(s_light).copied().collect();
        independence_number(g, &g.neighborhood(&light)?)
    })?;
    Ok(ClaimReport::new("light_neighbourhood", bound, values))
}

/// `|β(x) ∩ S_h|` for every node.
pub fn check_claim_35(
    g: &Graph,
    td: &TreeDecomposition,
    s_heavy: &VertexSet,
    bound: &BigUint,
) -> Result<ClaimReport> {
    g.check_set(s_heavy)?;
    let values = per_node(td, |bag| Ok(bag.intersection(s_heavy).count()))?;
    Ok(ClaimReport::new("heavy_count", bound, values))
}

/// Everything the certified transformation establishes about one input.
#[derive(Clone, Debug, Serialize)]
pub struct PipelineReport {
    pub thresholds: Thresholds,
    /// `μ(T)` of the input decomposition.
    pub input_mu: MeasureReport,
    pub state: TransformState,
    pub outside_s: ClaimReport,
    pub light_neighbourhood: ClaimReport,
    pub heavy_count: ClaimReport,
    /// `None` when the transformed decomposition is valid.
    pub validity: Option<Violation>,
    /// `α(T′)`.
    pub alpha: MeasureReport,
    pub node_count_ok: bool,
    pub all_hold: bool,
    #[serde(skip)]
    pub transformed: TreeDecomposition,
}

/// Runs the full transformation with `c = C(μ, t)` and checks every bound:
/// the three per-node claims, validity of `T′`, `|V(T′)| = |V(T)| + |S_ℓ|`,
/// and `α(T′) < K(μ, t)`.
pub fn theorem_pipeline(
    g: &Graph,
    td: &TreeDecomposition,
    mu: u64,
    t: u32,
) -> Result<PipelineReport> {
    validate(g, td).map_err(Error::InvalidDecomposition)?;
    if t == 0 || mu == 0 {
        return Err(Error::InvalidArgument("mu and t must be at least 1".into()));
    }
    if let Some(witness) = find_biclique(g, t as usize, BicliqueMode::Induced)? {
        return Err(Error::BicliquePresent {
            t: t as usize,
            witness,
        });
    }
    let input_mu = mu_of_decomposition(g, td)?;
    if input_mu.value as u64 > mu {
        let matching = match &input_mu.witness {
            MeasureWitness::InducedMatching(m) => m.edges().to_vec(),
            MeasureWitness::IndependentSet(_) => Vec::new(),
        };
        return Err(Error::MuExceeded {
            node: input_mu.node,
            found: input_mu.value,
            bound: mu as usize,
            matching,
        });
    }

    let c = threshold_k(mu, t).light;
    transform_report(g, td, mu, t, c, input_mu)
}

/// The transformation with an arbitrary light/heavy cut-off `c` and no
/// precondition checks; claim bounds still use the constants for `(μ, t)`, so
/// with `c ≠ C(μ, t)` or an input outside the hypotheses they may fail.
pub fn transform_with_threshold(
    g: &Graph,
    td: &TreeDecomposition,
    mu: u64,
    t: u32,
    c: BigUint,
) -> Result<PipelineReport> {
    validate(g, td).map_err(Error::InvalidDecomposition)?;
    let input_mu = mu_of_decomposition(g, td)?;
    transform_report(g, td, mu, t, c, input_mu)
}

fn transform_report(
    g: &Graph,
    td: &TreeDecomposition,
    mu: u64,
    t: u32,
    c: BigUint,
    input_mu: MeasureReport,
) -> Result<PipelineReport> {
    let thresholds = threshold_k(mu, t);
    let s = max_independent_set(g)?;
    let state = TransformState::new(g, td, s, c)?;
    let transformed = build_transformed_decomposition(g, td, &state)?;

    let outside_s = check_claim_33(g, td, &state.s, &thresholds.matching)?;
    let light_bound = &thresholds.light * mu;
    let light_neighbourhood = check_claim_34(g, td, &state.s_light, &light_bound)?;
    let heavy_count = check_claim_35(g, td, &state.s_heavy, &thresholds.matching)?;
    let validity = validate(g, &transformed).err();
    let alpha = alpha_of_decomposition(g, &transformed)?;
    let node_count_ok = transformed.node_count() == td.node_count() + state.s_light.len();

    let all_hold = outside_s.holds()
        && light_neighbourhood.holds()
        && heavy_count.holds()
        && validity.is_none()
        && node_count_ok
        && BigUint::from(alpha.value) < thresholds.width;
    Ok(PipelineReport {
        thresholds,
        input_mu,
        state,
        outside_s,
        light_neighbourhood,
        heavy_count,
        validity,
        alpha,
        node_count_ok,
        all_hold,
        transformed,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::families::*;
    use crate::solver::{elimination_to_decomposition, EliminationOrdering};

    fn set(v: &[usize]) -> VertexSet {
        v.iter().copied().collect()
    }

    fn big(v: u32) -> BigUint {
        BigUint::from(v)
    }

    #[test]
    fn classify_examples() {
        let star = complete_bipartite(1, 4);
        let leaves = set(&[1, 2, 3, 4]);
        assert_eq!(
            classify_light_heavy(&star, &leaves, &big(2)).unwrap(),
            (leaves.clone(), VertexSet::new())
        );
        assert_eq!(
            classify_light_heavy(&star, &leaves, &big(1)).unwrap(),
            (VertexSet::new(), leaves)
        );
        let c5 = cycle(5);
        let s = set(&[0, 2]);
        assert_eq!(
            classify_light_heavy(&c5, &s, &big(2)).unwrap(),
            (VertexSet::new(), s.clone())
        );
        assert_eq!(
            classify_light_heavy(&c5, &s, &big(3)).unwrap(),
            (s, VertexSet::new())
        );
        assert!(classify_light_heavy(&c5, &set(&[0, 1]), &big(3)).is_err());
    }

    #[test]
    fn single_edge_transform() {
        let g = path(2);
        let td = TreeDecomposition::trivial(&g);
        let state = TransformState::new(&g, &td, set(&[0]), big(5)).unwrap();
        let out = build_transformed_decomposition(&g, &td, &state).unwrap();
        assert_eq!(out.bags(), &[set(&[1]), set(&[0, 1])]);
        assert_eq!(out.tree_edges(), &[(0, 1)]);
        assert!(validate(&g, &out).is_ok());
        let r = check_claim_34(&g, &td, &state.s_light, &big(5)).unwrap();
        assert_eq!(r.values, vec![1]);
    }

    #[test]
    fn no_light_vertices_leaves_td_alone() {
        let g = cycle(6);
        let td = TreeDecomposition::trivial(&g);
        let state = TransformState::new(&g, &td, set(&[0, 2, 4]), big(0)).unwrap();
        assert!(state.s_light.is_empty());
        let out = build_transformed_decomposition(&g, &td, &state).unwrap();
        assert_eq!(out, td);
    }

    #[test]
    fn path_three_transform() {
        let g = path(3);
        let td = TreeDecomposition::trivial(&g);
        let state = TransformState::new(&g, &td, set(&[0, 2]), big(2)).unwrap();
        assert_eq!(state.s_light, set(&[0, 2]));
        let out = build_transformed_decomposition(&g, &td, &state).unwrap();
        assert_eq!(out.bags(), &[set(&[1]), set(&[0, 1]), set(&[1, 2])]);
        assert!(validate(&g, &out).is_ok());
        let r = check_claim_34(&g, &td, &state.s_light, &big(2)).unwrap();
        assert_eq!(r.values, vec![1]);
    }

    #[test]
    fn claim_checkers_on_small_cases() {
        let c4 = cycle(4);
        let td = TreeDecomposition::trivial(&c4);
        let s = max_independent_set(&c4).unwrap();
        // removing {0, 2} leaves the non-adjacent pair {1, 3}
        assert!(!c4.has_edge(1, 3));
        assert_eq!(
            check_claim_33(&c4, &td, &s, &big(3)).unwrap().values,
            vec![2]
        );
        let all = c4.vertices();
        assert_eq!(
            check_claim_33(&c4, &td, &all, &big(1)).unwrap().values,
            vec![0]
        );
        let edgeless = Graph::empty(4);
        let td0 = TreeDecomposition::trivial(&edgeless);
        let s0 = max_independent_set(&edgeless).unwrap();
        assert_eq!(
            check_claim_33(&edgeless, &td0, &s0, &big(1))
                .unwrap()
                .values,
            vec![0]
        );

        let k33 = complete_bipartite(3, 3);
        let td = TreeDecomposition::trivial(&k33);
        let s = max_independent_set(&k33).unwrap();
        let state = TransformState::new(&k33, &td, s.clone(), big(1)).unwrap();
        assert_eq!(state.s_heavy, s);
        let r = check_claim_35(&k33, &td, &state.s_heavy, &big(3)).unwrap();
        assert_eq!(r.values, vec![3]);
        assert_eq!(r.violations, vec![0]);
        assert!(!r.holds());
        let r = check_claim_35(&k33, &td, &VertexSet::new(), &big(1)).unwrap();
        assert_eq!(r.values, vec![0]);
    }

    #[test]
    fn inconsistent_state_is_rejected() {
        let g = path(3);
        let td = TreeDecomposition::trivial(&g);
        let mut state = TransformState::new(&g, &td, set(&[0, 2]), big(2)).unwrap();
        state.attach.insert(0, 7);
        assert!(build_transformed_decomposition(&g, &td, &state).is_err());
        // a light vertex missing from every bag
        let td = TreeDecomposition::new(vec![set(&[0, 1]), set(&[1])], vec![(0, 1)]);
        assert!(TransformState::new(&g, &td, set(&[0, 2]), big(2)).is_err());
    }

    #[test]
    fn pipeline_examples() {
        let edge = path(2);
        let err = theorem_pipeline(&edge, &TreeDecomposition::trivial(&edge), 1, 1).unwrap_err();
        assert!(matches!(err, Error::BicliquePresent { t: 1, .. }));

        let c5 = cycle(5);
        let r = theorem_pipeline(&c5, &TreeDecomposition::trivial(&c5), 2, 2).unwrap();
        assert!(r.all_hold, "{r:?}");
        assert!(validate(&c5, &r.transformed).is_ok());

        let k33 = complete_bipartite(3, 3);
        let r = theorem_pipeline(&k33, &TreeDecomposition::trivial(&k33), 1, 4).unwrap();
        assert!(r.all_hold);
        assert_eq!(r.transformed.node_count(), 1 + r.state.s_light.len());

        let empty = Graph::empty(3);
        let err = theorem_pipeline(&empty, &TreeDecomposition::trivial(&empty), 0, 2).unwrap_err();
        assert!(matches!(err, Error::InvalidArgument(_)));
        assert!(
            theorem_pipeline(&empty, &TreeDecomposition::trivial(&empty), 1, 2)
                .unwrap()
                .all_hold
        );
    }

    #[test]
    fn explicit_threshold_skips_preconditions() {
        let edge = path(2);
        let td = TreeDecomposition::trivial(&edge);
        let r = transform_with_threshold(&edge, &td, 1, 1, big(2)).unwrap();
        assert_eq!(r.state.s_light, set(&[0]));
        assert!(r.validity.is_none());
        assert!(r.all_hold);
    }

    #[test]
    fn pipeline_rejects_large_mu() {
        // two far-apart edges in one bag give μ = 2
        let g = Graph::new(6, &[(0, 1), (3, 4), (1, 2)]).unwrap();
        let err = theorem_pipeline(&g, &TreeDecomposition::trivial(&g), 1, 2).unwrap_err();
        match err {
            Error::MuExceeded {
                found,
                bound,
                matching,
                ..
            } => {
                assert_eq!((found, bound), (2, 1));
                assert_eq!(matching.len(), 2);
            }
            other => panic!("{other}"),
        }
    }

    #[test]
    fn light_vertices_only_in_their_leaf() {
        let g = petersen();
        let ord = EliminationOrdering::new((0..10).rev().collect()).unwrap();
        let td = elimination_to_decomposition(&g, &ord);
        let s = max_independent_set(&g).unwrap();
        for c in 0..=4u32 {
            let state = TransformState::new(&g, &td, s.clone(), big(c)).unwrap();
            let out = build_transformed_decomposition(&g, &td, &state).unwrap();
            assert!(validate(&g, &out).is_ok());
            assert_eq!(out.node_count(), td.node_count() + state.s_light.len());
            for &v in &state.s_light {
                assert_eq!(out.subtree_of_vertex(v), vec![state.leaves[&v]]);
            }
        }
    }
}
