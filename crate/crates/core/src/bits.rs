//! Fixed-width vertex masks and the exponential kernels that run on them.
//!
//! Everything here assumes at most [`MASK_BITS`] vertices; callers go through
//! [`crate::Graph::masks`], which enforces that.

pub(crate) type Mask = u128;

pub(crate) const MASK_BITS: usize = Mask::BITS as usize;

#[inline]
pub(crate) fn bit(v: usize) -> Mask {
    1 << v
}

#[inline]
pub(crate) fn count(m: Mask) -> usize {
    m.count_ones() as usize
}

pub(crate) fn full(n: usize) -> Mask {
    if n == MASK_BITS {
        Mask::MAX
    } else {
        bit(n) - 1
    }
}

/// Iterates set bits in increasing order.
#[derive(Clone, Copy)]
pub(crate) struct Ones(Mask);

impl Iterator for Ones {
    type Item = usize;

    #[inline]
    fn next(&mut self) -> Option<usize> {
        if self.0 == 0 {
            return None;
        }
        let v = self.0.trailing_zeros() as usize;
        self.0 &= self.0 - 1;
        Some(v)
    }
}

#[inline]
pub(crate) fn ones(m: Mask) -> Ones {
    Ones(m)
}

pub(crate) fn from_iter<I: IntoIterator<Item = usize>>(it: I) -> Mask {
    it.into_iter().fold(0, |m, v| m | bit(v))
}

/// A maximum independent set of `adj` restricted to `cand`.
///
/// Branch and bound: degree <= 1 vertices are taken outright, otherwise branch
/// on a maximum-degree vertex (lowest index on ties).
pub(crate) fn max_independent(adj: &[Mask], cand: Mask) -> Mask {
    let mut best = 0;
    mis_rec(adj, cand, 0, &mut best);
    best
}

pub(crate) fn alpha(adj: &[Mask], cand: Mask) -> usize {
    count(max_independent(adj, cand))
}

fn mis_rec(adj: &[Mask], mut cand: Mask, mut cur: Mask, best: &mut Mask) {
    loop {
        if count(cur) + count(cand) <= count(*best) {
            return;
        }
        if cand == 0 {
            *best = cur;
            return;
        }
        let mut pick = None;
        let mut branch = (0, 0usize);
        for v in ones(cand) {
            let d = count(adj[v] & cand);
            if d <= 1 {
                pick = Some(v);
                break;
            }
            if d > branch.1 {
                branch = (v, d);
            }
        }
        match pick {
            Some(v) => {
                cur |= bit(v);
                cand &= !(adj[v] | bit(v));
            }
            None => {
                let v = branch.0;
                mis_rec(adj, cand & !(adj[v] | bit(v)), cur | bit(v), best);
                cand &= !bit(v);
            }
        }
    }
}

/// Lexicographically smallest (as a sorted vertex list) maximum independent
/// set inside `cand`.
pub(crate) fn canonical_max_independent(adj: &[Mask], cand: Mask) -> Mask {
    let mut need = alpha(adj, cand);
    let mut rest = cand;
    let mut chosen = 0;
    for v in ones(cand) {
        if need == 0 {
            break;
        }
        if rest & bit(v) == 0 {
            continue;
        }
        let after = rest & !(adj[v] | bit(v));
        if 1 + alpha(adj, after) == need {
            chosen |= bit(v);
            rest = after;
            need -= 1;
        } else {
            rest &= !bit(v);
        }
    }
    chosen
}

/// Maximum induced matching among `edges` (each `(u, v)` with `u < v`), all of
/// whose edges meet `target`. Edges not meeting `target` are ignored. Stops
/// early once `stop_at` edges are found.
pub(crate) fn max_induced_matching(
    adj: &[Mask],
    edges: &[(usize, usize)],
    target: Mask,
    stop_at: usize,
) -> Vec<(usize, usize)> {
    let avail: Vec<(usize, usize)> = edges
        .iter()
        .copied()
        .filter(|&(u, v)| (bit(u) | bit(v)) & target != 0)
        .collect();
    let mut best = Vec::new();
    let mut cur = Vec::new();
    im_rec(adj, &avail, target, stop_at, &mut cur, &mut best);
    best
}

fn im_rec(
    adj: &[Mask],
    avail: &[(usize, usize)],
    target: Mask,
    stop_at: usize,
    cur: &mut Vec<(usize, usize)>,
    best: &mut Vec<(usize, usize)>,
) {
    if cur.len() > best.len() {
        best.clone_from(cur);
    }
    if best.len() >= stop_at || avail.is_empty() {
        return;
    }
    let ends = avail.iter().fold(0, |m, &(u, v)| m | bit(u) | bit(v));
    // Each further edge needs two fresh endpoints, one of them in the target.
    let room = avail.len().min(count(ends) / 2).min(count(ends & target));
    if cur.len() + room <= best.len() {
        return;
    }
    let (u, v) = avail[0];
    let blocked = adj[u] | adj[v] | bit(u) | bit(v);
    let rest: Vec<(usize, usize)> = avail[1..]
        .iter()
        .copied()
        .filter(|&(a, b)| (bit(a) | bit(b)) & blocked == 0)
        .collect();
    cur.push((u, v));
    im_rec(adj, &rest, target, stop_at, cur, best);
    cur.pop();
    if best.len() >= stop_at {
        return;
    }
    im_rec(adj, &avail[1..], target, stop_at, cur, best);
}

/// Finds `P ⊆ left_side`, `Q ⊆ right_side`, `|P| = |Q| = t`, with every `P`–`Q`
/// pair adjacent. With `independent_parts`, `P` and `Q` must also be
/// independent. `P` is the lexicographically first feasible t-subset.
pub(crate) fn find_biclique(
    adj: &[Mask],
    left_side: Mask,
    right_side: Mask,
    t: usize,
    independent_parts: bool,
) -> Option<(Mask, Mask)> {
    if t == 0 {
        return Some((0, 0));
    }
    let cands: Vec<usize> = ones(left_side).collect();
    biclique_rec(adj, &cands, 0, 0, right_side, t, independent_parts)
}

fn biclique_rec(
    adj: &[Mask],
    cands: &[usize],
    from: usize,
    chosen: Mask,
    common: Mask,
    t: usize,
    independent_parts: bool,
) -> Option<(Mask, Mask)> {
    let have = count(chosen);
    if have == t {
        let q = if independent_parts {
            let q = max_independent(adj, common);
            if count(q) < t {
                return None;
            }
            q
        } else {
            common
        };
        let q = ones(q).take(t).fold(0, |m, v| m | bit(v));
        return Some((chosen, q));
    }
    let need = t - have;
    for i in from..cands.len() {
        if cands.len() - i < need {
            break;
        }
        let p = cands[i];
        if independent_parts && adj[p] & chosen != 0 {
            continue;
        }
        let next = common & adj[p];
        if count(next) < t {
            continue;
        }
        if let Some(found) = biclique_rec(
            adj,
            cands,
            i + 1,
            chosen | bit(p),
            next,
            t,
            independent_parts,
        ) {
            return Some(found);
        }
    }
    None
}
