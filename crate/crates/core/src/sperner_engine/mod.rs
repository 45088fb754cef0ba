//! Width, Sperner and strong Sperner checks, brute-force k-families and the
//! normalized matching property.
//!
//! Strong Sperner is decided by rank removal: `P` is k-Sperner for every `k`
//! exactly when each poset obtained by repeatedly deleting a largest rank is
//! Sperner.

pub mod flow;
pub mod matching;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::poset_core::{induced_covers, rank_profile, transitive_closure, GradedPoset};

use self::flow::FlowNetwork;
use self::matching::max_matching;

/// Which largest rank to delete when several tie.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TieBreak {
    #[default]
    SmallestIndex,
    LargestIndex,
}

/// Size of a largest antichain, via a maximum matching on the comparability graph.
pub fn width(p: &GradedPoset) -> usize {
    p.len() - matched_pairs(p).iter().filter(|&&v| v != usize::MAX).count()
}

fn matched_pairs(p: &GradedPoset) -> Vec<usize> {
    let c = transitive_closure(p);
    let adj: Vec<Vec<usize>> = (0..p.len()).map(|i| c.above(i).ones().collect()).collect();
    max_matching(&adj, p.len())
}

/// A chain cover of minimum size; it has exactly `width(p)` chains.
pub fn min_chain_cover(p: &GradedPoset) -> Vec<Vec<usize>> {
    let next = matched_pairs(p);
    let mut has_prev = vec![false; p.len()];
    for &v in next.iter().filter(|&&v| v != usize::MAX) {
        has_prev[v] = true;
    }
    let mut chains = Vec::new();
    for start in (0..p.len()).filter(|&i| !has_prev[i]) {
        let mut chain = vec![start];
        let mut cur = start;
        while next[cur] != usize::MAX {
            cur = next[cur];
            chain.push(cur);
        }
        chains.push(chain);
    }
    chains
}

/// Upper shadow: elements covering some member of `set`. All of `set` must lie in one rank.
pub fn shade(p: &GradedPoset, set: &[usize]) -> Result<Vec<usize>> {
    if let Some(&first) = set.first() {
        if let Some(&bad) = set.iter().find(|&&x| p.rank(x) != p.rank(first)) {
            return Err(Error::Precondition(format!("shade of a mixed-rank set: {first} has rank {} but {bad} has rank {}", p.rank(first), p.rank(bad))));
        }
    }
    let mut out: Vec<usize> = set.iter().flat_map(|&x| p.up_covers(x).iter().copied()).collect();
    out.sort_unstable();
    out.dedup();
    Ok(out)
}

/// Result of deleting one rank.
#[derive(Clone, Debug)]
pub struct Truncation {
    pub poset: GradedPoset,
    pub removed_rank: usize,
    /// Old ids of the surviving elements, in their new order.
    pub kept: Vec<usize>,
}

/// Deletes a largest rank and recomputes covers from the order restricted to the rest.
pub fn truncate(p: &GradedPoset, tie: TieBreak) -> Result<Truncation> {
    let sizes = p.rank_sizes();
    let best = *sizes.iter().max().ok_or_else(|| Error::Precondition("cannot truncate an empty poset".into()))?;
    let candidates = sizes.iter().enumerate().filter(|&(_, &s)| s == best).map(|(r, _)| r);
    let removed_rank = match tie {
        TieBreak::SmallestIndex => candidates.min(),
        TieBreak::LargestIndex => candidates.max(),
    }
    .expect("nonempty");
    let kept: Vec<usize> = (0..p.len()).filter(|&i| p.rank(i) != removed_rank).collect();
    let ranks = kept.iter().map(|&i| if p.rank(i) > removed_rank { p.rank(i) - 1 } else { p.rank(i) }).collect();
    let closure = transitive_closure(p);
    let covers = induced_covers(&closure, &kept);
    let labels = kept.iter().map(|&i| p.label(i).to_string()).collect();
    let poset = GradedPoset::new(ranks, &covers, Some(labels))?;
    Ok(Truncation { poset, removed_rank, kept })
}

pub fn is_sperner(p: &GradedPoset) -> bool {
    width(p) == p.rank_sizes().into_iter().max().unwrap_or(0)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TruncationRecord {
    /// Original ranks deleted so far, in deletion order.
    pub removed_ranks: Vec<usize>,
    pub max_rank_size: usize,
    pub width: usize,
    pub sperner: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpernerReport {
    pub tie_break: TieBreak,
    pub truncations: Vec<TruncationRecord>,
    pub strongly_sperner: bool,
}

pub fn is_strongly_sperner(p: &GradedPoset, tie: TieBreak) -> SpernerReport {
    let mut current = p.clone();
    let mut original_rank: Vec<usize> = (0..p.rank_sizes().len()).collect();
    let mut removed = Vec::new();
    let mut truncations = Vec::new();
    while !current.is_empty() {
        let w = width(&current);
        let max_rank_size = current.rank_sizes().into_iter().max().unwrap_or(0);
        truncations.push(TruncationRecord { removed_ranks: removed.clone(), max_rank_size, width: w, sperner: w == max_rank_size });
        let t = truncate(&current, tie).expect("nonempty poset");
        removed.push(original_rank.remove(t.removed_rank));
        current = t.poset;
    }
    let strongly_sperner = truncations.iter().all(|t| t.sperner);
    SpernerReport { tie_break: tie, truncations, strongly_sperner }
}

/// Largest union of `k` antichains, by exhaustive search. At most 20 elements.
pub fn max_k_family_bruteforce(p: &GradedPoset, k: usize) -> Result<usize> {
    if p.len() > 20 {
        return Err(Error::ResourceCap(format!("brute-force k-family on {} elements (cap 20)", p.len())));
    }
    let closure = transitive_closure(p);
    let mut order: Vec<usize> = (0..p.len()).collect();
    order.sort_by_key(|&i| (p.rank(i), i));
    let below: Vec<Vec<usize>> = order.iter().map(|&x| (0..order.len()).filter(|&j| closure.lt(order[j], x)).collect()).collect();
    let mut chain = vec![0usize; order.len()];
    let mut best = 0;
    search(0, 0, k, &below, &mut chain, &mut best);
    Ok(best)
}

/// A subset is a union of `k` antichains iff its longest chain has at most `k` elements.
fn search(pos: usize, size: usize, k: usize, below: &[Vec<usize>], chain: &mut [usize], best: &mut usize) {
    if size + (below.len() - pos) <= *best {
        return;
    }
    if pos == below.len() {
        *best = size;
        return;
    }
    let longest = below[pos].iter().map(|&j| chain[j]).max().unwrap_or(0) + 1;
    if longest <= k {
        chain[pos] = longest;
        search(pos + 1, size + 1, k, below, chain, best);
    }
    chain[pos] = 0;
    search(pos + 1, size, k, below, chain, best);
}

/// Sum of the `k` largest rank sizes.
pub fn top_k_ranks(p: &GradedPoset, k: usize) -> usize {
    let mut sizes = p.rank_sizes();
    sizes.sort_unstable_by(|a, b| b.cmp(a));
    sizes.into_iter().take(k).sum()
}

pub fn is_k_sperner_bruteforce(p: &GradedPoset, k: usize) -> Result<bool> {
    Ok(max_k_family_bruteforce(p, k)? == top_k_ranks(p, k))
}

/// k-Sperner for every `k` up to the number of ranks, by exhaustive search.
pub fn strongly_sperner_bruteforce(p: &GradedPoset) -> Result<bool> {
    for k in 1..=p.rank_sizes().len() {
        if !is_k_sperner_bruteforce(p, k)? {
            return Ok(false);
        }
    }
    Ok(true)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NormalizedMatchingReport {
    pub holds: bool,
    /// Lowest rank `i` for which the pair `(i, i+1)` fails.
    pub first_failure: Option<usize>,
    /// `(max flow, required flow)` for each consecutive pair of ranks.
    pub flows: Vec<(u64, u64)>,
}

/// For each pair of consecutive ranks, checks `|∇L| / r_(i+1) >= |L| / r_i`
/// for all `L` by a max-flow: source to rank `i` with capacity `r_(i+1)`,
/// covers unbounded, rank `i+1` to sink with capacity `r_i`.
pub fn normalized_matching(p: &GradedPoset) -> NormalizedMatchingReport {
    let sizes = p.rank_sizes();
    let mut flows = Vec::new();
    let mut first_failure = None;
    for i in 0..sizes.len().saturating_sub(1) {
        let (lo, hi) = (p.rank_level(i), p.rank_level(i + 1));
        let (ri, rj) = (lo.len() as u64, hi.len() as u64);
        let required = ri * rj;
        let mut pos = vec![usize::MAX; p.len()];
        for (k, &x) in lo.iter().chain(&hi).enumerate() {
            pos[x] = k + 1;
        }
        let sink = lo.len() + hi.len() + 1;
        let mut net = FlowNetwork::new(sink + 1);
        for &x in &lo {
            net.add_edge(0, pos[x], rj);
            for &y in p.up_covers(x) {
                net.add_edge(pos[x], pos[y], required.max(1));
            }
        }
        for &y in &hi {
            net.add_edge(pos[y], sink, ri);
        }
        let f = net.max_flow(0, sink);
        if f != required && first_failure.is_none() {
            first_failure = Some(i);
        }
        flows.push((f, required));
    }
    NormalizedMatchingReport { holds: first_failure.is_none(), first_failure, flows }
}

/// The same property by enumerating every subset of every rank; ranks are capped at 16 elements.
pub fn normalized_matching_exhaustive(p: &GradedPoset) -> Result<bool> {
    let sizes = p.rank_sizes();
    for i in 0..sizes.len().saturating_sub(1) {
        let lo = p.rank_level(i);
        if lo.len() > 16 {
            return Err(Error::ResourceCap(format!("rank {i} has {} elements (cap 16)", lo.len())));
        }
        let rj = sizes[i + 1];
        for mask in 1u32..(1 << lo.len()) {
            let set: Vec<usize> = (0..lo.len()).filter(|&b| mask >> b & 1 == 1).map(|b| lo[b]).collect();
            if shade(p, &set)?.len() * lo.len() < set.len() * rj {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Sufficient condition for a symmetric chain decomposition: rank-symmetric,
/// unimodal, with the normalized matching property.
pub fn griggs_scd_exists(p: &GradedPoset) -> Result<bool> {
    let profile = rank_profile(p)?;
    Ok(profile.symmetric && profile.unimodal && normalized_matching(p).holds)
}
