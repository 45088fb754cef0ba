//! Finite graded posets stored as Hasse diagrams, plus decomposition checking.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use fixedbitset::FixedBitSet;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Strict order relation, one bit row per element: `j` is in row `i` iff `i < j`.
#[derive(Clone, Debug)]
pub struct BitRelation {
    rows: Vec<FixedBitSet>,
}

impl BitRelation {
    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn lt(&self, i: usize, j: usize) -> bool {
        self.rows[i].contains(j)
    }

    pub fn le(&self, i: usize, j: usize) -> bool {
        i == j || self.rows[i].contains(j)
    }

    pub fn comparable(&self, i: usize, j: usize) -> bool {
        self.le(i, j) || self.le(j, i)
    }

    /// Strict up-set of `i`.
    pub fn above(&self, i: usize) -> &FixedBitSet {
        &self.rows[i]
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradedPoset {
    ranks: Vec<usize>,
    up: Vec<Vec<usize>>,
    down: Vec<Vec<usize>>,
    labels: Vec<String>,
}

impl GradedPoset {
    /// Builds a poset from ranks and cover pairs `(lower, upper)`. Every cover
    /// must raise the rank by exactly one; duplicates and bad ids are rejected.
    pub fn new(ranks: Vec<usize>, covers: &[(usize, usize)], labels: Option<Vec<String>>) -> Result<Self> {
        let m = ranks.len();
        let labels = match labels {
            Some(l) if l.len() != m => return Err(Error::InvalidPoset(format!("{} labels for {m} elements", l.len()))),
            Some(l) => l,
            None => (0..m).map(|i| i.to_string()).collect(),
        };
        let mut up = vec![Vec::new(); m];
        let mut down = vec![Vec::new(); m];
        for (c, &(a, b)) in covers.iter().enumerate() {
            if a >= m || b >= m {
                return Err(Error::InvalidPoset(format!("covers[{c}] = [{a}, {b}] references a missing element")));
            }
            if ranks[b] != ranks[a] + 1 {
                return Err(Error::InvalidPoset(format!(
                    "covers[{c}] = [{a}, {b}] goes from rank {} to rank {}",
                    ranks[a], ranks[b]
                )));
            }
            up[a].push(b);
            down[b].push(a);
        }
        for (a, list) in up.iter_mut().enumerate() {
            list.sort_unstable();
            if list.windows(2).any(|w| w[0] == w[1]) {
                return Err(Error::InvalidPoset(format!("duplicate cover above element {a}")));
            }
        }
        for list in down.iter_mut() {
            list.sort_unstable();
        }
        Ok(GradedPoset { ranks, up, down, labels })
    }

    pub fn len(&self) -> usize {
        self.ranks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ranks.is_empty()
    }

    pub fn rank(&self, i: usize) -> usize {
        self.ranks[i]
    }

    pub fn ranks(&self) -> &[usize] {
        &self.ranks
    }

    pub fn up_covers(&self, i: usize) -> &[usize] {
        &self.up[i]
    }

    pub fn down_covers(&self, i: usize) -> &[usize] {
        &self.down[i]
    }

    pub fn label(&self, i: usize) -> &str {
        &self.labels[i]
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    /// All cover pairs in lexicographic order.
    pub fn covers(&self) -> Vec<(usize, usize)> {
        let mut out: Vec<(usize, usize)> = self.up.iter().enumerate().flat_map(|(a, ups)| ups.iter().map(move |&b| (a, b))).collect();
        out.sort_unstable();
        out
    }

    pub fn cover_count(&self) -> usize {
        self.up.iter().map(Vec::len).sum()
    }

    pub fn max_rank(&self) -> Option<usize> {
        self.ranks.iter().copied().max()
    }

    /// Number of elements on each rank `0..=max_rank`.
    pub fn rank_sizes(&self) -> Vec<usize> {
        let mut sizes = vec![0; self.max_rank().map_or(0, |r| r + 1)];
        for &r in &self.ranks {
            sizes[r] += 1;
        }
        sizes
    }

    /// Elements of rank `r`, ascending.
    pub fn rank_level(&self, r: usize) -> Vec<usize> {
        (0..self.len()).filter(|&i| self.ranks[i] == r).collect()
    }

    /// True when all minimal elements sit at rank 0 and all maximal ones at the top rank.
    pub fn is_graded(&self) -> bool {
        let top = self.max_rank().unwrap_or(0);
        (0..self.len()).all(|i| (!self.down[i].is_empty() || self.ranks[i] == 0) && (!self.up[i].is_empty() || self.ranks[i] == top))
    }

    pub fn with_labels(mut self, labels: Vec<String>) -> Result<Self> {
        if labels.len() != self.len() {
            return Err(Error::InvalidPoset("label count mismatch".into()));
        }
        self.labels = labels;
        Ok(self)
    }

    /// Induced subposet on `elements` (in that order), with the given new ranks.
    pub fn induced(&self, closure: &BitRelation, elements: &[usize], new_ranks: Vec<usize>) -> Result<GradedPoset> {
        let covers = induced_covers(closure, elements);
        let labels = elements.iter().map(|&e| self.labels[e].clone()).collect();
        GradedPoset::new(new_ranks, &covers, Some(labels))
    }
}

/// Covers of the order induced on `elements`, as positions into that slice.
pub fn induced_covers(closure: &BitRelation, elements: &[usize]) -> Vec<(usize, usize)> {
    let mut pos = BTreeMap::new();
    let mut mask = FixedBitSet::with_capacity(closure.len());
    for (p, &e) in elements.iter().enumerate() {
        mask.insert(e);
        pos.insert(e, p);
    }
    let mut out = Vec::new();
    for (p, &x) in elements.iter().enumerate() {
        let mut cand = closure.above(x).clone();
        cand.intersect_with(&mask);
        let mut minimal = cand.clone();
        for z in cand.ones() {
            minimal.difference_with(closure.above(z));
        }
        for y in minimal.ones() {
            out.push((p, pos[&y]));
        }
    }
    out.sort_unstable();
    out
}

pub fn transitive_closure(p: &GradedPoset) -> BitRelation {
    let m = p.len();
    let mut order: Vec<usize> = (0..m).collect();
    order.sort_by_key(|&i| std::cmp::Reverse(p.rank(i)));
    let mut rows = vec![FixedBitSet::with_capacity(m); m];
    for &i in &order {
        let mut row = FixedBitSet::with_capacity(m);
        for &c in p.up_covers(i) {
            row.insert(c);
            row.union_with(&rows[c]);
        }
        rows[i] = row;
    }
    BitRelation { rows }
}

/// Rank vector and the properties derived from it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RankProfile {
    pub rank_vector: Vec<u64>,
    pub symmetric: bool,
    pub unimodal: bool,
    pub gamma: Option<Vec<i64>>,
}

pub fn rank_profile(p: &GradedPoset) -> Result<RankProfile> {
    if !p.is_graded() {
        return Err(Error::InvalidPoset("poset is not graded: some maximal chain is shorter than the rank".into()));
    }
    Ok(profile_of(p.rank_sizes().into_iter().map(|x| x as u64).collect()))
}

pub fn profile_of(rank_vector: Vec<u64>) -> RankProfile {
    let symmetric = is_symmetric(&rank_vector);
    let unimodal = is_unimodal(&rank_vector);
    let gamma = gamma_vector(&rank_vector).ok();
    RankProfile { rank_vector, symmetric, unimodal, gamma }
}

pub fn is_symmetric(v: &[u64]) -> bool {
    v.iter().eq(v.iter().rev())
}

pub fn is_unimodal(v: &[u64]) -> bool {
    let mut i = 0;
    while i + 1 < v.len() && v[i] <= v[i + 1] {
        i += 1;
    }
    while i + 1 < v.len() && v[i] >= v[i + 1] {
        i += 1;
    }
    i + 1 >= v.len()
}

/// Coefficients `g_j` with `sum r_k t^k = sum g_j t^j (1+t)^(N-2j)`, for a symmetric rank vector.
pub fn gamma_vector(v: &[u64]) -> Result<Vec<i64>> {
    if v.is_empty() {
        return Err(Error::Precondition("empty rank vector".into()));
    }
    if !is_symmetric(v) {
        return Err(Error::Precondition(format!("rank vector {v:?} is not symmetric")));
    }
    let n = v.len() - 1;
    let mut gamma: Vec<i64> = Vec::with_capacity(n / 2 + 1);
    for k in 0..=n / 2 {
        let mut g = v[k] as i128;
        for (j, &gj) in gamma.iter().enumerate() {
            g -= gj as i128 * binomial((n - 2 * j) as u64, (k - j) as u64) as i128;
        }
        gamma.push(i64::try_from(g).map_err(|_| Error::Precondition("gamma entry overflows".into()))?);
    }
    Ok(gamma)
}

pub(crate) fn binomial(n: u64, k: u64) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
    }
    acc
}

pub fn direct_product(p: &GradedPoset, q: &GradedPoset) -> GradedPoset {
    let (a, b) = (p.len(), q.len());
    let idx = |i: usize, j: usize| i * b + j;
    let mut ranks = Vec::with_capacity(a * b);
    let mut labels = Vec::with_capacity(a * b);
    let mut covers = Vec::new();
    for i in 0..a {
        for j in 0..b {
            ranks.push(p.rank(i) + q.rank(j));
            labels.push(format!("({},{})", p.label(i), q.label(j)));
            for &i2 in p.up_covers(i) {
                covers.push((idx(i, j), idx(i2, j)));
            }
            for &j2 in q.up_covers(j) {
                covers.push((idx(i, j), idx(i, j2)));
            }
        }
    }
    GradedPoset::new(ranks, &covers, Some(labels)).expect("product of graded posets")
}

/// `B_k`: element `i` is the subset with bitmask `i`.
pub fn boolean_lattice(k: usize) -> Result<GradedPoset> {
    if k > 20 {
        return Err(Error::ResourceCap(format!("boolean lattice of rank {k}")));
    }
    let m = 1usize << k;
    let ranks = (0..m).map(|i| i.count_ones() as usize).collect();
    let mut covers = Vec::new();
    for i in 0..m {
        for b in 0..k {
            if i & (1 << b) == 0 {
                covers.push((i, i | (1 << b)));
            }
        }
    }
    let labels = (0..m).map(|i| format!("{i:0width$b}", width = k.max(1))).collect();
    GradedPoset::new(ranks, &covers, Some(labels))
}

/// Declared shape of a decomposition part.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PartType {
    Untyped,
    BooleanOfRank(usize),
    Chain(usize),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Part {
    pub elements: Vec<usize>,
    pub declared: PartType,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub tags: Vec<String>,
}

impl Part {
    pub fn new(mut elements: Vec<usize>, declared: PartType) -> Self {
        elements.sort_unstable();
        Part { elements, declared, tags: Vec::new() }
    }

    /// Smallest and largest rank met by the part.
    pub fn span(&self, p: &GradedPoset) -> (usize, usize) {
        let lo = self.elements.iter().map(|&e| p.rank(e)).min().unwrap_or(0);
        let hi = self.elements.iter().map(|&e| p.rank(e)).max().unwrap_or(0);
        (lo, hi)
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Decomposition {
    pub parts: Vec<Part>,
}

impl Decomposition {
    /// Multiset of part sizes.
    pub fn census(&self) -> BTreeMap<usize, usize> {
        let mut c = BTreeMap::new();
        for p in &self.parts {
            *c.entry(p.elements.len()).or_insert(0) += 1;
        }
        c
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum VerifyMode {
    Plain,
    Symmetric,
    Boolean,
    Chain,
}

impl FromStr for VerifyMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "plain" => Ok(VerifyMode::Plain),
            "symmetric" => Ok(VerifyMode::Symmetric),
            "boolean" => Ok(VerifyMode::Boolean),
            "chain" => Ok(VerifyMode::Chain),
            other => Err(Error::Precondition(format!("unknown verification mode '{other}'"))),
        }
    }
}

impl fmt::Display for VerifyMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            VerifyMode::Plain => "plain",
            VerifyMode::Symmetric => "symmetric",
            VerifyMode::Boolean => "boolean",
            VerifyMode::Chain => "chain",
        };
        f.write_str(s)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Violation {
    pub part: usize,
    pub reason: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub mode: VerifyMode,
    pub parts: usize,
    pub violations: Vec<Violation>,
}

impl VerificationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Checks a decomposition against `mode`. Returns an error only when the parts
/// do not partition the ground set; shape failures are listed in the report,
/// at most one per part.
pub fn verify_decomposition(p: &GradedPoset, dec: &Decomposition, mode: VerifyMode) -> Result<VerificationReport> {
    let closure = transitive_closure(p);
    verify_with_closure(p, &closure, dec, mode)
}

pub fn verify_with_closure(p: &GradedPoset, closure: &BitRelation, dec: &Decomposition, mode: VerifyMode) -> Result<VerificationReport> {
    check_partition(p, dec)?;
    let top = p.max_rank().unwrap_or(0);
    let mut violations = Vec::new();
    for (idx, part) in dec.parts.iter().enumerate() {
        if let Some(reason) = part_violation(p, closure, part, mode, top) {
            violations.push(Violation { part: idx, reason });
        }
    }
    Ok(VerificationReport { mode, parts: dec.parts.len(), violations })
}

fn check_partition(p: &GradedPoset, dec: &Decomposition) -> Result<()> {
    let mut owner = vec![usize::MAX; p.len()];
    for (idx, part) in dec.parts.iter().enumerate() {
        if part.elements.is_empty() {
            return Err(Error::InvalidDecomposition(format!("part {idx} is empty")));
        }
        for &e in &part.elements {
            if e >= p.len() {
                return Err(Error::InvalidDecomposition(format!("part {idx} references missing element {e}")));
            }
            if owner[e] != usize::MAX {
                return Err(Error::InvalidDecomposition(format!("element {e} lies in parts {} and {idx}", owner[e])));
            }
            owner[e] = idx;
        }
    }
    if let Some(e) = owner.iter().position(|&o| o == usize::MAX) {
        return Err(Error::InvalidDecomposition(format!("element {e} is not covered by any part")));
    }
    Ok(())
}

fn part_violation(p: &GradedPoset, closure: &BitRelation, part: &Part, mode: VerifyMode, top: usize) -> Option<String> {
    let els = &part.elements;
    let covers = induced_covers(closure, els);
    for &(a, b) in &covers {
        let (x, y) = (els[a], els[b]);
        if p.rank(y) != p.rank(x) + 1 {
            return Some(format!("induced cover {x} < {y} is not a cover of the poset"));
        }
    }
    let mut uf: Vec<usize> = (0..els.len()).collect();
    fn find(uf: &mut [usize], x: usize) -> usize {
        let mut r = x;
        while uf[r] != r {
            r = uf[r];
        }
        uf[x] = r;
        r
    }
    for &(a, b) in &covers {
        let (ra, rb) = (find(&mut uf, a), find(&mut uf, b));
        uf[ra] = rb;
    }
    let root = find(&mut uf, 0);
    if (0..els.len()).any(|i| find(&mut uf, i) != root) {
        return Some("part is not connected".into());
    }
    match mode {
        VerifyMode::Plain => None,
        VerifyMode::Symmetric => {
            let mut has_down = vec![false; els.len()];
            let mut has_up = vec![false; els.len()];
            for &(a, b) in &covers {
                has_up[a] = true;
                has_down[b] = true;
            }
            let mut mins: Vec<usize> = (0..els.len()).filter(|&i| !has_down[i]).map(|i| p.rank(els[i])).collect();
            let mut maxs: Vec<usize> = (0..els.len()).filter(|&i| !has_up[i]).map(|i| top - p.rank(els[i])).collect();
            mins.sort_unstable();
            maxs.sort_unstable();
            if mins != maxs {
                Some(format!("minimal ranks {mins:?} do not pair with co-ranks of maximal elements {maxs:?}"))
            } else {
                None
            }
        }
        VerifyMode::Boolean => match boolean_certificate(closure, els) {
            None => Some("part is not a Boolean lattice".into()),
            Some(cert) => match part.declared {
                PartType::BooleanOfRank(k) if k != cert.rank => Some(format!("declared rank {k} but part is Boolean of rank {}", cert.rank)),
                _ => {
                    let (lo, hi) = part.span(p);
                    (hi - lo != cert.rank).then(|| format!("rank span {} differs from Boolean rank {}", hi - lo, cert.rank))
                }
            },
        },
        VerifyMode::Chain => {
            let mut sorted = els.clone();
            sorted.sort_by_key(|&e| p.rank(e));
            for w in sorted.windows(2) {
                if p.rank(w[1]) != p.rank(w[0]) + 1 || !closure.lt(w[0], w[1]) {
                    return Some(format!("elements {} and {} are not consecutive on a chain", w[0], w[1]));
                }
            }
            match part.declared {
                PartType::Chain(len) if len != els.len() => Some(format!("declared length {len} but chain has {} elements", els.len())),
                _ => None,
            }
        }
    }
}

/// Witness that a set of elements is a Boolean lattice: the rank and, for each
/// element (in input order), the bitmask of atoms below it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BooleanCertificate {
    pub rank: usize,
    pub masks: Vec<u32>,
}

/// Recognizes the induced order on `elements` as `B_k` and returns the isomorphism.
pub fn boolean_certificate(closure: &BitRelation, elements: &[usize]) -> Option<BooleanCertificate> {
    let m = elements.len();
    if !m.is_power_of_two() {
        return None;
    }
    let k = m.trailing_zeros() as usize;
    if k > 31 {
        return None;
    }
    let bottom = (0..m).find(|&i| elements.iter().all(|&e| closure.le(elements[i], e)))?;
    let covers = induced_covers(closure, elements);
    let atoms: Vec<usize> = covers.iter().filter(|&&(a, _)| a == bottom).map(|&(_, b)| b).collect();
    if atoms.len() != k {
        return None;
    }
    let masks: Vec<u32> = (0..m)
        .map(|i| atoms.iter().enumerate().filter(|&(_, &a)| closure.le(elements[a], elements[i])).fold(0u32, |acc, (bit, _)| acc | (1 << bit)))
        .collect();
    let mut seen = vec![false; m];
    for &mask in &masks {
        if seen[mask as usize] {
            return None;
        }
        seen[mask as usize] = true;
    }
    for i in 0..m {
        for j in 0..m {
            let subset = masks[i] & !masks[j] == 0;
            if subset != closure.le(elements[i], elements[j]) {
                return None;
            }
        }
    }
    Some(BooleanCertificate { rank: k, masks })
}

/// Reads the census of a verified symmetric Boolean decomposition as a gamma vector.
pub fn gamma_from_boolean_parts(p: &GradedPoset, dec: &Decomposition) -> Result<Vec<i64>> {
    let closure = transitive_closure(p);
    for mode in [VerifyMode::Boolean, VerifyMode::Symmetric] {
        let report = verify_with_closure(p, &closure, dec, mode)?;
        if let Some(v) = report.violations.first() {
            return Err(Error::Precondition(format!("not a symmetric Boolean decomposition: part {}: {}", v.part, v.reason)));
        }
    }
    let top = p.max_rank().unwrap_or(0);
    let mut gamma = vec![0i64; top / 2 + 1];
    for part in &dec.parts {
        let k = part.elements.len().trailing_zeros() as usize;
        if k > top || !(top - k).is_multiple_of(2) {
            return Err(Error::Precondition(format!("Boolean part of rank {k} cannot be symmetric in rank {top}")));
        }
        gamma[(top - k) / 2] += 1;
    }
    Ok(gamma)
}

/// Poset isomorphism by backtracking over Hasse diagrams. Each side is capped at 64 elements.
pub fn is_isomorphic(p: &GradedPoset, q: &GradedPoset) -> Result<bool> {
    if p.len() > 64 || q.len() > 64 {
        return Err(Error::ResourceCap(format!("isomorphism test on {} and {} elements (cap 64)", p.len(), q.len())));
    }
    if p.len() != q.len() || p.cover_count() != q.cover_count() {
        return Ok(false);
    }
    let (sp, sq) = (signatures(p), signatures(q));
    let mut a = sp.clone();
    let mut b = sq.clone();
    a.sort_unstable();
    b.sort_unstable();
    if a != b {
        return Ok(false);
    }
    let up_mask = |x: &GradedPoset| -> Vec<u64> { (0..x.len()).map(|i| x.up_covers(i).iter().fold(0u64, |m, &j| m | (1 << j))).collect() };
    let (pu, qu) = (up_mask(p), up_mask(q));
    // Visit elements so that each one after the first touches an earlier one when possible.
    let mut order = Vec::with_capacity(p.len());
    let mut placed = vec![false; p.len()];
    while order.len() < p.len() {
        let start = (0..p.len()).filter(|&i| !placed[i]).min_by_key(|&i| (sp[i], i)).unwrap();
        let mut queue = std::collections::VecDeque::from([start]);
        placed[start] = true;
        while let Some(x) = queue.pop_front() {
            order.push(x);
            for &y in p.up_covers(x).iter().chain(p.down_covers(x)) {
                if !placed[y] {
                    placed[y] = true;
                    queue.push_back(y);
                }
            }
        }
    }
    let mut map = vec![usize::MAX; p.len()];
    let mut used = vec![false; q.len()];
    Ok(extend(0, &order, &sp, &sq, &pu, &qu, &mut map, &mut used))
}

type Signature = (usize, usize, usize);

fn signatures(p: &GradedPoset) -> Vec<Signature> {
    let mut order: Vec<usize> = (0..p.len()).collect();
    order.sort_by_key(|&i| p.rank(i));
    let mut height = vec![0usize; p.len()];
    for &i in &order {
        height[i] = p.down_covers(i).iter().map(|&j| height[j] + 1).max().unwrap_or(0);
    }
    (0..p.len()).map(|i| (height[i], p.up_covers(i).len(), p.down_covers(i).len())).collect()
}

#[allow(clippy::too_many_arguments)]
fn extend(depth: usize, order: &[usize], sp: &[Signature], sq: &[Signature], pu: &[u64], qu: &[u64], map: &mut [usize], used: &mut [bool]) -> bool {
    if depth == order.len() {
        return true;
    }
    let x = order[depth];
    for y in 0..sq.len() {
        if used[y] || sq[y] != sp[x] {
            continue;
        }
        let consistent = order[..depth].iter().all(|&z| {
            let fz = map[z];
            (pu[x] >> z & 1) == (qu[y] >> fz & 1) && (pu[z] >> x & 1) == (qu[fz] >> y & 1)
        });
        if !consistent {
            continue;
        }
        map[x] = y;
        used[y] = true;
        if extend(depth + 1, order, sp, sq, pu, qu, map, used) {
            return true;
        }
        used[y] = false;
        map[x] = usize::MAX;
    }
    false
}
