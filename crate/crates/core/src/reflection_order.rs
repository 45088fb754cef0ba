//! Reflection length, the absolute order, and the noncrossing partition lattice `NC(W, γ)`.

use std::cell::OnceCell;
use std::collections::HashMap;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::cli_io::{catalog, Family};
use crate::colored_perm::{ColoredPermutation, CycleKind, Embedding, GroupParams, Reflection};
use crate::error::{Error, Result};
use crate::poset_core::{is_isomorphic, transitive_closure, BitRelation, GradedPoset};

/// Default cap on the number of lattice elements.
pub const DEFAULT_ELEMENT_CAP: usize = 200_000;

/// Memoized reflection length for one group. Searches right multiplication by
/// reflections with iterative deepening; `n - fix_dim` is the admissible estimate.
pub struct LengthOracle {
    params: GroupParams,
    reflections: Vec<ColoredPermutation>,
    exact: HashMap<ColoredPermutation, usize>,
    /// Largest bound known to be too small.
    too_long: HashMap<ColoredPermutation, usize>,
}

impl LengthOracle {
    pub fn new(params: GroupParams) -> Self {
        let reflections = ColoredPermutation::reflections(params).iter().map(|r| r.to_permutation(params)).collect();
        LengthOracle { params, reflections, exact: HashMap::new(), too_long: HashMap::new() }
    }

    pub fn params(&self) -> GroupParams {
        self.params
    }

    pub fn reflections(&self) -> &[ColoredPermutation] {
        &self.reflections
    }

    pub fn length(&mut self, u: &ColoredPermutation) -> Result<usize> {
        if u.params() != self.params {
            return Err(Error::ParamMismatch(format!("{} vs {}", u.params(), self.params)));
        }
        if let Some(&l) = self.exact.get(u) {
            return Ok(l);
        }
        let mut bound = u.codim();
        loop {
            if self.within(u, bound) {
                self.exact.insert(u.clone(), bound);
                return Ok(bound);
            }
            bound += 1;
        }
    }

    /// Whether `ℓ_T(u) <= bound`.
    pub fn within(&mut self, u: &ColoredPermutation, bound: usize) -> bool {
        if let Some(&l) = self.exact.get(u) {
            return l <= bound;
        }
        if self.too_long.get(u).is_some_and(|&b| bound <= b) {
            return false;
        }
        let c = u.codim();
        if c > bound {
            return false;
        }
        if c == 0 {
            return true;
        }
        let mut found = false;
        for i in 0..self.reflections.len() {
            let v = u * &self.reflections[i];
            if v.codim() < bound && self.within(&v, bound - 1) {
                found = true;
                break;
            }
        }
        if found {
            if bound == c {
                self.exact.insert(u.clone(), c);
            }
        } else {
            let e = self.too_long.entry(u.clone()).or_insert(bound);
            *e = (*e).max(bound);
        }
        found
    }
}

/// `ℓ_T(u)` with a throwaway cache.
pub fn reflection_length(u: &ColoredPermutation) -> usize {
    LengthOracle::new(u.params()).length(u).expect("same group")
}

/// `u ≤_T v`, i.e. `ℓ_T(u) + ℓ_T(u⁻¹v) = ℓ_T(v)`.
pub fn leq_t(oracle: &mut LengthOracle, u: &ColoredPermutation, v: &ColoredPermutation) -> Result<bool> {
    let lu = oracle.length(u)?;
    let lv = oracle.length(v)?;
    if lu > lv {
        return Ok(false);
    }
    let w = u.inverse().compose(v)?;
    Ok(oracle.within(&w, lv - lu))
}

/// The interval `[ε, γ]` in absolute order. Index 0 is the identity and the
/// last index is `γ`; elements are sorted by rank, then canonically.
#[derive(Clone, Debug)]
pub struct NCLattice {
    pub params: GroupParams,
    pub gamma: ColoredPermutation,
    pub elements: Vec<ColoredPermutation>,
    pub ranks: Vec<usize>,
    pub up_covers: Vec<Vec<usize>>,
    pub down_covers: Vec<Vec<usize>>,
    element_index: HashMap<ColoredPermutation, usize>,
    closure: OnceCell<BitRelation>,
}

impl NCLattice {
    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn rank(&self) -> usize {
        self.ranks[self.len() - 1]
    }

    pub fn top(&self) -> usize {
        self.len() - 1
    }

    pub fn index_of(&self, u: &ColoredPermutation) -> Option<usize> {
        self.element_index.get(u).copied()
    }

    pub fn rank_vector(&self) -> Vec<u64> {
        let mut v = vec![0u64; self.rank() + 1];
        for &r in &self.ranks {
            v[r] += 1;
        }
        v
    }

    pub fn closure(&self) -> &BitRelation {
        self.closure.get_or_init(|| transitive_closure(&self.to_poset()))
    }

    pub fn leq(&self, i: usize, j: usize) -> bool {
        self.closure().le(i, j)
    }

    /// Indices of the closed interval `[i, j]`, ascending.
    pub fn interval(&self, i: usize, j: usize) -> Vec<usize> {
        let c = self.closure();
        (0..self.len()).filter(|&k| c.le(i, k) && c.le(k, j)).collect()
    }

    /// The lattice as a graded poset labelled by cycle notation.
    pub fn to_poset(&self) -> GradedPoset {
        let covers: Vec<(usize, usize)> = self.up_covers.iter().enumerate().flat_map(|(a, ups)| ups.iter().map(move |&b| (a, b))).collect();
        let labels = self.elements.iter().map(|e| e.to_string()).collect();
        GradedPoset::new(self.ranks.clone(), &covers, Some(labels)).expect("lattice covers raise rank by one")
    }
}

/// Refuses up front when the predicted size `Cat_W` exceeds `cap`.
pub fn build_nc_lattice(params: GroupParams, cap: usize) -> Result<NCLattice> {
    let family = if params.d == 1 { Family::G11n } else { Family::Gddn };
    let predicted = catalog(family, params.d, params.n)?.catalan;
    if predicted > cap as u128 {
        return Err(Error::ResourceCap(format!("NC({params}) would have {predicted} elements, cap is {cap}")));
    }
    build_nc_lattice_with_coxeter(&ColoredPermutation::coxeter_element(params), cap)
}

/// Builds `[ε, γ]` top-down: the lower covers of `w` are the `w t` one shorter than `w`.
/// Checks along the way that every member has reflection length equal to its codimension.
pub fn build_nc_lattice_with_coxeter(gamma: &ColoredPermutation, cap: usize) -> Result<NCLattice> {
    let params = gamma.params();
    let mut oracle = LengthOracle::new(params);
    let top_len = oracle.length(gamma)?;
    let mut levels: Vec<Vec<ColoredPermutation>> = vec![vec![gamma.clone()]];
    let mut cover_pairs: Vec<(ColoredPermutation, ColoredPermutation)> = Vec::new();
    let mut total = 1usize;
    for len in (1..=top_len).rev() {
        let mut next: HashMap<ColoredPermutation, ()> = HashMap::new();
        let mut order = Vec::new();
        for w in levels.last().unwrap() {
            for t in 0..oracle.reflections().len() {
                let v = w * &oracle.reflections()[t];
                if v.codim() > len - 1 || !oracle.within(&v, len - 1) {
                    continue;
                }
                if next.insert(v.clone(), ()).is_none() {
                    order.push(v.clone());
                    total += 1;
                    if total > cap {
                        return Err(Error::ResourceCap(format!("NC({params}) exceeds {cap} elements")));
                    }
                }
                cover_pairs.push((v, w.clone()));
            }
        }
        levels.push(order);
    }
    let mut elements: Vec<(usize, ColoredPermutation)> = Vec::with_capacity(total);
    for (depth, level) in levels.into_iter().enumerate() {
        for e in level {
            elements.push((top_len - depth, e));
        }
    }
    elements.sort();
    if elements.first().map(|(_, e)| !e.is_identity()).unwrap_or(true) {
        return Err(Error::Invariant("construction did not reach the identity".into()));
    }
    for (rank, e) in &elements {
        if e.codim() != *rank {
            return Err(Error::Invariant(format!("{e} has reflection length {rank} but codimension {}", e.codim())));
        }
    }
    let element_index: HashMap<ColoredPermutation, usize> = elements.iter().enumerate().map(|(i, (_, e))| (e.clone(), i)).collect();
    let m = elements.len();
    let mut up_covers = vec![Vec::new(); m];
    let mut down_covers = vec![Vec::new(); m];
    for (lo, hi) in &cover_pairs {
        let (a, b) = (element_index[lo], element_index[hi]);
        up_covers[a].push(b);
        down_covers[b].push(a);
    }
    for list in up_covers.iter_mut().chain(down_covers.iter_mut()) {
        list.sort_unstable();
        list.dedup();
    }
    let ranks = elements.iter().map(|(r, _)| *r).collect();
    Ok(NCLattice {
        params,
        gamma: gamma.clone(),
        elements: elements.into_iter().map(|(_, e)| e).collect(),
        ranks,
        up_covers,
        down_covers,
        element_index,
        closure: OnceCell::new(),
    })
}

pub fn atoms(l: &NCLattice) -> Vec<usize> {
    l.up_covers[0].clone()
}

pub fn coatoms(l: &NCLattice) -> Vec<usize> {
    l.down_covers[l.top()].clone()
}

/// The map `w ↦ u⁻¹w` from `[x, y]` onto `[u⁻¹x, u⁻¹y]`, as index pairs. Needs `u ≤ x ≤ y`.
pub fn translate_interval(l: &NCLattice, u: usize, x: usize, y: usize) -> Result<Vec<(usize, usize)>> {
    if !(l.leq(u, x) && l.leq(x, y)) {
        return Err(Error::Precondition(format!("expected u ≤ x ≤ y for indices {u}, {x}, {y}")));
    }
    let inv = l.elements[u].inverse();
    l.interval(x, y)
        .into_iter()
        .map(|w| {
            let img = &inv * &l.elements[w];
            l.index_of(&img).map(|j| (w, j)).ok_or_else(|| Error::Invariant(format!("translate of {} left the lattice", l.elements[w])))
        })
        .collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FactorKind {
    /// Noncrossing partitions of a cycle of this length.
    TypeA(usize),
    /// A balanced pair isomorphic to `NC(G(d,d,m))`.
    TypeD { d: usize, m: usize },
}

/// One factor of `[ε, w]`: a cycle (or balanced pair) of `w` together with the
/// relabeling that carries the standard lattice onto it.
#[derive(Clone, Debug)]
pub struct IntervalFactor {
    pub kind: FactorKind,
    pub support: Vec<usize>,
    pub embedding: Embedding,
}

impl IntervalFactor {
    pub fn standard_params(&self) -> GroupParams {
        self.embedding.source
    }
}

#[derive(Clone, Debug)]
pub struct IntervalFactorization {
    pub element: ColoredPermutation,
    pub factors: Vec<IntervalFactor>,
}

impl IntervalFactorization {
    /// Splits `v ≤ w` into its restrictions to the factor supports.
    pub fn split(&self, v: &ColoredPermutation) -> Result<Vec<ColoredPermutation>> {
        self.factors.iter().map(|f| v.restrict(&f.support)).collect()
    }
}

/// Factors `[ε, w]` by the generalized cycles of `w`: each nontrivial
/// simultaneous cycle gives a type A factor, and the balanced cycles together
/// (one of sum 1 and a singleton of sum `d-1`) give one `G(d,d,m)` factor.
pub fn factorize(w: &ColoredPermutation) -> Result<IntervalFactorization> {
    let params = w.params();
    let mut factors = Vec::new();
    let mut balanced = Vec::new();
    for cyc in w.cycle_decomposition() {
        match cyc.kind {
            CycleKind::Simultaneous if cyc.len() == 1 => {}
            CycleKind::Simultaneous => {
                let r = cyc.len();
                let emb = Embedding::new(
                    GroupParams::symmetric(r)?,
                    params,
                    cyc.points.iter().map(|p| p.index).collect(),
                    cyc.points.iter().map(|p| p.color).collect(),
                )?;
                factors.push(IntervalFactor { kind: FactorKind::TypeA(r), support: cyc.points.iter().map(|p| p.index).collect(), embedding: emb });
            }
            CycleKind::Balanced(_) => balanced.push(cyc),
        }
    }
    if !balanced.is_empty() {
        let d = params.d;
        let single = balanced.iter().position(|c| c.len() == 1 && c.color_sum() == d - 1);
        let (lone, long) = match (balanced.len(), single) {
            (2, Some(i)) if balanced[1 - i].color_sum() == 1 => (balanced[i].clone(), balanced[1 - i].clone()),
            _ => {
                let text: Vec<String> = balanced.iter().map(|c| c.to_string()).collect();
                return Err(Error::Precondition(format!("balanced cycles {} are not of the form [..]_1 [k]_(d-1)", text.join(" "))));
            }
        };
        let mut points: Vec<usize> = long.points.iter().map(|p| p.index).collect();
        let mut offsets: Vec<usize> = long.points.iter().map(|p| p.color).collect();
        points.push(lone.points[0].index);
        offsets.push(lone.points[0].color);
        let m = points.len();
        let emb = Embedding::new(GroupParams::new(d, m)?, params, points.clone(), offsets)?;
        factors.push(IntervalFactor { kind: FactorKind::TypeD { d, m }, support: points, embedding: emb });
    }
    Ok(IntervalFactorization { element: w.clone(), factors })
}

/// Factorization of the lower interval of lattice element `w`.
pub fn interval_factorization(l: &NCLattice, w: usize) -> Result<IntervalFactorization> {
    factorize(&l.elements[w])
}

/// Compares `NC(W, γ)` with `NC(W, gγg⁻¹)` for the reflections `g` and
/// `samples` random `g`. Limited to lattices of at most 64 elements.
pub fn nc_isomorphic_all_coxeter(params: GroupParams, samples: usize, seed: u64) -> Result<bool> {
    let gamma = ColoredPermutation::coxeter_element(params);
    let base = build_nc_lattice(params, 64)?.to_poset();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut conjugators: Vec<ColoredPermutation> = ColoredPermutation::reflections(params).iter().map(|r: &Reflection| r.to_permutation(params)).collect();
    conjugators.extend((0..samples).map(|_| ColoredPermutation::random(params, &mut rng)));
    for g in conjugators {
        let conj = &(&g * &gamma) * &g.inverse();
        let other = build_nc_lattice_with_coxeter(&conj, 64)?.to_poset();
        if !is_isomorphic(&base, &other)? {
            return Ok(false);
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(d: usize, n: usize) -> GroupParams {
        GroupParams::new(d, n).unwrap()
    }

    #[test]
    fn g553_sizes() {
        let l = build_nc_lattice(g(5, 3), DEFAULT_ELEMENT_CAP).unwrap();
        assert_eq!(l.len(), 26);
        assert_eq!(l.rank_vector(), vec![1, 12, 12, 1]);
        assert!(l.elements[0].is_identity());
        assert_eq!(l.elements[l.top()], l.gamma);
        assert_eq!(atoms(&l).len(), 12);
        assert_eq!(coatoms(&l).len(), 12);
    }

    #[test]
    fn length_exceeds_codim_off_the_lattice() {
        let p = g(5, 3);
        let u = ColoredPermutation::parse(p, "[1^0]_1 [2^0]_1 [3^0]_3").unwrap();
        assert_eq!(u.codim(), 3);
        assert_eq!(reflection_length(&u), 4);
    }

    #[test]
    fn lengths_are_short_in_symmetric_group() {
        let p = g(1, 5);
        let u = ColoredPermutation::parse(p, "((1^0 3^0)) ((2^0 5^0 4^0))").unwrap();
        assert_eq!(reflection_length(&u), 3);
    }

    #[test]
    fn cap_is_enforced() {
        assert!(matches!(build_nc_lattice(g(5, 3), 10), Err(Error::ResourceCap(_))));
    }

    #[test]
    fn leq_matches_closure() {
        let p = g(3, 3);
        let l = build_nc_lattice(p, DEFAULT_ELEMENT_CAP).unwrap();
        let mut oracle = LengthOracle::new(p);
        for i in 0..l.len() {
            for j in 0..l.len() {
                assert_eq!(leq_t(&mut oracle, &l.elements[i], &l.elements[j]).unwrap(), l.leq(i, j), "{i} {j}");
            }
        }
    }

    #[test]
    fn translation_is_a_cover_preserving_bijection() {
        let l = build_nc_lattice(g(3, 3), DEFAULT_ELEMENT_CAP).unwrap();
        let u = atoms(&l)[0];
        let map = translate_interval(&l, u, u, l.top()).unwrap();
        let image: Vec<usize> = map.iter().map(|&(_, j)| j).collect();
        let target = l.interval(0, map.iter().find(|&&(w, _)| w == l.top()).unwrap().1);
        let mut sorted = image.clone();
        sorted.sort_unstable();
        assert_eq!(sorted, target);
        assert!(translate_interval(&l, l.top(), 0, l.top()).is_err());
    }

    #[test]
    fn factorization_shapes() {
        let p = g(5, 3);
        let l = build_nc_lattice(p, DEFAULT_ELEMENT_CAP).unwrap();
        let w = ColoredPermutation::parse(p, "((1^0 2^0 3^0))").unwrap();
        let f = interval_factorization(&l, l.index_of(&w).unwrap()).unwrap();
        assert_eq!(f.factors.len(), 1);
        assert_eq!(f.factors[0].kind, FactorKind::TypeA(3));
        let w = ColoredPermutation::parse(p, "[2^0]_1 [3^0]_4").unwrap();
        let f = interval_factorization(&l, l.index_of(&w).unwrap()).unwrap();
        assert_eq!(f.factors[0].kind, FactorKind::TypeD { d: 5, m: 2 });
        assert_eq!(l.interval(0, l.index_of(&w).unwrap()).len(), 7);
    }

    #[test]
    fn conjugate_coxeter_elements_small() {
        assert!(nc_isomorphic_all_coxeter(g(2, 3), 4, 7).unwrap());
        assert!(nc_isomorphic_all_coxeter(g(1, 4), 4, 7).unwrap());
    }
}
