use std::collections::{BTreeSet, HashMap};
use std::rc::Rc;

use crate::colored_perm::{ColoredPermutation, Embedding, GroupParams, Reflection};
use crate::error::{Error, Result};
use crate::reflection_order::{build_nc_lattice, factorize, NCLattice, DEFAULT_ELEMENT_CAP};

use super::{first_point_classes, ChunkTag};

type Part = Vec<ColoredPermutation>;

/// A piece of a standard lattice: an interval, or an interval together with
/// its left translate by `mult` (each part `B` becomes `B ∪ mult·B`).
#[derive(Clone, Debug)]
struct Piece {
    bottom: ColoredPermutation,
    top: ColoredPermutation,
    mult: Option<ColoredPermutation>,
    tags: Vec<ChunkTag>,
}

/// Builds symmetric Boolean decompositions recursively. Standard lattices,
/// their pieces and their decompositions are cached per group.
#[derive(Default)]
pub struct Engine {
    lattices: HashMap<GroupParams, Rc<NCLattice>>,
    pieces: HashMap<GroupParams, Rc<Vec<Piece>>>,
    parts: HashMap<GroupParams, Rc<Vec<Part>>>,
}

impl Engine {
    pub fn new() -> Self {
        Self::default()
    }

    fn lattice(&mut self, p: GroupParams) -> Result<Rc<NCLattice>> {
        if let Some(l) = self.lattices.get(&p) {
            return Ok(l.clone());
        }
        let l = Rc::new(build_nc_lattice(p, DEFAULT_ELEMENT_CAP)?);
        self.lattices.insert(p, l.clone());
        Ok(l)
    }

    /// A symmetric Boolean decomposition of `[ε, w]`.
    pub fn below(&mut self, w: &ColoredPermutation) -> Result<Vec<Part>> {
        let f = factorize(w)?;
        let mut acc: Vec<Part> = vec![vec![ColoredPermutation::identity(w.params())]];
        for factor in &f.factors {
            let std_parts = self.standard_parts(factor.standard_params())?;
            let mut next = Vec::with_capacity(acc.len() * std_parts.len());
            for a in &acc {
                for b in std_parts.iter() {
                    let mapped: Vec<ColoredPermutation> = b.iter().map(|v| factor.embedding.apply(v)).collect();
                    next.push(a.iter().flat_map(|x| mapped.iter().map(move |y| x * y)).collect());
                }
            }
            acc = next;
        }
        Ok(acc)
    }

    fn standard_parts(&mut self, p: GroupParams) -> Result<Rc<Vec<Part>>> {
        if let Some(parts) = self.parts.get(&p) {
            return Ok(parts.clone());
        }
        let parts = if p.n == 1 {
            vec![vec![ColoredPermutation::identity(p)]]
        } else if p.d >= 2 && p.n == 2 {
            let l = self.lattice(p)?;
            base_rank_two(&l).into_iter().map(|idx| idx.into_iter().map(|i| l.elements[i].clone()).collect()).collect()
        } else {
            let mut out = Vec::new();
            for piece in self.pieces(p)?.iter() {
                out.extend(self.piece_parts(piece)?);
            }
            out
        };
        let parts = Rc::new(parts);
        self.parts.insert(p, parts.clone());
        Ok(parts)
    }

    fn piece_parts(&mut self, piece: &Piece) -> Result<Vec<Part>> {
        let w = &piece.bottom.inverse() * &piece.top;
        let mut parts: Vec<Part> = self.below(&w)?.into_iter().map(|b| b.iter().map(|v| &piece.bottom * v).collect()).collect();
        if let Some(g) = &piece.mult {
            for b in parts.iter_mut() {
                let shifted: Vec<ColoredPermutation> = b.iter().map(|v| g * v).collect();
                b.extend(shifted);
            }
        }
        Ok(parts)
    }

    fn pieces(&mut self, p: GroupParams) -> Result<Rc<Vec<Piece>>> {
        if let Some(pieces) = self.pieces.get(&p) {
            return Ok(pieces.clone());
        }
        let l = self.lattice(p)?;
        let pieces = Rc::new(self.compute_pieces(&l)?);
        self.pieces.insert(p, pieces.clone());
        Ok(pieces)
    }

    /// Pieces of `l` as tagged index sets of `l`.
    pub(crate) fn local_pieces(&mut self, l: &NCLattice) -> Result<Vec<(Vec<ChunkTag>, Vec<usize>)>> {
        let GroupParams { d, n } = l.params;
        if n == 1 {
            return Ok(vec![(vec![ChunkTag::SuR(1)], vec![0])]);
        }
        if d >= 2 && n == 2 {
            let classes = first_point_classes(l);
            return Ok(base_rank_two(l)
                .into_iter()
                .map(|idx| {
                    let mut tags: Vec<ChunkTag> =
                        classes.iter().filter(|(_, members)| members.iter().any(|m| idx.contains(m))).map(|(&(i, s), _)| ChunkTag::R(i, s)).collect();
                    tags.sort();
                    (tags, idx)
                })
                .collect());
        }
        let pieces = self.compute_pieces(l)?;
        pieces.iter().map(|piece| Ok((piece.tags.clone(), piece_elements(l, piece)?))).collect()
    }

    fn compute_pieces(&mut self, l: &NCLattice) -> Result<Vec<Piece>> {
        if l.params.d == 1 {
            su_pieces(l)
        } else {
            self.rearranged_pieces(l)
        }
    }

    fn rearranged_pieces(&mut self, l: &NCLattice) -> Result<Vec<Piece>> {
        let p = l.params;
        let GroupParams { d, n } = p;
        let classes = first_point_classes(l);
        let class = |i: usize, s: usize| -> Result<&Vec<usize>> {
            classes.get(&(i, s)).ok_or_else(|| Error::Invariant(format!("class R({i},{s}) is empty")))
        };
        let refl = |a: usize, b: usize, s: usize| Reflection { a, b, s }.to_permutation(p);
        let mut pieces = Vec::new();

        let (b, t) = extremes(l, class(1, 0)?)?;
        let g = refl(1, 2, 0);
        expect_translate(l, class(1, 0)?, &g, class(2, 0)?, "R(1,0) -> R(2,0)")?;
        pieces.push(Piece { bottom: b, top: t, mult: Some(g), tags: vec![ChunkTag::R(1, 0), ChunkTag::R(2, 0)] });

        for i in 3..n {
            for s in [0, d - 1] {
                let (b, t) = extremes(l, class(i, s)?)?;
                pieces.push(Piece { bottom: b, top: t, mult: None, tags: vec![ChunkTag::R(i, s)] });
            }
        }
        for s in 0..d - 1 {
            let (b, t) = extremes(l, class(n, s)?)?;
            pieces.push(Piece { bottom: b, top: t, mult: None, tags: vec![ChunkTag::R(n, s)] });
        }

        let last = class(n, d - 1)?;
        let f1 = refl(1, n, d - 2);
        let f2 = refl(2, n, 0);
        let e1 = translate_set(l, class(1, 1)?, &f1)?;
        let e2 = translate_set(l, class(2, d - 1)?, &f2)?;
        let last_set: BTreeSet<usize> = last.iter().copied().collect();
        if !e1.is_subset(&last_set) || !e2.is_subset(&last_set) || !e1.is_disjoint(&e2) {
            return Err(Error::Invariant("E1 and E2 are not disjoint subsets of R(n,d-1)".into()));
        }
        let (b, t) = extremes(l, class(1, 1)?)?;
        pieces.push(Piece { bottom: b, top: t, mult: Some(f1), tags: vec![ChunkTag::D1] });
        let (b, t) = extremes(l, class(2, d - 1)?)?;
        pieces.push(Piece { bottom: b, top: t, mult: Some(f2), tags: vec![ChunkTag::D2] });

        let rest: BTreeSet<usize> = last_set.difference(&e1).copied().filter(|x| !e2.contains(x)).collect();
        if !rest.is_empty() {
            let covered: BTreeSet<usize> = e1.union(&e2).copied().collect();
            pieces.extend(self.leftover_pieces(l, last, &covered, &rest)?);
        }
        Ok(pieces)
    }

    /// Splits `D = R(n,d-1) \ (E1 ∪ E2)`. Translating `R(n,d-1)` down by its
    /// bottom gives the lower interval of a cycle; for the right starting point
    /// of that cycle, the merged first class of the symmetric-group pieces is
    /// exactly the image of `E1 ∪ E2`, and the remaining classes tile `D`.
    fn leftover_pieces(&mut self, l: &NCLattice, last: &[usize], covered: &BTreeSet<usize>, rest: &BTreeSet<usize>) -> Result<Vec<Piece>> {
        let p = l.params;
        let (u, top) = extremes(l, last)?;
        let w = &u.inverse() * &top;
        let cycle = w
            .cycle_decomposition()
            .into_iter()
            .filter(|c| !c.is_trivial())
            .collect::<Vec<_>>();
        if cycle.len() != 1 || cycle[0].color_sum() != 0 {
            return Err(Error::Invariant(format!("top of R(n,d-1) translates to {w}, not a single cycle")));
        }
        let pts = &cycle[0].points;
        let r = pts.len();
        let sym = GroupParams::symmetric(r)?;
        let std_lattice = self.lattice(sym)?;
        let std_pieces = self.pieces(sym)?;
        let want: BTreeSet<ColoredPermutation> = covered.iter().map(|&i| l.elements[i].clone()).collect();
        for rot in 0..r {
            let emb = Embedding::new(
                sym,
                p,
                (0..r).map(|j| pts[(rot + j) % r].index).collect(),
                (0..r).map(|j| pts[(rot + j) % r].color).collect(),
            )?;
            let first = &std_pieces[0];
            let got: BTreeSet<ColoredPermutation> =
                piece_elements(&std_lattice, first)?.into_iter().map(|i| &u * &emb.apply(&std_lattice.elements[i])).collect();
            if got != want {
                continue;
            }
            let mut out = Vec::new();
            let mut seen = BTreeSet::new();
            for sp in std_pieces.iter().skip(1) {
                let piece = Piece { bottom: &u * &emb.apply(&sp.bottom), top: &u * &emb.apply(&sp.top), mult: None, tags: vec![ChunkTag::D] };
                seen.extend(piece_elements(l, &piece)?);
                out.push(piece);
            }
            if &seen != rest {
                return Err(Error::Invariant("leftover pieces do not tile D".into()));
            }
            return Ok(out);
        }
        Err(Error::Invariant(format!("no starting point of {w} matches E1 ∪ E2")))
    }
}

/// The rank-two base case: the four elements `ε`, `((1 2))^0`, `((1 2))^(d-1)`, `γ`
/// form a square; every other atom is a singleton.
fn base_rank_two(l: &NCLattice) -> Vec<Vec<usize>> {
    let p = l.params;
    let a = l.index_of(&Reflection { a: 1, b: 2, s: 0 }.to_permutation(p)).expect("atom");
    let b = l.index_of(&Reflection { a: 1, b: 2, s: p.d - 1 }.to_permutation(p)).expect("atom");
    let mut square = vec![0, a, b, l.top()];
    square.sort_unstable();
    let mut parts = vec![square];
    for i in 1..l.top() {
        if i != a && i != b {
            parts.push(vec![i]);
        }
    }
    parts
}

fn su_pieces(l: &NCLattice) -> Result<Vec<Piece>> {
    let p = l.params;
    let classes = first_point_classes(l);
    let class = |i: usize| classes.get(&(i, 0)).ok_or_else(|| Error::Invariant(format!("class SU_R({i}) is empty")));
    let g = Reflection { a: 1, b: 2, s: 0 }.to_permutation(p);
    expect_translate(l, class(1)?, &g, class(2)?, "SU_R(1) -> SU_R(2)")?;
    let (b, t) = extremes(l, class(1)?)?;
    let mut pieces = vec![Piece { bottom: b, top: t, mult: Some(g), tags: vec![ChunkTag::SuR(1), ChunkTag::SuR(2)] }];
    for i in 3..=p.n {
        let (b, t) = extremes(l, class(i)?)?;
        pieces.push(Piece { bottom: b, top: t, mult: None, tags: vec![ChunkTag::SuR(i)] });
    }
    Ok(pieces)
}

/// Unique lowest and highest elements of a class.
fn extremes(l: &NCLattice, members: &[usize]) -> Result<(ColoredPermutation, ColoredPermutation)> {
    let lo = members.iter().map(|&i| l.ranks[i]).min().unwrap();
    let hi = members.iter().map(|&i| l.ranks[i]).max().unwrap();
    let lows: Vec<usize> = members.iter().copied().filter(|&i| l.ranks[i] == lo).collect();
    let highs: Vec<usize> = members.iter().copied().filter(|&i| l.ranks[i] == hi).collect();
    if lows.len() != 1 || highs.len() != 1 {
        return Err(Error::Invariant(format!("class of {} elements has no unique bottom and top", members.len())));
    }
    Ok((l.elements[lows[0]].clone(), l.elements[highs[0]].clone()))
}

fn translate_set(l: &NCLattice, members: &[usize], g: &ColoredPermutation) -> Result<BTreeSet<usize>> {
    members
        .iter()
        .map(|&i| {
            let img = g * &l.elements[i];
            l.index_of(&img).ok_or_else(|| Error::Invariant(format!("{img} is not in the lattice")))
        })
        .collect()
}

fn expect_translate(l: &NCLattice, from: &[usize], g: &ColoredPermutation, to: &[usize], what: &str) -> Result<()> {
    let img = translate_set(l, from, g)?;
    if img != to.iter().copied().collect() {
        return Err(Error::Invariant(format!("translation {what} is not a bijection")));
    }
    Ok(())
}

fn piece_elements(l: &NCLattice, piece: &Piece) -> Result<Vec<usize>> {
    let find = |u: &ColoredPermutation| l.index_of(u).ok_or_else(|| Error::Invariant(format!("{u} is not in the lattice")));
    let (b, t) = (find(&piece.bottom)?, find(&piece.top)?);
    let mut out = l.interval(b, t);
    if let Some(g) = &piece.mult {
        let shifted = out.iter().map(|&i| find(&(g * &l.elements[i]))).collect::<Result<Vec<_>>>()?;
        out.extend(shifted);
    }
    out.sort_unstable();
    out.dedup();
    Ok(out)
}
