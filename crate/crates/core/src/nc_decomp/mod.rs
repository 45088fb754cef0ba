//! Decompositions of noncrossing partition lattices: the first-point chunks,
//! the rearranged symmetric decomposition, symmetric Boolean decompositions
//! and the chains derived from them.

mod engine;
pub mod recursion;

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::colored_perm::{ColoredPermutation, ColoredPoint, GroupParams};
use crate::error::{Error, Result};
use crate::poset_core::{boolean_certificate, transitive_closure, Decomposition, GradedPoset, Part, PartType};
use crate::reflection_order::NCLattice;

pub use engine::Engine;
pub use recursion::{rank_recursion, rank_recursion_printed, printed_discrepancies, Discrepancy};

/// Label of a chunk or piece. Serialized as `R(i,s)`, `D1`, `D2`, `D`, `E1`, `E2` or `SU_R(i)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ChunkTag {
    /// Elements sending `1^0` to `i^s`.
    R(usize, usize),
    D1,
    D2,
    D,
    E1,
    E2,
    /// Symmetric-group class of elements sending 1 to `i`.
    SuR(usize),
}

impl fmt::Display for ChunkTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ChunkTag::R(i, s) => write!(f, "R({i},{s})"),
            ChunkTag::D1 => f.write_str("D1"),
            ChunkTag::D2 => f.write_str("D2"),
            ChunkTag::D => f.write_str("D"),
            ChunkTag::E1 => f.write_str("E1"),
            ChunkTag::E2 => f.write_str("E2"),
            ChunkTag::SuR(i) => write!(f, "SU_R({i})"),
        }
    }
}

impl FromStr for ChunkTag {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Precondition(format!("unknown chunk tag '{s}'"));
        match s {
            "D1" => return Ok(ChunkTag::D1),
            "D2" => return Ok(ChunkTag::D2),
            "D" => return Ok(ChunkTag::D),
            "E1" => return Ok(ChunkTag::E1),
            "E2" => return Ok(ChunkTag::E2),
            _ => {}
        }
        if let Some(inner) = s.strip_prefix("SU_R(").and_then(|r| r.strip_suffix(')')) {
            return inner.parse().map(ChunkTag::SuR).map_err(|_| bad());
        }
        if let Some(inner) = s.strip_prefix("R(").and_then(|r| r.strip_suffix(')')) {
            let (i, t) = inner.split_once(',').ok_or_else(bad)?;
            return Ok(ChunkTag::R(i.trim().parse().map_err(|_| bad())?, t.trim().parse().map_err(|_| bad())?));
        }
        Err(bad())
    }
}

impl Serialize for ChunkTag {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for ChunkTag {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// A factor in the product shape of a chunk.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum ProductFactor {
    /// The two-element chain.
    Chain2,
    /// `NC(G(1,1,k))`.
    TypeA(usize),
    /// `NC(G(d,d,m))`.
    TypeD { d: usize, m: usize },
}

/// A direct product of small lattices; the empty product is a point.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProductType(pub Vec<ProductFactor>);

impl ProductType {
    fn normalized(factors: Vec<ProductFactor>) -> Self {
        ProductType(
            factors
                .into_iter()
                .filter(|f| !matches!(f, ProductFactor::TypeA(k) if *k <= 1) && !matches!(f, ProductFactor::TypeD { m, .. } if *m <= 1))
                .collect(),
        )
    }

    /// Rank vector of the product.
    pub fn rank_vector(&self) -> Result<Vec<u128>> {
        let mut acc = vec![1u128];
        for f in &self.0 {
            let v: Vec<u128> = match *f {
                ProductFactor::Chain2 => vec![1, 1],
                ProductFactor::TypeA(k) => (1..=k).map(|j| crate::cli_io::narayana(k as u64, j as u64)).collect(),
                ProductFactor::TypeD { d, m } => rank_recursion(d, m)?,
            };
            let mut next = vec![0u128; acc.len() + v.len() - 1];
            for (i, a) in acc.iter().enumerate() {
                for (j, b) in v.iter().enumerate() {
                    next[i + j] += a * b;
                }
            }
            acc = next;
        }
        Ok(acc)
    }

    pub fn size(&self) -> Result<u128> {
        Ok(self.rank_vector()?.iter().sum())
    }
}

impl fmt::Display for ProductType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("point");
        }
        let parts: Vec<String> = self
            .0
            .iter()
            .map(|p| match p {
                ProductFactor::Chain2 => "2".to_string(),
                ProductFactor::TypeA(k) => format!("NC(G(1,1,{k}))"),
                ProductFactor::TypeD { d, m } => format!("NC(G({d},{d},{m}))"),
            })
            .collect();
        f.write_str(&parts.join(" x "))
    }
}

/// A part given by lattice indices, with its tags and, for chunks, its product shape.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TaggedPart {
    pub elements: Vec<usize>,
    pub tags: Vec<ChunkTag>,
    pub product: Option<ProductType>,
}

/// Converts tagged parts into a plain decomposition, sorted by smallest element.
pub fn to_decomposition(parts: &[TaggedPart], declared: impl Fn(&TaggedPart) -> PartType) -> Decomposition {
    let mut out: Vec<Part> = parts
        .iter()
        .map(|tp| {
            let mut p = Part::new(tp.elements.clone(), declared(tp));
            p.tags = tp.tags.iter().map(ChunkTag::to_string).collect();
            p
        })
        .collect();
    out.sort_by_key(|p| p.elements[0]);
    Decomposition { parts: out }
}

fn require_standard(l: &NCLattice) -> Result<()> {
    if l.gamma != ColoredPermutation::coxeter_element(l.params) {
        return Err(Error::Precondition(format!("lattice is not built on the standard Coxeter element of {}", l.params)));
    }
    Ok(())
}

/// Groups lattice elements by the image of `1^0`.
pub(crate) fn first_point_classes(l: &NCLattice) -> BTreeMap<(usize, usize), Vec<usize>> {
    let mut classes: BTreeMap<(usize, usize), Vec<usize>> = BTreeMap::new();
    for (idx, u) in l.elements.iter().enumerate() {
        let p = u.apply(ColoredPoint { index: 1, color: 0 });
        classes.entry((p.index, p.color)).or_default().push(idx);
    }
    classes
}

/// Splits `NC(G(d,d,n), γ)` by the image of `1^0`, merging the classes of
/// `1^0` and `2^0` when `n > 2`. Fails if the pattern of empty classes is not
/// the expected one.
pub fn chunk_decompose(l: &NCLattice) -> Result<Vec<TaggedPart>> {
    require_standard(l)?;
    let GroupParams { d, n } = l.params;
    if d < 2 {
        return Err(Error::Precondition("chunk decomposition needs d >= 2; use su_decompose for the symmetric group".into()));
    }
    let classes = first_point_classes(l);
    for i in 1..=n {
        for s in 0..d {
            let expected = if i == 1 {
                s <= 1
            } else if i < n {
                s == 0 || s == d - 1
            } else {
                true
            };
            if classes.contains_key(&(i, s)) != expected {
                return Err(Error::Invariant(format!(
                    "class R({i},{s}) is {} but should be {}",
                    if expected { "empty" } else { "nonempty" },
                    if expected { "nonempty" } else { "empty" }
                )));
            }
        }
    }
    let shape = |i: usize, s: usize| -> Vec<ProductFactor> {
        use ProductFactor::*;
        if n == 2 {
            return vec![];
        }
        match (i, s) {
            (1, 1) | (2, _) => vec![TypeA(n - 2)],
            (i, _) if i == n => vec![TypeA(n - 1)],
            (i, 0) => vec![TypeD { d, m: n - i + 1 }, TypeA(i - 2)],
            (i, _) => vec![TypeA(n - i), TypeD { d, m: i - 1 }],
        }
    };
    let mut parts = Vec::new();
    for (&(i, s), members) in &classes {
        if n > 2 && (i, s) == (2, 0) {
            continue;
        }
        if n > 2 && (i, s) == (1, 0) {
            let mut elements = members.clone();
            elements.extend(&classes[&(2, 0)]);
            elements.sort_unstable();
            parts.push(TaggedPart {
                elements,
                tags: vec![ChunkTag::R(1, 0), ChunkTag::R(2, 0)],
                product: Some(ProductType::normalized(vec![ProductFactor::Chain2, ProductFactor::TypeD { d, m: n - 1 }])),
            });
            continue;
        }
        let product = if (i, s) == (1, 0) { vec![] } else { shape(i, s) };
        parts.push(TaggedPart { elements: members.clone(), tags: vec![ChunkTag::R(i, s)], product: Some(ProductType::normalized(product)) });
    }
    parts.sort_by_key(|p| p.elements[0]);
    Ok(parts)
}

/// Classes of `NC(S_n)` by the image of 1, with the first two merged.
pub fn su_decompose(l: &NCLattice) -> Result<Vec<TaggedPart>> {
    require_standard(l)?;
    if l.params.d != 1 {
        return Err(Error::Precondition("su_decompose expects the symmetric group".into()));
    }
    let mut engine = Engine::new();
    let mut parts = engine.local_pieces(l)?.into_iter().map(|(tags, elements)| TaggedPart { elements, tags, product: None }).collect::<Vec<_>>();
    parts.sort_by_key(|p| p.elements[0]);
    Ok(parts)
}

/// The rearranged symmetric decomposition of `NC(G(d,d,n), γ)`, with the
/// leftover set `D` split into its symmetric pieces.
pub fn rearranged_decompose(l: &NCLattice) -> Result<Vec<TaggedPart>> {
    require_standard(l)?;
    if l.params.d < 2 {
        return Err(Error::Precondition("rearranged decomposition needs d >= 2".into()));
    }
    let mut engine = Engine::new();
    let mut parts = engine.local_pieces(l)?.into_iter().map(|(tags, elements)| TaggedPart { elements, tags, product: None }).collect::<Vec<_>>();
    parts.sort_by_key(|p| p.elements[0]);
    Ok(parts)
}

/// A symmetric Boolean decomposition of `l`, parts sorted by smallest element.
pub fn sbd(l: &NCLattice) -> Result<Decomposition> {
    let mut engine = Engine::new();
    sbd_with(&mut engine, l)
}

pub fn sbd_with(engine: &mut Engine, l: &NCLattice) -> Result<Decomposition> {
    let parts = engine.below(&l.gamma)?;
    let mut out = Vec::with_capacity(parts.len());
    for part in parts {
        let mut idx = Vec::with_capacity(part.len());
        for u in &part {
            idx.push(l.index_of(u).ok_or_else(|| Error::Invariant(format!("{u} is not below the Coxeter element")))?);
        }
        let k = idx.len().trailing_zeros() as usize;
        out.push(Part::new(idx, PartType::BooleanOfRank(k)));
    }
    out.sort_by_key(|p| p.elements[0]);
    Ok(Decomposition { parts: out })
}

/// Symmetric chains from Boolean parts: each part is split by parenthesis
/// matching on its subset encoding.
pub fn scd_from_sbd(p: &GradedPoset, dec: &Decomposition) -> Result<Decomposition> {
    let closure = transitive_closure(p);
    let mut chains = Vec::new();
    for (idx, part) in dec.parts.iter().enumerate() {
        let cert = boolean_certificate(&closure, &part.elements)
            .ok_or_else(|| Error::Precondition(format!("part {idx} is not a Boolean lattice")))?;
        let mut groups: BTreeMap<u32, Vec<(u32, usize)>> = BTreeMap::new();
        for (pos, &mask) in cert.masks.iter().enumerate() {
            let unmatched = unmatched_positions(mask, cert.rank);
            groups.entry(mask & !unmatched).or_default().push((mask.count_ones(), part.elements[pos]));
        }
        for (_, mut chain) in groups {
            chain.sort_unstable();
            let elements: Vec<usize> = chain.into_iter().map(|(_, e)| e).collect();
            let len = elements.len();
            chains.push(Part::new(elements, PartType::Chain(len)));
        }
    }
    chains.sort_by_key(|p| p.elements[0]);
    Ok(Decomposition { parts: chains })
}

/// Positions left unmatched when set bits act as closing and clear bits as opening brackets.
fn unmatched_positions(mask: u32, k: usize) -> u32 {
    let mut open: Vec<usize> = Vec::new();
    let mut unmatched = 0u32;
    for i in 0..k {
        if mask >> i & 1 == 0 {
            open.push(i);
        } else if open.pop().is_none() {
            unmatched |= 1 << i;
        }
    }
    for i in open {
        unmatched |= 1 << i;
    }
    unmatched
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::reflection_order::{build_nc_lattice, DEFAULT_ELEMENT_CAP};

    fn lattice(d: usize, n: usize) -> NCLattice {
        build_nc_lattice(GroupParams::new(d, n).unwrap(), DEFAULT_ELEMENT_CAP).unwrap()
    }

    #[test]
    fn tag_round_trip() {
        for tag in [ChunkTag::R(3, 4), ChunkTag::D1, ChunkTag::D2, ChunkTag::D, ChunkTag::E1, ChunkTag::E2, ChunkTag::SuR(5)] {
            assert_eq!(tag.to_string().parse::<ChunkTag>().unwrap(), tag);
        }
        assert_eq!(serde_json::to_string(&ChunkTag::R(1, 0)).unwrap(), "\"R(1,0)\"");
        assert!("Q(1)".parse::<ChunkTag>().is_err());
    }

    #[test]
    fn chunk_sizes_g553() {
        let l = lattice(5, 3);
        let parts = chunk_decompose(&l).unwrap();
        let sizes: BTreeMap<String, usize> = parts.iter().map(|p| (p.tags[0].to_string(), p.elements.len())).collect();
        assert_eq!(sizes["R(1,0)"], 14);
        assert_eq!(sizes["R(1,1)"], 1);
        assert_eq!(sizes["R(2,4)"], 1);
        for s in 0..5 {
            assert_eq!(sizes[&format!("R(3,{s})")], 2);
        }
        assert_eq!(parts.len(), 8);
    }

    #[test]
    fn su_sizes_n4() {
        let l = lattice(1, 4);
        let mut sizes: Vec<usize> = su_decompose(&l).unwrap().iter().map(|p| p.elements.len()).collect();
        sizes.sort_unstable();
        assert_eq!(sizes, vec![2, 2, 10]);
    }

    #[test]
    fn rearranged_part_count_g224() {
        let parts = rearranged_decompose(&lattice(2, 4)).unwrap();
        assert_eq!(parts.len(), 7);
        assert_eq!(parts.iter().filter(|p| p.tags == vec![ChunkTag::D]).count(), 1);
    }

    #[test]
    fn bracketing_on_b3() {
        let mut groups: BTreeMap<u32, usize> = BTreeMap::new();
        for mask in 0..8u32 {
            *groups.entry(mask & !unmatched_positions(mask, 3)).or_default() += 1;
        }
        let mut lens: Vec<usize> = groups.into_values().collect();
        lens.sort_unstable();
        assert_eq!(lens, vec![2, 2, 4]);
    }

    #[test]
    fn product_type_display() {
        let t = ProductType::normalized(vec![ProductFactor::Chain2, ProductFactor::TypeD { d: 5, m: 2 }, ProductFactor::TypeA(1)]);
        assert_eq!(t.to_string(), "2 x NC(G(5,5,2))");
        assert_eq!(t.rank_vector().unwrap(), vec![1, 6, 6, 1]);
        assert_eq!(ProductType(vec![]).to_string(), "point");
    }
}
