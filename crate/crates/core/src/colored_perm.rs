//! Colored permutations: the monomial model of `G(d,d,n)`.
//!
//! An element is stored as its image list: point `k` goes to `target(k)` and
//! picks up `shift(k)` colors, so `k^s` maps to `target(k)^(s + shift(k) mod d)`.
//! The shifts of a member of `G(d,d,n)` sum to zero mod `d`. With `d = 1`
//! this is the symmetric group.

use std::fmt;

use rand::Rng;
use serde::{Deserialize, Serialize};
use smallvec::SmallVec;

use crate::error::{Error, Result};

/// The pair `(d, n)` naming `G(d,d,n)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct GroupParams {
    pub d: usize,
    pub n: usize,
}

impl GroupParams {
    pub fn new(d: usize, n: usize) -> Result<Self> {
        if d == 0 || n == 0 {
            return Err(Error::InvalidParams(format!("d and n must be positive (got d={d}, n={n})")));
        }
        if d >= 2 && n < 2 {
            return Err(Error::InvalidParams(format!("G({d},{d},{n}) needs n >= 2")));
        }
        if d > 255 || n > 255 {
            return Err(Error::InvalidParams(format!("d={d}, n={n} out of supported range")));
        }
        Ok(GroupParams { d, n })
    }

    /// The symmetric group on `n` letters, `G(1,1,n)`.
    pub fn symmetric(n: usize) -> Result<Self> {
        Self::new(1, n)
    }

    pub fn reflection_count(&self) -> usize {
        self.d * self.n * (self.n - 1) / 2
    }
}

impl fmt::Display for GroupParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "G({},{},{})", self.d, self.d, self.n)
    }
}

/// A point `index^color`; indices are 1-based.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ColoredPoint {
    pub index: usize,
    pub color: usize,
}

/// The two kinds of generalized cycle.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum CycleKind {
    /// `((k1^t1 ... kr^tr))`, color sum zero.
    Simultaneous,
    /// `[k1^t1 ... kr^tr]_s` with color sum `s != 0`.
    Balanced(usize),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct GenCycle {
    pub points: Vec<ColoredPoint>,
    pub kind: CycleKind,
}

impl GenCycle {
    pub fn simultaneous(points: &[(usize, usize)]) -> Self {
        GenCycle { points: points.iter().map(|&(index, color)| ColoredPoint { index, color }).collect(), kind: CycleKind::Simultaneous }
    }

    pub fn balanced(points: &[(usize, usize)], sum: usize) -> Self {
        GenCycle { points: points.iter().map(|&(index, color)| ColoredPoint { index, color }).collect(), kind: CycleKind::Balanced(sum) }
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Color sum of the cycle (0 for simultaneous cycles).
    pub fn color_sum(&self) -> usize {
        match self.kind {
            CycleKind::Simultaneous => 0,
            CycleKind::Balanced(s) => s,
        }
    }

    pub fn is_trivial(&self) -> bool {
        self.points.len() == 1 && self.kind == CycleKind::Simultaneous
    }
}

impl fmt::Display for GenCycle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let body: Vec<String> = self.points.iter().map(|p| format!("{}^{}", p.index, p.color)).collect();
        match self.kind {
            CycleKind::Simultaneous => write!(f, "(({}))", body.join(" ")),
            CycleKind::Balanced(s) => write!(f, "[{}]_{}", body.join(" "), s),
        }
    }
}

/// The reflection `((a b))^s`: swaps `a` and `b`, sending `a^0` to `b^s` and `b^0` to `a^(d-s)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Reflection {
    pub a: usize,
    pub b: usize,
    pub s: usize,
}

impl Reflection {
    pub fn to_permutation(&self, params: GroupParams) -> ColoredPermutation {
        let mut image: SmallVec<[(u8, u8); 8]> = (0..params.n).map(|k| (k as u8, 0u8)).collect();
        let (a, b) = (self.a - 1, self.b - 1);
        image[a] = (b as u8, (self.s % params.d) as u8);
        image[b] = (a as u8, ((params.d - self.s % params.d) % params.d) as u8);
        ColoredPermutation { params, image }
    }

    /// Recognizes `u` as a reflection, if it is one.
    pub fn from_permutation(u: &ColoredPermutation) -> Option<Reflection> {
        let moved: Vec<usize> = (0..u.params.n).filter(|&k| u.image[k].0 as usize != k || u.image[k].1 != 0).collect();
        if moved.len() != 2 {
            return None;
        }
        let (a, b) = (moved[0], moved[1]);
        if u.image[a].0 as usize != b {
            return None;
        }
        Some(Reflection { a: a + 1, b: b + 1, s: u.image[a].1 as usize })
    }
}

impl fmt::Display for Reflection {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(({}^0 {}^{}))", self.a, self.b, self.s)
    }
}

/// An element of `G(d,d,n)`. Ordering and hashing follow the flat image list,
/// which is also the canonical encoding used for deduplication.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ColoredPermutation {
    params: GroupParams,
    image: SmallVec<[(u8, u8); 8]>,
}

impl ColoredPermutation {
    pub fn identity(params: GroupParams) -> Self {
        ColoredPermutation { params, image: (0..params.n).map(|k| (k as u8, 0u8)).collect() }
    }

    /// Builds an element from 1-based targets and shifts.
    pub fn from_images(params: GroupParams, targets: &[usize], shifts: &[usize]) -> Result<Self> {
        let n = params.n;
        if targets.len() != n || shifts.len() != n {
            return Err(Error::InvalidElement(format!("expected {n} images")));
        }
        let mut seen = vec![false; n];
        for &t in targets {
            if t == 0 || t > n || seen[t - 1] {
                return Err(Error::InvalidElement(format!("targets {targets:?} are not a permutation of 1..={n}")));
            }
            seen[t - 1] = true;
        }
        if let Some(&s) = shifts.iter().find(|&&s| s >= params.d) {
            return Err(Error::InvalidElement(format!("shift {s} out of range for d={}", params.d)));
        }
        if shifts.iter().sum::<usize>() % params.d != 0 {
            return Err(Error::InvalidElement(format!("shifts {shifts:?} do not sum to 0 mod {}", params.d)));
        }
        let image = targets.iter().zip(shifts).map(|(&t, &s)| ((t - 1) as u8, s as u8)).collect();
        Ok(ColoredPermutation { params, image })
    }

    pub fn params(&self) -> GroupParams {
        self.params
    }

    /// 1-based image index of point `k`.
    pub fn target(&self, k: usize) -> usize {
        self.image[k - 1].0 as usize + 1
    }

    pub fn shift(&self, k: usize) -> usize {
        self.image[k - 1].1 as usize
    }

    pub fn is_identity(&self) -> bool {
        self.image.iter().enumerate().all(|(k, &(t, s))| t as usize == k && s == 0)
    }

    /// `self ∘ other`: `other` acts first.
    pub fn compose(&self, other: &ColoredPermutation) -> Result<ColoredPermutation> {
        if self.params != other.params {
            return Err(Error::ParamMismatch(format!("{} vs {}", self.params, other.params)));
        }
        Ok(self.mul(other))
    }

    fn mul(&self, other: &ColoredPermutation) -> ColoredPermutation {
        let d = self.params.d;
        let image = other
            .image
            .iter()
            .map(|&(t, s)| {
                let (t2, s2) = self.image[t as usize];
                (t2, ((s as usize + s2 as usize) % d) as u8)
            })
            .collect();
        ColoredPermutation { params: self.params, image }
    }

    pub fn inverse(&self) -> ColoredPermutation {
        let d = self.params.d;
        let mut image: SmallVec<[(u8, u8); 8]> = SmallVec::from_elem((0, 0), self.params.n);
        for (k, &(t, s)) in self.image.iter().enumerate() {
            image[t as usize] = (k as u8, ((d - s as usize) % d) as u8);
        }
        ColoredPermutation { params: self.params, image }
    }

    pub fn apply(&self, p: ColoredPoint) -> ColoredPoint {
        let (t, s) = self.image[p.index - 1];
        ColoredPoint { index: t as usize + 1, color: (p.color + s as usize) % self.params.d }
    }

    /// All reflections of the group, ordered by `(a, b, s)`.
    pub fn reflections(params: GroupParams) -> Vec<Reflection> {
        let mut out = Vec::with_capacity(params.reflection_count());
        for a in 1..=params.n {
            for b in a + 1..=params.n {
                for s in 0..params.d {
                    out.push(Reflection { a, b, s });
                }
            }
        }
        out
    }

    /// Generalized cycles, ordered by smallest index. Each cycle starts at its
    /// smallest index with color 0; fixed points appear as `((k^0))`.
    pub fn cycle_decomposition(&self) -> Vec<GenCycle> {
        let d = self.params.d;
        let mut seen = vec![false; self.params.n];
        let mut cycles = Vec::new();
        for start in 0..self.params.n {
            if seen[start] {
                continue;
            }
            let mut points = Vec::new();
            let (mut k, mut c) = (start, 0usize);
            loop {
                seen[k] = true;
                points.push(ColoredPoint { index: k + 1, color: c });
                let (t, s) = self.image[k];
                c = (c + s as usize) % d;
                k = t as usize;
                if k == start {
                    break;
                }
            }
            let kind = if c == 0 { CycleKind::Simultaneous } else { CycleKind::Balanced(c) };
            cycles.push(GenCycle { points, kind });
        }
        cycles
    }

    pub fn from_cycles(params: GroupParams, cycles: &[GenCycle]) -> Result<ColoredPermutation> {
        let d = params.d;
        let mut image: SmallVec<[(u8, u8); 8]> = (0..params.n).map(|k| (k as u8, 0u8)).collect();
        let mut used = vec![false; params.n];
        let mut total = 0usize;
        for cyc in cycles {
            if cyc.points.is_empty() {
                return Err(Error::InvalidElement("empty cycle".into()));
            }
            let sum = match cyc.kind {
                CycleKind::Simultaneous => 0,
                CycleKind::Balanced(s) if s % d != 0 => s % d,
                CycleKind::Balanced(s) => return Err(Error::InvalidElement(format!("balanced cycle {cyc} has subscript {s} = 0 mod {d}"))),
            };
            for p in &cyc.points {
                if p.index == 0 || p.index > params.n {
                    return Err(Error::InvalidElement(format!("index {} out of range 1..={}", p.index, params.n)));
                }
                if p.color >= d {
                    return Err(Error::InvalidElement(format!("color {} out of range for d={d}", p.color)));
                }
                if used[p.index - 1] {
                    return Err(Error::InvalidElement(format!("index {} appears in more than one cycle", p.index)));
                }
                used[p.index - 1] = true;
            }
            let r = cyc.points.len();
            for i in 0..r {
                let (p, q) = (cyc.points[i], cyc.points[(i + 1) % r]);
                let extra = if i + 1 == r { sum } else { 0 };
                let shift = (q.color + extra + d - p.color) % d;
                image[p.index - 1] = ((q.index - 1) as u8, shift as u8);
            }
            total += sum;
        }
        if !total.is_multiple_of(d) {
            return Err(Error::InvalidElement(format!("color sum {total} is not 0 mod {d}")));
        }
        Ok(ColoredPermutation { params, image })
    }

    /// Dimension of the fixed space: cycles whose color sum vanishes.
    pub fn fix_dim(&self) -> usize {
        let d = self.params.d;
        let mut seen: SmallVec<[bool; 8]> = SmallVec::from_elem(false, self.params.n);
        let mut count = 0;
        for start in 0..self.params.n {
            if seen[start] {
                continue;
            }
            let (mut k, mut c) = (start, 0usize);
            loop {
                seen[k] = true;
                let (t, s) = self.image[k];
                c += s as usize;
                k = t as usize;
                if k == start {
                    break;
                }
            }
            if c % d == 0 {
                count += 1;
            }
        }
        count
    }

    /// `n - fix_dim`, a lower bound on reflection length.
    pub fn codim(&self) -> usize {
        self.params.n - self.fix_dim()
    }

    /// The standard Coxeter element: the long cycle for `d = 1`,
    /// otherwise `[1^0 ... (n-1)^0]_1 [n^0]_(d-1)`.
    pub fn coxeter_element(params: GroupParams) -> ColoredPermutation {
        let n = params.n;
        if params.d == 1 {
            let targets: Vec<usize> = (1..=n).map(|k| k % n + 1).collect();
            return Self::from_images(params, &targets, &vec![0; n]).expect("long cycle");
        }
        let mut targets: Vec<usize> = (1..n).map(|k| if k + 1 < n { k + 1 } else { 1 }).collect();
        targets.push(n);
        let mut shifts = vec![0; n];
        shifts[n - 2] = 1;
        shifts[n - 1] = params.d - 1;
        Self::from_images(params, &targets, &shifts).expect("coxeter element")
    }

    /// Flat canonical encoding `(target(1), shift(1), ..., target(n), shift(n))`, 1-based targets.
    pub fn canonical_key(&self) -> Vec<u32> {
        self.image.iter().flat_map(|&(t, s)| [t as u32 + 1, s as u32]).collect()
    }

    /// Parses cycle notation such as `((1^0 3^4 2^4))` or `[1^0 2^0]_1 [3^0]_4`.
    pub fn parse(params: GroupParams, text: &str) -> Result<ColoredPermutation> {
        let cycles = parse_cycles(text)?;
        Self::from_cycles(params, &cycles)
    }

    /// Uniform random element.
    pub fn random<R: Rng + ?Sized>(params: GroupParams, rng: &mut R) -> ColoredPermutation {
        let n = params.n;
        let mut targets: Vec<usize> = (1..=n).collect();
        for i in (1..n).rev() {
            let j = rng.gen_range(0..=i);
            targets.swap(i, j);
        }
        let mut shifts: Vec<usize> = (0..n).map(|_| rng.gen_range(0..params.d)).collect();
        let partial: usize = shifts[..n - 1].iter().sum();
        shifts[n - 1] = (params.d - partial % params.d) % params.d;
        Self::from_images(params, &targets, &shifts).expect("random element")
    }

    /// Restriction to a set of points stable under `self`; other points are fixed.
    pub fn restrict(&self, support: &[usize]) -> Result<ColoredPermutation> {
        let mut image: SmallVec<[(u8, u8); 8]> = (0..self.params.n).map(|k| (k as u8, 0u8)).collect();
        let mut inside = vec![false; self.params.n];
        for &k in support {
            inside[k - 1] = true;
        }
        let mut total = 0;
        for &k in support {
            let (t, s) = self.image[k - 1];
            if !inside[t as usize] {
                return Err(Error::InvalidElement(format!("support is not stable: {k} maps outside")));
            }
            image[k - 1] = (t, s);
            total += s as usize;
        }
        if total % self.params.d != 0 {
            return Err(Error::InvalidElement("restriction leaves G(d,d,n)".into()));
        }
        Ok(ColoredPermutation { params: self.params, image })
    }
}

impl<'a> std::ops::Mul<&'a ColoredPermutation> for &'a ColoredPermutation {
    type Output = ColoredPermutation;

    /// Composition; panics on a parameter mismatch. Use [`ColoredPermutation::compose`] for a checked version.
    fn mul(self, rhs: &'a ColoredPermutation) -> ColoredPermutation {
        assert_eq!(self.params, rhs.params, "composition of elements from different groups");
        ColoredPermutation::mul(self, rhs)
    }
}

impl fmt::Display for ColoredPermutation {
    /// Cycle notation with trivial fixed points omitted; the identity prints as `((1^0))`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cycles: Vec<String> = self.cycle_decomposition().iter().filter(|c| !c.is_trivial()).map(|c| c.to_string()).collect();
        if cycles.is_empty() {
            write!(f, "((1^0))")
        } else {
            write!(f, "{}", cycles.join(" "))
        }
    }
}

/// A relabeling map from a standard lattice into an ambient group: point `i`
/// of the source goes to `points[i-1]`, with color offset `offsets[i-1]`.
/// This is conjugation by a monomial matrix, so it preserves reflections.
#[derive(Clone, Debug)]
pub struct Embedding {
    pub source: GroupParams,
    pub target: GroupParams,
    pub points: Vec<usize>,
    pub offsets: Vec<usize>,
}

impl Embedding {
    pub fn new(source: GroupParams, target: GroupParams, points: Vec<usize>, offsets: Vec<usize>) -> Result<Self> {
        if points.len() != source.n || offsets.len() != source.n {
            return Err(Error::InvalidElement("embedding size does not match the source group".into()));
        }
        if source.d != 1 && source.d != target.d {
            return Err(Error::ParamMismatch(format!("cannot embed {source} into {target}")));
        }
        Ok(Embedding { source, target, points, offsets })
    }

    pub fn apply(&self, v: &ColoredPermutation) -> ColoredPermutation {
        let d = self.target.d;
        let mut image: SmallVec<[(u8, u8); 8]> = (0..self.target.n).map(|k| (k as u8, 0u8)).collect();
        for i in 0..self.source.n {
            let (j, s) = v.image[i];
            let j = j as usize;
            let shift = (s as usize + d - self.offsets[i] % d + self.offsets[j]) % d;
            image[self.points[i] - 1] = ((self.points[j] - 1) as u8, shift as u8);
        }
        ColoredPermutation { params: self.target, image }
    }
}

/// Parses `cycle+` where `cycle := "((" point+ "))" | "[" point+ "]_" INT` and `point := INT "^" INT`.
pub fn parse_cycles(text: &str) -> Result<Vec<GenCycle>> {
    let bytes = text.as_bytes();
    let mut pos = 0;
    let mut cycles = Vec::new();
    let err = |pos: usize, msg: &str| Error::Parse { pos, msg: msg.to_string() };
    let skip_ws = |pos: &mut usize| {
        while *pos < bytes.len() && bytes[*pos].is_ascii_whitespace() {
            *pos += 1;
        }
    };
    let read_int = |pos: &mut usize| -> Result<usize> {
        let start = *pos;
        while *pos < bytes.len() && bytes[*pos].is_ascii_digit() {
            *pos += 1;
        }
        text[start..*pos].parse::<usize>().map_err(|_| err(start, "expected an integer"))
    };
    loop {
        skip_ws(&mut pos);
        if pos >= bytes.len() {
            break;
        }
        let balanced = if text[pos..].starts_with("((") {
            pos += 2;
            false
        } else if bytes[pos] == b'[' {
            pos += 1;
            true
        } else {
            return Err(err(pos, "expected '((' or '['"));
        };
        let mut points = Vec::new();
        loop {
            skip_ws(&mut pos);
            if pos < bytes.len() && bytes[pos].is_ascii_digit() {
                let index = read_int(&mut pos)?;
                if pos >= bytes.len() || bytes[pos] != b'^' {
                    return Err(err(pos, "expected '^'"));
                }
                pos += 1;
                let color = read_int(&mut pos)?;
                points.push(ColoredPoint { index, color });
            } else {
                break;
            }
        }
        if points.is_empty() {
            return Err(err(pos, "cycle has no points"));
        }
        let kind = if balanced {
            if !text[pos..].starts_with("]_") {
                return Err(err(pos, "expected ']_'"));
            }
            pos += 2;
            CycleKind::Balanced(read_int(&mut pos)?)
        } else {
            if !text[pos..].starts_with("))") {
                return Err(err(pos, "expected '))'"));
            }
            pos += 2;
            CycleKind::Simultaneous
        };
        cycles.push(GenCycle { points, kind });
    }
    if cycles.is_empty() {
        return Err(err(0, "expected at least one cycle"));
    }
    Ok(cycles)
}
