//! Group invariants, poset and decomposition files, DOT export and the
//! reference data for exceptional groups.

pub mod cli;
mod reference;

use std::fmt;
use std::fs;
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::poset_core::{binomial, Decomposition, GradedPoset};

pub use reference::{check_reference, reference_row, verify_reference_table, ReferenceReport, ReferenceRow, EXCEPTIONAL_TABLE};

pub const POSET_FORMAT: &str = "ncp-poset-v1";
pub const DECOMPOSITION_FORMAT: &str = "ncp-decomposition-v1";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Family {
    G11n,
    Gddn,
}

impl FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "g11n" => Ok(Family::G11n),
            "gddn" => Ok(Family::Gddn),
            other => Err(Error::InvalidParams(format!("unknown family '{other}' (expected g11n or gddn)"))),
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Family::G11n => "g11n",
            Family::Gddn => "gddn",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroupInvariants {
    pub family: Family,
    pub d: usize,
    pub n: usize,
    pub degrees: Vec<u64>,
    pub coxeter_number: u64,
    pub catalan: u128,
}

/// Degrees, Coxeter number and `Cat(W) = prod (d_i + h) / d_i`.
pub fn catalog(family: Family, d: usize, n: usize) -> Result<GroupInvariants> {
    let (degrees, h): (Vec<u64>, u64) = match family {
        Family::G11n => {
            if d != 1 || n == 0 {
                return Err(Error::InvalidParams(format!("g11n needs d = 1 and n >= 1 (got d={d}, n={n})")));
            }
            ((2..=n as u64).collect(), n as u64)
        }
        Family::Gddn => {
            if d < 2 || n < 2 {
                return Err(Error::InvalidParams(format!("gddn needs d >= 2 and n >= 2 (got d={d}, n={n})")));
            }
            let mut deg: Vec<u64> = (1..n as u64).map(|i| i * d as u64).collect();
            deg.push(n as u64);
            deg.sort_unstable();
            (deg, (n as u64 - 1) * d as u64)
        }
    };
    let mut num: u128 = 1;
    let mut den: u128 = 1;
    for &di in &degrees {
        let too_big = || Error::ResourceCap(format!("Catalan number of {family}({d},{n}) exceeds 128 bits"));
        num = num.checked_mul((di + h) as u128).ok_or_else(too_big)?;
        den = den.checked_mul(di as u128).ok_or_else(too_big)?;
        let g = gcd(num, den);
        num /= g;
        den /= g;
    }
    if den != 1 {
        return Err(Error::Invariant(format!("Catalan number of {family}({d},{n}) is not an integer")));
    }
    Ok(GroupInvariants { family, d, n, degrees, coxeter_number: h, catalan: num })
}

fn gcd(a: u128, b: u128) -> u128 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// `Nar(m, k) = C(m,k) C(m,k-1) / m`, zero outside `1 <= k <= m`.
pub fn narayana(m: u64, k: u64) -> u128 {
    if m == 0 || k == 0 || k > m {
        return 0;
    }
    binomial(m, k) * binomial(m, k - 1) / m as u128
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct PosetMeta {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub family: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub d: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub coxeter: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ElementRecord {
    pub id: usize,
    pub rank: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
}

/// On-disk poset: dense ids, covers as `[lower, upper]` pairs.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PosetFile {
    pub format: String,
    #[serde(default)]
    pub meta: PosetMeta,
    pub elements: Vec<ElementRecord>,
    pub covers: Vec<[usize; 2]>,
}

impl PosetFile {
    pub fn from_poset(p: &GradedPoset, meta: PosetMeta) -> Self {
        let elements = (0..p.len()).map(|i| ElementRecord { id: i, rank: p.rank(i), label: Some(p.label(i).to_string()) }).collect();
        let covers = p.covers().into_iter().map(|(a, b)| [a, b]).collect();
        PosetFile { format: POSET_FORMAT.to_string(), meta, elements, covers }
    }
}

/// Parses and validates a poset file. Errors name the offending entry and its line.
pub fn parse_poset(text: &str) -> Result<(GradedPoset, PosetMeta)> {
    let file: PosetFile = serde_json::from_str(text)?;
    if file.format != POSET_FORMAT {
        return Err(Error::InvalidPoset(format!("format is '{}', expected '{POSET_FORMAT}'", file.format)));
    }
    let m = file.elements.len();
    let mut ranks = vec![usize::MAX; m];
    let mut labels = vec![String::new(); m];
    for (pos, e) in file.elements.iter().enumerate() {
        let at = || locate(text, "elements", pos);
        if e.id >= m {
            return Err(Error::InvalidPoset(format!("elements[{pos}]{}: id {} is not below the element count {m}", at(), e.id)));
        }
        if ranks[e.id] != usize::MAX {
            return Err(Error::InvalidPoset(format!("elements[{pos}]{}: duplicate id {}", at(), e.id)));
        }
        ranks[e.id] = e.rank;
        labels[e.id] = e.label.clone().unwrap_or_else(|| e.id.to_string());
    }
    let mut seen = std::collections::HashSet::new();
    for (pos, &[a, b]) in file.covers.iter().enumerate() {
        let at = || locate(text, "covers", pos);
        if a >= m || b >= m {
            return Err(Error::InvalidPoset(format!("covers[{pos}]{}: [{a}, {b}] references a missing element", at())));
        }
        if ranks[b] != ranks[a] + 1 {
            return Err(Error::InvalidPoset(format!("covers[{pos}]{}: [{a}, {b}] goes from rank {} to rank {}", at(), ranks[a], ranks[b])));
        }
        if !seen.insert((a, b)) {
            return Err(Error::InvalidPoset(format!("covers[{pos}]{}: duplicate cover [{a}, {b}]", at())));
        }
    }
    let covers: Vec<(usize, usize)> = file.covers.iter().map(|&[a, b]| (a, b)).collect();
    let p = GradedPoset::new(ranks, &covers, Some(labels))?;
    Ok((p, file.meta))
}

/// `" (line L)"` for entry `index` of the top-level array `key`, when it can be found.
fn locate(text: &str, key: &str, index: usize) -> String {
    let needle = format!("\"{key}\"");
    let Some(start) = text.find(&needle) else { return String::new() };
    let bytes = text.as_bytes();
    let Some(open) = bytes[start..].iter().position(|&b| b == b'[') else { return String::new() };
    let (mut depth, mut count, mut in_str, mut escaped, mut expecting) = (0usize, 0usize, false, false, true);
    for i in start + open + 1..bytes.len() {
        let c = bytes[i];
        if in_str {
            match (escaped, c) {
                (true, _) => escaped = false,
                (false, b'\\') => escaped = true,
                (false, b'"') => in_str = false,
                _ => {}
            }
            continue;
        }
        if c.is_ascii_whitespace() {
            continue;
        }
        if depth == 0 {
            match c {
                b']' => break,
                b',' => {
                    expecting = true;
                    continue;
                }
                _ if expecting => {
                    if count == index {
                        return format!(" (line {})", text[..i].matches('\n').count() + 1);
                    }
                    count += 1;
                    expecting = false;
                }
                _ => {}
            }
        }
        match c {
            b'"' => in_str = true,
            b'[' | b'{' => depth += 1,
            b']' | b'}' => depth = depth.saturating_sub(1),
            _ => {}
        }
    }
    String::new()
}

pub fn import_poset(path: &Path) -> Result<(GradedPoset, PosetMeta)> {
    parse_poset(&fs::read_to_string(path)?)
}

/// Canonical JSON: elements by id, covers sorted, two-space indentation.
pub fn poset_to_json(p: &GradedPoset, meta: &PosetMeta) -> String {
    let mut s = serde_json::to_string_pretty(&PosetFile::from_poset(p, meta.clone())).expect("serializable");
    s.push('\n');
    s
}

pub fn export_poset(p: &GradedPoset, meta: &PosetMeta, path: &Path) -> Result<()> {
    fs::write(path, poset_to_json(p, meta))?;
    Ok(())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DecompositionFile {
    pub format: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mode: Option<String>,
    pub parts: Vec<crate::poset_core::Part>,
}

pub fn decomposition_to_json(dec: &Decomposition, mode: Option<&str>) -> String {
    let file = DecompositionFile { format: DECOMPOSITION_FORMAT.to_string(), mode: mode.map(str::to_string), parts: dec.parts.clone() };
    let mut s = serde_json::to_string_pretty(&file).expect("serializable");
    s.push('\n');
    s
}

pub fn parse_decomposition(text: &str) -> Result<Decomposition> {
    let file: DecompositionFile = serde_json::from_str(text)?;
    if file.format != DECOMPOSITION_FORMAT {
        return Err(Error::InvalidDecomposition(format!("format is '{}', expected '{DECOMPOSITION_FORMAT}'", file.format)));
    }
    Ok(Decomposition { parts: file.parts })
}

pub fn import_decomposition(path: &Path) -> Result<Decomposition> {
    parse_decomposition(&fs::read_to_string(path)?)
}

/// Graphviz rendering, one `rank=same` cluster per rank, bottom to top.
pub fn export_dot(p: &GradedPoset) -> String {
    let mut out = String::from("digraph poset {\n  rankdir=BT;\n  node [shape=box, fontsize=10];\n");
    for (r, _) in p.rank_sizes().iter().enumerate() {
        let ids: Vec<String> = p.rank_level(r).iter().map(|&i| format!("n{i} [label=\"{}\"];", escape(p.label(i)))).collect();
        out.push_str(&format!("  {{ rank=same; {} }}\n", ids.join(" ")));
    }
    for (a, b) in p.covers() {
        out.push_str(&format!("  n{a} -> n{b};\n"));
    }
    out.push_str("}\n");
    out
}

fn escape(s: &str) -> String {
    s.replace('\\', "\\\\").replace('"', "\\\"")
}
