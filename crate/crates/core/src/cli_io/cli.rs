//! The `ncp` command line. [`run`] returns the process exit code:
//! 0 success, 1 property fails, 2 bad input, 3 resource cap.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use crate::colored_perm::{ColoredPermutation, GroupParams};
use crate::error::{Error, Result};
use crate::nc_decomp::{chunk_decompose, rearranged_decompose, sbd, scd_from_sbd, su_decompose, to_decomposition};
use crate::poset_core::{rank_profile, verify_decomposition, Decomposition, GradedPoset, Part, PartType, VerifyMode};
use crate::reflection_order::{build_nc_lattice, NCLattice, DEFAULT_ELEMENT_CAP};
use crate::sperner_engine::{is_strongly_sperner, max_k_family_bruteforce, normalized_matching, top_k_ranks, width, TieBreak};

use super::{catalog, decomposition_to_json, export_dot, export_poset, import_decomposition, import_poset, verify_reference_table, Family, PosetMeta};

#[derive(Parser, Debug)]
#[command(name = "ncp", version, about = "Noncrossing partition lattices, Boolean decompositions and Sperner checks")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Build NC(W) for G(1,1,n) or G(d,d,n) and write it as a poset file
    Build {
        #[arg(long)]
        family: FamilyArg,
        #[arg(long, default_value_t = 1)]
        d: usize,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = DEFAULT_ELEMENT_CAP)]
        cap: usize,
        #[arg(long)]
        out: PathBuf,
    },
    /// Rank vector, symmetry, unimodality and gamma vector
    Analyze {
        file: PathBuf,
        #[arg(long)]
        rank_vector: bool,
        #[arg(long)]
        gamma: bool,
        #[arg(long)]
        json: bool,
    },
    /// Decompose a lattice file built by `ncp build`
    Decompose {
        file: PathBuf,
        #[arg(long)]
        mode: DecomposeMode,
        #[arg(long)]
        out: PathBuf,
    },
    /// Verify a decomposition file against a poset file
    Verify {
        file: PathBuf,
        decomp_file: PathBuf,
        #[arg(long)]
        expect: ExpectArg,
    },
    /// Sperner-type properties
    Check {
        file: PathBuf,
        #[arg(long)]
        sperner: bool,
        #[arg(long)]
        strong_sperner: bool,
        #[arg(long)]
        normalized_matching: bool,
        #[arg(long, value_name = "K")]
        k_family: Option<usize>,
    },
    /// Degrees, Coxeter number and Catalan number
    Catalog {
        #[arg(long)]
        family: FamilyArg,
        #[arg(long, default_value_t = 1)]
        d: usize,
        #[arg(long)]
        n: usize,
    },
    /// Write a Graphviz rendering
    Export {
        file: PathBuf,
        #[arg(long)]
        dot: PathBuf,
    },
    /// Compare a lattice file with the tabulated data for an exceptional group
    Reference {
        file: PathBuf,
        #[arg(long)]
        group: Option<String>,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum FamilyArg {
    G11n,
    Gddn,
}

impl From<FamilyArg> for Family {
    fn from(f: FamilyArg) -> Self {
        match f {
            FamilyArg::G11n => Family::G11n,
            FamilyArg::Gddn => Family::Gddn,
        }
    }
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum DecomposeMode {
    Chunks,
    Rearranged,
    Sbd,
    Scd,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum ExpectArg {
    Plain,
    Symmetric,
    Boolean,
    Chain,
}

impl From<ExpectArg> for VerifyMode {
    fn from(e: ExpectArg) -> Self {
        match e {
            ExpectArg::Plain => VerifyMode::Plain,
            ExpectArg::Symmetric => VerifyMode::Symmetric,
            ExpectArg::Boolean => VerifyMode::Boolean,
            ExpectArg::Chain => VerifyMode::Chain,
        }
    }
}

/// Runs the CLI on `args` (including the program name), writing normal output to `out`
/// and diagnostics to `err`.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = if e.use_stderr() { write!(err, "{e}") } else { write!(out, "{e}") };
            return code;
        }
    };
    match dispatch(cli.command, out) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.exit_code()
        }
    }
}

fn params_for(family: Family, d: usize, n: usize) -> Result<GroupParams> {
    catalog(family, d, n)?;
    GroupParams::new(d, n)
}

fn dispatch(command: Command, out: &mut dyn Write) -> Result<i32> {
    match command {
        Command::Build { family, d, n, cap, out: path } => {
            let family = Family::from(family);
            let params = params_for(family, d, n)?;
            let l = build_nc_lattice(params, cap)?;
            let meta = PosetMeta { family: Some(family.to_string()), d: Some(d), n: Some(n), coxeter: Some(l.gamma.to_string()) };
            export_poset(&l.to_poset(), &meta, &path)?;
            writeln!(out, "wrote {} elements of rank {} to {}", l.len(), l.rank(), path.display())?;
            Ok(0)
        }
        Command::Analyze { file, rank_vector, gamma, json } => {
            let (p, _) = import_poset(&file)?;
            let profile = rank_profile(&p)?;
            let all = !rank_vector && !gamma;
            if json {
                let mut obj = serde_json::Map::new();
                obj.insert("elements".into(), json!(p.len()));
                if all || rank_vector {
                    obj.insert("rank_vector".into(), json!(profile.rank_vector));
                }
                if all {
                    obj.insert("symmetric".into(), json!(profile.symmetric));
                    obj.insert("unimodal".into(), json!(profile.unimodal));
                }
                if all || gamma {
                    obj.insert("gamma".into(), json!(profile.gamma));
                }
                writeln!(out, "{}", serde_json::to_string_pretty(&obj)?)?;
            } else {
                if all {
                    writeln!(out, "elements: {}", p.len())?;
                }
                if all || rank_vector {
                    writeln!(out, "rank vector: {}", tuple(&profile.rank_vector))?;
                }
                if all {
                    writeln!(out, "symmetric: {}", profile.symmetric)?;
                    writeln!(out, "unimodal: {}", profile.unimodal)?;
                }
                if all || gamma {
                    match &profile.gamma {
                        Some(g) => writeln!(out, "gamma: {}", tuple(g))?,
                        None => writeln!(out, "gamma: undefined (rank vector is not symmetric)")?,
                    }
                }
            }
            Ok(0)
        }
        Command::Decompose { file, mode, out: path } => {
            let (p, meta) = import_poset(&file)?;
            let (l, to_file) = lattice_for(&p, &meta)?;
            let local = match mode {
                DecomposeMode::Chunks if l.params.d == 1 => to_decomposition(&su_decompose(&l)?, |_| PartType::Untyped),
                DecomposeMode::Chunks => to_decomposition(&chunk_decompose(&l)?, |_| PartType::Untyped),
                DecomposeMode::Rearranged if l.params.d == 1 => to_decomposition(&su_decompose(&l)?, |_| PartType::Untyped),
                DecomposeMode::Rearranged => to_decomposition(&rearranged_decompose(&l)?, |_| PartType::Untyped),
                DecomposeMode::Sbd => sbd(&l)?,
                DecomposeMode::Scd => scd_from_sbd(&l.to_poset(), &sbd(&l)?)?,
            };
            let dec = relabel(&local, &to_file);
            let mode_name = format!("{mode:?}").to_lowercase();
            fs::write(&path, decomposition_to_json(&dec, Some(&mode_name)))?;
            writeln!(out, "wrote {} parts to {}", dec.parts.len(), path.display())?;
            Ok(0)
        }
        Command::Verify { file, decomp_file, expect } => {
            let (p, _) = import_poset(&file)?;
            let dec = import_decomposition(&decomp_file)?;
            let report = verify_decomposition(&p, &dec, expect.into())?;
            writeln!(out, "{}", serde_json::to_string_pretty(&report)?)?;
            Ok(if report.is_valid() { 0 } else { 1 })
        }
        Command::Check { file, sperner, strong_sperner, normalized_matching: nm, k_family } => {
            let (p, _) = import_poset(&file)?;
            let default = !sperner && !strong_sperner && !nm && k_family.is_none();
            let mut ok = true;
            let mut obj = serde_json::Map::new();
            if sperner || default {
                let w = width(&p);
                let top = p.rank_sizes().into_iter().max().unwrap_or(0);
                ok &= w == top;
                obj.insert("sperner".into(), json!({ "width": w, "max_rank_size": top, "holds": w == top }));
            }
            if strong_sperner || default {
                let report = is_strongly_sperner(&p, TieBreak::SmallestIndex);
                ok &= report.strongly_sperner;
                obj.insert("strong_sperner".into(), serde_json::to_value(&report)?);
            }
            if nm {
                let report = normalized_matching(&p);
                ok &= report.holds;
                obj.insert("normalized_matching".into(), serde_json::to_value(&report)?);
            }
            if let Some(k) = k_family {
                let best = max_k_family_bruteforce(&p, k)?;
                let bound = top_k_ranks(&p, k);
                ok &= best == bound;
                obj.insert("k_family".into(), json!({ "k": k, "max_k_family": best, "top_k_ranks": bound, "holds": best == bound }));
            }
            writeln!(out, "{}", serde_json::to_string_pretty(&obj)?)?;
            Ok(if ok { 0 } else { 1 })
        }
        Command::Catalog { family, d, n } => {
            let inv = catalog(family.into(), d, n)?;
            writeln!(out, "group: G({d},{d},{n})")?;
            writeln!(out, "degrees: {}", inv.degrees.iter().map(u64::to_string).collect::<Vec<_>>().join(" "))?;
            writeln!(out, "coxeter number: {}", inv.coxeter_number)?;
            writeln!(out, "catalan: {}", inv.catalan)?;
            Ok(0)
        }
        Command::Export { file, dot } => {
            let (p, _) = import_poset(&file)?;
            fs::write(&dot, export_dot(&p))?;
            writeln!(out, "wrote {}", dot.display())?;
            Ok(0)
        }
        Command::Reference { file, group } => {
            let report = verify_reference_table(&file, group.as_deref())?;
            writeln!(out, "{}", serde_json::to_string_pretty(&report)?)?;
            Ok(if report.passes() { 0 } else { 1 })
        }
    }
}

fn tuple<T: ToString>(v: &[T]) -> String {
    format!("({})", v.iter().map(T::to_string).collect::<Vec<_>>().join(","))
}

/// Rebuilds the lattice named in the file's metadata and matches file ids to
/// lattice indices through the element labels.
fn lattice_for(p: &GradedPoset, meta: &PosetMeta) -> Result<(NCLattice, Vec<usize>)> {
    let family: Family = meta
        .family
        .as_deref()
        .ok_or_else(|| Error::Precondition("file metadata names no family; decompositions need a lattice built by `ncp build`".into()))?
        .parse()?;
    let n = meta.n.ok_or_else(|| Error::Precondition("file metadata has no n".into()))?;
    let d = meta.d.unwrap_or(1);
    let params = params_for(family, d, n)?;
    let l = build_nc_lattice(params, DEFAULT_ELEMENT_CAP)?;
    if l.len() != p.len() {
        return Err(Error::InvalidPoset(format!("file has {} elements but NC({params}) has {}", p.len(), l.len())));
    }
    let mut to_file = vec![usize::MAX; l.len()];
    for id in 0..p.len() {
        let u = ColoredPermutation::parse(params, p.label(id))?;
        let idx = l.index_of(&u).ok_or_else(|| Error::InvalidPoset(format!("element {id} ({u}) is not in NC({params})")))?;
        if to_file[idx] != usize::MAX {
            return Err(Error::InvalidPoset(format!("two elements carry the label {u}")));
        }
        to_file[idx] = id;
    }
    Ok((l, to_file))
}

fn relabel(dec: &Decomposition, to_file: &[usize]) -> Decomposition {
    let mut parts: Vec<Part> = dec
        .parts
        .iter()
        .map(|part| {
            let mut p = Part::new(part.elements.iter().map(|&e| to_file[e]).collect(), part.declared);
            p.tags = part.tags.clone();
            p
        })
        .collect();
    parts.sort_by_key(|p| p.elements[0]);
    Decomposition { parts }
}

/// Entry point used by the binary.
pub fn main_with_env() -> i32 {
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    run(std::env::args_os(), &mut stdout.lock(), &mut stderr.lock())
}
