//! C interface to `ncp`.
//!
//! Objects are opaque handles created by `ncp_*_build`/`ncp_*_import` and released
//! with the matching `_free`. Every fallible call returns an [`NcpStatus`]; on failure
//! `ncp_last_error()` holds a message for the calling thread.
//!
//! Array outputs follow one convention: pass a buffer and its capacity, receive the
//! required length in `out_len`. If the buffer is null or too small nothing is written
//! and `NCP_STATUS_BUFFER_TOO_SMALL` is returned.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;
use std::ptr;

use ncp::cli_io::{self, Family, PosetMeta};
use ncp::colored_perm::GroupParams;
use ncp::nc_decomp;
use ncp::poset_core::{self, VerifyMode};
use ncp::reflection_order::{build_nc_lattice, DEFAULT_ELEMENT_CAP};
use ncp::sperner_engine::{self, TieBreak};
use ncp::{Error, GradedPoset, NCLattice};

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum NcpStatus {
    Ok = 0,
    /// The call succeeded but the property asked about does not hold.
    PropertyFails = 1,
    InvalidInput = 2,
    ResourceCap = 3,
    NullPointer = 4,
    BufferTooSmall = 5,
    Internal = 6,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum NcpFamily {
    /// Symmetric groups, `d` must be 1.
    G11n = 0,
    Gddn = 1,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum NcpTieBreak {
    SmallestIndex = 0,
    LargestIndex = 1,
}

/// Noncrossing partition lattice of a well-generated group.
pub struct NcpLattice {
    lattice: NCLattice,
    meta: PosetMeta,
}

/// Finite graded poset.
pub struct NcpPoset {
    poset: GradedPoset,
    meta: PosetMeta,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(e: &Error) -> NcpStatus {
    match e {
        Error::ResourceCap(_) => NcpStatus::ResourceCap,
        Error::Invariant(_) => NcpStatus::Internal,
        _ => NcpStatus::InvalidInput,
    }
}

fn guard(f: impl FnOnce() -> Result<NcpStatus, (NcpStatus, String)>) -> NcpStatus {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(s)) => s,
        Ok(Err((s, msg))) => {
            set_error(msg);
            s
        }
        Err(_) => {
            set_error("internal panic".into());
            NcpStatus::Internal
        }
    }
}

fn lift(e: Error) -> (NcpStatus, String) {
    (status_of(&e), e.to_string())
}

fn null() -> (NcpStatus, String) {
    (NcpStatus::NullPointer, "null pointer argument".into())
}

unsafe fn deref<'a, T>(p: *const T) -> Result<&'a T, (NcpStatus, String)> {
    p.as_ref().ok_or_else(null)
}

unsafe fn write_out<T>(out: *mut T, value: T) -> Result<(), (NcpStatus, String)> {
    if out.is_null() {
        return Err(null());
    }
    out.write(value);
    Ok(())
}

unsafe fn write_array<T: Copy>(values: &[T], buf: *mut T, cap: usize, out_len: *mut usize) -> Result<NcpStatus, (NcpStatus, String)> {
    write_out(out_len, values.len())?;
    if buf.is_null() || cap < values.len() {
        return Ok(NcpStatus::BufferTooSmall);
    }
    ptr::copy_nonoverlapping(values.as_ptr(), buf, values.len());
    Ok(NcpStatus::Ok)
}

unsafe fn path_arg<'a>(path: *const c_char) -> Result<&'a Path, (NcpStatus, String)> {
    if path.is_null() {
        return Err(null());
    }
    let s = CStr::from_ptr(path).to_str().map_err(|_| (NcpStatus::InvalidInput, "path is not valid UTF-8".to_string()))?;
    Ok(Path::new(s))
}

fn to_family(f: NcpFamily) -> Family {
    match f {
        NcpFamily::G11n => Family::G11n,
        NcpFamily::Gddn => Family::Gddn,
    }
}

fn to_tie(t: NcpTieBreak) -> TieBreak {
    match t {
        NcpTieBreak::SmallestIndex => TieBreak::SmallestIndex,
        NcpTieBreak::LargestIndex => TieBreak::LargestIndex,
    }
}

/// Message for the last failed call on this thread, or null. Valid until the next call.
#[no_mangle]
pub extern "C" fn ncp_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Builds `NC(W)` for `W = G(1,1,n)` or `G(d,d,n)`. `cap` of 0 uses the default element cap.
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn ncp_lattice_build(family: NcpFamily, d: u32, n: u32, cap: usize, out: *mut *mut NcpLattice) -> NcpStatus {
    guard(|| {
        if out.is_null() {
            return Err(null());
        }
        let (d, n) = (d as usize, n as usize);
        cli_io::catalog(to_family(family), d, n).map_err(lift)?;
        let params = match family {
            NcpFamily::G11n => GroupParams::symmetric(n),
            NcpFamily::Gddn => GroupParams::new(d, n),
        }
        .map_err(lift)?;
        let lattice = build_nc_lattice(params, if cap == 0 { DEFAULT_ELEMENT_CAP } else { cap }).map_err(lift)?;
        let meta = PosetMeta {
            family: Some(to_family(family).to_string()),
            d: Some(params.d),
            n: Some(params.n),
            coxeter: Some(lattice.gamma.to_string()),
        };
        out.write(Box::into_raw(Box::new(NcpLattice { lattice, meta })));
        Ok(NcpStatus::Ok)
    })
}

/// # Safety
/// `lattice` must be null or a handle from `ncp_lattice_build` not yet freed.
#[no_mangle]
pub unsafe extern "C" fn ncp_lattice_free(lattice: *mut NcpLattice) {
    if !lattice.is_null() {
        drop(Box::from_raw(lattice));
    }
}

/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn ncp_lattice_size(lattice: *const NcpLattice, out: *mut usize) -> NcpStatus {
    guard(|| {
        let l = deref(lattice)?;
        write_out(out, l.lattice.len())?;
        Ok(NcpStatus::Ok)
    })
}

/// # Safety
/// Pointers must be valid; `buf` may be null to query the length.
#[no_mangle]
pub unsafe extern "C" fn ncp_lattice_rank_vector(lattice: *const NcpLattice, buf: *mut u64, cap: usize, out_len: *mut usize) -> NcpStatus {
    guard(|| {
        let l = deref(lattice)?;
        write_array(&l.lattice.rank_vector(), buf, cap, out_len)
    })
}

/// Builds the symmetric Boolean decomposition, verifies it and reports the number of
/// parts of each rank span `0..=rank/2` (the gamma vector).
///
/// # Safety
/// Pointers must be valid; `buf` may be null to query the length.
#[no_mangle]
pub unsafe extern "C" fn ncp_lattice_sbd_gamma(lattice: *const NcpLattice, buf: *mut i64, cap: usize, out_len: *mut usize) -> NcpStatus {
    guard(|| {
        let l = deref(lattice)?;
        let dec = nc_decomp::sbd(&l.lattice).map_err(lift)?;
        let p = l.lattice.to_poset();
        match poset_core::gamma_from_boolean_parts(&p, &dec) {
            Ok(g) => write_array(&g, buf, cap, out_len),
            Err(e) => Err((NcpStatus::PropertyFails, e.to_string())),
        }
    })
}

/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn ncp_lattice_to_poset(lattice: *const NcpLattice, out: *mut *mut NcpPoset) -> NcpStatus {
    guard(|| {
        let l = deref(lattice)?;
        if out.is_null() {
            return Err(null());
        }
        let handle = NcpPoset { poset: l.lattice.to_poset(), meta: l.meta.clone() };
        out.write(Box::into_raw(Box::new(handle)));
        Ok(NcpStatus::Ok)
    })
}

/// Reads a poset file.
///
/// # Safety
/// `path` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn ncp_poset_import(path: *const c_char, out: *mut *mut NcpPoset) -> NcpStatus {
    guard(|| {
        let path = path_arg(path)?;
        if out.is_null() {
            return Err(null());
        }
        let (poset, meta) = cli_io::import_poset(path).map_err(lift)?;
        out.write(Box::into_raw(Box::new(NcpPoset { poset, meta })));
        Ok(NcpStatus::Ok)
    })
}

/// # Safety
/// `poset` must be a valid handle and `path` a NUL-terminated string.
#[no_mangle]
pub unsafe extern "C" fn ncp_poset_export(poset: *const NcpPoset, path: *const c_char) -> NcpStatus {
    guard(|| {
        let p = deref(poset)?;
        let path = path_arg(path)?;
        cli_io::export_poset(&p.poset, &p.meta, path).map_err(lift)?;
        Ok(NcpStatus::Ok)
    })
}

/// # Safety
/// `poset` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn ncp_poset_free(poset: *mut NcpPoset) {
    if !poset.is_null() {
        drop(Box::from_raw(poset));
    }
}

/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn ncp_poset_size(poset: *const NcpPoset, out: *mut usize) -> NcpStatus {
    guard(|| {
        let p = deref(poset)?;
        write_out(out, p.poset.len())?;
        Ok(NcpStatus::Ok)
    })
}

/// Largest antichain.
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn ncp_poset_width(poset: *const NcpPoset, out: *mut usize) -> NcpStatus {
    guard(|| {
        let p = deref(poset)?;
        write_out(out, sperner_engine::width(&p.poset))?;
        Ok(NcpStatus::Ok)
    })
}

/// `NCP_STATUS_OK` if strongly Sperner, `NCP_STATUS_PROPERTY_FAILS` if not.
///
/// # Safety
/// `poset` must be a valid handle.
#[no_mangle]
pub unsafe extern "C" fn ncp_poset_strongly_sperner(poset: *const NcpPoset, tie: NcpTieBreak) -> NcpStatus {
    guard(|| {
        let p = deref(poset)?;
        if !p.poset.is_graded() {
            return Err((NcpStatus::InvalidInput, "poset is not graded".into()));
        }
        let report = sperner_engine::is_strongly_sperner(&p.poset, to_tie(tie));
        Ok(if report.strongly_sperner { NcpStatus::Ok } else { NcpStatus::PropertyFails })
    })
}

/// `NCP_STATUS_OK` if every pair of consecutive ranks has the normalized matching property.
///
/// # Safety
/// `poset` must be a valid handle.
#[no_mangle]
pub unsafe extern "C" fn ncp_poset_normalized_matching(poset: *const NcpPoset) -> NcpStatus {
    guard(|| {
        let p = deref(poset)?;
        let report = sperner_engine::normalized_matching(&p.poset);
        Ok(if report.holds { NcpStatus::Ok } else { NcpStatus::PropertyFails })
    })
}

/// Gamma vector of the rank sequence. Fails with `NCP_STATUS_INVALID_INPUT` if the
/// poset is not graded or its rank sequence is not symmetric.
///
/// # Safety
/// Pointers must be valid; `buf` may be null to query the length.
#[no_mangle]
pub unsafe extern "C" fn ncp_poset_gamma(poset: *const NcpPoset, buf: *mut i64, cap: usize, out_len: *mut usize) -> NcpStatus {
    guard(|| {
        let p = deref(poset)?;
        let profile = poset_core::rank_profile(&p.poset).map_err(lift)?;
        let g = poset_core::gamma_vector(&profile.rank_vector).map_err(lift)?;
        write_array(&g, buf, cap, out_len)
    })
}

/// Checks that the poset's own rank profile is compatible with a symmetric Boolean
/// decomposition read from `path`.
///
/// # Safety
/// `poset` must be a valid handle and `path` a NUL-terminated string.
#[no_mangle]
pub unsafe extern "C" fn ncp_poset_verify_sbd(poset: *const NcpPoset, path: *const c_char) -> NcpStatus {
    guard(|| {
        let p = deref(poset)?;
        let dec = cli_io::import_decomposition(path_arg(path)?).map_err(lift)?;
        let boolean = poset_core::verify_decomposition(&p.poset, &dec, VerifyMode::Boolean).map_err(lift)?;
        let symmetric = poset_core::verify_decomposition(&p.poset, &dec, VerifyMode::Symmetric).map_err(lift)?;
        if let Some(v) = boolean.violations.first().or(symmetric.violations.first()) {
            return Err((NcpStatus::PropertyFails, format!("part {}: {}", v.part, v.reason)));
        }
        Ok(NcpStatus::Ok)
    })
}

/// Catalan number of the group. `NCP_STATUS_RESOURCE_CAP` if it does not fit in 64 bits.
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn ncp_catalan(family: NcpFamily, d: u32, n: u32, out: *mut u64) -> NcpStatus {
    guard(|| {
        let inv = cli_io::catalog(to_family(family), d as usize, n as usize).map_err(lift)?;
        let c = u64::try_from(inv.catalan).map_err(|_| (NcpStatus::ResourceCap, format!("Catalan number {} exceeds 64 bits", inv.catalan)))?;
        write_out(out, c)?;
        Ok(NcpStatus::Ok)
    })
}
