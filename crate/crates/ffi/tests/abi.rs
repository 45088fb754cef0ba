use std::ffi::{CStr, CString};
use std::path::PathBuf;
use std::ptr;

use ncp_ffi::*;

fn fixture(name: &str) -> CString {
    let p = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../core/fixtures").join(format!("{name}.json"));
    CString::new(p.to_str().unwrap()).unwrap()
}

fn last_error() -> String {
    let p = ncp_last_error();
    assert!(!p.is_null());
    unsafe { CStr::from_ptr(p) }.to_string_lossy().into_owned()
}

fn lattice(family: NcpFamily, d: u32, n: u32) -> *mut NcpLattice {
    let mut l = ptr::null_mut();
    assert_eq!(unsafe { ncp_lattice_build(family, d, n, 0, &mut l) }, NcpStatus::Ok);
    assert!(!l.is_null());
    l
}

fn import(name: &str) -> *mut NcpPoset {
    let mut p = ptr::null_mut();
    assert_eq!(unsafe { ncp_poset_import(fixture(name).as_ptr(), &mut p) }, NcpStatus::Ok);
    p
}

#[test]
fn lattice_queries() {
    unsafe {
        let l = lattice(NcpFamily::Gddn, 5, 3);
        let mut size = 0;
        assert_eq!(ncp_lattice_size(l, &mut size), NcpStatus::Ok);
        assert_eq!(size, 26);

        let mut ranks = [0u64; 8];
        let mut len = 0;
        assert_eq!(ncp_lattice_rank_vector(l, ranks.as_mut_ptr(), ranks.len(), &mut len), NcpStatus::Ok);
        assert_eq!(&ranks[..len], &[1, 12, 12, 1]);

        let mut gamma = [0i64; 4];
        assert_eq!(ncp_lattice_sbd_gamma(l, gamma.as_mut_ptr(), gamma.len(), &mut len), NcpStatus::Ok);
        assert_eq!(&gamma[..len], &[1, 9]);

        let mut p = ptr::null_mut();
        assert_eq!(ncp_lattice_to_poset(l, &mut p), NcpStatus::Ok);
        let mut w = 0;
        assert_eq!(ncp_poset_width(p, &mut w), NcpStatus::Ok);
        assert_eq!(w, 12);
        assert_eq!(ncp_poset_strongly_sperner(p, NcpTieBreak::LargestIndex), NcpStatus::Ok);
        assert_eq!(ncp_poset_normalized_matching(p), NcpStatus::Ok);
        ncp_poset_free(p);
        ncp_lattice_free(l);

        let l = lattice(NcpFamily::G11n, 1, 5);
        assert_eq!(ncp_lattice_size(l, &mut size), NcpStatus::Ok);
        assert_eq!(size, 42);
        ncp_lattice_free(l);
    }
}

#[test]
fn buffers_that_are_too_small() {
    unsafe {
        let l = lattice(NcpFamily::Gddn, 3, 3);
        let mut ranks = [0u64; 2];
        let mut len = 0;
        assert_eq!(ncp_lattice_rank_vector(l, ranks.as_mut_ptr(), ranks.len(), &mut len), NcpStatus::BufferTooSmall);
        assert_eq!(len, 4);
        assert_eq!(ncp_lattice_rank_vector(l, ptr::null_mut(), 0, &mut len), NcpStatus::BufferTooSmall);
        assert_eq!(len, 4);
        ncp_lattice_free(l);
    }
}

#[test]
fn null_pointers() {
    unsafe {
        let mut size = 0;
        assert_eq!(ncp_lattice_size(ptr::null(), &mut size), NcpStatus::NullPointer);
        assert!(!last_error().is_empty());
        assert_eq!(ncp_poset_width(ptr::null(), &mut size), NcpStatus::NullPointer);
        assert_eq!(ncp_lattice_build(NcpFamily::Gddn, 2, 3, 0, ptr::null_mut()), NcpStatus::NullPointer);
        assert_eq!(ncp_catalan(NcpFamily::Gddn, 2, 3, ptr::null_mut()), NcpStatus::NullPointer);
        let mut p = ptr::null_mut();
        assert_eq!(ncp_poset_import(ptr::null(), &mut p), NcpStatus::NullPointer);
        let l = lattice(NcpFamily::Gddn, 2, 2);
        assert_eq!(ncp_lattice_size(l, ptr::null_mut()), NcpStatus::NullPointer);
        ncp_lattice_free(l);
        ncp_lattice_free(ptr::null_mut());
        ncp_poset_free(ptr::null_mut());
    }
}

#[test]
fn invalid_input_and_caps() {
    unsafe {
        let mut l = ptr::null_mut();
        assert_eq!(ncp_lattice_build(NcpFamily::Gddn, 1, 3, 0, &mut l), NcpStatus::InvalidInput);
        assert!(last_error().contains("gddn"));
        assert!(l.is_null());
        assert_eq!(ncp_lattice_build(NcpFamily::Gddn, 5, 5, 100, &mut l), NcpStatus::ResourceCap);
        assert!(l.is_null());

        let mut c = 0;
        assert_eq!(ncp_catalan(NcpFamily::Gddn, 5, 3, &mut c), NcpStatus::Ok);
        assert_eq!(c, 26);
        assert_eq!(ncp_catalan(NcpFamily::G11n, 1, 4, &mut c), NcpStatus::Ok);
        assert_eq!(c, 14);
        assert_eq!(ncp_catalan(NcpFamily::G11n, 1, 40, &mut c), NcpStatus::ResourceCap);
        assert_eq!(ncp_catalan(NcpFamily::Gddn, 0, 3, &mut c), NcpStatus::InvalidInput);

        let mut p = ptr::null_mut();
        let missing = CString::new("/nonexistent/poset.json").unwrap();
        assert_eq!(ncp_poset_import(missing.as_ptr(), &mut p), NcpStatus::InvalidInput);
    }
}

#[test]
fn poset_import_export() {
    unsafe {
        let p = import("hasse_12");
        let mut size = 0;
        assert_eq!(ncp_poset_size(p, &mut size), NcpStatus::Ok);
        assert_eq!(size, 12);
        let mut gamma = [0i64; 4];
        let mut len = 0;
        assert_eq!(ncp_poset_gamma(p, gamma.as_mut_ptr(), gamma.len(), &mut len), NcpStatus::Ok);
        assert_eq!(&gamma[..len], &[1, -1, 0]);

        let dir = tempfile::tempdir().unwrap();
        let out = CString::new(dir.path().join("copy.json").to_str().unwrap()).unwrap();
        assert_eq!(ncp_poset_export(p, out.as_ptr()), NcpStatus::Ok);
        let mut q = ptr::null_mut();
        assert_eq!(ncp_poset_import(out.as_ptr(), &mut q), NcpStatus::Ok);
        assert_eq!(ncp_poset_size(q, &mut size), NcpStatus::Ok);
        assert_eq!(size, 12);
        ncp_poset_free(q);
        ncp_poset_free(p);
    }
}

#[test]
fn sperner_verdicts() {
    unsafe {
        let a = import("sperner_strong");
        let b = import("sperner_not_2sperner");
        let c = import("two_sperner_not_sperner");
        for tie in [NcpTieBreak::SmallestIndex, NcpTieBreak::LargestIndex] {
            assert_eq!(ncp_poset_strongly_sperner(a, tie), NcpStatus::Ok);
            assert_eq!(ncp_poset_strongly_sperner(b, tie), NcpStatus::PropertyFails);
        }
        assert_eq!(ncp_poset_normalized_matching(c), NcpStatus::PropertyFails);
        let mut w = 0;
        assert_eq!(ncp_poset_width(c, &mut w), NcpStatus::Ok);
        assert_eq!(w, 4);
        for p in [a, b, c] {
            ncp_poset_free(p);
        }
    }
}

#[test]
fn verify_sbd_files() {
    unsafe {
        let p = import("hasse_25");
        assert_eq!(ncp_poset_verify_sbd(p, fixture("hasse_25_boolean").as_ptr()), NcpStatus::Ok);
        ncp_poset_free(p);
        let p = import("hasse_12");
        assert_eq!(ncp_poset_verify_sbd(p, fixture("hasse_12_chains").as_ptr()), NcpStatus::PropertyFails);
        assert!(last_error().starts_with("part "));
        ncp_poset_free(p);
    }
}

#[test]
fn header_is_generated() {
    let header = std::fs::read_to_string(PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("include/ncp.h")).unwrap();
    for name in ["ncp_lattice_build", "ncp_poset_verify_sbd", "NCP_STATUS_BUFFER_TOO_SMALL", "typedef struct NcpLattice NcpLattice"] {
        assert!(header.contains(name), "{name}");
    }
}
