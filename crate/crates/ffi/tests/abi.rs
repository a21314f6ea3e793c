use std::ffi::{CStr, CString};
use std::os::raw::c_char;
use std::ptr;

use sato_tate_ffi::*;

fn take_string(s: *mut c_char) -> String {
    assert!(!s.is_null());
    let owned = unsafe { CStr::from_ptr(s) }.to_str().unwrap().to_owned();
    unsafe { st_string_free(s) };
    owned
}

fn last_error() -> String {
    let e = st_last_error();
    assert!(!e.is_null());
    unsafe { CStr::from_ptr(e) }.to_str().unwrap().to_owned()
}

fn scan(p: u64, orbits: bool) -> *mut StHistogram {
    let mut h = ptr::null_mut();
    assert_eq!(unsafe { st_histogram_scan(p, orbits, &mut h) }, StStatus::Ok);
    assert!(!h.is_null());
    h
}

fn buckets(h: *const StHistogram) -> Vec<(i64, u64)> {
    let n = unsafe { st_histogram_len(h) };
    (0..n)
        .map(|i| {
            let (mut t, mut c) = (0i64, 0u64);
            assert_eq!(unsafe { st_histogram_bucket(h, i, &mut t, &mut c) }, StStatus::Ok);
            (t, c)
        })
        .collect()
}

#[test]
fn scan_and_inspect() {
    let h = scan(13, false);
    unsafe {
        assert_eq!(st_histogram_prime(h), 13);
        assert_eq!(st_histogram_family_size(h), 156);
    }
    let b = buckets(h);
    assert_eq!(b.iter().map(|&(_, c)| c).sum::<u64>(), 156);
    assert!(b.windows(2).all(|w| w[0].0 < w[1].0));
    for &(t, c) in &b {
        assert!(t * t <= 52);
        assert!(b.contains(&(-t, c)));
    }
    let (mut t, mut c) = (0, 0);
    assert_eq!(
        unsafe { st_histogram_bucket(h, b.len(), &mut t, &mut c) },
        StStatus::InvalidArgument
    );
    assert!(last_error().contains("out of range"));
    unsafe { st_histogram_free(h) };
}

#[test]
fn orbit_scan_matches_direct() {
    let (a, b) = (scan(31, false), scan(31, true));
    assert_eq!(buckets(a), buckets(b));
    unsafe {
        st_histogram_free(a);
        st_histogram_free(b);
    }
}

#[test]
fn rejects_inadmissible_primes() {
    for p in [0u64, 2, 3, 9, 100] {
        let mut h = ptr::null_mut();
        assert_eq!(unsafe { st_histogram_scan(p, false, &mut h) }, StStatus::NotPrime);
        assert!(h.is_null());
        assert!(last_error().contains(&p.to_string()));
    }
}

#[test]
fn null_pointers_are_reported() {
    unsafe {
        assert_eq!(st_histogram_scan(5, false, ptr::null_mut()), StStatus::NullPointer);
        let mut v = 0.0;
        assert_eq!(
            st_empirical_moment(ptr::null(), 1, &mut v, ptr::null_mut()),
            StStatus::NullPointer
        );
        assert_eq!(st_histogram_prime(ptr::null()), 0);
        assert_eq!(st_histogram_len(ptr::null()), 0);
        assert_eq!(
            st_histogram_load(ptr::null(), 5, true, &mut ptr::null_mut()),
            StStatus::NullPointer
        );
        st_histogram_free(ptr::null_mut());
        st_string_free(ptr::null_mut());
    }
}

#[test]
fn statistics() {
    let h = scan(5, false);
    unsafe {
        let mut v = 0.0;
        let mut exact = ptr::null_mut();
        assert_eq!(st_empirical_moment(h, 1, &mut v, &mut exact), StStatus::Ok);
        assert_eq!(take_string(exact), "24/25");
        assert!((v - 0.96).abs() < 1e-15);

        let mut sum = 0.0;
        assert_eq!(st_expsum_exact(h, 1, &mut sum, ptr::null_mut()), StStatus::Ok);
        // sum_t count (t^2 / (2p) - 1)
        let want: f64 = buckets(h)
            .iter()
            .map(|&(t, c)| c as f64 * ((t * t) as f64 / 10.0 - 1.0))
            .sum();
        assert!((sum - want).abs() < 1e-12);

        let mut holds = false;
        assert_eq!(st_moment_identity_holds(h, 4, &mut holds), StStatus::Ok);
        assert!(holds);
        assert_eq!(st_moment_identity_holds(h, 0, &mut holds), StStatus::InvalidArgument);

        let mut d = -1.0;
        assert_eq!(st_discrepancy(h, 0.0, 1.0, &mut d), StStatus::Ok);
        assert!(d.abs() < 1e-9);
        assert_eq!(st_discrepancy(h, 0.6, 0.2, &mut d), StStatus::InvalidArgument);

        let (mut disc, mut bound) = (0.0, 0.0);
        assert_eq!(st_discrepancy(h, 0.0, 0.5, &mut disc), StStatus::Ok);
        assert_eq!(st_et_bound(h, 0.0, 0.5, 1, &mut bound), StStatus::Ok);
        assert!(disc <= bound);
        assert_eq!(st_et_bound(h, 0.0, 0.5, 0, &mut bound), StStatus::InvalidArgument);
        st_histogram_free(h);
    }
}

#[test]
fn exact_kernel_entry_points() {
    unsafe {
        let mut s = ptr::null_mut();
        assert_eq!(st_s_m_direct(1, &mut s), StStatus::Ok);
        assert_eq!(take_string(s), "1/2");
        for m in 2..=20 {
            assert_eq!(st_s_m_direct(m, &mut s), StStatus::Ok);
            assert_eq!(take_string(s), "0");
            assert_eq!(st_s_m_hyper(m, &mut s), StStatus::Ok);
            assert_eq!(take_string(s), "0");
        }
        assert_eq!(st_s_m_direct(0, &mut s), StStatus::InvalidArgument);
        assert_eq!(st_catalan(10, &mut s), StStatus::Ok);
        assert_eq!(take_string(s), "16796");

        let mut m = 0;
        assert_eq!(st_optimal_m(10100, 0.75, 0.01, &mut m), StStatus::Ok);
        assert_eq!(m, 3);
        assert_eq!(st_optimal_m(10100, 1.5, 0.01, &mut m), StStatus::InvalidArgument);
    }
}

#[test]
fn cache_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let cdir = CString::new(dir.path().to_str().unwrap()).unwrap();
    unsafe {
        let mut h = ptr::null_mut();
        assert_eq!(st_histogram_load(cdir.as_ptr(), 17, false, &mut h), StStatus::Io);
        assert!(h.is_null());

        let scanned = scan(17, false);
        assert_eq!(st_histogram_save(scanned, cdir.as_ptr()), StStatus::Ok);
        assert_eq!(st_histogram_load(cdir.as_ptr(), 17, false, &mut h), StStatus::Ok);
        assert_eq!(buckets(h), buckets(scanned));
        st_histogram_free(h);
        st_histogram_free(scanned);

        std::fs::write(dir.path().join("traces_p17.txt"), "p 17 V 272\n").unwrap();
        assert_eq!(
            st_histogram_load(cdir.as_ptr(), 17, false, &mut h),
            StStatus::CorruptCache
        );
        assert_eq!(st_histogram_load(cdir.as_ptr(), 17, true, &mut h), StStatus::Ok);
        assert_eq!(st_histogram_family_size(h), 272);
        st_histogram_free(h);
    }
}

#[test]
fn status_messages() {
    for status in [
        StStatus::Ok,
        StStatus::NullPointer,
        StStatus::InvalidArgument,
        StStatus::NotPrime,
        StStatus::SingularCurve,
        StStatus::Io,
        StStatus::CorruptCache,
        StStatus::InvalidHistogram,
        StStatus::Divergent,
        StStatus::Panic,
    ] {
        let msg = unsafe { CStr::from_ptr(st_status_message(status)) };
        assert!(!msg.to_bytes().is_empty());
    }
}

#[test]
fn header_declares_the_api() {
    let header = std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/include/sato_tate.h"))
        .expect("header generated by build.rs");
    assert!(header.contains("#ifndef SATO_TATE_H"));
    assert!(header.contains("typedef struct StHistogram StHistogram;"));
    assert!(header.contains("ST_STATUS_NOT_PRIME = 3"));
    for f in [
        "st_histogram_scan",
        "st_histogram_load",
        "st_histogram_save",
        "st_histogram_free",
        "st_histogram_bucket",
        "st_empirical_moment",
        "st_expsum_exact",
        "st_moment_identity_holds",
        "st_discrepancy",
        "st_et_bound",
        "st_optimal_m",
        "st_s_m_direct",
        "st_s_m_hyper",
        "st_catalan",
        "st_last_error",
        "st_string_free",
        "st_status_message",
    ] {
        assert!(header.contains(&format!("{f}(")), "{f} missing from header");
    }
}

#[test]
fn header_compiles_as_c() {
    let include = concat!(env!("CARGO_MANIFEST_DIR"), "/include");
    let dir = tempfile::tempdir().unwrap();
    let src = dir.path().join("smoke.c");
    std::fs::write(
        &src,
        "#include \"sato_tate.h\"\n\
         int main(void) {\n\
           StHistogram *h = 0;\n\
           StStatus s = st_histogram_scan(5, false, &h);\n\
           st_histogram_free(h);\n\
           return s == ST_STATUS_OK ? 0 : 1;\n\
         }\n",
    )
    .unwrap();
    let status = match std::process::Command::new("cc")
        .args(["-std=c99", "-Wall", "-Werror", "-fsyntax-only", "-I", include])
        .arg(&src)
        .status()
    {
        Ok(status) => status,
        Err(_) => {
            eprintln!("no C compiler found, skipping");
            return;
        }
    };
    assert!(status.success());
}
