use std::ffi::{CStr, CString};
use std::ptr;

use polyforge_ffi::*;

fn take_string(s: *mut std::ffi::c_char) -> String {
    let out = unsafe { CStr::from_ptr(s) }.to_str().unwrap().to_owned();
    unsafe { pf_string_free(s) };
    out
}

fn last_error() -> String {
    unsafe { CStr::from_ptr(pf_last_error()) }.to_str().unwrap().to_owned()
}

#[test]
fn normalize_round_trip() {
    unsafe {
        let mut q = ptr::null_mut();
        assert_eq!(pf_random_cube(3, 7, &mut q), PfStatus::Ok);
        let mut log = ptr::null_mut();
        assert_eq!(pf_normalize_cube(q, &mut log), PfStatus::Ok);
        let mut len = 0;
        assert_eq!(pf_log_len(log, &mut len), PfStatus::Ok);
        assert!(len <= 14);

        let mut fin = ptr::null_mut();
        assert_eq!(pf_log_final(log, &mut fin), PfStatus::Ok);
        let mut cube = ptr::null_mut();
        assert_eq!(pf_standard_cube(3, &mut cube), PfStatus::Ok);
        let (mut d1, mut d2) = (ptr::null_mut(), ptr::null_mut());
        assert_eq!(pf_polytope_digest(fin, &mut d1), PfStatus::Ok);
        assert_eq!(pf_polytope_digest(cube, &mut d2), PfStatus::Ok);
        assert_eq!(take_string(d1), take_string(d2));

        let mut json = ptr::null_mut();
        assert_eq!(pf_log_to_json(log, &mut json), PfStatus::Ok);
        let json = CString::new(take_string(json)).unwrap();
        let mut replayed = ptr::null_mut();
        assert_eq!(pf_log_replay_json(json.as_ptr(), &mut replayed), PfStatus::Ok);
        let mut counts = (0, 0, 0);
        assert_eq!(pf_polytope_counts(replayed, &mut counts.0, &mut counts.1, &mut counts.2), PfStatus::Ok);
        assert_eq!(counts, (3, 8, 6));

        for p in [q, fin, cube, replayed] {
            pf_polytope_free(p);
        }
        pf_log_free(log);
    }
}

#[test]
fn polytope_json_and_vectors() {
    unsafe {
        let mut cube = ptr::null_mut();
        assert_eq!(pf_standard_cube(3, &mut cube), PfStatus::Ok);
        let mut json = ptr::null_mut();
        assert_eq!(pf_polytope_to_json(cube, &mut json), PfStatus::Ok);
        let json = CString::new(take_string(json)).unwrap();
        let mut back = ptr::null_mut();
        assert_eq!(pf_polytope_from_json(json.as_ptr(), &mut back), PfStatus::Ok);

        let mut sum = ptr::null_mut();
        assert_eq!(pf_connected_sum(cube, 0, back, 1, 12, &mut sum), PfStatus::Ok);
        let mut f = [0u64; 3];
        let mut len = 0;
        assert_eq!(pf_f_vector(sum, f.as_mut_ptr(), f.len(), &mut len), PfStatus::Ok);
        assert_eq!((len, f), (3, [60, 116, 58]));
        let mut g = [0i64; 2];
        assert_eq!(pf_gc_vector(sum, g.as_mut_ptr(), g.len(), &mut len), PfStatus::Ok);
        assert_eq!(g, [4, 52]);
        assert_eq!(pf_f_vector(sum, ptr::null_mut(), 0, &mut len), PfStatus::Ok);
        assert_eq!(len, 3);

        for p in [cube, back, sum] {
            pf_polytope_free(p);
        }
    }
}

#[test]
fn tower_between_squares() {
    unsafe {
        let (mut a, mut b, mut t) = (ptr::null_mut(), ptr::null_mut(), ptr::null_mut());
        assert_eq!(pf_random_cube(2, 1, &mut a), PfStatus::Ok);
        assert_eq!(pf_random_cube(2, 2, &mut b), PfStatus::Ok);
        assert_eq!(pf_build_tower(a, b, &mut t), PfStatus::Ok);
        let mut dim = 0;
        assert_eq!(pf_polytope_counts(t, &mut dim, ptr::null_mut(), ptr::null_mut()), PfStatus::Ok);
        assert_eq!(dim, 3);
        for p in [a, b, t] {
            pf_polytope_free(p);
        }
    }
}

#[test]
fn error_codes() {
    unsafe {
        let mut p = ptr::null_mut();
        assert_eq!(pf_polytope_from_json(ptr::null(), &mut p), PfStatus::NullPointer);
        assert!(last_error().contains("json"));
        let bad = CString::new("{").unwrap();
        assert_eq!(pf_polytope_from_json(bad.as_ptr(), &mut p), PfStatus::InvalidInput);
        let v2 = CString::new(r#"{"schema-version":2,"dim":1,"vrep":[["0"],["1"]]}"#).unwrap();
        assert_eq!(pf_polytope_from_json(v2.as_ptr(), &mut p), PfStatus::InvalidInput);
        assert!(last_error().contains("schema"));
        assert_eq!(pf_standard_cube(0, &mut p), PfStatus::InvalidInput);

        let tri = CString::new(r#"{"schema-version":1,"dim":2,"vrep":[["0","0"],["1","0"],["0","1"]]}"#).unwrap();
        assert_eq!(pf_polytope_from_json(tri.as_ptr(), &mut p), PfStatus::Ok);
        let mut log = ptr::null_mut();
        assert_eq!(pf_normalize_cube(p, &mut log), PfStatus::Precondition);
        assert!(log.is_null());
        pf_polytope_free(p);
        assert_eq!(pf_log_len(ptr::null(), &mut 0), PfStatus::NullPointer);
    }
}

#[test]
fn header_declares_the_interface() {
    let h = std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/include/polyforge.h")).unwrap();
    for name in ["pf_polytope_from_json", "pf_normalize_cube", "pf_last_error", "PF_STATUS_CERTIFICATE", "typedef struct PfPolytope"] {
        assert!(h.contains(name), "{name}");
    }
}
