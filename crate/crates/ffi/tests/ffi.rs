use std::ffi::{CStr, CString};
use std::ptr;

use cayleymc_ffi::*;

fn cstr(s: &str) -> CString {
    CString::new(s).unwrap()
}

fn last_error() -> String {
    unsafe { CStr::from_ptr(cmc_last_error()) }.to_str().unwrap().to_owned()
}

#[test]
fn cayley_tuple_round_trip() {
    unsafe {
        let mut t: *mut CmcTuple = ptr::null_mut();
        assert_eq!(cmc_cayley_solution(cstr("1/3").as_ptr(), cstr("1/5").as_ptr(), &mut t), CmcStatus::Ok);
        let (mut star, mut irr) = (false, false);
        assert_eq!(cmc_star_check(t, &mut star), CmcStatus::Ok);
        assert_eq!(cmc_is_irreducible(t, &mut irr), CmcStatus::Ok);
        assert!(star && irr);

        let mut json: *mut std::ffi::c_char = ptr::null_mut();
        assert_eq!(cmc_tuple_to_json(t, &mut json), CmcStatus::Ok);
        let mut back: *mut CmcTuple = ptr::null_mut();
        assert_eq!(cmc_tuple_from_json(json, &mut back), CmcStatus::Ok);
        let mut json2: *mut std::ffi::c_char = ptr::null_mut();
        assert_eq!(cmc_tuple_to_json(back, &mut json2), CmcStatus::Ok);
        assert_eq!(CStr::from_ptr(json), CStr::from_ptr(json2));

        let (mut deg, mut cond) = (0u64, 0u64);
        assert_eq!(cmc_trace_field(t, &mut deg, &mut cond), CmcStatus::Ok);
        // y = -2cos(8π/15) generates Q(ζ_15)^+
        assert_eq!((deg, cond), (4, 15));

        let (mut size, mut finite) = (0usize, false);
        assert_eq!(cmc_orbit_size(t, 10_000, &mut size, &mut finite), CmcStatus::Ok);
        assert!(finite && size > 1);

        cmc_string_free(json);
        cmc_string_free(json2);
        cmc_tuple_free(back);
        cmc_tuple_free(t);
    }
}

#[test]
fn pushforward_and_convolve() {
    unsafe {
        let mut p: *mut CmcTuple = ptr::null_mut();
        assert_eq!(cmc_pushforward(5, 1, 2, &mut p), CmcStatus::Ok);
        let mut out: *mut CmcTuple = ptr::null_mut();
        assert_eq!(cmc_middle_convolve(p, 1, 2, &mut out), CmcStatus::Ok);
        let mut rank = 0usize;
        assert_eq!(cmc_tuple_rank(out, &mut rank), CmcStatus::Ok);
        assert_eq!(rank, 2);
        let mut star = false;
        assert_eq!(cmc_star_check(out, &mut star), CmcStatus::Ok);
        assert!(star);
        let mut bad: *mut CmcTuple = ptr::null_mut();
        assert_eq!(cmc_middle_convolve(p, 0, 1, &mut bad), CmcStatus::InvalidParameter);
        assert!(bad.is_null());
        cmc_tuple_free(out);
        cmc_tuple_free(p);
    }
}

#[test]
fn error_codes() {
    unsafe {
        let mut t: *mut CmcTuple = ptr::null_mut();
        assert_eq!(cmc_cayley_solution(cstr("1/2").as_ptr(), cstr("1/2").as_ptr(), &mut t), CmcStatus::InvalidParameter);
        assert!(!last_error().is_empty());
        assert_eq!(cmc_cayley_solution(cstr("x").as_ptr(), cstr("1/2").as_ptr(), &mut t), CmcStatus::Parse);
        assert_eq!(cmc_cayley_solution(ptr::null(), cstr("1/2").as_ptr(), &mut t), CmcStatus::NullPointer);
        assert_eq!(cmc_tuple_from_json(cstr("{}").as_ptr(), &mut t), CmcStatus::Parse);
        let mut star = false;
        assert_eq!(cmc_star_check(ptr::null(), &mut star), CmcStatus::NullPointer);
        assert_eq!(cmc_cayley_solution(cstr("1/3").as_ptr(), cstr("1/3").as_ptr(), &mut t), CmcStatus::Ok);
        assert!(last_error().is_empty());
        cmc_tuple_free(t);
    }
}

#[test]
fn flow_check() {
    unsafe {
        let (mut agreeing, mut fixes) = (0usize, false);
        assert_eq!(cmc_flow_check(cstr("6").as_ptr(), 5, 13, 100, 0, &mut agreeing, &mut fixes), CmcStatus::Ok);
        assert_eq!(agreeing, 100);
        assert!(fixes);
        assert_eq!(cmc_flow_check(cstr("6").as_ptr(), 4, 13, 10, 0, &mut agreeing, &mut fixes), CmcStatus::InvalidParameter);
    }
}

#[test]
fn header_declares_the_api() {
    let header = std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/include/cayleymc.h")).unwrap();
    for name in [
        "cmc_cayley_solution",
        "cmc_pushforward",
        "cmc_middle_convolve",
        "cmc_tuple_from_json",
        "cmc_tuple_to_json",
        "cmc_string_free",
        "cmc_tuple_free",
        "cmc_star_check",
        "cmc_is_irreducible",
        "cmc_trace_field",
        "cmc_orbit_size",
        "cmc_flow_check",
        "cmc_last_error",
        "typedef struct CmcTuple CmcTuple",
        "CMC_STATUS_OK = 0",
    ] {
        assert!(header.contains(name), "{name}");
    }
}
