use std::ffi::{CStr, CString};
use std::ptr;

use cylinderlab_ffi::*;

fn plane_z0(p: u32) -> Vec<i64> {
    let n = (p * p * p) as usize;
    // index = x p^2 + y p + z
    (0..n).map(|i| i64::from(i % p as usize == 0)).collect()
}

fn last_error() -> String {
    let e = cl_last_error();
    assert!(!e.is_null());
    unsafe { CStr::from_ptr(e) }.to_string_lossy().into_owned()
}

#[test]
fn weight_round_trip_and_predicates() {
    unsafe {
        let vals = plane_z0(3);
        let mut w = ptr::null_mut();
        assert_eq!(
            cl_weight_new(3, vals.as_ptr(), vals.len(), &mut w),
            ClStatus::Ok
        );
        let mut len = 0;
        assert_eq!(cl_weight_len(w, &mut len), ClStatus::Ok);
        assert_eq!(len, 27);
        let mut back = vec![0i64; len];
        assert_eq!(cl_weight_values(w, back.as_mut_ptr(), len), ClStatus::Ok);
        assert_eq!(back, vals);
        assert_eq!(
            cl_weight_values(w, back.as_mut_ptr(), 3),
            ClStatus::WrongLength
        );
        assert_eq!(cl_weight_is_p_divisible(w), ClStatus::Ok);
        let mut dir = [9u32; 3];
        assert_eq!(cl_weight_is_cylinder(w, dir.as_mut_ptr()), ClStatus::Ok);
        // The plane z = 0 contains the direction found.
        assert_eq!(dir[2], 0);

        let mut s = ptr::null_mut();
        assert_eq!(cl_weight_to_json(w, &mut s), ClStatus::Ok);
        let mut w2 = ptr::null_mut();
        assert_eq!(cl_weight_from_json(s, &mut w2), ClStatus::Ok);
        let mut again = vec![0i64; 27];
        assert_eq!(cl_weight_values(w2, again.as_mut_ptr(), 27), ClStatus::Ok);
        assert_eq!(again, vals);
        cl_string_free(s);
        cl_weight_free(w2);
        cl_weight_free(w);
    }
}

#[test]
fn lift_and_verify() {
    unsafe {
        let vals = plane_z0(5);
        let mut w = ptr::null_mut();
        assert_eq!(
            cl_weight_new(5, vals.as_ptr(), vals.len(), &mut w),
            ClStatus::Ok
        );
        let mut c = ptr::null_mut();
        assert_eq!(cl_lift_set(w, &mut c), ClStatus::Ok);
        assert_eq!(cl_certificate_verify(c), ClStatus::Ok);
        let mut s = ptr::null_mut();
        assert_eq!(cl_certificate_to_json(c, &mut s), ClStatus::Ok);
        let text = CStr::from_ptr(s).to_str().unwrap().to_owned();
        cl_string_free(s);

        let mut c2 = ptr::null_mut();
        let cs = CString::new(text.clone()).unwrap();
        assert_eq!(cl_certificate_from_json(cs.as_ptr(), &mut c2), ClStatus::Ok);
        assert_eq!(cl_certificate_verify(c2), ClStatus::Ok);
        cl_certificate_free(c2);

        // Change the target so the certificate no longer matches it.
        let mut j: serde_json::Value = serde_json::from_str(&text).unwrap();
        j["target"]["values"][1] = serde_json::json!(1);
        let cs = CString::new(j.to_string()).unwrap();
        let mut c3 = ptr::null_mut();
        assert_eq!(cl_certificate_from_json(cs.as_ptr(), &mut c3), ClStatus::Ok);
        assert_eq!(cl_certificate_verify(c3), ClStatus::False);
        cl_certificate_free(c3);

        let mut m = ptr::null_mut();
        assert_eq!(cl_lift_multiset(w, &mut m), ClStatus::Ok);
        assert_eq!(cl_certificate_verify(m), ClStatus::Ok);
        cl_certificate_free(m);
        cl_certificate_free(c);
        cl_weight_free(w);
    }
}

#[test]
fn error_codes() {
    unsafe {
        let mut w = ptr::null_mut();
        assert_eq!(cl_weight_new(4, ptr::null(), 0, &mut w), ClStatus::NotPrime);
        assert!(last_error().contains('4'));
        let v = [0i64; 5];
        assert_eq!(
            cl_weight_new(3, v.as_ptr(), 5, &mut w),
            ClStatus::WrongLength
        );
        assert_eq!(
            cl_weight_new(3, v.as_ptr(), 5, ptr::null_mut()),
            ClStatus::NullPointer
        );
        assert_eq!(cl_weight_is_p_divisible(ptr::null()), ClStatus::NullPointer);
        let bad = CString::new("{\"p\":3}").unwrap();
        assert_eq!(cl_weight_from_json(bad.as_ptr(), &mut w), ClStatus::Parse);
        assert!(last_error().contains("values"));

        // A single point of weight p is divisible but has the wrong size.
        let mut pt = vec![0i64; 27];
        pt[0] = 3;
        assert_eq!(cl_weight_new(3, pt.as_ptr(), 27, &mut w), ClStatus::Ok);
        assert_eq!(cl_weight_is_p_divisible(w), ClStatus::Ok);
        let mut c = ptr::null_mut();
        assert_eq!(cl_lift_multiset(w, &mut c), ClStatus::SizeViolation);
        assert!(c.is_null());
        cl_weight_free(w);

        let mut line = vec![0i64; 27];
        line[..3].fill(1);
        assert_eq!(cl_weight_new(3, line.as_ptr(), 27, &mut w), ClStatus::Ok);
        assert_eq!(cl_weight_is_p_divisible(w), ClStatus::False);
        assert_eq!(cl_lift_set(w, &mut c), ClStatus::SizeViolation);
        cl_weight_free(w);

        let mut skewed = vec![0i64; 27];
        skewed[..8].fill(1);
        skewed[13] = 1;
        assert_eq!(cl_weight_new(3, skewed.as_ptr(), 27, &mut w), ClStatus::Ok);
        assert_eq!(cl_weight_is_p_divisible(w), ClStatus::False);
        assert_eq!(cl_lift_set(w, &mut c), ClStatus::PreconditionViolated);
        let mut dir = [0u32; 3];
        assert_eq!(cl_weight_is_cylinder(w, dir.as_mut_ptr()), ClStatus::False);
        cl_weight_free(w);

        cl_weight_free(ptr::null_mut());
        cl_certificate_free(ptr::null_mut());
        cl_string_free(ptr::null_mut());
    }
}

#[test]
fn header_declares_every_export() {
    let header = std::fs::read_to_string(concat!(
        env!("CARGO_MANIFEST_DIR"),
        "/include/cylinderlab.h"
    ))
    .unwrap();
    let src = std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/src/lib.rs")).unwrap();
    let exports: Vec<&str> = src
        .lines()
        .filter_map(|l| l.split("extern \"C\" fn ").nth(1))
        .map(|rest| rest.split('(').next().unwrap())
        .collect();
    assert!(exports.len() >= 15);
    for name in exports {
        assert!(
            header.contains(&format!("{name}(")),
            "{name} missing from header"
        );
    }
    assert!(
        header.contains("typedef struct ClWeight ClWeight") || header.contains("struct ClWeight;")
    );
}
