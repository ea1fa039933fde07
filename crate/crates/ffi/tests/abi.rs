use std::ffi::{CStr, CString};
use std::ptr;

use gcgsim_ffi::*;

fn take(s: *mut std::ffi::c_char) -> String {
    assert!(!s.is_null());
    let out = unsafe { CStr::from_ptr(s) }.to_str().unwrap().to_string();
    unsafe { gcg_string_free(s) };
    out
}

fn grammar(spec: &str) -> *mut GcgGrammar {
    let spec = CString::new(spec).unwrap();
    let mut g = ptr::null_mut();
    assert_eq!(unsafe { gcg_grammar_new(spec.as_ptr(), &mut g) }, GcgStatus::Ok);
    g
}

#[test]
fn worked_example_through_the_c_interface() {
    let g = grammar("english-GWP");
    let cats = CString::new(r"NP (S\NP)/NP NP").unwrap();
    let mut p = ptr::null_mut();
    assert_eq!(unsafe { gcg_parse(g, cats.as_ptr(), &mut p) }, GcgStatus::Ok);
    assert!(unsafe { gcg_parse_success(p) });
    assert_eq!(unsafe { gcg_parse_total_wml(p) }, 16);
    let mut len = 0;
    assert_eq!(unsafe { gcg_parse_wml_record(p, ptr::null_mut(), 0, &mut len) }, GcgStatus::Ok);
    let mut rec = vec![0u32; len];
    assert_eq!(unsafe { gcg_parse_wml_record(p, rec.as_mut_ptr(), rec.len(), &mut len) }, GcgStatus::Ok);
    assert_eq!(rec, [1, 3, 6, 5, 1]);
    let mut lf = ptr::null_mut();
    assert_eq!(unsafe { gcg_parse_lf(p, &mut lf) }, GcgStatus::Ok);
    assert_eq!(take(lf), "w1(w0, w2)");
    let mut table = ptr::null_mut();
    assert_eq!(unsafe { gcg_parse_table(p, &mut table) }, GcgStatus::Ok);
    assert!(take(table).contains("Halt: total WML 16"));
    unsafe {
        gcg_parse_free(p);
        gcg_grammar_free(g);
    }
}

#[test]
fn grammar_queries() {
    let g = grammar("english");
    let mut mean = 0.0;
    assert_eq!(unsafe { gcg_grammar_mean_wml(g, &mut mean) }, GcgStatus::Ok);
    assert!((mean - 15.5).abs() < 1e-9);
    let mut text = ptr::null_mut();
    assert_eq!(unsafe { gcg_grammar_genome(g, &mut text) }, GcgStatus::Ok);
    let genome = take(text);
    assert!(genome.starts_with("applic A T\n"));
    let mut dump = ptr::null_mut();
    assert_eq!(unsafe { gcg_grammar_dump(g, &mut dump) }, GcgStatus::Ok);
    assert_eq!(take(dump).matches("# template").count(), 12);
    unsafe { gcg_grammar_free(g) };
    // genome text round-trips through the constructor
    let again = grammar(&genome);
    unsafe { gcg_grammar_free(again) };
}

#[test]
fn errors_set_codes_and_messages() {
    let mut g = ptr::null_mut();
    assert_eq!(unsafe { gcg_grammar_new(ptr::null(), &mut g) }, GcgStatus::NullPointer);
    let bad = CString::new("klingon").unwrap();
    assert_eq!(unsafe { gcg_grammar_new(bad.as_ptr(), &mut g) }, GcgStatus::InvalidArgument);
    assert!(g.is_null());
    assert!(take(gcg_last_error_message()).contains("klingon"));
    let eng = grammar("english");
    let mut text = ptr::null_mut();
    assert_eq!(unsafe { gcg_grammar_genome(eng, &mut text) }, GcgStatus::Ok);
    unsafe { gcg_grammar_free(eng) };
    let undecodable = CString::new(take(text).replace("applic A T", "applic A F")).unwrap();
    assert_eq!(unsafe { gcg_grammar_new(undecodable.as_ptr(), &mut g) }, GcgStatus::Grammar);
    let eng = grammar("english");
    let cats = CString::new("NP ((").unwrap();
    let mut p = ptr::null_mut();
    assert_eq!(unsafe { gcg_parse(eng, cats.as_ptr(), &mut p) }, GcgStatus::InvalidArgument);
    assert_eq!(unsafe { gcg_grammar_mean_wml(eng, ptr::null_mut()) }, GcgStatus::NullPointer);
    let ok = CString::new("NP NP").unwrap();
    assert_eq!(unsafe { gcg_parse(eng, ok.as_ptr(), &mut p) }, GcgStatus::Ok);
    assert!(gcg_last_error_message().is_null());
    assert!(!unsafe { gcg_parse_success(p) });
    let mut lf = ptr::null_mut();
    assert_eq!(unsafe { gcg_parse_lf(p, &mut lf) }, GcgStatus::Ok);
    assert!(lf.is_null());
    unsafe {
        gcg_parse_free(p);
        gcg_grammar_free(eng);
        gcg_grammar_free(ptr::null_mut());
        gcg_string_free(ptr::null_mut());
    }
}

#[test]
fn experiments_return_jsonl() {
    let lang = CString::new("japanese").unwrap();
    let mut a = ptr::null_mut();
    let mut b = ptr::null_mut();
    assert_eq!(unsafe { gcg_learn_effect(lang.as_ptr(), GcgLearnerKind::Unset, 4, 2, &mut a) }, GcgStatus::Ok);
    assert_eq!(unsafe { gcg_learn_effect(lang.as_ptr(), GcgLearnerKind::Unset, 4, 2, &mut b) }, GcgStatus::Ok);
    let (a, b) = (take(a), take(b));
    assert_eq!(a, b);
    assert_eq!(a.lines().count(), 6);
    let mut pref = ptr::null_mut();
    assert_eq!(unsafe { gcg_pref_evolution(lang.as_ptr(), GcgWmlMode::Both, 1, 2, 100, 1, &mut pref) }, GcgStatus::Ok);
    assert!(take(pref).contains("\"record\":\"cycle\""));
    let mut em = ptr::null_mut();
    assert_eq!(unsafe { gcg_emergence(true, 1, 2, 100, 1, &mut em) }, GcgStatus::Ok);
    assert!(take(em).contains("\"experiment\":\"emergence\""));
}
