use std::ffi::{CStr, CString};
use std::path::{Path, PathBuf};
use std::process::Command;
use std::ptr;

use enginemap_ffi::*;

fn corpus_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../core/tests/fixtures/corpus")
}

fn cstr(s: &str) -> CString {
    CString::new(s).unwrap()
}

fn last_error() -> String {
    let p = em_last_error();
    assert!(!p.is_null());
    unsafe { CStr::from_ptr(p) }.to_string_lossy().into_owned()
}

fn analyse(name: &str) -> *mut EmEngine {
    // same directory settings as corpus.toml
    let (exclude, include) = match name {
        "mini-a" => ("build", ""),
        "mini-b" => ("", "include"),
        _ => ("vendor", ""),
    };
    let (exclude, include) = (cstr(exclude), cstr(include));
    let options = EmEngineOptions {
        exclude_dirs: exclude.as_ptr(),
        include_dirs: include.as_ptr(),
        strict_resolve: false,
        include_unassigned: false,
        normalize_centrality: false,
    };
    let dir = corpus_dir();
    let root = cstr(dir.join(name).to_str().unwrap());
    let mapping = cstr(dir.join("mappings").join(format!("{name}.csv")).to_str().unwrap());
    let name = cstr(name);
    let mut engine = ptr::null_mut();
    let status = unsafe { em_engine_analyse(name.as_ptr(), root.as_ptr(), mapping.as_ptr(), &options, &mut engine) };
    assert_eq!(status, EmStatus::Ok, "{}", last_error());
    assert!(!engine.is_null());
    engine
}

const COR: u32 = 1;
const DEB: u32 = 2;
const HID: u32 = 5;
const LLR: u32 = 6;
const SGC: u32 = 12;

#[test]
fn engine_queries() {
    let engine = analyse("mini-b");
    unsafe {
        let mut files = 0;
        assert_eq!(em_engine_file_count(engine, &mut files), EmStatus::Ok);
        assert_eq!(files, 33);

        let mut counts = EmResolutionCounts::default();
        assert_eq!(em_engine_resolution_counts(engine, &mut counts), EmStatus::Ok);
        assert_eq!(
            counts,
            EmResolutionCounts { first_pass: 33, second_pass: 7, ambiguous: 1, unresolved: 7 }
        );

        let mut present = false;
        assert_eq!(em_engine_has_subsystem(engine, DEB, &mut present), EmStatus::Ok);
        assert!(present);
        assert_eq!(em_engine_has_subsystem(engine, SGC, &mut present), EmStatus::Ok);
        assert!(present);
        assert_eq!(em_engine_has_subsystem(engine, HID, &mut present), EmStatus::Ok);
        assert!(!present);

        // src/core/memory/pool.cpp includes src/core/log.h (DEB override)
        let mut weight = 0;
        assert_eq!(em_engine_edge_weight(engine, COR, DEB, &mut weight), EmStatus::Ok);
        assert!(weight >= 1);

        let mut deg = 0;
        assert_eq!(em_engine_in_degree(engine, 16, &mut deg), EmStatus::InvalidArgument);
        assert!(last_error().contains("out of range"));

        let mut b = -1.0;
        assert_eq!(em_engine_betweenness(engine, LLR, &mut b), EmStatus::Ok);
        assert!(b >= 0.0);
        em_engine_free(engine);
    }
}

#[test]
fn bad_inputs_map_to_status_codes() {
    let name = cstr("x");
    let missing = cstr("/definitely/not/here");
    let mapping = cstr(corpus_dir().join("mappings/mini-a.csv").to_str().unwrap());
    let mut engine = ptr::null_mut();
    unsafe {
        let s = em_engine_analyse(name.as_ptr(), missing.as_ptr(), mapping.as_ptr(), ptr::null(), &mut engine);
        assert_eq!(s, EmStatus::InputError);
        assert!(engine.is_null());

        let root = cstr(corpus_dir().join("mini-a").to_str().unwrap());
        let s = em_engine_analyse(name.as_ptr(), root.as_ptr(), missing.as_ptr(), ptr::null(), &mut engine);
        assert_ne!(s, EmStatus::Ok);

        let s = em_engine_analyse(ptr::null(), root.as_ptr(), mapping.as_ptr(), ptr::null(), &mut engine);
        assert_eq!(s, EmStatus::NullPointer);

        let corpus = em_corpus_new();
        let mut agg = ptr::null_mut();
        assert_eq!(em_corpus_aggregate(corpus, ptr::null(), &mut agg), EmStatus::InputError);
        assert!(agg.is_null());
        em_corpus_free(corpus);

        // freeing null is a no-op
        em_engine_free(ptr::null_mut());
        em_corpus_free(ptr::null_mut());
        em_aggregate_free(ptr::null_mut());
    }
}

#[test]
fn corpus_round_trip() {
    let engines: Vec<_> = ["mini-a", "mini-b", "mini-c"].iter().map(|n| analyse(n)).collect();
    unsafe {
        let corpus = em_corpus_new();
        for &e in &engines {
            assert_eq!(em_corpus_add_engine(corpus, e), EmStatus::Ok);
        }
        assert_eq!(em_corpus_add_engine(corpus, engines[0]), EmStatus::InvalidArgument);
        let mut len = 0;
        em_corpus_len(corpus, &mut len);
        assert_eq!(len, 3);

        let opts = EmCorpusOptions { pair_threshold: 3, inner_core_size: 4, zero_fill: false };
        let mut agg = ptr::null_mut();
        assert_eq!(em_corpus_aggregate(corpus, &opts, &mut agg), EmStatus::Ok, "{}", last_error());

        let mut count = 0;
        assert_eq!(em_aggregate_heatmap_count(agg, LLR, COR, &mut count), EmStatus::Ok);
        assert!(count <= 3);

        let mut n_pairs = 0;
        em_aggregate_pair_count(agg, &mut n_pairs);
        assert!(n_pairs > 0);
        let mut prev = usize::MAX;
        for i in 0..n_pairs {
            let mut p = EmPair { source: 0, target: 0, count: 0, centrality_sum: 0.0 };
            assert_eq!(em_aggregate_pair(agg, i, &mut p), EmStatus::Ok);
            assert_eq!(p.count, 3);
            assert_ne!(p.source, p.target);
            assert!(p.count <= prev);
            prev = p.count;
            let mut tier = EmTier::Periphery;
            assert_eq!(em_aggregate_tier(agg, p.source, &mut tier), EmStatus::Ok);
            assert_ne!(tier, EmTier::Periphery);
        }
        let mut p = EmPair { source: 0, target: 0, count: 0, centrality_sum: 0.0 };
        assert_eq!(em_aggregate_pair(agg, n_pairs, &mut p), EmStatus::InvalidArgument);

        em_aggregate_free(agg);
        em_corpus_free(corpus);
        for e in engines {
            em_engine_free(e);
        }
    }
}

#[test]
fn betweenness_entry_point() {
    // diamond 0->1, 0->2, 1->3, 2->3 plus a duplicate and a self-loop
    let edges = [0u32, 1, 0, 2, 1, 3, 2, 3, 0, 1, 3, 3];
    let mut out = [0.0; 4];
    unsafe {
        assert_eq!(em_betweenness(4, edges.as_ptr(), 6, out.as_mut_ptr()), EmStatus::Ok);
        assert_eq!(out, [0.0, 0.5, 0.5, 0.0]);
        let bad = [0u32, 9];
        assert_eq!(em_betweenness(4, bad.as_ptr(), 1, out.as_mut_ptr()), EmStatus::InvalidArgument);
        assert_eq!(em_betweenness(0, ptr::null(), 0, ptr::null_mut()), EmStatus::Ok);
    }
}

#[test]
fn header_declares_api() {
    let header = std::fs::read_to_string(Path::new(env!("CARGO_MANIFEST_DIR")).join("include/enginemap.h")).unwrap();
    for symbol in [
        "em_last_error",
        "em_subsystem_code",
        "em_engine_analyse",
        "em_engine_free",
        "em_engine_in_degree",
        "em_engine_betweenness",
        "em_engine_edge_weight",
        "em_corpus_new",
        "em_corpus_add_engine",
        "em_corpus_aggregate",
        "em_aggregate_heatmap_count",
        "em_aggregate_pair",
        "em_aggregate_tier",
        "em_betweenness",
        "typedef struct EmEngine EmEngine;",
        "EM_STATUS_PANIC = 6",
    ] {
        assert!(header.contains(symbol), "header lacks {symbol}");
    }
}

#[test]
fn header_compiles_as_c() {
    let header = Path::new(env!("CARGO_MANIFEST_DIR")).join("include/enginemap.h");
    let dir = tempfile::tempdir().unwrap();
    let src = dir.path().join("probe.c");
    std::fs::write(
        &src,
        format!(
            "#include \"{}\"\nint probe(void) {{ EmEngine *e = 0; size_t n = 0; return (int)em_engine_file_count(e, &n); }}\n",
            header.display()
        ),
    )
    .unwrap();
    let status = match Command::new("cc").args(["-std=c99", "-Wall", "-Werror", "-fsyntax-only"]).arg(&src).status() {
        Ok(s) => s,
        Err(_) => {
            eprintln!("no C compiler found; skipping");
            return;
        }
    };
    assert!(status.success());
}
