//! C ABI over the `enginemap` library.
//!
//! Handles are opaque and owned by the caller once returned; each has a
//! matching `*_free`. Every entry point returns an [`EmStatus`] (or a value
//! with a documented failure sentinel) and never unwinds across the
//! boundary. On failure, [`em_last_error`] describes the problem for the
//! calling thread.
//!
//! Subsystem codes are passed as indices into the canonical order
//! AUD COR DEB FES GMP HID LLR OMP PHY PLA RES SDK SGC SKA VFX EDI.

use std::cell::RefCell;
use std::collections::BTreeSet;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::PathBuf;
use std::ptr;

use enginemap::aggregate::Tier;
use enginemap::config::Options;
use enginemap::metrics::{brandes, compute_metrics, MetricsReport};
use enginemap::pipeline::{aggregate_corpus, analyse_scanned, scan_engine, CorpusResult};
use enginemap::resolver::ResolutionCounts;
use enginemap::scanner::RepoSpec;
use enginemap::subsystem::SubsystemMapping;
use enginemap::{Error, Node, SubsystemCode, SubsystemGraph};

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EmStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    /// Bad configuration or input data (mapping, repository root, ...).
    InputError = 3,
    Io = 4,
    Internal = 5,
    Panic = 6,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EmTier {
    InnerCore = 0,
    OuterCore = 1,
    Periphery = 2,
}

/// Options for [`em_engine_analyse`]. A null pointer means all `false`
/// and no extra directories.
#[repr(C)]
#[derive(Debug, Clone, Copy)]
pub struct EmEngineOptions {
    /// `;`-separated directory names skipped while scanning, or null.
    pub exclude_dirs: *const c_char,
    /// `;`-separated first-pass search directories relative to the root, or null.
    pub include_dirs: *const c_char,
    pub strict_resolve: bool,
    pub include_unassigned: bool,
    pub normalize_centrality: bool,
}

/// Options for [`em_corpus_aggregate`]. A null pointer means defaults
/// (threshold 6, inner core 4, present-only averaging).
#[repr(C)]
#[derive(Debug, Clone, Copy)]
pub struct EmCorpusOptions {
    pub pair_threshold: usize,
    pub inner_core_size: usize,
    /// Average over all engines instead of only those containing the code.
    pub zero_fill: bool,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct EmResolutionCounts {
    pub first_pass: usize,
    pub second_pass: usize,
    pub ambiguous: usize,
    pub unresolved: usize,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EmPair {
    pub source: u32,
    pub target: u32,
    pub count: usize,
    pub centrality_sum: f64,
}

/// One analysed engine: its subsystem graph and metrics.
pub struct EmEngine {
    graph: SubsystemGraph,
    metrics: MetricsReport,
    counts: ResolutionCounts,
    files: usize,
}

/// A growing set of engine graphs awaiting aggregation.
pub struct EmCorpus {
    graphs: Vec<SubsystemGraph>,
}

/// Heatmap, frequent pairs and tiers for a corpus.
pub struct EmAggregate {
    result: CorpusResult,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_last_error(message: impl Into<String>) {
    let message = message.into().replace('\0', " ");
    let c = CString::new(message).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn clear_last_error() {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
}

struct Failure(EmStatus, String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let status = match &e {
            Error::Io { .. } => EmStatus::Io,
            Error::Internal(_) => EmStatus::Internal,
            _ if e.exit_code() == 2 => EmStatus::InputError,
            _ => EmStatus::Internal,
        };
        Failure(status, e.to_string())
    }
}

fn null(what: &str) -> Failure {
    Failure(EmStatus::NullPointer, format!("`{what}` is null"))
}

fn invalid(message: impl Into<String>) -> Failure {
    Failure(EmStatus::InvalidArgument, message.into())
}

/// Runs `f`, converting errors and panics into a status code.
fn guard(f: impl FnOnce() -> Result<(), Failure>) -> EmStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            clear_last_error();
            EmStatus::Ok
        }
        Ok(Err(Failure(status, message))) => {
            set_last_error(message);
            status
        }
        Err(_) => {
            set_last_error("internal panic");
            EmStatus::Panic
        }
    }
}

unsafe fn str_arg<'a>(p: *const c_char, what: &str) -> Result<&'a str, Failure> {
    if p.is_null() {
        return Err(null(what));
    }
    // SAFETY: caller passes a NUL-terminated string valid for the call.
    unsafe { CStr::from_ptr(p) }
        .to_str()
        .map_err(|_| invalid(format!("`{what}` is not valid UTF-8")))
}

unsafe fn list_arg(p: *const c_char, what: &str) -> Result<Vec<String>, Failure> {
    if p.is_null() {
        return Ok(Vec::new());
    }
    let s = unsafe { str_arg(p, what) }?;
    Ok(s.split(';').filter(|d| !d.is_empty()).map(str::to_string).collect())
}

unsafe fn ref_arg<'a, T>(p: *const T, what: &str) -> Result<&'a T, Failure> {
    // SAFETY: caller passes null or a live handle from this library.
    unsafe { p.as_ref() }.ok_or_else(|| null(what))
}

unsafe fn out_arg<'a, T>(p: *mut T, what: &str) -> Result<&'a mut T, Failure> {
    // SAFETY: caller passes null or a writable pointer.
    unsafe { p.as_mut() }.ok_or_else(|| null(what))
}

fn code_arg(index: u32) -> Result<SubsystemCode, Failure> {
    SubsystemCode::from_index(index as usize)
        .ok_or_else(|| invalid(format!("subsystem index {index} out of range 0..16")))
}

/// Message for the last failed call on this thread, or null. The pointer
/// stays valid until the next call into this library on the same thread.
#[no_mangle]
pub extern "C" fn em_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Three-letter code for a subsystem index, or null if out of range.
/// The string is static.
#[no_mangle]
pub extern "C" fn em_subsystem_code(index: u32) -> *const c_char {
    const NAMES: [&CStr; 16] = [
        c"AUD", c"COR", c"DEB", c"FES", c"GMP", c"HID", c"LLR", c"OMP", c"PHY", c"PLA", c"RES",
        c"SDK", c"SGC", c"SKA", c"VFX", c"EDI",
    ];
    NAMES.get(index as usize).map_or(ptr::null(), |c| c.as_ptr())
}

/// Scans `root`, resolves includes, tags files with the mapping CSV and
/// builds the subsystem graph and metrics.
///
/// # Safety
/// String arguments must be NUL-terminated; `options` may be null and its
/// string fields may be null; `out` must be writable. On success `*out`
/// owns a handle for [`em_engine_free`].
#[no_mangle]
pub unsafe extern "C" fn em_engine_analyse(
    name: *const c_char,
    root: *const c_char,
    mapping_csv: *const c_char,
    options: *const EmEngineOptions,
    out: *mut *mut EmEngine,
) -> EmStatus {
    guard(|| {
        let out = unsafe { out_arg(out, "out") }?;
        *out = ptr::null_mut();
        let name = unsafe { str_arg(name, "name") }?;
        let root = unsafe { str_arg(root, "root") }?;
        let mapping_csv = unsafe { str_arg(mapping_csv, "mapping_csv") }?;
        let opts = unsafe { options.as_ref() }.copied().unwrap_or(EmEngineOptions {
            exclude_dirs: ptr::null(),
            include_dirs: ptr::null(),
            strict_resolve: false,
            include_unassigned: false,
            normalize_centrality: false,
        });
        if name.is_empty() {
            return Err(invalid("`name` is empty"));
        }

        let mapping = SubsystemMapping::load(&PathBuf::from(mapping_csv))?;
        let mut spec = RepoSpec::new(name, root);
        spec.exclude_dirs = unsafe { list_arg(opts.exclude_dirs, "exclude_dirs") }?;
        spec.include_dirs = unsafe { list_arg(opts.include_dirs, "include_dirs") }?
            .into_iter()
            .map(PathBuf::from)
            .collect();
        spec.validate()?;
        let scan = scan_engine(&spec, opts.strict_resolve)?;
        let options = Options {
            strict_resolve: opts.strict_resolve,
            include_unassigned: opts.include_unassigned,
            normalize_centrality: opts.normalize_centrality,
            ..Options::default()
        };
        let (graph, _) = analyse_scanned(&scan, &mapping, &options);
        let metrics = compute_metrics(&graph, opts.normalize_centrality);
        let c = scan.resolution.counts();
        *out = Box::into_raw(Box::new(EmEngine {
            graph,
            metrics,
            counts: c,
            files: scan.files.len(),
        }));
        Ok(())
    })
}

/// # Safety
/// `engine` must be null or a handle from [`em_engine_analyse`] not yet freed.
#[no_mangle]
pub unsafe extern "C" fn em_engine_free(engine: *mut EmEngine) {
    if !engine.is_null() {
        // SAFETY: handle was produced by Box::into_raw in this library.
        let _ = catch_unwind(AssertUnwindSafe(|| drop(unsafe { Box::from_raw(engine) })));
    }
}

/// # Safety
/// `engine` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn em_engine_file_count(engine: *const EmEngine, out: *mut usize) -> EmStatus {
    guard(|| {
        let engine = unsafe { ref_arg(engine, "engine") }?;
        *unsafe { out_arg(out, "out") }? = engine.files;
        Ok(())
    })
}

/// # Safety
/// `engine` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn em_engine_resolution_counts(
    engine: *const EmEngine,
    out: *mut EmResolutionCounts,
) -> EmStatus {
    guard(|| {
        let engine = unsafe { ref_arg(engine, "engine") }?;
        let c = &engine.counts;
        *unsafe { out_arg(out, "out") }? = EmResolutionCounts {
            first_pass: c.first_pass,
            second_pass: c.second_pass,
            ambiguous: c.ambiguous,
            unresolved: c.unresolved,
        };
        Ok(())
    })
}

/// Writes whether the subsystem has at least one file in the graph.
///
/// # Safety
/// `engine` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn em_engine_has_subsystem(
    engine: *const EmEngine,
    code: u32,
    out: *mut bool,
) -> EmStatus {
    guard(|| {
        let engine = unsafe { ref_arg(engine, "engine") }?;
        let code = code_arg(code)?;
        *unsafe { out_arg(out, "out") }? = engine.graph.nodes.contains(&Node::Subsystem(code));
        Ok(())
    })
}

/// Distinct predecessor subsystems; 0 for absent subsystems.
///
/// # Safety
/// `engine` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn em_engine_in_degree(
    engine: *const EmEngine,
    code: u32,
    out: *mut usize,
) -> EmStatus {
    guard(|| {
        let engine = unsafe { ref_arg(engine, "engine") }?;
        let code = code_arg(code)?;
        let value = engine.metrics.in_degree.get(&Node::Subsystem(code)).copied();
        *unsafe { out_arg(out, "out") }? = value.unwrap_or(0);
        Ok(())
    })
}

/// Betweenness centrality; 0 for absent subsystems.
///
/// # Safety
/// `engine` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn em_engine_betweenness(
    engine: *const EmEngine,
    code: u32,
    out: *mut f64,
) -> EmStatus {
    guard(|| {
        let engine = unsafe { ref_arg(engine, "engine") }?;
        let code = code_arg(code)?;
        let value = engine.metrics.betweenness.get(&Node::Subsystem(code)).copied();
        *unsafe { out_arg(out, "out") }? = value.unwrap_or(0.0);
        Ok(())
    })
}

/// Number of distinct file pairs behind the edge `source -> target`.
///
/// # Safety
/// `engine` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn em_engine_edge_weight(
    engine: *const EmEngine,
    source: u32,
    target: u32,
    out: *mut usize,
) -> EmStatus {
    guard(|| {
        let engine = unsafe { ref_arg(engine, "engine") }?;
        let key = (Node::Subsystem(code_arg(source)?), Node::Subsystem(code_arg(target)?));
        *unsafe { out_arg(out, "out") }? = engine.graph.edges.get(&key).copied().unwrap_or(0);
        Ok(())
    })
}

#[no_mangle]
pub extern "C" fn em_corpus_new() -> *mut EmCorpus {
    catch_unwind(|| Box::into_raw(Box::new(EmCorpus { graphs: Vec::new() }))).unwrap_or(ptr::null_mut())
}

/// # Safety
/// `corpus` must be null or a handle from [`em_corpus_new`] not yet freed.
#[no_mangle]
pub unsafe extern "C" fn em_corpus_free(corpus: *mut EmCorpus) {
    if !corpus.is_null() {
        // SAFETY: handle was produced by Box::into_raw in this library.
        let _ = catch_unwind(AssertUnwindSafe(|| drop(unsafe { Box::from_raw(corpus) })));
    }
}

/// Copies the engine's subsystem graph into the corpus. Engine names must
/// be distinct. The engine handle stays owned by the caller.
///
/// # Safety
/// Both handles must be live.
#[no_mangle]
pub unsafe extern "C" fn em_corpus_add_engine(corpus: *mut EmCorpus, engine: *const EmEngine) -> EmStatus {
    guard(|| {
        let corpus = unsafe { out_arg(corpus, "corpus") }?;
        let engine = unsafe { ref_arg(engine, "engine") }?;
        if corpus.graphs.iter().any(|g| g.engine == engine.graph.engine) {
            return Err(invalid(format!("duplicate engine `{}`", engine.graph.engine)));
        }
        corpus.graphs.push(engine.graph.clone());
        Ok(())
    })
}

/// # Safety
/// `corpus` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn em_corpus_len(corpus: *const EmCorpus, out: *mut usize) -> EmStatus {
    guard(|| {
        let corpus = unsafe { ref_arg(corpus, "corpus") }?;
        *unsafe { out_arg(out, "out") }? = corpus.graphs.len();
        Ok(())
    })
}

/// Builds the heatmap, frequent pairs and tiers for the engines added so far.
///
/// # Safety
/// `corpus` must be a live handle; `options` may be null; `out` must be
/// writable. On success `*out` owns a handle for [`em_aggregate_free`].
#[no_mangle]
pub unsafe extern "C" fn em_corpus_aggregate(
    corpus: *const EmCorpus,
    options: *const EmCorpusOptions,
    out: *mut *mut EmAggregate,
) -> EmStatus {
    guard(|| {
        let out = unsafe { out_arg(out, "out") }?;
        *out = ptr::null_mut();
        let corpus = unsafe { ref_arg(corpus, "corpus") }?;
        let mut opts = Options::default();
        if let Some(o) = unsafe { options.as_ref() } {
            if o.pair_threshold == 0 || o.inner_core_size == 0 {
                return Err(invalid("pair_threshold and inner_core_size must be at least 1"));
            }
            opts.pair_threshold = o.pair_threshold;
            opts.inner_core_size = o.inner_core_size;
            if o.zero_fill {
                opts.averaging = enginemap::metrics::Averaging::ZeroFill;
            }
        }
        if corpus.graphs.is_empty() {
            return Err(Error::NoEngines.into());
        }
        let result = aggregate_corpus(&corpus.graphs, &opts)?;
        *out = Box::into_raw(Box::new(EmAggregate { result }));
        Ok(())
    })
}

/// # Safety
/// `aggregate` must be null or a handle from [`em_corpus_aggregate`].
#[no_mangle]
pub unsafe extern "C" fn em_aggregate_free(aggregate: *mut EmAggregate) {
    if !aggregate.is_null() {
        // SAFETY: handle was produced by Box::into_raw in this library.
        let _ = catch_unwind(AssertUnwindSafe(|| drop(unsafe { Box::from_raw(aggregate) })));
    }
}

/// Number of engines with an edge `source -> target`.
///
/// # Safety
/// `aggregate` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn em_aggregate_heatmap_count(
    aggregate: *const EmAggregate,
    source: u32,
    target: u32,
    out: *mut usize,
) -> EmStatus {
    guard(|| {
        let aggregate = unsafe { ref_arg(aggregate, "aggregate") }?;
        let (s, t) = (code_arg(source)?, code_arg(target)?);
        *unsafe { out_arg(out, "out") }? = aggregate.result.matrix.get(s, t);
        Ok(())
    })
}

/// # Safety
/// `aggregate` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn em_aggregate_pair_count(aggregate: *const EmAggregate, out: *mut usize) -> EmStatus {
    guard(|| {
        let aggregate = unsafe { ref_arg(aggregate, "aggregate") }?;
        *unsafe { out_arg(out, "out") }? = aggregate.result.pairs.len();
        Ok(())
    })
}

/// Frequent pair at `index`, in ranked order.
///
/// # Safety
/// `aggregate` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn em_aggregate_pair(
    aggregate: *const EmAggregate,
    index: usize,
    out: *mut EmPair,
) -> EmStatus {
    guard(|| {
        let aggregate = unsafe { ref_arg(aggregate, "aggregate") }?;
        let pairs = &aggregate.result.pairs;
        let p = pairs
            .get(index)
            .ok_or_else(|| invalid(format!("pair index {index} out of range 0..{}", pairs.len())))?;
        *unsafe { out_arg(out, "out") }? = EmPair {
            source: p.source.index() as u32,
            target: p.target.index() as u32,
            count: p.count,
            centrality_sum: p.centrality_sum,
        };
        Ok(())
    })
}

/// # Safety
/// `aggregate` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn em_aggregate_tier(
    aggregate: *const EmAggregate,
    code: u32,
    out: *mut EmTier,
) -> EmStatus {
    guard(|| {
        let aggregate = unsafe { ref_arg(aggregate, "aggregate") }?;
        let tier = match aggregate.result.architecture.tier_of(code_arg(code)?) {
            Tier::InnerCore => EmTier::InnerCore,
            Tier::OuterCore => EmTier::OuterCore,
            Tier::Periphery => EmTier::Periphery,
        };
        *unsafe { out_arg(out, "out") }? = tier;
        Ok(())
    })
}

/// Unnormalised directed betweenness of a graph with `n` nodes. `edges`
/// holds `n_edges` (source, target) pairs flattened; duplicates and
/// self-loops are ignored. `out` receives `n` values.
///
/// # Safety
/// `edges` must point to `2 * n_edges` readable values (or be null when
/// `n_edges` is 0); `out` must point to `n` writable doubles.
#[no_mangle]
pub unsafe extern "C" fn em_betweenness(
    n: usize,
    edges: *const u32,
    n_edges: usize,
    out: *mut f64,
) -> EmStatus {
    guard(|| {
        if out.is_null() && n > 0 {
            return Err(null("out"));
        }
        if edges.is_null() && n_edges > 0 {
            return Err(null("edges"));
        }
        let flat: &[u32] = if n_edges == 0 {
            &[]
        } else {
            let len = n_edges
                .checked_mul(2)
                .ok_or_else(|| invalid("`n_edges` too large"))?;
            // SAFETY: caller guarantees 2 * n_edges readable values.
            unsafe { std::slice::from_raw_parts(edges, len) }
        };
        let mut adjacency: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); n];
        for pair in flat.chunks_exact(2) {
            let (s, t) = (pair[0] as usize, pair[1] as usize);
            if s >= n || t >= n {
                return Err(invalid(format!("edge ({s}, {t}) references a node outside 0..{n}")));
            }
            if s != t {
                adjacency[s].insert(t);
            }
        }
        let adjacency: Vec<Vec<usize>> = adjacency.into_iter().map(|s| s.into_iter().collect()).collect();
        let scores = brandes(&adjacency);
        if n > 0 {
            // SAFETY: caller guarantees n writable doubles.
            unsafe { std::slice::from_raw_parts_mut(out, n) }.copy_from_slice(&scores);
        }
        Ok(())
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn code_names() {
        let name = |i| unsafe { CStr::from_ptr(em_subsystem_code(i)) }.to_str().unwrap();
        assert_eq!(name(0), "AUD");
        assert_eq!(name(15), "EDI");
        assert!(em_subsystem_code(16).is_null());
    }

    #[test]
    fn null_out_sets_error() {
        let status = unsafe { em_engine_file_count(ptr::null(), ptr::null_mut()) };
        assert_eq!(status, EmStatus::NullPointer);
        let msg = unsafe { CStr::from_ptr(em_last_error()) }.to_str().unwrap();
        assert!(msg.contains("engine"), "{msg}");
    }

    #[test]
    fn path_betweenness() {
        let edges = [0u32, 1, 1, 2];
        let mut out = [f64::NAN; 3];
        let status = unsafe { em_betweenness(3, edges.as_ptr(), 2, out.as_mut_ptr()) };
        assert_eq!(status, EmStatus::Ok);
        assert!(em_last_error().is_null());
        assert_eq!(out, [0.0, 1.0, 0.0]);
    }
}
