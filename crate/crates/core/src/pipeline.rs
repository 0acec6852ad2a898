//! End-to-end stages: scan, analyse, aggregate.
//!
//! Each stage writes plain-file artifacts into the output directory and
//! returns a summary for the console. Engines run concurrently on a rayon
//! pool; summaries and errors are always reported in engine-name order.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use rayon::prelude::*;

use crate::aggregate::{
    aggregate_heatmap, derive_emergent_architecture, frequent_pairs, CouplingMatrix,
    EmergentArchitecture, FrequentPair,
};
use crate::config::{CorpusConfig, Options, RepoConfig};
use crate::emit::{self, dot, svg, table, write_text};
use crate::error::{Error, Result};
use crate::metrics::{
    average_metric, build_subsystem_graph, compute_metrics, Metric, MetricsReport, SubsystemGraph,
};
use crate::resolver::{build_include_graph, FileGraph, ResolutionCounts, ResolutionReport, ResolverContext};
use crate::scanner::{extract_directives, read_source, scan_repo, RepoSpec};
use crate::subsystem::{mapping_coverage, tag_files, CoverageReport, SubsystemCode, SubsystemMapping};

/// In-memory result of scanning and resolving one repository.
#[derive(Debug, Clone)]
pub struct ScannedEngine {
    pub name: String,
    pub root: PathBuf,
    pub files: Vec<PathBuf>,
    pub resolution: ResolutionReport,
    pub graph: FileGraph,
    /// Unreadable files and similar non-fatal problems.
    pub diagnostics: Vec<String>,
}

pub fn scan_engine(spec: &RepoSpec, strict: bool) -> Result<ScannedEngine> {
    let files = scan_repo(spec)?;
    let root = spec.absolute_root()?;
    let per_file: Vec<_> = files
        .par_iter()
        .map(|path| {
            let (content, diag) = read_source(path);
            (extract_directives(path, &content), diag)
        })
        .collect();
    let mut directives = Vec::new();
    let mut diagnostics = Vec::new();
    for (found, diag) in per_file {
        directives.extend(found);
        diagnostics.extend(diag);
    }
    let ctx = ResolverContext::new(root.clone(), spec.search_dirs()?, &files, strict);
    let resolution = ctx.resolve_all(&directives);
    let graph = build_include_graph(resolution.edges(), &files);
    Ok(ScannedEngine {
        name: spec.name.clone(),
        root,
        files,
        resolution,
        graph,
        diagnostics,
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ScanSummary {
    pub engine: String,
    pub files: usize,
    pub edges: usize,
    pub counts: ResolutionCounts,
    pub diagnostics: usize,
}

impl ScanSummary {
    fn of(scan: &ScannedEngine) -> Self {
        ScanSummary {
            engine: scan.name.clone(),
            files: scan.files.len(),
            edges: scan.graph.edge_count(),
            counts: scan.resolution.counts(),
            diagnostics: scan.diagnostics.len(),
        }
    }
}

fn write_scan_artifacts(out: &Path, scan: &ScannedEngine) -> Result<()> {
    write_text(&out.join(emit::includes_dot(&scan.name)), &dot::file_graph_to_dot(&scan.graph))?;
    write_text(
        &out.join(emit::includes_unresolved_csv(&scan.name)),
        &table::unresolved_csv(&scan.resolution),
    )?;
    write_text(
        &out.join(emit::includes_ambiguous_csv(&scan.name)),
        &table::ambiguous_csv(&scan.resolution),
    )
}

/// Runs `f` for each named repository on a pool of `jobs` threads and
/// returns results in name order; the first failing engine (by name) wins.
pub fn for_each_engine<T, F>(config: &CorpusConfig, names: &[String], jobs: usize, f: F) -> Result<Vec<T>>
where
    T: Send,
    F: Fn(&RepoConfig) -> Result<T> + Sync,
{
    let mut names = names.to_vec();
    names.sort();
    names.dedup();
    let repos: Vec<&RepoConfig> = names.iter().map(|n| config.repo(n)).collect::<Result<_>>()?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs.max(1))
        .build()
        .map_err(|e| Error::Internal(format!("cannot start worker pool: {e}")))?;
    let results: Vec<Result<T>> = pool.install(|| repos.par_iter().map(|r| f(r)).collect());
    results.into_iter().collect()
}

pub fn cmd_scan(config: &CorpusConfig, repo_name: &str) -> Result<ScanSummary> {
    let repo = config.repo(repo_name)?;
    let scan = scan_engine(&repo.spec, config.options.strict_resolve)?;
    write_scan_artifacts(&config.output_dir, &scan)?;
    Ok(ScanSummary::of(&scan))
}

#[derive(Debug, Clone, PartialEq)]
pub struct AnalyseSummary {
    pub scan: ScanSummary,
    pub coverage: CoverageReport,
    pub graph: SubsystemGraph,
    pub metrics: MetricsReport,
    pub warnings: Vec<String>,
}

/// Tags every file-graph node and lifts the graph onto subsystems.
pub fn analyse_scanned(
    scan: &ScannedEngine,
    mapping: &SubsystemMapping,
    options: &Options,
) -> (SubsystemGraph, CoverageReport) {
    let nodes: Vec<PathBuf> = scan.graph.nodes.iter().cloned().collect();
    let tagged = tag_files(&nodes, &scan.root, mapping);
    let graph = build_subsystem_graph(&scan.name, &scan.graph, &tagged, options.include_unassigned);
    let scanned_only = tag_files(&scan.files, &scan.root, mapping);
    (graph, mapping_coverage(&scanned_only))
}

pub fn cmd_analyse(config: &CorpusConfig, repo_name: &str) -> Result<AnalyseSummary> {
    let repo = config.repo(repo_name)?;
    let mapping_path = repo.mapping.as_ref().ok_or_else(|| {
        Error::Config(format!("repository `{repo_name}` has no mapping file"))
    })?;
    if !mapping_path.is_file() {
        return Err(Error::Config(format!(
            "mapping file `{}` for `{repo_name}` does not exist",
            mapping_path.display()
        )));
    }
    let mapping = SubsystemMapping::load(mapping_path)?;
    let scan = scan_engine(&repo.spec, config.options.strict_resolve)?;
    write_scan_artifacts(&config.output_dir, &scan)?;

    let (graph, coverage) = analyse_scanned(&scan, &mapping, &config.options);
    let metrics = compute_metrics(&graph, config.options.normalize_centrality);
    let out = &config.output_dir;
    write_text(&out.join(emit::subsystems_dot(&scan.name)), &dot::subsystem_graph_to_dot(&graph))?;
    write_text(&out.join(emit::metrics_csv(&scan.name)), &table::metrics_csv(&metrics))?;

    let mut warnings = Vec::new();
    if graph.nodes.is_empty() {
        warnings.push(format!("{repo_name}: mapping covers no files; subsystem graph is empty"));
    }
    Ok(AnalyseSummary {
        scan: ScanSummary::of(&scan),
        coverage,
        graph,
        metrics,
        warnings,
    })
}

/// Everything derived from the set of per-engine subsystem graphs.
#[derive(Debug, Clone, PartialEq)]
pub struct CorpusResult {
    pub engines: Vec<String>,
    pub matrix: CouplingMatrix,
    pub avg_in_degree: Vec<(SubsystemCode, f64)>,
    pub avg_betweenness: Vec<(SubsystemCode, f64)>,
    pub engines_present: BTreeMap<SubsystemCode, usize>,
    pub pairs: Vec<FrequentPair>,
    pub architecture: EmergentArchitecture,
}

/// Pure aggregation over per-engine graphs. Input order does not matter.
pub fn aggregate_corpus(graphs: &[SubsystemGraph], options: &Options) -> Result<CorpusResult> {
    let mut graphs = graphs.to_vec();
    graphs.sort_by(|a, b| a.engine.cmp(&b.engine));
    let matrix = aggregate_heatmap(&graphs)?;
    let reports: Vec<MetricsReport> = graphs
        .iter()
        .map(|g| compute_metrics(g, options.normalize_centrality))
        .collect();
    let avg_in_degree = average_metric(&reports, Metric::InDegree, options.averaging)?;
    let avg_betweenness = average_metric(&reports, Metric::Betweenness, options.averaging)?;
    let mut engines_present = BTreeMap::new();
    for g in &graphs {
        for code in g.nodes.iter().filter_map(|n| n.code()) {
            *engines_present.entry(code).or_insert(0) += 1;
        }
    }
    let centrality: BTreeMap<SubsystemCode, f64> = avg_betweenness.iter().copied().collect();
    let pairs = frequent_pairs(&matrix, options.pair_threshold, &centrality);
    let architecture = derive_emergent_architecture(&pairs, &centrality, options.inner_core_size)?;
    Ok(CorpusResult {
        engines: graphs.iter().map(|g| g.engine.clone()).collect(),
        matrix,
        avg_in_degree,
        avg_betweenness,
        engines_present,
        pairs,
        architecture,
    })
}

pub fn write_corpus_artifacts(out: &Path, result: &CorpusResult) -> Result<()> {
    write_text(&out.join(emit::HEATMAP_CSV), &table::heatmap_csv(&result.matrix))?;
    write_text(&out.join(emit::HEATMAP_SVG), &svg::heatmap_svg(&result.matrix))?;
    write_text(&out.join(emit::PAIRS_CSV), &table::pairs_csv(&result.pairs))?;
    write_text(
        &out.join(emit::AVERAGES_CSV),
        &table::averages_csv(&result.avg_in_degree, &result.avg_betweenness, &result.engines_present),
    )?;
    write_text(&out.join(emit::ARCHITECTURE_SVG), &svg::architecture_svg(&result.architecture))?;
    write_text(&out.join(emit::ARCHITECTURE_TXT), &table::architecture_text(&result.architecture))
}

#[derive(Debug, Clone, PartialEq)]
pub struct AggregateSummary {
    pub result: CorpusResult,
    /// Configured engines with no subsystem model in the output directory.
    pub skipped: Vec<String>,
}

/// Loads every configured engine's `<engine>-subsystems.dot` from the
/// output directory and aggregates them.
pub fn cmd_aggregate(config: &CorpusConfig) -> Result<AggregateSummary> {
    let mut graphs = Vec::new();
    let mut skipped = Vec::new();
    for name in config.repo_names() {
        let path = config.output_dir.join(emit::subsystems_dot(&name));
        if !path.is_file() {
            skipped.push(name);
            continue;
        }
        let text = fs::read_to_string(&path).map_err(|e| Error::io(&path, e))?;
        graphs.push(dot::parse_subsystem_dot(&name, &path, &text)?);
    }
    if graphs.is_empty() {
        return Err(Error::NoEngines);
    }
    let result = aggregate_corpus(&graphs, &config.options)?;
    write_corpus_artifacts(&config.output_dir, &result)?;
    Ok(AggregateSummary { result, skipped })
}

#[derive(Debug, Clone, PartialEq)]
pub struct AllSummary {
    pub engines: Vec<AnalyseSummary>,
    pub aggregate: AggregateSummary,
}

pub fn cmd_all(config: &CorpusConfig, jobs: usize) -> Result<AllSummary> {
    let names = config.repo_names();
    if names.is_empty() {
        return Err(Error::NoEngines);
    }
    let engines = for_each_engine(config, &names, jobs, |r| cmd_analyse(config, &r.spec.name))?;
    let aggregate = cmd_aggregate(config)?;
    Ok(AllSummary { engines, aggregate })
}
