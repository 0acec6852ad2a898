//! Two-pass include resolution.
//!
//! The first pass joins a directive against the including file's folder and
//! then each search directory. Whatever is left goes through the second
//! pass: candidates sharing the directive's file name are narrowed by
//! matching one more trailing folder at a time until a single file remains.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::path::{Path, PathBuf};

use rayon::prelude::*;

use crate::paths::normalize_lexically;
use crate::scanner::{Directive, RawInclude};
use crate::subsystem::relative_path;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Resolution {
    FirstPass,
    SecondPass,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct IncludeEdge {
    pub source: PathBuf,
    pub target: PathBuf,
    pub resolution: Resolution,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum UnresolvedReason {
    NotFound,
    AmbiguousAfterSecondPass,
    Macro,
}

impl UnresolvedReason {
    pub fn as_str(self) -> &'static str {
        match self {
            UnresolvedReason::NotFound => "NOT_FOUND",
            UnresolvedReason::AmbiguousAfterSecondPass => "AMBIGUOUS_AFTER_SECOND_PASS",
            UnresolvedReason::Macro => "MACRO",
        }
    }
}

impl fmt::Display for UnresolvedReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct UnresolvedInclude {
    pub including_file: PathBuf,
    pub directive_text: String,
    pub reason: UnresolvedReason,
    /// Remaining candidates when the second pass ran out of components.
    pub candidates: Vec<PathBuf>,
}

impl UnresolvedInclude {
    fn not_found(including_file: &Path, directive_text: &str) -> Self {
        UnresolvedInclude {
            including_file: including_file.to_path_buf(),
            directive_text: directive_text.to_string(),
            reason: UnresolvedReason::NotFound,
            candidates: Vec::new(),
        }
    }
}

/// Basename → every scanned path carrying it.
#[derive(Debug, Clone, Default)]
pub struct FileIndex {
    entries: HashMap<String, Vec<IndexedPath>>,
}

#[derive(Debug, Clone)]
struct IndexedPath {
    path: PathBuf,
    /// Repo-relative components, file name last.
    components: Vec<String>,
}

impl FileIndex {
    pub fn build(repo_root: &Path, files: &[PathBuf]) -> Self {
        let mut entries: HashMap<String, Vec<IndexedPath>> = HashMap::new();
        for path in files {
            let Some(rel) = relative_path(path, repo_root) else {
                continue;
            };
            let components: Vec<String> = rel.split('/').map(str::to_string).collect();
            let Some(name) = components.last().cloned() else {
                continue;
            };
            entries.entry(name).or_default().push(IndexedPath {
                path: path.clone(),
                components,
            });
        }
        for paths in entries.values_mut() {
            paths.sort_by(|a, b| a.path.cmp(&b.path));
            paths.dedup_by(|a, b| a.path == b.path);
        }
        FileIndex { entries }
    }

    pub fn lookup(&self, basename: &str) -> Vec<&Path> {
        self.entries
            .get(basename)
            .map(|v| v.iter().map(|p| p.path.as_path()).collect())
            .unwrap_or_default()
    }

    pub fn len(&self) -> usize {
        self.entries.values().map(Vec::len).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

fn unify_separators(text: &str) -> String {
    text.replace('\\', "/")
}

/// First pass against the real filesystem.
pub fn resolve_first_pass(
    raw: &RawInclude,
    repo_root: &Path,
    search_dirs: &[PathBuf],
) -> Result<IncludeEdge, UnresolvedInclude> {
    resolve_first_pass_with(raw, repo_root, search_dirs, |p| p.is_file())
}

/// First pass with a caller-supplied existence test. Only targets inside
/// `repo_root` are accepted.
pub fn resolve_first_pass_with(
    raw: &RawInclude,
    repo_root: &Path,
    search_dirs: &[PathBuf],
    exists: impl Fn(&Path) -> bool,
) -> Result<IncludeEdge, UnresolvedInclude> {
    let text = unify_separators(&raw.directive_text);
    let own_dir = raw.including_file.parent().map(Path::to_path_buf);
    let dirs = own_dir.iter().chain(search_dirs.iter());
    for dir in dirs {
        let candidate = normalize_lexically(&dir.join(&text));
        if candidate.starts_with(repo_root) && candidate != repo_root && exists(&candidate) {
            return Ok(IncludeEdge {
                source: raw.including_file.clone(),
                target: candidate,
                resolution: Resolution::FirstPass,
            });
        }
    }
    Err(UnresolvedInclude::not_found(&raw.including_file, &raw.directive_text))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SecondPassOutcome {
    Resolved(IncludeEdge),
    /// Several candidates survived every component; the lexicographically
    /// smallest was chosen.
    Ambiguous {
        edge: IncludeEdge,
        candidates: Vec<PathBuf>,
    },
    Unresolved(UnresolvedInclude),
}

impl SecondPassOutcome {
    pub fn edge(&self) -> Option<&IncludeEdge> {
        match self {
            SecondPassOutcome::Resolved(e) | SecondPassOutcome::Ambiguous { edge: e, .. } => Some(e),
            SecondPassOutcome::Unresolved(_) => None,
        }
    }
}

pub fn resolve_second_pass(
    unresolved: &UnresolvedInclude,
    index: &FileIndex,
    strict: bool,
) -> SecondPassOutcome {
    let not_found = || {
        SecondPassOutcome::Unresolved(UnresolvedInclude::not_found(
            &unresolved.including_file,
            &unresolved.directive_text,
        ))
    };
    let parts: Vec<&str> = unresolved
        .directive_text
        .split(['/', '\\'])
        .filter(|p| !p.is_empty() && *p != ".")
        .collect();
    // trailing components only; nothing above a `..` can be matched
    let trailing: Vec<&str> = parts.iter().rev().take_while(|p| **p != "..").copied().collect();
    let Some(basename) = trailing.first() else {
        return not_found();
    };
    let mut candidates: Vec<&IndexedPath> = match index.entries.get(*basename) {
        Some(v) => v.iter().collect(),
        None => return not_found(),
    };

    let mut depth = 1;
    loop {
        match candidates.len() {
            0 => return not_found(),
            1 => {
                return SecondPassOutcome::Resolved(IncludeEdge {
                    source: unresolved.including_file.clone(),
                    target: candidates[0].path.clone(),
                    resolution: Resolution::SecondPass,
                })
            }
            _ => {}
        }
        if depth == trailing.len() {
            break;
        }
        let wanted = trailing[depth];
        candidates.retain(|c| {
            c.components.len() > depth && c.components[c.components.len() - 1 - depth] == wanted
        });
        depth += 1;
    }

    let paths: Vec<PathBuf> = candidates.iter().map(|c| c.path.clone()).collect();
    if strict {
        SecondPassOutcome::Unresolved(UnresolvedInclude {
            including_file: unresolved.including_file.clone(),
            directive_text: unresolved.directive_text.clone(),
            reason: UnresolvedReason::AmbiguousAfterSecondPass,
            candidates: paths,
        })
    } else {
        SecondPassOutcome::Ambiguous {
            edge: IncludeEdge {
                source: unresolved.including_file.clone(),
                target: paths[0].clone(),
                resolution: Resolution::SecondPass,
            },
            candidates: paths,
        }
    }
}

/// How a single directive ended up.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum IncludeClass {
    FirstPass,
    SecondPass,
    /// Second pass finished with several candidates (resolved to the smallest
    /// by default, left unresolved under strict mode).
    Ambiguous,
    Unresolved,
}

impl IncludeClass {
    pub fn as_str(self) -> &'static str {
        match self {
            IncludeClass::FirstPass => "first-pass",
            IncludeClass::SecondPass => "second-pass",
            IncludeClass::Ambiguous => "ambiguous",
            IncludeClass::Unresolved => "unresolved",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Outcome {
    Edge(IncludeEdge),
    Unresolved(UnresolvedInclude),
}

/// Resolution result for one directive.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ResolvedDirective {
    pub including_file: PathBuf,
    pub directive_text: String,
    pub line: usize,
    pub outcome: Outcome,
    /// Set when the second pass ended with ≥2 candidates.
    pub ambiguous_candidates: Option<Vec<PathBuf>>,
}

impl ResolvedDirective {
    pub fn class(&self) -> IncludeClass {
        if self.ambiguous_candidates.is_some() {
            return IncludeClass::Ambiguous;
        }
        match &self.outcome {
            Outcome::Edge(e) if e.resolution == Resolution::FirstPass => IncludeClass::FirstPass,
            Outcome::Edge(_) => IncludeClass::SecondPass,
            Outcome::Unresolved(_) => IncludeClass::Unresolved,
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ResolutionReport {
    /// One entry per directive, ordered by (including file, line).
    pub directives: Vec<ResolvedDirective>,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct ResolutionCounts {
    pub first_pass: usize,
    pub second_pass: usize,
    pub ambiguous: usize,
    pub unresolved: usize,
}

impl ResolutionReport {
    pub fn edges(&self) -> impl Iterator<Item = &IncludeEdge> {
        self.directives.iter().filter_map(|d| match &d.outcome {
            Outcome::Edge(e) => Some(e),
            Outcome::Unresolved(_) => None,
        })
    }

    pub fn unresolved(&self) -> impl Iterator<Item = &UnresolvedInclude> {
        self.directives.iter().filter_map(|d| match &d.outcome {
            Outcome::Unresolved(u) => Some(u),
            Outcome::Edge(_) => None,
        })
    }

    /// Directives resolved by picking the smallest of several candidates.
    pub fn ambiguous_choices(&self) -> impl Iterator<Item = (&ResolvedDirective, &IncludeEdge, &[PathBuf])> {
        self.directives.iter().filter_map(|d| match (&d.outcome, &d.ambiguous_candidates) {
            (Outcome::Edge(e), Some(c)) => Some((d, e, c.as_slice())),
            _ => None,
        })
    }

    pub fn counts(&self) -> ResolutionCounts {
        let mut counts = ResolutionCounts::default();
        for d in &self.directives {
            match d.class() {
                IncludeClass::FirstPass => counts.first_pass += 1,
                IncludeClass::SecondPass => counts.second_pass += 1,
                IncludeClass::Ambiguous => counts.ambiguous += 1,
                IncludeClass::Unresolved => counts.unresolved += 1,
            }
        }
        counts
    }
}

/// Everything the resolver needs about one repository.
#[derive(Debug, Clone)]
pub struct ResolverContext {
    pub repo_root: PathBuf,
    pub search_dirs: Vec<PathBuf>,
    pub index: FileIndex,
    pub strict: bool,
}

impl ResolverContext {
    pub fn new(repo_root: PathBuf, search_dirs: Vec<PathBuf>, files: &[PathBuf], strict: bool) -> Self {
        let index = FileIndex::build(&repo_root, files);
        ResolverContext {
            repo_root,
            search_dirs,
            index,
            strict,
        }
    }

    pub fn resolve(&self, directive: &Directive) -> ResolvedDirective {
        match directive {
            Directive::Macro(m) => ResolvedDirective {
                including_file: m.including_file.clone(),
                directive_text: m.token.clone(),
                line: m.line,
                outcome: Outcome::Unresolved(UnresolvedInclude {
                    including_file: m.including_file.clone(),
                    directive_text: m.token.clone(),
                    reason: UnresolvedReason::Macro,
                    candidates: Vec::new(),
                }),
                ambiguous_candidates: None,
            },
            Directive::Include(raw) => {
                let (outcome, ambiguous_candidates) =
                    match resolve_first_pass(raw, &self.repo_root, &self.search_dirs) {
                        Ok(edge) => (Outcome::Edge(edge), None),
                        Err(unresolved) => match resolve_second_pass(&unresolved, &self.index, self.strict) {
                            SecondPassOutcome::Resolved(edge) => (Outcome::Edge(edge), None),
                            SecondPassOutcome::Ambiguous { edge, candidates } => {
                                (Outcome::Edge(edge), Some(candidates))
                            }
                            SecondPassOutcome::Unresolved(u) => {
                                let amb = (u.reason == UnresolvedReason::AmbiguousAfterSecondPass)
                                    .then(|| u.candidates.clone());
                                (Outcome::Unresolved(u), amb)
                            }
                        },
                    };
                ResolvedDirective {
                    including_file: raw.including_file.clone(),
                    directive_text: raw.directive_text.clone(),
                    line: raw.line,
                    outcome,
                    ambiguous_candidates,
                }
            }
        }
    }

    /// Resolves every directive in parallel; output order follows input order.
    pub fn resolve_all(&self, directives: &[Directive]) -> ResolutionReport {
        let mut resolved: Vec<ResolvedDirective> = directives.par_iter().map(|d| self.resolve(d)).collect();
        resolved.sort_by(|a, b| (&a.including_file, a.line).cmp(&(&b.including_file, b.line)));
        ResolutionReport { directives: resolved }
    }
}

/// File-level include graph. Repeated (source, target) pairs collapse into
/// one edge carrying the number of directives behind it.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct FileGraph {
    pub nodes: BTreeSet<PathBuf>,
    pub edges: BTreeMap<(PathBuf, PathBuf), usize>,
}

impl FileGraph {
    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }
}

pub fn build_include_graph<'a>(
    edges: impl IntoIterator<Item = &'a IncludeEdge>,
    all_files: &[PathBuf],
) -> FileGraph {
    let mut graph = FileGraph {
        nodes: all_files.iter().cloned().collect(),
        edges: BTreeMap::new(),
    };
    for edge in edges {
        graph.nodes.insert(edge.source.clone());
        graph.nodes.insert(edge.target.clone());
        *graph
            .edges
            .entry((edge.source.clone(), edge.target.clone()))
            .or_insert(0) += 1;
    }
    graph
}
