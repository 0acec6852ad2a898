//! Corpus configuration (TOML).
//!
//! ```toml
//! output_dir = "out"
//!
//! [options]
//! pair_threshold = 6
//! inner_core_size = 4
//! averaging = "present-only"     # or "zero-fill"
//! strict_resolve = false
//! normalize_centrality = false
//! include_unassigned = false
//!
//! [[repo]]
//! name = "godot"
//! root = "repos/godot"
//! mapping = "mappings/godot.csv"
//! url = "https://github.com/godotengine/godot"   # informational
//! commit = "f9ac000d5d"                          # informational
//! extensions = [".h", ".cpp"]
//! exclude_dirs = ["thirdparty"]
//! include_dirs = ["core"]
//! ```
//!
//! Relative paths are resolved against the directory holding the file.

use std::collections::BTreeSet;
use std::fs;
use std::path::{Path, PathBuf};

use serde::Deserialize;

use crate::aggregate::{DEFAULT_INNER_CORE_SIZE, DEFAULT_PAIR_THRESHOLD};
use crate::error::{Error, Result};
use crate::metrics::Averaging;
use crate::paths::normalize_lexically;
use crate::scanner::{RepoSpec, DEFAULT_EXTENSIONS};

#[derive(Debug, Clone, PartialEq)]
pub struct Options {
    pub pair_threshold: usize,
    pub inner_core_size: usize,
    pub averaging: Averaging,
    pub strict_resolve: bool,
    pub normalize_centrality: bool,
    pub include_unassigned: bool,
}

impl Default for Options {
    fn default() -> Self {
        Options {
            pair_threshold: DEFAULT_PAIR_THRESHOLD,
            inner_core_size: DEFAULT_INNER_CORE_SIZE,
            averaging: Averaging::PresentOnly,
            strict_resolve: false,
            normalize_centrality: false,
            include_unassigned: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RepoConfig {
    pub spec: RepoSpec,
    pub mapping: Option<PathBuf>,
    pub url: Option<String>,
    pub commit: Option<String>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CorpusConfig {
    pub repos: Vec<RepoConfig>,
    pub output_dir: PathBuf,
    pub options: Options,
}

impl Default for CorpusConfig {
    fn default() -> Self {
        CorpusConfig {
            repos: Vec::new(),
            output_dir: PathBuf::from("out"),
            options: Options::default(),
        }
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    output_dir: Option<PathBuf>,
    #[serde(default)]
    options: RawOptions,
    #[serde(default, rename = "repo")]
    repos: Vec<RawRepo>,
}

#[derive(Deserialize, Default)]
#[serde(deny_unknown_fields)]
struct RawOptions {
    pair_threshold: Option<usize>,
    inner_core_size: Option<usize>,
    averaging: Option<String>,
    strict_resolve: Option<bool>,
    normalize_centrality: Option<bool>,
    include_unassigned: Option<bool>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawRepo {
    name: String,
    root: PathBuf,
    mapping: Option<PathBuf>,
    url: Option<String>,
    commit: Option<String>,
    extensions: Option<Vec<String>>,
    #[serde(default)]
    exclude_dirs: Vec<String>,
    #[serde(default)]
    include_dirs: Vec<PathBuf>,
}

fn anchor(base: &Path, p: &Path) -> PathBuf {
    normalize_lexically(&base.join(p))
}

impl CorpusConfig {
    pub fn load(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).map_err(|e| {
            Error::Config(format!("cannot read config `{}`: {e}", path.display()))
        })?;
        let base = std::path::absolute(path)
            .ok()
            .and_then(|p| p.parent().map(Path::to_path_buf))
            .unwrap_or_default();
        Self::parse(&text, &base)
    }

    /// Parses config text; relative paths are anchored at `base`.
    pub fn parse(text: &str, base: &Path) -> Result<Self> {
        let raw: RawConfig =
            toml::from_str(text).map_err(|e| Error::Config(format!("invalid config: {e}")))?;
        let defaults = Options::default();
        let options = Options {
            pair_threshold: raw.options.pair_threshold.unwrap_or(defaults.pair_threshold),
            inner_core_size: raw.options.inner_core_size.unwrap_or(defaults.inner_core_size),
            averaging: match raw.options.averaging {
                Some(s) => s.parse()?,
                None => defaults.averaging,
            },
            strict_resolve: raw.options.strict_resolve.unwrap_or(defaults.strict_resolve),
            normalize_centrality: raw
                .options
                .normalize_centrality
                .unwrap_or(defaults.normalize_centrality),
            include_unassigned: raw.options.include_unassigned.unwrap_or(defaults.include_unassigned),
        };
        let repos = raw
            .repos
            .into_iter()
            .map(|r| RepoConfig {
                spec: RepoSpec {
                    name: r.name,
                    root: anchor(base, &r.root),
                    extensions: r
                        .extensions
                        .unwrap_or_else(|| DEFAULT_EXTENSIONS.iter().map(|s| s.to_string()).collect()),
                    exclude_dirs: r.exclude_dirs,
                    include_dirs: r.include_dirs,
                },
                mapping: r.mapping.map(|m| anchor(base, &m)),
                url: r.url,
                commit: r.commit,
            })
            .collect();
        let config = CorpusConfig {
            repos,
            output_dir: anchor(base, &raw.output_dir.unwrap_or_else(|| PathBuf::from("out"))),
            options,
        };
        config.validate()?;
        Ok(config)
    }

    pub fn validate(&self) -> Result<()> {
        let mut names = BTreeSet::new();
        for repo in &self.repos {
            let name = &repo.spec.name;
            if name.is_empty() || name.contains(['/', '\\']) || name.starts_with('.') {
                return Err(Error::Config(format!("invalid repository name `{name}`")));
            }
            if !names.insert(name.as_str()) {
                return Err(Error::Config(format!("duplicate repository name `{name}`")));
            }
            repo.spec.validate()?;
        }
        if self.options.pair_threshold == 0 {
            return Err(Error::Config("pair_threshold must be at least 1".to_string()));
        }
        if self.options.inner_core_size == 0 {
            return Err(Error::Config("inner_core_size must be at least 1".to_string()));
        }
        Ok(())
    }

    pub fn repo(&self, name: &str) -> Result<&RepoConfig> {
        self.repos
            .iter()
            .find(|r| r.spec.name == name)
            .ok_or_else(|| Error::UnknownRepo(name.to_string()))
    }

    /// Repository names in sorted order.
    pub fn repo_names(&self) -> Vec<String> {
        let mut names: Vec<String> = self.repos.iter().map(|r| r.spec.name.clone()).collect();
        names.sort();
        names
    }

    /// Adds or replaces a repository given as `name=root`.
    pub fn add_repo_arg(&mut self, arg: &str) -> Result<()> {
        let (name, root) = arg
            .split_once('=')
            .ok_or_else(|| Error::Config(format!("expected <name>=<root>, found `{arg}`")))?;
        let root = std::path::absolute(root)
            .map(|p| normalize_lexically(&p))
            .map_err(|e| Error::Config(format!("bad root `{root}`: {e}")))?;
        self.repos.retain(|r| r.spec.name != name);
        self.repos.push(RepoConfig {
            spec: RepoSpec::new(name, root),
            mapping: None,
            url: None,
            commit: None,
        });
        self.validate()
    }

    /// Sets the mapping file of a configured repository from `name=path`.
    pub fn set_mapping_arg(&mut self, arg: &str) -> Result<()> {
        let (name, path) = arg
            .split_once('=')
            .ok_or_else(|| Error::Config(format!("expected <name>=<mapping.csv>, found `{arg}`")))?;
        let path = std::path::absolute(path)
            .map(|p| normalize_lexically(&p))
            .map_err(|e| Error::Config(format!("bad mapping path `{path}`: {e}")))?;
        let repo = self
            .repos
            .iter_mut()
            .find(|r| r.spec.name == name)
            .ok_or_else(|| Error::UnknownRepo(name.to_string()))?;
        repo.mapping = Some(path);
        Ok(())
    }
}
