//! The closed subsystem vocabulary and folder-based subsystem assignment.
//!
//! Files are tagged by the longest componentwise folder prefix found in a
//! human-authored mapping file. A row naming a full file path is simply the
//! longest possible prefix, so per-file overrides need no special casing.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::fs;
use std::io::Read;
use std::path::{Component, Path, PathBuf};
use std::str::FromStr;

use walkdir::WalkDir;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SubsystemCode {
    Aud,
    Cor,
    Deb,
    Fes,
    Gmp,
    Hid,
    Llr,
    Omp,
    Phy,
    Pla,
    Res,
    Sdk,
    Sgc,
    Ska,
    Vfx,
    Edi,
}

impl SubsystemCode {
    /// All codes in canonical order.
    pub const ALL: [SubsystemCode; 16] = [
        SubsystemCode::Aud,
        SubsystemCode::Cor,
        SubsystemCode::Deb,
        SubsystemCode::Fes,
        SubsystemCode::Gmp,
        SubsystemCode::Hid,
        SubsystemCode::Llr,
        SubsystemCode::Omp,
        SubsystemCode::Phy,
        SubsystemCode::Pla,
        SubsystemCode::Res,
        SubsystemCode::Sdk,
        SubsystemCode::Sgc,
        SubsystemCode::Ska,
        SubsystemCode::Vfx,
        SubsystemCode::Edi,
    ];

    pub const COUNT: usize = 16;

    pub fn as_str(self) -> &'static str {
        match self {
            SubsystemCode::Aud => "AUD",
            SubsystemCode::Cor => "COR",
            SubsystemCode::Deb => "DEB",
            SubsystemCode::Fes => "FES",
            SubsystemCode::Gmp => "GMP",
            SubsystemCode::Hid => "HID",
            SubsystemCode::Llr => "LLR",
            SubsystemCode::Omp => "OMP",
            SubsystemCode::Phy => "PHY",
            SubsystemCode::Pla => "PLA",
            SubsystemCode::Res => "RES",
            SubsystemCode::Sdk => "SDK",
            SubsystemCode::Sgc => "SGC",
            SubsystemCode::Ska => "SKA",
            SubsystemCode::Vfx => "VFX",
            SubsystemCode::Edi => "EDI",
        }
    }

    pub fn display_name(self) -> &'static str {
        match self {
            SubsystemCode::Aud => "Audio",
            SubsystemCode::Cor => "Core",
            SubsystemCode::Deb => "Profiling and Debugging",
            SubsystemCode::Fes => "Front End",
            SubsystemCode::Gmp => "Gameplay Foundations",
            SubsystemCode::Hid => "Human Interface Devices",
            SubsystemCode::Llr => "Low-Level Renderer",
            SubsystemCode::Omp => "Online Multiplayer",
            SubsystemCode::Phy => "Collision and Physics",
            SubsystemCode::Pla => "Platform Independence Layer",
            SubsystemCode::Res => "Resources",
            SubsystemCode::Sdk => "Third-party SDKs",
            SubsystemCode::Sgc => "Scene graph/culling optimizations",
            SubsystemCode::Ska => "Skeletal Animation",
            SubsystemCode::Vfx => "Visual Effects",
            SubsystemCode::Edi => "World Editor",
        }
    }

    /// Position in canonical order.
    pub fn index(self) -> usize {
        self as usize
    }

    pub fn from_index(index: usize) -> Option<Self> {
        Self::ALL.get(index).copied()
    }
}

impl fmt::Display for SubsystemCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UnknownCode(pub String);

impl FromStr for SubsystemCode {
    type Err = UnknownCode;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        Self::ALL
            .iter()
            .copied()
            .find(|c| c.as_str() == s)
            .ok_or_else(|| UnknownCode(s.to_string()))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MappingEntry {
    /// Repo-relative folder (or file) path with `/` separators, no trailing `/`.
    pub folder: String,
    pub code: SubsystemCode,
}

/// Validated folder → subsystem mapping for one repository.
#[derive(Debug, Clone, Default)]
pub struct SubsystemMapping {
    entries: Vec<MappingEntry>,
    by_folder: HashMap<String, SubsystemCode>,
}

impl SubsystemMapping {
    /// Builds a mapping from already-normalised entries. Duplicate folders are
    /// rejected; row numbers in the error are 1-based entry positions.
    pub fn new(entries: Vec<MappingEntry>) -> Result<Self> {
        let mut mapping = SubsystemMapping::default();
        let mut rows: HashMap<String, usize> = HashMap::new();
        for (i, entry) in entries.into_iter().enumerate() {
            let folder = normalise_folder(&entry.folder).map_err(|message| {
                Error::MalformedMapping {
                    path: PathBuf::from("<memory>"),
                    message: format!("entry {}: {message}", i + 1),
                }
            })?;
            if let Some(first) = rows.insert(folder.clone(), i + 1) {
                return Err(Error::DuplicateFolder {
                    path: PathBuf::from("<memory>"),
                    folder,
                    first,
                    second: i + 1,
                });
            }
            mapping.push(folder, entry.code);
        }
        Ok(mapping)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let mut bytes = Vec::new();
        fs::File::open(path)
            .and_then(|mut f| f.read_to_end(&mut bytes))
            .map_err(|e| Error::io(path, e))?;
        Self::parse(path, &bytes)
    }

    /// Parses mapping-file content. `origin` is only used in error messages.
    pub fn parse(origin: &Path, content: &[u8]) -> Result<Self> {
        let malformed = |message: String| Error::MalformedMapping {
            path: origin.to_path_buf(),
            message,
        };
        let text = std::str::from_utf8(content)
            .map_err(|e| malformed(format!("not valid UTF-8: {e}")))?;
        let text = text.strip_prefix('\u{feff}').unwrap_or(text);

        let mut mapping = SubsystemMapping::default();
        let mut rows: HashMap<String, usize> = HashMap::new();
        let mut saw_header = false;

        let mut reader = csv::ReaderBuilder::new()
            .has_headers(false)
            .comment(Some(b'#'))
            .flexible(true)
            .trim(csv::Trim::All)
            .from_reader(text.as_bytes());

        for record in reader.records() {
            let record = record.map_err(|e| malformed(e.to_string()))?;
            let row = record.position().map(|p| p.line() as usize).unwrap_or(0);
            if record.iter().all(str::is_empty) {
                continue;
            }
            if !saw_header {
                if record.len() != 2 || &record[0] != "folder" || &record[1] != "subsystem" {
                    return Err(malformed(format!(
                        "row {row}: expected header `folder,subsystem`"
                    )));
                }
                saw_header = true;
                continue;
            }
            if record.len() != 2 {
                return Err(malformed(format!(
                    "row {row}: expected 2 fields, found {}",
                    record.len()
                )));
            }
            let folder = normalise_folder(&record[0])
                .map_err(|message| malformed(format!("row {row}: {message}")))?;
            let code: SubsystemCode = record[1].parse().map_err(|UnknownCode(code)| {
                Error::UnknownCode {
                    path: origin.to_path_buf(),
                    row,
                    code,
                }
            })?;
            if let Some(first) = rows.insert(folder.clone(), row) {
                return Err(Error::DuplicateFolder {
                    path: origin.to_path_buf(),
                    folder,
                    first,
                    second: row,
                });
            }
            mapping.push(folder, code);
        }
        if !saw_header {
            return Err(malformed("missing header `folder,subsystem`".to_string()));
        }
        Ok(mapping)
    }

    fn push(&mut self, folder: String, code: SubsystemCode) {
        self.by_folder.insert(folder.clone(), code);
        self.entries.push(MappingEntry { folder, code });
    }

    pub fn entries(&self) -> &[MappingEntry] {
        &self.entries
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Longest componentwise prefix match on a repo-relative `/`-separated path.
    pub fn assign_relative(&self, relative: &str) -> Option<SubsystemCode> {
        let mut candidate = relative;
        loop {
            if let Some(code) = self.by_folder.get(candidate) {
                return Some(*code);
            }
            let cut = candidate.rfind('/')?;
            candidate = &candidate[..cut];
        }
    }
}

fn normalise_folder(raw: &str) -> std::result::Result<String, String> {
    let unified = raw.trim().replace('\\', "/");
    let mut parts = Vec::new();
    for part in unified.split('/') {
        match part {
            "" | "." => {}
            ".." => return Err(format!("folder `{raw}` must not contain `..`")),
            p => parts.push(p),
        }
    }
    if parts.is_empty() {
        return Err(format!("folder `{raw}` is empty"));
    }
    Ok(parts.join("/"))
}

/// Repo-relative path of `file` with `/` separators, or `None` if the file is
/// not under `root`.
pub fn relative_path(file: &Path, root: &Path) -> Option<String> {
    let rest = file.strip_prefix(root).ok()?;
    let mut parts = Vec::new();
    for component in rest.components() {
        match component {
            Component::Normal(p) => parts.push(p.to_string_lossy().into_owned()),
            Component::CurDir => {}
            _ => return None,
        }
    }
    Some(parts.join("/"))
}

pub fn assign_subsystem(
    file: &Path,
    repo_root: &Path,
    mapping: &SubsystemMapping,
) -> Option<SubsystemCode> {
    relative_path(file, repo_root).and_then(|rel| mapping.assign_relative(&rel))
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct TaggedFile {
    pub path: PathBuf,
    /// `None` means UNASSIGNED.
    pub code: Option<SubsystemCode>,
}

pub fn tag_files(files: &[PathBuf], repo_root: &Path, mapping: &SubsystemMapping) -> Vec<TaggedFile> {
    files
        .iter()
        .map(|path| TaggedFile {
            path: path.clone(),
            code: assign_subsystem(path, repo_root, mapping),
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct CoverageReport {
    pub per_code: BTreeMap<SubsystemCode, usize>,
    pub unassigned: usize,
    pub total: usize,
}

impl CoverageReport {
    /// Percentage of files carrying a subsystem. An empty file list is fully covered.
    pub fn coverage_percent(&self) -> f64 {
        if self.total == 0 {
            100.0
        } else {
            100.0 * (self.total - self.unassigned) as f64 / self.total as f64
        }
    }

    pub fn unassigned_percent(&self) -> f64 {
        100.0 - self.coverage_percent()
    }
}

pub fn mapping_coverage(tagged: &[TaggedFile]) -> CoverageReport {
    let mut per_code = BTreeMap::new();
    let mut unassigned = 0;
    for file in tagged {
        match file.code {
            Some(code) => *per_code.entry(code).or_insert(0) += 1,
            None => unassigned += 1,
        }
    }
    CoverageReport {
        per_code,
        unassigned,
        total: tagged.len(),
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Suggestion {
    pub folder: String,
    pub code: SubsystemCode,
}

/// Name-based guess for a single folder name. Advisory only.
pub fn suggest_for_name(name: &str) -> Option<SubsystemCode> {
    let name = name.to_lowercase();
    SubsystemCode::ALL.iter().copied().find(|code| {
        if name == code.as_str().to_lowercase() {
            return true;
        }
        let display = code.display_name().to_lowercase();
        if name.len() >= 4 && display.contains(&name) {
            return true;
        }
        display
            .split(|c: char| !c.is_alphanumeric())
            .filter(|w| w.len() >= 4)
            .any(|w| name.contains(w))
    })
}

/// Walks the folders under `root` and proposes subsystem codes from folder
/// names. Folders whose nearest suggested ancestor already carries the same
/// code are omitted.
pub fn suggest_mapping(root: &Path, exclude_dirs: &[String]) -> Result<Vec<Suggestion>> {
    if !root.is_dir() {
        return Err(Error::RepoRoot {
            path: root.to_path_buf(),
            reason: "not a directory".to_string(),
        });
    }
    let mut folders = Vec::new();
    let walker = WalkDir::new(root)
        .min_depth(1)
        .sort_by_file_name()
        .into_iter()
        .filter_entry(|e| {
            !(e.file_type().is_dir()
                && exclude_dirs
                    .iter()
                    .any(|x| e.file_name().to_string_lossy() == x.as_str()))
        });
    for entry in walker {
        let entry = match entry {
            Ok(e) => e,
            Err(e) => {
                log::warn!("skipping unreadable entry: {e}");
                continue;
            }
        };
        if entry.file_type().is_dir() {
            if let Some(rel) = relative_path(entry.path(), root) {
                folders.push(rel);
            }
        }
    }
    folders.sort();

    let mut chosen: BTreeMap<String, SubsystemCode> = BTreeMap::new();
    for folder in folders {
        let name = folder.rsplit('/').next().unwrap_or(&folder);
        let Some(code) = suggest_for_name(name) else {
            continue;
        };
        let mut inherited = None;
        let mut prefix = folder.as_str();
        while let Some(cut) = prefix.rfind('/') {
            prefix = &prefix[..cut];
            if let Some(c) = chosen.get(prefix) {
                inherited = Some(*c);
                break;
            }
        }
        if inherited != Some(code) {
            chosen.insert(folder, code);
        }
    }
    Ok(chosen
        .into_iter()
        .map(|(folder, code)| Suggestion { folder, code })
        .collect())
}
