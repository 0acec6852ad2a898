//! Rendering of graphs, reports and figures to files.
//!
//! Every emitter is a pure function from model to text; the `write_*`
//! helpers only add the filesystem step. Output carries no timestamps and
//! iterates ordered collections only, so identical inputs give identical
//! bytes.

pub mod dot;
pub mod svg;
pub mod table;

use std::fs;
use std::path::Path;

use crate::error::{Error, Result};

/// Output file names.
pub fn includes_dot(engine: &str) -> String {
    format!("{engine}-includes.dot")
}

pub fn includes_unresolved_csv(engine: &str) -> String {
    format!("{engine}-includes-unr.csv")
}

pub fn includes_ambiguous_csv(engine: &str) -> String {
    format!("{engine}-includes-amb.csv")
}

pub fn subsystems_dot(engine: &str) -> String {
    format!("{engine}-subsystems.dot")
}

pub fn metrics_csv(engine: &str) -> String {
    format!("{engine}-metrics.csv")
}

pub const HEATMAP_CSV: &str = "corpus-heatmap.csv";
pub const HEATMAP_SVG: &str = "corpus-heatmap.svg";
pub const PAIRS_CSV: &str = "corpus-pairs.csv";
pub const AVERAGES_CSV: &str = "corpus-averages.csv";
pub const ARCHITECTURE_SVG: &str = "corpus-architecture.svg";
pub const ARCHITECTURE_TXT: &str = "corpus-architecture.txt";

pub fn write_text(path: &Path, contents: &str) -> Result<()> {
    if let Some(parent) = path.parent() {
        if !parent.as_os_str().is_empty() {
            fs::create_dir_all(parent).map_err(|e| Error::io(parent, e))?;
        }
    }
    fs::write(path, contents).map_err(|e| Error::io(path, e))
}
