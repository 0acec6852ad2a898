//! Architecture recovery for C/C++ game engines.
//!
//! The pipeline scans a source tree for `#include` directives, resolves
//! them into a file-level include graph, tags files with one of sixteen
//! engine subsystems from a folder mapping, and lifts the result into a
//! per-engine subsystem graph. Across a corpus of engines it aggregates a
//! coupling heatmap, the most frequent coupling pairs and a three-tier
//! "emergent architecture".

pub mod aggregate;
pub mod config;
pub mod emit;
pub mod error;
pub mod metrics;
pub mod paths;
pub mod pipeline;
pub mod resolver;
pub mod scanner;
pub mod subsystem;

pub use error::{Error, Result};
pub use metrics::{Node, SubsystemGraph};
pub use subsystem::SubsystemCode;
