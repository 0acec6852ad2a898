//! Cross-engine aggregation: coupling heatmap, frequent pairs and the
//! three-tier emergent architecture.

use std::collections::{BTreeMap, BTreeSet};

use crate::error::{Error, Result};
use crate::metrics::{Node, SubsystemGraph};
use crate::subsystem::SubsystemCode;

pub const DEFAULT_PAIR_THRESHOLD: usize = 6;
pub const DEFAULT_INNER_CORE_SIZE: usize = 4;

/// `counts[a][b]` = number of engines with an `a -> b` edge, rows and
/// columns in canonical code order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CouplingMatrix {
    pub counts: [[usize; SubsystemCode::COUNT]; SubsystemCode::COUNT],
    pub n_engines: usize,
}

impl CouplingMatrix {
    pub fn zero(n_engines: usize) -> Self {
        CouplingMatrix {
            counts: [[0; SubsystemCode::COUNT]; SubsystemCode::COUNT],
            n_engines,
        }
    }

    pub fn get(&self, source: SubsystemCode, target: SubsystemCode) -> usize {
        self.counts[source.index()][target.index()]
    }

    pub fn order(&self) -> &'static [SubsystemCode; SubsystemCode::COUNT] {
        &SubsystemCode::ALL
    }
}

/// Presence-based heatmap; weights are ignored and the unassigned
/// pseudo-node never contributes.
pub fn aggregate_heatmap(graphs: &[SubsystemGraph]) -> Result<CouplingMatrix> {
    if graphs.is_empty() {
        return Err(Error::NoEngines);
    }
    let mut seen = BTreeSet::new();
    for g in graphs {
        if !seen.insert(g.engine.as_str()) {
            return Err(Error::DuplicateEngine(g.engine.clone()));
        }
    }
    let mut matrix = CouplingMatrix::zero(graphs.len());
    for g in graphs {
        for &(s, t) in g.edges.keys() {
            if let (Node::Subsystem(s), Node::Subsystem(t)) = (s, t) {
                matrix.counts[s.index()][t.index()] += 1;
            }
        }
    }
    Ok(matrix)
}

#[derive(Debug, Clone, PartialEq)]
pub struct FrequentPair {
    pub source: SubsystemCode,
    pub target: SubsystemCode,
    pub count: usize,
    /// Sum of both endpoints' averaged betweenness.
    pub centrality_sum: f64,
}

/// Off-diagonal cells with `count >= threshold`, ordered by count, then
/// centrality sum (both descending), then canonical (source, target).
/// Codes absent from `centrality` contribute zero to the sum.
pub fn frequent_pairs(
    matrix: &CouplingMatrix,
    threshold: usize,
    centrality: &BTreeMap<SubsystemCode, f64>,
) -> Vec<FrequentPair> {
    let threshold = threshold.max(1);
    let value = |c: SubsystemCode| centrality.get(&c).copied().unwrap_or(0.0);
    let mut pairs = Vec::new();
    for source in SubsystemCode::ALL {
        for target in SubsystemCode::ALL {
            if source == target {
                continue;
            }
            let count = matrix.get(source, target);
            if count >= threshold {
                pairs.push(FrequentPair {
                    source,
                    target,
                    count,
                    centrality_sum: value(source) + value(target),
                });
            }
        }
    }
    pairs.sort_by(|a, b| {
        b.count
            .cmp(&a.count)
            .then(b.centrality_sum.total_cmp(&a.centrality_sum))
            .then((a.source, a.target).cmp(&(b.source, b.target)))
    });
    pairs
}

#[derive(Debug, Clone, PartialEq)]
pub struct EmergentArchitecture {
    /// Highest averaged betweenness first.
    pub inner_core: Vec<SubsystemCode>,
    /// Canonical order.
    pub outer_core: Vec<SubsystemCode>,
    /// Canonical order.
    pub periphery: Vec<SubsystemCode>,
    pub edges: Vec<FrequentPair>,
}

impl EmergentArchitecture {
    pub fn tier_of(&self, code: SubsystemCode) -> Tier {
        if self.inner_core.contains(&code) {
            Tier::InnerCore
        } else if self.outer_core.contains(&code) {
            Tier::OuterCore
        } else {
            Tier::Periphery
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Tier {
    InnerCore,
    OuterCore,
    Periphery,
}

impl Tier {
    pub fn as_str(self) -> &'static str {
        match self {
            Tier::InnerCore => "inner_core",
            Tier::OuterCore => "outer_core",
            Tier::Periphery => "periphery",
        }
    }
}

pub fn derive_emergent_architecture(
    pairs: &[FrequentPair],
    centrality: &BTreeMap<SubsystemCode, f64>,
    inner_core_size: usize,
) -> Result<EmergentArchitecture> {
    if inner_core_size == 0 {
        return Err(Error::Config("inner core size must be at least 1".to_string()));
    }
    for pair in pairs {
        for code in [pair.source, pair.target] {
            if !centrality.contains_key(&code) {
                return Err(Error::MissingCentrality(code));
            }
        }
    }
    let mut ranked: Vec<(SubsystemCode, f64)> = centrality.iter().map(|(c, v)| (*c, *v)).collect();
    ranked.sort_by(|a, b| b.1.total_cmp(&a.1).then(a.0.cmp(&b.0)));
    let inner_core: Vec<SubsystemCode> = ranked.iter().take(inner_core_size).map(|(c, _)| *c).collect();

    let in_pairs: BTreeSet<SubsystemCode> = pairs.iter().flat_map(|p| [p.source, p.target]).collect();
    let outer_core: Vec<SubsystemCode> = in_pairs
        .iter()
        .copied()
        .filter(|c| !inner_core.contains(c))
        .collect();
    let periphery: Vec<SubsystemCode> = SubsystemCode::ALL
        .iter()
        .copied()
        .filter(|c| !inner_core.contains(c) && !outer_core.contains(c))
        .collect();

    Ok(EmergentArchitecture {
        inner_core,
        outer_core,
        periphery,
        edges: pairs.to_vec(),
    })
}
