//! Subsystem-level graphs and their degree / betweenness metrics.

use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};
use std::fmt;
use std::path::Path;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::resolver::FileGraph;
use crate::subsystem::{SubsystemCode, TaggedFile};

/// A node of a subsystem graph: one of the 16 codes, or the optional
/// pseudo-node collecting unassigned files.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Node {
    Subsystem(SubsystemCode),
    Unassigned,
}

impl Node {
    pub const UNASSIGNED: &'static str = "UNASSIGNED";

    pub fn as_str(self) -> &'static str {
        match self {
            Node::Subsystem(c) => c.as_str(),
            Node::Unassigned => Self::UNASSIGNED,
        }
    }

    pub fn code(self) -> Option<SubsystemCode> {
        match self {
            Node::Subsystem(c) => Some(c),
            Node::Unassigned => None,
        }
    }
}

impl fmt::Display for Node {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Node {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        if s == Self::UNASSIGNED {
            return Ok(Node::Unassigned);
        }
        s.parse::<SubsystemCode>()
            .map(Node::Subsystem)
            .map_err(|_| format!("unknown subsystem node `{s}`"))
    }
}

impl From<SubsystemCode> for Node {
    fn from(code: SubsystemCode) -> Self {
        Node::Subsystem(code)
    }
}

/// Weighted directed graph over subsystems for one engine. Self-loops are
/// kept; weights count distinct file-level include pairs.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct SubsystemGraph {
    pub engine: String,
    pub nodes: BTreeSet<Node>,
    pub edges: BTreeMap<(Node, Node), usize>,
}

impl SubsystemGraph {
    pub fn new(engine: impl Into<String>) -> Self {
        SubsystemGraph {
            engine: engine.into(),
            ..Default::default()
        }
    }

    pub fn add_node(&mut self, node: impl Into<Node>) {
        self.nodes.insert(node.into());
    }

    /// Adds `weight` to the edge, inserting both endpoints.
    pub fn add_edge(&mut self, source: impl Into<Node>, target: impl Into<Node>, weight: usize) {
        let (s, t) = (source.into(), target.into());
        self.nodes.insert(s);
        self.nodes.insert(t);
        *self.edges.entry((s, t)).or_insert(0) += weight;
    }

    pub fn has_edge(&self, source: impl Into<Node>, target: impl Into<Node>) -> bool {
        self.edges.contains_key(&(source.into(), target.into()))
    }

    /// Adjacency over `nodes` in their sorted order, self-loops and
    /// duplicates removed.
    fn adjacency(&self) -> (Vec<Node>, Vec<Vec<usize>>) {
        let order: Vec<Node> = self.nodes.iter().copied().collect();
        let pos: HashMap<Node, usize> = order.iter().enumerate().map(|(i, n)| (*n, i)).collect();
        let mut adj = vec![Vec::new(); order.len()];
        for &(s, t) in self.edges.keys() {
            if s != t {
                adj[pos[&s]].push(pos[&t]);
            }
        }
        for list in &mut adj {
            list.sort_unstable();
            list.dedup();
        }
        (order, adj)
    }
}

/// Lifts a file graph onto subsystems. Unassigned files are dropped unless
/// `include_unassigned` is set, in which case they form the
/// [`Node::Unassigned`] pseudo-node. Graph nodes missing from `tagged` count
/// as unassigned.
pub fn build_subsystem_graph(
    engine: &str,
    file_graph: &FileGraph,
    tagged: &[TaggedFile],
    include_unassigned: bool,
) -> SubsystemGraph {
    let tags: HashMap<&Path, Option<SubsystemCode>> =
        tagged.iter().map(|t| (t.path.as_path(), t.code)).collect();
    let lift = |code: Option<SubsystemCode>| match code {
        Some(c) => Some(Node::Subsystem(c)),
        None if include_unassigned => Some(Node::Unassigned),
        None => None,
    };

    let mut graph = SubsystemGraph::new(engine);
    for t in tagged {
        if let Some(node) = lift(t.code) {
            graph.add_node(node);
        }
    }
    for (source, target) in file_graph.edges.keys() {
        let s = lift(tags.get(source.as_path()).copied().flatten());
        let t = lift(tags.get(target.as_path()).copied().flatten());
        if let (Some(s), Some(t)) = (s, t) {
            graph.add_edge(s, t, 1);
        }
    }
    graph
}

/// Number of distinct predecessor nodes, self-loops excluded.
pub fn in_degree(graph: &SubsystemGraph) -> BTreeMap<Node, usize> {
    let mut degree: BTreeMap<Node, usize> = graph.nodes.iter().map(|n| (*n, 0)).collect();
    for &(s, t) in graph.edges.keys() {
        if s != t {
            *degree.entry(t).or_insert(0) += 1;
        }
    }
    degree
}

/// Number of distinct successor nodes, self-loops excluded.
pub fn out_degree(graph: &SubsystemGraph) -> BTreeMap<Node, usize> {
    let mut degree: BTreeMap<Node, usize> = graph.nodes.iter().map(|n| (*n, 0)).collect();
    for &(s, t) in graph.edges.keys() {
        if s != t {
            *degree.entry(s).or_insert(0) += 1;
        }
    }
    degree
}

/// Unnormalised directed betweenness via Brandes' accumulation. Edge
/// weights are ignored; every edge has length one.
pub fn brandes(adjacency: &[Vec<usize>]) -> Vec<f64> {
    let n = adjacency.len();
    let mut centrality = vec![0.0; n];
    let mut sigma = vec![0.0f64; n];
    let mut dist = vec![usize::MAX; n];
    let mut delta = vec![0.0f64; n];
    let mut preds: Vec<Vec<usize>> = vec![Vec::new(); n];
    let mut stack = Vec::with_capacity(n);
    let mut queue = VecDeque::with_capacity(n);

    for s in 0..n {
        for v in 0..n {
            sigma[v] = 0.0;
            dist[v] = usize::MAX;
            delta[v] = 0.0;
            preds[v].clear();
        }
        sigma[s] = 1.0;
        dist[s] = 0;
        queue.push_back(s);

        while let Some(v) = queue.pop_front() {
            stack.push(v);
            for &w in &adjacency[v] {
                if w == v {
                    continue;
                }
                if dist[w] == usize::MAX {
                    dist[w] = dist[v] + 1;
                    queue.push_back(w);
                }
                if dist[w] == dist[v] + 1 {
                    sigma[w] += sigma[v];
                    preds[w].push(v);
                }
            }
        }

        while let Some(w) = stack.pop() {
            for &v in &preds[w] {
                delta[v] += sigma[v] / sigma[w] * (1.0 + delta[w]);
            }
            if w != s {
                centrality[w] += delta[w];
            }
        }
    }
    centrality
}

/// Directed betweenness per node. With `normalize`, values are divided by
/// (n-1)(n-2) when n > 2.
pub fn betweenness(graph: &SubsystemGraph, normalize: bool) -> BTreeMap<Node, f64> {
    let (order, adj) = graph.adjacency();
    let mut values = brandes(&adj);
    let n = order.len();
    if normalize && n > 2 {
        let scale = ((n - 1) * (n - 2)) as f64;
        for v in &mut values {
            *v /= scale;
        }
    }
    order.into_iter().zip(values).collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct MetricsReport {
    pub engine: String,
    pub in_degree: BTreeMap<Node, usize>,
    pub out_degree: BTreeMap<Node, usize>,
    pub betweenness: BTreeMap<Node, f64>,
}

pub fn compute_metrics(graph: &SubsystemGraph, normalize: bool) -> MetricsReport {
    MetricsReport {
        engine: graph.engine.clone(),
        in_degree: in_degree(graph),
        out_degree: out_degree(graph),
        betweenness: betweenness(graph, normalize),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Metric {
    InDegree,
    Betweenness,
}

impl FromStr for Metric {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().replace('_', "-").as_str() {
            "in-degree" | "indegree" => Ok(Metric::InDegree),
            "betweenness" | "centrality" => Ok(Metric::Betweenness),
            _ => Err(Error::UnknownMetric(s.to_string())),
        }
    }
}

/// How engines lacking a subsystem enter its average.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Averaging {
    /// Average only over engines where the subsystem exists.
    #[default]
    PresentOnly,
    /// Missing subsystems count as zero.
    ZeroFill,
}

impl FromStr for Averaging {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().replace('_', "-").as_str() {
            "present-only" => Ok(Averaging::PresentOnly),
            "zero-fill" => Ok(Averaging::ZeroFill),
            _ => Err(Error::Config(format!(
                "unknown averaging mode `{s}` (expected `present-only` or `zero-fill`)"
            ))),
        }
    }
}

impl fmt::Display for Averaging {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Averaging::PresentOnly => "present-only",
            Averaging::ZeroFill => "zero-fill",
        })
    }
}

/// Per-subsystem averages across engines, sorted descending with ties in
/// canonical code order. Only subsystems present in at least one engine are
/// listed; the unassigned pseudo-node never is.
pub fn average_metric(
    reports: &[MetricsReport],
    metric: Metric,
    mode: Averaging,
) -> Result<Vec<(SubsystemCode, f64)>> {
    if reports.is_empty() {
        return Err(Error::NoEngines);
    }
    let mut sums: BTreeMap<SubsystemCode, (f64, usize)> = BTreeMap::new();
    for report in reports {
        let values: Vec<(Node, f64)> = match metric {
            Metric::InDegree => report.in_degree.iter().map(|(n, v)| (*n, *v as f64)).collect(),
            Metric::Betweenness => report.betweenness.iter().map(|(n, v)| (*n, *v)).collect(),
        };
        for (node, value) in values {
            if let Some(code) = node.code() {
                let entry = sums.entry(code).or_insert((0.0, 0));
                entry.0 += value;
                entry.1 += 1;
            }
        }
    }
    let engines = reports.len() as f64;
    let mut averages: Vec<(SubsystemCode, f64)> = sums
        .into_iter()
        .map(|(code, (sum, present))| {
            let denominator = match mode {
                Averaging::PresentOnly => present as f64,
                Averaging::ZeroFill => engines,
            };
            (code, sum / denominator)
        })
        .collect();
    averages.sort_by(|a, b| b.1.total_cmp(&a.1).then(a.0.cmp(&b.0)));
    Ok(averages)
}
