//! Independent oracles and generators shared by the integration tests.
//!
//! Nothing here calls into the library's metric or aggregation code; each
//! quantity is recomputed from first principles.

#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::path::{Path, PathBuf};

use rand::rngs::StdRng;
use rand::Rng;

use enginemap::{Node, SubsystemCode, SubsystemGraph};

pub fn fixtures() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures")
}

pub fn corpus_dir() -> PathBuf {
    fixtures().join("corpus")
}

/// Directed graph on `0..n` with distinct, non-loop edges.
pub fn random_digraph(rng: &mut StdRng, n: usize) -> Vec<(usize, usize)> {
    let p: f64 = rng.gen_range(0.1..0.7);
    let mut edges = Vec::new();
    for s in 0..n {
        for t in 0..n {
            if s != t && rng.gen_bool(p) {
                edges.push((s, t));
            }
        }
    }
    edges
}

fn distances_from(n: usize, edges: &[(usize, usize)], source: usize) -> Vec<Option<usize>> {
    let mut dist = vec![None; n];
    dist[source] = Some(0);
    let mut queue = VecDeque::from([source]);
    while let Some(u) = queue.pop_front() {
        let d = dist[u].unwrap();
        for &(s, t) in edges {
            if s == u && t != u && dist[t].is_none() {
                dist[t] = Some(d + 1);
                queue.push_back(t);
            }
        }
    }
    dist
}

/// Enumerates every shortest s-t path explicitly and counts, for each
/// node, the fraction of those paths it lies inside.
pub fn brute_force_betweenness(n: usize, edges: &[(usize, usize)]) -> Vec<f64> {
    let edges: Vec<(usize, usize)> = edges
        .iter()
        .copied()
        .filter(|(s, t)| s != t)
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();
    let mut score = vec![0.0; n];
    for s in 0..n {
        let dist = distances_from(n, &edges, s);
        for t in 0..n {
            if t == s || dist[t].is_none() {
                continue;
            }
            let mut paths: Vec<Vec<usize>> = Vec::new();
            let mut stack = vec![vec![s]];
            while let Some(path) = stack.pop() {
                let last = *path.last().unwrap();
                if last == t {
                    paths.push(path);
                    continue;
                }
                for &(a, b) in &edges {
                    if a == last && dist[b] == Some(path.len()) {
                        let mut next = path.clone();
                        next.push(b);
                        stack.push(next);
                    }
                }
            }
            let total = paths.len() as f64;
            for path in &paths {
                for &v in &path[1..path.len() - 1] {
                    score[v] += 1.0 / total;
                }
            }
        }
    }
    score
}

/// Distinct predecessors, self-loops excluded.
pub fn direct_in_degree(n: usize, edges: &[(usize, usize)]) -> Vec<usize> {
    (0..n)
        .map(|v| {
            edges
                .iter()
                .filter(|(s, t)| *t == v && *s != v)
                .map(|(s, _)| *s)
                .collect::<BTreeSet<_>>()
                .len()
        })
        .collect()
}

/// Random subsystem graph over a random subset of codes, self-loops allowed.
pub fn random_subsystem_graph(rng: &mut StdRng, name: &str) -> SubsystemGraph {
    let mut g = SubsystemGraph::new(name);
    let codes: Vec<SubsystemCode> = SubsystemCode::ALL
        .iter()
        .copied()
        .filter(|_| rng.gen_bool(0.6))
        .collect();
    for &c in &codes {
        g.add_node(c);
    }
    let p: f64 = rng.gen_range(0.1..0.6);
    for &s in &codes {
        for &t in &codes {
            if rng.gen_bool(p) {
                g.add_edge(s, t, rng.gen_range(1..20));
            }
        }
    }
    g
}

/// counts[s][t] = number of graphs holding an s->t edge, any weight.
pub fn recount_heatmap(graphs: &[SubsystemGraph]) -> [[usize; 16]; 16] {
    let mut counts = [[0usize; 16]; 16];
    for (i, s) in SubsystemCode::ALL.iter().enumerate() {
        for (j, t) in SubsystemCode::ALL.iter().enumerate() {
            counts[i][j] = graphs
                .iter()
                .filter(|g| g.edges.contains_key(&(Node::Subsystem(*s), Node::Subsystem(*t))))
                .count();
        }
    }
    counts
}

/// (source, target, count, centrality_sum) ranked by: count desc, sum
/// desc, then position in the canonical code list.
pub fn brute_force_pairs(
    counts: &[[usize; 16]; 16],
    threshold: usize,
    centrality: &BTreeMap<SubsystemCode, f64>,
) -> Vec<(SubsystemCode, SubsystemCode, usize, f64)> {
    let all = SubsystemCode::ALL;
    let c = |code: SubsystemCode| centrality.get(&code).copied().unwrap_or(0.0);
    let mut kept = Vec::new();
    for i in 0..16 {
        for j in 0..16 {
            if i != j && counts[i][j] >= threshold {
                kept.push((all[i], all[j], counts[i][j], c(all[i]) + c(all[j])));
            }
        }
    }
    let before = |a: &(SubsystemCode, SubsystemCode, usize, f64), b: &(SubsystemCode, SubsystemCode, usize, f64)| {
        if a.2 != b.2 {
            return a.2 > b.2;
        }
        if a.3 != b.3 {
            return a.3 > b.3;
        }
        let pos = |x: SubsystemCode| all.iter().position(|y| *y == x).unwrap();
        (pos(a.0), pos(a.1)) < (pos(b.0), pos(b.1))
    };
    // insertion sort keeps the oracle free of library comparators
    let mut sorted: Vec<(SubsystemCode, SubsystemCode, usize, f64)> = Vec::new();
    for p in kept {
        let at = sorted.iter().position(|q| before(&p, q)).unwrap_or(sorted.len());
        sorted.insert(at, p);
    }
    sorted
}

/// Mean of per-engine values over engines that contain the code.
pub fn present_only_mean(per_engine: &[BTreeMap<SubsystemCode, f64>]) -> BTreeMap<SubsystemCode, f64> {
    let mut out = BTreeMap::new();
    for code in SubsystemCode::ALL {
        let vals: Vec<f64> = per_engine.iter().filter_map(|m| m.get(&code).copied()).collect();
        if !vals.is_empty() {
            out.insert(code, vals.iter().sum::<f64>() / vals.len() as f64);
        }
    }
    out
}

/// Converts a subsystem graph into index form for the graph oracles;
/// node order is the graph's node order.
pub fn index_form(g: &SubsystemGraph) -> (Vec<Node>, Vec<(usize, usize)>) {
    let nodes: Vec<Node> = g.nodes.iter().copied().collect();
    let pos = |n: &Node| nodes.iter().position(|m| m == n).unwrap();
    let edges = g.edges.keys().map(|(s, t)| (pos(s), pos(t))).collect();
    (nodes, edges)
}

/// Every file under `dir`, relative path to contents.
pub fn read_tree(dir: &Path) -> BTreeMap<String, Vec<u8>> {
    let mut out = BTreeMap::new();
    for entry in walkdir::WalkDir::new(dir).sort_by_file_name() {
        let entry = entry.unwrap();
        if entry.file_type().is_file() {
            let rel = entry.path().strip_prefix(dir).unwrap().to_string_lossy().replace('\\', "/");
            out.insert(rel, std::fs::read(entry.path()).unwrap());
        }
    }
    out
}
