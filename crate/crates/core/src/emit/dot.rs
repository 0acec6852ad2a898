//! DOT output for file and subsystem graphs, plus a reader for the
//! subsystem form so later stages can reload persisted models.

use std::fmt::Write as _;
use std::path::Path;

use crate::error::{Error, Result};
use crate::metrics::{Node, SubsystemGraph};
use crate::resolver::FileGraph;

fn quote(s: &str) -> String {
    format!("\"{}\"", s.replace('"', "\\\""))
}

/// One `"<source>" -> "<target>";` row per distinct edge, sorted.
pub fn file_graph_to_dot(graph: &FileGraph) -> String {
    let mut out = String::from("digraph G {\n");
    for (source, target) in graph.edges.keys() {
        let _ = writeln!(
            out,
            "{} -> {};",
            quote(&source.to_string_lossy()),
            quote(&target.to_string_lossy())
        );
    }
    out.push_str("}\n");
    out
}

/// Node rows first (so isolated subsystems survive a round trip), then
/// edges labelled with their weight.
pub fn subsystem_graph_to_dot(graph: &SubsystemGraph) -> String {
    let mut out = String::from("digraph G {\n");
    for node in &graph.nodes {
        let _ = writeln!(out, "{};", quote(node.as_str()));
    }
    for ((s, t), weight) in &graph.edges {
        let _ = writeln!(
            out,
            "{} -> {} [label=\"{weight}\"];",
            quote(s.as_str()),
            quote(t.as_str())
        );
    }
    out.push_str("}\n");
    out
}

/// Reads back the output of [`subsystem_graph_to_dot`].
pub fn parse_subsystem_dot(engine: &str, origin: &Path, text: &str) -> Result<SubsystemGraph> {
    let err = |line: usize, message: String| Error::MalformedDot {
        path: origin.to_path_buf(),
        line,
        message,
    };
    let node = |line: usize, token: &str| -> Result<Node> {
        let inner = token
            .strip_prefix('"')
            .and_then(|t| t.strip_suffix('"'))
            .ok_or_else(|| err(line, format!("expected quoted node, found `{token}`")))?;
        inner.parse::<Node>().map_err(|m| err(line, m))
    };

    let mut graph = SubsystemGraph::new(engine);
    let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l.trim()));
    match lines.find(|(_, l)| !l.is_empty()) {
        Some((_, l)) if l.starts_with("digraph") && l.ends_with('{') => {}
        Some((n, l)) => return Err(err(n, format!("expected `digraph G {{`, found `{l}`"))),
        None => return Err(err(1, "empty file".to_string())),
    }
    let mut closed = false;
    for (n, line) in lines {
        if line.is_empty() {
            continue;
        }
        if closed {
            return Err(err(n, "content after closing brace".to_string()));
        }
        if line == "}" {
            closed = true;
            continue;
        }
        let body = line
            .strip_suffix(';')
            .ok_or_else(|| err(n, "missing `;`".to_string()))?;
        if let Some((lhs, rhs)) = body.split_once("->") {
            let source = node(n, lhs.trim())?;
            let (target, attrs) = match rhs.trim().split_once('[') {
                Some((t, a)) => (t.trim(), Some(a)),
                None => (rhs.trim(), None),
            };
            let target = node(n, target)?;
            let weight = match attrs {
                None => 1,
                Some(a) => a
                    .trim()
                    .strip_suffix(']')
                    .and_then(|a| a.trim().strip_prefix("label=\""))
                    .and_then(|a| a.strip_suffix('"'))
                    .and_then(|w| w.parse::<usize>().ok())
                    .filter(|w| *w >= 1)
                    .ok_or_else(|| err(n, format!("bad edge attributes `[{a}`")))?,
            };
            graph.add_edge(source, target, weight);
        } else {
            graph.add_node(node(n, body.trim())?);
        }
    }
    if !closed {
        return Err(err(text.lines().count(), "missing closing `}`".to_string()));
    }
    Ok(graph)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::resolver::{build_include_graph, IncludeEdge, Resolution};
    use crate::subsystem::SubsystemCode::*;
    use proptest::prelude::*;
    use std::path::PathBuf;

    #[test]
    fn empty_graphs() {
        assert_eq!(file_graph_to_dot(&FileGraph::default()), "digraph G {\n}\n");
        assert_eq!(subsystem_graph_to_dot(&SubsystemGraph::new("e")), "digraph G {\n}\n");
    }

    #[test]
    fn single_file_edge() {
        let e = IncludeEdge {
            source: "/r/a.cpp".into(),
            target: "/r/a.h".into(),
            resolution: Resolution::FirstPass,
        };
        let files = vec![PathBuf::from("/r/a.cpp"), PathBuf::from("/r/a.h")];
        let g = build_include_graph(&[e.clone(), e], &files);
        assert_eq!(file_graph_to_dot(&g), "digraph G {\n\"/r/a.cpp\" -> \"/r/a.h\";\n}\n");
    }

    #[test]
    fn weighted_subsystem_edge() {
        let mut g = SubsystemGraph::new("e");
        g.add_edge(Gmp, Cor, 3);
        assert_eq!(
            subsystem_graph_to_dot(&g),
            "digraph G {\n\"COR\";\n\"GMP\";\n\"GMP\" -> \"COR\" [label=\"3\"];\n}\n"
        );
    }

    #[test]
    fn quotes_are_escaped() {
        let e = IncludeEdge {
            source: "/r/we\"ird.cpp".into(),
            target: "/r/a.h".into(),
            resolution: Resolution::FirstPass,
        };
        let g = build_include_graph(&[e], &[]);
        assert!(file_graph_to_dot(&g).contains("\"/r/we\\\"ird.cpp\""));
    }

    #[test]
    fn parse_rejects_garbage() {
        let p = Path::new("x.dot");
        assert!(parse_subsystem_dot("e", p, "").is_err());
        assert!(parse_subsystem_dot("e", p, "graph {\n}\n").is_err());
        assert!(parse_subsystem_dot("e", p, "digraph G {\n\"XXX\";\n}\n").is_err());
        assert!(parse_subsystem_dot("e", p, "digraph G {\n\"COR\"\n}\n").is_err());
        assert!(parse_subsystem_dot("e", p, "digraph G {\n\"COR\";\n").is_err());
        assert!(parse_subsystem_dot("e", p, "digraph G {\n\"COR\" -> \"AUD\" [label=\"0\"];\n}\n").is_err());
    }

    proptest! {
        #[test]
        fn subsystem_dot_round_trips(
            nodes in prop::collection::btree_set(0usize..17, 0..10),
            edges in prop::collection::vec((0usize..17, 0usize..17, 1usize..50), 0..30),
        ) {
            let to_node = |i: usize| if i == 16 { Node::Unassigned } else { Node::Subsystem(crate::subsystem::SubsystemCode::ALL[i]) };
            let mut g = SubsystemGraph::new("rt");
            for n in nodes { g.add_node(to_node(n)); }
            for (s, t, w) in edges { g.add_edge(to_node(s), to_node(t), w); }
            let text = subsystem_graph_to_dot(&g);
            let back = parse_subsystem_dot("rt", Path::new("rt.dot"), &text).unwrap();
            prop_assert_eq!(back, g);
        }
    }
}
