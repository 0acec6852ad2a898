//! Comma-separated reports.

use std::collections::BTreeMap;

use crate::aggregate::{CouplingMatrix, EmergentArchitecture, FrequentPair};
use crate::metrics::MetricsReport;
use crate::resolver::ResolutionReport;
use crate::subsystem::SubsystemCode;

fn to_csv(rows: Vec<Vec<String>>) -> String {
    let mut writer = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(Vec::new());
    for row in rows {
        // writing into a Vec cannot fail
        writer.write_record(&row).expect("in-memory csv write");
    }
    let bytes = writer.into_inner().expect("in-memory csv flush");
    String::from_utf8(bytes).expect("csv output is utf-8")
}

/// `including_file,directive,reason`, sorted.
pub fn unresolved_csv(report: &ResolutionReport) -> String {
    let mut rows: Vec<Vec<String>> = report
        .unresolved()
        .map(|u| {
            vec![
                u.including_file.to_string_lossy().into_owned(),
                u.directive_text.clone(),
                u.reason.as_str().to_string(),
            ]
        })
        .collect();
    rows.sort();
    rows.insert(0, vec!["including_file".into(), "directive".into(), "reason".into()]);
    to_csv(rows)
}

/// Directives resolved by picking the smallest of several candidates;
/// candidates are `;`-separated.
pub fn ambiguous_csv(report: &ResolutionReport) -> String {
    let mut rows: Vec<Vec<String>> = report
        .ambiguous_choices()
        .map(|(d, edge, candidates)| {
            vec![
                d.including_file.to_string_lossy().into_owned(),
                d.directive_text.clone(),
                edge.target.to_string_lossy().into_owned(),
                candidates
                    .iter()
                    .map(|c| c.to_string_lossy().into_owned())
                    .collect::<Vec<_>>()
                    .join(";"),
            ]
        })
        .collect();
    rows.sort();
    rows.insert(
        0,
        vec!["including_file".into(), "directive".into(), "chosen".into(), "candidates".into()],
    );
    to_csv(rows)
}

/// `subsystem,in_degree,out_degree,betweenness` in canonical node order.
pub fn metrics_csv(report: &MetricsReport) -> String {
    let mut rows = vec![vec![
        "subsystem".to_string(),
        "in_degree".to_string(),
        "out_degree".to_string(),
        "betweenness".to_string(),
    ]];
    for (node, in_deg) in &report.in_degree {
        rows.push(vec![
            node.as_str().to_string(),
            in_deg.to_string(),
            report.out_degree.get(node).copied().unwrap_or(0).to_string(),
            report.betweenness.get(node).copied().unwrap_or(0.0).to_string(),
        ]);
    }
    to_csv(rows)
}

/// 17×17 table: a header row and column of codes around the counts.
pub fn heatmap_csv(matrix: &CouplingMatrix) -> String {
    let mut header = vec![String::new()];
    header.extend(SubsystemCode::ALL.iter().map(|c| c.as_str().to_string()));
    let mut rows = vec![header];
    for source in SubsystemCode::ALL {
        let mut row = vec![source.as_str().to_string()];
        row.extend(SubsystemCode::ALL.iter().map(|t| matrix.get(source, *t).to_string()));
        rows.push(row);
    }
    to_csv(rows)
}

pub fn pairs_csv(pairs: &[FrequentPair]) -> String {
    let mut rows = vec![vec![
        "source".to_string(),
        "target".to_string(),
        "count".to_string(),
        "centrality_sum".to_string(),
    ]];
    for p in pairs {
        rows.push(vec![
            p.source.as_str().to_string(),
            p.target.as_str().to_string(),
            p.count.to_string(),
            p.centrality_sum.to_string(),
        ]);
    }
    to_csv(rows)
}

/// Averaged metrics per subsystem in canonical order.
pub fn averages_csv(
    in_degree: &[(SubsystemCode, f64)],
    betweenness: &[(SubsystemCode, f64)],
    engines_present: &BTreeMap<SubsystemCode, usize>,
) -> String {
    let in_map: BTreeMap<_, _> = in_degree.iter().copied().collect();
    let bt_map: BTreeMap<_, _> = betweenness.iter().copied().collect();
    let mut rows = vec![vec![
        "subsystem".to_string(),
        "engines".to_string(),
        "avg_in_degree".to_string(),
        "avg_betweenness".to_string(),
    ]];
    for code in SubsystemCode::ALL {
        let (Some(i), Some(b)) = (in_map.get(&code), bt_map.get(&code)) else {
            continue;
        };
        rows.push(vec![
            code.as_str().to_string(),
            engines_present.get(&code).copied().unwrap_or(0).to_string(),
            i.to_string(),
            b.to_string(),
        ]);
    }
    to_csv(rows)
}

/// Line-oriented `key = value` listing of the tiers and retained edges.
pub fn architecture_text(arch: &EmergentArchitecture) -> String {
    let join = |codes: &[SubsystemCode]| {
        codes.iter().map(|c| c.as_str()).collect::<Vec<_>>().join(",")
    };
    let mut out = String::new();
    out.push_str(&format!("inner_core = {}\n", join(&arch.inner_core)));
    out.push_str(&format!("outer_core = {}\n", join(&arch.outer_core)));
    out.push_str(&format!("periphery = {}\n", join(&arch.periphery)));
    for p in &arch.edges {
        out.push_str(&format!(
            "edge = {},{},{},{}\n",
            p.source, p.target, p.count, p.centrality_sum
        ));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::metrics::{compute_metrics, SubsystemGraph};
    use crate::subsystem::SubsystemCode::*;

    #[test]
    fn heatmap_shape() {
        let mut m = CouplingMatrix::zero(10);
        m.counts[Aud.index()][Aud.index()] = 8;
        m.counts[Aud.index()][Cor.index()] = 6;
        let text = heatmap_csv(&m);
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines.len(), 17);
        assert!(lines.iter().all(|l| l.split(',').count() == 17));
        assert!(lines[0].starts_with(",AUD,COR,DEB"));
        assert!(lines[1].starts_with("AUD,8,6,0"));
    }

    #[test]
    fn metrics_rows_in_canonical_order() {
        let mut g = SubsystemGraph::new("e");
        g.add_edge(Edi, Cor, 1);
        g.add_edge(Cor, Aud, 1);
        let text = metrics_csv(&compute_metrics(&g, false));
        assert_eq!(
            text,
            "subsystem,in_degree,out_degree,betweenness\nAUD,1,0,0\nCOR,1,1,1\nEDI,0,1,0\n"
        );
    }

    #[test]
    fn pairs_table() {
        let pairs = [FrequentPair { source: Gmp, target: Cor, count: 9, centrality_sum: 2.5 }];
        assert_eq!(
            pairs_csv(&pairs),
            "source,target,count,centrality_sum\nGMP,COR,9,2.5\n"
        );
    }
}
