//! Hand-written SVG for the coupling heatmap and the tiered architecture map.

use std::f64::consts::PI;
use std::fmt::Write as _;

use crate::aggregate::{CouplingMatrix, EmergentArchitecture};
use crate::subsystem::SubsystemCode;

const CELL: f64 = 40.0;
const MARGIN_LEFT: f64 = 70.0;
const MARGIN_TOP: f64 = 80.0;

// single-hue ramp, white at zero
const RAMP_LOW: (u8, u8, u8) = (255, 255, 255);
const RAMP_HIGH: (u8, u8, u8) = (103, 0, 13);

/// Linear shade for `count` out of `max`.
pub fn shade(count: usize, max: usize) -> String {
    let t = if max == 0 {
        0.0
    } else {
        (count as f64 / max as f64).clamp(0.0, 1.0)
    };
    let mix = |lo: u8, hi: u8| -> u8 { (lo as f64 + (hi as f64 - lo as f64) * t).round() as u8 };
    format!(
        "#{:02x}{:02x}{:02x}",
        mix(RAMP_LOW.0, RAMP_HIGH.0),
        mix(RAMP_LOW.1, RAMP_HIGH.1),
        mix(RAMP_LOW.2, RAMP_HIGH.2)
    )
}

/// Rows are including subsystems, columns included ones. Each of the 256
/// data cells is a `<rect class="cell">`; the only other rect is the
/// background.
pub fn heatmap_svg(matrix: &CouplingMatrix) -> String {
    let n = SubsystemCode::COUNT as f64;
    let width = MARGIN_LEFT + n * CELL + 20.0;
    let height = MARGIN_TOP + n * CELL + 40.0;
    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" viewBox="0 0 {width} {height}" font-family="sans-serif">"#
    );
    let _ = writeln!(
        out,
        r##"<rect class="background" x="0" y="0" width="{width}" height="{height}" fill="#ffffff"/>"##
    );
    let _ = writeln!(
        out,
        r#"<text x="{}" y="24" font-size="16" text-anchor="middle">Subsystem coupling ({} engines)</text>"#,
        MARGIN_LEFT + n * CELL / 2.0,
        matrix.n_engines
    );
    let _ = writeln!(
        out,
        r#"<text x="{}" y="46" font-size="11" text-anchor="middle">included subsystem</text>"#,
        MARGIN_LEFT + n * CELL / 2.0
    );
    for (j, code) in SubsystemCode::ALL.iter().enumerate() {
        let _ = writeln!(
            out,
            r#"<text class="col-label" x="{}" y="{}" font-size="12" text-anchor="middle">{code}</text>"#,
            MARGIN_LEFT + (j as f64 + 0.5) * CELL,
            MARGIN_TOP - 8.0
        );
    }
    for (i, code) in SubsystemCode::ALL.iter().enumerate() {
        let _ = writeln!(
            out,
            r#"<text class="row-label" x="{}" y="{}" font-size="12" text-anchor="end" dominant-baseline="middle">{code}</text>"#,
            MARGIN_LEFT - 8.0,
            MARGIN_TOP + (i as f64 + 0.5) * CELL
        );
    }
    for (i, source) in SubsystemCode::ALL.iter().enumerate() {
        for (j, target) in SubsystemCode::ALL.iter().enumerate() {
            let count = matrix.get(*source, *target);
            let x = MARGIN_LEFT + j as f64 * CELL;
            let y = MARGIN_TOP + i as f64 * CELL;
            let dark = matrix.n_engines > 0 && count * 2 > matrix.n_engines;
            let _ = writeln!(
                out,
                r##"<rect class="cell" x="{x}" y="{y}" width="{CELL}" height="{CELL}" fill="{}" stroke="#cccccc" data-source="{source}" data-target="{target}" data-count="{count}"/>"##,
                shade(count, matrix.n_engines)
            );
            let _ = writeln!(
                out,
                r#"<text x="{}" y="{}" font-size="12" text-anchor="middle" dominant-baseline="middle" fill="{}">{count}</text>"#,
                x + CELL / 2.0,
                y + CELL / 2.0,
                if dark { "#ffffff" } else { "#000000" }
            );
        }
    }
    let _ = writeln!(
        out,
        r#"<text x="{}" y="{}" font-size="11" text-anchor="middle" transform="rotate(-90 {} {})">including subsystem</text>"#,
        16.0,
        MARGIN_TOP + n * CELL / 2.0,
        16.0,
        MARGIN_TOP + n * CELL / 2.0
    );
    out.push_str("</svg>\n");
    out
}

const MAP_SIZE: f64 = 800.0;
const NODE_RADIUS: f64 = 24.0;
const INNER_RING: f64 = 75.0;
const OUTER_RING: f64 = 200.0;
const PERIPHERY_RING: f64 = 320.0;

fn ring_positions(count: usize, radius: f64) -> Vec<(f64, f64)> {
    let c = MAP_SIZE / 2.0;
    if count == 1 && radius == INNER_RING {
        return vec![(c, c)];
    }
    (0..count)
        .map(|i| {
            let angle = -PI / 2.0 + 2.0 * PI * i as f64 / count as f64;
            (c + radius * angle.cos(), c + radius * angle.sin())
        })
        .collect()
}

fn fmt2(v: f64) -> String {
    let s = format!("{v:.2}");
    // avoid "-0.00"
    if s == "-0.00" {
        "0.00".to_string()
    } else {
        s
    }
}

/// Concentric tiers with nodes at evenly spaced angles, retained pairs as
/// arrows.
pub fn architecture_svg(arch: &EmergentArchitecture) -> String {
    let c = MAP_SIZE / 2.0;
    let mut positions: Vec<(SubsystemCode, (f64, f64), &str)> = Vec::new();
    for (tier, codes, radius) in [
        ("inner-core", &arch.inner_core, INNER_RING),
        ("outer-core", &arch.outer_core, OUTER_RING),
        ("periphery", &arch.periphery, PERIPHERY_RING),
    ] {
        for (code, pos) in codes.iter().zip(ring_positions(codes.len(), radius)) {
            positions.push((*code, pos, tier));
        }
    }
    let lookup = |code: SubsystemCode| positions.iter().find(|p| p.0 == code).map(|p| p.1);

    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{MAP_SIZE}" height="{MAP_SIZE}" viewBox="0 0 {MAP_SIZE} {MAP_SIZE}" font-family="sans-serif">"#
    );
    out.push_str("<defs>\n<marker id=\"arrow\" viewBox=\"0 0 10 10\" refX=\"10\" refY=\"5\" markerWidth=\"8\" markerHeight=\"8\" orient=\"auto-start-reverse\">\n<path d=\"M 0 0 L 10 5 L 0 10 z\" fill=\"#333333\"/>\n</marker>\n</defs>\n");
    let _ = writeln!(
        out,
        r##"<circle class="zone periphery" cx="{c}" cy="{c}" r="{}" fill="#ffffff" stroke="#999999"/>"##,
        PERIPHERY_RING + 60.0
    );
    let _ = writeln!(
        out,
        r##"<circle class="zone outer-core" cx="{c}" cy="{c}" r="{}" fill="#fcbba1" stroke="#999999"/>"##,
        (OUTER_RING + PERIPHERY_RING) / 2.0
    );
    let _ = writeln!(
        out,
        r##"<circle class="zone inner-core" cx="{c}" cy="{c}" r="{}" fill="#cb181d" stroke="#999999"/>"##,
        (INNER_RING + OUTER_RING) / 2.0 - 10.0
    );

    for pair in &arch.edges {
        let (Some((x1, y1)), Some((x2, y2))) = (lookup(pair.source), lookup(pair.target)) else {
            continue;
        };
        let (dx, dy) = (x2 - x1, y2 - y1);
        let len = (dx * dx + dy * dy).sqrt();
        if len <= 2.0 * NODE_RADIUS {
            continue;
        }
        let (ux, uy) = (dx / len, dy / len);
        let _ = writeln!(
            out,
            r##"<line class="edge" x1="{}" y1="{}" x2="{}" y2="{}" stroke="#333333" stroke-width="1.5" marker-end="url(#arrow)" data-source="{}" data-target="{}" data-count="{}"><title>{} -&gt; {} ({})</title></line>"##,
            fmt2(x1 + ux * NODE_RADIUS),
            fmt2(y1 + uy * NODE_RADIUS),
            fmt2(x2 - ux * NODE_RADIUS),
            fmt2(y2 - uy * NODE_RADIUS),
            pair.source,
            pair.target,
            pair.count,
            pair.source,
            pair.target,
            pair.count
        );
    }

    for (code, (x, y), tier) in &positions {
        let _ = writeln!(
            out,
            r##"<circle class="node {tier}" cx="{}" cy="{}" r="{NODE_RADIUS}" fill="#ffffff" stroke="#000000" data-code="{code}"><title>{}</title></circle>"##,
            fmt2(*x),
            fmt2(*y),
            code.display_name()
        );
        let _ = writeln!(
            out,
            r#"<text x="{}" y="{}" font-size="12" text-anchor="middle" dominant-baseline="middle">{code}</text>"#,
            fmt2(*x),
            fmt2(*y)
        );
    }
    out.push_str("</svg>\n");
    out
}
