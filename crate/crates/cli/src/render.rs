//! Trace-to-SVG rendering: one static picture per execution, with robot
//! trajectories as polylines, multiplicity labels on the final support,
//! crash marks, and a one-line caption.
//!
//! This is the only place in the tool that touches floating point, and it
//! is purely cosmetic: exact rational coordinates are projected to screen
//! space after the run is over, so nothing downstream depends on them.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use swarmkit_core::{ExecutionTrace, Point, Verdict};

use crate::runspec::UResult;

const WIDTH: f64 = 720.0;
const HEIGHT: f64 = 540.0;
const MARGIN: f64 = 48.0;
const CAPTION_BAND: f64 = 34.0;

/// Renders a parsed trace as a complete standalone SVG document.
pub fn render_svg(trace: &ExecutionTrace) -> UResult<String> {
    let steps = &trace.steps;
    let first = steps.first().ok_or("trace has no snapshots")?;
    let robots = first.positions.len();
    if robots == 0 {
        return Err("trace has no robots".into());
    }

    // Screen projection covering every position the swarm ever occupied.
    let all: Vec<(f64, f64)> = steps
        .iter()
        .flat_map(|s| s.positions.iter().map(to_f64_pair))
        .collect();
    if all.iter().any(|(x, y)| !x.is_finite() || !y.is_finite()) {
        return Err("coordinates are too large to draw".into());
    }
    let min_x = all.iter().map(|p| p.0).fold(f64::INFINITY, f64::min);
    let max_x = all.iter().map(|p| p.0).fold(f64::NEG_INFINITY, f64::max);
    let min_y = all.iter().map(|p| p.1).fold(f64::INFINITY, f64::min);
    let max_y = all.iter().map(|p| p.1).fold(f64::NEG_INFINITY, f64::max);
    let span_x = (max_x - min_x).max(1e-9);
    let span_y = (max_y - min_y).max(1e-9);
    let scale = ((WIDTH - 2.0 * MARGIN) / span_x).min((HEIGHT - 2.0 * MARGIN) / span_y);
    // Center the drawing; flip y so +y points up as on paper.
    let offset_x = (WIDTH - scale * span_x) / 2.0;
    let offset_y = (HEIGHT - scale * span_y) / 2.0;
    let project = |p: &Point| -> (f64, f64) {
        let (x, y) = to_f64_pair(p);
        (
            offset_x + (x - min_x) * scale,
            HEIGHT - (offset_y + (y - min_y) * scale),
        )
    };

    let total_height = HEIGHT + CAPTION_BAND;
    let mut svg = String::new();
    let _ = writeln!(
        svg,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 {WIDTH} {total_height}\" \
         width=\"{WIDTH}\" height=\"{total_height}\">"
    );
    let _ = writeln!(
        svg,
        "  <rect width=\"{WIDTH}\" height=\"{total_height}\" fill=\"#ffffff\"/>"
    );

    // Trajectories, one polyline per robot, hue-spaced around the wheel.
    for id in 0..robots {
        let color = robot_color(id);
        let path: Vec<String> = steps
            .iter()
            .map(|s| {
                let (x, y) = project(&s.positions[id]);
                format!("{x:.2},{y:.2}")
            })
            .collect();
        let _ = writeln!(
            svg,
            "  <polyline points=\"{}\" fill=\"none\" stroke=\"{color}\" \
             stroke-width=\"1.5\" stroke-opacity=\"0.75\"/>",
            path.join(" ")
        );
    }

    // Start markers (hollow) and final markers (filled).
    let last = steps.last().expect("nonempty by the first() check");
    for id in 0..robots {
        let color = robot_color(id);
        let (sx, sy) = project(&first.positions[id]);
        let _ = writeln!(
            svg,
            "  <circle cx=\"{sx:.2}\" cy=\"{sy:.2}\" r=\"3\" fill=\"none\" \
             stroke=\"{color}\" stroke-width=\"1.2\"/>"
        );
        let (ex, ey) = project(&last.positions[id]);
        let _ = writeln!(
            svg,
            "  <circle cx=\"{ex:.2}\" cy=\"{ey:.2}\" r=\"4\" fill=\"{color}\"/>"
        );
    }

    // Multiplicity labels on the final support (exact grouping on the
    // rational points, not on the projected floats).
    let mut counts: BTreeMap<&Point, usize> = BTreeMap::new();
    for p in &last.positions {
        *counts.entry(p).or_insert(0) += 1;
    }
    for (point, count) in &counts {
        if *count > 1 {
            let (x, y) = project(point);
            let _ = writeln!(
                svg,
                "  <text x=\"{:.2}\" y=\"{:.2}\" font-family=\"sans-serif\" \
                 font-size=\"13\" fill=\"#333333\">x{count}</text>",
                x + 7.0,
                y - 7.0
            );
        }
    }

    // Crash marks: a red X where each crashed robot froze.
    for &id in &last.crashed {
        let (x, y) = project(&last.positions[id]);
        let _ = writeln!(
            svg,
            "  <g class=\"crash\" stroke=\"#cc2222\" stroke-width=\"2\">\
             <line x1=\"{a:.2}\" y1=\"{b:.2}\" x2=\"{c:.2}\" y2=\"{d:.2}\"/>\
             <line x1=\"{a:.2}\" y1=\"{d:.2}\" x2=\"{c:.2}\" y2=\"{b:.2}\"/></g>",
            a = x - 6.0,
            b = y - 6.0,
            c = x + 6.0,
            d = y + 6.0,
        );
    }

    let verdict = match trace.verdict {
        Verdict::Reached(t) => format!("goal reached at t={t}"),
        Verdict::StasisDetected => format!("fixpoint at t={}", last.time),
        Verdict::HorizonExceeded => format!("horizon exceeded at t={}", last.time),
    };
    let caption = format!(
        "{verdict} · final support {} · {robots} robots · {} snapshots",
        counts.len(),
        steps.len()
    );
    let _ = writeln!(
        svg,
        "  <text x=\"{:.2}\" y=\"{:.2}\" font-family=\"sans-serif\" font-size=\"14\" \
         fill=\"#111111\">{caption}</text>",
        MARGIN / 2.0,
        HEIGHT + CAPTION_BAND - 12.0
    );
    svg.push_str("</svg>\n");
    Ok(svg)
}

fn to_f64_pair(p: &Point) -> (f64, f64) {
    (p.x.to_f64(), p.y.to_f64())
}

/// Golden-angle hue spacing keeps neighbouring ids visually distinct.
fn robot_color(id: usize) -> String {
    format!("hsl({}, 65%, 42%)", (id * 137) % 360)
}
