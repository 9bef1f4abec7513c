//! Forest plots as fixed-width text and as SVG 1.1.

use std::fmt::Write as _;

use serde::Serialize;

use crate::meta::MetaResult;

/// Number of character cells spanning the [-1, 1] axis.
pub const ASCII_AXIS: usize = 61;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ForestRow {
    pub label: String,
    pub r: f64,
    pub ci_low: f64,
    pub ci_high: f64,
    pub weight_percent: f64,
    pub pooled: bool,
    pub p_value: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SummaryRow {
    pub r: f64,
    pub ci_low: f64,
    pub ci_high: f64,
    pub p_value: f64,
    pub pooled: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ForestPlotSpec {
    pub title: String,
    pub rows: Vec<ForestRow>,
    pub summary: SummaryRow,
    pub x_range: (f64, f64),
}

impl ForestPlotSpec {
    pub fn from_meta(meta: &MetaResult) -> ForestPlotSpec {
        let mut rows: Vec<ForestRow> = meta
            .studies
            .iter()
            .zip(&meta.weights)
            .map(|(s, w)| {
                let (lo, hi) = s.ci_r();
                ForestRow {
                    label: s.label(),
                    r: s.r(),
                    ci_low: lo,
                    ci_high: hi,
                    weight_percent: w * 100.0,
                    pooled: s.pooled,
                    p_value: s.p_value,
                }
            })
            .collect();
        rows.sort_by(|a, b| a.label.cmp(&b.label));
        ForestPlotSpec {
            title: format!("Cognitive Complexity vs {}", meta.variable),
            rows,
            summary: SummaryRow {
                r: meta.summary_r,
                ci_low: meta.ci_low_r,
                ci_high: meta.ci_high_r,
                p_value: meta.p_value,
                pooled: meta.pooled,
            },
            x_range: (-1.0, 1.0),
        }
    }
}

fn cell(v: f64) -> usize {
    let t = ((v.clamp(-1.0, 1.0) + 1.0) / 2.0) * (ASCII_AXIS - 1) as f64;
    t.round() as usize
}

fn bar(lo: f64, mid: f64, hi: f64, ends: (char, char), fill: char, mark: char) -> String {
    let mut cells = vec![' '; ASCII_AXIS];
    let (a, m, b) = (cell(lo), cell(mid), cell(hi));
    for c in &mut cells[a..=b] {
        *c = fill;
    }
    cells[a] = ends.0;
    cells[b] = ends.1;
    cells[m] = mark;
    cells.into_iter().collect()
}

fn p_text(p: Option<f64>) -> String {
    p.map(|p| format!("{p:.6}")).unwrap_or_else(|| "-".to_string())
}

/// Text rendering: one `[--*--]` bar per study and a `<==#==>` summary bar
/// on a 61-cell axis over [-1, 1], followed by the printed numbers.
pub fn render_ascii(spec: &ForestPlotSpec) -> String {
    let width = spec
        .rows
        .iter()
        .map(|r| r.label.chars().count())
        .chain(["Summary".len(), "Study".len()])
        .max()
        .unwrap_or(0);
    let mut out = String::new();
    let _ = writeln!(out, "{}", spec.title);
    let _ = writeln!(
        out,
        "{:<width$}  {:<axis$}  {:>9}  {:>9}  {:>9}  {:>8}  {:>8}",
        "Study",
        "",
        "r",
        "ci_low",
        "ci_high",
        "weight%",
        "p",
        axis = ASCII_AXIS
    );
    for row in &spec.rows {
        let mark = if row.pooled { 'o' } else { '*' };
        let _ = writeln!(
            out,
            "{:<width$}  {}  {:>9.6}  {:>9.6}  {:>9.6}  {:>8.2}  {:>8}",
            row.label,
            bar(row.ci_low, row.r, row.ci_high, ('[', ']'), '-', mark),
            row.r,
            row.ci_low,
            row.ci_high,
            row.weight_percent,
            p_text(row.p_value),
        );
    }
    let s = &spec.summary;
    let _ = writeln!(
        out,
        "{:<width$}  {}  {:>9.6}  {:>9.6}  {:>9.6}  {:>8.2}  {:>8}",
        "Summary",
        bar(s.ci_low, s.r, s.ci_high, ('<', '>'), '=', '#'),
        s.r,
        s.ci_low,
        s.ci_high,
        100.0,
        p_text(Some(s.p_value)),
    );
    let mut ruler = vec!['-'; ASCII_AXIS];
    for v in [-1.0, -0.5, 0.0, 0.5, 1.0] {
        ruler[cell(v)] = '+';
    }
    let _ = writeln!(out, "{:<width$}  {}", "", ruler.into_iter().collect::<String>());
    let mut labels = vec![' '; ASCII_AXIS + 2];
    for (v, text) in [(-1.0, "-1"), (-0.5, "-0.5"), (0.0, "0"), (0.5, "0.5"), (1.0, "1")] {
        let start = (cell(v) + 1)
            .saturating_sub(text.len() / 2 + 1)
            .min(labels.len() - text.len());
        for (i, ch) in text.chars().enumerate() {
            labels[start + i] = ch;
        }
    }
    let _ = writeln!(
        out,
        "{:<width$}  {}",
        "",
        labels.into_iter().collect::<String>().trim_end()
    );
    out
}

fn xml_escape(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    for ch in s.chars() {
        match ch {
            '&' => out.push_str("&amp;"),
            '<' => out.push_str("&lt;"),
            '>' => out.push_str("&gt;"),
            '"' => out.push_str("&quot;"),
            '\'' => out.push_str("&apos;"),
            c => out.push(c),
        }
    }
    out
}

const PLOT_X0: f64 = 220.0;
const PLOT_W: f64 = 400.0;
const ROW_H: f64 = 24.0;
const TOP: f64 = 40.0;
const MAX_SQUARE: f64 = 16.0;

fn x_of(v: f64) -> f64 {
    PLOT_X0 + (v.clamp(-1.0, 1.0) + 1.0) / 2.0 * PLOT_W
}

/// SVG rendering. Squares have area proportional to weight; the summary is a
/// diamond spanning its confidence interval. Every mark carries its numbers
/// in `data-*` attributes.
pub fn render_svg(spec: &ForestPlotSpec) -> String {
    let n = spec.rows.len();
    let height = TOP + (n as f64 + 2.0) * ROW_H + 40.0;
    let width = PLOT_X0 + PLOT_W + 320.0;
    let max_w = spec.rows.iter().map(|r| r.weight_percent).fold(0.0, f64::max);
    let mut out = String::new();
    let _ = writeln!(out, r#"<?xml version="1.0" encoding="UTF-8"?>"#);
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{width:.0}" height="{height:.0}" viewBox="0 0 {width:.0} {height:.0}" font-family="sans-serif" font-size="12">"#
    );
    let _ = writeln!(out, "<title>{}</title>", xml_escape(&spec.title));
    let _ = writeln!(
        out,
        r#"<text x="10" y="20" font-size="14" font-weight="bold">{}</text>"#,
        xml_escape(&spec.title)
    );
    let axis_bottom = TOP + (n as f64 + 1.5) * ROW_H;
    let _ = writeln!(
        out,
        r#"<line class="zero" x1="{x:.2}" y1="{TOP:.2}" x2="{x:.2}" y2="{axis_bottom:.2}" stroke="gray" stroke-dasharray="4,3"/>"#,
        x = x_of(0.0)
    );
    let num_x = PLOT_X0 + PLOT_W + 20.0;
    let _ = writeln!(
        out,
        r#"<text x="{num_x:.2}" y="{y:.2}" font-weight="bold">r [95% CI]   weight</text>"#,
        y = TOP - 6.0
    );
    for (i, row) in spec.rows.iter().enumerate() {
        let y = TOP + (i as f64 + 0.5) * ROW_H;
        let side = if max_w > 0.0 {
            MAX_SQUARE * (row.weight_percent / max_w).sqrt()
        } else {
            MAX_SQUARE
        };
        let _ = writeln!(
            out,
            r#"<g class="study" data-label="{label}" data-r="{r:.6}" data-ci-low="{lo:.6}" data-ci-high="{hi:.6}" data-weight="{w:.6}" data-pooled="{pooled}">"#,
            label = xml_escape(&row.label),
            r = row.r,
            lo = row.ci_low,
            hi = row.ci_high,
            w = row.weight_percent,
            pooled = row.pooled
        );
        let _ = writeln!(
            out,
            r#"<text x="10" y="{ty:.2}">{}</text>"#,
            xml_escape(&row.label),
            ty = y + 4.0
        );
        let _ = writeln!(
            out,
            r#"<line x1="{x1:.2}" y1="{y:.2}" x2="{x2:.2}" y2="{y:.2}" stroke="black"/>"#,
            x1 = x_of(row.ci_low),
            x2 = x_of(row.ci_high)
        );
        let _ = writeln!(
            out,
            r#"<rect x="{x:.2}" y="{sy:.2}" width="{side:.2}" height="{side:.2}" fill="{fill}"/>"#,
            x = x_of(row.r) - side / 2.0,
            sy = y - side / 2.0,
            fill = if row.pooled { "dimgray" } else { "black" }
        );
        let _ = writeln!(
            out,
            r#"<text x="{num_x:.2}" y="{ty:.2}">{r:.2} [{lo:.2}, {hi:.2}]   {w:.1}%</text>"#,
            ty = y + 4.0,
            r = row.r,
            lo = row.ci_low,
            hi = row.ci_high,
            w = row.weight_percent
        );
        let _ = writeln!(out, "</g>");
    }
    let s = &spec.summary;
    let y = TOP + (n as f64 + 1.0) * ROW_H;
    let _ = writeln!(
        out,
        r#"<g class="summary" data-r="{r:.6}" data-ci-low="{lo:.6}" data-ci-high="{hi:.6}" data-p="{p:.6}">"#,
        r = s.r,
        lo = s.ci_low,
        hi = s.ci_high,
        p = s.p_value
    );
    let _ = writeln!(
        out,
        r#"<text x="10" y="{ty:.2}" font-weight="bold">{}</text>"#,
        if s.pooled {
            "Random effects"
        } else {
            "Single study (not pooled)"
        },
        ty = y + 4.0
    );
    let _ = writeln!(
        out,
        r#"<polygon class="diamond" points="{l:.2},{y:.2} {c:.2},{t:.2} {r:.2},{y:.2} {c:.2},{b:.2}" fill="black"/>"#,
        l = x_of(s.ci_low),
        c = x_of(s.r),
        r = x_of(s.ci_high),
        t = y - 7.0,
        b = y + 7.0
    );
    let _ = writeln!(
        out,
        r#"<text x="{num_x:.2}" y="{ty:.2}" font-weight="bold">{r:.2} [{lo:.2}, {hi:.2}]</text>"#,
        ty = y + 4.0,
        r = s.r,
        lo = s.ci_low,
        hi = s.ci_high
    );
    let _ = writeln!(out, "</g>");
    let _ = writeln!(
        out,
        r#"<line class="axis" x1="{x1:.2}" y1="{axis_bottom:.2}" x2="{x2:.2}" y2="{axis_bottom:.2}" stroke="black"/>"#,
        x1 = x_of(-1.0),
        x2 = x_of(1.0)
    );
    for v in [-1.0, -0.5, 0.0, 0.5, 1.0] {
        let x = x_of(v);
        let _ = writeln!(
            out,
            r#"<line x1="{x:.2}" y1="{axis_bottom:.2}" x2="{x:.2}" y2="{t:.2}" stroke="black"/><text x="{x:.2}" y="{ty:.2}" text-anchor="middle">{v}</text>"#,
            t = axis_bottom + 5.0,
            ty = axis_bottom + 18.0
        );
    }
    let _ = writeln!(out, "</svg>");
    out
}
