//! Threshold-style log-log figures as standalone SVG.

use std::fmt::Write as _;

use super::analyze::{curves, group};
use super::run::RunRecord;
use super::stats::pseudothreshold;

const W: f64 = 640.0;
const H: f64 = 440.0;
const LEFT: f64 = 80.0;
const RIGHT: f64 = 130.0;
const TOP: f64 = 40.0;
const BOTTOM: f64 = 60.0;
const COLORS: [&str; 6] = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"];

fn decades(lo: f64, hi: f64) -> (f64, f64) {
    (lo.log10().floor(), hi.log10().ceil().max(lo.log10().floor() + 1.0))
}

/// One panel per (code, gadget, basis, γ) group: p_L against p, one line per
/// distance, and a dashed vertical line at the pseudothreshold when the
/// curves cross.
pub fn plot_svg(records: &[RunRecord]) -> String {
    let groups = group(records);
    let total_h = H * groups.len().max(1) as f64;
    let mut s = String::new();
    writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{W}" height="{total_h}" font-family="sans-serif" font-size="12">"#
    )
    .unwrap();
    writeln!(s, r#"<rect width="100%" height="100%" fill="white"/>"#).unwrap();
    for (gi, (key, rs)) in groups.iter().enumerate() {
        let y0 = gi as f64 * H;
        let cs = curves(rs);
        let pts: Vec<(f64, f64)> = cs
            .iter()
            .flat_map(|c| c.points.iter().copied())
            .filter(|&(p, pl)| p > 0.0 && pl > 0.0)
            .collect();
        writeln!(
            s,
            r#"<text x="{}" y="{}" text-anchor="middle" font-size="14">{} {} {} ({}), γ = {}</text>"#,
            LEFT + (W - LEFT - RIGHT) / 2.0,
            y0 + 22.0,
            key.code,
            key.gadget,
            key.basis,
            key.orientation,
            key.gamma
        )
        .unwrap();
        if pts.is_empty() {
            continue;
        }
        let (x_lo, x_hi) = decades(
            pts.iter().map(|p| p.0).fold(f64::MAX, f64::min),
            pts.iter().map(|p| p.0).fold(f64::MIN, f64::max),
        );
        let (y_lo, y_hi) = decades(
            pts.iter().map(|p| p.1).fold(f64::MAX, f64::min),
            pts.iter().map(|p| p.1).fold(f64::MIN, f64::max),
        );
        let pw = W - LEFT - RIGHT;
        let ph = H - TOP - BOTTOM;
        let sx = |p: f64| LEFT + (p.log10() - x_lo) / (x_hi - x_lo) * pw;
        let sy = |q: f64| y0 + TOP + (1.0 - (q.log10() - y_lo) / (y_hi - y_lo)) * ph;

        writeln!(
            s,
            r#"<rect x="{LEFT}" y="{}" width="{pw}" height="{ph}" fill="none" stroke="black"/>"#,
            y0 + TOP
        )
        .unwrap();
        for e in x_lo as i32..=x_hi as i32 {
            let x = sx(10f64.powi(e));
            writeln!(
                s,
                r##"<line x1="{x}" y1="{}" x2="{x}" y2="{}" stroke="#ddd"/><text x="{x}" y="{}" text-anchor="middle">1e{e}</text>"##,
                y0 + TOP,
                y0 + TOP + ph,
                y0 + TOP + ph + 18.0
            )
            .unwrap();
        }
        for e in y_lo as i32..=y_hi as i32 {
            let y = sy(10f64.powi(e));
            writeln!(
                s,
                r##"<line x1="{LEFT}" y1="{y}" x2="{}" y2="{y}" stroke="#ddd"/><text x="{}" y="{}" text-anchor="end">1e{e}</text>"##,
                LEFT + pw,
                LEFT - 6.0,
                y + 4.0
            )
            .unwrap();
        }
        writeln!(
            s,
            r#"<text x="{}" y="{}" text-anchor="middle">physical error rate p</text>"#,
            LEFT + pw / 2.0,
            y0 + H - 15.0
        )
        .unwrap();
        writeln!(
            s,
            r#"<text x="20" y="{}" text-anchor="middle" transform="rotate(-90 20 {})">logical error rate p_L</text>"#,
            y0 + TOP + ph / 2.0,
            y0 + TOP + ph / 2.0
        )
        .unwrap();

        for (i, c) in cs.iter().enumerate() {
            let color = COLORS[i % COLORS.len()];
            let line: Vec<String> = c
                .points
                .iter()
                .filter(|&&(p, pl)| p > 0.0 && pl > 0.0)
                .map(|&(p, pl)| format!("{:.2},{:.2}", sx(p), sy(pl)))
                .collect();
            writeln!(
                s,
                r#"<polyline points="{}" fill="none" stroke="{color}" stroke-width="1.5"/>"#,
                line.join(" ")
            )
            .unwrap();
            for pt in &line {
                let (x, y) = pt.split_once(',').unwrap();
                writeln!(s, r#"<circle cx="{x}" cy="{y}" r="3" fill="{color}"/>"#).unwrap();
            }
            let ly = y0 + TOP + 10.0 + 18.0 * i as f64;
            writeln!(
                s,
                r#"<line x1="{}" y1="{ly}" x2="{}" y2="{ly}" stroke="{color}" stroke-width="2"/><text x="{}" y="{}">d = {}</text>"#,
                LEFT + pw + 12.0,
                LEFT + pw + 36.0,
                LEFT + pw + 42.0,
                ly + 4.0,
                c.d
            )
            .unwrap();
        }
        if let Ok(t) = pseudothreshold(&cs) {
            let x = sx(t.p_th);
            writeln!(
                s,
                r#"<line x1="{x}" y1="{}" x2="{x}" y2="{}" stroke="black" stroke-dasharray="5,4"/><text x="{}" y="{}">p_th = {:.2e}</text>"#,
                y0 + TOP,
                y0 + TOP + ph,
                x + 4.0,
                y0 + TOP + 14.0,
                t.p_th
            )
            .unwrap();
        }
    }
    s.push_str("</svg>\n");
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::layout::{CodeKind, Gadget, Orientation};
    use crate::pauli::Basis;

    #[test]
    fn svg_has_one_line_per_distance() {
        let mut recs = Vec::new();
        for d in [3usize, 5] {
            for p in [2e-3, 4e-3, 8e-3] {
                recs.push(RunRecord {
                    code: CodeKind::Rotated,
                    gadget: Gadget::CAT,
                    basis: Basis::Z,
                    orientation: Orientation::Across,
                    gamma: 10.0,
                    d,
                    p,
                    shots: 1000,
                    errors: 10,
                    p_l: (p / 5e-3f64).powi(d as i32) * 0.05,
                    ci95: 0.0,
                    seed: 0,
                });
            }
        }
        let svg = plot_svg(&recs);
        assert!(svg.starts_with("<svg"));
        assert_eq!(svg.matches("<polyline").count(), 2);
        assert!(svg.contains("p_th ="));
    }
}
