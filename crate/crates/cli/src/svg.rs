//! Minimal SVG bar charts of macro F scores.

use std::fmt::Write;

const BAR_H: usize = 22;
const LABEL_W: usize = 260;
const PLOT_W: usize = 420;

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;").replace('"', "&quot;")
}

/// Horizontal bars on a fixed 0..1 axis. `None` values draw as "n/a".
pub fn bar_chart(title: &str, bars: &[(String, Option<f64>)]) -> String {
    let width = LABEL_W + PLOT_W + 70;
    let height = 50 + bars.len() * BAR_H + 30;
    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" font-family="sans-serif" font-size="12">"#
    );
    let _ = writeln!(s, r#"<text x="10" y="24" font-size="15">{}</text>"#, escape(title));
    for (i, (label, value)) in bars.iter().enumerate() {
        let y = 40 + i * BAR_H;
        let _ = writeln!(s, r#"<text x="{}" y="{}" text-anchor="end">{}</text>"#, LABEL_W - 8, y + 15, escape(label));
        match value {
            Some(v) => {
                let w = (v.clamp(0.0, 1.0) * PLOT_W as f64).round();
                let _ = writeln!(s, r##"<rect x="{LABEL_W}" y="{}" width="{w}" height="{}" fill="#4878a8"/>"##, y + 3, BAR_H - 6);
                let _ = writeln!(s, r#"<text x="{}" y="{}">{v:.3}</text>"#, LABEL_W as f64 + w + 4.0, y + 15);
            }
            None => {
                let _ = writeln!(s, r#"<text x="{}" y="{}" fill="gray">n/a</text>"#, LABEL_W + 4, y + 15);
            }
        }
    }
    let axis_y = 40 + bars.len() * BAR_H + 4;
    let _ = writeln!(
        s,
        r#"<line x1="{LABEL_W}" y1="{axis_y}" x2="{}" y2="{axis_y}" stroke="black"/>"#,
        LABEL_W + PLOT_W
    );
    for t in 0..=4 {
        let x = LABEL_W + t * PLOT_W / 4;
        let _ = writeln!(s, r#"<text x="{x}" y="{}" text-anchor="middle">{:.2}</text>"#, axis_y + 16, t as f64 / 4.0);
    }
    s.push_str("</svg>\n");
    s
}
