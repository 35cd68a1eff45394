//! Plain SVG plot of a Newton polygon on its integer grid.

use std::fmt::Write;

use jacpair_core::newton::{Face, LatticePolygon};
use jacpair_core::polyarith::Monomial;

const CELL: i64 = 40;
const MARGIN: i64 = 30;

pub fn render(d: &LatticePolygon, highlight: Option<&Face>) -> String {
    let verts = d.vertices();
    let w = verts.iter().map(|m| m.i as i64).max().unwrap_or(0).max(1);
    let h = verts.iter().map(|m| m.j as i64).max().unwrap_or(0).max(1);
    let px = |m: &Monomial| (MARGIN + m.i as i64 * CELL, MARGIN + (h - m.j as i64) * CELL);
    let (width, height) = (2 * MARGIN + w * CELL, 2 * MARGIN + h * CELL);

    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" viewBox="0 0 {width} {height}">"#
    );
    for i in 0..=w {
        for j in 0..=h {
            let (x, y) = px(&Monomial::new(i as u32, j as u32));
            let _ = writeln!(s, r##"<circle cx="{x}" cy="{y}" r="2" fill="#bbb"/>"##);
        }
    }

    let outer = d.outer_edges().unwrap_or_default();
    for e in d.edges().unwrap_or_default() {
        let Ok((a, b)) = e.endpoints() else { continue };
        let color = if highlight == Some(&e) {
            "green"
        } else if outer.contains(&e) {
            if e.interior_lattice_points().map(|v| v.is_empty()).unwrap_or(true) {
                "blue"
            } else {
                "red"
            }
        } else {
            "black"
        };
        let ((x1, y1), (x2, y2)) = (px(&a), px(&b));
        let _ = writeln!(
            s,
            r#"<line x1="{x1}" y1="{y1}" x2="{x2}" y2="{y2}" stroke="{color}" stroke-width="3"/>"#
        );
    }
    if let Some(f) = highlight {
        if !f.is_edge() {
            for m in f.points() {
                let (x, y) = px(m);
                let _ = writeln!(s, r#"<circle cx="{x}" cy="{y}" r="6" fill="green"/>"#);
            }
        }
    }
    for m in verts {
        let (x, y) = px(m);
        let _ = writeln!(s, r#"<circle cx="{x}" cy="{y}" r="4" fill="black"/>"#);
        let _ = writeln!(
            s,
            r#"<text x="{}" y="{}" font-size="11" font-family="monospace">({},{})</text>"#,
            x + 6,
            y - 6,
            m.i,
            m.j
        );
    }
    s.push_str("</svg>\n");
    s
}
