//! SVG pictures of dimer covers and lozenge halves.

use std::fmt::Write as _;
use std::path::Path;

use crate::error::{Error, Result};
use crate::lattice::{Block, Orientation, Vertex};
use crate::pyramid::DimerConfig;
use crate::solid::{Face, HalfPlaneConfig};

const CELL: f64 = 20.0;
const MARGIN: f64 = 15.0;

fn header(out: &mut String, width: f64, height: f64) {
    let _ = writeln!(
        out,
        r#"<?xml version="1.0" encoding="UTF-8"?>
<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{width:.1}" height="{height:.1}" viewBox="0 0 {width:.1} {height:.1}">
<style>
.dimer {{ fill: #4a6fa5; stroke: #1f3b63; stroke-width: 1; }}
.dimer.vertical {{ fill: #c0504d; stroke: #7a2624; }}
.vertex.black {{ fill: #000; }}
.vertex.white {{ fill: #fff; stroke: #000; stroke-width: 0.8; }}
.missing {{ fill: #999; fill-opacity: 0.6; }}
.lozenge {{ stroke: #222; stroke-width: 0.6; }}
.face-x {{ fill: #e6b85c; }}
.face-y {{ fill: #7fb2d6; }}
.face-z {{ fill: #f2f2f2; }}
.seam {{ stroke: #c00; stroke-width: 1.5; stroke-dasharray: 4 3; }}
</style>"#
    );
}

/// Draws a cover: dimers as rounded rectangles (only those with both ends in
/// the window), vertices as dots by color, missing blocks as grey squares.
pub fn config_svg(cfg: &DimerConfig, missing: &[Block]) -> String {
    let w = cfg.window();
    let col = cfg.coloring();
    let px = |v: Vertex| MARGIN + f64::from(v.x - w.xmin) * CELL;
    let py = |v: Vertex| MARGIN + f64::from(w.ymax - v.y) * CELL;
    let width = 2.0 * MARGIN + (w.width() - 1) as f64 * CELL;
    let height = 2.0 * MARGIN + (w.height() - 1) as f64 * CELL;
    let mut out = String::new();
    header(&mut out, width, height);
    let pad = CELL * 0.3;
    for b in missing {
        let ul = b.upper_left();
        let _ = writeln!(
            out,
            r#"<rect class="missing" x="{:.1}" y="{:.1}" width="{:.1}" height="{:.1}"/>"#,
            px(ul) - pad,
            py(ul) - pad,
            CELL + 2.0 * pad,
            CELL + 2.0 * pad
        );
    }
    for d in cfg.interior_dimers() {
        let (a, b) = (d.u(), d.v());
        let (x0, x1) = (px(a).min(px(b)), px(a).max(px(b)));
        let (y0, y1) = (py(a).min(py(b)), py(a).max(py(b)));
        let kind = match d.orientation() {
            Orientation::Horizontal => "horizontal",
            Orientation::Vertical => "vertical",
        };
        let _ = writeln!(
            out,
            r#"<rect class="dimer {kind}" x="{:.1}" y="{:.1}" width="{:.1}" height="{:.1}" rx="{:.1}"/>"#,
            x0 - pad,
            y0 - pad,
            x1 - x0 + 2.0 * pad,
            y1 - y0 + 2.0 * pad,
            pad
        );
    }
    for v in w.vertices() {
        let shade = if col.is_black(v) { "black" } else { "white" };
        let _ = writeln!(
            out,
            r#"<circle class="vertex {shade}" cx="{:.1}" cy="{:.1}" r="3"/>"#,
            px(v),
            py(v)
        );
    }
    out.push_str("</svg>\n");
    out
}

/// Draws the upper half above the seam and the lower half mirrored below it,
/// as lozenges of the triangular lattice.
pub fn halfplanes_svg(upper: &HalfPlaneConfig, lower: &HalfPlaneConfig) -> String {
    let s3 = 3f64.sqrt() / 2.0;
    let win = upper.window;
    // Lattice point (a, b) sits at x = (a - b)·√3/2, y = (a + b)/2 (y up).
    let seam_y = -f64::from(win.seam) / 2.0;
    let x_half = f64::from(win.width + 2) * s3;
    let y_top = f64::from(win.top + 2) / 2.0;
    let y_bottom = 2.0 * seam_y - y_top;
    let scale = CELL;
    let width = 2.0 * MARGIN + 2.0 * x_half * scale;
    let height = 2.0 * MARGIN + (y_top - y_bottom) * scale;
    let map = |a: i32, b: i32, mirrored: bool| {
        let x = f64::from(a - b) * s3;
        let mut y = f64::from(a + b) / 2.0;
        if mirrored {
            y = 2.0 * seam_y - y;
        }
        (MARGIN + (x + x_half) * scale, MARGIN + (y_top - y) * scale)
    };
    let mut out = String::new();
    header(&mut out, width, height);
    for (half, mirrored) in [(upper, false), (lower, true)] {
        for l in &half.lozenges {
            let face = match l.face {
                Face::X => "face-x",
                Face::Y => "face-y",
                Face::Z => "face-z",
            };
            let pts: Vec<String> = l
                .corners()
                .iter()
                .map(|&(a, b)| {
                    let (x, y) = map(a, b, mirrored);
                    format!("{x:.2},{y:.2}")
                })
                .collect();
            let _ = writeln!(out, r#"<polygon class="lozenge {face}" points="{}"/>"#, pts.join(" "));
        }
    }
    let (_, sy) = map(0, -win.seam, false);
    let _ = writeln!(
        out,
        r#"<line class="seam" x1="{MARGIN:.1}" y1="{sy:.2}" x2="{:.2}" y2="{sy:.2}"/>"#,
        width - MARGIN
    );
    out.push_str("</svg>\n");
    out
}

pub fn write_file(path: &Path, contents: &str) -> Result<()> {
    std::fs::write(path, contents).map_err(|source| Error::Io { path: path.to_path_buf(), source })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::{Parity, Window};
    use crate::pyramid::empty_room;
    use crate::shuffle::delete_blocks;
    use crate::solid::{phi_render_halfplanes, PhiWindow, SuperRigid};

    #[test]
    fn empty_room_draws_every_interior_dimer() {
        let e = empty_room(1, Window::centered(4)).unwrap();
        let svg = config_svg(&e, &[]);
        assert_eq!(svg.matches(r#"class="dimer"#).count(), e.interior_dimers().len());
        assert_eq!(svg.matches("<circle").count(), e.window().len());
        assert!(svg.trim_end().ends_with("</svg>"));
    }

    #[test]
    fn missing_blocks_are_shaded() {
        let e = empty_room(3, Window::centered(6)).unwrap();
        let def = delete_blocks(&e, Parity::Odd);
        let svg = config_svg(def.config(), def.missing());
        assert_eq!(svg.matches(r#"class="missing""#).count(), 3);
    }

    #[test]
    fn halfplanes_draw_all_lozenges() {
        let (u, l) = phi_render_halfplanes(&SuperRigid::empty(), PhiWindow::square(4)).unwrap();
        let svg = halfplanes_svg(&u, &l);
        assert_eq!(svg.matches("<polygon").count(), u.lozenges.len() + l.lozenges.len());
    }
}
