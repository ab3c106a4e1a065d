use std::fmt::Write;

use super::Streamline;

/// Drawing options for [`render_svg`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SvgStyle {
    /// Width and height of the picture in pixels.
    pub size: u32,
    /// An arrowhead is drawn on every `arrow_every`-th segment of a line.
    pub arrow_every: usize,
    pub arrow_size: f64,
    pub stroke_width: f64,
}

impl Default for SvgStyle {
    fn default() -> Self {
        SvgStyle {
            size: 600,
            arrow_every: 25,
            arrow_size: 0.025,
            stroke_width: 0.004,
        }
    }
}

/// Streamlines inside the unit circle, `x1` to the right and `x2` up.
pub fn render_svg(lines: &[Streamline], style: &SvgStyle) -> String {
    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{0}" height="{0}" viewBox="-1.1 -1.1 2.2 2.2">"#,
        style.size
    );
    let _ = writeln!(
        out,
        r#"<circle cx="0" cy="0" r="1" fill="none" stroke="black" stroke-width="{:.4}"/>"#,
        style.stroke_width
    );
    for line in lines {
        if line.points.len() < 2 {
            continue;
        }
        out.push_str(r#"<polyline fill="none" stroke="steelblue" stroke-width=""#);
        let _ = write!(out, "{:.4}", style.stroke_width);
        out.push_str(r#"" points=""#);
        for (k, p) in line.points.iter().enumerate() {
            if k > 0 {
                out.push(' ');
            }
            let _ = write!(out, "{:.6},{:.6}", p.x1, -p.x2);
        }
        out.push_str("\"/>\n");
        if style.arrow_every == 0 {
            continue;
        }
        for (k, w) in line.points.windows(2).enumerate() {
            if k % style.arrow_every != style.arrow_every / 2 {
                continue;
            }
            let (dx, dy) = (w[1].x1 - w[0].x1, -(w[1].x2 - w[0].x2));
            let len = dx.hypot(dy);
            if len == 0.0 {
                continue;
            }
            let (ux, uy) = (dx / len, dy / len);
            let (tx, ty) = (w[1].x1, -w[1].x2);
            let s = style.arrow_size;
            let (bx, by) = (tx - s * ux, ty - s * uy);
            let _ = writeln!(
                out,
                r#"<polygon fill="steelblue" points="{:.6},{:.6} {:.6},{:.6} {:.6},{:.6}"/>"#,
                tx,
                ty,
                bx - 0.4 * s * uy,
                by + 0.4 * s * ux,
                bx + 0.4 * s * uy,
                by - 0.4 * s * ux
            );
        }
    }
    out.push_str("</svg>\n");
    out
}
