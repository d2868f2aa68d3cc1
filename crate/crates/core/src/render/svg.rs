use std::fmt::Write;

use super::{view_model, Legend, Swatch, ViewModel, ViewSpec};
use crate::atlas::Atlas;
use crate::error::Result;
use crate::exec::Execution;
use crate::topology::{ArcCategory, ArcRef, QPoint};

const MARGIN: f64 = 0.05;
const ROW: f64 = 16.0;
const SWATCH: f64 = 12.0;

/// Grid-to-pixel mapping: uniform scale, y flipped, centred with a 5% margin.
struct Frame {
    scale: f64,
    dx: f64,
    dy: f64,
}

impl Frame {
    fn fit(points: impl Iterator<Item = QPoint>, width: f64, height: f64) -> Frame {
        let (mut x0, mut y0, mut x1, mut y1) = (i64::MAX, i64::MAX, i64::MIN, i64::MIN);
        for p in points {
            x0 = x0.min(p.x);
            y0 = y0.min(p.y);
            x1 = x1.max(p.x);
            y1 = y1.max(p.y);
        }
        let (bw, bh) = (((x1 - x0) as f64).max(1.0), ((y1 - y0) as f64).max(1.0));
        let scale = (width * (1.0 - 2.0 * MARGIN) / bw).min(height * (1.0 - 2.0 * MARGIN) / bh);
        Frame {
            scale,
            dx: (width - bw * scale) / 2.0 - x0 as f64 * scale,
            dy: (height + bh * scale) / 2.0 + y0 as f64 * scale,
        }
    }

    fn apply(&self, p: QPoint) -> (f64, f64) {
        (self.dx + p.x as f64 * self.scale, self.dy - p.y as f64 * self.scale)
    }
}

/// Fixed two-decimal number with negative zero folded to zero.
fn num(v: f64) -> String {
    let s = format!("{v:.2}");
    if s == "-0.00" {
        "0.00".into()
    } else {
        s
    }
}

fn path_data(frame: &Frame, rings: impl IntoIterator<Item = Vec<QPoint>>, close: bool) -> String {
    let mut d = String::new();
    for ring in rings {
        let n = if close && ring.len() > 1 && ring.first() == ring.last() {
            ring.len() - 1
        } else {
            ring.len()
        };
        for (k, &p) in ring[..n].iter().enumerate() {
            let (x, y) = frame.apply(p);
            let _ = write!(d, "{}{} {}", if k == 0 { "M" } else { "L" }, num(x), num(y));
        }
        if close {
            d.push('Z');
        }
    }
    d
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;").replace('"', "&quot;")
}

/// Renders one view of an atlas as an SVG 1.1 document.
///
/// Element order is fixed: hatch pattern (only if a textured county is
/// visible), county fills by fips, hatch overlays, boundary arcs grouped in
/// painter's order with dissolved region outlines drawn after the region
/// boundaries, then the legend.
pub fn render_map(atlas: &Atlas, spec: &ViewSpec) -> Result<String> {
    let vm = view_model(atlas, spec, Execution::default())?;
    Ok(write_svg(atlas, spec, &vm))
}

fn write_svg(atlas: &Atlas, spec: &ViewSpec, vm: &ViewModel) -> String {
    let topo = atlas.topology();
    let style = &spec.style;
    let (w, h) = (spec.width as f64, spec.height as f64);
    let frame = Frame::fit(
        vm.counties.iter().flat_map(|&i| topo.expand_county(i)).flatten(),
        w,
        h,
    );
    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{0}" height="{1}" viewBox="0 0 {0} {1}">"#,
        spec.width, spec.height
    );

    if vm.textured() {
        let hs = &style.hatch;
        let _ = writeln!(
            out,
            r#"<defs><pattern id="hatch" patternUnits="userSpaceOnUse" width="{s}" height="{s}" patternTransform="rotate({a})"><line x1="0" y1="0" x2="0" y2="{s}" stroke="{c}" stroke-width="{sw}" stroke-opacity="{o}"/></pattern></defs>"#,
            s = hs.spacing,
            a = hs.angle,
            c = hs.color,
            sw = hs.stroke_width,
            o = hs.opacity
        );
    }

    out.push_str("<g class=\"fills\">\n");
    for (&i, s) in vm.counties.iter().zip(&vm.styles) {
        let c = &atlas.counties()[i];
        let _ = writeln!(
            out,
            r#"<path class="county" data-fips="{}" fill="{}" fill-rule="evenodd" d="{}"/>"#,
            escape(&c.fips),
            s.fill.color(style),
            path_data(&frame, topo.expand_county(i), true)
        );
    }
    out.push_str("</g>\n");

    if vm.textured() {
        out.push_str("<g class=\"texture\">\n");
        for (&i, _) in vm.counties.iter().zip(&vm.styles).filter(|(_, s)| s.texture) {
            let _ = writeln!(
                out,
                r#"<path class="hatch" data-fips="{}" fill="url(#hatch)" fill-rule="evenodd" d="{}"/>"#,
                escape(&atlas.counties()[i].fips),
                path_data(&frame, topo.expand_county(i), true)
            );
        }
        out.push_str("</g>\n");
    }

    for category in ArcCategory::PAINT_ORDER {
        let width = match category {
            ArcCategory::CountyInterior => style.strokes.county,
            ArcCategory::RegionBoundary => style.strokes.region,
            ArcCategory::StateBoundary => style.strokes.state,
            ArcCategory::NationalOutline => style.strokes.national,
        };
        let _ = writeln!(
            out,
            r#"<g class="{}" fill="none" stroke="{}" stroke-width="{}" stroke-linejoin="round">"#,
            category.css_class(),
            style.line_color,
            width
        );
        for &(arc, _) in vm.arcs.iter().filter(|(_, c)| *c == category) {
            let pts: Vec<QPoint> = topo.arc_points(ArcRef::forward(arc)).collect();
            let _ = writeln!(out, r#"<path data-arc="{arc}" d="{}"/>"#, path_data(&frame, [pts], false));
        }
        out.push_str("</g>\n");
        if category == ArcCategory::RegionBoundary {
            let _ = writeln!(
                out,
                r#"<g class="outlines" fill="none" stroke="{}" stroke-width="{}" stroke-linejoin="round">"#,
                style.line_color, style.strokes.region
            );
            for o in &vm.outlines {
                let _ = writeln!(
                    out,
                    r#"<path class="outline" data-kind="{}" data-region="{}" fill-rule="evenodd" d="{}"/>"#,
                    o.kind,
                    escape(&o.code),
                    path_data(&frame, o.shape.rings.iter().cloned(), true)
                );
            }
            out.push_str("</g>\n");
        }
    }

    write_legend(&mut out, &vm.legend, spec);
    out.push_str("</svg>\n");
    out
}

fn write_legend(out: &mut String, legend: &Legend, spec: &ViewSpec) {
    let style = &spec.style;
    let height = ROW * (legend.entries.len() as f64 + 1.0);
    let _ = writeln!(
        out,
        r#"<g class="legend" transform="translate(10 {})" font-family="sans-serif" font-size="11" fill="{}">"#,
        num((spec.height as f64 - height - 10.0).max(0.0)),
        style.line_color
    );
    let _ = writeln!(out, r#"<text x="0" y="{}">{}</text>"#, num(SWATCH - 1.0), escape(&legend.title));
    for (k, entry) in legend.entries.iter().enumerate() {
        let y = ROW * (k as f64 + 1.0);
        match &entry.swatch {
            Swatch::Fill { color, .. } | Swatch::Neutral { color } => {
                let _ = writeln!(
                    out,
                    r#"<rect x="0" y="{}" width="{SWATCH}" height="{SWATCH}" fill="{color}" stroke="{}" stroke-width="0.5"/>"#,
                    num(y),
                    style.line_color
                );
            }
            Swatch::Hatch => {
                let _ = write!(
                    out,
                    r#"<g class="hatch-swatch" stroke="{}" stroke-width="{}" stroke-opacity="{}">"#,
                    style.hatch.color, style.hatch.stroke_width, style.hatch.opacity
                );
                for t in [0.0, SWATCH / 2.0] {
                    let _ = write!(
                        out,
                        r#"<line x1="{}" y1="{}" x2="{}" y2="{}"/>"#,
                        num(t),
                        num(y + SWATCH),
                        num(t + SWATCH / 2.0),
                        num(y + SWATCH / 2.0)
                    );
                }
                let _ = writeln!(
                    out,
                    r#"<line x1="0" y1="{}" x2="{SWATCH}" y2="{}"/></g>"#,
                    num(y + SWATCH / 2.0),
                    num(y)
                );
            }
            Swatch::Line { width, .. } => {
                let _ = writeln!(
                    out,
                    r#"<line x1="0" y1="{y1}" x2="{SWATCH}" y2="{y1}" stroke="{}" stroke-width="{width}"/>"#,
                    style.line_color,
                    y1 = num(y + SWATCH / 2.0)
                );
            }
        }
        let _ = writeln!(
            out,
            r#"<text x="{}" y="{}">{}</text>"#,
            num(SWATCH + 6.0),
            num(y + SWATCH - 1.0),
            escape(&entry.label)
        );
    }
    out.push_str("</g>\n");
}
