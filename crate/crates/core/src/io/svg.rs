use std::fmt::Write;

use crate::assemble::{MissionPath, SegmentTag};
use crate::geom::{Point2, Polygon};
use crate::model::ProblemInstance;

const MARGIN_M: f64 = 5.0;
const TARGET_PX: f64 = 1000.0;

struct View {
    lo: Point2,
    hi: Point2,
    scale: f64,
}

impl View {
    fn x(&self, p: Point2) -> f64 {
        (p.x - self.lo.x + MARGIN_M) * self.scale
    }

    fn y(&self, p: Point2) -> f64 {
        (self.hi.y - p.y + MARGIN_M) * self.scale
    }

    fn points(&self, poly: &Polygon) -> String {
        poly.vertices()
            .iter()
            .map(|&p| format!("{:.3},{:.3}", self.x(p), self.y(p)))
            .collect::<Vec<_>>()
            .join(" ")
    }
}

fn class_of(tag: SegmentTag) -> usize {
    match tag {
        SegmentTag::Transit => 0,
        SegmentTag::Detour => 1,
        SegmentTag::Coverage(_) => 2,
    }
}

/// Top-down drawing of the field, obstacles, numbered patches and the
/// mission path. The output is a pure function of its inputs.
pub fn render_svg(instance: &ProblemInstance, path: &MissionPath) -> String {
    let (lo, hi) = instance.field.bbox();
    let span = (hi.x - lo.x).max(hi.y - lo.y) + 2.0 * MARGIN_M;
    let view = View {
        lo,
        hi,
        scale: TARGET_PX / span,
    };
    let w = (hi.x - lo.x + 2.0 * MARGIN_M) * view.scale;
    let h = (hi.y - lo.y + 2.0 * MARGIN_M) * view.scale;
    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{w:.3}" height="{h:.3}" viewBox="0 0 {w:.3} {h:.3}">"#
    );
    let _ = writeln!(s, r##"<rect width="100%" height="100%" fill="#ffffff"/>"##);
    let _ = writeln!(
        s,
        r##"<polygon class="field" points="{}" fill="#f3f7ea" stroke="#000000" stroke-width="2"/>"##,
        view.points(&instance.field)
    );
    for o in &instance.obstacles {
        let _ = writeln!(
            s,
            r##"<polygon class="obstacle" points="{}" fill="#d62728" stroke="#8b0000" stroke-width="1"/>"##,
            view.points(o)
        );
    }
    for (i, p) in instance.patches.iter().enumerate() {
        let _ = writeln!(
            s,
            r##"<polygon class="patch" points="{}" fill="#9e9e9e" fill-opacity="0.6" stroke="#555555" stroke-width="1"/>"##,
            view.points(p)
        );
        let c = p.centroid();
        let _ = writeln!(
            s,
            r##"<text class="label" x="{:.3}" y="{:.3}" font-size="14" text-anchor="middle" fill="#000000">{}</text>"##,
            view.x(c),
            view.y(c),
            i + 1
        );
    }

    let pts = path.waypoints.waypoints();
    let mut d = [String::new(), String::new(), String::new()];
    let mut prev: Option<usize> = None;
    for (k, tag) in path.segment_tags.iter().enumerate() {
        let cls = class_of(*tag);
        let (a, b) = (pts[k], pts[k + 1]);
        if prev != Some(cls) {
            let _ = write!(d[cls], "M{:.3} {:.3} ", view.x(a), view.y(a));
        }
        let _ = write!(d[cls], "L{:.3} {:.3} ", view.x(b), view.y(b));
        prev = Some(cls);
    }
    for (cls, (name, color)) in [("transit", "#1f77b4"), ("detour", "#ff7f0e"), ("coverage", "#2ca02c")]
        .iter()
        .enumerate()
    {
        if d[cls].is_empty() {
            continue;
        }
        let _ = writeln!(
            s,
            r#"<path class="{name}" d="{}" fill="none" stroke="{color}" stroke-width="2" stroke-linejoin="round"/>"#,
            d[cls].trim_end()
        );
    }
    let e = instance.entrance;
    let _ = writeln!(
        s,
        r##"<circle class="entrance" cx="{:.3}" cy="{:.3}" r="6" fill="#000000"/>"##,
        view.x(e),
        view.y(e)
    );
    s.push_str("</svg>\n");
    s
}
