//! Static SVG rendering of a point set and an optional certificate.

use std::fmt::Write;

use crossfam::families::Certificate;
use crossfam::{OrientedLine, PointId, PointSet};

const PALETTE: [&str; 8] = [
    "#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#17becf", "#8c564b", "#e377c2",
];

/// World-space box and its mapping onto a square canvas.
struct View {
    min: (f64, f64),
    max: (f64, f64),
    size: f64,
}

impl View {
    fn new(set: &PointSet, size: u32) -> View {
        let pts: Vec<(f64, f64)> = set.points().iter().map(|p| p.to_f64()).collect();
        let (mut lo, mut hi) = ((f64::MAX, f64::MAX), (f64::MIN, f64::MIN));
        for &(x, y) in &pts {
            lo = (lo.0.min(x), lo.1.min(y));
            hi = (hi.0.max(x), hi.1.max(y));
        }
        if pts.is_empty() {
            (lo, hi) = ((-1.0, -1.0), (1.0, 1.0));
        }
        // square box with a margin, so both axes share one scale
        let side = (hi.0 - lo.0).max(hi.1 - lo.1).max(1e-9) * 1.1;
        let c = ((lo.0 + hi.0) / 2.0, (lo.1 + hi.1) / 2.0);
        View {
            min: (c.0 - side / 2.0, c.1 - side / 2.0),
            max: (c.0 + side / 2.0, c.1 + side / 2.0),
            size: size as f64,
        }
    }

    fn map(&self, (x, y): (f64, f64)) -> (f64, f64) {
        let s = self.size / (self.max.0 - self.min.0);
        ((x - self.min.0) * s, (self.max.1 - y) * s)
    }

    /// The part of `line` inside the box, if any.
    fn clip(&self, line: &OrientedLine) -> Option<((f64, f64), (f64, f64))> {
        let p = line.p.to_f64();
        let q = line.q.to_f64();
        let d = (q.0 - p.0, q.1 - p.1);
        let (mut t0, mut t1) = (f64::NEG_INFINITY, f64::INFINITY);
        for (pc, dc, lo, hi) in [(p.0, d.0, self.min.0, self.max.0), (p.1, d.1, self.min.1, self.max.1)] {
            if dc == 0.0 {
                if pc < lo || pc > hi {
                    return None;
                }
                continue;
            }
            let (a, b) = ((lo - pc) / dc, (hi - pc) / dc);
            t0 = t0.max(a.min(b));
            t1 = t1.min(a.max(b));
        }
        (t0 < t1).then_some(((p.0 + t0 * d.0, p.1 + t0 * d.1), (p.0 + t1 * d.0, p.1 + t1 * d.1)))
    }
}

fn part_colors(set: &PointSet, cert: Option<&Certificate>) -> Vec<Option<usize>> {
    let mut color = vec![None; set.len()];
    let mut paint = |parts: &[Vec<PointId>]| {
        for (i, part) in parts.iter().enumerate() {
            for id in part {
                if let Some(c) = color.get_mut(id.0) {
                    *c = Some(i % PALETTE.len());
                }
            }
        }
    };
    match cert {
        Some(Certificate::NoncrossingFamily(f)) => paint(&f.parts),
        Some(Certificate::ConvexBundle(b)) => paint(&b.parts),
        Some(Certificate::CrossingFamily(f)) => {
            if let Some(sides) = &f.sides {
                paint(sides);
            }
        }
        _ => {}
    }
    color
}

/// Points as disks, crossing segments as strokes, spoke lines clipped to
/// the canvas, parts coloured by class.
pub fn render(set: &PointSet, cert: Option<&Certificate>, size: u32) -> String {
    let view = View::new(set, size);
    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{size}" height="{size}" viewBox="0 0 {size} {size}">"#
    );
    let _ = writeln!(s, r#"<rect width="{size}" height="{size}" fill="white"/>"#);
    match cert {
        Some(Certificate::SpokeSet(l)) => {
            for line in &l.lines {
                if let Some((a, b)) = view.clip(line) {
                    let (a, b) = (view.map(a), view.map(b));
                    let _ = writeln!(
                        s,
                        r##"<line class="spoke" x1="{:.3}" y1="{:.3}" x2="{:.3}" y2="{:.3}" stroke="#888888" stroke-width="1"/>"##,
                        a.0, a.1, b.0, b.1
                    );
                }
            }
        }
        Some(Certificate::CrossingFamily(f)) => {
            for &(p, q) in &f.segments {
                if !(set.contains(p) && set.contains(q)) {
                    continue;
                }
                let (a, b) = (view.map(set.get(p).to_f64()), view.map(set.get(q).to_f64()));
                let _ = writeln!(
                    s,
                    r##"<line class="segment" x1="{:.3}" y1="{:.3}" x2="{:.3}" y2="{:.3}" stroke="#333333" stroke-width="1.5"/>"##,
                    a.0, a.1, b.0, b.1
                );
            }
        }
        _ => {}
    }
    for (p, c) in set.points().iter().zip(part_colors(set, cert)) {
        let (x, y) = view.map(p.to_f64());
        let fill = c.map_or("#000000", |i| PALETTE[i]);
        let _ = writeln!(s, r#"<circle cx="{x:.3}" cy="{y:.3}" r="3" fill="{fill}"/>"#);
    }
    s.push_str("</svg>\n");
    s
}
