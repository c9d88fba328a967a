//! CSV and SVG output for traces.

use std::fmt::Write as _;

use geokernel::construction::{LineValue, ObjType, Polyline, Scene, Value};
use geokernel::dsl::format_number;

/// One row per sample: `t,x,y,exists`. Missing samples leave x and y
/// empty. Output is a pure function of the samples.
pub fn csv(poly: &Polyline) -> String {
    let mut out = String::from("t,x,y,exists\n");
    for s in &poly.samples {
        match s.point {
            Some([x, y]) => {
                let _ = writeln!(
                    out,
                    "{},{},{},true",
                    format_number(s.t),
                    format_number(x),
                    format_number(y)
                );
            }
            None => {
                let _ = writeln!(out, "{},,,false", format_number(s.t));
            }
        }
    }
    out
}

/// Axis-aligned box in figure coordinates.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Bounds {
    pub min: [f64; 2],
    pub max: [f64; 2],
}

impl Bounds {
    fn empty() -> Self {
        Self {
            min: [f64::INFINITY; 2],
            max: [f64::NEG_INFINITY; 2],
        }
    }

    fn add(&mut self, p: [f64; 2]) {
        if p[0].is_finite() && p[1].is_finite() {
            for i in 0..2 {
                self.min[i] = self.min[i].min(p[i]);
                self.max[i] = self.max[i].max(p[i]);
            }
        }
    }

    fn is_empty(&self) -> bool {
        self.min[0] > self.max[0]
    }

    /// Grows each side by `frac` of the box's extent along that axis. A flat
    /// axis borrows the other axis's extent, or 1 if both are flat.
    pub fn padded(&self, frac: f64) -> Self {
        let (w, h) = (self.max[0] - self.min[0], self.max[1] - self.min[1]);
        let fallback = if w.max(h) > 0.0 { w.max(h) } else { 1.0 };
        let w = if w > 0.0 { w } else { fallback };
        let h = if h > 0.0 { h } else { fallback };
        Self {
            min: [self.min[0] - frac * w, self.min[1] - frac * h],
            max: [self.max[0] + frac * w, self.max[1] + frac * h],
        }
    }
}

/// Box around every finite drawable part of the scene and the trace.
/// Full lines and rays count only by their frame points.
pub fn bounds(scene: &Scene, trace: Option<&Polyline>) -> Bounds {
    let mut b = Bounds::empty();
    for o in scene.objects.values() {
        match &o.value {
            Some(Value::Point(p)) => {
                if let Some(x) = p.affine() {
                    b.add(x);
                }
            }
            Some(Value::Line(l)) => {
                if let Some([p, q]) = l.frame {
                    b.add(p);
                    b.add(q);
                }
            }
            Some(Value::Circle(c)) => {
                b.add([c.cx - c.r, c.cy - c.r]);
                b.add([c.cx + c.r, c.cy + c.r]);
            }
            Some(Value::Polygon(pts)) => pts.iter().filter_map(|p| p.affine()).for_each(|p| b.add(p)),
            Some(Value::Locus(poly)) => poly.points().for_each(|p| b.add(p)),
            _ => {}
        }
    }
    if let Some(t) = trace {
        t.points().for_each(|p| b.add(p));
    }
    if b.is_empty() {
        b.add([0.0, 0.0]);
    }
    b
}

fn f(x: f64) -> String {
    let s = format!("{x:.6}");
    let s = s.trim_end_matches('0').trim_end_matches('.');
    if s == "-0" {
        "0".into()
    } else {
        s.into()
    }
}

/// SVG y grows downward, so every y is negated.
fn xy(p: [f64; 2]) -> String {
    format!("{},{}", f(p[0]), f(-p[1]))
}

/// Clips `p + t d` for `t` in `[lo, hi]` to the box.
fn clip(p: [f64; 2], d: [f64; 2], mut lo: f64, mut hi: f64, b: &Bounds) -> Option<([f64; 2], [f64; 2])> {
    for i in 0..2 {
        if d[i].abs() < 1e-300 {
            if p[i] < b.min[i] || p[i] > b.max[i] {
                return None;
            }
            continue;
        }
        let (t0, t1) = ((b.min[i] - p[i]) / d[i], (b.max[i] - p[i]) / d[i]);
        lo = lo.max(t0.min(t1));
        hi = hi.min(t0.max(t1));
    }
    (lo <= hi).then(|| {
        let at = |t: f64| [p[0] + t * d[0], p[1] + t * d[1]];
        (at(lo), at(hi))
    })
}

fn line_element(l: &LineValue, b: &Bounds) -> Option<String> {
    let [p, q] = l.frame?;
    let d = [q[0] - p[0], q[1] - p[1]];
    let (lo, hi) = match l.kind {
        ObjType::Segment => (0.0, 1.0),
        ObjType::Ray => (0.0, f64::INFINITY),
        _ => (f64::NEG_INFINITY, f64::INFINITY),
    };
    let (a, c) = clip(p, d, lo, hi, b)?;
    Some(format!(
        r#"<line x1="{}" y1="{}" x2="{}" y2="{}"/>"#,
        f(a[0]),
        f(-a[1]),
        f(c[0]),
        f(-c[1])
    ))
}

fn polylines(poly: &Polyline, class: &str, out: &mut String) {
    for run in poly.runs() {
        if run.len() < 2 {
            continue;
        }
        let pts: Vec<String> = run.iter().map(|p| xy(*p)).collect();
        let _ = writeln!(out, r#"    <polyline class="{class}" points="{}"/>"#, pts.join(" "));
    }
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
        .replace('"', "&quot;")
}

/// The static construction plus the trace, one polyline per run of
/// existing samples. The view box is the bounding box with a 5% margin.
pub fn svg(scene: &Scene, trace: &Polyline) -> String {
    let b = bounds(scene, Some(trace)).padded(0.05);
    let (w, h) = (b.max[0] - b.min[0], b.max[1] - b.min[1]);
    let stroke = w.max(h) * 0.003;
    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" viewBox="{} {} {} {}">"#,
        f(b.min[0]),
        f(-b.max[1]),
        f(w),
        f(h)
    );
    let _ = writeln!(
        out,
        r#"  <g class="construction" fill="none" stroke="gray" stroke-width="{}">"#,
        f(stroke)
    );
    let mut dots = Vec::new();
    for o in scene.objects.values() {
        let id = escape(&o.id);
        match &o.value {
            Some(Value::Point(p)) => {
                if let Some(x) = p.affine() {
                    dots.push((id, x));
                }
            }
            Some(Value::Line(l)) => {
                if let Some(e) = line_element(l, &b) {
                    let _ = writeln!(out, r#"    <g id="{id}">{e}</g>"#);
                }
            }
            Some(Value::Circle(c)) => {
                let _ = writeln!(
                    out,
                    r#"    <circle id="{id}" cx="{}" cy="{}" r="{}"/>"#,
                    f(c.cx),
                    f(-c.cy),
                    f(c.r)
                );
            }
            Some(Value::Polygon(pts)) => {
                let pts: Vec<String> = pts.iter().filter_map(|p| p.affine()).map(xy).collect();
                let _ = writeln!(out, r#"    <polygon id="{id}" points="{}"/>"#, pts.join(" "));
            }
            Some(Value::Locus(poly)) => polylines(poly, "locus", &mut out),
            // conics and scalars have no static drawing
            _ => {}
        }
    }
    out.push_str("  </g>\n");
    let _ = writeln!(
        out,
        r#"  <g class="trace" fill="none" stroke="crimson" stroke-width="{}">"#,
        f(stroke * 1.5)
    );
    polylines(trace, "trace", &mut out);
    out.push_str("  </g>\n");
    let _ = writeln!(out, r#"  <g class="points" fill="black">"#);
    for (id, p) in dots {
        let _ = writeln!(
            out,
            r#"    <circle id="{id}" cx="{}" cy="{}" r="{}"/>"#,
            f(p[0]),
            f(-p[1]),
            f(stroke * 2.0)
        );
    }
    out.push_str("  </g>\n</svg>\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use geokernel::construction::Sample;

    #[test]
    fn csv_marks_missing_samples() {
        let poly = Polyline {
            samples: vec![
                Sample {
                    t: 0.0,
                    point: Some([1.0, 0.5]),
                },
                Sample { t: 0.5, point: None },
            ],
            closed: false,
        };
        assert_eq!(csv(&poly), "t,x,y,exists\n0,1,0.5,true\n0.5,,,false\n");
    }

    #[test]
    fn clipping() {
        let b = Bounds {
            min: [0.0, 0.0],
            max: [2.0, 1.0],
        };
        let (a, c) = clip([-1.0, 0.5], [1.0, 0.0], f64::NEG_INFINITY, f64::INFINITY, &b).unwrap();
        assert_eq!((a, c), ([0.0, 0.5], [2.0, 0.5]));
        assert!(clip([-1.0, 3.0], [1.0, 0.0], f64::NEG_INFINITY, f64::INFINITY, &b).is_none());
        let (a, c) = clip([1.0, 0.5], [1.0, 0.0], 0.0, f64::INFINITY, &b).unwrap();
        assert_eq!((a, c), ([1.0, 0.5], [2.0, 0.5]));
    }

    #[test]
    fn padding_of_flat_boxes() {
        let b = Bounds {
            min: [0.0, 1.0],
            max: [2.0, 1.0],
        }
        .padded(0.05);
        assert_eq!(b.min, [-0.1, 0.9]);
        let b = Bounds {
            min: [3.0, 3.0],
            max: [3.0, 3.0],
        }
        .padded(0.05);
        assert_eq!(b.max, [3.05, 3.05]);
    }
}
