//! Plain-text scene dump for `geo run`.

use std::fmt::Write as _;

use geokernel::construction::{Figure, Scene, SceneObject, Value};
use geokernel::dsl::format_number;
use geokernel::geom::HPoint;

fn pt(p: &HPoint) -> String {
    match p.affine() {
        Some([x, y]) => format!("({}, {})", format_number(x), format_number(y)),
        None => {
            let [dx, dy, _] = p.coords();
            format!("(at infinity, direction {}, {})", format_number(dx), format_number(dy))
        }
    }
}

fn xy(p: [f64; 2]) -> String {
    format!("({}, {})", format_number(p[0]), format_number(p[1]))
}

/// Side lengths of a polygon, flagged when they all agree to 1e-9.
fn polygon_note(pts: &[HPoint]) -> String {
    let v: Vec<[f64; 2]> = pts.iter().filter_map(HPoint::affine).collect();
    if v.len() != pts.len() || v.len() < 3 {
        return String::new();
    }
    let sides: Vec<f64> = (0..v.len())
        .map(|i| {
            let (a, b) = (v[i], v[(i + 1) % v.len()]);
            (a[0] - b[0]).hypot(a[1] - b[1])
        })
        .collect();
    let (lo, hi) = sides
        .iter()
        .fold((f64::INFINITY, 0.0f64), |(lo, hi), s| (lo.min(*s), hi.max(*s)));
    let list = sides.iter().map(|s| format_number(*s)).collect::<Vec<_>>().join(", ");
    if hi - lo < 1e-9 {
        let name = if v.len() == 3 { "equilateral" } else { "equal sides" };
        format!(" sides {list} [{name}]")
    } else {
        format!(" sides {list}")
    }
}

fn describe(o: &SceneObject) -> String {
    let Some(v) = &o.value else {
        let why = o.reason.as_deref().unwrap_or("unknown reason");
        return format!("does not exist ({why})");
    };
    match v {
        Value::Point(p) => pt(p),
        Value::Line(l) => {
            let [a, b, c] = l.line.coords();
            let eq = format!(
                "{}x + {}y + {} = 0",
                format_number(a),
                format_number(b),
                format_number(c)
            );
            match l.frame {
                Some([p, q]) => format!("{eq} through {} {}", xy(p), xy(q)),
                None => "line at infinity".into(),
            }
        }
        Value::Circle(c) => format!("center {} radius {}", xy([c.cx, c.cy]), format_number(c.r)),
        Value::Conic(c) => {
            let k: Vec<String> = c.coeffs().iter().map(|x| format_number(*x)).collect();
            format!("coefficients [{}]", k.join(", "))
        }
        Value::Scalar(x) => format_number(*x),
        Value::Polygon(pts) => {
            let list: Vec<String> = pts.iter().map(pt).collect();
            format!("{}{}", list.join(" "), polygon_note(pts))
        }
        Value::Locus(poly) => {
            let total = poly.samples.len();
            let present = poly.points().count();
            let shape = if poly.closed { "closed" } else { "open" };
            format!("{present}/{total} samples, {} run(s), {shape}", poly.runs().len())
        }
    }
}

/// Toolset, construction protocol, then every object with its value.
pub fn text(fig: &Figure, scene: &Scene) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "toolset {}", fig.toolset.name);
    let _ = writeln!(out, "\nprotocol");
    for line in fig.protocol() {
        let _ = writeln!(out, "  {line}");
    }
    let _ = writeln!(out, "\nobjects");
    let width = scene.objects.keys().map(String::len).max().unwrap_or(0);
    for o in scene.objects.values() {
        let _ = writeln!(out, "  {:width$}  {:8} {}", o.id, o.ty.name(), describe(o));
    }
    let violations = fig.check_toolset();
    if !violations.is_empty() {
        let _ = writeln!(out, "\ntoolset violations");
        for v in violations {
            let _ = writeln!(out, "  {} uses {}", v.step, v.tool);
        }
    }
    out
}
