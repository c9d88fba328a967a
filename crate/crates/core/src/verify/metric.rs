use std::f64::consts::TAU;

use nalgebra::Matrix3;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use super::{dist, load, Check};
use crate::construction::{drag, BranchState, Value};
use crate::corpus;
use crate::geom::{cross_ratio, intersect, Circle, Conic, Curve, GenCircle, HLine, HPoint};
use crate::transforms::{
    harmonic_conjugate, ideal_chord, ideal_common_secant, invert_gencircle, invert_point, ns_composition, polar,
};

const TRIALS: usize = 1000;

fn random_circle(rng: &mut ChaCha8Rng) -> Circle {
    Circle::new(
        rng.gen_range(-3.0..3.0),
        rng.gen_range(-3.0..3.0),
        rng.gen_range(0.5..3.0),
    )
    .expect("positive radius")
}

fn on_circle(c: &Circle, theta: f64) -> [f64; 2] {
    [c.cx + c.r * theta.cos(), c.cy + c.r * theta.sin()]
}

/// Rotated, translated ellipse with semi-axes in `[0.5, 3)`.
fn random_ellipse(rng: &mut ChaCha8Rng) -> (Conic, Matrix3<f64>) {
    let (a, b) = (rng.gen_range(0.5..3.0), rng.gen_range(0.5..3.0));
    let th: f64 = rng.gen_range(0.0..TAU);
    let (s, c) = th.sin_cos();
    let h = Matrix3::new(
        c * a,
        -s * b,
        rng.gen_range(-2.0..2.0),
        s * a,
        c * b,
        rng.gen_range(-2.0..2.0),
        0.0,
        0.0,
        1.0,
    );
    let unit = Conic::from_coeffs(1.0, 0.0, 1.0, 0.0, 0.0, -1.0);
    (unit.transformed(&h).expect("invertible"), h)
}

fn apply(h: &Matrix3<f64>, p: [f64; 2]) -> HPoint {
    let v = h * nalgebra::Vector3::new(p[0], p[1], 1.0);
    HPoint::new(v[0], v[1], v[2])
}

/// Same line up to scale and sign, compared on max-abs normalized triples.
fn line_gap(l: &HLine, m: &HLine) -> f64 {
    let (a, b) = (l.coords(), m.coords());
    let plus = (0..3).map(|i| (a[i] - b[i]).abs()).fold(0.0, f64::max);
    let minus = (0..3).map(|i| (a[i] + b[i]).abs()).fold(0.0, f64::max);
    plus.min(minus)
}

fn rel(a: [f64; 2], b: [f64; 2]) -> f64 {
    dist(a, b) / b[0].hypot(b[1]).max(1.0)
}

pub(super) fn harmonic(rng: &mut ChaCha8Rng) -> Vec<Check> {
    let mut worst = 0.0f64;
    let mut failures = 0;
    for _ in 0..TRIALS {
        let c = random_circle(rng);
        let th: f64 = rng.gen_range(0.0..TAU);
        let rho = if rng.gen_bool(0.5) {
            rng.gen_range(0.1..0.9)
        } else {
            rng.gen_range(1.1..5.0)
        };
        let p = HPoint::finite(c.cx + rho * c.r * th.cos(), c.cy + rho * c.r * th.sin());
        let diameter = c.center().join(&p);
        let r = (|| {
            let ends = intersect(&Curve::Line(diameter), &Curve::Circle(c)).ok()?.points;
            let q = invert_point(&c, &p).ok()?;
            cross_ratio(&ends[0], &ends[1], &p, &q).ok()
        })();
        match r {
            Some(x) => worst = worst.max((x + 1.0).abs()),
            None => failures += 1,
        }
    }
    let mut out = vec![Check::below("inverse pairs split a diameter harmonically", worst, 1e-9)
        .with_note(format!("{TRIALS} trials, max |cr + 1|"))];
    if failures > 0 {
        out.push(Check::failed("harmonic trials evaluated", format!("{failures} failed")));
    }

    let mut worst = 0.0f64;
    let mut count = 0;
    for _ in 0..20 {
        let (conic, h) = random_ellipse(rng);
        let phi: f64 = rng.gen_range(0.0..TAU);
        let rho = rng.gen_range(1.5..4.0);
        let p = apply(&h, [rho * phi.cos(), rho * phi.sin()]);
        let Ok(pl) = polar(&conic, &p) else {
            return vec![Check::failed("polar is the harmonic locus", "polar failed")];
        };
        for _ in 0..50 {
            let psi: f64 = rng.gen_range(0.0..TAU);
            let s = rng.gen_range(0.0..0.9);
            let q = apply(&h, [s * psi.cos(), s * psi.sin()]);
            let secant = p.join(&q);
            let hit = intersect(&Curve::Line(secant), &Curve::Conic(conic)).ok();
            let res = hit
                .filter(|x| x.points.len() == 2)
                .and_then(|x| harmonic_conjugate(&x.points[0], &x.points[1], &p).ok())
                .and_then(|m| m.affine())
                .and_then(|m| pl.signed_distance(m));
            match res {
                Some(d) => worst = worst.max(d.abs()),
                None => return vec![Check::failed("polar is the harmonic locus", "secant failed")],
            }
            count += 1;
        }
    }
    out.push(
        Check::below("polar is the locus of harmonic conjugates", worst, 1e-8)
            .with_note(format!("{count} secants over 20 ellipses, max distance to polar")),
    );
    out
}

pub(super) fn inversion(rng: &mut ChaCha8Rng) -> Vec<Check> {
    let (mut invol, mut fixed, mut orth, mut classify) = (0.0f64, 0.0f64, 0.0f64, 0.0f64);
    let mut wrong_kind = 0;
    let mut errors = 0;
    for _ in 0..TRIALS {
        let c = random_circle(rng);
        let th: f64 = rng.gen_range(0.0..TAU);
        let rho = rng.gen_range(0.1..10.0);
        let p = [c.cx + rho * c.r * th.cos(), c.cy + rho * c.r * th.sin()];
        let twice = invert_point(&c, &HPoint::finite(p[0], p[1])).and_then(|q| invert_point(&c, &q));
        match twice {
            Ok(q) => invol = invol.max(rel(q.xy(), p)),
            Err(_) => errors += 1,
        }

        let on = on_circle(&c, rng.gen_range(0.0..TAU));
        match invert_point(&c, &HPoint::finite(on[0], on[1])) {
            Ok(q) => fixed = fixed.max(rel(q.xy(), on)),
            Err(_) => errors += 1,
        }

        // a circle orthogonal to c is carried onto itself
        let phi: f64 = rng.gen_range(0.0..TAU);
        let d = c.r * rng.gen_range(1.1..4.0);
        let (qx, qy) = (c.cx + d * phi.cos(), c.cy + d * phi.sin());
        let k = Circle::new(qx, qy, (d * d - c.r * c.r).sqrt()).expect("positive radius");
        match invert_gencircle(&c, &GenCircle::Circle(k)) {
            Ok(GenCircle::Circle(img)) => {
                let gap = dist(img.center_xy(), k.center_xy()) + (img.r - k.r).abs();
                orth = orth.max(gap / k.r.max(1.0));
            }
            _ => wrong_kind += 1,
        }

        // circle through the center → line; line missing the center → circle
        // through the center; other circles → circles
        let a: f64 = rng.gen_range(0.0..TAU);
        let rk = c.r * rng.gen_range(0.3..3.0);
        let through = Circle::new(c.cx + rk * a.cos(), c.cy + rk * a.sin(), rk).expect("positive radius");
        let far_side = a + std::f64::consts::PI;
        let sample = |k: &Circle, rng: &mut ChaCha8Rng| {
            let t = far_side + rng.gen_range(-2.5..2.5);
            on_circle(k, t)
        };
        match invert_gencircle(&c, &GenCircle::Circle(through)) {
            Ok(GenCircle::Line(l)) => {
                for _ in 0..5 {
                    let x = sample(&through, rng);
                    if let Ok(img) = invert_point(&c, &HPoint::finite(x[0], x[1])) {
                        let d = l.signed_distance(img.xy()).unwrap_or(f64::INFINITY);
                        classify = classify.max(d.abs() / img.xy()[0].hypot(img.xy()[1]).max(1.0));
                    }
                }
            }
            _ => wrong_kind += 1,
        }
        let off = rng.gen_range(0.2..3.0) * c.r;
        let dir: f64 = rng.gen_range(0.0..TAU);
        let (nx, ny) = (dir.cos(), dir.sin());
        let line = HLine::new(nx, ny, -(nx * c.cx + ny * c.cy + off));
        match invert_gencircle(&c, &GenCircle::Line(line)) {
            Ok(GenCircle::Circle(img)) => {
                classify = classify.max(img.power(c.center_xy()).abs() / img.r.max(1.0).powi(2));
                for _ in 0..5 {
                    let s = rng.gen_range(-5.0..5.0);
                    let foot = [c.cx + off * nx, c.cy + off * ny];
                    let x = HPoint::finite(foot[0] - s * ny, foot[1] + s * nx);
                    if let Ok(q) = invert_point(&c, &x) {
                        let gap = (dist(q.xy(), img.center_xy()) - img.r).abs();
                        classify = classify.max(gap / img.r.max(1.0));
                    }
                }
            }
            _ => wrong_kind += 1,
        }
        let other =
            Circle::new(c.cx + 2.0 * rk * a.cos(), c.cy + 2.0 * rk * a.sin(), rk * 0.7).expect("positive radius");
        match invert_gencircle(&c, &GenCircle::Circle(other)) {
            Ok(GenCircle::Circle(img)) => {
                for _ in 0..5 {
                    let x = on_circle(&other, rng.gen_range(0.0..TAU));
                    if let Ok(q) = invert_point(&c, &HPoint::finite(x[0], x[1])) {
                        let gap = (dist(q.xy(), img.center_xy()) - img.r).abs();
                        classify = classify.max(gap / img.r.max(1.0));
                    }
                }
            }
            _ => wrong_kind += 1,
        }
    }
    let note = format!("{TRIALS} trials");
    let mut out = vec![
        Check::below("involution", invol, 1e-9).with_note(note.clone()),
        Check::below("circle of inversion is fixed", fixed, 1e-9).with_note(note.clone()),
        Check::below("orthogonal circles are invariant", orth, 1e-9).with_note(note.clone()),
        Check::below("circle/line images land on the predicted kind", classify, 1e-9).with_note(note),
        Check::exact("image kinds match", wrong_kind == 0).with_note(format!("{wrong_kind} mismatches")),
    ];
    if errors > 0 {
        out.push(Check::failed("inversions evaluated", format!("{errors} errors")));
    }
    out
}

pub(super) fn stereo(rng: &mut ChaCha8Rng) -> Vec<Check> {
    let unit = Circle::new(0.0, 0.0, 1.0).expect("unit circle");
    let mut worst = 0.0f64;
    let mut errors = 0;
    for _ in 0..TRIALS {
        let th: f64 = rng.gen_range(0.0..TAU);
        let rho: f64 = 10f64.powf(rng.gen_range(-1.0..1.0));
        let p = HPoint::finite(rho * th.cos(), rho * th.sin());
        match (ns_composition(&p), invert_point(&unit, &p)) {
            (Ok(a), Ok(b)) => worst = worst.max(rel(a.xy(), b.xy())),
            _ => errors += 1,
        }
    }
    let mut out = vec![Check::below(
        "north lift then south projection is inversion in the equator",
        worst,
        1e-10,
    )
    .with_note(format!("{TRIALS} trials"))];
    if errors > 0 {
        out.push(Check::failed(
            "stereographic trials evaluated",
            format!("{errors} errors"),
        ));
    }
    out
}

pub(super) fn radical(rng: &mut ChaCha8Rng) -> Vec<Check> {
    let (mut eq_gap, mut tangent_gap) = (0.0f64, 0.0f64);
    let mut points = 0;
    for _ in 0..100 {
        let c1 = random_circle(rng);
        let r2 = rng.gen_range(0.5..3.0);
        let d = (c1.r + r2) * rng.gen_range(1.05..3.0);
        let a: f64 = rng.gen_range(0.0..TAU);
        let c2 = Circle::new(c1.cx + d * a.cos(), c1.cy + d * a.sin(), r2).expect("positive radius");
        let Ok(axis) = ideal_common_secant(&c1, &c2) else {
            return vec![Check::failed("ideal common secant", "not computed")];
        };
        // x² + y² − 2cx·x − 2cy·y + cx² + cy² − r² for each circle, subtracted
        let coeffs = |c: &Circle| [-2.0 * c.cx, -2.0 * c.cy, c.cx * c.cx + c.cy * c.cy - c.r * c.r];
        let (e1, e2) = (coeffs(&c1), coeffs(&c2));
        let diff = HLine::new(e1[0] - e2[0], e1[1] - e2[1], e1[2] - e2[2]);
        eq_gap = eq_gap.max(line_gap(&axis, &diff));

        let [nx, ny, nc] = diff.coords();
        let n2 = nx * nx + ny * ny;
        let foot = [-nx * nc / n2, -ny * nc / n2];
        let s = rng.gen_range(-5.0..5.0) / n2.sqrt();
        let t = [foot[0] - s * ny, foot[1] + s * nx];
        let (p1, p2) = (c1.power(t), c2.power(t));
        if p1 > 0.0 && p2 > 0.0 {
            tangent_gap = tangent_gap.max((p1.sqrt() - p2.sqrt()).abs());
            points += 1;
        }
    }
    let mut out = vec![
        Check::below(
            "ideal common secant equals the difference of the circle equations",
            eq_gap,
            1e-9,
        )
        .with_note("100 disjoint pairs"),
        Check::below("equal tangent lengths along the axis", tangent_gap, 1e-9)
            .with_note(format!("{points} axis points")),
    ];
    out.extend(radical_sweep());
    out
}

/// Drags the second circle of the radical-axis figure into the first and
/// watches the axis: it must move by at most a bounded multiple of the step
/// and, once the circles meet, pass through both real meets.
fn radical_sweep() -> Vec<Check> {
    let name = "radical axis varies continuously into the real common secant";
    let (fig, _) = match load(corpus::RADICAL_AXIS) {
        Ok(x) => x,
        Err(e) => return vec![Check::failed(name, e)],
    };
    let frames = 400;
    let (from, to) = ([3.0, 0.5], [0.6, 0.3]);
    let h = dist(from, to) / frames as f64;
    let mut state = BranchState::default();
    let mut prev: Option<[f64; 2]> = None;
    let (mut jump, mut through, mut real_frames) = (0.0f64, 0.0f64, 0);
    for k in 0..=frames {
        let s = k as f64 / frames as f64;
        let target = [from[0] + s * (to[0] - from[0]), from[1] + s * (to[1] - from[1])];
        let (scene, next) = match drag(&fig, &state, "O2", target) {
            Ok(x) => x,
            Err(e) => return vec![Check::failed(name, e)],
        };
        state = next;
        let axis = match scene.value("axis") {
            Some(Value::Line(l)) => l.line,
            _ => return vec![Check::failed(name, "axis missing")],
        };
        let (Some(Value::Circle(c1)), Some(Value::Circle(c2))) = (scene.value("c1"), scene.value("c2")) else {
            return vec![Check::failed(name, "circles missing")];
        };
        let foot = axis.foot_from_origin().expect("finite axis");
        if let Some(p) = prev {
            jump = jump.max(dist(foot, p) / h);
        }
        prev = Some(foot);
        if let Ok(meet) = intersect(&Curve::Circle(*c1), &Curve::Circle(*c2)) {
            if meet.points.len() == 2 {
                real_frames += 1;
                for p in &meet.points {
                    through = through.max(axis.signed_distance(p.xy()).map_or(f64::INFINITY, f64::abs));
                }
            }
        }
    }
    vec![
        Check::below("radical axis moves at most 10 steps per step", jump, 10.0)
            .with_note(format!("{frames} drag frames, max foot displacement / step")),
        Check::below(name, through, 1e-9).with_note(format!("{real_frames} frames with real meets")),
        Check::exact("sweep reaches intersecting circles", real_frames > 0),
    ]
}

pub(super) fn conjugate() -> Vec<Check> {
    let name = "step-by-step ideal chord matches the conjugate conic";
    let mut out = Vec::new();
    let unit = Circle::new(0.0, 0.0, 1.0).expect("unit circle").to_conic();
    let hyperbola = Conic::from_coeffs(1.0, 0.0, -1.0, 0.0, 0.0, -1.0);
    match crate::transforms::conjugate_conic(&unit, [0.0, 1.0]) {
        Ok(c) => out.push(Check::below(
            "unit circle conjugates to x² − y² = 1",
            c.distance(&hyperbola),
            1e-15,
        )),
        Err(e) => out.push(Check::failed("unit circle conjugates to x² − y² = 1", e)),
    }
    let (fig, scene) = match load(corpus::CONJUGATE_CONIC) {
        Ok(x) => x,
        Err(e) => {
            out.push(Check::failed(name, e));
            return out;
        }
    };
    let (Some(Value::Line(d)), Some(Value::Circle(c))) = (scene.value("d"), scene.value("c")) else {
        out.push(Check::failed(name, "diameter or circle missing"));
        return out;
    };
    let (d, c) = (*d, *c);
    let mut state = BranchState::default();
    let mut worst = 0.0f64;
    for k in 0..20 {
        let Some(target) = d.point_at(6.0 + 0.75 * k as f64) else {
            out.push(Check::failed(name, "diameter has no frame"));
            return out;
        };
        let frame = drag(&fig, &state, "N", target);
        let Ok((scene, next)) = frame else {
            out.push(Check::failed(name, "drag failed"));
            return out;
        };
        state = next;
        let (Some(u), Some(v), Some(Value::Line(l))) = (scene.point("U"), scene.point("V"), scene.value("l")) else {
            out.push(Check::failed(name, format!("frame {k}: endpoints missing")));
            return out;
        };
        let Ok((p, q)) = ideal_chord(&c.to_conic(), &l.line) else {
            out.push(Check::failed(name, format!("frame {k}: analytic chord failed")));
            return out;
        };
        let (p, q) = (p.xy(), q.xy());
        let gap = (dist(u, p).max(dist(v, q))).min(dist(u, q).max(dist(v, p)));
        worst = worst.max(gap);
    }
    out.push(Check::below(name, worst, 1e-8).with_note("20 lines, max endpoint distance"));
    out
}
