use geokernel::construction::{drag, evaluate, trace_locus, BranchState, EngineError, Path, Value};
use geokernel::corpus;
use geokernel::dsl::parse;
use proptest::prelude::*;

fn dist(a: [f64; 2], b: [f64; 2]) -> f64 {
    (a[0] - b[0]).hypot(a[1] - b[1])
}

#[test]
fn euclid_i1_is_equilateral() {
    let scene = evaluate(&parse(corpus::EUCLID_I1).unwrap()).unwrap();
    let [a, b, c] = ["A", "B", "C"].map(|id| scene.point(id).unwrap());
    assert!((dist(a, b) - dist(b, c)).abs() < 1e-9);
    assert!((dist(a, b) - dist(c, a)).abs() < 1e-9);
    assert!(scene.all_exist());
}

#[test]
fn hexagon_closes() {
    let scene = evaluate(&parse(corpus::HEXAGON).unwrap()).unwrap();
    assert!(dist(scene.point("P6").unwrap(), scene.point("P0").unwrap()) < 1e-9);
}

#[test]
fn coincident_centers_leave_everything_downstream_undefined() {
    let fig = parse(corpus::EUCLID_I1).unwrap();
    let (scene, _) = drag(&fig, &BranchState::default(), "B", [0.0, 0.0]).unwrap();
    // A and B coincide: the circles degenerate
    assert!(!scene.get("c1").unwrap().exists());
    assert!(!scene.get("C").unwrap().exists());
    assert!(!scene.get("t").unwrap().exists());
}

#[test]
fn cold_drag_uses_the_branch_selector() {
    let fig = parse(corpus::EUCLID_I1).unwrap();
    let (scene, _) = drag(&fig, &BranchState::default(), "B", [2.0, 0.0]).unwrap();
    assert!(scene.point("C").unwrap()[1] > 0.0);
    let flipped = parse(&corpus::EUCLID_I1.replace("branch=0", "branch=1")).unwrap();
    let (scene, _) = drag(&flipped, &BranchState::default(), "B", [2.0, 0.0]).unwrap();
    assert!(scene.point("C").unwrap()[1] < 0.0);
}

/// Two unit circles whose center distance touches 2 exactly once: the two
/// meets merge into the point of contact and separate again.
#[test]
fn drag_through_a_tangency_follows_the_nearest_witness() {
    let src = "\
point A = free_point(0, 0)
point U = free_point(1, 0)
circle c1 = circle_center_point(A, U)
point S0 = free_point(0, 5)
point S1 = free_point(1, 5)
segment unit = segment(S0, S1)
point D = free_point(1.5, 0)
circle c2 = compass(unit, D)
point X = intersect(c1, c2, branch=0)
";
    let fig = parse(src).unwrap();
    let frames = 200;
    let h = 2.0 / frames as f64;
    let mut state = BranchState::default();
    let mut prev: Option<[f64; 2]> = None;
    let mut tangent_frames = 0;
    for k in 0..=frames {
        let s = -1.0 + 2.0 * k as f64 / frames as f64;
        let (scene, next) = drag(&fig, &state, "D", [2.0 - 0.5 * s * s, 0.0]).unwrap();
        state = next;
        let x = scene.point("X").unwrap();
        if s == 0.0 {
            tangent_frames += 1;
            assert_eq!(x, [1.0, 0.0]);
        } else {
            // canonical order puts the upper meet first; continuity keeps it
            assert!(x[1] > 0.0, "frame {k} jumped to {x:?}");
        }
        if let Some(p) = prev {
            assert!(dist(p, x) < 10.0 * h, "frame {k}: jump {}", dist(p, x));
        }
        prev = Some(x);
    }
    assert_eq!(tangent_frames, 1);
}

#[test]
fn witnesses_keep_a_branch_after_the_canonical_order_flips() {
    // D circles around A: the canonical first meet swaps sides, the tracked
    // one must not
    let src = "\
point A = free_point(0, 0)
point U = free_point(1, 0)
circle c1 = circle_center_point(A, U)
point S0 = free_point(0, 5)
point S1 = free_point(1, 5)
segment unit = segment(S0, S1)
point D = free_point(1, 0)
circle c2 = compass(unit, D)
point X = intersect(c1, c2, branch=0)
";
    let fig = parse(src).unwrap();
    let mut state = BranchState::default();
    let mut prev = None;
    for k in 0..=100 {
        let th = std::f64::consts::PI * k as f64 / 100.0;
        let (scene, next) = drag(&fig, &state, "D", [th.cos(), th.sin()]).unwrap();
        state = next;
        let x = scene.point("X").unwrap();
        // the meet stays 60° counterclockwise of D
        let want = [
            (th + std::f64::consts::FRAC_PI_3).cos(),
            (th + std::f64::consts::FRAC_PI_3).sin(),
        ];
        assert!(dist(x, want) < 1e-9, "frame {k}");
        if let Some(p) = prev {
            assert!(dist(p, x) < 0.1);
        }
        prev = Some(x);
    }
}

#[test]
fn inversion_trace_is_a_line() {
    let fig = parse(corpus::INVERSION).unwrap();
    let scene = evaluate(&fig).unwrap();
    let Some(Value::Locus(l)) = scene.value("image") else {
        panic!("no locus")
    };
    let pts: Vec<[f64; 2]> = l.points().collect();
    assert_eq!(pts.len(), 200);
    // total least squares line through the samples
    let n = pts.len() as f64;
    let m = [
        pts.iter().map(|p| p[0]).sum::<f64>() / n,
        pts.iter().map(|p| p[1]).sum::<f64>() / n,
    ];
    let (mut sxx, mut sxy, mut syy) = (0.0, 0.0, 0.0);
    for p in &pts {
        let (x, y) = (p[0] - m[0], p[1] - m[1]);
        sxx += x * x;
        sxy += x * y;
        syy += y * y;
    }
    let angle = 0.5 * (2.0 * sxy).atan2(sxx - syy);
    let normal = [-angle.sin(), angle.cos()];
    let worst = pts
        .iter()
        .map(|p| ((p[0] - m[0]) * normal[0] + (p[1] - m[1]) * normal[1]).abs())
        .fold(0.0, f64::max);
    assert!(worst < 1e-8, "{worst}");
}

#[test]
fn harmonic_conjugates_trace_the_polar() {
    let scene = evaluate(&parse(corpus::POLAR_LOCUS).unwrap()).unwrap();
    let Some(Value::Locus(l)) = scene.value("harmonic_points") else {
        panic!("no locus")
    };
    let Some(Value::Line(pl)) = scene.value("pl") else {
        panic!("no polar")
    };
    assert_eq!(l.samples.len(), 100);
    for p in l.points() {
        assert!(pl.line.signed_distance(p).unwrap().abs() < 1e-8);
    }
    assert!(!l.closed);
}

#[test]
fn deltoid_trace_is_closed() {
    let scene = evaluate(&parse(corpus::BH_DELTOID).unwrap()).unwrap();
    let Some(Value::Locus(l)) = scene.value("deltoid") else {
        panic!("no locus")
    };
    assert!(l.closed);
    assert_eq!(l.points().count(), 720);
}

#[test]
fn trace_errors() {
    let fig = parse(corpus::BH_DELTOID).unwrap();
    let st = BranchState::default();
    let path = Path::Segment([0.0, 0.0], [1.0, 1.0]);
    assert_eq!(
        trace_locus(&fig, &st, "P", &path, "G", 10),
        Err(EngineError::NoDependency {
            target: "G".into(),
            mover: "P".into()
        })
    );
    assert!(matches!(
        trace_locus(&fig, &st, "F", &path, "P'", 10),
        Err(EngineError::NotDraggable(_))
    ));
}

#[test]
fn transport_macro_copies_the_length() {
    let fig = parse(corpus::EUCLID_I2).unwrap();
    let scene = evaluate(&fig).unwrap();
    let [a, b, c, d] = ["A", "B", "C", "D"].map(|id| scene.point(id).unwrap());
    assert!((dist(c, d) - dist(a, b)).abs() < 1e-9);
    let Some(Value::Circle(k)) = scene.value("k") else {
        panic!()
    };
    assert!((k.r - dist(a, b)).abs() < 1e-9);
}

#[test]
fn postulate_figures_expand_to_postulate_tools() {
    const POSTULATE_TOOLS: [&str; 7] = [
        "free_point",
        "point_on",
        "line_through",
        "segment",
        "ray",
        "circle_center_point",
        "intersect",
    ];
    for src in [corpus::EUCLID_I1, corpus::EUCLID_I2] {
        let fig = parse(src).unwrap();
        assert!(fig.check_toolset().is_empty());
        for line in fig.protocol() {
            if line.ends_with("[macro]") {
                continue;
            }
            let tool = line.split(" = ").nth(1).unwrap().split('(').next().unwrap();
            assert!(POSTULATE_TOOLS.contains(&tool) || tool == "polygon", "{line}");
        }
    }
}

#[test]
fn protocol_shows_macro_expansion() {
    let fig = parse(corpus::GOLDEN_SECTION).unwrap();
    let p = fig.protocol();
    let call = p.iter().position(|l| l.contains("golden_section(A, B)")).unwrap();
    assert!(p[call].ends_with("[macro]"));
    assert!(p[call + 1].starts_with("    "));
    assert_eq!(p.iter().filter(|l| l.starts_with("    ")).count(), 10);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    /// Dragging B of I.1 along a random smooth path keeps the triangle
    /// equilateral and moves C by O(h).
    #[test]
    fn euclid_i1_drag_is_continuous(r0 in 0.5..3.0f64, r1 in 0.5..3.0f64, turn in -3.0..3.0f64) {
        let fig = parse(corpus::EUCLID_I1).unwrap();
        let mut state = BranchState::default();
        let mut prev: Option<([f64; 2], [f64; 2])> = None;
        for k in 0..=60 {
            let s = k as f64 / 60.0;
            let (r, th) = (r0 + s * (r1 - r0), s * turn);
            let b = [r * th.cos(), r * th.sin()];
            let (scene, next) = drag(&fig, &state, "B", b).unwrap();
            state = next;
            let c = scene.point("C").unwrap();
            prop_assert!((dist(c, [0.0, 0.0]) - r).abs() < 1e-9);
            prop_assert!((dist(c, b) - r).abs() < 1e-9);
            if let Some((pb, pc)) = prev {
                prop_assert!(dist(pc, c) <= 3.0 * dist(pb, b) + 1e-12);
            }
            prev = Some((b, c));
        }
    }
}
