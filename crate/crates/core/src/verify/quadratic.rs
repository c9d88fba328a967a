use std::f64::consts::{FRAC_PI_3, TAU};
use std::time::Instant;

use rand::Rng;
use rand_chacha::ChaCha8Rng;

use super::{dist, load, Check};
use crate::construction::Value;
use crate::corpus;
use crate::curve::{degree_law_grid, strict_transform, ExactPoint, PlaneCurve, Poly, QuadraticMap, Singularity, Q3};
use crate::geom::{Conic, HLine, HPoint};
use crate::transforms::{bh_invert, bh_line_image, BHConfig};

const S3: f64 = 1.732_050_807_568_877_2;

/// Pole `A = (0,0)` and the circle through `B = (1,0)`, `C = (1/2, √3/2)`
/// tangent to `AB` and `AC` there.
fn canonical_config() -> BHConfig {
    let gamma = Conic::from_coeffs(1.0, 0.0, 1.0, -2.0, -2.0 / S3, 1.0);
    BHConfig::new(gamma, HPoint::finite(0.0, 0.0))
        .and_then(|c| c.with_base_points(HPoint::finite(1.0, 0.0), HPoint::finite(0.5, S3 / 2.0)))
        .expect("canonical configuration")
}

/// The map in affine coordinates for the canonical configuration.
fn closed_form(x: f64, y: f64) -> Option<[f64; 2]> {
    let d = 3.0 * x * x + 3.0 * y * y - 3.0 * x - S3 * y;
    if d.abs() < 1e-3 {
        return None;
    }
    Some([x * (3.0 * x + S3 * y - 3.0) / d, y * (3.0 * x + S3 * y - 3.0) / d])
}

fn incenter() -> [Q3; 2] {
    [Q3::ratio(1, 2), Q3::sqrt3_times(1, 6)]
}

pub(super) fn bh(rng: &mut ChaCha8Rng) -> Vec<Check> {
    let cfg = canonical_config();
    let mut worst = 0.0f64;
    let mut used = 0;
    let mut errors = 0;
    while used < 1000 {
        let (x, y) = (rng.gen_range(-3.0..3.0), rng.gen_range(-3.0..3.0));
        let Some(want) = closed_form(x, y) else { continue };
        // keep clear of the fundamental lines, where both sides blow up
        if x.abs() < 1e-3 || (y - S3 * x).abs() < 1e-3 || (S3 * x + y - S3).abs() < 1e-3 {
            continue;
        }
        used += 1;
        match bh_invert(&cfg, &HPoint::finite(x, y)).ok().and_then(|p| p.affine()) {
            Some(got) => worst = worst.max(dist(got, want) / want[0].hypot(want[1]).max(1.0)),
            None => errors += 1,
        }
    }
    let g = [0.5, S3 / 6.0];
    let centroid = bh_invert(&cfg, &HPoint::finite(g[0], g[1]))
        .ok()
        .and_then(|p| p.affine())
        .map_or(f64::INFINITY, |p| dist(p, g));
    vec![
        Check::below("geometric map equals the closed form", worst, 1e-9)
            .with_note(format!("1000 points, {errors} errors")),
        Check::below("centroid is fixed", centroid, 1e-12),
    ]
}

pub(super) fn degree_law(seed: u64) -> Vec<Check> {
    let start = Instant::now();
    let grid = match degree_law_grid(&QuadraticMap::canonical(), seed) {
        Ok(g) => g,
        Err(e) => return vec![Check::failed("degree = 2n − tA − tB − tC", e)],
    };
    let secs = start.elapsed().as_secs_f64();
    let feasible: Vec<_> = grid.iter().filter(|c| c.degree.is_some()).collect();
    let bad: Vec<String> = feasible
        .iter()
        .filter(|c| !c.holds())
        .map(|c| format!("n={} t={:?} got {:?}", c.n, c.t, c.degree))
        .collect();
    let mut out = vec![
        Check::exact("degree = 2n − tA − tB − tC", bad.is_empty() && !feasible.is_empty()).with_note(
            if bad.is_empty() {
                format!("{} of {} cells feasible, all exact", feasible.len(), grid.len())
            } else {
                bad.join(", ")
            },
        ),
    ];
    // a cell is realizable exactly when no side would carry more than n
    // intersections
    let predicted = |c: &crate::curve::DegreeLawCase| {
        let [a, b, cc] = c.t;
        a + b <= c.n && a + cc <= c.n && b + cc <= c.n
    };
    let mismatched = grid.iter().filter(|c| c.degree.is_some() != predicted(c)).count();
    out.push(
        Check::exact("feasible cells are those with pairwise sums ≤ n", mismatched == 0)
            .with_note(format!("{mismatched} mismatches")),
    );
    out.push(Check::below("grid runtime (s)", secs, 60.0));
    out
}

/// Deltoid `2e^{it} + e^{−2it}` with cusps at `3, 3ω, 3ω²`.
fn hypocycloid(t: f64) -> [f64; 2] {
    [2.0 * t.cos() + (2.0 * t).cos(), 2.0 * t.sin() - (2.0 * t).sin()]
}

type Similarity = ([f64; 2], [f64; 2], bool);

/// Least-squares similarity `z ↦ αz + β` (or `α z̄ + β`) sending `src`
/// onto `dst`, trying every pairing; returns the map and its residual.
fn fit_similarity(src: &[[f64; 2]; 3], dst: &[[f64; 2]; 3]) -> (Similarity, f64) {
    let perms = [[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]];
    let mut best = (([1.0, 0.0], [0.0, 0.0], false), f64::INFINITY);
    for flip in [false, true] {
        for p in perms {
            let s: Vec<[f64; 2]> = src.iter().map(|z| if flip { [z[0], -z[1]] } else { *z }).collect();
            let d: Vec<[f64; 2]> = p.iter().map(|&i| dst[i]).collect();
            let mean = |v: &[[f64; 2]]| {
                [
                    v.iter().map(|z| z[0]).sum::<f64>() / 3.0,
                    v.iter().map(|z| z[1]).sum::<f64>() / 3.0,
                ]
            };
            let (ms, md) = (mean(&s), mean(&d));
            let (mut num, mut den) = ([0.0, 0.0], 0.0);
            for (z, w) in s.iter().zip(&d) {
                let (z, w) = ([z[0] - ms[0], z[1] - ms[1]], [w[0] - md[0], w[1] - md[1]]);
                // w · conj(z)
                num[0] += w[0] * z[0] + w[1] * z[1];
                num[1] += w[1] * z[0] - w[0] * z[1];
                den += z[0] * z[0] + z[1] * z[1];
            }
            let a = [num[0] / den, num[1] / den];
            let b = [
                md[0] - (a[0] * ms[0] - a[1] * ms[1]),
                md[1] - (a[0] * ms[1] + a[1] * ms[0]),
            ];
            let map = (a, b, flip);
            let res = s
                .iter()
                .zip(&d)
                .map(|(z, w)| dist(apply_similarity(&(a, b, false), *z), *w))
                .fold(0.0, f64::max);
            if res < best.1 {
                best = (map, res);
            }
        }
    }
    best
}

fn apply_similarity((a, b, flip): &Similarity, z: [f64; 2]) -> [f64; 2] {
    let z = if *flip { [z[0], -z[1]] } else { z };
    [a[0] * z[0] - a[1] * z[1] + b[0], a[0] * z[1] + a[1] * z[0] + b[1]]
}

fn incircle_image(q: &QuadraticMap) -> Result<PlaneCurve, String> {
    let c = PlaneCurve::circle(incenter(), Q3::ratio(1, 12)).map_err(|e| e.to_string())?;
    strict_transform(&c, q).map(|s| s.curve).map_err(|e| e.to_string())
}

pub(super) fn deltoid() -> Vec<Check> {
    let q = QuadraticMap::canonical();
    let quartic = match incircle_image(&q) {
        Ok(c) => c,
        Err(e) => return vec![Check::failed("incircle strict transform", e)],
    };
    let mut out = vec![
        Check::exact("strict transform of the incircle has degree 4", quartic.degree() == 4)
            .with_note(format!("degree {}", quartic.degree())),
    ];
    let kinds: Vec<_> = q.vertices().iter().map(|v| quartic.classify_singularity(v)).collect();
    out.push(
        Check::exact("cusps at A, B and C", kinds.iter().all(|k| *k == Ok(Singularity::Cusp)))
            .with_note(format!("{kinds:?}")),
    );

    let cusps = [[3.0, 0.0], hypocycloid(TAU / 3.0), hypocycloid(2.0 * TAU / 3.0)];
    let triangle = [[0.0, 0.0], [1.0, 0.0], [0.5, S3 / 2.0]];
    let (sim, cusp_res) = fit_similarity(&cusps, &triangle);
    let samples: Vec<HPoint> = (0..720)
        .map(|k| {
            let p = apply_similarity(&sim, hypocycloid(TAU * k as f64 / 720.0));
            HPoint::finite(p[0], p[1])
        })
        .collect();
    out.push(
        Check::below(
            "hypocycloid a/b = 3 after a similarity fit lies on the quartic",
            quartic.eval_residual(&samples),
            1e-7,
        )
        .with_note(format!("720 samples, cusp fit residual {cusp_res:.1e}")),
    );

    match load(corpus::BH_DELTOID) {
        Ok((_, scene)) => match scene.value("deltoid") {
            Some(Value::Locus(l)) => {
                let pts: Vec<HPoint> = l.points().map(|p| HPoint::finite(p[0], p[1])).collect();
                let missing = l.samples.len() - pts.len();
                out.push(
                    Check::below("traced locus lies on the quartic", quartic.eval_residual(&pts), 1e-7)
                        .with_note(format!("{} samples, {missing} missing", l.samples.len())),
                );
                out.push(Check::exact(
                    "trace has 720 samples",
                    l.samples.len() == 720 && missing == 0,
                ));
            }
            _ => out.push(Check::failed("traced locus lies on the quartic", "locus missing")),
        },
        Err(e) => out.push(Check::failed("traced locus lies on the quartic", e)),
    }
    out
}

pub(super) fn circumcircle() -> Vec<Check> {
    let q = QuadraticMap::canonical();
    let x = |m: [u32; 3], c: Q3| Poly::monomial(m, c);
    // denominator of the closed form: 3x² + 3y² − 3xw − √3·yw
    let d = x([2, 0, 0], Q3::int(3))
        .add(&x([0, 2, 0], Q3::int(3)))
        .add(&x([1, 0, 1], Q3::int(-3)))
        .add(&x([0, 1, 1], -&Q3::sqrt3()));
    let third = d.scale(&Q3::ratio(1, 3));
    // circle through the three vertices, by its center and radius
    let circum = PlaneCurve::circle([Q3::ratio(1, 2), Q3::sqrt3_times(1, 6)], Q3::ratio(1, 3));
    let Ok(circum) = circum else {
        return vec![Check::failed("circumcircle equals D/3", "bad circle")];
    };
    let on_vertices = q.vertices().iter().all(|v| circum.contains(v));
    let denominator_matches = q.polys()[2].scale(&Q3::int(-3)) == d;
    let mut out = vec![
        Check::exact(
            "circumcircle polynomial equals D/3",
            *circum.poly() == third && on_vertices,
        ),
        Check::exact("D is the denominator of the map", denominator_matches),
    ];
    match strict_transform(&circum, &q) {
        Ok(s) => {
            let infinity = PlaneCurve::line(&[Q3::zero(), Q3::zero(), Q3::one()]).expect("line");
            out.push(Check::exact("its image is the line at infinity", s.curve == infinity));
        }
        Err(e) => out.push(Check::failed("its image is the line at infinity", e)),
    }
    out
}

pub(super) fn asymptote() -> Vec<Check> {
    let cfg = canonical_config();
    let (ix, iy, r) = (0.5, S3 / 6.0, S3 / 6.0);
    let mut worst = 0.0f64;
    let mut note = String::new();
    for k in 0..20 {
        // odd multiples of π/20 miss the three sides, which are tangents too
        let th = TAU * (k as f64 + 0.5) / 20.0;
        let (c, s) = (th.cos(), th.sin());
        let l = HLine::new(c, s, -(c * ix + s * iy + r));
        let m = *bh_line_image(&cfg, &l).matrix();
        let (a, b, cc) = (m[(0, 0)], m[(0, 1)], m[(1, 1)]);
        let disc = b * b - a * cc;
        if disc <= 0.0 {
            note = format!("tangent {k} has no real asymptotes");
            worst = f64::INFINITY;
            continue;
        }
        let angle = (2.0 * disc.sqrt()).atan2((a + cc).abs());
        worst = worst.max((angle - FRAC_PI_3).abs());
    }
    let check = Check::below("asymptotes of tangent images meet at π/3", worst, 1e-6);
    vec![if note.is_empty() {
        check.with_note("20 tangents")
    } else {
        check.with_note(note)
    }]
}

fn describe(k: &Result<Singularity, crate::curve::CurveError>) -> &'static str {
    match k {
        Ok(Singularity::Node { real_tangents: false }) => "isolated point",
        Ok(Singularity::Node { real_tangents: true }) => "node",
        Ok(Singularity::Cusp) => "cusp",
        Ok(Singularity::TacnodeOrWorse) => "tacnode",
        Err(_) => "not a double point",
    }
}

/// Circles concentric with the incircle: inside it, the image has an
/// isolated double point at each vertex (no real branch passes); at the
/// incircle the two branches form a cusp; outside, a node.
pub(super) fn concentric_transition() -> Vec<Check> {
    let q = QuadraticMap::canonical();
    let cases = [
        (
            "r² = 1/16",
            Q3::ratio(1, 16),
            Singularity::Node { real_tangents: false },
        ),
        ("r² = 1/12", Q3::ratio(1, 12), Singularity::Cusp),
        ("r² = 1/9", Q3::ratio(1, 9), Singularity::Node { real_tangents: true }),
    ];
    let mut out = Vec::new();
    for (label, r2, want) in cases {
        let curve = PlaneCurve::circle(incenter(), r2)
            .map_err(|e| e.to_string())
            .and_then(|c| strict_transform(&c, &q).map_err(|e| e.to_string()));
        let name = format!("{label}: {} at every vertex", describe(&Ok(want)));
        match curve {
            Ok(s) => {
                let vertices: &[ExactPoint; 3] = q.vertices();
                let kinds: Vec<_> = vertices.iter().map(|v| s.curve.classify_singularity(v)).collect();
                let ok = kinds.iter().all(|k| *k == Ok(want)) && s.curve.degree() == 4;
                let seen: Vec<&str> = kinds.iter().map(describe).collect();
                out.push(Check::exact(&name, ok).with_note(format!("degree {}, {}", s.curve.degree(), seen.join("/"))));
            }
            Err(e) => out.push(Check::failed(&name, e)),
        }
    }
    out
}
