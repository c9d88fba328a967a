use std::f64::consts::{PI, TAU};
use std::time::Instant;

use super::{dist, load, Check};
use crate::construction::Scene;
use crate::corpus;

/// Points `prefix0..prefixN` of a scene.
fn chain(scene: &Scene, prefix: &str, n: usize) -> Result<Vec<[f64; 2]>, String> {
    (0..=n)
        .map(|k| {
            let id = format!("{prefix}{k}");
            scene.point(&id).ok_or(format!("{id} does not exist"))
        })
        .collect()
}

/// Total counterclockwise angle swept by a chain of points around the
/// origin.
fn swept(points: &[[f64; 2]]) -> f64 {
    points
        .windows(2)
        .map(|w| {
            let (a, b) = (w[0][1].atan2(w[0][0]), w[1][1].atan2(w[1][0]));
            (b - a).rem_euclid(TAU)
        })
        .sum()
}

fn chain_check(name: &str, src: &str, prefix: &str, n: usize) -> Result<Vec<[f64; 2]>, Check> {
    let (_, scene) = load(src).map_err(|e| Check::failed(name, e))?;
    chain(&scene, prefix, n).map_err(|e| Check::failed(name, e))
}

pub(super) fn closure() -> Vec<Check> {
    let mut out = Vec::new();
    match chain_check("hexagon closes", corpus::HEXAGON, "P", 6) {
        Ok(p) => out.push(Check::below("hexagon closes", dist(p[6], p[0]), 1e-9)),
        Err(c) => out.push(c),
    }
    match chain_check("twelve half-radius chords do not close", corpus::TWELVE_CHORDS, "Q", 12) {
        Ok(p) => {
            let gap = TAU - swept(&p);
            let oracle = TAU - 24.0 * 0.25f64.asin();
            out.push(
                Check::above("twelve half-radius chords do not close (gap, rad)", gap, 0.2)
                    .with_note(format!("arc-sum oracle {oracle:.6}")),
            );
            out.push(Check::below(
                "chord gap agrees with the arc-sum oracle",
                (gap - oracle).abs(),
                1e-9,
            ));
        }
        Err(c) => out.push(c),
    }
    match chain_check("approximate octagon does not close", corpus::OCTAGON_APPROX, "R", 8) {
        Ok(p) => out.push(Check::above(
            "approximate octagon does not close",
            dist(p[8], p[0]),
            1e-3,
        )),
        Err(c) => out.push(c),
    }
    match chain_check("decagon closes", corpus::DECAGON, "D", 10) {
        Ok(p) => {
            out.push(Check::below("decagon of golden chords closes", dist(p[10], p[0]), 1e-8));
            let side = dist(p[1], p[0]);
            out.push(Check::below(
                "decagon side is (√5 − 1)/2",
                (side - (5f64.sqrt() - 1.0) / 2.0).abs(),
                1e-9,
            ));
        }
        Err(c) => out.push(c),
    }
    out.push(Check::below(
        "2 sin(π/10) = (√5 − 1)/2",
        (2.0 * (PI / 10.0).sin() - (5f64.sqrt() - 1.0) / 2.0).abs(),
        1e-12,
    ));
    out
}

pub(super) fn golden() -> Vec<Check> {
    let start = Instant::now();
    let scene = match load(corpus::GOLDEN_SECTION) {
        Ok((_, s)) => s,
        Err(e) => return vec![Check::failed("golden section", e)],
    };
    let secs = start.elapsed().as_secs_f64();
    let (Some(a), Some(b), Some(k)) = (scene.point("A"), scene.point("B"), scene.point("K")) else {
        return vec![Check::failed("golden section", "A, B or K missing")];
    };
    let (ab, bk, ka) = (dist(a, b), dist(b, k), dist(k, a));
    vec![
        Check::below("BK/AB = (√5 − 1)/2", (bk / ab - (5f64.sqrt() - 1.0) / 2.0).abs(), 1e-9)
            .with_note(format!("BK/AB = {:.10}", bk / ab)),
        Check::below("AB:BK = BK:KA", (ab / bk - bk / ka).abs(), 1e-9).with_note(format!(
            "AB:BK = {:.10}, BK:KA = {:.10}",
            ab / bk,
            bk / ka
        )),
        Check::below("parse and evaluate time (s)", secs, 1.0),
    ]
}

pub(super) fn toolset() -> Vec<Check> {
    let mut out = Vec::new();
    match load(corpus::EUCLID_I1) {
        Ok((fig, scene)) => {
            out.push(
                Check::exact("Elements I.1 uses only the postulates", fig.check_toolset().is_empty())
                    .with_note(fig.toolset.name.clone()),
            );
            if let (Some(a), Some(b), Some(c)) = (scene.point("A"), scene.point("B"), scene.point("C")) {
                let (ab, bc, ca) = (dist(a, b), dist(b, c), dist(c, a));
                out.push(Check::below(
                    "triangle of I.1 is equilateral",
                    (ab - bc).abs().max((ab - ca).abs()),
                    1e-9,
                ));
            }
        }
        Err(e) => out.push(Check::failed("Elements I.1 uses only the postulates", e)),
    }
    match load(corpus::PARALLEL_VIOLATION) {
        Ok((fig, _)) => {
            let v = fig.check_toolset();
            out.push(
                Check::exact("a parallel breaks the postulate toolset", v.len() == 1)
                    .with_note(format!("{} violation(s)", v.len())),
            );
        }
        Err(e) => out.push(Check::failed("a parallel breaks the postulate toolset", e)),
    }
    match load(corpus::EUCLID_I2) {
        Ok((fig, scene)) => {
            out.push(Check::exact(
                "compass through the I.2 transport macro uses only the postulates",
                fig.check_toolset().is_empty(),
            ));
            let pts = ["A", "B", "C", "D"].map(|id| scene.point(id));
            if let [Some(a), Some(b), Some(c), Some(d)] = pts {
                out.push(Check::below(
                    "transported segment CD equals AB",
                    (dist(c, d) - dist(a, b)).abs(),
                    1e-9,
                ));
            } else {
                out.push(Check::failed("transported segment CD equals AB", "points missing"));
            }
        }
        Err(e) => out.push(Check::failed("compass through the I.2 transport macro", e)),
    }
    out
}
