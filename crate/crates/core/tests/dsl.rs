use std::time::{Duration, Instant};

use geokernel::construction::{Figure, ObjType, Step, ToolId, Toolset};
use geokernel::corpus;
use geokernel::dsl::{format_number, parse, parse_bytes, serialize, ParseError};
use proptest::prelude::*;

#[test]
fn corpus_round_trips() {
    for (name, src) in corpus::ALL {
        let fig = parse(src).unwrap_or_else(|e| panic!("{name}: {e:?}"));
        let text = serialize(&fig);
        let again = parse(&text).unwrap_or_else(|e| panic!("{name} reparse: {e:?}"));
        assert_eq!(fig, again, "{name}");
        assert_eq!(serialize(&again), text, "{name}");
    }
}

#[test]
fn euclid_i1_shape() {
    let fig = parse(corpus::EUCLID_I1).unwrap();
    assert_eq!(fig.steps.len(), 6);
    assert_eq!(fig.toolset, Toolset::postulates_only());
}

#[test]
fn arity_error() {
    let e = parse("point A = line_through(B)\n").unwrap_err();
    // B is undefined and the arity is wrong; the first problem found wins
    assert_eq!(e.len(), 1);
    assert_eq!(e[0].line, 1);
    let e = parse("point B = free_point(0, 0)\npoint A = line_through(B)\n").unwrap_err();
    assert_eq!((e[0].line, e[0].column), (2, 11));
    assert!(e[0].message.contains("line_through takes"), "{}", e[0].message);
}

#[test]
fn type_errors_name_the_argument() {
    let src = "point A = free_point(0, 0)\npoint B = free_point(1, 0)\ncircle c = circle_center_point(A, B)\nline l = line_through(A, c)\n";
    let e = parse(src).unwrap_err();
    assert!(e[0].message.contains("'c' is a circle"), "{}", e[0].message);
    let e = parse("line A = free_point(0, 0)\n").unwrap_err();
    assert!(e[0].message.contains("produces a point"));
}

#[test]
fn toolset_header_rules() {
    let e = parse("toolset EUCLID\n").unwrap_err();
    assert_eq!(e[0].message, "unknown toolset 'EUCLID'");
    assert_eq!(e[0].column, 9);
    let e = parse("point A = free_point(0, 0)\ntoolset FULL\n").unwrap_err();
    assert_eq!(e[0].line, 2);
    let f = parse("# comment first\n\ntoolset euclid_book1\n").unwrap();
    assert_eq!(f.toolset, Toolset::euclid_book1());
}

#[test]
fn reserved_and_duplicate_names() {
    assert!(parse("point pi = free_point(0, 0)\n").is_err());
    assert!(parse("point point = free_point(0, 0)\n").is_err());
    let e = parse("point A = free_point(0, 0)\npoint A = free_point(1, 0)\n").unwrap_err();
    assert_eq!(e[0].message, "'A' is already defined");
}

#[test]
fn branch_selector_defaults_and_bounds() {
    let base = "circle c = circle_center_point(A, B)\ncircle d = circle_center_point(B, A)\n";
    let head = "point A = free_point(0, 0)\npoint B = free_point(1, 0)\n";
    let f = parse(&format!("{head}{base}point C = intersect(c, d)\n")).unwrap();
    assert_eq!(f.steps[4].branch, Some(0));
    assert!(parse(&format!("{head}{base}point C = intersect(c, d, branch=2)\n")).is_err());
    assert!(parse(&format!("{head}point M = midpoint(A, B, branch=1)\n")).is_err());
}

#[test]
fn invalid_utf8_is_an_error_not_a_panic() {
    let e = parse_bytes(b"point A = free_point(0, \xff)\n").unwrap_err();
    assert_eq!(e[0].line, 1);
}

#[test]
fn empty_figure() {
    assert_eq!(serialize(&Figure::default()), "toolset FULL\n");
    assert_eq!(
        serialize(&Figure::new(Toolset::postulates_only())),
        "toolset POSTULATES_ONLY\n"
    );
}

#[test]
fn macro_definition_precedes_use() {
    let text = serialize(&parse(corpus::EUCLID_I2).unwrap());
    let def = text.find("macro transport_segment").unwrap();
    let use_ = text.find("= transport_segment(").unwrap();
    assert!(def < use_);
    assert!(text.find("macro compass_by_transport").unwrap() < text.find("= compass_by_transport(").unwrap());
}

#[test]
fn megabyte_input_is_handled_quickly() {
    let mut rng_state = 0x2545_f491_4f6c_dd1du64;
    let mut bytes = Vec::with_capacity(1 << 20);
    let alphabet = b"point circle = ( ) , A B c1 free_point intersect branch=0 1.5 sqrt pi \n#";
    while bytes.len() < 1 << 20 {
        rng_state ^= rng_state << 13;
        rng_state ^= rng_state >> 7;
        rng_state ^= rng_state << 17;
        bytes.push(alphabet[(rng_state % alphabet.len() as u64) as usize]);
    }
    let start = Instant::now();
    let _ = parse_bytes(&bytes);
    assert!(start.elapsed() < Duration::from_secs(20));

    // many valid statements
    let mut src = String::from("toolset FULL\n");
    let mut k = 0;
    while src.len() < 1 << 20 {
        src.push_str(&format!("point P{k} = free_point({k}, sqrt(2)/{})\n", k + 1));
        k += 1;
    }
    let start = Instant::now();
    let fig = parse(&src).unwrap();
    assert_eq!(fig.steps.len(), k);
    assert!(start.elapsed() < Duration::from_secs(20));
}

/// The character an error points at is part of a token on that line.
fn points_at_token(src: &str, e: &ParseError) -> bool {
    let Some(line) = src.lines().nth(e.line - 1) else {
        return false;
    };
    line.chars().nth(e.column - 1).is_some_and(|c| !c.is_whitespace())
}

fn number() -> impl Strategy<Value = f64> {
    prop_oneof![
        -10.0..10.0f64,
        any::<f64>().prop_filter("finite", |x| x.is_finite()),
        Just(0.1),
        Just(-0.0),
        Just(5e-324),
    ]
}

prop_compose! {
    fn figure()(pts in prop::collection::vec((number(), number()), 2..6), circles in 0usize..4) -> Figure {
        let mut f = Figure::default();
        for (i, (x, y)) in pts.iter().enumerate() {
            f.push(Step::tool(ObjType::Point, &format!("P{i}"), ToolId::FreePoint, &[], &[*x, *y])).unwrap();
        }
        for k in 0..circles.min(pts.len() - 1) {
            let (a, b) = (format!("P{k}"), format!("P{}", k + 1));
            f.push(Step::tool(ObjType::Circle, &format!("c{k}"), ToolId::CircleCenterPoint, &[&a, &b], &[])).unwrap();
        }
        if circles >= 2 && pts.len() >= 3 {
            f.push(Step::tool(ObjType::Point, "X", ToolId::Intersect, &["c0", "c1"], &[]).with_branch(1)).unwrap();
        }
        f
    }
}

proptest! {
    #[test]
    fn numbers_print_exactly(x in any::<f64>().prop_filter("finite", |x| x.is_finite())) {
        let s = format_number(x);
        prop_assert_eq!(s.parse::<f64>().unwrap(), x);
    }

    #[test]
    fn serialize_parse_round_trip(f in figure()) {
        let text = serialize(&f);
        let g = parse(&text).unwrap();
        prop_assert_eq!(&g, &f);
        prop_assert_eq!(serialize(&g), text);
    }

    #[test]
    fn arbitrary_bytes_never_panic(bytes in prop::collection::vec(any::<u8>(), 0..4096)) {
        let _ = parse_bytes(&bytes);
    }

    #[test]
    fn errors_point_at_tokens(pos in 0usize..4000, junk in "[a-z0-9(),=$ ]{1,6}") {
        let src = corpus::EUCLID_I2;
        let mut at = pos % src.len();
        while !src.is_char_boundary(at) {
            at -= 1;
        }
        let mutated = format!("{}{}{}", &src[..at], junk, &src[at..]);
        if let Err(errors) = parse(&mutated) {
            for e in &errors {
                prop_assert!(points_at_token(&mutated, e), "{:?} in\n{}", e, mutated);
                prop_assert!(e.expected.is_some() || e.found.is_some() || !e.message.is_empty());
            }
        }
    }
}
