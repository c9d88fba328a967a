//! The `.geo` construction language.
//!
//! One statement per line, `#` starts a comment:
//!
//! ```text
//! toolset POSTULATES_ONLY
//! point A = free_point(0, 0)
//! point B = free_point(1, 0)
//! circle c1 = circle_center_point(A, B)
//! circle c2 = circle_center_point(B, A)
//! point C = intersect(c1, c2, branch=0)
//! polygon t = polygon(A, B, C)
//! ```
//!
//! Numeric arguments may use `+ - * /`, parentheses, `sqrt(…)`, `pi` and
//! `phi`; they are folded when parsed. Macros are defined with
//!
//! ```text
//! macro name(point P, circle c) {
//!     point X = ...
//!     return X
//! }
//! ```
//!
//! and called like tools, with one declared target per returned object:
//! `point U, point V = name(A, k)`.

mod expr;
mod lex;

use std::collections::HashMap;
use std::fmt;

use crate::construction::{Call, EngineError, Figure, Macro, ObjType, Step, ToolId, Toolset};
use crate::geom::Scalar;
use lex::{tokenize, Tok, Token};

/// A located parse diagnostic.
#[derive(Debug, Clone, PartialEq)]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub expected: Option<String>,
    pub found: Option<String>,
    pub message: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}: {}", self.line, self.column, self.message)?;
        match (&self.expected, &self.found) {
            (Some(e), Some(x)) => write!(f, " (expected {e}, found {x})"),
            (Some(e), None) => write!(f, " (expected {e})"),
            (None, Some(x)) => write!(f, " (found {x})"),
            (None, None) => Ok(()),
        }
    }
}

impl std::error::Error for ParseError {}

/// Formats a number with 17 significant digits, dropping trailing zeros.
pub fn format_number(x: Scalar) -> String {
    if x == 0.0 {
        return "0".into();
    }
    let sci = format!("{x:.16e}");
    let (mant, exp) = sci.split_once('e').expect("scientific format");
    let exp: i32 = exp.parse().expect("exponent");
    let neg = mant.starts_with('-');
    let digits: String = mant.chars().filter(char::is_ascii_digit).collect();
    let digits = digits.trim_end_matches('0');
    let digits = if digits.is_empty() { "0" } else { digits };
    let sign = if neg { "-" } else { "" };
    if (-5..=16).contains(&exp) {
        let n = digits.len() as i32;
        if exp < 0 {
            format!("{sign}0.{}{digits}", "0".repeat((-exp - 1) as usize))
        } else if exp + 1 >= n {
            format!("{sign}{digits}{}", "0".repeat((exp + 1 - n) as usize))
        } else {
            let (a, b) = digits.split_at((exp + 1) as usize);
            format!("{sign}{a}.{b}")
        }
    } else {
        let (a, b) = digits.split_at(1);
        if b.is_empty() {
            format!("{sign}{a}e{exp}")
        } else {
            format!("{sign}{a}.{b}e{exp}")
        }
    }
}

/// Parses raw bytes, treating invalid UTF-8 sequences as replacement
/// characters (which then fail to tokenize).
pub fn parse_bytes(src: &[u8]) -> Result<Figure, Vec<ParseError>> {
    parse(&String::from_utf8_lossy(src))
}

/// Parses a whole file, reporting every bad statement.
pub fn parse(src: &str) -> Result<Figure, Vec<ParseError>> {
    let mut p = FileParser {
        fig: Figure::default(),
        scope: HashMap::new(),
        errors: Vec::new(),
        open: None,
        seen_statement: false,
    };
    for (i, raw) in src.lines().enumerate() {
        let text = raw.split('#').next().unwrap_or("");
        p.line(i + 1, text);
    }
    if let Some(m) = p.open.take() {
        p.errors.push(err_at(
            m.line,
            m.col,
            None,
            None,
            format!("macro '{}' is not closed", m.def.name),
        ));
    }
    if p.errors.is_empty() {
        Ok(p.fig)
    } else {
        Err(p.errors)
    }
}

struct OpenMacro {
    def: Macro,
    line: usize,
    col: usize,
    scope: HashMap<String, ObjType>,
    returned: bool,
    broken: bool,
}

struct FileParser {
    fig: Figure,
    scope: HashMap<String, ObjType>,
    errors: Vec<ParseError>,
    open: Option<OpenMacro>,
    seen_statement: bool,
}

enum Arg {
    Obj(String, usize),
    Num(Scalar, usize),
    Branch(u8, usize),
}

struct Decl {
    outputs: Vec<(ObjType, String, usize)>,
    name: String,
    name_col: usize,
    args: Vec<Arg>,
}

fn err_at(line: usize, column: usize, expected: Option<String>, found: Option<String>, message: String) -> ParseError {
    ParseError {
        line,
        column,
        expected,
        found,
        message,
    }
}

fn ident(t: Option<&Token>) -> Option<(&str, usize)> {
    match t {
        Some(Token {
            kind: Tok::Ident(s),
            col,
        }) => Some((s, *col)),
        _ => None,
    }
}

fn is_sym(t: Option<&Token>, c: char) -> bool {
    matches!(t, Some(Token { kind: Tok::Sym(s), .. }) if *s == c)
}

/// Cursor over one line's tokens that builds located errors.
struct Cursor<'a> {
    toks: &'a [Token],
    pos: usize,
    line: usize,
    end_col: usize,
}

impl<'a> Cursor<'a> {
    fn peek(&self) -> Option<&'a Token> {
        self.toks.get(self.pos)
    }

    fn error(&self, expected: &str) -> ParseError {
        match self.peek() {
            Some(t) => err_at(
                self.line,
                t.col,
                Some(expected.into()),
                Some(t.kind.describe()),
                format!("expected {expected}"),
            ),
            None => err_at(
                self.line,
                self.toks.last().map_or(self.end_col, |t| t.col),
                Some(expected.into()),
                Some("end of line".into()),
                format!("expected {expected}"),
            ),
        }
    }

    fn ident(&mut self, what: &str) -> Result<(&'a str, usize), ParseError> {
        match ident(self.peek()) {
            Some(x) => {
                self.pos += 1;
                Ok(x)
            }
            None => Err(self.error(what)),
        }
    }

    fn sym(&mut self, c: char) -> Result<usize, ParseError> {
        match self.peek() {
            Some(t) if is_sym(Some(t), c) => {
                self.pos += 1;
                Ok(t.col)
            }
            _ => Err(self.error(&format!("'{c}'"))),
        }
    }

    fn done(&self) -> Result<(), ParseError> {
        match self.peek() {
            None => Ok(()),
            Some(_) => Err(self.error("end of line")),
        }
    }

    fn ty(&mut self) -> Result<(ObjType, usize), ParseError> {
        let save = self.pos;
        let (name, col) = self.ident("an object type")?;
        match ObjType::from_name(name) {
            Some(t) => Ok((t, col)),
            None => {
                self.pos = save;
                Err(self.error("an object type (point, line, segment, ray, circle, conic, scalar, locus, polygon)"))
            }
        }
    }

    fn object_name(&mut self) -> Result<(&'a str, usize), ParseError> {
        let save = self.pos;
        let (name, col) = self.ident("an identifier")?;
        if expr::RESERVED.contains(&name) || ObjType::from_name(name).is_some() {
            self.pos = save;
            return Err(err_at(
                self.line,
                col,
                Some("an identifier".into()),
                Some(format!("reserved word '{name}'")),
                format!("'{name}' is reserved"),
            ));
        }
        Ok((name, col))
    }
}

impl FileParser {
    fn line(&mut self, line: usize, text: &str) {
        let toks = match tokenize(text) {
            Ok(t) => t,
            Err((col, c)) => {
                self.fail(err_at(
                    line,
                    col,
                    None,
                    Some(format!("{c:?}")),
                    format!("unexpected character {c:?}"),
                ));
                return;
            }
        };
        if toks.is_empty() {
            return;
        }
        let end_col = text.chars().count() + 1;
        let mut cur = Cursor {
            toks: &toks,
            pos: 0,
            line,
            end_col,
        };
        let first = ident(toks.first()).map(|(s, _)| s);
        let result = match first {
            Some("toolset") => self.toolset(&mut cur),
            Some("macro") => self.macro_header(&mut cur),
            Some("return") if self.open.is_some() => self.macro_return(&mut cur),
            _ if is_sym(toks.first(), '}') && self.open.is_some() => self.macro_close(&mut cur),
            _ => parse_decl(&mut cur).and_then(|d| self.decl(line, d)),
        };
        self.seen_statement = true;
        if let Err(e) = result {
            self.fail(e);
        }
    }

    fn fail(&mut self, e: ParseError) {
        if let Some(m) = &mut self.open {
            m.broken = true;
        }
        self.errors.push(e);
    }

    fn toolset(&mut self, cur: &mut Cursor) -> Result<(), ParseError> {
        let (_, col) = cur.ident("'toolset'")?;
        if self.seen_statement || self.open.is_some() {
            return Err(err_at(
                cur.line,
                col,
                None,
                None,
                "the toolset header must be the first statement".into(),
            ));
        }
        let (name, ncol) = cur.ident("a toolset name")?;
        cur.done()?;
        match Toolset::by_name(name) {
            Some(t) => {
                self.fig.toolset = t;
                Ok(())
            }
            None => Err(err_at(
                cur.line,
                ncol,
                Some(format!(
                    "{}, {} or {}",
                    Toolset::POSTULATES_ONLY,
                    Toolset::EUCLID_BOOK1,
                    Toolset::FULL
                )),
                Some(format!("'{name}'")),
                format!("unknown toolset '{name}'"),
            )),
        }
    }

    fn macro_header(&mut self, cur: &mut Cursor) -> Result<(), ParseError> {
        let (_, col) = cur.ident("'macro'")?;
        if self.open.is_some() {
            return Err(err_at(cur.line, col, None, None, "macros cannot be nested".into()));
        }
        let (name, ncol) = cur.object_name()?;
        if ToolId::from_name(name).is_some() || self.fig.macros.contains_key(name) {
            return Err(err_at(
                cur.line,
                ncol,
                None,
                Some(format!("'{name}'")),
                format!("name clash: '{name}' is already a tool or macro"),
            ));
        }
        cur.sym('(')?;
        let mut formals = Vec::new();
        let mut scope = HashMap::new();
        if !is_sym(cur.peek(), ')') {
            loop {
                let (t, _) = cur.ty()?;
                let (id, icol) = cur.object_name()?;
                if scope.insert(id.to_string(), t).is_some() {
                    return Err(err_at(
                        cur.line,
                        icol,
                        None,
                        Some(format!("'{id}'")),
                        format!("formal '{id}' repeated"),
                    ));
                }
                formals.push((t, id.to_string()));
                if is_sym(cur.peek(), ',') {
                    cur.pos += 1;
                } else {
                    break;
                }
            }
        }
        cur.sym(')')?;
        cur.sym('{')?;
        cur.done()?;
        self.open = Some(OpenMacro {
            def: Macro {
                name: name.to_string(),
                formals,
                body: Vec::new(),
                outputs: Vec::new(),
            },
            line: cur.line,
            col,
            scope,
            returned: false,
            broken: false,
        });
        Ok(())
    }

    fn macro_return(&mut self, cur: &mut Cursor) -> Result<(), ParseError> {
        let (_, col) = cur.ident("'return'")?;
        let m = self.open.as_mut().expect("inside a macro");
        if m.returned {
            return Err(err_at(cur.line, col, None, None, "second return".into()));
        }
        let mut outs = Vec::new();
        loop {
            let (id, icol) = cur.ident("an identifier")?;
            if !m.scope.contains_key(id) {
                return Err(undefined(cur.line, icol, id));
            }
            outs.push(id.to_string());
            if is_sym(cur.peek(), ',') {
                cur.pos += 1;
            } else {
                break;
            }
        }
        cur.done()?;
        m.def.outputs = outs;
        m.returned = true;
        Ok(())
    }

    fn macro_close(&mut self, cur: &mut Cursor) -> Result<(), ParseError> {
        let col = cur.sym('}')?;
        cur.done()?;
        let m = self.open.take().expect("inside a macro");
        if m.broken {
            return Ok(());
        }
        if !m.returned {
            return Err(err_at(
                cur.line,
                col,
                Some("'return'".into()),
                Some("'}'".into()),
                format!("macro '{}' has no return", m.def.name),
            ));
        }
        self.fig
            .define_macro(m.def)
            .map_err(|e| err_at(m.line, m.col, None, None, e.to_string()))
    }

    fn decl(&mut self, line: usize, d: Decl) -> Result<(), ParseError> {
        let in_macro = self.open.is_some();
        let scope = match &self.open {
            Some(m) => &m.scope,
            None => &self.scope,
        };
        for (_, id, col) in &d.outputs {
            if scope.contains_key(id) {
                return Err(err_at(
                    line,
                    *col,
                    None,
                    Some(format!("'{id}'")),
                    format!("'{id}' is already defined"),
                ));
            }
        }
        let call = match ToolId::from_name(&d.name) {
            Some(t) => Call::Tool(t),
            None if self.fig.macros.contains_key(&d.name) => Call::Macro(d.name.clone()),
            None => {
                return Err(err_at(
                    line,
                    d.name_col,
                    Some("a tool or macro name".into()),
                    Some(format!("'{}'", d.name)),
                    format!("unknown tool '{}'", d.name),
                ));
            }
        };
        let mut step = Step {
            outputs: d.outputs.iter().map(|(t, id, _)| (*t, id.clone())).collect(),
            call,
            inputs: Vec::new(),
            params: Vec::new(),
            branch: None,
        };
        let mut stage = 0;
        for a in &d.args {
            match a {
                Arg::Obj(id, col) => {
                    if !scope.contains_key(id) {
                        return Err(undefined(line, *col, id));
                    }
                    if stage > 0 {
                        return Err(err_at(
                            line,
                            *col,
                            Some("a number or branch=".into()),
                            Some(format!("'{id}'")),
                            "objects must come before numbers".into(),
                        ));
                    }
                    step.inputs.push(id.clone());
                }
                Arg::Num(x, col) => {
                    if stage > 1 {
                        return Err(err_at(
                            line,
                            *col,
                            None,
                            None,
                            "branch= must be the last argument".into(),
                        ));
                    }
                    stage = 1;
                    step.params.push(*x);
                }
                Arg::Branch(b, col) => {
                    if stage > 1 {
                        return Err(err_at(line, *col, None, None, "branch= given twice".into()));
                    }
                    stage = 2;
                    step.branch = Some(*b);
                }
            }
        }
        if let Call::Tool(t) = &step.call {
            if t.signature().branch && step.branch.is_none() {
                step.branch = Some(0);
            }
        }
        let lookup = |id: &str| scope.get(id).copied();
        crate::construction::check_step(&step, &lookup, &self.fig.macros).map_err(|e| {
            let msg = match e {
                EngineError::MalformedFigure(m) => m,
                e => e.to_string(),
            };
            err_at(line, d.name_col, None, None, msg)
        })?;
        let target = match &mut self.open {
            Some(m) if in_macro => {
                m.def.body.push(step.clone());
                &mut m.scope
            }
            _ => {
                self.fig.steps.push(step.clone());
                &mut self.scope
            }
        };
        for (t, id) in step.outputs {
            target.insert(id, t);
        }
        Ok(())
    }
}

fn undefined(line: usize, col: usize, id: &str) -> ParseError {
    err_at(
        line,
        col,
        Some("a defined object".into()),
        Some(format!("'{id}'")),
        format!("undefined identifier '{id}'"),
    )
}

fn parse_decl(cur: &mut Cursor) -> Result<Decl, ParseError> {
    let mut outputs = Vec::new();
    loop {
        let (t, _) = cur.ty()?;
        let (id, col) = cur.object_name()?;
        outputs.push((t, id.to_string(), col));
        if is_sym(cur.peek(), ',') {
            cur.pos += 1;
        } else {
            break;
        }
    }
    cur.sym('=')?;
    let (name, name_col) = cur.ident("a tool or macro name")?;
    cur.sym('(')?;
    // the argument list runs to the matching ')', which must end the line
    let rest = &cur.toks[cur.pos..];
    let mut depth = 0usize;
    let mut close = None;
    for (i, t) in rest.iter().enumerate() {
        match t.kind {
            Tok::Sym('(') => depth += 1,
            Tok::Sym(')') if depth == 0 => {
                close = Some(i);
                break;
            }
            Tok::Sym(')') => depth -= 1,
            _ => {}
        }
    }
    let Some(close) = close else {
        cur.pos = cur.toks.len();
        return Err(cur.error("')'"));
    };
    let inner = &rest[..close];
    cur.pos += close + 1;
    cur.done()?;
    let mut args = Vec::new();
    if !inner.is_empty() {
        let mut depth = 0usize;
        let mut start = 0;
        let mut pieces = Vec::new();
        for (i, t) in inner.iter().enumerate() {
            match t.kind {
                Tok::Sym('(') => depth += 1,
                Tok::Sym(')') => depth = depth.saturating_sub(1),
                Tok::Sym(',') if depth == 0 => {
                    pieces.push((start, i));
                    start = i + 1;
                }
                _ => {}
            }
        }
        pieces.push((start, inner.len()));
        for (a, b) in pieces {
            let piece = &inner[a..b];
            let at = inner.get(b).map_or(rest[close].col, |t| t.col);
            args.push(parse_arg(cur.line, piece, at)?);
        }
    }
    Ok(Decl {
        outputs,
        name: name.to_string(),
        name_col,
        args,
    })
}

fn parse_arg(line: usize, piece: &[Token], end_col: usize) -> Result<Arg, ParseError> {
    match piece {
        [] => Err(err_at(
            line,
            end_col,
            Some("an argument".into()),
            Some("','".into()),
            "empty argument".into(),
        )),
        [Token {
            kind: Tok::Ident(s),
            col,
        }] if !expr::RESERVED.contains(&s.as_str()) => Ok(Arg::Obj(s.clone(), *col)),
        [Token {
            kind: Tok::Ident(b),
            col,
        }, Token {
            kind: Tok::Sym('='), ..
        }, rest @ ..]
            if b == "branch" =>
        {
            match rest {
                [Token {
                    kind: Tok::Number(x), ..
                }] if *x == 0.0 || *x == 1.0 => Ok(Arg::Branch(*x as u8, *col)),
                _ => Err(err_at(
                    line,
                    rest.first().map_or(*col, |t| t.col),
                    Some("0 or 1".into()),
                    rest.first().map(|t| t.kind.describe()),
                    "branch selector must be 0 or 1".into(),
                )),
            }
        }
        _ => expr::fold(piece, end_col)
            .map(|x| Arg::Num(x, piece[0].col))
            .map_err(|e| {
                err_at(
                    line,
                    e.col,
                    Some(e.expected.clone()),
                    e.found,
                    format!("bad number: expected {}", e.expected),
                )
            }),
    }
}

/// Writes a figure back as `.geo` text: the toolset header, macro
/// definitions, then the steps.
pub fn serialize(fig: &Figure) -> String {
    let mut out = format!("toolset {}\n", fig.toolset.name);
    for m in fig.macros.values() {
        let formals: Vec<String> = m.formals.iter().map(|(t, id)| format!("{t} {id}")).collect();
        out.push_str(&format!("\nmacro {}({}) {{\n", m.name, formals.join(", ")));
        for s in &m.body {
            out.push_str(&format!("    {}\n", step_text(s)));
        }
        out.push_str(&format!("    return {}\n}}\n", m.outputs.join(", ")));
    }
    if !fig.steps.is_empty() {
        out.push('\n');
    }
    for s in &fig.steps {
        out.push_str(&step_text(s));
        out.push('\n');
    }
    out
}

fn step_text(s: &Step) -> String {
    let outs: Vec<String> = s.outputs.iter().map(|(t, id)| format!("{t} {id}")).collect();
    let mut args: Vec<String> = s.inputs.clone();
    args.extend(s.params.iter().map(|x| format_number(*x)));
    if let Some(b) = s.branch {
        args.push(format!("branch={b}"));
    }
    format!("{} = {}({})", outs.join(", "), s.call.name(), args.join(", "))
}

#[cfg(test)]
mod tests {
    use super::*;

    const EUCLID_I1: &str = "\
toolset POSTULATES_ONLY
# Elements I.1
point A = free_point(0, 0)
point B = free_point(1, 0)
circle c1 = circle_center_point(A, B)
circle c2 = circle_center_point(B, A)
point C = intersect(c1, c2, branch=0)
polygon t = polygon(A, B, C)
";

    #[test]
    fn parses_euclid_i1() {
        let f = parse(EUCLID_I1).unwrap();
        assert_eq!(f.steps.len(), 6);
        assert_eq!(f.toolset.name, Toolset::POSTULATES_ONLY);
        assert_eq!(f.steps[4].branch, Some(0));
    }

    #[test]
    fn arity_error_is_located() {
        let e = parse("point A = free_point(0, 0)\npoint X = line_through(A)\n").unwrap_err();
        assert_eq!(e.len(), 1);
        assert_eq!((e[0].line, e[0].column), (2, 11));
    }

    #[test]
    fn forward_reference_names_the_identifier() {
        let e = parse("circle c = circle_center_point(A, B)\npoint A = free_point(0, 0)\n").unwrap_err();
        assert_eq!(e[0].message, "undefined identifier 'A'");
        assert_eq!((e[0].line, e[0].column), (1, 32));
    }

    #[test]
    fn all_errors_in_one_pass() {
        let src = "toolset NOPE\npoint A = free_point(0)\npoint B = free_point(1, 2\npoint C = frob(A)\n";
        let e = parse(src).unwrap_err();
        let lines: Vec<usize> = e.iter().map(|e| e.line).collect();
        assert_eq!(lines, vec![1, 2, 3, 4]);
        assert!(e[0].message.contains("unknown toolset"));
    }

    #[test]
    fn numbers_fold_and_print_exactly() {
        let f = parse("point C = free_point(1/2, sqrt(3)/2)\n").unwrap();
        assert_eq!(f.steps[0].params, vec![0.5, 3f64.sqrt() / 2.0]);
        for x in [0.1, -2.5e-12, 1e300, 123456789.125, 3f64.sqrt(), -0.0, 5e-324] {
            let s = format_number(x);
            assert_eq!(s.parse::<f64>().unwrap(), x, "{s}");
        }
        assert_eq!(format_number(0.5), "0.5");
        assert_eq!(format_number(100.0), "100");
        assert_eq!(format_number(2f64.powi(-20)), "9.5367431640625e-7");
        assert_eq!(format_number(0.1), "0.10000000000000001");
    }

    #[test]
    fn macros_round_trip() {
        let src = "\
toolset FULL
macro mid(point P, point Q) {
    point M = midpoint(P, Q)
    return M
}
point A = free_point(0, 0)
point B = free_point(2, 0)
point M = mid(A, B)
";
        let f = parse(src).unwrap();
        let text = serialize(&f);
        let g = parse(&text).unwrap();
        assert_eq!(f, g);
        assert_eq!(serialize(&g), text);
        assert!(text.find("macro").unwrap() < text.find("point A").unwrap());
    }

    #[test]
    fn macro_errors() {
        let e = parse("macro m(point P) {\n}\n").unwrap_err();
        assert!(e[0].message.contains("no return"));
        let e = parse("macro m(point P) {\n    point X = midpoint(P, Q)\n    return X\n}\n").unwrap_err();
        assert_eq!(e[0].message, "undefined identifier 'Q'");
        let e = parse("macro midpoint(point P) {\n").unwrap_err();
        assert!(e[0].message.contains("name clash"));
        let e = parse("macro m(point P) {\n    return P\n").unwrap_err();
        assert!(e[0].message.contains("not closed"));
    }

    #[test]
    fn empty_figure_serializes_to_header() {
        assert_eq!(serialize(&Figure::default()), "toolset FULL\n");
        assert_eq!(parse("").unwrap(), Figure::default());
    }
}
