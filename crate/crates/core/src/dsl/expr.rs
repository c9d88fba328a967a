use super::lex::{Tok, Token};

const MAX_DEPTH: usize = 64;

/// Names usable inside numeric arguments; they cannot name objects.
pub(crate) const RESERVED: [&str; 3] = ["pi", "phi", "sqrt"];

/// Failure inside a numeric argument: column, what was expected, what was
/// found.
#[derive(Debug, Clone, PartialEq)]
pub(crate) struct ExprError {
    pub col: usize,
    pub expected: String,
    pub found: Option<String>,
}

/// Folds a numeric argument: `+ - * /`, parentheses, `sqrt(…)`, `pi` and
/// `phi`. `end_col` is reported when the tokens run out.
pub(crate) fn fold(tokens: &[Token], end_col: usize) -> Result<f64, ExprError> {
    let mut p = Parser {
        toks: tokens,
        pos: 0,
        end_col,
        depth: 0,
    };
    let v = p.expr()?;
    if let Some(t) = p.peek() {
        return Err(ExprError {
            col: t.col,
            expected: "operator or ','".into(),
            found: Some(t.kind.describe()),
        });
    }
    if !v.is_finite() {
        return Err(ExprError {
            col: tokens.first().map_or(end_col, |t| t.col),
            expected: "a finite number".into(),
            found: Some(v.to_string()),
        });
    }
    Ok(v)
}

struct Parser<'a> {
    toks: &'a [Token],
    pos: usize,
    end_col: usize,
    depth: usize,
}

impl Parser<'_> {
    fn peek(&self) -> Option<&Token> {
        self.toks.get(self.pos)
    }

    fn sym(&self, c: char) -> bool {
        matches!(self.peek(), Some(Token { kind: Tok::Sym(s), .. }) if *s == c)
    }

    fn fail<T>(&self, expected: &str) -> Result<T, ExprError> {
        Err(match self.peek() {
            Some(t) => ExprError {
                col: t.col,
                expected: expected.into(),
                found: Some(t.kind.describe()),
            },
            None => ExprError {
                col: self.end_col,
                expected: expected.into(),
                found: Some("end of argument".into()),
            },
        })
    }

    fn expr(&mut self) -> Result<f64, ExprError> {
        self.depth += 1;
        if self.depth > MAX_DEPTH {
            return self.fail("shallower nesting");
        }
        let mut v = self.term()?;
        loop {
            if self.sym('+') {
                self.pos += 1;
                v += self.term()?;
            } else if self.sym('-') {
                self.pos += 1;
                v -= self.term()?;
            } else {
                break;
            }
        }
        self.depth -= 1;
        Ok(v)
    }

    fn term(&mut self) -> Result<f64, ExprError> {
        let mut v = self.unary()?;
        loop {
            if self.sym('*') {
                self.pos += 1;
                v *= self.unary()?;
            } else if self.sym('/') {
                self.pos += 1;
                v /= self.unary()?;
            } else {
                break;
            }
        }
        Ok(v)
    }

    fn unary(&mut self) -> Result<f64, ExprError> {
        let mut neg = false;
        let mut count = 0;
        while self.sym('-') || self.sym('+') {
            neg ^= self.sym('-');
            self.pos += 1;
            count += 1;
            if count > MAX_DEPTH {
                return self.fail("a number");
            }
        }
        let v = self.atom()?;
        Ok(if neg { -v } else { v })
    }

    fn atom(&mut self) -> Result<f64, ExprError> {
        let Some(t) = self.peek().cloned() else {
            return self.fail("a number");
        };
        match t.kind {
            Tok::Number(x) => {
                self.pos += 1;
                Ok(x)
            }
            Tok::Ident(ref s) if s == "pi" => {
                self.pos += 1;
                Ok(std::f64::consts::PI)
            }
            Tok::Ident(ref s) if s == "phi" => {
                self.pos += 1;
                Ok((1.0 + 5f64.sqrt()) / 2.0)
            }
            Tok::Ident(ref s) if s == "sqrt" => {
                self.pos += 1;
                let v = self.paren()?;
                if v < 0.0 {
                    return Err(ExprError {
                        col: t.col,
                        expected: "a non-negative radicand".into(),
                        found: Some(v.to_string()),
                    });
                }
                Ok(v.sqrt())
            }
            Tok::Sym('(') => self.paren(),
            _ => self.fail("a number"),
        }
    }

    fn paren(&mut self) -> Result<f64, ExprError> {
        if !self.sym('(') {
            return self.fail("'('");
        }
        self.pos += 1;
        let v = self.expr()?;
        if !self.sym(')') {
            return self.fail("')'");
        }
        self.pos += 1;
        Ok(v)
    }
}

#[cfg(test)]
mod tests {
    use super::super::lex::tokenize;
    use super::*;

    fn eval(s: &str) -> Result<f64, ExprError> {
        fold(&tokenize(s).unwrap(), s.len() + 1)
    }

    #[test]
    fn arithmetic() {
        assert_eq!(eval("sqrt(3)/2").unwrap(), 3f64.sqrt() / 2.0);
        assert_eq!(eval("-(1 + 2) * 4").unwrap(), -12.0);
        assert_eq!(eval("2*pi").unwrap(), std::f64::consts::TAU);
        assert!((eval("phi - 1").unwrap() - (5f64.sqrt() - 1.0) / 2.0).abs() < 1e-15);
        assert_eq!(eval("7/8").unwrap(), 0.875);
    }

    #[test]
    fn errors_point_at_tokens() {
        assert_eq!(eval("1 +").unwrap_err().col, 4);
        assert_eq!(eval("sqrt(-1)").unwrap_err().col, 1);
        assert_eq!(eval("1/0").unwrap_err().expected, "a finite number");
        assert_eq!(eval("2 3").unwrap_err().col, 3);
        let deep = format!("{}1{}", "(".repeat(200), ")".repeat(200));
        assert!(eval(&deep).is_err());
    }
}
