use super::{BinOp, Expr, ExprError, Func, Var};

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(f64),
    Ident(String),
    Op(char),
    LParen,
    RParen,
    End,
}

struct Lexer<'a> {
    src: &'a str,
    pos: usize,
}

impl<'a> Lexer<'a> {
    fn tokens(src: &'a str) -> Result<Vec<(usize, Tok)>, ExprError> {
        let mut lx = Lexer { src, pos: 0 };
        let mut out = Vec::new();
        loop {
            let (off, tok) = lx.next()?;
            let end = tok == Tok::End;
            out.push((off, tok));
            if end {
                return Ok(out);
            }
        }
    }

    fn peek(&self) -> Option<char> {
        self.src[self.pos..].chars().next()
    }

    fn next(&mut self) -> Result<(usize, Tok), ExprError> {
        while let Some(c) = self.peek() {
            if c.is_whitespace() {
                self.pos += c.len_utf8();
            } else {
                break;
            }
        }
        let start = self.pos;
        let Some(c) = self.peek() else {
            return Ok((start, Tok::End));
        };
        if c.is_ascii_digit() || c == '.' {
            return self.number(start);
        }
        if c.is_ascii_alphabetic() || c == '_' {
            while let Some(c) = self.peek() {
                if c.is_ascii_alphanumeric() || c == '_' {
                    self.pos += 1;
                } else {
                    break;
                }
            }
            return Ok((start, Tok::Ident(self.src[start..self.pos].to_string())));
        }
        self.pos += c.len_utf8();
        let tok = match c {
            '+' | '-' | '*' | '/' | '^' => Tok::Op(c),
            '(' => Tok::LParen,
            ')' => Tok::RParen,
            other => {
                return Err(ExprError::Syntax {
                    offset: start,
                    message: format!("unexpected character `{other}`"),
                })
            }
        };
        Ok((start, tok))
    }

    fn number(&mut self, start: usize) -> Result<(usize, Tok), ExprError> {
        let bytes = self.src.as_bytes();
        let digits = |pos: &mut usize| {
            while *pos < bytes.len() && bytes[*pos].is_ascii_digit() {
                *pos += 1;
            }
        };
        let mut p = self.pos;
        digits(&mut p);
        if p < bytes.len() && bytes[p] == b'.' {
            p += 1;
            digits(&mut p);
        }
        if p < bytes.len() && (bytes[p] == b'e' || bytes[p] == b'E') {
            let mut q = p + 1;
            if q < bytes.len() && (bytes[q] == b'+' || bytes[q] == b'-') {
                q += 1;
            }
            let before = q;
            digits(&mut q);
            if q > before {
                p = q;
            }
        }
        self.pos = p;
        let text = &self.src[start..p];
        text.parse::<f64>()
            .map(|v| (start, Tok::Num(v)))
            .map_err(|_| ExprError::Syntax {
                offset: start,
                message: format!("malformed number `{text}`"),
            })
    }
}

struct Parser {
    toks: Vec<(usize, Tok)>,
    i: usize,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.i].1
    }

    fn offset(&self) -> usize {
        self.toks[self.i].0
    }

    fn bump(&mut self) -> (usize, Tok) {
        let t = self.toks[self.i].clone();
        if self.i + 1 < self.toks.len() {
            self.i += 1;
        }
        t
    }

    fn error<T>(&self, message: impl Into<String>) -> Result<T, ExprError> {
        Err(ExprError::Syntax {
            offset: self.offset(),
            message: message.into(),
        })
    }

    fn expr(&mut self) -> Result<Expr, ExprError> {
        let mut lhs = self.term()?;
        loop {
            let op = match self.peek() {
                Tok::Op('+') => BinOp::Add,
                Tok::Op('-') => BinOp::Sub,
                _ => return Ok(lhs),
            };
            self.bump();
            let rhs = self.term()?;
            lhs = Expr::Bin(op, Box::new(lhs), Box::new(rhs));
        }
    }

    fn term(&mut self) -> Result<Expr, ExprError> {
        let mut lhs = self.unary()?;
        loop {
            let op = match self.peek() {
                Tok::Op('*') => BinOp::Mul,
                Tok::Op('/') => BinOp::Div,
                _ => return Ok(lhs),
            };
            self.bump();
            let rhs = self.unary()?;
            lhs = Expr::Bin(op, Box::new(lhs), Box::new(rhs));
        }
    }

    fn unary(&mut self) -> Result<Expr, ExprError> {
        if *self.peek() == Tok::Op('-') {
            self.bump();
            return Ok(Expr::Neg(Box::new(self.unary()?)));
        }
        self.power()
    }

    fn power(&mut self) -> Result<Expr, ExprError> {
        let base = self.atom()?;
        if *self.peek() == Tok::Op('^') {
            self.bump();
            let exponent = self.unary()?;
            return Ok(Expr::Bin(BinOp::Pow, Box::new(base), Box::new(exponent)));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Expr, ExprError> {
        let (offset, tok) = self.bump();
        match tok {
            Tok::Num(v) => Ok(Expr::Num(v)),
            Tok::LParen => {
                let e = self.expr()?;
                self.expect_rparen()?;
                Ok(e)
            }
            Tok::Ident(name) => match name.as_str() {
                "t" => Ok(Expr::Var(Var::T)),
                "x" => Ok(Expr::Var(Var::X)),
                "exp" | "sin" | "cos" | "abs" => {
                    let func = match name.as_str() {
                        "exp" => Func::Exp,
                        "sin" => Func::Sin,
                        "cos" => Func::Cos,
                        _ => Func::Abs,
                    };
                    if *self.peek() != Tok::LParen {
                        return self.error(format!("expected `(` after `{name}`"));
                    }
                    self.bump();
                    let arg = self.expr()?;
                    self.expect_rparen()?;
                    Ok(Expr::Call(func, Box::new(arg)))
                }
                _ => Err(ExprError::UnknownIdentifier { offset, name }),
            },
            Tok::End => Err(ExprError::Syntax {
                offset,
                message: "unexpected end of input".into(),
            }),
            other => Err(ExprError::Syntax {
                offset,
                message: format!("unexpected token {}", describe(&other)),
            }),
        }
    }

    fn expect_rparen(&mut self) -> Result<(), ExprError> {
        if *self.peek() == Tok::RParen {
            self.bump();
            Ok(())
        } else {
            self.error("expected `)`")
        }
    }
}

fn describe(tok: &Tok) -> String {
    match tok {
        Tok::Num(v) => format!("number {v}"),
        Tok::Ident(s) => format!("`{s}`"),
        Tok::Op(c) => format!("`{c}`"),
        Tok::LParen => "`(`".into(),
        Tok::RParen => "`)`".into(),
        Tok::End => "end of input".into(),
    }
}

/// Parses the grammar described in the module docs.
pub fn parse_expression(source: &str) -> Result<Expr, ExprError> {
    let toks = Lexer::tokens(source)?;
    let mut p = Parser { toks, i: 0 };
    let e = p.expr()?;
    if *p.peek() != Tok::End {
        let msg = format!("unexpected token {}", describe(p.peek()));
        return p.error(msg);
    }
    Ok(e)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn eval(src: &str) -> f64 {
        parse_expression(src).unwrap().eval(0.5, 2.0).unwrap()
    }

    #[test]
    fn precedence_and_associativity() {
        assert_eq!(eval("1 + 2 * 3"), 7.0);
        assert_eq!(eval("2 ^ 3 ^ 2"), 512.0);
        assert_eq!(eval("-2 ^ 2"), -4.0);
        assert_eq!(eval("2 ^ -1"), 0.5);
        assert_eq!(eval("8 / 4 / 2"), 1.0);
        assert_eq!(eval("1 - 2 - 3"), -4.0);
        assert_eq!(eval("(1 - 2) * 3"), -3.0);
        assert_eq!(eval("--x"), 2.0);
        assert_eq!(eval("1.5e1 + .5"), 15.5);
        assert_eq!(eval("abs(t - x)"), 1.5);
    }

    #[test]
    fn incomplete_input_reports_offset() {
        assert_eq!(
            parse_expression("t +"),
            Err(ExprError::Syntax {
                offset: 3,
                message: "unexpected end of input".into()
            })
        );
    }

    #[test]
    fn unknown_identifier() {
        assert!(matches!(
            parse_expression("2 * y"),
            Err(ExprError::UnknownIdentifier { offset: 4, .. })
        ));
        assert!(matches!(
            parse_expression("log(x)"),
            Err(ExprError::UnknownIdentifier { offset: 0, .. })
        ));
    }

    #[test]
    fn syntax_errors() {
        assert!(matches!(parse_expression("(t"), Err(ExprError::Syntax { offset: 2, .. })));
        assert!(matches!(parse_expression("t t"), Err(ExprError::Syntax { offset: 2, .. })));
        assert!(matches!(parse_expression("sin x"), Err(ExprError::Syntax { offset: 4, .. })));
        assert!(matches!(parse_expression("2 $ 3"), Err(ExprError::Syntax { offset: 2, .. })));
        assert!(matches!(parse_expression(""), Err(ExprError::Syntax { offset: 0, .. })));
    }
}
