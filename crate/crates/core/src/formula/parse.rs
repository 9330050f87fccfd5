//! Recursive-descent parser for the formula grammar.
//!
//! Precedence, loosest first: `<->`, `->` (both right associative), `|`,
//! `&` (left associative), the binary temporal connectives `U R S T` (right
//! associative), then prefix operators `! X N F G Y Z O H`.

use super::{Dialect, Expr, Formula, FormulaError, KEYWORDS};

/// Dialect requested by the caller of [`parse_formula`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DialectHint {
    Future,
    Past,
    Auto,
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Ident(String),
    LParen,
    RParen,
    Bang,
    Amp,
    Pipe,
    Arrow,
    DArrow,
    Eof,
}

fn tokenize(text: &str) -> Result<Vec<(Tok, usize)>, FormulaError> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        if c.is_ascii_whitespace() {
            i += 1;
            continue;
        }
        let start = i;
        let tok = match c {
            b'(' => Tok::LParen,
            b')' => Tok::RParen,
            b'!' => Tok::Bang,
            b'&' => Tok::Amp,
            b'|' => Tok::Pipe,
            b'-' if bytes.get(i + 1) == Some(&b'>') => {
                i += 1;
                Tok::Arrow
            }
            b'<' if bytes.get(i + 1) == Some(&b'-') && bytes.get(i + 2) == Some(&b'>') => {
                i += 2;
                Tok::DArrow
            }
            c if c.is_ascii_alphabetic() || c == b'_' => {
                while i + 1 < bytes.len() && (bytes[i + 1].is_ascii_alphanumeric() || bytes[i + 1] == b'_') {
                    i += 1;
                }
                Tok::Ident(text[start..=i].to_string())
            }
            _ => {
                let ch = text[start..].chars().next().unwrap_or('?');
                return Err(FormulaError::Syntax {
                    offset: start,
                    message: format!("unexpected character `{ch}`"),
                });
            }
        };
        i += 1;
        out.push((tok, start));
    }
    out.push((Tok::Eof, text.len()));
    Ok(out)
}

struct Parser {
    toks: Vec<(Tok, usize)>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].0
    }

    fn offset(&self) -> usize {
        self.toks[self.pos].1
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.pos].0.clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn err<T>(&self, message: impl Into<String>) -> Result<T, FormulaError> {
        Err(FormulaError::Syntax { offset: self.offset(), message: message.into() })
    }

    fn peek_keyword(&self, kws: &[&str]) -> Option<String> {
        match self.peek() {
            Tok::Ident(s) if kws.contains(&s.as_str()) => Some(s.clone()),
            _ => None,
        }
    }

    fn iff(&mut self) -> Result<Expr, FormulaError> {
        let lhs = self.implies()?;
        if *self.peek() == Tok::DArrow {
            self.bump();
            let rhs = self.iff()?;
            return Ok(Expr::iff(lhs, rhs));
        }
        Ok(lhs)
    }

    fn implies(&mut self) -> Result<Expr, FormulaError> {
        let lhs = self.or()?;
        if *self.peek() == Tok::Arrow {
            self.bump();
            let rhs = self.implies()?;
            return Ok(Expr::implies(lhs, rhs));
        }
        Ok(lhs)
    }

    fn or(&mut self) -> Result<Expr, FormulaError> {
        let mut lhs = self.and()?;
        while *self.peek() == Tok::Pipe {
            self.bump();
            let rhs = self.and()?;
            lhs = Expr::or(lhs, rhs);
        }
        Ok(lhs)
    }

    fn and(&mut self) -> Result<Expr, FormulaError> {
        let mut lhs = self.temporal()?;
        while *self.peek() == Tok::Amp {
            self.bump();
            let rhs = self.temporal()?;
            lhs = Expr::and(lhs, rhs);
        }
        Ok(lhs)
    }

    fn temporal(&mut self) -> Result<Expr, FormulaError> {
        let lhs = self.unary()?;
        if let Some(op) = self.peek_keyword(&["U", "R", "S", "T"]) {
            self.bump();
            let rhs = self.temporal()?;
            return Ok(match op.as_str() {
                "U" => Expr::until(lhs, rhs),
                "R" => Expr::release(lhs, rhs),
                "S" => Expr::since(lhs, rhs),
                _ => Expr::trigger(lhs, rhs),
            });
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<Expr, FormulaError> {
        if *self.peek() == Tok::Bang {
            self.bump();
            return Ok(Expr::not(self.unary()?));
        }
        if let Some(op) = self.peek_keyword(&["X", "N", "F", "G", "Y", "Z", "O", "H"]) {
            self.bump();
            let arg = self.unary()?;
            return Ok(match op.as_str() {
                "X" => Expr::next(arg),
                "N" => Expr::weak_next(arg),
                "F" => Expr::eventually(arg),
                "G" => Expr::globally(arg),
                "Y" => Expr::yesterday(arg),
                "Z" => Expr::weak_yesterday(arg),
                "O" => Expr::once(arg),
                _ => Expr::historically(arg),
            });
        }
        self.primary()
    }

    fn primary(&mut self) -> Result<Expr, FormulaError> {
        match self.peek().clone() {
            Tok::LParen => {
                self.bump();
                let e = self.iff()?;
                if *self.peek() != Tok::RParen {
                    return self.err("expected `)`");
                }
                self.bump();
                Ok(e)
            }
            Tok::Ident(s) if s == "true" => {
                self.bump();
                Ok(Expr::True)
            }
            Tok::Ident(s) if s == "false" => {
                self.bump();
                Ok(Expr::False)
            }
            Tok::Ident(s) if KEYWORDS.contains(&s.as_str()) => {
                self.err(format!("unexpected operator `{s}`"))
            }
            Tok::Ident(s) => {
                self.bump();
                Ok(Expr::Atom(s))
            }
            Tok::Eof => self.err("unexpected end of input"),
            t => self.err(format!("unexpected token {t:?}")),
        }
    }
}

/// Parses `text` into a formula of the requested dialect. With
/// [`DialectHint::Auto`] the dialect is inferred from the connectives used.
pub fn parse_formula(text: &str, hint: DialectHint) -> Result<Formula, FormulaError> {
    let toks = tokenize(text)?;
    let mut p = Parser { toks, pos: 0 };
    let expr = p.iff()?;
    if *p.peek() != Tok::Eof {
        return p.err("trailing input");
    }
    match hint {
        DialectHint::Auto => Formula::infer(expr),
        DialectHint::Future => Formula::new(expr, Dialect::Future),
        DialectHint::Past => Formula::new(expr, Dialect::Past),
    }
}
