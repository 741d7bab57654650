use num_bigint::BigInt;

use super::{QuadraticSurd, Rat};
use crate::error::{Error, Result};

/// Parses an exact real over Q(√d): integers, `+ - * /`, parentheses and
/// `sqrt(n)` with `n` a non-negative integer literal, e.g. `"(1+sqrt(5))/2"`.
pub fn parse_real(s: &str) -> Result<QuadraticSurd> {
    let toks = tokenize(s)?;
    let mut p = Parser { toks, pos: 0 };
    let v = p.expr()?;
    if p.pos != p.toks.len() {
        return Err(Error::Parse(format!("trailing input in {s:?}")));
    }
    Ok(v)
}

pub fn parse_rational(s: &str) -> Result<Rat> {
    parse_real(s)?
        .to_rational()
        .ok_or_else(|| Error::Parse(format!("{s:?} is not rational")))
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(BigInt),
    Sqrt,
    Op(char),
}

fn tokenize(s: &str) -> Result<Vec<Tok>> {
    let mut out = Vec::new();
    let cs: Vec<char> = s.chars().collect();
    let mut i = 0;
    while i < cs.len() {
        let ch = cs[i];
        if ch.is_whitespace() {
            i += 1;
        } else if ch.is_ascii_digit() {
            let st = i;
            while i < cs.len() && cs[i].is_ascii_digit() {
                i += 1;
            }
            let lit: String = cs[st..i].iter().collect();
            out.push(Tok::Num(lit.parse().map_err(|_| Error::Parse(lit.clone()))?));
        } else if "+-*/()".contains(ch) {
            out.push(Tok::Op(ch));
            i += 1;
        } else if cs[i..].iter().take(4).collect::<String>() == "sqrt" {
            out.push(Tok::Sqrt);
            i += 4;
        } else if ch == '√' {
            out.push(Tok::Sqrt);
            i += 1;
        } else {
            return Err(Error::Parse(format!("unexpected character {ch:?} in {s:?}")));
        }
    }
    Ok(out)
}

struct Parser {
    toks: Vec<Tok>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos)
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(&Tok::Op(c)) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<QuadraticSurd> {
        let mut v = self.term()?;
        loop {
            if self.eat('+') {
                let t = self.term()?;
                v = v.checked_add(&t)?;
            } else if self.eat('-') {
                let t = self.term()?;
                v = v.checked_add(&-&t)?;
            } else {
                return Ok(v);
            }
        }
    }

    fn term(&mut self) -> Result<QuadraticSurd> {
        let mut v = self.unary()?;
        loop {
            if self.eat('*') {
                let t = self.unary()?;
                check(&v, &t)?;
                v = &v * &t;
            } else if self.eat('/') {
                let t = self.unary()?;
                check(&v, &t)?;
                let r = t.recip().ok_or_else(|| Error::Parse("division by zero".into()))?;
                v = &v * &r;
            } else {
                return Ok(v);
            }
        }
    }

    fn unary(&mut self) -> Result<QuadraticSurd> {
        if self.eat('-') {
            return Ok(-&self.unary()?);
        }
        if self.eat('+') {
            return self.unary();
        }
        self.atom()
    }

    fn atom(&mut self) -> Result<QuadraticSurd> {
        match self.toks.get(self.pos).cloned() {
            Some(Tok::Num(n)) => {
                self.pos += 1;
                Ok(QuadraticSurd::from_int(n))
            }
            Some(Tok::Sqrt) => {
                self.pos += 1;
                if !self.eat('(') {
                    return Err(Error::Parse("expected '(' after sqrt".into()));
                }
                let inner = self.expr()?;
                if !self.eat(')') {
                    return Err(Error::Parse("expected ')'".into()));
                }
                let n = inner
                    .to_rational()
                    .filter(|r| r.is_integer())
                    .ok_or_else(|| Error::Parse("sqrt argument must be an integer".into()))?;
                QuadraticSurd::sqrt(n.to_integer())
            }
            Some(Tok::Op('(')) => {
                self.pos += 1;
                let v = self.expr()?;
                if !self.eat(')') {
                    return Err(Error::Parse("expected ')'".into()));
                }
                Ok(v)
            }
            other => Err(Error::Parse(format!("unexpected token {other:?}"))),
        }
    }
}

fn check(x: &QuadraticSurd, y: &QuadraticSurd) -> Result<()> {
    if x.compatible(y) {
        Ok(())
    } else {
        Err(Error::Radicand(x.d().to_string(), y.d().to_string()))
    }
}
