//! Product expressions: `expr := term ('+' term)*`, `term := factor ('*' factor)*`,
//! `factor := u[name] | (expr) | rational`.

use exthall::{HallError, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Expr {
    Basis(String),
    Scalar(String),
    Sum(Box<Expr>, Box<Expr>),
    Product(Box<Expr>, Box<Expr>),
}

struct Parser<'a> {
    src: &'a str,
    pos: usize,
}

fn err(msg: impl Into<String>) -> HallError {
    HallError::Parse(msg.into())
}

impl<'a> Parser<'a> {
    fn skip_ws(&mut self) {
        while self.src[self.pos..].starts_with(char::is_whitespace) {
            self.pos += self.src[self.pos..].chars().next().map_or(1, char::len_utf8);
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.src[self.pos..].chars().next()
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(c) {
            self.pos += c.len_utf8();
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<Expr> {
        let mut e = self.term()?;
        while self.eat('+') {
            e = Expr::Sum(Box::new(e), Box::new(self.term()?));
        }
        Ok(e)
    }

    fn term(&mut self) -> Result<Expr> {
        let mut e = self.factor()?;
        while self.eat('*') {
            e = Expr::Product(Box::new(e), Box::new(self.factor()?));
        }
        Ok(e)
    }

    fn factor(&mut self) -> Result<Expr> {
        match self.peek() {
            Some('(') => {
                self.pos += 1;
                let e = self.expr()?;
                if !self.eat(')') {
                    return Err(err(format!("expected ')' at offset {}", self.pos)));
                }
                Ok(e)
            }
            Some('u') => {
                self.pos += 1;
                if !self.eat('[') {
                    return Err(err(format!("expected '[' after 'u' at offset {}", self.pos)));
                }
                let start = self.pos;
                let mut depth = 1usize;
                for (i, c) in self.src[start..].char_indices() {
                    match c {
                        '[' => depth += 1,
                        ']' => {
                            depth -= 1;
                            if depth == 0 {
                                self.pos = start + i + 1;
                                return Ok(Expr::Basis(self.src[start..start + i].trim().to_string()));
                            }
                        }
                        _ => {}
                    }
                }
                Err(err("unterminated u[...]"))
            }
            Some(c) if c.is_ascii_digit() || c == '-' => {
                let start = self.pos;
                self.pos += 1;
                while self.src[self.pos..].starts_with(|c: char| c.is_ascii_digit() || c == '/') {
                    self.pos += 1;
                }
                Ok(Expr::Scalar(self.src[start..self.pos].to_string()))
            }
            Some(c) => Err(err(format!("unexpected '{c}' at offset {}", self.pos))),
            None => Err(err("unexpected end of expression")),
        }
    }
}

pub fn parse(src: &str) -> Result<Expr> {
    let mut p = Parser { src, pos: 0 };
    let e = p.expr()?;
    if p.peek().is_some() {
        return Err(err(format!("trailing input at offset {}", p.pos)));
    }
    Ok(e)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn b(s: &str) -> Box<Expr> {
        Box::new(Expr::Basis(s.into()))
    }

    #[test]
    fn precedence_and_nesting() {
        assert_eq!(
            parse("u[k] + 2*u[k2]").unwrap(),
            Expr::Sum(b("k"), Box::new(Expr::Product(Box::new(Expr::Scalar("2".into())), b("k2"))))
        );
        assert_eq!(parse("u[[1,0]] * (u[0])").unwrap(), Expr::Product(b("[1,0]"), b("0")));
        assert_eq!(parse("-3/4").unwrap(), Expr::Scalar("-3/4".into()));
    }

    #[test]
    fn rejects_malformed_input() {
        for bad in ["u[k", "u k", "(u[k]", "u[k] u[k]", "", "*u[k]"] {
            assert!(matches!(parse(bad), Err(HallError::Parse(_))), "{bad}");
        }
    }
}
