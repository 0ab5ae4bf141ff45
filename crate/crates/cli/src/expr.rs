//! Construction expressions for the `build` command:
//!
//! ```text
//! sphere(1,2)
//! wedge(sphere(0,1), free_summand(2))
//! xab(0,1,2,3)
//! smash(xab(0,1,2,3), xab(0,1,2,5))
//! attach(xab(0,1,2,3), 3, yf=2)
//! suspend(sphere(0,1), 1, 2)
//! point
//! ```

use borelh::tcomplex::{
    attach_free_cell, free_summand, point, smash, sphere, wedge, AttachmentCochain, Complex,
};
use borelh::EngineError;
use num_bigint::BigInt;
use std::collections::BTreeMap;

pub fn parse_expr(input: &str) -> Result<Complex, EngineError> {
    let mut p = Parser {
        chars: input.chars().collect(),
        pos: 0,
        input,
    };
    let c = p.expr()?;
    p.skip_ws();
    if p.pos != p.chars.len() {
        return Err(p.err("trailing input"));
    }
    Ok(c)
}

struct Parser<'a> {
    chars: Vec<char>,
    pos: usize,
    input: &'a str,
}

impl Parser<'_> {
    fn err(&self, msg: &str) -> EngineError {
        EngineError::Parse {
            line: 1,
            msg: format!("{msg} at offset {} in `{}`", self.pos, self.input),
        }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.chars.len() && self.chars[self.pos].is_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.chars.get(self.pos).copied()
    }

    fn eat(&mut self, c: char) -> Result<(), EngineError> {
        if self.peek() == Some(c) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.err(&format!("expected `{c}`")))
        }
    }

    fn ident(&mut self) -> Result<String, EngineError> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.chars.len() {
            let c = self.chars[self.pos];
            if c.is_alphanumeric() || matches!(c, '_' | '.' | '*' | '\'') {
                self.pos += 1;
            } else {
                break;
            }
        }
        if start == self.pos {
            return Err(self.err("expected a name"));
        }
        Ok(self.chars[start..self.pos].iter().collect())
    }

    fn int(&mut self) -> Result<i64, EngineError> {
        self.skip_ws();
        let start = self.pos;
        if self.peek() == Some('-') {
            self.pos += 1;
        }
        while self.pos < self.chars.len() && self.chars[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        let s: String = self.chars[start..self.pos].iter().collect();
        s.parse().map_err(|_| self.err("expected an integer"))
    }

    fn uint(&mut self) -> Result<u32, EngineError> {
        let v = self.int()?;
        u32::try_from(v).map_err(|_| self.err("expected a non-negative integer"))
    }

    fn expr(&mut self) -> Result<Complex, EngineError> {
        let head = self.ident()?;
        match head.as_str() {
            "point" => {
                if self.peek() == Some('(') {
                    self.eat('(')?;
                    self.eat(')')?;
                }
                Ok(point())
            }
            "sphere" => {
                self.eat('(')?;
                let ell = self.uint()?;
                self.eat(',')?;
                let h = self.uint()?;
                self.eat(')')?;
                Ok(sphere(ell, h))
            }
            "free_summand" => {
                self.eat('(')?;
                let n = self.uint()?;
                self.eat(')')?;
                Ok(free_summand(n))
            }
            "wedge" | "smash" => {
                self.eat('(')?;
                let a = self.expr()?;
                self.eat(',')?;
                let b = self.expr()?;
                self.eat(')')?;
                if head == "wedge" {
                    wedge(&a, &b)
                } else {
                    smash(&a, &b)
                }
            }
            "suspend" => {
                self.eat('(')?;
                let a = self.expr()?;
                self.eat(',')?;
                let l = self.uint()?;
                self.eat(',')?;
                let m = self.uint()?;
                self.eat(')')?;
                smash(&a, &sphere(l, m))
            }
            "xab" => {
                self.eat('(')?;
                let ell = self.int()?;
                self.eat(',')?;
                let h = self.int()?;
                self.eat(',')?;
                let a = self.int()?;
                self.eat(',')?;
                let b = self.int()?;
                self.eat(')')?;
                borelh::tcomplex::xab(ell, h, a, b)
            }
            "attach" => {
                self.eat('(')?;
                let base = self.expr()?;
                self.eat(',')?;
                let dim = self.int()?;
                let mut coefficients = BTreeMap::new();
                while self.peek() == Some(',') {
                    self.eat(',')?;
                    let id = self.ident()?;
                    self.eat('=')?;
                    let v = self.int()?;
                    if v != 0 {
                        coefficients.insert(id, BigInt::from(v));
                    }
                }
                self.eat(')')?;
                attach_free_cell(&base, &AttachmentCochain { dim, coefficients })
            }
            other => Err(self.err(&format!("unknown constructor `{other}`"))),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use borelh::tcomplex::xab;

    #[test]
    fn parses_nested_expressions() {
        let c = parse_expr("smash(xab(0,1,2,3), sphere(0, 1))").unwrap();
        assert_eq!(c.len(), 21);
        assert_eq!(parse_expr("xab(0,1,2,3)").unwrap(), xab(0, 1, 2, 3).unwrap());
        assert_eq!(
            parse_expr("attach(wedge(sphere(0,1), free_summand(2)), 2, y1=2, xf=3)").unwrap(),
            xab(0, 1, 2, 3).unwrap()
        );
        assert!(parse_expr("sphere(0,1) junk").is_err());
        assert!(parse_expr("mystery(1)").is_err());
    }
}
