//! Parser for the element expression grammar used on the command line:
//! `e[1,2]`, `f[2,1]`, `h1`, rational scalars, `+`, `-`, `*`, and brackets
//! `[x,y]`.

use crate::algebra::{Algebra, AlgebraError, LieElement};
use crate::ratio::{qi, Q};
use num_bigint::BigInt;

#[derive(Debug, Clone)]
enum Val {
    Scalar(Q),
    Elem(LieElement),
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl<'a> Parser<'a> {
    fn err(&self, msg: &str) -> AlgebraError {
        AlgebraError::Parse(format!("{msg} at byte {}", self.pos))
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn bump(&mut self) -> Option<u8> {
        let c = self.peek()?;
        self.pos += 1;
        Some(c)
    }

    fn expect(&mut self, c: u8) -> Result<(), AlgebraError> {
        match self.bump() {
            Some(x) if x == c => Ok(()),
            _ => Err(self.err(&format!("expected '{}'", c as char))),
        }
    }

    fn integer(&mut self) -> Result<BigInt, AlgebraError> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.err("expected an integer"));
        }
        let s = std::str::from_utf8(&self.src[start..self.pos]).expect("digits");
        s.parse().map_err(|_| self.err("integer out of range"))
    }

    fn index_list(&mut self) -> Result<Vec<usize>, AlgebraError> {
        self.expect(b'[')?;
        let mut out = Vec::new();
        loop {
            let n = self.integer()?;
            let idx = usize::try_from(n).map_err(|_| self.err("index too large"))?;
            out.push(idx);
            match self.peek() {
                Some(b',') => {
                    self.pos += 1;
                }
                Some(b']') => {
                    self.pos += 1;
                    return Ok(out);
                }
                _ => return Err(self.err("expected ',' or ']' in index list")),
            }
        }
    }

    fn factor(&mut self, alg: &Algebra) -> Result<Val, AlgebraError> {
        match self.peek() {
            Some(b'-') => {
                self.pos += 1;
                Ok(match self.factor(alg)? {
                    Val::Scalar(s) => Val::Scalar(-s),
                    Val::Elem(e) => Val::Elem(e.neg()),
                })
            }
            Some(b'(') => {
                self.pos += 1;
                let v = self.expr(alg)?;
                self.expect(b')')?;
                Ok(v)
            }
            Some(b'[') => {
                self.pos += 1;
                let x = self.expr(alg)?;
                self.expect(b',')?;
                let y = self.expr(alg)?;
                self.expect(b']')?;
                match (x, y) {
                    (Val::Elem(a), Val::Elem(b)) => Ok(Val::Elem(alg.bracket(&a, &b)?)),
                    _ => Err(self.err("bracket arguments must be algebra elements")),
                }
            }
            Some(b'e') => {
                self.pos += 1;
                Ok(Val::Elem(alg.e(&self.index_list()?)?))
            }
            Some(b'f') => {
                self.pos += 1;
                Ok(Val::Elem(alg.f(&self.index_list()?)?))
            }
            Some(b'h') => {
                self.pos += 1;
                let n = self.integer()?;
                let idx = usize::try_from(n).map_err(|_| self.err("index too large"))?;
                Ok(Val::Elem(alg.h(idx)?))
            }
            Some(c) if c.is_ascii_digit() => {
                let num = self.integer()?;
                if self.peek() == Some(b'/') {
                    self.pos += 1;
                    let den = self.integer()?;
                    if den == BigInt::from(0) {
                        return Err(self.err("zero denominator"));
                    }
                    Ok(Val::Scalar(Q::new(num, den)))
                } else {
                    Ok(Val::Scalar(Q::from(num)))
                }
            }
            _ => Err(self.err("expected a factor")),
        }
    }

    fn term(&mut self, alg: &Algebra) -> Result<Val, AlgebraError> {
        let mut acc = self.factor(alg)?;
        while self.peek() == Some(b'*') {
            self.pos += 1;
            let rhs = self.factor(alg)?;
            acc = match (acc, rhs) {
                (Val::Scalar(a), Val::Scalar(b)) => Val::Scalar(a * b),
                (Val::Scalar(a), Val::Elem(e)) | (Val::Elem(e), Val::Scalar(a)) => {
                    Val::Elem(e.scale(&a))
                }
                (Val::Elem(_), Val::Elem(_)) => {
                    return Err(self.err("elements cannot be multiplied; use [x,y]"))
                }
            };
        }
        Ok(acc)
    }

    fn expr(&mut self, alg: &Algebra) -> Result<Val, AlgebraError> {
        let mut acc = self.term(alg)?;
        loop {
            match self.peek() {
                Some(b'+') => {
                    self.pos += 1;
                    acc = add_vals(acc, self.term(alg)?, qi(1)).map_err(|m| self.err(&m))?;
                }
                Some(b'-') => {
                    self.pos += 1;
                    acc = add_vals(acc, self.term(alg)?, qi(-1)).map_err(|m| self.err(&m))?;
                }
                _ => return Ok(acc),
            }
        }
    }
}

fn add_vals(a: Val, b: Val, sign: Q) -> Result<Val, String> {
    match (a, b) {
        (Val::Scalar(x), Val::Scalar(y)) => Ok(Val::Scalar(x + y * sign)),
        (Val::Elem(x), Val::Elem(y)) => Ok(Val::Elem(x.add(&y.scale(&sign)))),
        _ => Err("cannot add a scalar to an algebra element".into()),
    }
}

/// Parses an element expression and returns it in canonical form.
pub fn parse_element(alg: &Algebra, src: &str) -> Result<LieElement, AlgebraError> {
    let mut p = Parser {
        src: src.as_bytes(),
        pos: 0,
    };
    let v = p.expr(alg)?;
    p.skip_ws();
    if p.pos != p.src.len() {
        return Err(p.err("trailing input"));
    }
    match v {
        Val::Elem(e) => alg.canonicalize(&e),
        Val::Scalar(_) => Err(AlgebraError::Parse(
            "expression is a pure scalar, not an algebra element".into(),
        )),
    }
}
