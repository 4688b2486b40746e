//! Coordinate expressions such as `-u^2`, `t^(-2)`, `(1+v)/2`.
//!
//! Grammar (whitespace ignored):
//!
//! ```text
//! expr  := term (('+' | '-') term)*
//! term  := unary (('*' | '/') unary)*
//! unary := '-' unary | power
//! power := atom ('^' exponent)?
//! exponent := ['-'] INT | '(' ['-'] INT ')'
//! atom  := INT | NAME | '(' expr ')'
//! ```
//!
//! Names resolve through a [`FieldSpec`]; negative exponents and `/` use
//! modular inverses.

use thiserror::Error;

use crate::field::{Fe, FieldSpec};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ExprError {
    #[error("column {column}: {message}")]
    Syntax { column: usize, message: String },
    #[error("column {column}: unresolvable symbol `{name}`")]
    UnknownSymbol { column: usize, name: String },
    #[error("column {column}: division by zero")]
    DivisionByZero { column: usize },
}

impl ExprError {
    pub fn column(&self) -> usize {
        match self {
            ExprError::Syntax { column, .. }
            | ExprError::UnknownSymbol { column, .. }
            | ExprError::DivisionByZero { column } => *column,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Int(u64),
    Name(String),
    Op(char),
}

fn tokenize(src: &str) -> Result<Vec<(Tok, usize)>, ExprError> {
    let chars: Vec<char> = src.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let col = i + 1;
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            let text: String = chars[start..i].iter().collect();
            let v = text
                .parse::<u64>()
                .map_err(|_| ExprError::Syntax { column: col, message: format!("integer `{text}` out of range") })?;
            out.push((Tok::Int(v), col));
        } else if c.is_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len() && (chars[i].is_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            out.push((Tok::Name(chars[start..i].iter().collect()), col));
        } else if "+-*/^()".contains(c) {
            out.push((Tok::Op(c), col));
            i += 1;
        } else if c == '\u{2212}' {
            out.push((Tok::Op('-'), col));
            i += 1;
        } else {
            return Err(ExprError::Syntax { column: col, message: format!("unexpected character `{c}`") });
        }
    }
    Ok(out)
}

struct Parser<'a> {
    toks: Vec<(Tok, usize)>,
    pos: usize,
    end_col: usize,
    spec: &'a FieldSpec,
}

impl<'a> Parser<'a> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(t, _)| t)
    }

    fn col(&self) -> usize {
        self.toks.get(self.pos).map_or(self.end_col, |(_, c)| *c)
    }

    fn eat(&mut self, op: char) -> bool {
        if self.peek() == Some(&Tok::Op(op)) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn syntax(&self, message: &str) -> ExprError {
        ExprError::Syntax { column: self.col(), message: message.to_string() }
    }

    fn expr(&mut self) -> Result<Fe, ExprError> {
        let f = self.spec.field;
        let mut acc = self.term()?;
        loop {
            if self.eat('+') {
                acc = f.add(acc, self.term()?);
            } else if self.eat('-') {
                acc = f.sub(acc, self.term()?);
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<Fe, ExprError> {
        let f = self.spec.field;
        let mut acc = self.unary()?;
        loop {
            if self.eat('*') {
                acc = f.mul(acc, self.unary()?);
            } else if self.peek() == Some(&Tok::Op('/')) {
                self.pos += 1;
                let column = self.col();
                let d = self.unary()?;
                acc = f.div(acc, d).ok_or(ExprError::DivisionByZero { column })?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn unary(&mut self) -> Result<Fe, ExprError> {
        if self.eat('-') {
            let v = self.unary()?;
            Ok(self.spec.field.neg(v))
        } else {
            self.power()
        }
    }

    fn power(&mut self) -> Result<Fe, ExprError> {
        let column = self.col();
        let base = self.atom()?;
        if !self.eat('^') {
            return Ok(base);
        }
        let paren = self.eat('(');
        let neg = self.eat('-');
        let e = match self.peek() {
            Some(Tok::Int(v)) => *v,
            _ => return Err(self.syntax("exponent must be an integer")),
        };
        self.pos += 1;
        if paren && !self.eat(')') {
            return Err(self.syntax("expected `)` after exponent"));
        }
        let e = i64::try_from(e).map_err(|_| ExprError::Syntax { column, message: "exponent too large".into() })?;
        let e = if neg { -e } else { e };
        self.spec.field.pow_signed(base, e).ok_or(ExprError::DivisionByZero { column })
    }

    fn atom(&mut self) -> Result<Fe, ExprError> {
        let column = self.col();
        match self.peek().cloned() {
            Some(Tok::Int(v)) => {
                self.pos += 1;
                Ok(self.spec.field.from_u64(v))
            }
            Some(Tok::Name(name)) => {
                self.pos += 1;
                self.spec.resolved.get(&name).copied().ok_or(ExprError::UnknownSymbol { column, name })
            }
            Some(Tok::Op('(')) => {
                self.pos += 1;
                let v = self.expr()?;
                if !self.eat(')') {
                    return Err(self.syntax("expected `)`"));
                }
                Ok(v)
            }
            Some(_) => Err(self.syntax("expected a number, a symbol or `(`")),
            None => Err(self.syntax("unexpected end of expression")),
        }
    }
}

/// Evaluate a coordinate expression in the field described by `spec`.
pub fn eval(src: &str, spec: &FieldSpec) -> Result<Fe, ExprError> {
    let toks = tokenize(src)?;
    let end_col = src.chars().count() + 1;
    let mut p = Parser { toks, pos: 0, end_col, spec };
    let v = p.expr()?;
    if p.pos != p.toks.len() {
        return Err(p.syntax("trailing input"));
    }
    Ok(v)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Symbol;

    fn spec() -> FieldSpec {
        FieldSpec::choose(&[Symbol::order("u", 3), Symbol::minpoly("t", &[1, -1, 1])], 1000, 0).unwrap()
    }

    #[test]
    fn arithmetic() {
        let s = spec();
        let f = s.field;
        assert_eq!(eval("1 + 2*3", &s).unwrap(), f.from_i64(7));
        assert_eq!(eval("-(2-5)^2", &s).unwrap(), f.from_i64(-9));
        assert_eq!(eval("1/2 * 2", &s).unwrap(), f.one());
        assert_eq!(eval("\u{2212}3", &s).unwrap(), f.from_i64(-3));
    }

    #[test]
    fn symbols_and_negative_powers() {
        let s = spec();
        let f = s.field;
        let u = s.get("u").unwrap();
        assert_eq!(eval("-u^2", &s).unwrap(), f.neg(f.mul(u, u)));
        let t = s.get("t").unwrap();
        let tm2 = eval("t^(-2)", &s).unwrap();
        assert_eq!(f.mul(tm2, f.mul(t, t)), f.one());
        assert_eq!(eval("t^-2", &s).unwrap(), tm2);
    }

    #[test]
    fn malformed_exponent() {
        let s = spec();
        let err = eval("u^x", &s).unwrap_err();
        assert!(matches!(err, ExprError::Syntax { column: 3, .. }), "{err:?}");
        assert!(eval("u^(2", &s).is_err());
        assert!(eval("u^", &s).is_err());
    }

    #[test]
    fn unknown_symbol_and_zero_division() {
        let s = spec();
        assert_eq!(eval("2*zeta", &s), Err(ExprError::UnknownSymbol { column: 3, name: "zeta".into() }));
        assert_eq!(eval("1/(u-u)", &s), Err(ExprError::DivisionByZero { column: 3 }));
        assert!(eval("1 2", &s).is_err());
        assert!(eval("", &s).is_err());
    }
}
