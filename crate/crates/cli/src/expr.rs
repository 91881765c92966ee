//! Field-element expressions.
//!
//! ```text
//! expr   := term (("+" | "-") term)*
//! term   := factor (("*" | "/") factor)*
//! factor := atom ("^" int)?
//! atom   := int ("/" int)? | name | "(" expr ")" | "-" atom
//! ```
//!
//! Exponents may carry a leading `-`. A literal `p/q` is a single atom, so
//! `1/2^2` is `(1/2)^2`, and `-u^2` is `(-u)^2`.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use sicfield::{Constant, FieldElem, FieldError, Rational};
use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BinOp {
    Add,
    Sub,
    Mul,
    Div,
}

impl BinOp {
    fn symbol(self) -> &'static str {
        match self {
            BinOp::Add => "+",
            BinOp::Sub => "-",
            BinOp::Mul => "*",
            BinOp::Div => "/",
        }
    }

    fn precedence(self) -> u8 {
        match self {
            BinOp::Add | BinOp::Sub => 1,
            BinOp::Mul | BinOp::Div => 2,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Ast {
    /// `numer` or `numer/denom`; the denominator is kept as written.
    Literal { numer: BigInt, denom: Option<BigInt> },
    Name(Constant),
    Neg(Box<Ast>),
    Binary(BinOp, Box<Ast>, Box<Ast>),
    Pow(Box<Ast>, i64),
    Paren(Box<Ast>),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("syntax error at offset {offset}: expected {expected}")]
    Syntax { offset: usize, expected: &'static str },
    #[error("unknown name `{name}` at offset {offset}; valid names: {valid}")]
    UnknownName { name: String, offset: usize, valid: String },
    #[error("exponent at offset {0} does not fit in 64 bits")]
    Exponent(usize),
}

impl ParseError {
    pub fn offset(&self) -> usize {
        match self {
            ParseError::Syntax { offset, .. } | ParseError::UnknownName { offset, .. } => *offset,
            ParseError::Exponent(offset) => *offset,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EvalError {
    #[error("division by zero")]
    DivisionByZero,
}

impl From<FieldError> for EvalError {
    fn from(_: FieldError) -> Self {
        EvalError::DivisionByZero
    }
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl<'a> Parser<'a> {
    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn eat(&mut self, c: u8) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn fail<T>(&self, expected: &'static str) -> Result<T, ParseError> {
        Err(ParseError::Syntax { offset: self.pos, expected })
    }

    fn digits(&mut self) -> Option<BigInt> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return None;
        }
        std::str::from_utf8(&self.src[start..self.pos]).ok()?.parse().ok()
    }

    fn expr(&mut self) -> Result<Ast, ParseError> {
        let mut lhs = self.term()?;
        loop {
            let op = if self.eat(b'+') {
                BinOp::Add
            } else if self.eat(b'-') {
                BinOp::Sub
            } else {
                return Ok(lhs);
            };
            lhs = Ast::Binary(op, Box::new(lhs), Box::new(self.term()?));
        }
    }

    fn term(&mut self) -> Result<Ast, ParseError> {
        let mut lhs = self.factor()?;
        loop {
            let op = if self.eat(b'*') {
                BinOp::Mul
            } else if self.eat(b'/') {
                BinOp::Div
            } else {
                return Ok(lhs);
            };
            lhs = Ast::Binary(op, Box::new(lhs), Box::new(self.factor()?));
        }
    }

    fn factor(&mut self) -> Result<Ast, ParseError> {
        let base = self.atom()?;
        if !self.eat(b'^') {
            return Ok(base);
        }
        let negative = self.eat(b'-');
        let start = self.pos;
        let Some(n) = self.digits() else {
            return self.fail("integer exponent");
        };
        let n = if negative { -n } else { n };
        let e = i64::try_from(n).map_err(|_| ParseError::Exponent(start))?;
        Ok(Ast::Pow(Box::new(base), e))
    }

    fn atom(&mut self) -> Result<Ast, ParseError> {
        match self.peek() {
            Some(b'-') => {
                self.pos += 1;
                Ok(Ast::Neg(Box::new(self.atom()?)))
            }
            Some(b'(') => {
                self.pos += 1;
                let inner = self.expr()?;
                if !self.eat(b')') {
                    return self.fail("`)`");
                }
                Ok(Ast::Paren(Box::new(inner)))
            }
            Some(c) if c.is_ascii_digit() => {
                let numer = self.digits().expect("peeked a digit");
                let save = self.pos;
                if self.eat(b'/') {
                    if let Some(denom) = self.digits() {
                        return Ok(Ast::Literal { numer, denom: Some(denom) });
                    }
                    self.pos = save;
                }
                Ok(Ast::Literal { numer, denom: None })
            }
            Some(c) if c.is_ascii_alphabetic() || c == b'_' => {
                let start = self.pos;
                while self.pos < self.src.len()
                    && (self.src[self.pos].is_ascii_alphanumeric() || self.src[self.pos] == b'_')
                {
                    self.pos += 1;
                }
                let name = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii");
                match name.parse::<Constant>() {
                    Ok(k) => Ok(Ast::Name(k)),
                    Err(FieldError::UnknownConstant { name, valid }) => {
                        Err(ParseError::UnknownName { name, offset: start, valid })
                    }
                    Err(_) => unreachable!("constant lookup only fails with UnknownConstant"),
                }
            }
            _ => self.fail("number, name, `(` or `-`"),
        }
    }
}

pub fn parse_expr(text: &str) -> Result<Ast, ParseError> {
    let mut p = Parser { src: text.as_bytes(), pos: 0 };
    let ast = p.expr()?;
    if p.peek().is_some() {
        return p.fail("operator or end of input");
    }
    Ok(ast)
}

pub fn evaluate(ast: &Ast) -> Result<FieldElem, EvalError> {
    Ok(match ast {
        Ast::Literal { numer, denom } => {
            let d = denom.clone().unwrap_or_else(BigInt::one);
            if d.is_zero() {
                return Err(EvalError::DivisionByZero);
            }
            FieldElem::from_rational(Rational::new(numer.clone(), d))
        }
        Ast::Name(k) => k.value(),
        Ast::Neg(a) => -evaluate(a)?,
        Ast::Paren(a) => evaluate(a)?,
        Ast::Pow(a, e) => evaluate(a)?.pow(*e)?,
        Ast::Binary(op, a, b) => {
            let (x, y) = (evaluate(a)?, evaluate(b)?);
            match op {
                BinOp::Add => &x + &y,
                BinOp::Sub => &x - &y,
                BinOp::Mul => &x * &y,
                BinOp::Div => x.checked_div(&y)?,
            }
        }
    })
}

/// Parses and evaluates in one go.
pub fn eval_str(text: &str) -> Result<FieldElem, ExprError> {
    Ok(evaluate(&parse_expr(text)?)?)
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ExprError {
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error(transparent)]
    Eval(#[from] EvalError),
}

impl Ast {
    /// 1 for sums, 2 for products, 3 for powers, 4 for atoms.
    fn level(&self) -> u8 {
        match self {
            Ast::Binary(op, ..) => op.precedence(),
            Ast::Pow(..) => 3,
            _ => 4,
        }
    }

    /// Printed form ends in a bare integer that a following `/int` would
    /// absorb into a literal.
    fn ends_in_integer(&self) -> bool {
        match self {
            Ast::Literal { denom: None, .. } => true,
            Ast::Neg(a) => a.level() == 4 && a.ends_in_integer(),
            Ast::Binary(op, a, b) => !right_needs_parens(*op, a, b) && b.ends_in_integer(),
            _ => false,
        }
    }

    fn starts_with_digit(&self) -> bool {
        match self {
            Ast::Literal { .. } => true,
            Ast::Pow(a, _) => a.level() == 4 && a.starts_with_digit(),
            Ast::Binary(op, a, _) => a.level() >= op.precedence() && a.starts_with_digit(),
            _ => false,
        }
    }
}

fn right_needs_parens(op: BinOp, a: &Ast, b: &Ast) -> bool {
    b.level() <= op.precedence() || (op == BinOp::Div && a.ends_in_integer() && b.starts_with_digit())
}

fn wrap(f: &mut fmt::Formatter<'_>, a: &Ast, parens: bool) -> fmt::Result {
    if parens {
        write!(f, "({a})")
    } else {
        write!(f, "{a}")
    }
}

/// Minimal-parenthesis rendering; reparses to the same tree.
impl fmt::Display for Ast {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Ast::Literal { numer, denom: None } => write!(f, "{numer}"),
            Ast::Literal { numer, denom: Some(d) } => write!(f, "{numer}/{d}"),
            Ast::Name(k) => write!(f, "{k}"),
            Ast::Neg(a) => {
                f.write_str("-")?;
                wrap(f, a, a.level() < 4)
            }
            Ast::Paren(a) => write!(f, "({a})"),
            Ast::Pow(a, e) => {
                wrap(f, a, a.level() < 4)?;
                write!(f, "^{e}")
            }
            Ast::Binary(op, a, b) => {
                wrap(f, a, a.level() < op.precedence())?;
                match op {
                    BinOp::Add | BinOp::Sub => write!(f, " {} ", op.symbol())?,
                    BinOp::Mul | BinOp::Div => f.write_str(op.symbol())?,
                }
                wrap(f, b, right_needs_parens(*op, a, b))
            }
        }
    }
}
