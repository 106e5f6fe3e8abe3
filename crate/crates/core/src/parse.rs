//! Text front end: expressions over {+, -, *, /, ^, x, log(x), exp(g)} and
//! the noncommutative operator grammar over {x, n, D, S}.
//!
//! Grammar (left associative, unary minus at the head of an expression):
//!
//! ```text
//! expr   := ['-'] term (('+'|'-') term)*
//! term   := factor (('*'|'/') factor)*
//! factor := base ('^' ['-'] integer)?
//! base   := integer | variable | '(' expr ')' | 'log' '(' expr ')' | 'exp' '(' expr ')'
//! ```
//!
//! Expressions normalize into sums of fragment terms `f*log(x)^m*exp(g)`;
//! anything that cannot be brought to that shape (nested logs, division by a
//! log, exp of a non-rational) is rejected with a reason rather than half
//! parsed.

use crate::ore::{OpKind, OreOperator};
use crate::poly::{Poly, Q};
use crate::ratfunc::RatFunc;
use crate::stability::{ElemExpr, ElemSum, FragmentError};
use num::{BigInt, Zero};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ParseError {
    #[error("syntax error at position {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("outside the decidable fragment: {reason}")]
    Reject { reason: String },
}

fn syntax(pos: usize, msg: impl Into<String>) -> ParseError {
    ParseError::Syntax {
        pos,
        msg: msg.into(),
    }
}

fn reject(reason: impl Into<String>) -> ParseError {
    ParseError::Reject {
        reason: reason.into(),
    }
}

impl From<FragmentError> for ParseError {
    fn from(e: FragmentError) -> Self {
        reject(e.to_string())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Int(BigInt),
    Ident(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
}

fn lex(text: &str) -> Result<Vec<(Tok, usize)>, ParseError> {
    let mut toks = Vec::new();
    let bytes = text.as_bytes();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i] as char;
        match c {
            ' ' | '\t' | '\n' | '\r' => i += 1,
            '+' => {
                toks.push((Tok::Plus, i));
                i += 1;
            }
            '-' => {
                toks.push((Tok::Minus, i));
                i += 1;
            }
            '*' => {
                toks.push((Tok::Star, i));
                i += 1;
            }
            '/' => {
                toks.push((Tok::Slash, i));
                i += 1;
            }
            '^' => {
                toks.push((Tok::Caret, i));
                i += 1;
            }
            '(' => {
                toks.push((Tok::LParen, i));
                i += 1;
            }
            ')' => {
                toks.push((Tok::RParen, i));
                i += 1;
            }
            '0'..='9' => {
                let start = i;
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                let n: BigInt = text[start..i].parse().expect("digits parse");
                toks.push((Tok::Int(n), start));
            }
            'a'..='z' | 'A'..='Z' | '_' => {
                let start = i;
                while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                    i += 1;
                }
                toks.push((Tok::Ident(text[start..i].to_string()), start));
            }
            _ => return Err(syntax(i, format!("unexpected character {:?}", c))),
        }
    }
    Ok(toks)
}

/// Value domain a parse evaluates into.
trait Eval: Sized + Clone {
    fn from_int(n: &BigInt) -> Self;
    fn ident(name: &str, pos: usize) -> Result<Self, ParseError>;
    fn call(name: &str, arg: Self, pos: usize) -> Result<Self, ParseError>;
    fn add(&self, rhs: &Self) -> Result<Self, ParseError>;
    fn sub(&self, rhs: &Self) -> Result<Self, ParseError>;
    fn mul(&self, rhs: &Self) -> Result<Self, ParseError>;
    fn div(&self, rhs: &Self, pos: usize) -> Result<Self, ParseError>;
    fn pow(&self, e: i64, pos: usize) -> Result<Self, ParseError>;
}

struct Parser<'a> {
    toks: &'a [(Tok, usize)],
    pos: usize,
    end: usize,
}

impl<'a> Parser<'a> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(t, _)| t)
    }

    fn here(&self) -> usize {
        self.toks.get(self.pos).map(|&(_, p)| p).unwrap_or(self.end)
    }

    fn bump(&mut self) -> Option<&Tok> {
        let t = self.toks.get(self.pos).map(|(t, _)| t);
        self.pos += 1;
        t
    }

    fn expect(&mut self, t: Tok, what: &str) -> Result<(), ParseError> {
        let pos = self.here();
        match self.bump() {
            Some(found) if *found == t => Ok(()),
            _ => Err(syntax(pos, format!("expected {}", what))),
        }
    }

    fn expr<V: Eval>(&mut self) -> Result<V, ParseError> {
        let negate = matches!(self.peek(), Some(Tok::Minus));
        if negate {
            self.bump();
        }
        let mut acc = self.term::<V>()?;
        if negate {
            acc = V::from_int(&BigInt::zero()).sub(&acc)?;
        }
        loop {
            match self.peek() {
                Some(Tok::Plus) => {
                    self.bump();
                    let rhs = self.term::<V>()?;
                    acc = acc.add(&rhs)?;
                }
                Some(Tok::Minus) => {
                    self.bump();
                    let rhs = self.term::<V>()?;
                    acc = acc.sub(&rhs)?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term<V: Eval>(&mut self) -> Result<V, ParseError> {
        let mut acc = self.factor::<V>()?;
        loop {
            match self.peek() {
                Some(Tok::Star) => {
                    self.bump();
                    let rhs = self.factor::<V>()?;
                    acc = acc.mul(&rhs)?;
                }
                Some(Tok::Slash) => {
                    let pos = self.here();
                    self.bump();
                    let rhs = self.factor::<V>()?;
                    acc = acc.div(&rhs, pos)?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn factor<V: Eval>(&mut self) -> Result<V, ParseError> {
        let base = self.base::<V>()?;
        if matches!(self.peek(), Some(Tok::Caret)) {
            self.bump();
            let pos = self.here();
            let neg = matches!(self.peek(), Some(Tok::Minus));
            if neg {
                self.bump();
            }
            match self.bump() {
                Some(Tok::Int(n)) => {
                    let e: i64 = n
                        .try_into()
                        .ok()
                        .filter(|e: &i64| *e <= 4096)
                        .ok_or_else(|| syntax(pos, "exponent too large"))?;
                    base.pow(if neg { -e } else { e }, pos)
                }
                _ => Err(syntax(pos, "expected an integer exponent after ^")),
            }
        } else {
            Ok(base)
        }
    }

    fn base<V: Eval>(&mut self) -> Result<V, ParseError> {
        let pos = self.here();
        match self.bump().cloned() {
            Some(Tok::Int(n)) => Ok(V::from_int(&n)),
            Some(Tok::Ident(name)) => {
                if matches!(self.peek(), Some(Tok::LParen)) {
                    self.bump();
                    let arg = self.expr::<V>()?;
                    self.expect(Tok::RParen, ") to close the call")?;
                    V::call(&name, arg, pos)
                } else {
                    V::ident(&name, pos)
                }
            }
            Some(Tok::LParen) => {
                let inner = self.expr::<V>()?;
                self.expect(Tok::RParen, ") to close the group")?;
                Ok(inner)
            }
            _ => Err(syntax(pos, "expected a value")),
        }
    }
}

fn run_parser<V: Eval>(text: &str) -> Result<V, ParseError> {
    let toks = lex(text)?;
    let mut p = Parser {
        toks: &toks,
        pos: 0,
        end: text.len(),
    };
    let v = p.expr::<V>()?;
    if p.pos < toks.len() {
        return Err(syntax(p.here(), "trailing input"));
    }
    Ok(v)
}

// ---- fragment expressions ----

impl ElemSum {
    fn invert(&self, pos: usize) -> Result<ElemSum, ParseError> {
        if self.is_zero() {
            return Err(syntax(pos, "division by zero"));
        }
        let Some(t) = self.as_single() else {
            return Err(reject("cannot divide by a sum of fragment terms"));
        };
        if t.logpow > 0 {
            return Err(reject("cannot divide by log(x) factors"));
        }
        let coef = t.coef.inv();
        let expo = t.expo.as_ref().map(|g| -g);
        Ok(ElemSum::from(
            ElemExpr::try_new(coef, 0, expo).expect("negated exponent stays nonconstant"),
        ))
    }
}

impl Eval for ElemSum {
    fn from_int(n: &BigInt) -> Self {
        ElemSum::from(ElemExpr::rational(RatFunc::constant(Q::from_integer(
            n.clone(),
        ))))
    }

    fn ident(name: &str, pos: usize) -> Result<Self, ParseError> {
        match name {
            "x" => Ok(ElemSum::from(ElemExpr::rational(RatFunc::x()))),
            _ => Err(syntax(pos, format!("unknown identifier {:?}", name))),
        }
    }

    fn call(name: &str, arg: Self, pos: usize) -> Result<Self, ParseError> {
        match name {
            "log" => {
                let is_x = arg
                    .as_single()
                    .is_some_and(|t| t.logpow == 0 && t.expo.is_none() && t.coef == RatFunc::x());
                if !is_x {
                    return Err(reject("only log(x) is supported in the decidable fragment"));
                }
                Ok(ElemSum::from(
                    ElemExpr::try_new(RatFunc::one(), 1, None).expect("plain log term"),
                ))
            }
            "exp" => {
                let Some(t) = arg.as_single() else {
                    return Err(reject("exp argument must be a rational function"));
                };
                if t.logpow != 0 || t.expo.is_some() {
                    return Err(reject("exp argument must be a rational function"));
                }
                Ok(ElemSum::from(ElemExpr::try_new(
                    RatFunc::one(),
                    0,
                    Some(t.coef),
                )?))
            }
            _ => Err(syntax(pos, format!("unknown function {:?}", name))),
        }
    }

    fn add(&self, rhs: &Self) -> Result<Self, ParseError> {
        Ok(ElemSum::add(self, rhs))
    }

    fn sub(&self, rhs: &Self) -> Result<Self, ParseError> {
        Ok(ElemSum::add(self, &rhs.neg()))
    }

    fn mul(&self, rhs: &Self) -> Result<Self, ParseError> {
        let mut terms = Vec::new();
        for a in self.terms() {
            for b in rhs.terms() {
                let expo = match (&a.expo, &b.expo) {
                    (None, None) => None,
                    (Some(g), None) | (None, Some(g)) => Some(g.clone()),
                    (Some(g1), Some(g2)) => Some(g1 + g2),
                };
                terms.push(ElemExpr::try_new(
                    &a.coef * &b.coef,
                    a.logpow + b.logpow,
                    expo,
                )?);
            }
        }
        Ok(ElemSum::from_terms(terms))
    }

    fn div(&self, rhs: &Self, pos: usize) -> Result<Self, ParseError> {
        Eval::mul(self, &rhs.invert(pos)?)
    }

    fn pow(&self, e: i64, pos: usize) -> Result<Self, ParseError> {
        let base = if e < 0 {
            self.invert(pos)?
        } else {
            self.clone()
        };
        let mut acc = ElemSum::from(ElemExpr::rational(RatFunc::one()));
        for _ in 0..e.unsigned_abs() {
            acc = Eval::mul(&acc, &base)?;
        }
        Ok(acc)
    }
}

/// Parses an expression into a normalized sum of fragment terms.
pub fn parse_expression(text: &str) -> Result<ElemSum, ParseError> {
    run_parser::<ElemSum>(text)
}

/// Parses an expression that must denote a single fragment term.
pub fn parse_elem_expr(text: &str) -> Result<ElemExpr, ParseError> {
    parse_expression(text)?
        .as_single()
        .ok_or_else(|| reject("expression does not simplify to a single term f*log(x)^m*exp(g)"))
}

/// Parses an expression that must denote a rational function.
pub fn parse_ratfunc(text: &str) -> Result<RatFunc, ParseError> {
    let e = parse_elem_expr(text)?;
    if e.logpow != 0 || e.expo.is_some() {
        return Err(reject("expected a rational function without log or exp"));
    }
    Ok(e.coef)
}

/// Parses an expression that must denote a polynomial.
pub fn parse_poly(text: &str) -> Result<Poly, ParseError> {
    let f = parse_ratfunc(text)?;
    if !f.is_polynomial() {
        return Err(reject("expected a polynomial"));
    }
    Ok(f.numer().clone())
}

// ---- Ore operators ----

#[derive(Clone)]
struct OpValue {
    kind: OpKind,
    op: OreOperator,
}

// the resolved kind travels through a thread local so the generic evaluator
// stays signature-compatible
thread_local! {
    static OP_KIND: std::cell::Cell<OpKind> = const { std::cell::Cell::new(OpKind::Diff) };
}

impl Eval for OpValue {
    fn from_int(n: &BigInt) -> Self {
        let kind = OP_KIND.with(|k| k.get());
        OpValue {
            kind,
            op: OreOperator::from_ratfunc(kind, RatFunc::constant(Q::from_integer(n.clone()))),
        }
    }

    fn ident(name: &str, pos: usize) -> Result<Self, ParseError> {
        let kind = OP_KIND.with(|k| k.get());
        match (name, kind) {
            ("x", OpKind::Diff) | ("n", OpKind::Shift) => Ok(OpValue {
                kind,
                op: OreOperator::from_ratfunc(kind, RatFunc::x()),
            }),
            ("D", OpKind::Diff) | ("S", OpKind::Shift) => Ok(OpValue {
                kind,
                op: OreOperator::generator(kind),
            }),
            ("x" | "n" | "D" | "S", _) => Err(syntax(
                pos,
                format!(
                    "{:?} does not belong to the {} operator ring",
                    name,
                    match kind {
                        OpKind::Diff => "differential (x, D)",
                        OpKind::Shift => "shift (n, S)",
                    }
                ),
            )),
            _ => Err(syntax(pos, format!("unknown identifier {:?}", name))),
        }
    }

    fn call(name: &str, _arg: Self, pos: usize) -> Result<Self, ParseError> {
        Err(syntax(
            pos,
            format!("function {:?} is not allowed in operator expressions", name),
        ))
    }

    fn add(&self, rhs: &Self) -> Result<Self, ParseError> {
        Ok(OpValue {
            kind: self.kind,
            op: self.op.add(&rhs.op).expect("kinds match within one parse"),
        })
    }

    fn sub(&self, rhs: &Self) -> Result<Self, ParseError> {
        Ok(OpValue {
            kind: self.kind,
            op: self.op.sub(&rhs.op).expect("kinds match within one parse"),
        })
    }

    fn mul(&self, rhs: &Self) -> Result<Self, ParseError> {
        Ok(OpValue {
            kind: self.kind,
            op: self
                .op
                .multiply(&rhs.op)
                .expect("kinds match within one parse"),
        })
    }

    fn div(&self, rhs: &Self, pos: usize) -> Result<Self, ParseError> {
        if rhs.op.is_zero() {
            return Err(syntax(pos, "division by zero"));
        }
        if rhs.op.ord() != Some(0) {
            return Err(syntax(
                pos,
                "operators can only be divided by order-0 coefficients",
            ));
        }
        let inv = OreOperator::from_ratfunc(self.kind, rhs.op.coeff(0).inv());
        Ok(OpValue {
            kind: self.kind,
            op: self
                .op
                .multiply(&inv)
                .expect("kinds match within one parse"),
        })
    }

    fn pow(&self, e: i64, pos: usize) -> Result<Self, ParseError> {
        if e < 0 {
            if self.op.ord() != Some(0) {
                return Err(syntax(pos, "negative powers need an order-0 base"));
            }
            let c = self.op.coeff(0);
            if c.is_zero() {
                return Err(syntax(pos, "division by zero"));
            }
            return Ok(OpValue {
                kind: self.kind,
                op: OreOperator::from_ratfunc(self.kind, c.powi(e)),
            });
        }
        let mut acc = OreOperator::one(self.kind);
        for _ in 0..e {
            acc = acc
                .multiply(&self.op)
                .expect("kinds match within one parse");
        }
        Ok(OpValue {
            kind: self.kind,
            op: acc,
        })
    }
}

/// Parses a noncommutative operator expression.
///
/// The ring is inferred from the symbols present (`D`/`x` differential,
/// `S`/`n` shift); a pure-coefficient expression falls back to `hint`.
pub fn parse_operator(text: &str, hint: OpKind) -> Result<OreOperator, ParseError> {
    let toks = lex(text)?;
    let mut kind = None;
    for (t, pos) in &toks {
        if let Tok::Ident(name) = t {
            let this = match name.as_str() {
                "D" | "x" => Some(OpKind::Diff),
                "S" | "n" => Some(OpKind::Shift),
                _ => None,
            };
            if let Some(this) = this {
                match kind {
                    None => kind = Some(this),
                    Some(k) if k != this => {
                        return Err(syntax(*pos, "mixed differential and shift symbols"))
                    }
                    _ => {}
                }
            }
        }
    }
    let kind = kind.unwrap_or(hint);
    OP_KIND.with(|k| k.set(kind));
    let mut p = Parser {
        toks: &toks,
        pos: 0,
        end: text.len(),
    };
    let v = p.expr::<OpValue>()?;
    if p.pos < toks.len() {
        return Err(syntax(p.here(), "trailing input"));
    }
    Ok(v.op)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ratfunc::{rat, rat_int};

    #[test]
    fn parses_fragment_products() {
        let e = parse_elem_expr("x^3 * exp(2*x)").unwrap();
        assert_eq!(e.coef, rat(&[0, 0, 0, 1], &[1]));
        assert_eq!(e.logpow, 0);
        assert_eq!(e.expo, Some(rat(&[0, 2], &[1])));

        let e = parse_elem_expr("log(x)/(x-1)").unwrap();
        assert_eq!(e.coef, rat(&[1], &[-1, 1]));
        assert_eq!(e.logpow, 1);
        assert!(e.expo.is_none());
    }

    #[test]
    fn rejects_outside_fragment() {
        assert!(matches!(
            parse_expression("log(x+1)"),
            Err(ParseError::Reject { .. })
        ));
        assert!(matches!(
            parse_expression("log(log(x))"),
            Err(ParseError::Reject { .. })
        ));
        assert!(matches!(
            parse_expression("exp(log(x))"),
            Err(ParseError::Reject { .. })
        ));
        assert!(matches!(
            parse_expression("1/log(x)"),
            Err(ParseError::Reject { .. })
        ));
        // exp of a nonzero constant has no exact representative
        assert!(matches!(
            parse_expression("exp(2)"),
            Err(ParseError::Reject { .. })
        ));
        // but exp(0) folds away exactly
        let e = parse_elem_expr("x*exp(0)").unwrap();
        assert_eq!(e.coef, RatFunc::x());
        assert!(e.expo.is_none());
    }

    #[test]
    fn syntax_errors_carry_positions() {
        match parse_expression("x +") {
            Err(ParseError::Syntax { pos, .. }) => assert_eq!(pos, 3),
            other => panic!("expected syntax error, got {:?}", other),
        }
        assert!(matches!(
            parse_expression("x $ y"),
            Err(ParseError::Syntax { pos: 2, .. })
        ));
    }

    #[test]
    fn rational_sums_collapse_to_one_term() {
        let f = parse_ratfunc("(3*x^2 - 1/2)/(x^3 + 1)").unwrap();
        assert_eq!(f, rat(&[-1, 0, 6], &[2, 0, 0, 2]));
        let f = parse_ratfunc("x + 1/x").unwrap();
        assert_eq!(f, rat(&[1, 0, 1], &[0, 1]));
        // exp factors cancel multiplicatively
        let e = parse_elem_expr("exp(x)*exp(-x)*x").unwrap();
        assert_eq!(e.coef, RatFunc::x());
        assert!(e.expo.is_none());
    }

    #[test]
    fn unary_minus_and_powers() {
        assert_eq!(parse_ratfunc("-x^2 + 3").unwrap(), rat(&[3, 0, -1], &[1]));
        assert_eq!(parse_ratfunc("x^-2").unwrap(), rat(&[1], &[0, 0, 1]));
        assert_eq!(parse_ratfunc("(x+1)^2").unwrap(), rat(&[1, 2, 1], &[1]));
    }

    #[test]
    fn display_round_trip() {
        for text in [
            "x^3*exp(2*x)",
            "log(x)/x",
            "(x^2 + 1)/(x^3 + 1)",
            "1/2*x^2*log(x)^3",
            "exp(x^2)",
            "x + 1/x",
        ] {
            let parsed = parse_expression(text).unwrap();
            let printed = parsed.to_string();
            let reparsed = parse_expression(&printed).unwrap();
            assert_eq!(parsed, reparsed, "round trip failed for {}", printed);
        }
    }

    #[test]
    fn operator_parsing() {
        let l = parse_operator("x*D^2 - (x^2+1)*D + 3", OpKind::Diff).unwrap();
        assert_eq!(l.ord(), Some(2));
        assert_eq!(l.coeff(2), RatFunc::x());
        assert_eq!(l.coeff(1), -&rat(&[1, 0, 1], &[1]));
        assert_eq!(l.coeff(0), rat_int(3));
        assert_eq!(l.to_string(), "x*D^2 - (x^2 + 1)*D + 3");

        let p = parse_operator("(n+1)*S - 1", OpKind::Shift).unwrap();
        assert_eq!(p.kind(), OpKind::Shift);
        assert_eq!(p.ord(), Some(1));

        // commutation applies inside a parsed product
        let dx = parse_operator("D*x", OpKind::Diff).unwrap();
        assert_eq!(dx.to_string(), "x*D + 1");

        assert!(parse_operator("D*S", OpKind::Diff).is_err());
        assert!(parse_operator("n*D", OpKind::Diff).is_err());
        // pure coefficient takes the hint
        let c = parse_operator("3", OpKind::Shift).unwrap();
        assert_eq!(c.kind(), OpKind::Shift);
    }

    #[test]
    fn operator_division_by_coefficients() {
        let l = parse_operator("D/2", OpKind::Diff).unwrap();
        assert_eq!(l.to_string(), "1/2*D");
        assert!(parse_operator("1/D", OpKind::Diff).is_err());
    }
}
