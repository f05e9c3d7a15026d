//! Expression syntax for the command line.
//!
//! Grammar:
//!
//! ```text
//! expr     := term (('+' | '-') term)*
//! term     := factor ('*' factor)*
//! factor   := INT | teich | 'V' ['^' INT] '(' expr ')'
//!           | 'F' ['^' INT] '(' expr ')' | 'd' '(' expr ')'
//!           | elit | '(' expr ')'
//! teich    := '[' 'X' INT ']' ['^' INT]
//! elit     := 'e' '(' ['-'] INT ';' rational (',' rational)* ';'
//!             '{' [INT (',' INT)*] '}' ')'
//! rational := INT ['/' INT]
//! ```
//!
//! The element renderer prints a sum of `e(...)` literals, so rendering
//! followed by parsing and evaluation is the identity on canonical
//! elements. Weight entries in a literal are positional, one per variable.

use num_bigint::BigInt;
use num_rational::BigRational;

use drw::{BasicElement, Context, DrwElement, PadicRational, WittScalar};

use crate::CliError;

/// Abstract syntax of a command-line expression.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Expr {
    Int(u64),
    Teich { var: usize, power: u64 },
    Versch { power: u32, inner: Box<Expr> },
    Frob { power: u32, inner: Box<Expr> },
    Diff(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Literal {
        eta: i128,
        entries: Vec<(u64, u64)>,
        indices: Vec<usize>,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum TokKind {
    Int(u64),
    Name(char),
    Sym(char),
}

#[derive(Clone, Copy, Debug)]
struct Token {
    kind: TokKind,
    offset: usize,
}

fn position(input: &str, offset: usize) -> (usize, usize) {
    let before = &input[..offset.min(input.len())];
    let line = before.matches('\n').count() + 1;
    let col = offset - before.rfind('\n').map_or(0, |i| i + 1) + 1;
    (line, col)
}

fn syntax_error(input: &str, offset: usize, msg: impl Into<String>) -> CliError {
    let (line, col) = position(input, offset);
    CliError::Syntax { line, col, msg: msg.into() }
}

fn tokenize(input: &str) -> Result<Vec<Token>, CliError> {
    let bytes = input.as_bytes();
    let mut toks = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i] as char;
        match c {
            ' ' | '\t' | '\n' | '\r' => i += 1,
            '0'..='9' => {
                let start = i;
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                let value = input[start..i]
                    .parse::<u64>()
                    .map_err(|_| syntax_error(input, start, "integer literal too large"))?;
                toks.push(Token { kind: TokKind::Int(value), offset: start });
            }
            'V' | 'F' | 'd' | 'e' | 'X' => {
                toks.push(Token { kind: TokKind::Name(c), offset: i });
                i += 1;
            }
            '+' | '-' | '*' | '^' | '(' | ')' | '[' | ']' | '{' | '}' | ';' | ',' | '/' => {
                toks.push(Token { kind: TokKind::Sym(c), offset: i });
                i += 1;
            }
            other => {
                return Err(syntax_error(input, i, format!("unexpected character '{other}'")));
            }
        }
    }
    Ok(toks)
}

struct Parser<'a> {
    input: &'a str,
    toks: Vec<Token>,
    pos: usize,
}

impl<'a> Parser<'a> {
    fn peek(&self) -> Option<TokKind> {
        self.toks.get(self.pos).map(|t| t.kind)
    }

    fn offset(&self) -> usize {
        self.toks
            .get(self.pos)
            .map_or(self.input.len(), |t| t.offset)
    }

    fn error(&self, msg: impl Into<String>) -> CliError {
        syntax_error(self.input, self.offset(), msg)
    }

    fn eat_sym(&mut self, c: char) -> bool {
        if self.peek() == Some(TokKind::Sym(c)) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect_sym(&mut self, c: char) -> Result<(), CliError> {
        if self.eat_sym(c) {
            Ok(())
        } else {
            Err(self.error(format!("expected '{c}'")))
        }
    }

    fn expect_int(&mut self, what: &str) -> Result<u64, CliError> {
        match self.peek() {
            Some(TokKind::Int(n)) => {
                self.pos += 1;
                Ok(n)
            }
            _ => Err(self.error(format!("expected {what}"))),
        }
    }

    fn expr(&mut self) -> Result<Expr, CliError> {
        let mut acc = self.term()?;
        loop {
            if self.eat_sym('+') {
                acc = Expr::Add(Box::new(acc), Box::new(self.term()?));
            } else if self.eat_sym('-') {
                acc = Expr::Sub(Box::new(acc), Box::new(self.term()?));
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<Expr, CliError> {
        let mut acc = self.factor()?;
        while self.eat_sym('*') {
            acc = Expr::Mul(Box::new(acc), Box::new(self.factor()?));
        }
        Ok(acc)
    }

    fn operator_power(&mut self) -> Result<u32, CliError> {
        if self.eat_sym('^') {
            let n = self.expect_int("operator power")?;
            u32::try_from(n).map_err(|_| self.error("operator power too large"))
        } else {
            Ok(1)
        }
    }

    fn parenthesized(&mut self) -> Result<Expr, CliError> {
        self.expect_sym('(')?;
        let inner = self.expr()?;
        self.expect_sym(')')?;
        Ok(inner)
    }

    fn factor(&mut self) -> Result<Expr, CliError> {
        match self.peek() {
            Some(TokKind::Int(n)) => {
                self.pos += 1;
                Ok(Expr::Int(n))
            }
            Some(TokKind::Sym('[')) => self.teich(),
            Some(TokKind::Sym('(')) => self.parenthesized(),
            Some(TokKind::Name('V')) => {
                self.pos += 1;
                let power = self.operator_power()?;
                Ok(Expr::Versch { power, inner: Box::new(self.parenthesized()?) })
            }
            Some(TokKind::Name('F')) => {
                self.pos += 1;
                let power = self.operator_power()?;
                Ok(Expr::Frob { power, inner: Box::new(self.parenthesized()?) })
            }
            Some(TokKind::Name('d')) => {
                self.pos += 1;
                Ok(Expr::Diff(Box::new(self.parenthesized()?)))
            }
            Some(TokKind::Name('e')) => self.elit(),
            _ => Err(self.error("expected an integer, '[', '(', 'V', 'F', 'd', or 'e'")),
        }
    }

    fn teich(&mut self) -> Result<Expr, CliError> {
        self.expect_sym('[')?;
        match self.peek() {
            Some(TokKind::Name('X')) => self.pos += 1,
            _ => return Err(self.error("expected 'X' after '['")),
        }
        let var = self.expect_int("variable index")?;
        let var = usize::try_from(var).map_err(|_| self.error("variable index too large"))?;
        self.expect_sym(']')?;
        let power = if self.eat_sym('^') {
            self.expect_int("exponent")?
        } else {
            1
        };
        Ok(Expr::Teich { var, power })
    }

    fn rational(&mut self) -> Result<(u64, u64), CliError> {
        let num = self.expect_int("numerator")?;
        if self.eat_sym('/') {
            let at = self.offset();
            let den = self.expect_int("denominator")?;
            if den == 0 {
                return Err(syntax_error(self.input, at, "zero denominator"));
            }
            Ok((num, den))
        } else {
            Ok((num, 1))
        }
    }

    fn elit(&mut self) -> Result<Expr, CliError> {
        self.pos += 1; // 'e'
        self.expect_sym('(')?;
        let negative = self.eat_sym('-');
        let eta = self.expect_int("coefficient")? as i128;
        let eta = if negative { -eta } else { eta };
        self.expect_sym(';')?;
        let mut entries = vec![self.rational()?];
        while self.eat_sym(',') {
            entries.push(self.rational()?);
        }
        self.expect_sym(';')?;
        self.expect_sym('{')?;
        let mut indices = Vec::new();
        if !self.eat_sym('}') {
            loop {
                let i = self.expect_int("partition index")?;
                indices
                    .push(usize::try_from(i).map_err(|_| self.error("index too large"))?);
                if self.eat_sym('}') {
                    break;
                }
                self.expect_sym(',')?;
            }
        }
        self.expect_sym(')')?;
        Ok(Expr::Literal { eta, entries, indices })
    }
}

/// Parses one expression, consuming the whole input.
pub fn parse(input: &str) -> Result<Expr, CliError> {
    let toks = tokenize(input)?;
    let mut parser = Parser { input, toks, pos: 0 };
    let expr = parser.expr()?;
    if parser.peek().is_some() {
        return Err(parser.error("unexpected trailing input"));
    }
    Ok(expr)
}

/// Evaluates an expression to a canonical element in the given context.
pub fn evaluate(ctx: Context, expr: &Expr) -> Result<DrwElement, CliError> {
    match expr {
        Expr::Int(n) => Ok(DrwElement::from_terms(
            ctx,
            [BasicElement::scalar(ctx, WittScalar::from_integer(ctx, *n as i128))],
        )?),
        Expr::Teich { var, power } => Ok(DrwElement::from_terms(
            ctx,
            [BasicElement::teichmuller_monomial(ctx, *var, *power)?],
        )?),
        Expr::Versch { power, inner } => Ok(evaluate(ctx, inner)?.verschiebung_pow(*power)),
        Expr::Frob { power, inner } => Ok(evaluate(ctx, inner)?.frobenius_pow(*power)),
        Expr::Diff(inner) => Ok(evaluate(ctx, inner)?.differential()),
        Expr::Add(a, b) => Ok(evaluate(ctx, a)?.add(&evaluate(ctx, b)?)?),
        Expr::Sub(a, b) => Ok(evaluate(ctx, a)?.sub(&evaluate(ctx, b)?)?),
        Expr::Mul(a, b) => Ok(evaluate(ctx, a)?.mul(&evaluate(ctx, b)?)?),
        Expr::Literal { eta, entries, indices } => {
            if entries.len() != ctx.nvars {
                return Err(CliError::EntryCount(entries.len(), ctx.nvars));
            }
            let weight_entries = entries
                .iter()
                .map(|&(num, den)| PadicRational::from_ratio(ctx.p, num, den))
                .collect::<Result<Vec<_>, _>>()?;
            let weight = drw::WeightFunction::new(ctx.p, weight_entries);
            let term = BasicElement::new(
                WittScalar::from_integer(ctx, *eta),
                weight,
                indices,
            )?;
            Ok(DrwElement::from_terms(ctx, [term])?)
        }
    }
}

/// Parses and evaluates in one step.
pub fn parse_element(ctx: Context, input: &str) -> Result<DrwElement, CliError> {
    evaluate(ctx, &parse(input)?)
}

/// Parses a standalone rational such as `1/2`, `3`, or `-1/3`.
pub fn parse_rational(input: &str) -> Result<BigRational, CliError> {
    let s = input.trim();
    let bad = || CliError::BadRational(input.to_string());
    let (sign, body) = match s.strip_prefix('-') {
        Some(rest) => (-1, rest),
        None => (1, s),
    };
    let (num, den) = match body.split_once('/') {
        Some((n, d)) => (n, d),
        None => (body, "1"),
    };
    let num: i128 = num.trim().parse().map_err(|_| bad())?;
    let den: i128 = den.trim().parse().map_err(|_| bad())?;
    if den == 0 {
        return Err(bad());
    }
    Ok(BigRational::new(
        BigInt::from(sign * num),
        BigInt::from(den),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ctx() -> Context {
        Context::new(2, 2, 6).unwrap()
    }

    #[test]
    fn grammar_covers_the_operator_forms() {
        let e = parse("V^2([X1]^3) * d(V^2([X1]))").unwrap();
        match e {
            Expr::Mul(lhs, rhs) => {
                assert_eq!(
                    *lhs,
                    Expr::Versch {
                        power: 2,
                        inner: Box::new(Expr::Teich { var: 1, power: 3 })
                    }
                );
                assert!(matches!(*rhs, Expr::Diff(_)));
            }
            other => panic!("unexpected shape: {other:?}"),
        }
    }

    #[test]
    fn literal_form_parses() {
        let e = parse("e(1; 3/2, 0; {})").unwrap();
        assert_eq!(
            e,
            Expr::Literal { eta: 1, entries: vec![(3, 2), (0, 1)], indices: vec![] }
        );
        let e = parse("e(-5; 1/2, 1/2; {1, 2})").unwrap();
        assert_eq!(
            e,
            Expr::Literal { eta: -5, entries: vec![(1, 2), (1, 2)], indices: vec![1, 2] }
        );
    }

    #[test]
    fn errors_carry_positions() {
        let err = parse("[X1] & [X2]").unwrap_err();
        match err {
            CliError::Syntax { line, col, .. } => {
                assert_eq!((line, col), (1, 6));
            }
            other => panic!("unexpected error: {other}"),
        }
        assert!(parse("V([X1]").is_err());
        assert!(parse("[Y1]").is_err());
        assert!(parse("e(1; 1/0, 0; {})").is_err());
        assert!(parse("[X1] [X2]").is_err());
    }

    #[test]
    fn evaluation_matches_direct_construction() {
        let ctx = ctx();
        let sq = parse_element(ctx, "[X1] * [X1]").unwrap();
        let direct = DrwElement::from_terms(
            ctx,
            [BasicElement::teichmuller_monomial(ctx, 1, 2).unwrap()],
        )
        .unwrap();
        assert_eq!(sq, direct);
        let one = parse_element(ctx, "1 + 0").unwrap();
        assert_eq!(one, DrwElement::one(ctx));
        assert!(parse_element(ctx, "d(d([X1]))").unwrap().is_zero());
    }

    #[test]
    fn product_collapse_example() {
        // V([X1]) d(V([X1])) collapses to p d([X1]) at p = 2.
        let ctx = ctx();
        let got = parse_element(ctx, "V([X1]) * d(V([X1]))").unwrap();
        let want = parse_element(ctx, "e(2; 1, 0; {1})").unwrap();
        assert_eq!(got, want);
    }

    #[test]
    fn literal_entry_count_is_checked() {
        let ctx = ctx();
        assert!(matches!(
            parse_element(ctx, "e(1; 1; {})").unwrap_err(),
            CliError::EntryCount(1, 2)
        ));
    }

    #[test]
    fn rationals_parse_and_reject_garbage() {
        assert_eq!(parse_rational("1/2").unwrap(), BigRational::new(1.into(), 2.into()));
        assert_eq!(parse_rational("4").unwrap(), BigRational::from_integer(4.into()));
        assert_eq!(
            parse_rational("-2/3").unwrap(),
            BigRational::new((-2).into(), 3.into())
        );
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("").is_err());
        assert!(parse_rational("a/b").is_err());
    }
}
