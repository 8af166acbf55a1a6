//! Expression grammar.
//!
//! ```text
//! expr    := term (('+' | '-') term)*
//! term    := unary (('*' | '/') unary)*
//! unary   := '-' unary | power
//! power   := atom ('^' unary)?
//! atom    := integer | '(' expr ')' | name | jet | call
//! jet     := dep | dep '_' vars | dep '[' int (',' int)* ']'
//! call    := func primes? '(' expr ')' | func '^' '(' int ')' '(' expr ')'
//!          | ('exp' | 'sqrt' | 'cosh' | 'sinh') '(' expr ')'
//!          | 'D_' var '(' expr ')'
//! ```
//!
//! Exponents must evaluate to rational constants. Multiplication is never
//! implicit.

use num_bigint::BigInt;
use num_rational::BigRational;

use crate::error::{Error, ParseError, Result};
use crate::expr::{exponent_from_big, Expr, Exponent, Kernel, RatFunc};
use crate::jet::{JetContext, MultiIndex, SymbolPoly};

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Int(BigInt),
    Ident(String),
    Prime,
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
    LBracket,
    RBracket,
    Comma,
    Eof,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Int(n) => format!("number `{n}`"),
            Tok::Ident(s) => format!("identifier `{s}`"),
            Tok::Prime => "`'`".into(),
            Tok::Plus => "`+`".into(),
            Tok::Minus => "`-`".into(),
            Tok::Star => "`*`".into(),
            Tok::Slash => "`/`".into(),
            Tok::Caret => "`^`".into(),
            Tok::LParen => "`(`".into(),
            Tok::RParen => "`)`".into(),
            Tok::LBracket => "`[`".into(),
            Tok::RBracket => "`]`".into(),
            Tok::Comma => "`,`".into(),
            Tok::Eof => "end of input".into(),
        }
    }
}

#[derive(Clone, Debug)]
struct Token {
    tok: Tok,
    line: usize,
    column: usize,
}

fn lex(src: &str) -> std::result::Result<Vec<Token>, ParseError> {
    let mut out = Vec::new();
    let chars: Vec<char> = src.chars().collect();
    let (mut line, mut col) = (1, 1);
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let (l0, c0) = (line, col);
        if c == '\n' {
            line += 1;
            col = 1;
            i += 1;
            continue;
        }
        if c.is_whitespace() {
            i += 1;
            col += 1;
            continue;
        }
        let single = match c {
            '\'' => Some(Tok::Prime),
            '+' => Some(Tok::Plus),
            '-' | '−' => Some(Tok::Minus),
            '*' => Some(Tok::Star),
            '/' => Some(Tok::Slash),
            '^' => Some(Tok::Caret),
            '(' => Some(Tok::LParen),
            ')' => Some(Tok::RParen),
            '[' => Some(Tok::LBracket),
            ']' => Some(Tok::RBracket),
            ',' => Some(Tok::Comma),
            _ => None,
        };
        if let Some(tok) = single {
            out.push(Token { tok, line: l0, column: c0 });
            i += 1;
            col += 1;
            continue;
        }
        if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            let s: String = chars[start..i].iter().collect();
            col += i - start;
            out.push(Token {
                tok: Tok::Int(s.parse().expect("digits")),
                line: l0,
                column: c0,
            });
            continue;
        }
        if c.is_ascii_alphabetic() {
            let start = i;
            while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            let s: String = chars[start..i].iter().collect();
            col += i - start;
            out.push(Token { tok: Tok::Ident(s), line: l0, column: c0 });
            continue;
        }
        return Err(ParseError {
            line: l0,
            column: c0,
            message: format!("unexpected character `{c}`"),
            expected: vec![],
        });
    }
    out.push(Token { tok: Tok::Eof, line, column: col });
    Ok(out)
}

struct Parser<'a> {
    ctx: &'a JetContext,
    toks: Vec<Token>,
    pos: usize,
    /// Accept `xi_<var>` covector names (symbol polynomials).
    covectors: bool,
}

impl<'a> Parser<'a> {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].tok
    }

    fn peek_at(&self, k: usize) -> &Tok {
        let i = (self.pos + k).min(self.toks.len() - 1);
        &self.toks[i].tok
    }

    fn bump(&mut self) -> Token {
        let t = self.toks[self.pos].clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn error_at(&self, tok: &Token, message: impl Into<String>, expected: &[&str]) -> Error {
        Error::Parse(ParseError {
            line: tok.line,
            column: tok.column,
            message: message.into(),
            expected: expected.iter().map(|s| s.to_string()).collect(),
        })
    }

    fn unexpected(&self, expected: &[&str]) -> Error {
        let tok = &self.toks[self.pos];
        self.error_at(tok, format!("unexpected {}", tok.tok.describe()), expected)
    }

    fn expect(&mut self, tok: Tok, what: &str) -> Result<Token> {
        if *self.peek() == tok {
            Ok(self.bump())
        } else {
            Err(self.unexpected(&[what]))
        }
    }

    fn expr(&mut self) -> Result<Expr> {
        let mut acc = self.term()?;
        loop {
            match self.peek() {
                Tok::Plus => {
                    self.bump();
                    acc = acc.add(&self.term()?);
                }
                Tok::Minus => {
                    self.bump();
                    acc = acc.sub(&self.term()?);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<Expr> {
        let mut acc = self.unary()?;
        loop {
            match self.peek() {
                Tok::Star => {
                    self.bump();
                    acc = acc.mul(&self.unary()?);
                }
                Tok::Slash => {
                    let t = self.bump();
                    let d = self.unary()?;
                    if d.is_zero() {
                        return Err(self.error_at(&t, "division by zero", &[]));
                    }
                    acc = acc.div(&d)?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn unary(&mut self) -> Result<Expr> {
        if *self.peek() == Tok::Minus {
            self.bump();
            return Ok(self.unary()?.neg());
        }
        self.power()
    }

    fn power(&mut self) -> Result<Expr> {
        let base = self.atom()?;
        if *self.peek() != Tok::Caret {
            return Ok(base);
        }
        let caret = self.bump();
        let e = self.unary()?;
        let q = self.rational_constant(&e, &caret)?;
        base.pow(q)
    }

    fn rational_constant(&self, e: &Expr, at: &Token) -> Result<Exponent> {
        match e.as_constant() {
            Some(RatFunc::Rational(q)) => exponent_from_big(&q),
            _ => Err(self.error_at(at, format!("exponent `{e}` is not a rational number"), &[])),
        }
    }

    fn paren_arg(&mut self) -> Result<Expr> {
        self.expect(Tok::LParen, "`(`")?;
        let e = self.expr()?;
        self.expect(Tok::RParen, "`)`")?;
        Ok(e)
    }

    fn small_int(&mut self) -> Result<u32> {
        let t = self.bump();
        match &t.tok {
            Tok::Int(n) => u32::try_from(n.clone())
                .map_err(|_| self.error_at(&t, format!("integer {n} too large"), &[])),
            _ => {
                self.pos -= 1;
                Err(self.unexpected(&["integer"]))
            }
        }
    }

    fn atom(&mut self) -> Result<Expr> {
        let t = self.bump();
        match t.tok.clone() {
            Tok::Int(n) => Ok(Expr::constant(RatFunc::Rational(BigRational::from_integer(n)))),
            Tok::LParen => {
                let e = self.expr()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(e)
            }
            Tok::Ident(name) => self.identifier(&t, &name),
            _ => {
                self.pos -= 1;
                Err(self.unexpected(&["number", "identifier", "`(`"]))
            }
        }
    }

    fn identifier(&mut self, t: &Token, name: &str) -> Result<Expr> {
        let ctx = self.ctx;
        if ctx.is_parameter(name) {
            return Ok(Expr::param(name));
        }
        if let Some(i) = ctx.independent_index(name) {
            return Ok(ctx.base_var(i));
        }
        if ctx.is_function(name) {
            return self.function_application(name);
        }
        match name {
            "exp" => return Expr::exp(&self.paren_arg()?),
            "sqrt" => return self.paren_arg()?.pow(Exponent::new(1, 2)),
            "cosh" => return Expr::cosh(&self.paren_arg()?),
            "sinh" => return Expr::sinh(&self.paren_arg()?),
            _ => {}
        }
        if let Some(v) = name.strip_prefix("D_") {
            if *self.peek() == Tok::LParen {
                let i = ctx
                    .independent_index(v)
                    .ok_or_else(|| self.error_at(t, format!("`{v}` is not an independent variable"), &[]))?;
                let arg = self.paren_arg()?;
                return ctx.total_derivative(&arg, i);
            }
        }
        if self.covectors {
            if let Some(i) = name.strip_prefix("xi_").and_then(|v| ctx.independent_index(v)) {
                let k = Kernel::base(name, ctx.n() + i);
                return Ok(Expr::kernel(k));
            }
        }
        if let Some(dep) = ctx.dependent_index(name) {
            if *self.peek() == Tok::LBracket {
                self.bump();
                let mut counts = vec![self.small_int()?];
                while *self.peek() == Tok::Comma {
                    self.bump();
                    counts.push(self.small_int()?);
                }
                let close = self.expect(Tok::RBracket, "`]`")?;
                if counts.len() != ctx.n() {
                    return Err(self.error_at(
                        &close,
                        format!("bracket jet needs {} entries, got {}", ctx.n(), counts.len()),
                        &[],
                    ));
                }
                return ctx.jet_of(dep, &counts);
            }
            return ctx.jet(dep, MultiIndex::zero(ctx.n()));
        }
        if let Some((d, vars)) = name.split_once('_') {
            if let Some(dep) = ctx.dependent_index(d) {
                let mut counts = vec![0u32; ctx.n()];
                for c in vars.chars() {
                    let i = ctx.independent_index(&c.to_string()).ok_or_else(|| {
                        self.error_at(t, format!("`{c}` in `{name}` is not an independent variable"), &[])
                    })?;
                    counts[i] += 1;
                }
                if vars.is_empty() {
                    return Err(self.error_at(t, format!("empty subscript in `{name}`"), &[]));
                }
                return ctx.jet_of(dep, &counts);
            }
        }
        Err(self.error_at(t, format!("undeclared identifier `{name}`"), &[]))
    }

    fn function_application(&mut self, name: &str) -> Result<Expr> {
        let mut order = 0u32;
        while *self.peek() == Tok::Prime {
            self.bump();
            order += 1;
        }
        if order == 0 && *self.peek() == Tok::Caret && *self.peek_at(1) == Tok::LParen {
            self.bump();
            self.bump();
            order = self.small_int()?;
            self.expect(Tok::RParen, "`)`")?;
        }
        let arg = self.paren_arg()?;
        self.ctx.func(name, order, arg)
    }
}

fn run(src: &str, ctx: &JetContext, covectors: bool) -> Result<Expr> {
    let toks = lex(src)?;
    let mut p = Parser { ctx, toks, pos: 0, covectors };
    let e = p.expr()?;
    if *p.peek() != Tok::Eof {
        return Err(p.unexpected(&["operator", "end of input"]));
    }
    Ok(e)
}

/// Parse and normalize an expression.
pub fn parse(src: &str, ctx: &JetContext) -> Result<Expr> {
    run(src, ctx, false)
}

/// Canonical text of an expression.
pub fn format(e: &Expr) -> String {
    e.to_string()
}

/// Parse a homogeneous polynomial in `xi_<var>` with expression
/// coefficients, e.g. `xi_t` or `u*xi_t*xi_x`.
pub fn parse_symbol(src: &str, ctx: &JetContext) -> Result<SymbolPoly> {
    let e = run(src, ctx, true)?;
    let xi: Vec<Kernel> = (0..ctx.n())
        .map(|i| Kernel::base(&format!("xi_{}", ctx.independent()[i]), ctx.n() + i))
        .collect();
    let mut out = SymbolPoly::zero();
    for (m, c) in e.terms() {
        let mut counts = vec![0u32; ctx.n()];
        let mut rest = crate::expr::Monomial::one();
        for (k, ex) in m.factors() {
            match xi.iter().position(|x| x == k) {
                Some(i) => {
                    if !ex.is_integer() || *ex.numer() < 0 {
                        return Err(Error::Validation(format!("`{k}^{ex}` in a symbol polynomial")));
                    }
                    counts[i] = *ex.numer() as u32;
                }
                None => rest = rest.times_power(k, *ex),
            }
        }
        out.add_term(MultiIndex::new(counts), &Expr::from_term(rest, c.clone()));
    }
    let degrees: std::collections::BTreeSet<u32> = out.terms().map(|(s, _)| s.total()).collect();
    if degrees.len() > 1 {
        return Err(Error::Validation(format!("symbol polynomial `{src}` is not homogeneous")));
    }
    Ok(out)
}

/// Split `lhs = rhs`.
pub fn parse_equation(src: &str, ctx: &JetContext) -> Result<(Expr, Expr)> {
    let mut parts = src.splitn(2, '=');
    let lhs = parts.next().unwrap_or_default();
    let rhs = parts.next().ok_or_else(|| {
        Error::Parse(ParseError {
            line: 1,
            column: src.chars().count() + 1,
            message: format!("`{src}` is not an equation"),
            expected: vec!["`=`".into()],
        })
    })?;
    Ok((parse(lhs, ctx)?, parse(rhs, ctx)?))
}
