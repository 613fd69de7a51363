//! Text syntax for germs, deformation families and CTF data.
//!
//! ```text
//! input  := clause* body
//! clause := "param" name ("," name)* ";" | "deform" name ("," name)* ";"
//! body   := expr ";" expr
//!         | "alpha:" expr ";" "A:" expr ";" "B:" expr ";" "C:" expr ";" "D:" expr [";" "rem:" expr "," expr]
//! expr   := ["-"] term (("+" | "-") term)*
//! term   := factor ("*" factor)*
//! factor := atom ["^" integer]
//! atom   := integer ["/" integer] | name | "(" expr ")"
//! ```
//!
//! Germ variables are `x` and `y`; CTF series also accept `xi` for `x` and
//! `t` for `y`.

use std::collections::BTreeSet;
use std::fmt;

use num_bigint::BigInt;
use num_traits::Zero;

use crate::bifurcate::{BifurcateError, DeformationFamily};
use crate::ctf::{CtfData, CtfError};
use crate::jetcalc::{ring::fmt_rational, JetError, ParamMonomial, ParamPoly, PlaneGermJet, Rational, TruncatedSeries, UniSeries};

/// Largest total degree kept while evaluating an expression, unless the
/// working order is larger.
const EVAL_CAP: u32 = 48;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ParseErrorKind {
    #[error("{0}")]
    Syntax(String),
    #[error("nonzero constant term in germ component {0}")]
    ConstantTerm(usize),
    #[error("undeclared symbol `{0}`")]
    Undeclared(String),
    #[error("`{0}` is declared twice")]
    Duplicate(String),
    #[error("`{0}` is reserved")]
    Reserved(String),
    #[error("{0}")]
    Invalid(String),
}

/// Error with a byte offset into the source text.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("at position {position}: {kind}")]
pub struct ParseError {
    pub position: usize,
    pub kind: ParseErrorKind,
}

impl ParseError {
    fn new(position: usize, kind: ParseErrorKind) -> Self {
        ParseError { position, kind }
    }

    fn syntax(position: usize, msg: impl Into<String>) -> Self {
        Self::new(position, ParseErrorKind::Syntax(msg.into()))
    }

    /// Message followed by the source line and a caret under the position.
    pub fn render(&self, source: &str) -> String {
        let col = source[..self.position.min(source.len())].chars().count();
        format!("{self}\n  {source}\n  {}^", " ".repeat(col))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Int(BigInt),
    Name(String),
    Sym(char),
    End,
}

#[derive(Clone, Debug)]
struct Token {
    tok: Tok,
    pos: usize,
}

fn lex(src: &str) -> Result<Vec<Token>, ParseError> {
    let mut out = Vec::new();
    let bytes: Vec<(usize, char)> = src.char_indices().collect();
    let mut i = 0;
    while i < bytes.len() {
        let (pos, c) = bytes[i];
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() {
            let start = i;
            while i < bytes.len() && bytes[i].1.is_ascii_digit() {
                i += 1;
            }
            let end = bytes.get(i).map_or(src.len(), |b| b.0);
            let n: BigInt = src[bytes[start].0..end].parse().expect("digits");
            out.push(Token { tok: Tok::Int(n), pos });
        } else if c.is_alphabetic() || c == '_' {
            let start = i;
            while i < bytes.len() && (bytes[i].1.is_alphanumeric() || bytes[i].1 == '_') {
                i += 1;
            }
            let end = bytes.get(i).map_or(src.len(), |b| b.0);
            out.push(Token {
                tok: Tok::Name(src[bytes[start].0..end].to_string()),
                pos,
            });
        } else if "+-*/^();,:".contains(c) {
            out.push(Token { tok: Tok::Sym(c), pos });
            i += 1;
        } else {
            return Err(ParseError::syntax(pos, format!("unexpected character `{c}`")));
        }
    }
    out.push(Token { tok: Tok::End, pos: src.len() });
    Ok(out)
}

/// What a variable name refers to inside an expression.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Context {
    Germ,
    Ctf,
}

struct Parser<'a> {
    toks: Vec<Token>,
    at: usize,
    order: u32,
    params: &'a BTreeSet<String>,
    context: Context,
}

impl<'a> Parser<'a> {
    fn peek(&self) -> &Tok {
        &self.toks[self.at].tok
    }

    fn pos(&self) -> usize {
        self.toks[self.at].pos
    }

    fn bump(&mut self) -> Token {
        let t = self.toks[self.at].clone();
        if self.at + 1 < self.toks.len() {
            self.at += 1;
        }
        t
    }

    fn eat(&mut self, c: char) -> bool {
        if *self.peek() == Tok::Sym(c) {
            self.bump();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char) -> Result<(), ParseError> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(ParseError::syntax(self.pos(), format!("expected `{c}`, found {}", describe(self.peek()))))
        }
    }

    fn at_name(&self, name: &str) -> bool {
        matches!(self.peek(), Tok::Name(n) if n == name)
    }

    fn expr(&mut self) -> Result<TruncatedSeries, ParseError> {
        let neg = self.eat('-');
        let mut acc = self.term()?;
        if neg {
            acc = -&acc;
        }
        loop {
            if self.eat('+') {
                acc = &acc + &self.term()?;
            } else if self.eat('-') {
                acc = &acc - &self.term()?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<TruncatedSeries, ParseError> {
        let mut acc = self.factor()?;
        loop {
            if self.eat('*') {
                acc = &acc * &self.factor()?;
            } else if matches!(self.peek(), Tok::Int(_) | Tok::Name(_)) || *self.peek() == Tok::Sym('(') {
                return Err(ParseError::syntax(self.pos(), "missing `*` between factors"));
            } else {
                return Ok(acc);
            }
        }
    }

    fn factor(&mut self) -> Result<TruncatedSeries, ParseError> {
        let base = self.atom()?;
        if !self.eat('^') {
            return Ok(base);
        }
        let pos = self.pos();
        match self.bump().tok {
            Tok::Int(n) => {
                let e: u32 = n
                    .try_into()
                    .map_err(|_| ParseError::syntax(pos, "exponent too large"))?;
                let mut out = TruncatedSeries::constant(self.order, ParamPoly::one());
                for _ in 0..e {
                    out = &out * &base;
                }
                Ok(out)
            }
            other => Err(ParseError::syntax(pos, format!("expected an integer exponent, found {}", describe(&other)))),
        }
    }

    fn atom(&mut self) -> Result<TruncatedSeries, ParseError> {
        let Token { tok, pos } = self.bump();
        match tok {
            Tok::Int(n) => {
                let mut value = Rational::from_integer(n);
                if self.eat('/') {
                    let dpos = self.pos();
                    match self.bump().tok {
                        Tok::Int(d) if !d.is_zero() => value /= Rational::from_integer(d),
                        Tok::Int(_) => return Err(ParseError::syntax(dpos, "zero denominator")),
                        other => {
                            return Err(ParseError::syntax(dpos, format!("expected a denominator, found {}", describe(&other))))
                        }
                    }
                }
                Ok(TruncatedSeries::constant(self.order, ParamPoly::constant(value)))
            }
            Tok::Name(name) => self.variable(&name, pos),
            Tok::Sym('(') => {
                let inner = self.expr()?;
                self.expect(')')?;
                Ok(inner)
            }
            other => Err(ParseError::syntax(pos, format!("expected a term, found {}", describe(&other)))),
        }
    }

    fn variable(&self, name: &str, pos: usize) -> Result<TruncatedSeries, ParseError> {
        let o = self.order;
        match (name, self.context) {
            ("x", _) | ("xi", Context::Ctf) => Ok(TruncatedSeries::x(o)),
            ("y", _) | ("t", Context::Ctf) => Ok(TruncatedSeries::y(o)),
            _ if self.params.contains(name) => Ok(TruncatedSeries::constant(o, ParamPoly::var(name))),
            _ => Err(ParseError::new(pos, ParseErrorKind::Undeclared(name.into()))),
        }
    }
}

fn describe(t: &Tok) -> String {
    match t {
        Tok::Int(n) => format!("`{n}`"),
        Tok::Name(n) => format!("`{n}`"),
        Tok::Sym(c) => format!("`{c}`"),
        Tok::End => "end of input".into(),
    }
}

const RESERVED: &[&str] = &["x", "y", "xi", "t", "param", "deform", "alpha", "A", "B", "C", "D", "rem"];

/// Parsed content of an input text.
#[derive(Clone, Debug, PartialEq)]
pub enum Parsed {
    Germ(PlaneGermJet),
    Family(DeformationFamily),
    Ctf(CtfData),
}

/// A parsed input together with its declarations.
#[derive(Clone, Debug, PartialEq)]
pub struct GermExpression {
    pub source: String,
    pub parsed: Parsed,
    /// Formal parameters from `param` clauses, in declaration order.
    pub parameters: Vec<String>,
    /// Deformation parameters from `deform` clauses.
    pub deformations: Vec<String>,
    pub working_order: u32,
    /// Whether terms above the working order were dropped.
    pub truncated: bool,
}

impl GermExpression {
    pub fn kind(&self) -> &'static str {
        match self.parsed {
            Parsed::Germ(_) => "germ",
            Parsed::Family(_) => "family",
            Parsed::Ctf(_) => "ctf",
        }
    }

    /// The germ itself, or the generic member of a family.
    pub fn as_germ(&self) -> Option<PlaneGermJet> {
        match &self.parsed {
            Parsed::Germ(g) => Some(g.clone()),
            Parsed::Family(f) => Some(f.generic()),
            Parsed::Ctf(_) => None,
        }
    }

    /// Canonical text: re-parses to the same value.
    pub fn canonical(&self) -> String {
        let mut out = String::new();
        if !self.parameters.is_empty() {
            out.push_str(&format!("param {}; ", self.parameters.join(", ")));
        }
        if !self.deformations.is_empty() {
            out.push_str(&format!("deform {}; ", self.deformations.join(", ")));
        }
        match &self.parsed {
            Parsed::Germ(g) => out.push_str(&g.to_string()),
            Parsed::Family(f) => out.push_str(&f.generic().to_string()),
            Parsed::Ctf(d) => out.push_str(&print_ctf(d)),
        }
        out
    }
}

impl fmt::Display for GermExpression {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.canonical())
    }
}

pub fn print_ctf(d: &CtfData) -> String {
    let mut out = format!(
        "alpha: {}; A: {}; B: {}; C: {}; D: {}",
        d.alpha.fmt_in("xi"),
        d.a.fmt_in("xi"),
        d.b.fmt_in("xi"),
        d.c.fmt_in("xi"),
        d.d.fmt_in("xi")
    );
    if let Some([e1, e2]) = d.remainder() {
        out.push_str(&format!("; rem: {e1} , {e2}"));
    }
    out
}

fn name_list(p: &mut Parser<'_>, seen: &mut BTreeSet<String>) -> Result<Vec<String>, ParseError> {
    let mut names = Vec::new();
    loop {
        let Token { tok, pos } = p.bump();
        match tok {
            Tok::Name(n) if RESERVED.contains(&n.as_str()) => {
                return Err(ParseError::new(pos, ParseErrorKind::Reserved(n)));
            }
            Tok::Name(n) => {
                if !seen.insert(n.clone()) {
                    return Err(ParseError::new(pos, ParseErrorKind::Duplicate(n)));
                }
                names.push(n);
            }
            other => return Err(ParseError::syntax(pos, format!("expected a parameter name, found {}", describe(&other)))),
        }
        if !p.eat(',') {
            p.expect(';')?;
            return Ok(names);
        }
    }
}

/// Parses a germ, a deformation family (with `deform` clauses) or CTF data.
pub fn parse_germ(text: &str, order: u32) -> Result<GermExpression, ParseError> {
    let toks = lex(text)?;
    let empty = BTreeSet::new();
    let eval_order = order.max(EVAL_CAP);
    let mut head = Parser {
        toks,
        at: 0,
        order: eval_order,
        params: &empty,
        context: Context::Germ,
    };
    let mut seen = BTreeSet::new();
    let mut parameters = Vec::new();
    let mut deformations = Vec::new();
    loop {
        if head.at_name("param") {
            head.bump();
            parameters.extend(name_list(&mut head, &mut seen)?);
        } else if head.at_name("deform") {
            head.bump();
            deformations.extend(name_list(&mut head, &mut seen)?);
        } else {
            break;
        }
    }
    let is_ctf = head.at_name("alpha") && head.toks.get(head.at + 1).map(|t| &t.tok) == Some(&Tok::Sym(':'));
    let mut p = Parser {
        toks: head.toks,
        at: head.at,
        order: eval_order,
        params: &seen,
        context: if is_ctf { Context::Ctf } else { Context::Germ },
    };
    let body_start = p.pos();
    let mut truncated = false;
    let parsed = if is_ctf {
        if !deformations.is_empty() {
            return Err(ParseError::new(body_start, ParseErrorKind::Invalid("CTF data takes no deform clause".into())));
        }
        Parsed::Ctf(ctf_body(&mut p, order, &mut truncated)?)
    } else {
        let mut comps = Vec::new();
        for k in 0..2 {
            let start = p.pos();
            let s = p.expr()?;
            if !s.constant_term().is_zero() && deformations.is_empty() {
                return Err(ParseError::new(start, ParseErrorKind::ConstantTerm(k + 1)));
            }
            comps.push((start, s));
            if k == 0 {
                p.expect(';')?;
            }
        }
        if *p.peek() != Tok::End {
            return Err(ParseError::syntax(p.pos(), format!("expected end of input, found {}", describe(p.peek()))));
        }
        let mut kept = Vec::new();
        for (_, s) in &comps {
            truncated |= s.max_degree().is_some_and(|d| d > order);
            kept.push(s.with_order(order));
        }
        let [first, second]: [TruncatedSeries; 2] = kept.try_into().expect("two components");
        if deformations.is_empty() {
            Parsed::Germ(PlaneGermJet::new(first, second).map_err(|e| ParseError::new(body_start, jet_kind(e)))?)
        } else {
            Parsed::Family(split_family(&first, &second, &deformations, &comps)?)
        }
    };
    Ok(GermExpression {
        source: text.to_string(),
        parsed,
        parameters,
        deformations,
        working_order: order,
        truncated,
    })
}

fn jet_kind(e: JetError) -> ParseErrorKind {
    match e {
        JetError::NonZeroConstant => ParseErrorKind::ConstantTerm(1),
        other => ParseErrorKind::Invalid(other.to_string()),
    }
}

/// Splits `F(x, y; p)` affine in each deformation parameter into base and
/// directions.
fn split_family(
    first: &TruncatedSeries,
    second: &TruncatedSeries,
    names: &[String],
    comps: &[(usize, TruncatedSeries)],
) -> Result<DeformationFamily, ParseError> {
    let order = first.order();
    let mut base = [TruncatedSeries::zero(order), TruncatedSeries::zero(order)];
    let mut dirs: Vec<[TruncatedSeries; 2]> = vec![[TruncatedSeries::zero(order), TruncatedSeries::zero(order)]; names.len()];
    for (k, s) in [first, second].into_iter().enumerate() {
        let start = comps[k].0;
        for (m, c) in s.terms() {
            for (pm, r) in c.terms() {
                let hits: Vec<usize> = (0..names.len()).filter(|&i| pm.exponent(&names[i]) > 0).collect();
                let coeff = |mono: ParamMonomial| ParamPoly::term(r.clone(), mono);
                match hits.as_slice() {
                    [] => base[k].add_term(*m, coeff(pm.clone())),
                    [i] if pm.exponent(&names[*i]) == 1 => {
                        let rest = pm.div(&ParamMonomial::var(&names[*i])).expect("divides");
                        dirs[*i][k].add_term(*m, coeff(rest));
                    }
                    _ => {
                        return Err(ParseError::new(
                            start,
                            ParseErrorKind::Invalid(format!("deformation parameters must enter linearly (term {pm}*{m})")),
                        ))
                    }
                }
            }
        }
        if !base[k].constant_term().is_zero() {
            return Err(ParseError::new(start, ParseErrorKind::ConstantTerm(k + 1)));
        }
    }
    let [b0, b1] = base;
    let base = PlaneGermJet::new(b0, b1).map_err(|e| ParseError::new(comps[0].0, jet_kind(e)))?;
    let mut params = Vec::new();
    for (n, [d0, d1]) in names.iter().zip(dirs) {
        let d = PlaneGermJet::new(d0, d1).map_err(|_| {
            ParseError::new(comps[0].0, ParseErrorKind::Invalid(format!("direction of `{n}` must vanish at the origin")))
        })?;
        params.push((n.clone(), d));
    }
    DeformationFamily::new(base, params).map_err(|e: BifurcateError| ParseError::new(comps[0].0, ParseErrorKind::Invalid(e.to_string())))
}

fn ctf_body(p: &mut Parser<'_>, order: u32, truncated: &mut bool) -> Result<CtfData, ParseError> {
    let mut series = Vec::new();
    for (k, label) in ["alpha", "A", "B", "C", "D"].into_iter().enumerate() {
        if k > 0 {
            p.expect(';')?;
        }
        let pos = p.pos();
        if !p.at_name(label) {
            return Err(ParseError::syntax(pos, format!("expected `{label}:`, found {}", describe(p.peek()))));
        }
        p.bump();
        p.expect(':')?;
        let start = p.pos();
        let s = p.expr()?;
        if s.terms().any(|(m, _)| m.y > 0) {
            return Err(ParseError::new(start, ParseErrorKind::Invalid(CtfError::NotUnivariate(label_static(label)).to_string())));
        }
        *truncated |= s.max_degree().is_some_and(|d| d > order);
        series.push(UniSeries::from_x_slice(&s.with_order(order)));
    }
    let mut it = series.into_iter();
    let mut next = || it.next().expect("five series");
    let mut data = CtfData::new(next(), next(), next(), next(), next());
    if p.eat(';') {
        let pos = p.pos();
        if !p.at_name("rem") {
            return Err(ParseError::syntax(pos, format!("expected `rem:`, found {}", describe(p.peek()))));
        }
        p.bump();
        p.expect(':')?;
        let start = p.pos();
        let e1 = p.expr()?;
        p.expect(',')?;
        let e2 = p.expr()?;
        for s in [&e1, &e2] {
            *truncated |= s.max_degree().is_some_and(|d| d > order);
        }
        data = data
            .with_remainder(e1.with_order(order), e2.with_order(order))
            .map_err(|e| ParseError::new(start, ParseErrorKind::Invalid(e.to_string())))?;
    }
    if *p.peek() != Tok::End {
        return Err(ParseError::syntax(p.pos(), format!("expected end of input, found {}", describe(p.peek()))));
    }
    Ok(data)
}

fn label_static(label: &str) -> &'static str {
    match label {
        "alpha" => "alpha",
        "A" => "A",
        "B" => "B",
        "C" => "C",
        _ => "D",
    }
}

/// Parses a single rational such as `-3/4` or `0.25`.
pub fn parse_rational(text: &str) -> Result<Rational, String> {
    let t = text.trim();
    let (neg, body) = match t.strip_prefix('-') {
        Some(rest) => (true, rest.trim()),
        None => (false, t.strip_prefix('+').unwrap_or(t).trim()),
    };
    let value = if let Some((n, d)) = body.split_once('/') {
        let n: BigInt = n.trim().parse().map_err(|_| format!("invalid rational `{text}`"))?;
        let d: BigInt = d.trim().parse().map_err(|_| format!("invalid rational `{text}`"))?;
        if d.is_zero() {
            return Err(format!("zero denominator in `{text}`"));
        }
        Rational::new(n, d)
    } else if let Some((i, f)) = body.split_once('.') {
        let digits = format!("{i}{f}");
        let n: BigInt = digits.parse().map_err(|_| format!("invalid number `{text}`"))?;
        Rational::new(n, BigInt::from(10).pow(f.len() as u32))
    } else {
        Rational::from_integer(body.parse().map_err(|_| format!("invalid number `{text}`"))?)
    };
    Ok(if neg { -value } else { value })
}

/// Text of a rational, as accepted by [`parse_rational`].
pub fn rational_text(r: &Rational) -> String {
    fmt_rational(r)
}
