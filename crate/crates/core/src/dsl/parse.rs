//! Lexer and recursive-descent parser.
//!
//! Syntax is checked for the whole input before any identifier is resolved,
//! so a malformed file always reports its first syntax error.

use alloc::boxed::Box;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Num;

use super::symconst::SymConst;
use super::{unit_deviation, Affine, ImmersionDescriptor, QExpr};
use crate::{Diagnostic, DiagnosticKind, Error};

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Ident(String),
    Number(BigRational),
    Punct(char),
    Eof,
}

#[derive(Clone, Debug)]
struct Token {
    tok: Tok,
    line: usize,
    col: usize,
}

fn diag(kind: DiagnosticKind, line: usize, column: usize, message: impl Into<String>) -> Error {
    Error::Parse(Diagnostic {
        kind,
        line,
        column,
        message: message.into(),
    })
}

fn lex(src: &str) -> Result<Vec<Token>, Error> {
    let mut out = Vec::new();
    for (ln, line) in src.lines().enumerate() {
        let chars: Vec<char> = line.chars().collect();
        let mut i = 0;
        while i < chars.len() {
            let c = chars[i];
            let col = i + 1;
            if c == '#' {
                break;
            }
            if c.is_whitespace() {
                i += 1;
                continue;
            }
            if c.is_ascii_alphabetic() || c == '_' {
                let start = i;
                while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                    i += 1;
                }
                let s: String = chars[start..i].iter().collect();
                out.push(Token {
                    tok: Tok::Ident(s),
                    line: ln + 1,
                    col,
                });
                continue;
            }
            if c.is_ascii_digit() || c == '.' {
                let start = i;
                while i < chars.len() && (chars[i].is_ascii_digit() || chars[i] == '.') {
                    i += 1;
                }
                if i < chars.len() && (chars[i] == 'e' || chars[i] == 'E') {
                    let mut j = i + 1;
                    if j < chars.len() && (chars[j] == '+' || chars[j] == '-') {
                        j += 1;
                    }
                    if j < chars.len() && chars[j].is_ascii_digit() {
                        i = j;
                        while i < chars.len() && chars[i].is_ascii_digit() {
                            i += 1;
                        }
                    }
                }
                let s: String = chars[start..i].iter().collect();
                let v = parse_decimal(&s)
                    .ok_or_else(|| diag(DiagnosticKind::Syntax, ln + 1, col, format!("malformed number `{s}`")))?;
                out.push(Token {
                    tok: Tok::Number(v),
                    line: ln + 1,
                    col,
                });
                continue;
            }
            if "()*,=+-/".contains(c) {
                out.push(Token {
                    tok: Tok::Punct(c),
                    line: ln + 1,
                    col,
                });
                i += 1;
                continue;
            }
            return Err(diag(DiagnosticKind::Syntax, ln + 1, col, format!("unexpected character `{c}`")));
        }
    }
    let line = src.lines().count().max(1);
    let col = src.lines().last().map(|l| l.chars().count() + 1).unwrap_or(1);
    out.push(Token {
        tok: Tok::Eof,
        line,
        col,
    });
    Ok(out)
}

/// Exact value of a decimal literal such as `0.125` or `3e-2`.
fn parse_decimal(s: &str) -> Option<BigRational> {
    let (mantissa, exp) = match s.find(['e', 'E']) {
        Some(k) => (&s[..k], s[k + 1..].parse::<i32>().ok()?),
        None => (s, 0),
    };
    let (int, frac) = match mantissa.find('.') {
        Some(k) => (&mantissa[..k], &mantissa[k + 1..]),
        None => (mantissa, ""),
    };
    if int.is_empty() && frac.is_empty() || frac.contains('.') {
        return None;
    }
    let digits = format!("{int}{frac}");
    let n = BigInt::from_str_radix(&digits, 10).ok()?;
    let shift = exp - frac.len() as i32;
    let ten = BigInt::from(10);
    let p = num_traits::pow(ten, shift.unsigned_abs() as usize);
    Some(if shift >= 0 {
        BigRational::from_integer(n * p)
    } else {
        BigRational::new(n, p)
    })
}

const KEYWORDS: [&str; 10] = [
    "immersion", "vars", "let", "left", "right", "const", "exp", "inv", "pi", "sqrt3",
];

fn keyword(t: &Tok) -> Option<&'static str> {
    match t {
        Tok::Ident(s) => KEYWORDS.iter().copied().find(|k| s.eq_ignore_ascii_case(k)),
        _ => None,
    }
}

// Unresolved syntax trees.

#[derive(Clone, Debug)]
struct Pos {
    line: usize,
    col: usize,
}

#[derive(Clone, Debug)]
enum SExpr {
    Num(BigRational),
    Pi,
    Sqrt3,
    Name(String, Pos),
    Neg(Box<SExpr>),
    Bin(char, Box<SExpr>, Box<SExpr>, Pos),
}

#[derive(Clone, Debug)]
enum RawQ {
    Const([SExpr; 4], Pos),
    Name(String, Pos),
    Exp([SExpr; 3]),
    Mul(Box<RawQ>, Box<RawQ>),
    Inv(Box<RawQ>),
}

struct Raw {
    name: Option<String>,
    vars: Option<(Vec<String>, Pos)>,
    lets: Vec<(String, Pos, RawQ)>,
    left: Option<RawQ>,
    right: Option<RawQ>,
}

struct Parser {
    toks: Vec<Token>,
    at: usize,
}

impl Parser {
    fn peek(&self) -> &Token {
        &self.toks[self.at]
    }

    fn bump(&mut self) -> Token {
        let t = self.toks[self.at].clone();
        if self.at + 1 < self.toks.len() {
            self.at += 1;
        }
        t
    }

    fn pos(&self) -> Pos {
        let t = self.peek();
        Pos {
            line: t.line,
            col: t.col,
        }
    }

    fn error_here(&self, message: impl Into<String>) -> Error {
        let t = self.peek();
        let found = match &t.tok {
            Tok::Eof => "end of input".to_string(),
            Tok::Ident(s) => format!("`{s}`"),
            Tok::Number(n) => format!("`{n}`"),
            Tok::Punct(c) => format!("`{c}`"),
        };
        diag(
            DiagnosticKind::Syntax,
            t.line,
            t.col,
            format!("{}, found {found}", message.into()),
        )
    }

    fn expect_punct(&mut self, c: char) -> Result<(), Error> {
        if self.peek().tok == Tok::Punct(c) {
            self.bump();
            Ok(())
        } else {
            Err(self.error_here(format!("expected `{c}`")))
        }
    }

    fn ident(&mut self, what: &str) -> Result<(String, Pos), Error> {
        let pos = self.pos();
        match &self.peek().tok {
            Tok::Ident(s) if keyword(&self.peek().tok).is_none() => {
                let s = s.clone();
                self.bump();
                Ok((s, pos))
            }
            _ => Err(self.error_here(format!("expected {what}"))),
        }
    }

    /// Runs `inner` for the contents of a parenthesized group opened at
    /// `open`; running out of input inside reports the unclosed `(`.
    fn group<T>(&mut self, open: Pos, inner: impl FnOnce(&mut Self) -> Result<T, Error>) -> Result<T, Error> {
        let unclosed = |p: &Pos| diag(DiagnosticKind::Syntax, p.line, p.col, "unclosed `(`");
        let r = match inner(self) {
            Ok(v) => v,
            Err(_) if self.peek().tok == Tok::Eof => return Err(unclosed(&open)),
            Err(e) => return Err(e),
        };
        if self.peek().tok == Tok::Eof {
            return Err(unclosed(&open));
        }
        self.expect_punct(')')?;
        Ok(r)
    }

    fn file(&mut self) -> Result<Raw, Error> {
        let mut raw = Raw {
            name: None,
            vars: None,
            lets: Vec::new(),
            left: None,
            right: None,
        };
        loop {
            let t = self.peek().clone();
            if t.tok == Tok::Eof {
                return Ok(raw);
            }
            let dup = |what: &str| diag(DiagnosticKind::Structure, t.line, t.col, format!("duplicate `{what}`"));
            match keyword(&t.tok) {
                Some("immersion") => {
                    self.bump();
                    let (n, _) = self.ident("a name after `immersion`")?;
                    if raw.name.replace(n).is_some() {
                        return Err(dup("immersion"));
                    }
                }
                Some("vars") => {
                    self.bump();
                    let pos = self.pos();
                    let mut vs = Vec::new();
                    while matches!(self.peek().tok, Tok::Ident(_)) && keyword(&self.peek().tok).is_none() {
                        vs.push(self.ident("a variable")?.0);
                    }
                    if raw.vars.replace((vs, pos)).is_some() {
                        return Err(dup("vars"));
                    }
                }
                Some("let") => {
                    self.bump();
                    let (n, pos) = self.ident("a binding name after `let`")?;
                    self.expect_punct('=')?;
                    let e = self.qexpr()?;
                    raw.lets.push((n, pos, e));
                }
                Some(side @ ("left" | "right")) => {
                    self.bump();
                    self.expect_punct('=')?;
                    let e = self.qexpr()?;
                    let slot = if side == "left" { &mut raw.left } else { &mut raw.right };
                    if slot.replace(e).is_some() {
                        return Err(dup(side));
                    }
                }
                _ => return Err(self.error_here("expected a statement (`immersion`, `vars`, `let`, `left`, `right`)")),
            }
        }
    }

    fn qexpr(&mut self) -> Result<RawQ, Error> {
        let mut lhs = self.qatom()?;
        while self.peek().tok == Tok::Punct('*') {
            self.bump();
            let rhs = self.qatom()?;
            lhs = RawQ::Mul(Box::new(lhs), Box::new(rhs));
        }
        Ok(lhs)
    }

    fn qatom(&mut self) -> Result<RawQ, Error> {
        let pos = self.pos();
        match keyword(&self.peek().tok) {
            Some("const") => {
                self.bump();
                let open = self.pos();
                self.expect_punct('(')?;
                let c = self.group(open, |p| {
                    let a = p.sexpr()?;
                    p.expect_punct(',')?;
                    let b = p.sexpr()?;
                    p.expect_punct(',')?;
                    let c = p.sexpr()?;
                    p.expect_punct(',')?;
                    let d = p.sexpr()?;
                    Ok([a, b, c, d])
                })?;
                Ok(RawQ::Const(c, pos))
            }
            Some("exp") => {
                self.bump();
                let open = self.pos();
                self.expect_punct('(')?;
                let v = self.group(open, |p| {
                    let a = p.sexpr()?;
                    p.expect_punct(',')?;
                    let b = p.sexpr()?;
                    p.expect_punct(',')?;
                    let c = p.sexpr()?;
                    Ok([a, b, c])
                })?;
                Ok(RawQ::Exp(v))
            }
            Some("inv") => {
                self.bump();
                let open = self.pos();
                self.expect_punct('(')?;
                let e = self.group(open, |p| p.qexpr())?;
                Ok(RawQ::Inv(Box::new(e)))
            }
            Some(_) => Err(self.error_here("expected a quaternion expression")),
            None => match &self.peek().tok {
                Tok::Ident(_) => {
                    let (n, p) = self.ident("an identifier")?;
                    Ok(RawQ::Name(n, p))
                }
                Tok::Punct('(') => {
                    self.bump();
                    self.group(pos, |p| p.qexpr())
                }
                _ => Err(self.error_here("expected a quaternion expression")),
            },
        }
    }

    fn sexpr(&mut self) -> Result<SExpr, Error> {
        let mut lhs = self.sterm()?;
        while let Tok::Punct(c @ ('+' | '-')) = self.peek().tok {
            let pos = self.pos();
            self.bump();
            let rhs = self.sterm()?;
            lhs = SExpr::Bin(c, Box::new(lhs), Box::new(rhs), pos);
        }
        Ok(lhs)
    }

    fn sterm(&mut self) -> Result<SExpr, Error> {
        let mut lhs = self.sfactor()?;
        while let Tok::Punct(c @ ('*' | '/')) = self.peek().tok {
            let pos = self.pos();
            self.bump();
            let rhs = self.sfactor()?;
            lhs = SExpr::Bin(c, Box::new(lhs), Box::new(rhs), pos);
        }
        Ok(lhs)
    }

    fn sfactor(&mut self) -> Result<SExpr, Error> {
        let pos = self.pos();
        match keyword(&self.peek().tok) {
            Some("pi") => {
                self.bump();
                return Ok(SExpr::Pi);
            }
            Some("sqrt3") => {
                self.bump();
                return Ok(SExpr::Sqrt3);
            }
            Some(_) => return Err(self.error_here("expected a scalar expression")),
            None => {}
        }
        match self.peek().tok.clone() {
            Tok::Number(n) => {
                self.bump();
                Ok(SExpr::Num(n))
            }
            Tok::Ident(_) => {
                let (n, p) = self.ident("a variable")?;
                Ok(SExpr::Name(n, p))
            }
            Tok::Punct('-') => {
                self.bump();
                Ok(SExpr::Neg(Box::new(self.sfactor()?)))
            }
            Tok::Punct('+') => {
                self.bump();
                self.sfactor()
            }
            Tok::Punct('(') => {
                self.bump();
                self.group(pos, |p| p.sexpr())
            }
            _ => Err(self.error_here("expected a scalar expression")),
        }
    }
}

// Resolution.

struct Scope<'a> {
    vars: &'a [String],
    lets: &'a [(String, Pos, RawQ)],
    /// Number of bindings visible at this point.
    visible: usize,
}

fn scalar(e: &SExpr, sc: &Scope) -> Result<Affine, Error> {
    Ok(match e {
        SExpr::Num(n) => Affine::constant(SymConst::rational(n.clone())),
        SExpr::Pi => Affine::constant(SymConst::pi()),
        SExpr::Sqrt3 => Affine::constant(SymConst::sqrt3()),
        SExpr::Name(n, p) => match sc.vars.iter().position(|v| v == n) {
            Some(i) => Affine::variable(i),
            None => {
                return Err(diag(
                    DiagnosticKind::UnboundIdentifier,
                    p.line,
                    p.col,
                    format!("`{n}` is not a chart variable"),
                ))
            }
        },
        SExpr::Neg(a) => scalar(a, sc)?.neg(),
        SExpr::Bin(op, a, b, p) => {
            let (a, b) = (scalar(a, sc)?, scalar(b, sc)?);
            match op {
                '+' => a.add(&b),
                '-' => a.add(&b.neg()),
                '*' => {
                    if a.is_constant() {
                        b.scale(&a.constant)
                    } else if b.is_constant() {
                        a.scale(&b.constant)
                    } else {
                        return Err(diag(
                            DiagnosticKind::NonAffine,
                            p.line,
                            p.col,
                            "product of two variable terms is not affine",
                        ));
                    }
                }
                _ => {
                    if !b.is_constant() {
                        return Err(diag(DiagnosticKind::NonAffine, p.line, p.col, "division by a variable term is not affine"));
                    }
                    match b.constant.recip_monomial() {
                        Some(r) => a.scale(&r),
                        None if b.constant.is_zero() => {
                            return Err(diag(DiagnosticKind::InvalidConstant, p.line, p.col, "division by zero"))
                        }
                        None => {
                            return Err(diag(
                                DiagnosticKind::NonAffine,
                                p.line,
                                p.col,
                                "division is only supported by a single-term constant",
                            ))
                        }
                    }
                }
            }
        }
    })
}

fn quaternion(e: &RawQ, sc: &Scope) -> Result<QExpr, Error> {
    Ok(match e {
        RawQ::Const(c, pos) => {
            let mut out: [SymConst; 4] = Default::default();
            for (slot, s) in out.iter_mut().zip(c.iter()) {
                let a = scalar(s, sc)?;
                if !a.is_constant() {
                    return Err(diag(
                        DiagnosticKind::InvalidConstant,
                        pos.line,
                        pos.col,
                        "`const` components must not depend on chart variables",
                    ));
                }
                *slot = a.constant;
            }
            let n: f64 = out.iter().map(|c| c.to_f64() * c.to_f64()).sum();
            if (n - 1.0).abs() > crate::quaternion::UNIT_TOLERANCE {
                return Err(diag(
                    DiagnosticKind::InvalidConstant,
                    pos.line,
                    pos.col,
                    format!("`const` must be a unit quaternion (|q|² = {n})"),
                ));
            }
            QExpr::Const(out)
        }
        RawQ::Name(n, p) => match sc.lets[..sc.visible].iter().rposition(|(m, _, _)| m == n) {
            Some(i) => QExpr::Binding(i),
            None => {
                let later = sc.lets[sc.visible..].iter().any(|(m, _, _)| m == n);
                let msg = if later {
                    format!("`{n}` is used before its `let`")
                } else {
                    format!("unbound identifier `{n}`")
                };
                return Err(diag(DiagnosticKind::UnboundIdentifier, p.line, p.col, msg));
            }
        },
        RawQ::Exp(v) => QExpr::Exp([scalar(&v[0], sc)?, scalar(&v[1], sc)?, scalar(&v[2], sc)?]),
        RawQ::Mul(a, b) => QExpr::Mul(Box::new(quaternion(a, sc)?), Box::new(quaternion(b, sc)?)),
        RawQ::Inv(a) => QExpr::Inv(Box::new(quaternion(a, sc)?)),
    })
}

/// Parses immersion source text into a resolved descriptor.
pub fn parse(src: &str) -> Result<ImmersionDescriptor, Error> {
    let toks = lex(src)?;
    let eof = toks.last().map(|t| (t.line, t.col)).unwrap_or((1, 1));
    let raw = Parser { toks, at: 0 }.file()?;
    let missing = |what: &str| diag(DiagnosticKind::Structure, eof.0, eof.1, format!("missing `{what}` statement"));
    let name = raw.name.clone().ok_or_else(|| missing("immersion"))?;
    let (vars, vpos) = raw.vars.clone().ok_or_else(|| missing("vars"))?;
    let vars: [String; 3] = vars.try_into().map_err(|v: Vec<String>| {
        diag(
            DiagnosticKind::Structure,
            vpos.line,
            vpos.col,
            format!("expected exactly 3 chart variables, found {}", v.len()),
        )
    })?;
    if vars[0] == vars[1] || vars[0] == vars[2] || vars[1] == vars[2] {
        return Err(diag(DiagnosticKind::Structure, vpos.line, vpos.col, "chart variables must be distinct"));
    }
    let left = raw.left.as_ref().ok_or_else(|| missing("left"))?;
    let right = raw.right.as_ref().ok_or_else(|| missing("right"))?;
    let mut bindings = Vec::with_capacity(raw.lets.len());
    for (i, (n, p, e)) in raw.lets.iter().enumerate() {
        if vars.contains(n) {
            return Err(diag(DiagnosticKind::Structure, p.line, p.col, format!("`{n}` shadows a chart variable")));
        }
        let sc = Scope {
            vars: &vars,
            lets: &raw.lets,
            visible: i,
        };
        bindings.push((n.clone(), quaternion(e, &sc)?));
    }
    let sc = Scope {
        vars: &vars,
        lets: &raw.lets,
        visible: raw.lets.len(),
    };
    let (left, right) = (quaternion(left, &sc)?, quaternion(right, &sc)?);
    let desc = ImmersionDescriptor {
        name,
        variables: vars,
        bindings,
        left,
        right,
    };
    let dev = unit_deviation(&desc, [0.0; 3]);
    if !(dev <= 1e-9) {
        return Err(diag(DiagnosticKind::InvalidConstant, eof.0, eof.1, "components do not evaluate to unit quaternions"));
    }
    Ok(desc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::Zero;

    fn err(src: &str) -> Diagnostic {
        match parse(src) {
            Err(Error::Parse(d)) => d,
            other => panic!("expected diagnostic, got {other:?}"),
        }
    }

    #[test]
    fn decimals_are_exact() {
        assert_eq!(parse_decimal("0.125").unwrap(), BigRational::new(1.into(), 8.into()));
        assert_eq!(parse_decimal("3e-2").unwrap(), BigRational::new(3.into(), 100.into()));
        assert_eq!(parse_decimal("2.5E1").unwrap(), BigRational::from_integer(25.into()));
        assert!(parse_decimal(".").is_none());
        assert!(BigRational::zero() == parse_decimal("0.0").unwrap());
    }

    #[test]
    fn unclosed_paren_reports_its_column() {
        let d = err("immersion t\nvars x y z\nleft = U * inv(\n");
        assert_eq!(d.kind, DiagnosticKind::Syntax);
        assert_eq!((d.line, d.column), (3, 15));
    }

    #[test]
    fn non_affine_exp_argument() {
        let d = err("immersion t\nvars x y z\nleft = Exp(x*x,0,0)\nright = exp(0,0,0)");
        assert_eq!(d.kind, DiagnosticKind::NonAffine);
        assert_eq!((d.line, d.column), (3, 13));
    }

    #[test]
    fn unbound_and_forward_references() {
        let d = err("immersion t\nvars x y z\nleft = u\nright = exp(0,0,0)");
        assert_eq!(d.kind, DiagnosticKind::UnboundIdentifier);
        let d = err("immersion t\nvars x y z\nlet a = b\nlet b = exp(x,0,0)\nleft = a\nright = a");
        assert!(d.message.contains("before"));
    }

    #[test]
    fn constants_must_be_unit() {
        let d = err("immersion t\nvars x y z\nleft = const(1,1,0,0)\nright = exp(0,0,0)");
        assert_eq!(d.kind, DiagnosticKind::InvalidConstant);
        assert!(parse("immersion t\nvars x y z\nleft = const(sqrt3/2,1/2,0,0)\nright = exp(0,0,0)").is_ok());
    }

    #[test]
    fn keywords_are_case_insensitive_and_comments_ignored() {
        let src = "IMMERSION t # name\nVars x y z\nLEFT = EXP(x, y, z) # chart\nright = Inv(exp(x,0,0))";
        let d = parse(src).unwrap();
        assert_eq!(d.name, "t");
    }
}
