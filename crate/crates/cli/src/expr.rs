//! Expression language for fully indexed polynomials in the generators.
//!
//! ```text
//! poly   := "-"? term (("+"|"-") term)*
//! term   := coeff? "*"? factor ("*" factor)*
//! factor := atom | "(" poly ")"
//! coeff  := "(" "-"? rational ("+"|"-") rational "i" ")"
//! atom   := name "[" idx ("," idx)? "]" "(" "-"? rational ")" | "one"
//! ```
//!
//! Indices are 1-based. A lone `0` denotes the zero polynomial.

use std::fmt;

use num_bigint::BigInt;
use num_rational::{BigRational, Rational64};
use num_traits::{One, Signed, Zero};
use zfrt_core::{dresser, DresserKind, DresserMode, ExprContext, Key, Letter, LetterKind, Momentum, NCPoly, Scalar};

use crate::error::{CliError, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Expr {
    pub terms: Vec<Term>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Term {
    pub coeff: Coeff,
    pub factors: Vec<ExprFactor>,
}

/// Gaussian rational `re + im·i`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Coeff {
    pub re: BigRational,
    pub im: BigRational,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ExprFactor {
    Atom(Atom),
    Group(Expr),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Atom {
    One,
    /// A generator component; `indices` are 1-based, one per slot of `kind`.
    Op {
        kind: LetterKind,
        indices: Vec<usize>,
        momentum: Rational64,
    },
}

impl Coeff {
    pub fn one() -> Self {
        Coeff { re: BigRational::one(), im: BigRational::zero() }
    }

    pub fn is_one(&self) -> bool {
        self.re.is_one() && self.im.is_zero()
    }

    pub fn neg(&self) -> Self {
        Coeff { re: -&self.re, im: -&self.im }
    }

    pub fn scalar(&self) -> Scalar {
        Scalar::from_parts(self.re.clone(), self.im.clone())
    }

    pub fn from_scalar(s: &Scalar) -> Self {
        Coeff { re: s.re(), im: s.im() }
    }
}

fn kind_from_name(name: &str) -> Option<LetterKind> {
    Some(match name {
        "a" => LetterKind::Annihilate,
        "ad" => LetterKind::Create,
        "t" => LetterKind::Transmission,
        "r" => LetterKind::Reflection,
        "L" => LetterKind::Dress,
        "Li" => LetterKind::DressInv,
        _ => return None,
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Number(String),
    LParen,
    RParen,
    LBracket,
    RBracket,
    Comma,
    Plus,
    Minus,
    Star,
    Slash,
    End,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Ident(s) | Tok::Number(s) => write!(f, "`{s}`"),
            Tok::LParen => f.write_str("`(`"),
            Tok::RParen => f.write_str("`)`"),
            Tok::LBracket => f.write_str("`[`"),
            Tok::RBracket => f.write_str("`]`"),
            Tok::Comma => f.write_str("`,`"),
            Tok::Plus => f.write_str("`+`"),
            Tok::Minus => f.write_str("`-`"),
            Tok::Star => f.write_str("`*`"),
            Tok::Slash => f.write_str("`/`"),
            Tok::End => f.write_str("end of input"),
        }
    }
}

#[derive(Clone, Copy, Debug)]
struct Pos {
    line: usize,
    column: usize,
}

fn syntax(pos: Pos, message: impl Into<String>) -> CliError {
    CliError::Syntax { line: pos.line, column: pos.column, message: message.into() }
}

fn tokenize(text: &str) -> Result<Vec<(Tok, Pos)>> {
    let mut out = Vec::new();
    let mut chars = text.chars().peekable();
    let (mut line, mut column) = (1, 1);
    while let Some(&c) = chars.peek() {
        let pos = Pos { line, column };
        let mut take = |chars: &mut std::iter::Peekable<std::str::Chars<'_>>| {
            let c = chars.next().expect("peeked");
            if c == '\n' {
                line += 1;
                column = 1;
            } else {
                column += 1;
            }
            c
        };
        if c.is_whitespace() {
            take(&mut chars);
            continue;
        }
        let tok = if c.is_ascii_digit() {
            let mut s = String::new();
            while chars.peek().is_some_and(|c| c.is_ascii_digit()) {
                s.push(take(&mut chars));
            }
            if chars.peek() == Some(&'.') {
                return Err(syntax(Pos { line, column }, "decimal literals are not accepted; write p/q"));
            }
            Tok::Number(s)
        } else if c.is_ascii_alphabetic() {
            let mut s = String::new();
            while chars.peek().is_some_and(|c| c.is_ascii_alphabetic()) {
                s.push(take(&mut chars));
            }
            Tok::Ident(s)
        } else {
            let t = match c {
                '(' => Tok::LParen,
                ')' => Tok::RParen,
                '[' => Tok::LBracket,
                ']' => Tok::RBracket,
                ',' => Tok::Comma,
                '+' => Tok::Plus,
                '-' => Tok::Minus,
                '*' => Tok::Star,
                '/' => Tok::Slash,
                other => return Err(syntax(pos, format!("unexpected character `{other}`"))),
            };
            take(&mut chars);
            t
        };
        out.push((tok, pos));
    }
    out.push((Tok::End, Pos { line, column }));
    Ok(out)
}

struct Parser {
    toks: Vec<(Tok, Pos)>,
    at: usize,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.at].0
    }

    fn pos(&self) -> Pos {
        self.toks[self.at].1
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.at].0.clone();
        if t != Tok::End {
            self.at += 1;
        }
        t
    }

    fn eat(&mut self, t: &Tok) -> bool {
        if self.peek() == t {
            self.bump();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, t: &Tok) -> Result<()> {
        if self.eat(t) {
            Ok(())
        } else {
            Err(syntax(self.pos(), format!("expected {t}, found {}", self.peek())))
        }
    }

    fn number(&mut self) -> Result<BigInt> {
        match self.peek().clone() {
            Tok::Number(s) => {
                self.bump();
                Ok(s.parse().expect("digits"))
            }
            other => Err(syntax(self.pos(), format!("expected a number, found {other}"))),
        }
    }

    fn rational(&mut self) -> Result<BigRational> {
        let pos = self.pos();
        let numer = self.number()?;
        let denom = if self.eat(&Tok::Slash) { self.number()? } else { BigInt::one() };
        if denom.is_zero() {
            return Err(syntax(pos, "zero denominator"));
        }
        Ok(BigRational::new(numer, denom))
    }

    fn signed_rational(&mut self) -> Result<BigRational> {
        let neg = self.eat(&Tok::Minus);
        let r = self.rational()?;
        Ok(if neg { -r } else { r })
    }

    fn coeff(&mut self) -> Result<Coeff> {
        self.expect(&Tok::LParen)?;
        let re = self.signed_rational()?;
        let neg = match self.bump() {
            Tok::Plus => false,
            Tok::Minus => true,
            other => return Err(syntax(self.toks[self.at - 1].1, format!("expected `+` or `-`, found {other}"))),
        };
        let im = self.rational()?;
        match self.bump() {
            Tok::Ident(s) if s == "i" => {}
            other => {
                return Err(syntax(self.toks[self.at.saturating_sub(1)].1, format!("expected `i`, found {other}")))
            }
        }
        self.expect(&Tok::RParen)?;
        Ok(Coeff { re, im: if neg { -im } else { im } })
    }

    /// A coefficient if one parses here, otherwise nothing consumed.
    fn try_coeff(&mut self) -> Option<Coeff> {
        if self.peek() != &Tok::LParen {
            return None;
        }
        let save = self.at;
        match self.coeff() {
            Ok(c) => Some(c),
            Err(_) => {
                self.at = save;
                None
            }
        }
    }

    fn atom(&mut self) -> Result<Atom> {
        let pos = self.pos();
        let name = match self.bump() {
            Tok::Ident(s) => s,
            other => return Err(syntax(pos, format!("expected a generator, found {other}"))),
        };
        if name == "one" {
            return Ok(Atom::One);
        }
        let kind = kind_from_name(&name).ok_or_else(|| syntax(pos, format!("unknown generator `{name}`")))?;
        self.expect(&Tok::LBracket)?;
        let mut indices = Vec::new();
        loop {
            let ipos = self.pos();
            let i = self.number()?;
            let i: usize = i.try_into().map_err(|_| syntax(ipos, "index too large"))?;
            indices.push(i);
            if !self.eat(&Tok::Comma) {
                break;
            }
        }
        self.expect(&Tok::RBracket)?;
        if indices.len() != kind.slots() {
            return Err(syntax(pos, format!("`{name}` takes {} index(es), got {}", kind.slots(), indices.len())));
        }
        self.expect(&Tok::LParen)?;
        let mpos = self.pos();
        let k = self.signed_rational()?;
        self.expect(&Tok::RParen)?;
        let momentum = match (i64::try_from(k.numer()), i64::try_from(k.denom())) {
            (Ok(n), Ok(d)) => Rational64::new(n, d),
            _ => return Err(syntax(mpos, "momentum out of range")),
        };
        Ok(Atom::Op { kind, indices, momentum })
    }

    fn factor(&mut self) -> Result<ExprFactor> {
        if self.eat(&Tok::LParen) {
            let inner = self.poly()?;
            self.expect(&Tok::RParen)?;
            Ok(ExprFactor::Group(inner))
        } else {
            Ok(ExprFactor::Atom(self.atom()?))
        }
    }

    fn term(&mut self, negate: bool) -> Result<Term> {
        let coeff = match self.try_coeff() {
            Some(c) => {
                self.eat(&Tok::Star);
                c
            }
            None => Coeff::one(),
        };
        let mut factors = vec![self.factor()?];
        while self.eat(&Tok::Star) {
            factors.push(self.factor()?);
        }
        Ok(Term { coeff: if negate { coeff.neg() } else { coeff }, factors })
    }

    fn poly(&mut self) -> Result<Expr> {
        let mut terms = vec![];
        let neg = self.eat(&Tok::Minus);
        terms.push(self.term(neg)?);
        loop {
            let neg = match self.peek() {
                Tok::Plus => false,
                Tok::Minus => true,
                _ => break,
            };
            self.bump();
            terms.push(self.term(neg)?);
        }
        Ok(Expr { terms })
    }
}

pub fn parse_expr(text: &str) -> Result<Expr> {
    let toks = tokenize(text)?;
    if matches!(toks.as_slice(), [(Tok::Number(z), _), (Tok::End, _)] if z == "0") {
        return Ok(Expr { terms: Vec::new() });
    }
    let mut p = Parser { toks, at: 0 };
    let e = p.poly()?;
    if p.peek() != &Tok::End {
        return Err(syntax(p.pos(), format!("unexpected {} after expression", p.peek())));
    }
    Ok(e)
}

impl fmt::Display for Coeff {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sign = if self.im.is_negative() { '-' } else { '+' };
        write!(f, "({}{sign}{}i)", self.re, self.im.abs())
    }
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Atom::One => f.write_str("one"),
            Atom::Op { kind, indices, momentum } => {
                let idx: Vec<String> = indices.iter().map(usize::to_string).collect();
                write!(f, "{}[{}]({})", kind.symbol(), idx.join(","), momentum)
            }
        }
    }
}

impl fmt::Display for ExprFactor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExprFactor::Atom(a) => a.fmt(f),
            ExprFactor::Group(e) => write!(f, "({e})"),
        }
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if !self.coeff.is_one() {
            write!(f, "{} * ", self.coeff)?;
        }
        for (i, x) in self.factors.iter().enumerate() {
            if i > 0 {
                f.write_str(" * ")?;
            }
            x.fmt(f)?;
        }
        Ok(())
    }
}

/// Canonical print: every sign lives in the coefficient, terms are joined by ` + `.
impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (i, t) in self.terms.iter().enumerate() {
            if i > 0 {
                f.write_str(" + ")?;
            }
            t.fmt(f)?;
        }
        Ok(())
    }
}

fn lower_atom(atom: &Atom, ctx: &ExprContext) -> Result<NCPoly> {
    let n = ctx.n();
    let (kind, indices, momentum) = match atom {
        Atom::One => return Ok(NCPoly::one(n)),
        Atom::Op { kind, indices, momentum } => (*kind, indices, *momentum),
    };
    if let Some(&bad) = indices.iter().find(|&&i| i == 0 || i > n) {
        return Err(CliError::Index { index: bad, n, atom: atom.to_string() });
    }
    let k = Momentum::new(momentum)?;
    ctx.grid().require(k)?;
    let full = match kind {
        LetterKind::Transmission => dresser(ctx, DresserKind::Transmission, k)?,
        LetterKind::Reflection => dresser(ctx, DresserKind::Reflection, k)?,
        LetterKind::Dress | LetterKind::DressInv if ctx.mode() == DresserMode::Opaque => {
            return Err(CliError::Unsupported(format!("`{atom}` is not available with opaque dressers")));
        }
        _ => ctx.letter(kind, k),
    };
    let fixed: Vec<Option<u8>> = indices.iter().map(|&i| Some((i - 1) as u8)).collect();
    Ok(full.fix_free(&fixed))
}

/// Lowers to a polynomial with no free slots. `t`, `r` follow the context's dresser mode.
pub fn lower(expr: &Expr, ctx: &ExprContext) -> Result<NCPoly> {
    let mut out = NCPoly::zero(ctx.n(), 0);
    for term in &expr.terms {
        let mut p = NCPoly::one(ctx.n());
        for f in &term.factors {
            let q = match f {
                ExprFactor::Atom(a) => lower_atom(a, ctx)?,
                ExprFactor::Group(e) => lower(e, ctx)?,
            };
            p = p.mul(&q);
        }
        out = out.plus(&p.scale(&term.coeff.scalar()));
    }
    Ok(out)
}

/// Expression form of a polynomial without free slots, one term per component.
pub fn from_poly(p: &NCPoly) -> Result<Expr> {
    if p.nfree() != 0 {
        return Err(CliError::Unsupported(format!("polynomial has {} free slots", p.nfree())));
    }
    let mut terms = Vec::new();
    for (word, tensor) in p.terms() {
        for (key, v) in tensor.sorted() {
            terms.push(Term { coeff: Coeff::from_scalar(v), factors: word_atoms(word, key) });
        }
    }
    Ok(Expr { terms })
}

fn word_atoms(word: &[Letter], key: &Key) -> Vec<ExprFactor> {
    if word.is_empty() {
        return vec![ExprFactor::Atom(Atom::One)];
    }
    let mut slot = 0;
    word.iter()
        .map(|l| {
            let indices = key[slot..slot + l.slots()].iter().map(|&i| i as usize + 1).collect();
            slot += l.slots();
            ExprFactor::Atom(Atom::Op { kind: l.kind, indices, momentum: l.momentum.value() })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use zfrt_core::{CatalogSpec, DefectFamily, MomentumGrid, SMatrixFamily};

    fn ctx() -> ExprContext {
        let spec = CatalogSpec::new(
            2,
            MomentumGrid::ints(&[1, 2, 3]),
            SMatrixFamily::Rational { g: Rational64::from_integer(1) },
            DefectFamily::Mirror { flip: true },
        );
        ExprContext::new(spec).unwrap()
    }

    #[test]
    fn parses_products_and_sums() {
        let e = parse_expr("a[1](2) * ad[1](2)").unwrap();
        assert_eq!(e.terms.len(), 1);
        assert_eq!(e.terms[0].factors.len(), 2);
        let p = lower(&e, &ctx()).unwrap();
        assert_eq!(p.num_terms(), 1);
        assert_eq!(p.words().next().unwrap().len(), 2);
    }

    #[test]
    fn coefficient_times_group() {
        let e = parse_expr("(1/2+0i) * (a[1](1) + a[2](-1))").unwrap();
        let p = lower(&e, &ctx()).unwrap();
        assert_eq!(p.nnz(), 2);
        assert!(p.terms().values().flat_map(|t| t.iter()).all(|(_, v)| *v == Scalar::from_ratio(1, 2)));
    }

    #[test]
    fn dressers_expand_by_default() {
        let e = parse_expr("t[1,2](3) * r[2,1](-3)").unwrap();
        let c = ctx();
        let p = lower(&e, &c).unwrap();
        assert!(p
            .words()
            .all(|w| w.len() == 4 && w.iter().all(|l| matches!(l.kind, LetterKind::Dress | LetterKind::DressInv))));
        let opaque = lower(&e, &c.with_mode(DresserMode::Opaque)).unwrap();
        assert_eq!(opaque.nnz(), 1);
        assert!(lower(&parse_expr("L[1,1](1)").unwrap(), &c.with_mode(DresserMode::Opaque)).is_err());
    }

    #[test]
    fn reports_positions() {
        match parse_expr("a[1](2) *\n  b[1](2)") {
            Err(CliError::Syntax { line, column, .. }) => assert_eq!((line, column), (2, 3)),
            other => panic!("{other:?}"),
        }
        assert!(matches!(parse_expr("a[1](0.5)"), Err(CliError::Syntax { .. })));
        assert!(matches!(parse_expr("t[1](2)"), Err(CliError::Syntax { .. })));
        assert!(matches!(parse_expr("a[1](2) a[1](2)"), Err(CliError::Syntax { .. })));
    }

    #[test]
    fn rejects_unknown_index_and_momentum() {
        let c = ctx();
        assert!(matches!(lower(&parse_expr("a[3](1)").unwrap(), &c), Err(CliError::Index { .. })));
        assert!(lower(&parse_expr("a[1](5)").unwrap(), &c).is_err());
    }

    #[test]
    fn signs_fold_into_coefficients() {
        let e = parse_expr("-a[1](1) - (2-1/3i) ad[2](2)").unwrap();
        assert_eq!(e.to_string(), "(-1+0i) * a[1](1) + (-2+1/3i) * ad[2](2)");
        assert_eq!(parse_expr(&e.to_string()).unwrap(), e);
    }

    #[test]
    fn normal_forms_print_back_to_expressions() {
        let c = ctx();
        let p = zfrt_core::nf(&lower(&parse_expr("a[1](1) * ad[1](1)").unwrap(), &c).unwrap(), &c).unwrap();
        let e = from_poly(&p).unwrap();
        assert_eq!(lower(&parse_expr(&e.to_string()).unwrap(), &c).unwrap(), p);
        assert_eq!(from_poly(&NCPoly::zero(2, 0)).unwrap().to_string(), "0");
        assert_eq!(parse_expr("0").unwrap().terms.len(), 0);
    }
}
