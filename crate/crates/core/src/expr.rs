//! Expression trees over the generators of both algebras, with a parser,
//! a canonical printer, evaluation to series or matrices, generator
//! substitution and the antipode transform.
//!
//! Grammar (precedence high to low: `^`, unary `-`, `* /`, `+ -`; binary
//! operators left-associative):
//!
//! ```text
//! expr    := term (('+' | '-') term)*
//! term    := unary (('*' | '/') unary)*
//! unary   := '-' unary | power
//! power   := atom ('^' INT)*
//! atom    := INT ['/' INT] | 'h' | 'w' | GEN | FUNC '(' expr ')' | '(' expr ')'
//! GEN     := J+ | J- | J0 | T | Tinv | H | Y | X
//! FUNC    := exp | log1p | sinh | cosh | tanh | arctanh | sqrt1p
//! ```
//!
//! `INT/INT` directly at the start of an operand is a rational literal, so
//! `(1/2)*h` holds the literal `1/2`; after a `/` operator the right operand
//! never folds, keeping `w/2/3 = (w/2)/3`.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::{Elementary, HPoly, Rational, WSeries};
use crate::matrix::PolyMatrix;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Generator {
    T,
    Tinv,
    H,
    Y,
    X,
    Jp,
    Jm,
    J0,
}

impl Generator {
    pub const JORDANIAN: [Generator; 5] = [
        Generator::T,
        Generator::Tinv,
        Generator::H,
        Generator::Y,
        Generator::X,
    ];
    pub const CLASSICAL: [Generator; 3] = [Generator::Jp, Generator::Jm, Generator::J0];

    pub fn symbol(self) -> &'static str {
        match self {
            Generator::T => "T",
            Generator::Tinv => "Tinv",
            Generator::H => "H",
            Generator::Y => "Y",
            Generator::X => "X",
            Generator::Jp => "J+",
            Generator::Jm => "J-",
            Generator::J0 => "J0",
        }
    }

    pub fn is_classical(self) -> bool {
        Self::CLASSICAL.contains(&self)
    }
}

impl fmt::Display for Generator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.symbol())
    }
}

impl FromStr for Generator {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let g = match s {
            "T" => Generator::T,
            "Tinv" => Generator::Tinv,
            "H" => Generator::H,
            "Y" => Generator::Y,
            "X" => Generator::X,
            "J+" | "Jp" => Generator::Jp,
            "J-" | "Jm" => Generator::Jm,
            "J0" => Generator::J0,
            _ => return Err(Error::UnknownSymbol(s.to_string())),
        };
        Ok(g)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Dialect {
    /// Series in the formal variable `w`; generators and `h` are rejected.
    ScalarSeries,
    /// Matrix expressions over generators and `h`; `w` is rejected.
    MatrixExpr,
}

impl Dialect {
    fn name(self) -> &'static str {
        match self {
            Dialect::ScalarSeries => "scalar-series",
            Dialect::MatrixExpr => "matrix-expr",
        }
    }
}

/// Expression tree. Products keep their order (the algebra is
/// noncommutative).
#[derive(Clone, Debug, PartialEq)]
pub enum Expr {
    Num(Rational),
    /// A polynomial in `h` used as a scalar.
    Scalar(HPoly),
    /// The deformation parameter `h`.
    Param,
    /// The series variable `w`.
    Var,
    Gen(Generator),
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    /// Division. In the matrix dialect the divisor must be a scalar `c h^k`.
    Div(Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, u32),
    Func(Elementary, Box<Expr>),
    /// `s(arg)`, or `s(arg - 1)` when `unit` is set; the argument (minus
    /// its unit part) must be nilpotent.
    Series {
        series: WSeries,
        arg: Box<Expr>,
        unit: bool,
    },
}

/// Shorthand constructors for building expressions in code.
impl Expr {
    pub fn num(n: i64) -> Expr {
        Expr::Num(Rational::from(n))
    }

    pub fn rat(n: i64, d: i64) -> Expr {
        Expr::Num(Rational::new(n, d))
    }

    pub fn gen(g: Generator) -> Expr {
        Expr::Gen(g)
    }

    pub fn h() -> Expr {
        Expr::Param
    }

    #[allow(clippy::should_implement_trait)]
    pub fn add(self, rhs: Expr) -> Expr {
        Expr::Add(Box::new(self), Box::new(rhs))
    }

    #[allow(clippy::should_implement_trait)]
    pub fn sub(self, rhs: Expr) -> Expr {
        Expr::Sub(Box::new(self), Box::new(rhs))
    }

    #[allow(clippy::should_implement_trait)]
    pub fn mul(self, rhs: Expr) -> Expr {
        Expr::Mul(Box::new(self), Box::new(rhs))
    }

    #[allow(clippy::should_implement_trait)]
    pub fn div(self, rhs: Expr) -> Expr {
        Expr::Div(Box::new(self), Box::new(rhs))
    }

    #[allow(clippy::should_implement_trait)]
    pub fn neg(self) -> Expr {
        Expr::Neg(Box::new(self))
    }

    pub fn pow(self, k: u32) -> Expr {
        Expr::Pow(Box::new(self), k)
    }

    pub fn func(f: Elementary, arg: Expr) -> Expr {
        Expr::Func(f, Box::new(arg))
    }

    pub fn series(series: WSeries, arg: Expr) -> Expr {
        Expr::Series {
            series,
            arg: Box::new(arg),
            unit: false,
        }
    }

    pub fn series_unit(series: WSeries, arg: Expr) -> Expr {
        Expr::Series {
            series,
            arg: Box::new(arg),
            unit: true,
        }
    }

    /// Every generator occurring in the tree.
    pub fn generators(&self) -> Vec<Generator> {
        let mut out = Vec::new();
        self.visit(&mut |e| {
            if let Expr::Gen(g) = e {
                if !out.contains(g) {
                    out.push(*g);
                }
            }
        });
        out.sort();
        out
    }

    fn visit(&self, f: &mut impl FnMut(&Expr)) {
        f(self);
        match self {
            Expr::Neg(a) | Expr::Pow(a, _) | Expr::Func(_, a) => a.visit(f),
            Expr::Series { arg, .. } => arg.visit(f),
            Expr::Add(a, b) | Expr::Sub(a, b) | Expr::Mul(a, b) | Expr::Div(a, b) => {
                a.visit(f);
                b.visit(f);
            }
            Expr::Num(_) | Expr::Scalar(_) | Expr::Param | Expr::Var | Expr::Gen(_) => {}
        }
    }

    /// Rebuild the tree bottom-up, replacing generators through `f`.
    fn map_generators(
        &self,
        f: &impl Fn(Generator) -> Result<Expr>,
        reverse: bool,
    ) -> Result<Expr> {
        let go = |e: &Expr| e.map_generators(f, reverse).map(Box::new);
        Ok(match self {
            Expr::Gen(g) => f(*g)?,
            Expr::Num(_) | Expr::Scalar(_) | Expr::Param | Expr::Var => self.clone(),
            Expr::Neg(a) => Expr::Neg(go(a)?),
            Expr::Add(a, b) => Expr::Add(go(a)?, go(b)?),
            Expr::Sub(a, b) => Expr::Sub(go(a)?, go(b)?),
            Expr::Mul(a, b) if reverse => Expr::Mul(go(b)?, go(a)?),
            Expr::Mul(a, b) => Expr::Mul(go(a)?, go(b)?),
            // The divisor is a scalar, fixed by both kinds of transform.
            Expr::Div(a, b) => Expr::Div(go(a)?, b.clone()),
            Expr::Pow(a, k) => Expr::Pow(go(a)?, *k),
            Expr::Func(fun, a) => Expr::Func(*fun, go(a)?),
            Expr::Series { series, arg, unit } => Expr::Series {
                series: series.clone(),
                arg: go(arg)?,
                unit: *unit,
            },
        })
    }

    /// Homomorphic substitution of generators; unmapped generators stay.
    pub fn substitute(&self, table: &BTreeMap<Generator, Expr>) -> Expr {
        self.map_generators(
            &|g| Ok(table.get(&g).cloned().unwrap_or(Expr::Gen(g))),
            false,
        )
        .expect("substitution is infallible")
    }

    /// Evaluate as a series in `w` to exactly `order` coefficients, raising
    /// the working precision as far as divisions require.
    pub fn eval_series(&self, order: usize) -> Result<WSeries> {
        let mut work = order + 2;
        loop {
            let s = self.eval_series_raw(work)?;
            if s.order() >= order {
                return s.truncate_checked(order);
            }
            if work > 4 * order + 32 {
                return Err(Error::InsufficientOrder {
                    order: s.order(),
                    required: order,
                });
            }
            work += order - s.order() + 2;
        }
    }

    fn eval_series_raw(&self, n: usize) -> Result<WSeries> {
        let go = |e: &Expr| e.eval_series_raw(n);
        Ok(match self {
            Expr::Num(c) => WSeries::constant(n, c.clone()),
            Expr::Var => WSeries::var(n),
            Expr::Param | Expr::Scalar(_) => {
                return Err(Error::Dialect {
                    symbol: "h".into(),
                    dialect: Dialect::ScalarSeries.name(),
                })
            }
            Expr::Gen(g) => {
                return Err(Error::Dialect {
                    symbol: g.symbol().into(),
                    dialect: Dialect::ScalarSeries.name(),
                })
            }
            Expr::Neg(a) => -go(a)?,
            Expr::Add(a, b) => go(a)? + go(b)?,
            Expr::Sub(a, b) => go(a)? - go(b)?,
            Expr::Mul(a, b) => go(a)? * go(b)?,
            Expr::Div(a, b) => go(a)?.div(&go(b)?)?,
            Expr::Pow(a, k) => go(a)?.powi(*k as usize),
            Expr::Func(f, a) => f.apply(&go(a)?)?,
            Expr::Series { series, arg, unit } => {
                let mut inner = go(arg)?;
                if *unit {
                    inner = &inner - &WSeries::one(n);
                }
                series
                    .truncate_checked(series.order().min(inner.order()))?
                    .compose(&inner)?
            }
        })
    }

    /// Evaluate a generator-free subexpression to a polynomial in `h`.
    pub fn eval_scalar(&self) -> Result<HPoly> {
        let go = |e: &Expr| e.eval_scalar();
        Ok(match self {
            Expr::Num(c) => HPoly::constant(c.clone()),
            Expr::Scalar(p) => p.clone(),
            Expr::Param => HPoly::h(),
            Expr::Var => {
                return Err(Error::Dialect {
                    symbol: "w".into(),
                    dialect: Dialect::MatrixExpr.name(),
                })
            }
            Expr::Gen(g) => return Err(Error::Inconsistent(format!("{g} is not a scalar"))),
            Expr::Neg(a) => -go(a)?,
            Expr::Add(a, b) => go(a)? + go(b)?,
            Expr::Sub(a, b) => go(a)? - go(b)?,
            Expr::Mul(a, b) => go(a)? * go(b)?,
            Expr::Div(a, b) => {
                let (c, k) = monomial(&go(b)?)?;
                go(a)?.div_h(k)?.scale(&c.recip()?)
            }
            Expr::Pow(a, k) => {
                let base = go(a)?;
                (0..*k).fold(HPoly::one(), |acc, _| &acc * &base)
            }
            Expr::Func(..) | Expr::Series { .. } => {
                return Err(Error::Inconsistent(
                    "function of a scalar is not a polynomial in h".into(),
                ))
            }
        })
    }

    /// Evaluate on a representation. Function applications require a
    /// nilpotent argument (after removing the unit part for `unit` series).
    pub fn eval_matrix(&self, rep: &dyn GeneratorImages) -> Result<PolyMatrix> {
        let n = rep.dim();
        let go = |e: &Expr| e.eval_matrix(rep);
        Ok(match self {
            Expr::Num(_) | Expr::Scalar(_) | Expr::Param => {
                PolyMatrix::identity(n).scale(&self.eval_scalar()?)
            }
            Expr::Var => {
                return Err(Error::Dialect {
                    symbol: "w".into(),
                    dialect: Dialect::MatrixExpr.name(),
                })
            }
            Expr::Gen(g) => rep
                .image(*g)
                .cloned()
                .ok_or_else(|| Error::UnknownSymbol(g.symbol().to_string()))?,
            Expr::Neg(a) => -go(a)?,
            Expr::Add(a, b) => go(a)?.try_add(&go(b)?)?,
            Expr::Sub(a, b) => go(a)?.try_sub(&go(b)?)?,
            Expr::Mul(a, b) => go(a)?.try_mul(&go(b)?)?,
            Expr::Div(a, b) => {
                let (c, k) = monomial(&b.eval_scalar()?)?;
                go(a)?.div_h_checked(k)?.scale_rat(&c.recip()?)
            }
            Expr::Pow(a, k) => go(a)?.powi(*k as usize)?,
            Expr::Func(f, a) => go(a)?.apply_series(&f.expand(n + 1))?,
            Expr::Series { series, arg, unit } => {
                let mut m = go(arg)?;
                if *unit {
                    m = m.try_sub(&PolyMatrix::identity(n))?;
                }
                m.apply_series(series)?
            }
        })
    }
}

/// Split a nonzero monomial `c h^k` into `(c, k)`.
fn monomial(p: &HPoly) -> Result<(Rational, usize)> {
    match p.valuation() {
        Some(k) if p.degree() == Some(k) => Ok((p.coeff(k), k)),
        Some(_) => Err(Error::Inconsistent(format!(
            "divisor `{p}` is not a monomial c*h^k"
        ))),
        None => Err(Error::DivisionByZero),
    }
}

/// A source of generator matrices.
pub trait GeneratorImages {
    fn dim(&self) -> usize;
    fn image(&self, g: Generator) -> Option<&PolyMatrix>;
}

/// An explicit generator-to-matrix table.
#[derive(Clone, Debug, Default)]
pub struct GeneratorTable {
    pub dim: usize,
    pub images: BTreeMap<Generator, PolyMatrix>,
}

impl GeneratorTable {
    pub fn new(dim: usize) -> Self {
        GeneratorTable {
            dim,
            images: BTreeMap::new(),
        }
    }

    pub fn with(mut self, g: Generator, m: PolyMatrix) -> Self {
        self.images.insert(g, m);
        self
    }
}

impl GeneratorImages for GeneratorTable {
    fn dim(&self) -> usize {
        self.dim
    }
    fn image(&self, g: Generator) -> Option<&PolyMatrix> {
        self.images.get(&g)
    }
}

/// Antipode as an anti-homomorphism on the tree: products reversed,
/// scalars fixed, `T <-> Tinv`, `H -> -T H Tinv`, `Y -> -T Y Tinv`,
/// `X -> -X`, and `J -> -J` on classical generators.
pub fn antipode_transform(e: &Expr) -> Result<Expr> {
    e.map_generators(&antipode_image, true)
}

fn antipode_image(g: Generator) -> Result<Expr> {
    use Generator::*;
    let conj = |x: Generator| Expr::gen(T).mul(Expr::gen(x)).mul(Expr::gen(Tinv)).neg();
    Ok(match g {
        T => Expr::gen(Tinv),
        Tinv => Expr::gen(T),
        H => conj(H),
        Y => conj(Y),
        X | Jp | Jm | J0 => Expr::gen(g).neg(),
    })
}

// ---------------------------------------------------------------- printing

const P_SUM: u8 = 1;
const P_PROD: u8 = 2;
const P_NEG: u8 = 3;
const P_POW: u8 = 4;
const P_ATOM: u8 = 5;

impl Expr {
    fn prec(&self) -> u8 {
        match self {
            Expr::Add(..) | Expr::Sub(..) => P_SUM,
            Expr::Mul(..) | Expr::Div(..) => P_PROD,
            Expr::Neg(_) => P_NEG,
            Expr::Num(c) if c.is_negative() => P_NEG,
            Expr::Pow(..) => P_POW,
            _ => P_ATOM,
        }
    }

    fn is_fraction(&self) -> bool {
        matches!(self, Expr::Num(c) if !c.is_integer())
    }

    /// Non-integer literals print bare only as operands of a sum or a
    /// negation, where `INT/INT` lexes back as the same literal.
    fn write_operand(&self, f: &mut fmt::Formatter<'_>, min_prec: u8, in_sum: bool) -> fmt::Result {
        let wrap = self.prec() < min_prec || (!in_sum && self.is_fraction());
        if wrap {
            write!(f, "({self})")
        } else {
            write!(f, "{self}")
        }
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Num(c) if c.is_negative() => {
                write!(f, "-{}", c.abs())
            }
            Expr::Num(c) => write!(f, "{c}"),
            Expr::Scalar(p) => {
                if p.coeffs().len() <= 1 && !p.coeff(0).is_negative() && p.coeff(0).is_integer() {
                    write!(f, "{p}")
                } else {
                    write!(f, "({p})")
                }
            }
            Expr::Param => write!(f, "h"),
            Expr::Var => write!(f, "w"),
            Expr::Gen(g) => write!(f, "{g}"),
            Expr::Neg(a) => {
                write!(f, "-")?;
                a.write_operand(f, P_NEG, true)
            }
            Expr::Add(a, b) | Expr::Sub(a, b) => {
                a.write_operand(f, P_SUM, true)?;
                write!(
                    f,
                    " {} ",
                    if matches!(self, Expr::Add(..)) {
                        '+'
                    } else {
                        '-'
                    }
                )?;
                b.write_operand(f, P_SUM + 1, true)
            }
            Expr::Mul(a, b) | Expr::Div(a, b) => {
                a.write_operand(f, P_PROD, false)?;
                write!(
                    f,
                    "{}",
                    if matches!(self, Expr::Mul(..)) {
                        '*'
                    } else {
                        '/'
                    }
                )?;
                b.write_operand(f, P_PROD + 1, false)
            }
            Expr::Pow(a, k) => {
                a.write_operand(f, P_ATOM, false)?;
                write!(f, "^{k}")
            }
            Expr::Func(fun, a) => write!(f, "{fun}({a})"),
            Expr::Series { series, arg, unit } => {
                let coeffs: Vec<String> = series.coeffs().iter().map(|c| c.to_string()).collect();
                write!(
                    f,
                    "series[{}]({arg}{})",
                    coeffs.join(", "),
                    if *unit { " - 1" } else { "" }
                )
            }
        }
    }
}

// ----------------------------------------------------------------- parsing

/// Half-open byte range in the source, reported 1-based in errors.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Span {
    pub start: usize,
    pub end: usize,
}

/// A parsed expression together with its source and the spans of its
/// atoms (numbers, symbols, function names) in source order.
#[derive(Clone, Debug, PartialEq)]
pub struct ParsedExpr {
    pub expr: Expr,
    pub source: String,
    pub dialect: Dialect,
    pub atoms: Vec<(String, Span)>,
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Int(String),
    Ident(String),
    Op(char),
}

fn lex(src: &str) -> Result<Vec<(Tok, Span)>> {
    let chars: Vec<(usize, char)> = src.char_indices().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let (pos, c) = chars[i];
        if c.is_whitespace() {
            i += 1;
            continue;
        }
        let start = i;
        let tok = if c.is_ascii_digit() {
            while i < chars.len() && chars[i].1.is_ascii_digit() {
                i += 1;
            }
            Tok::Int(chars[start..i].iter().map(|&(_, c)| c).collect())
        } else if c.is_ascii_alphabetic() {
            while i < chars.len() && (chars[i].1.is_ascii_alphanumeric() || chars[i].1 == '_') {
                i += 1;
            }
            let mut name: String = chars[start..i].iter().map(|&(_, c)| c).collect();
            // `J+` and `J-` are single symbols.
            if name == "J" && i < chars.len() && matches!(chars[i].1, '+' | '-') {
                name.push(chars[i].1);
                i += 1;
            }
            Tok::Ident(name)
        } else if "+-*/^()".contains(c) {
            i += 1;
            Tok::Op(c)
        } else {
            return Err(Error::Syntax {
                pos: pos + 1,
                msg: format!("unexpected character `{c}`"),
            });
        };
        let end = chars.get(i).map_or(src.len(), |&(p, _)| p);
        out.push((tok, Span { start: pos, end }));
    }
    Ok(out)
}

struct Parser<'a> {
    toks: Vec<(Tok, Span)>,
    at: usize,
    src: &'a str,
    dialect: Dialect,
    atoms: Vec<(String, Span)>,
}

impl Parser<'_> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.at).map(|(t, _)| t)
    }

    /// 1-based column of the current token, or one past the end.
    fn pos(&self) -> usize {
        self.toks
            .get(self.at)
            .map_or(self.src.len() + 1, |(_, s)| s.start + 1)
    }

    fn err<T>(&self, msg: impl Into<String>) -> Result<T> {
        Err(Error::Syntax {
            pos: self.pos(),
            msg: msg.into(),
        })
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(&Tok::Op(c)) {
            self.at += 1;
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<Expr> {
        let mut lhs = self.term()?;
        loop {
            if self.eat('+') {
                lhs = lhs.add(self.term()?);
            } else if self.eat('-') {
                lhs = lhs.sub(self.term()?);
            } else {
                return Ok(lhs);
            }
        }
    }

    fn term(&mut self) -> Result<Expr> {
        let mut lhs = self.unary(true)?;
        loop {
            if self.eat('*') {
                lhs = lhs.mul(self.unary(true)?);
            } else if self.eat('/') {
                lhs = lhs.div(self.unary(false)?);
            } else {
                return Ok(lhs);
            }
        }
    }

    fn unary(&mut self, fold: bool) -> Result<Expr> {
        if self.eat('-') {
            return Ok(self.unary(fold)?.neg());
        }
        let mut base = self.atom(fold)?;
        while self.eat('^') {
            match self.toks.get(self.at) {
                Some((Tok::Int(s), _)) => {
                    let k: u32 = s.parse().or_else(|_| self.err("exponent too large"))?;
                    self.at += 1;
                    base = base.pow(k);
                }
                _ => return self.err("expected a non-negative integer exponent"),
            }
        }
        Ok(base)
    }

    fn atom(&mut self, fold: bool) -> Result<Expr> {
        let Some((tok, span)) = self.toks.get(self.at).cloned() else {
            return self.err("unexpected end of input, expected an operand");
        };
        match tok {
            Tok::Int(num) => {
                self.at += 1;
                let mut value: Rational = num.parse()?;
                let mut span = span;
                if fold {
                    if let (Some((Tok::Op('/'), _)), Some((Tok::Int(den), dspan))) =
                        (self.toks.get(self.at), self.toks.get(self.at + 1))
                    {
                        let den: Rational = den.parse()?;
                        if den.is_zero() {
                            self.at += 1;
                            return self.err("zero denominator");
                        }
                        value = value / den;
                        span.end = dspan.end;
                        self.at += 2;
                    }
                }
                self.atoms
                    .push((self.src[span.start..span.end].to_string(), span));
                Ok(Expr::Num(value))
            }
            Tok::Ident(name) => {
                let expr = self.symbol(&name)?;
                self.atoms.push((name, span));
                self.at += 1;
                if let Expr::Func(f, _) = expr {
                    if !self.eat('(') {
                        return self.err(format!("expected `(` after `{f}`"));
                    }
                    let arg = self.expr()?;
                    if !self.eat(')') {
                        return self.err("expected `)`");
                    }
                    return Ok(Expr::func(f, arg));
                }
                Ok(expr)
            }
            Tok::Op('(') => {
                self.at += 1;
                let inner = self.expr()?;
                if !self.eat(')') {
                    return self.err("expected `)`");
                }
                Ok(inner)
            }
            Tok::Op(c) => self.err(format!("unexpected `{c}`, expected an operand")),
        }
    }

    /// Resolve an identifier; functions come back as a placeholder
    /// application to be filled in by the caller.
    fn symbol(&self, name: &str) -> Result<Expr> {
        let forbid = |symbol: &str| -> Result<Expr> {
            Err(Error::Dialect {
                symbol: symbol.to_string(),
                dialect: self.dialect.name(),
            })
        };
        if let Ok(f) = name.parse::<Elementary>() {
            return Ok(Expr::func(f, Expr::Var));
        }
        match name {
            "w" if self.dialect == Dialect::MatrixExpr => forbid(name),
            "w" => Ok(Expr::Var),
            "h" if self.dialect == Dialect::ScalarSeries => forbid(name),
            "h" => Ok(Expr::Param),
            _ => match name.parse::<Generator>() {
                Ok(_) if self.dialect == Dialect::ScalarSeries => forbid(name),
                // Only the canonical spellings are accepted in source.
                Ok(g) if g.symbol() == name => Ok(Expr::Gen(g)),
                _ => Err(Error::UnknownSymbol(name.to_string())),
            },
        }
    }
}

pub fn parse_expression(src: &str, dialect: Dialect) -> Result<ParsedExpr> {
    let mut p = Parser {
        toks: lex(src)?,
        at: 0,
        src,
        dialect,
        atoms: Vec::new(),
    };
    let expr = p.expr()?;
    if p.at < p.toks.len() {
        return p.err("unexpected trailing input");
    }
    Ok(ParsedExpr {
        expr,
        source: src.to_string(),
        dialect,
        atoms: p.atoms,
    })
}

impl ParsedExpr {
    pub fn eval_matrix(&self, rep: &dyn GeneratorImages) -> Result<PolyMatrix> {
        self.expr.eval_matrix(rep)
    }

    pub fn eval_series(&self, order: usize) -> Result<WSeries> {
        self.expr.eval_series(order)
    }
}

impl fmt::Display for ParsedExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.expr)
    }
}
