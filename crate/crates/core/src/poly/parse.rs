//! Text format for polynomials and rational functions.
//!
//! Grammar (round-trips everything the printers emit):
//!   expr   := term (('+' | '-') term)*
//!   term   := factor (('*' | '/')? factor)*     (adjacency means '*')
//!   factor := ('-' | '+')* atom ('^' uint)*
//!   atom   := integer | variable | '(' expr ')'
//! Variables: `t` in the univariate context; `x`, `y` (aliases `a`, `b`)
//! in the bivariate one. Coefficients may be arbitrary rationals built
//! from integer literals and '/'.

use super::bipoly::BiPoly;
use super::hompoly::HomPoly;
use super::intpoly::IntPoly;
use super::ratfunc::RatFunc;
use super::PolyError;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use std::collections::BTreeMap;

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Int(BigInt),
    Var(char),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
}

fn tokenize(s: &str) -> Result<Vec<Tok>, PolyError> {
    let mut out = Vec::new();
    let bytes: Vec<char> = s.chars().collect();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        match c {
            ' ' | '\t' | '\n' | '\r' => i += 1,
            '+' => {
                out.push(Tok::Plus);
                i += 1;
            }
            '-' | '−' => {
                out.push(Tok::Minus);
                i += 1;
            }
            '*' | '·' => {
                out.push(Tok::Star);
                i += 1;
            }
            '/' => {
                out.push(Tok::Slash);
                i += 1;
            }
            '^' => {
                out.push(Tok::Caret);
                i += 1;
            }
            '(' => {
                out.push(Tok::LParen);
                i += 1;
            }
            ')' => {
                out.push(Tok::RParen);
                i += 1;
            }
            '0'..='9' => {
                let start = i;
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                let lit: String = bytes[start..i].iter().collect();
                out.push(Tok::Int(lit.parse::<BigInt>().expect("digits")));
            }
            't' | 'x' | 'y' | 'a' | 'b' => {
                out.push(Tok::Var(c));
                i += 1;
            }
            other => {
                return Err(PolyError::Parse {
                    position: i,
                    message: format!("unexpected character '{other}'"),
                })
            }
        }
    }
    Ok(out)
}

/// Expression values during evaluation: a rational function in up to two
/// formal variables, tracked as a fraction of rational-coefficient
/// bivariate polynomials. Univariate parses map `t` to the x slot.
#[derive(Debug, Clone)]
struct QFrac {
    num: BTreeMap<(u32, u32), BigRational>,
    den: BTreeMap<(u32, u32), BigRational>,
}

fn qp_const(c: BigRational) -> BTreeMap<(u32, u32), BigRational> {
    let mut m = BTreeMap::new();
    if !c.is_zero() {
        m.insert((0, 0), c);
    }
    m
}

fn qp_mul(
    a: &BTreeMap<(u32, u32), BigRational>,
    b: &BTreeMap<(u32, u32), BigRational>,
) -> BTreeMap<(u32, u32), BigRational> {
    let mut out: BTreeMap<(u32, u32), BigRational> = BTreeMap::new();
    for (&(i1, j1), c1) in a {
        for (&(i2, j2), c2) in b {
            let e = out
                .entry((i1 + i2, j1 + j2))
                .or_insert_with(BigRational::zero);
            *e += c1 * c2;
        }
    }
    out.retain(|_, c| !c.is_zero());
    out
}

fn qp_add(
    a: &BTreeMap<(u32, u32), BigRational>,
    b: &BTreeMap<(u32, u32), BigRational>,
) -> BTreeMap<(u32, u32), BigRational> {
    let mut out = a.clone();
    for (&k, c) in b {
        let e = out.entry(k).or_insert_with(BigRational::zero);
        *e += c;
    }
    out.retain(|_, c| !c.is_zero());
    out
}

fn qp_neg(a: &BTreeMap<(u32, u32), BigRational>) -> BTreeMap<(u32, u32), BigRational> {
    a.iter().map(|(&k, c)| (k, -c.clone())).collect()
}

impl QFrac {
    fn constant(c: BigRational) -> Self {
        QFrac {
            num: qp_const(c),
            den: qp_const(BigRational::one()),
        }
    }

    fn var(slot: u8) -> Self {
        let mut num = BTreeMap::new();
        let key = if slot == 0 { (1, 0) } else { (0, 1) };
        num.insert(key, BigRational::one());
        QFrac {
            num,
            den: qp_const(BigRational::one()),
        }
    }

    fn add(&self, o: &QFrac) -> QFrac {
        QFrac {
            num: qp_add(&qp_mul(&self.num, &o.den), &qp_mul(&o.num, &self.den)),
            den: qp_mul(&self.den, &o.den),
        }
    }

    fn neg(&self) -> QFrac {
        QFrac {
            num: qp_neg(&self.num),
            den: self.den.clone(),
        }
    }

    fn mul(&self, o: &QFrac) -> QFrac {
        QFrac {
            num: qp_mul(&self.num, &o.num),
            den: qp_mul(&self.den, &o.den),
        }
    }

    fn div(&self, o: &QFrac) -> Result<QFrac, PolyError> {
        if o.num.is_empty() {
            return Err(PolyError::DivisionByZero);
        }
        Ok(QFrac {
            num: qp_mul(&self.num, &o.den),
            den: qp_mul(&self.den, &o.num),
        })
    }

    fn pow(&self, e: i64) -> Result<QFrac, PolyError> {
        let mut acc = QFrac::constant(BigRational::one());
        let base = if e < 0 {
            QFrac {
                num: self.den.clone(),
                den: self.num.clone(),
            }
        } else {
            self.clone()
        };
        if e < 0 && base.den.is_empty() {
            return Err(PolyError::DivisionByZero);
        }
        for _ in 0..e.unsigned_abs() {
            acc = acc.mul(&base);
        }
        Ok(acc)
    }
}

struct Parser {
    toks: Vec<Tok>,
    pos: usize,
    bivariate: bool,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos)
    }

    fn next(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).cloned();
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    fn err<T>(&self, message: &str) -> Result<T, PolyError> {
        Err(PolyError::Parse {
            position: self.pos,
            message: message.to_string(),
        })
    }

    fn expr(&mut self) -> Result<QFrac, PolyError> {
        let mut acc = self.term()?;
        loop {
            match self.peek() {
                Some(Tok::Plus) => {
                    self.next();
                    acc = acc.add(&self.term()?);
                }
                Some(Tok::Minus) => {
                    self.next();
                    acc = acc.add(&self.term()?.neg());
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<QFrac, PolyError> {
        let mut acc = self.factor()?;
        loop {
            match self.peek() {
                Some(Tok::Star) => {
                    self.next();
                    acc = acc.mul(&self.factor()?);
                }
                Some(Tok::Slash) => {
                    self.next();
                    acc = acc.div(&self.factor()?)?;
                }
                // adjacency: `2t`, `3(t+1)`, `(t+1)(t-1)`
                Some(Tok::Int(_)) | Some(Tok::Var(_)) | Some(Tok::LParen) => {
                    acc = acc.mul(&self.factor()?);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn factor(&mut self) -> Result<QFrac, PolyError> {
        let mut sign = 1i32;
        while let Some(tok) = self.peek() {
            match tok {
                Tok::Minus => {
                    sign = -sign;
                    self.next();
                }
                Tok::Plus => {
                    self.next();
                }
                _ => break,
            }
        }
        let mut v = self.atom()?;
        while let Some(Tok::Caret) = self.peek() {
            self.next();
            // allow a sign on the exponent
            let mut esign = 1i64;
            while let Some(tok) = self.peek() {
                match tok {
                    Tok::Minus => {
                        esign = -esign;
                        self.next();
                    }
                    Tok::Plus => {
                        self.next();
                    }
                    _ => break,
                }
            }
            match self.next() {
                Some(Tok::Int(e)) => {
                    let e: i64 = e.try_into().map_err(|_| PolyError::Parse {
                        position: self.pos,
                        message: "exponent too large".into(),
                    })?;
                    v = v.pow(esign * e)?;
                }
                _ => return self.err("expected integer exponent after '^'"),
            }
        }
        if sign < 0 {
            v = v.neg();
        }
        Ok(v)
    }

    fn atom(&mut self) -> Result<QFrac, PolyError> {
        match self.next() {
            Some(Tok::Int(n)) => Ok(QFrac::constant(BigRational::from(n))),
            Some(Tok::Var(c)) => {
                if self.bivariate {
                    match c {
                        'x' | 'a' => Ok(QFrac::var(0)),
                        'y' | 'b' => Ok(QFrac::var(1)),
                        _ => self.err("expected variable x or y"),
                    }
                } else if c == 't' {
                    Ok(QFrac::var(0))
                } else {
                    self.err("expected variable t")
                }
            }
            Some(Tok::LParen) => {
                let v = self.expr()?;
                match self.next() {
                    Some(Tok::RParen) => Ok(v),
                    _ => self.err("missing ')'"),
                }
            }
            _ => self.err("expected a value"),
        }
    }
}

fn parse_to_frac(input: &str, bivariate: bool) -> Result<QFrac, PolyError> {
    let toks = tokenize(input)?;
    if toks.is_empty() {
        return Err(PolyError::Parse {
            position: 0,
            message: "empty input".into(),
        });
    }
    let mut p = Parser {
        toks,
        pos: 0,
        bivariate,
    };
    let v = p.expr()?;
    if p.pos != p.toks.len() {
        return p.err("trailing input");
    }
    Ok(v)
}

/// Clears rational coefficients of a univariate Q-polynomial map into an
/// IntPoly plus rational scale: poly = scale * intpoly.
fn qp_to_intpoly_univariate(
    m: &BTreeMap<(u32, u32), BigRational>,
) -> Result<(BigRational, IntPoly), PolyError> {
    if m.keys().any(|&(_, j)| j > 0) {
        return Err(PolyError::Parse {
            position: 0,
            message: "unexpected second variable".into(),
        });
    }
    if m.is_empty() {
        return Ok((BigRational::one(), IntPoly::zero()));
    }
    let deg = m.keys().map(|&(i, _)| i).max().unwrap() as usize;
    let mut lcm = BigInt::one();
    for c in m.values() {
        lcm = num_integer::lcm(lcm, c.denom().clone());
    }
    let mut coeffs = vec![BigInt::zero(); deg + 1];
    for (&(i, _), c) in m {
        coeffs[i as usize] = (c * BigRational::from(lcm.clone())).to_integer();
    }
    let p = IntPoly::new(coeffs);
    let content = p.signed_content();
    Ok((
        BigRational::new(content, lcm),
        p.primitive(),
    ))
}

/// Parses a univariate rational function in `t`.
pub fn parse_ratfunc(input: &str) -> Result<RatFunc, PolyError> {
    let f = parse_to_frac(input, false)?;
    let (sn, n) = qp_to_intpoly_univariate(&f.num)?;
    let (sd, d) = qp_to_intpoly_univariate(&f.den)?;
    if d.is_zero() || sd.is_zero() {
        return Err(PolyError::DivisionByZero);
    }
    if n.is_zero() || sn.is_zero() {
        return Ok(RatFunc::zero());
    }
    let mut out = RatFunc::from_frac(&n, &d)?;
    out.scalar *= sn / sd;
    Ok(out)
}

/// Parses an integer-coefficient univariate polynomial in `t`.
pub fn parse_intpoly(input: &str) -> Result<IntPoly, PolyError> {
    let r = parse_ratfunc(input)?;
    if r.is_zero() {
        return Ok(IntPoly::zero());
    }
    if r.den.deg() != 0 || !r.scalar.denom().is_one() {
        return Err(PolyError::NotAPolynomial);
    }
    Ok(r.num.scale(r.scalar.numer()))
}

/// Parses an integer-coefficient bivariate polynomial in `x`, `y`
/// (aliases `a`, `b`).
pub fn parse_bipoly(input: &str) -> Result<BiPoly, PolyError> {
    let f = parse_to_frac(input, true)?;
    // the denominator must be a nonzero constant
    if f.den.len() != 1 || !f.den.contains_key(&(0, 0)) {
        return Err(PolyError::NotAPolynomial);
    }
    let d = f.den[&(0, 0)].clone();
    let mut out = BiPoly::zero();
    for (&k, c) in &f.num {
        let v = c / &d;
        if !v.denom().is_one() {
            return Err(PolyError::NotAPolynomial);
        }
        out.insert(k, v.to_integer());
    }
    Ok(out)
}

/// Parses a homogeneous integer polynomial in `x`, `y`.
pub fn parse_hompoly(input: &str) -> Result<HomPoly, PolyError> {
    parse_bipoly(input)?.to_hompoly()
}

// ---------------------------------------------------------------------------
// printers

/// Canonical `c0 + c1*t + c2*t^2` form over any integer-like coefficients.
pub fn poly_to_string(coeffs: &[BigInt], var: &str) -> String {
    let ratios: Vec<BigRational> = coeffs.iter().map(|c| BigRational::from(c.clone())).collect();
    qpoly_to_string(&ratios, var)
}

pub fn qpoly_to_string(coeffs: &[BigRational], var: &str) -> String {
    let mut parts: Vec<String> = Vec::new();
    for (i, c) in coeffs.iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        let mag = c.abs();
        let body = if i == 0 {
            format!("{mag}")
        } else {
            let v = if i == 1 {
                var.to_string()
            } else {
                format!("{var}^{i}")
            };
            if mag.is_one() {
                v
            } else {
                format!("{mag}*{v}")
            }
        };
        if parts.is_empty() {
            parts.push(if c.is_negative() {
                format!("-{body}")
            } else {
                body
            });
        } else if c.is_negative() {
            parts.push(format!("- {body}"));
        } else {
            parts.push(format!("+ {body}"));
        }
    }
    if parts.is_empty() {
        "0".to_string()
    } else {
        parts.join(" ")
    }
}

pub fn ratfunc_to_string(f: &RatFunc) -> String {
    if f.is_zero() {
        return "0".to_string();
    }
    let num_q: Vec<BigRational> = f
        .num
        .coeffs
        .iter()
        .map(|c| BigRational::from(c.clone()) * &f.scalar)
        .collect();
    let num_s = qpoly_to_string(&num_q, "t");
    if f.den.deg() == 0 {
        num_s
    } else {
        format!("({num_s})/({})", poly_to_string(&f.den.coeffs, "t"))
    }
}

pub fn bipoly_to_string(p: &BiPoly) -> String {
    if p.is_zero() {
        return "0".to_string();
    }
    // highest x-power first, then highest y
    let mut keys: Vec<(u32, u32)> = p.terms.keys().cloned().collect();
    keys.sort_by(|a, b| b.cmp(a));
    let mut parts: Vec<String> = Vec::new();
    for k in keys {
        let c = &p.terms[&k];
        let mag = c.abs();
        let mut pieces: Vec<String> = Vec::new();
        if !mag.is_one() || k == (0, 0) {
            pieces.push(format!("{mag}"));
        }
        let (i, j) = k;
        if i == 1 {
            pieces.push("x".into());
        } else if i > 1 {
            pieces.push(format!("x^{i}"));
        }
        if j == 1 {
            pieces.push("y".into());
        } else if j > 1 {
            pieces.push(format!("y^{j}"));
        }
        let body = pieces.join("*");
        if parts.is_empty() {
            parts.push(if c.is_negative() {
                format!("-{body}")
            } else {
                body
            });
        } else if c.is_negative() {
            parts.push(format!("- {body}"));
        } else {
            parts.push(format!("+ {body}"));
        }
    }
    parts.join(" ")
}

pub fn hompoly_to_string(p: &HomPoly) -> String {
    let mut b = BiPoly::zero();
    let d = p.degree() as u32;
    for (i, c) in p.coeffs().iter().enumerate() {
        b.insert((i as u32, d - i as u32), c.clone());
    }
    bipoly_to_string(&b)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_ratfuncs() {
        let f = parse_ratfunc("1 - 1728*t").unwrap();
        // canonical form: positive-leading primitive numerator, sign in
        // the scalar
        assert_eq!(f.num, IntPoly::from_i64(&[-1, 1728]));
        assert_eq!(f.scalar, BigRational::from(BigInt::from(-1)));
        let g = parse_ratfunc("(1 - 1728*t)^2").unwrap();
        assert_eq!(g, f.mul(&f));
        let h = parse_ratfunc("t^-2 (t^-2 - 1728)").unwrap();
        let alt = parse_ratfunc("(1 - 1728 t^2) / t^4").unwrap();
        assert_eq!(h, alt);
        assert_eq!(parse_ratfunc("1/t").unwrap(), RatFunc::var().pow(-1).unwrap());
    }

    #[test]
    fn parses_rational_coefficients() {
        let f = parse_ratfunc("1 + 8/3*t + t^2").unwrap();
        assert_eq!(f.den, IntPoly::one());
        assert_eq!(f.num, IntPoly::from_i64(&[3, 8, 3]));
        assert_eq!(
            f.scalar,
            BigRational::new(BigInt::from(1), BigInt::from(3))
        );
    }

    #[test]
    fn parses_bipoly_and_hompoly() {
        let p = parse_bipoly("x*y*(x + y)").unwrap();
        assert_eq!(p.eval_i128(2, 3).unwrap(), 30);
        let h = parse_hompoly("x^3 + 2*y^3").unwrap();
        assert_eq!(h.degree(), 3);
        assert!(parse_hompoly("x^2 + y").is_err());
        let ab = parse_bipoly("a^2 + b^4").unwrap();
        assert_eq!(ab.eval_i128(3, 2).unwrap(), 25);
    }

    #[test]
    fn printer_roundtrip() {
        for s in [
            "1 - 1728*t",
            "(1 - 1728*t^2)/(t^4)",
            "3 + 9*t - 6*t^2 + t^3",
            "t",
            "0",
            "-5",
        ] {
            let f = parse_ratfunc(s).unwrap();
            let printed = ratfunc_to_string(&f);
            let g = parse_ratfunc(&printed).unwrap();
            assert_eq!(f, g, "roundtrip of {s} via {printed}");
        }
        for s in ["x^3 + 2*y^3", "x*y", "-3*x + y", "13*x^2 + 12*x*y + 3*y^2"] {
            let p = parse_hompoly(s).unwrap();
            let printed = hompoly_to_string(&p);
            let q = parse_hompoly(&printed).unwrap();
            assert_eq!(p, q, "roundtrip of {s} via {printed}");
        }
    }

    #[test]
    fn parse_errors_flag_position() {
        assert!(parse_ratfunc("1 + % + 2").is_err());
        assert!(parse_ratfunc("(1 + t").is_err());
        assert!(parse_ratfunc("").is_err());
        assert!(parse_ratfunc("x + 1").is_err()); // wrong variable
        assert!(parse_intpoly("1/t").is_err()); // not a polynomial
    }
}
