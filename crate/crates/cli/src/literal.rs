//! Polynomial literals.
//!
//! Grammar (whitespace is ignored):
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := unary (('*' | '/') unary)*
//! unary  := ('+' | '-') unary | power
//! power  := atom ('^' integer)?
//! atom   := number | name | '(' expr ')'
//! ```
//!
//! Numbers are exact decimals (`0.25`, `1e-3`, `3`). Names are `hbar`, the
//! imaginary unit `i`, and the canonical variables: `q`, `p` for one degree
//! of freedom, `q1..qn`, `p1..pn` in general, with `x1..xn`, `y1..yn` as
//! aliases. Division is only allowed by nonzero constants.

use std::fmt::Write as _;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use qchar_core::poly::gauss;
use qchar_core::{Gaussian, PolySymbol, Rational};

use crate::error::CliError;

const MAX_EXPONENT: u32 = 64;

#[derive(Debug, Clone, PartialEq)]
enum Token {
    Num(Rational),
    Name(String),
    Op(char),
}

fn lex(src: &str) -> Result<Vec<(usize, Token)>, String> {
    let chars: Vec<char> = src.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() || c == '.' {
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
            let text: String = chars[start..i].iter().collect();
            out.push((start, Token::Num(parse_decimal(&text).ok_or_else(|| format!("bad number '{text}' at {start}"))?)));
        } else if c.is_ascii_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            out.push((start, Token::Name(chars[start..i].iter().collect())));
        } else if "+-*/^()".contains(c) {
            out.push((i, Token::Op(c)));
            i += 1;
        } else {
            return Err(format!("unexpected character '{c}' at {i}"));
        }
    }
    Ok(out)
}

/// Exact value of a decimal literal such as `12.5e-3`.
pub fn parse_decimal(text: &str) -> Option<Rational> {
    let (mantissa, exp) = match text.find(['e', 'E']) {
        Some(k) => (&text[..k], text[k + 1..].parse::<i32>().ok()?),
        None => (text, 0),
    };
    let (int, frac) = match mantissa.split_once('.') {
        Some((a, b)) => (a, b),
        None => (mantissa, ""),
    };
    if int.is_empty() && frac.is_empty() || frac.contains('.') {
        return None;
    }
    let digits = format!("{int}{frac}");
    let num: BigInt = digits.parse().ok()?;
    let scale = exp - frac.len() as i32;
    let ten = BigInt::from(10);
    Some(if scale >= 0 {
        Rational::from_integer(num * num_traits::pow(ten, scale as usize))
    } else {
        Rational::new(num, num_traits::pow(ten, (-scale) as usize))
    })
}

struct Parser<'a> {
    tokens: &'a [(usize, Token)],
    pos: usize,
    dim: usize,
}

impl Parser<'_> {
    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.pos).map(|t| &t.1)
    }

    fn at(&self) -> usize {
        self.tokens.get(self.pos).map_or(usize::MAX, |t| t.0)
    }

    fn err<T>(&self, msg: &str) -> Result<T, String> {
        match self.tokens.get(self.pos) {
            Some((p, _)) => Err(format!("{msg} at {p}")),
            None => Err(format!("{msg} at end of input")),
        }
    }

    fn expr(&mut self) -> Result<PolySymbol, String> {
        let mut acc = self.term()?;
        while let Some(Token::Op(c @ ('+' | '-'))) = self.peek() {
            let c = *c;
            self.pos += 1;
            let t = self.term()?;
            acc = if c == '+' { &acc + &t } else { &acc - &t };
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<PolySymbol, String> {
        let mut acc = self.unary()?;
        while let Some(Token::Op(c @ ('*' | '/'))) = self.peek() {
            let c = *c;
            self.pos += 1;
            let at = self.at();
            let rhs = self.unary()?;
            acc = if c == '*' {
                &acc * &rhs
            } else {
                let k = constant_value(&rhs).ok_or_else(|| format!("division by a non-constant at {at}"))?;
                if k.is_zero() {
                    return Err(format!("division by zero at {at}"));
                }
                acc.scale(&(Gaussian::one() / k))
            };
        }
        Ok(acc)
    }

    fn unary(&mut self) -> Result<PolySymbol, String> {
        match self.peek() {
            Some(Token::Op('-')) => {
                self.pos += 1;
                Ok(-&self.unary()?)
            }
            Some(Token::Op('+')) => {
                self.pos += 1;
                self.unary()
            }
            _ => self.power(),
        }
    }

    fn power(&mut self) -> Result<PolySymbol, String> {
        let base = self.atom()?;
        if let Some(Token::Op('^')) = self.peek() {
            self.pos += 1;
            match self.peek() {
                Some(Token::Num(r)) if r.is_integer() && !r.is_negative() => {
                    let e = r.to_integer().to_string().parse::<u32>().ok().filter(|e| *e <= MAX_EXPONENT);
                    let Some(e) = e else {
                        return self.err(&format!("exponent above {MAX_EXPONENT}"));
                    };
                    self.pos += 1;
                    return Ok(base.pow(e));
                }
                _ => return self.err("expected a non-negative integer exponent"),
            }
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<PolySymbol, String> {
        match self.peek().cloned() {
            Some(Token::Num(r)) => {
                self.pos += 1;
                Ok(PolySymbol::constant(self.dim, gauss(r, Rational::zero())))
            }
            Some(Token::Name(name)) => {
                let v = self.name(&name)?;
                self.pos += 1;
                Ok(v)
            }
            Some(Token::Op('(')) => {
                self.pos += 1;
                let v = self.expr()?;
                if self.peek() != Some(&Token::Op(')')) {
                    return self.err("expected ')'");
                }
                self.pos += 1;
                Ok(v)
            }
            _ => self.err("expected a number, name or '('"),
        }
    }

    fn name(&self, name: &str) -> Result<PolySymbol, String> {
        let dim = self.dim;
        let n = dim / 2;
        match name {
            "hbar" => return Ok(PolySymbol::hbar(dim)),
            "i" => return Ok(PolySymbol::constant(dim, gauss(Rational::zero(), Rational::one()))),
            _ => {}
        }
        let (head, tail) = name.split_at(1);
        let momentum = match head {
            "q" | "x" => false,
            "p" | "y" => true,
            _ => return self.err(&format!("unknown name '{name}'")),
        };
        let a = if tail.is_empty() {
            if n != 1 {
                return self.err(&format!("'{name}' needs an index when n = {n}"));
            }
            1
        } else {
            match tail.parse::<usize>() {
                Ok(a) if (1..=n).contains(&a) => a,
                _ => return self.err(&format!("variable '{name}' out of range for n = {n}")),
            }
        };
        Ok(if momentum { PolySymbol::p(dim, a - 1) } else { PolySymbol::q(dim, a - 1) })
    }
}

fn constant_value(s: &PolySymbol) -> Option<Gaussian> {
    if s.is_zero() {
        return Some(Gaussian::zero());
    }
    if s.total_degree() == 0 && s.max_hbar_power() == 0 {
        Some(s.coefficient(&vec![0; s.dim()], 0))
    } else {
        None
    }
}

/// Parses a literal over `n` degrees of freedom.
pub fn parse_polynomial(src: &str, n: usize) -> Result<PolySymbol, CliError> {
    let fail = |m: String| CliError::Parse(format!("polynomial '{src}': {m}"));
    if n == 0 {
        return Err(fail("n must be positive".into()));
    }
    let tokens = lex(src).map_err(fail)?;
    if tokens.is_empty() {
        return Err(fail("empty literal".into()));
    }
    let mut p = Parser {
        tokens: &tokens,
        pos: 0,
        dim: 2 * n,
    };
    let v = p.expr().map_err(fail)?;
    if p.pos != tokens.len() {
        return Err(fail(p.err::<()>("unexpected trailing input").unwrap_err()));
    }
    Ok(v)
}

fn rational_text(r: &Rational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Canonical literal text that [`parse_polynomial`] reads back exactly.
pub fn format_polynomial(s: &PolySymbol) -> String {
    let dim = s.dim();
    let mut out = String::new();
    for (m, h, c) in s.terms() {
        let mut factors = Vec::new();
        for (k, &e) in m.exponents().iter().enumerate() {
            let name = PolySymbol::variable_name(dim, k);
            match e {
                0 => {}
                1 => factors.push(name),
                e => factors.push(format!("{name}^{e}")),
            }
        }
        match h {
            0 => {}
            1 => factors.push("hbar".into()),
            h => factors.push(format!("hbar^{h}")),
        }
        let (negative, coeff) = if c.im.is_zero() {
            let neg = c.re.is_negative();
            let mag = c.re.abs();
            (neg, if mag.is_one() && !factors.is_empty() { None } else { Some(rational_text(&mag)) })
        } else if c.re.is_zero() {
            let neg = c.im.is_negative();
            let mag = c.im.abs();
            let t = if mag.is_one() { "i".to_string() } else { format!("{}*i", rational_text(&mag)) };
            (neg, Some(t))
        } else {
            let sign = if c.im.is_negative() { '-' } else { '+' };
            (false, Some(format!("({} {sign} {}*i)", rational_text(&c.re), rational_text(&c.im.abs()))))
        };
        if out.is_empty() {
            if negative {
                out.push('-');
            }
        } else {
            out.push_str(if negative { " - " } else { " + " });
        }
        let body: Vec<String> = coeff.into_iter().chain(factors).collect();
        let _ = write!(out, "{}", body.join("*"));
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use qchar_core::poly::{gauss_rat, rat};

    #[test]
    fn parses_basic_forms() {
        let q = PolySymbol::q(2, 0);
        let p = PolySymbol::p(2, 0);
        let h = parse_polynomial("p^2/2 + q^4/4", 1).unwrap();
        assert_eq!(h, &p.pow(2).scale(&gauss_rat(1, 2)) + &q.pow(4).scale(&gauss_rat(1, 4)));
        assert_eq!(parse_polynomial("-(q - p)^2", 1).unwrap(), -&(&q - &p).pow(2));
        assert_eq!(parse_polynomial("0.25*q", 1).unwrap(), q.scale(&gauss_rat(1, 4)));
        assert_eq!(parse_polynomial("1e-2", 1).unwrap(), PolySymbol::constant(2, gauss(rat(1, 100), rat(0, 1))));
        assert_eq!(parse_polynomial("x2*y1", 2).unwrap(), &PolySymbol::q(4, 1) * &PolySymbol::p(4, 0));
        assert_eq!(parse_polynomial("hbar^2*q", 1).unwrap(), q.mul_hbar(2));
    }

    #[test]
    fn rejects_bad_input() {
        for bad in ["", "q +", "q/p", "q^-1", "q3", "z", "q/0", "(q", "q)", "1..2", "q $ p"] {
            assert!(matches!(parse_polynomial(bad, 1), Err(CliError::Parse(_))), "{bad}");
        }
        assert!(parse_polynomial("q", 2).is_err());
    }

    #[test]
    fn round_trip() {
        for src in [
            "q^2 + p^2",
            "-3/7*q*p^3 + 2*hbar^2 - 5",
            "(1/2 + 3/4*i)*q + i*p - 2*i",
            "0",
            "-q",
        ] {
            let s = parse_polynomial(src, 1).unwrap();
            let text = format_polynomial(&s);
            assert_eq!(parse_polynomial(&text, 1).unwrap(), s, "{src} -> {text}");
        }
        let s = parse_polynomial("q1*p2^2 - x2/3", 2).unwrap();
        assert_eq!(parse_polynomial(&format_polynomial(&s), 2).unwrap(), s);
    }

    #[test]
    fn exact_decimals() {
        assert_eq!(parse_decimal("12.5e-3"), Some(rat(1, 80)));
        assert_eq!(parse_decimal(".5"), Some(rat(1, 2)));
        assert_eq!(parse_decimal("3E2"), Some(rat(300, 1)));
        assert_eq!(parse_decimal("."), None);
    }
}
